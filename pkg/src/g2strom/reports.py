"""Run configuration, check records and schema-validated JSON reports."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from . import __version__

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"
EXIT_CODES = {PASS: 0, FAIL: 1, ERROR: 2}

DEFAULT_TOL = {
    "verify-algebra": 1e-12,
    "symbols": 1e-9,
    "moduli": 1e-9,
    "torsion": 1e-8,
    "courant": 1e-10,
}


@dataclass
class RunConfig:
    command: str
    tol: float | None = None
    rank_tol: float = 1e-9
    seed: int = 42
    cutoff: int = 1
    lie: str = "su2"
    samples: int = 1000
    input: str | None = None
    output: str | None = None
    perturb_bianchi: list = field(default_factory=list)
    timing: bool = False

    def __post_init__(self):
        if self.tol is None:
            self.tol = DEFAULT_TOL[self.command]
        if not (self.tol > 0 and self.rank_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        for k in ("command", "output", "timing"):
            d.pop(k)
        d["perturb_bianchi"] = [float(x) for x in self.perturb_bianchi]
        return d


@dataclass
class Check:
    name: str
    status: str
    payload: dict = field(default_factory=dict)

    @classmethod
    def threshold(cls, name: str, ok: bool, **payload) -> Check:
        return cls(name, PASS if ok else FAIL, payload)


@dataclass
class Report:
    command: str
    config: RunConfig
    checks: list = field(default_factory=list)
    wall_time: float | None = None

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if ERROR in states:
            return ERROR
        if FAIL in states or not self.checks:
            return FAIL
        return PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": __version__,
            "config": self.config.echo(),
            "checks": [{"name": c.name, "status": c.status, "payload": c.payload} for c in self.checks],
            "status": self.status,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        obj = _plain(self.to_dict())
        validate(obj)
        return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _plain(x):
    """Convert numpy scalars/arrays to JSON types; non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def schema() -> dict:
    return json.loads(resources.files("g2strom").joinpath("report_schema.json").read_text())


def validate(obj: dict) -> None:
    jsonschema.validate(obj, schema())
