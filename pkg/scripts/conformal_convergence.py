"""Truncation error of the Lee form and coclosure residual for e^{3f} omega0 versus the work cutoff."""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from g2strom.g2 import standard_g2_form
from g2strom.torus import FourierField, apply_function, d, fernandez_gray, lee_form, multiply


@dataclass
class Config:
    amplitudes: list = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.4])
    cutoffs: list = field(default_factory=lambda: [2, 4, 6, 8, 10, 12])
    output: str | None = None


def conformal(eps: float, K: int) -> tuple[FourierField, FourierField]:
    f = FourierField.trig((1, 0, 0, 0, 0, 0, 0), sin=np.array([eps]), degree=0)
    w0 = FourierField.constant(standard_g2_form().omega)
    return multiply(apply_function(lambda v: np.exp(3 * v), f, K), w0), f


def run(cfg: Config) -> list[dict]:
    rows = []
    for eps in cfg.amplitudes:
        for K in cfg.cutoffs:
            omega, f = conformal(eps, K)
            lee_err = (lee_form(omega, K) - 4.0 * d(f)).truncate(K).l2_norm()
            rep = fernandez_gray(omega, work_cutoff=K)
            rows.append({"eps": eps, "cutoff": K, "lee_error": lee_err,
                         "coclosure": rep.norms["coclosure_residual"], "verdict": rep.verdict})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--amplitudes", type=float, nargs="+", default=Config().amplitudes)
    ap.add_argument("--cutoffs", type=int, nargs="+", default=Config().cutoffs)
    ap.add_argument("--output")
    cfg = Config(**vars(ap.parse_args()))
    rows = run(cfg)
    print(f"{'eps':>6} {'K':>3} {'|theta-4df|':>12} {'coclosure':>12}  verdict")
    for r in rows:
        print(f"{r['eps']:6.2f} {r['cutoff']:3d} {r['lee_error']:12.3e} {r['coclosure']:12.3e}  {r['verdict']}")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()
