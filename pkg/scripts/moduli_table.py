"""H^1 of each deformation complex at the flat base, by Lie algebra and Fourier cutoff."""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from g2strom.lie import by_name
from g2strom.moduli import COMPLEXES, BasePoint, cohomology_dimension


@dataclass
class Config:
    lies: list = field(default_factory=lambda: ["trivial", "su2"])
    cutoffs: list = field(default_factory=lambda: [1])
    complexes: list = field(default_factory=lambda: list(COMPLEXES))
    rank_tol: float = 1e-9
    output: str | None = None


def run(cfg: Config) -> list[dict]:
    rows = []
    for name in cfg.lies:
        base = BasePoint.flat(by_name(name))
        for K in cfg.cutoffs:
            for which in cfg.complexes:
                t0 = time.perf_counter()
                res = cohomology_dimension(base, K, which, cfg.rank_tol)
                rows.append({"lie": name, "cutoff": K, "complex": which, "H1": res.total_H1,
                             "max_complex_residual": res.max_complex_residual,
                             "max_containment_angle": res.max_containment_angle,
                             "seconds": time.perf_counter() - t0})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lies", nargs="+", default=Config().lies)
    ap.add_argument("--cutoffs", type=int, nargs="+", default=Config().cutoffs)
    ap.add_argument("--complexes", nargs="+", default=Config().complexes, choices=COMPLEXES)
    ap.add_argument("--rank-tol", type=float, default=1e-9)
    ap.add_argument("--output")
    cfg = Config(**vars(ap.parse_args()))
    print(f"{'lie':>8} {'K':>2} {'complex':>15} {'H1':>4} {'|LP|':>9} {'angle':>9} {'s':>6}")
    rows = run(cfg)
    for r in rows:
        print(f"{r['lie']:>8} {r['cutoff']:2d} {r['complex']:>15} {r['H1']:4d} "
              f"{r['max_complex_residual']:9.1e} {r['max_containment_angle']:9.1e} {r['seconds']:6.1f}")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()
