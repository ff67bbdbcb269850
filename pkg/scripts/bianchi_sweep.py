"""D1 (Jacobi) residual of the twisted Dorfman bracket as the Bianchi identity is violated by eps."""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from g2strom.courant import AlgebroidData, bianchi_sweep, twisted_example
from g2strom.lie import by_name


@dataclass
class Config:
    eps: list = field(default_factory=lambda: [0.0, 0.025, 0.05, 0.1, 0.2, 0.4])
    lie: str = "su2"
    background: str = "flat"
    sections: int = 10
    seed: int = 0
    output: str | None = None


def run(cfg: Config) -> list[dict]:
    lie = by_name(cfg.lie)
    alg = AlgebroidData.flat(lie) if cfg.background == "flat" else twisted_example(lie)
    return [asdict(p) for p in bianchi_sweep(alg, cfg.eps, cfg.seed, cfg.sections)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=Config().eps)
    ap.add_argument("--lie", default="su2")
    ap.add_argument("--background", choices=["flat", "twisted"], default="flat")
    ap.add_argument("--sections", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output")
    cfg = Config(**vars(ap.parse_args()))
    rows = run(cfg)
    print(f"{'eps':>7} {'|dH-c(F^F)|':>12} {'D1':>10} {'D1/eps':>9}")
    for r in rows:
        ratio = r["d1_residual"] / r["eps"] if r["eps"] else float("nan")
        print(f"{r['eps']:7.3f} {r['bianchi_residual']:12.3e} {r['d1_residual']:10.3e} {ratio:9.2f}")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()
