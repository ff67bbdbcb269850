"""Write the example field files used by the torsion and courant commands."""
import argparse
from pathlib import Path

import numpy as np

from g2strom.courant import twisted_example
from g2strom.fieldio import save_bundle, save_field
from g2strom.g2 import standard_g2_form
from g2strom.lie import su2
from g2strom.torus import FourierField, apply_function, multiply


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "fields"))
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    g2 = standard_g2_form()
    w0 = FourierField.constant(g2.omega)
    zero = FourierField.constant(np.zeros(1), degree=0)

    save_field(w0, out / "omega0.json")
    save_bundle(out / "flat_solution.json", omega=w0, phi=FourierField.constant(np.array([0.3]), degree=0))

    e1 = (1, 0, 0, 0, 0, 0, 0)
    f = FourierField.trig(e1, sin=np.array([args.eps]), degree=0)
    conformal = multiply(apply_function(lambda v: np.exp(3 * v), f, 10), w0)
    save_field(conformal, out / "conformal.json")
    save_bundle(out / "conformal_with_dilaton.json", omega=conformal, phi=-1.0 * f)

    rng = np.random.default_rng(args.seed)
    beta27 = g2.projector(3, 27) @ rng.normal(size=35)
    pert = w0 + FourierField.trig(e1, cos=args.eps * beta27 / np.linalg.norm(beta27), degree=3)
    save_bundle(out / "perturbed_27.json", omega=pert, phi=zero)
    generic = w0 + FourierField.trig((1, 0, 1, 0, 0, 0, 0), cos=args.eps * rng.normal(size=35) / 6, degree=3)
    save_field(generic, out / "generic.json")

    alg = twisted_example(su2())
    save_bundle(out / "twisted_algebroid.json", H0=alg.H0, theta0=alg.theta0)
    (out / "corrupt.json").write_text((out / "omega0.json").read_text()[:120])
    for p in sorted(out.iterdir()):
        print(p)


if __name__ == "__main__":
    main()
