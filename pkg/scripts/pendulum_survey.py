"""Survey the pendulum energy constant c: distance to the sigma = 1 soliton and whether the
profile constant can be normalized to 1."""
import argparse

import numpy as np

from quadric_backlund import pendulum_solitons as pe


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta0", type=float, default=0.5)
    ap.add_argument("--cs", type=float, nargs="+", default=[-1.0, -0.5, 0.0, 0.5, 1.0])
    ap.add_argument("--a1", type=float, default=2.0)
    args = ap.parse_args()
    a1, a2 = args.a1, args.a1 / (1 - args.a1)
    v = np.linspace(0.0, 0.4, 401)
    print(f"{'c':>6s} {'soliton dist':>13s} {'drift rate':>11s} {'max eig of K':>13s}")
    for c in args.cs:
        if pe.energy_radicand(args.theta0, c) <= 0:
            print(f"{c:6.2f}  no real orbit through theta0")
            continue
        p = pe.pendulum_integrate(c, args.theta0, 1, v)
        lam = np.linalg.eigvalsh(pe.normalization_form(p, a1, a2))[-1]
        print(f"{c:6.2f} {pe.soliton_match(p)[0]:13.3e} {pe.energy_drift_rate(c, args.theta0, 1, v):11.2e} {lam:13.3e}")


if __name__ == "__main__":
    main()
