"""PDE residual of the closed-form 1-solitons against the grid step, for the four kinds."""
import argparse
import math

from quadric_backlund.sg_family import EquationKind, GridSpec, SpectralParam, one_soliton, pde_residual

CASES = {
    EquationKind.HYPERBOLIC_SINE: (SpectralParam(2.0), 0.1, (-1.0, 1.0)),
    EquationKind.HYPERBOLIC_SINH: (SpectralParam(2.0), -3.0, (-1.0, -0.5)),
    EquationKind.ELLIPTIC_SINE: (SpectralParam.unit(math.atan(0.7)), 0.1, (-1.0, 1.0)),
    EquationKind.ELLIPTIC_SINH: (SpectralParam.unit(math.atan(0.7)), -3.0, (-1.0, -0.5)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=float, nargs="+", default=[0.04, 0.02, 0.01, 0.005])
    args = ap.parse_args()
    print(f"{'kind':6s} {'h':>8s} {'residual':>12s} {'ratio':>7s}")
    for kind, (sp, c1, (lo, hi)) in CASES.items():
        prev = None
        for h in args.steps:
            r = pde_residual(one_soliton(kind, sp, c1, 1, GridSpec.square(lo, hi, h))).max_abs(interior=True)
            ratio = f"{prev / r:7.3f}" if prev else " " * 7
            print(f"{kind.value:6s} {h:8.4f} {r:12.4e} {ratio}")
            prev = r


if __name__ == "__main__":
    main()
