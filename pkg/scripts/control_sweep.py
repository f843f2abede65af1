"""Size of the negative-control signals as the injected perturbation grows."""
import argparse

from quadric_backlund import verification


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=float, nargs="+", default=[1e-6, 1e-5, 1e-4, 1e-3, 1e-2])
    args = ap.parse_args()
    for size in args.sizes:
        recs = verification.check_negative_controls(size)
        print(f"{size:8.1e}  " + "  ".join(f"{r.name.split(':')[0][10:]}={r.max_residual:.2e}" for r in recs))


if __name__ == "__main__":
    main()
