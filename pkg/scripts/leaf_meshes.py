"""Write OBJ meshes of a Peterson seed and its first three transformed leaves."""
import argparse
from pathlib import Path

from quadric_backlund import cli_io


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--eps", type=int, default=1, choices=(1, -1))
    ap.add_argument("--grid", default="0,0.5,0.005,0.005,61,61")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    base = ["--eps", str(args.eps), f"--grid={args.grid}"]
    codes = [cli_io.main(["peterson", *base, "--out", str(args.outdir / "seed")])]
    for k in (1, 2, 3):
        codes.append(cli_io.main(["leaf", *base, "--iterate", str(k), "--out", str(args.outdir / f"leaf{k}")]))
    for path in sorted(args.outdir.glob("*.obj")):
        print(path)
    raise SystemExit(max(codes))


if __name__ == "__main__":
    main()
