"""Finite-difference check of the arc derivative identity along each arc.

Prints the central-difference residual at h = 1e-5 on an evenly spaced set of
points per arc, showing where the truncation error |F'''| h^2 / 6 grows near
elliptic corners.

    python3 scripts/identity_residuals.py --level 7 --points 20
"""
import argparse
import sys

from serrezeros.arcs import derivative_identity_check
from serrezeros.generators import eisenstein, fricke_eisenstein
from serrezeros.geometry import domain_spec


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, default=7)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--h", type=float, default=1e-5)
    args = ap.parse_args(argv)

    p = args.level
    f = eisenstein(4, 256) if p == 1 else fricke_eisenstein(4, p, 256)
    for arc in domain_spec(p).arcs:
        lo, hi = float(arc.theta_lo), float(arc.theta_hi)
        for i in range(args.points):
            t = (i + 0.5) / args.points
            th = lo + t * (hi - lo)
            r = derivative_identity_check(f, arc.arc_id, th, args.h).residual
            flag = "  > 1e-8" if r >= 1e-8 else ""
            print(f"arc {arc.arc_id}  {t:5.1%}  theta={th:.6f}  residual={r:.3e}{flag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
