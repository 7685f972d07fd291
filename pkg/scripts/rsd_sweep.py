"""Scan E_k on the unit arc for k = 4, 6, ..., K and tabulate the results.

For every weight the table gives the number of located zeros, the valence
residual and, up to weight 40, the Sturm count of P_{E_k} on [0, 1728].

    python3 scripts/rsd_sweep.py --max-weight 60 --csv rsd.csv
"""
import argparse
import csv
import sys
import time

from serrezeros import RunConfig
from serrezeros.arcs import scan_zeros, valence_audit
from serrezeros.generators import eisenstein
from serrezeros.jpoly import decompose, sturm_count


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-weight", type=int, default=60)
    ap.add_argument("--sturm-max", type=int, default=40)
    ap.add_argument("--truncation", type=int, default=1024)
    ap.add_argument("--csv", help="write the table here as well as to stdout")
    args = ap.parse_args(argv)

    cfg = RunConfig(truncation=args.truncation)
    settings = cfg.scan_settings()
    rows = []
    for k in range(4, args.max_weight + 1, 2):
        t0 = time.perf_counter()
        f = eisenstein(k, cfg.truncation)
        zeros = scan_zeros(f, 1, settings)
        audit = valence_audit(f, settings, zeros)
        sturm = ""
        if k <= args.sturm_max:
            poly = decompose(f).poly
            sturm = "0" if poly.degree < 1 else str(sturm_count(poly, 0, 1728).count)
        widest = max((z.bracket_width for z in zeros if not z.endpoint), default=0.0)
        rows.append({"k": k, "budget": str(audit.budget), "zeros": len(zeros),
                     "residual": str(audit.residual), "status": audit.status,
                     "sturm_roots": sturm, "widest_bracket": f"{widest:.1e}",
                     "seconds": f"{time.perf_counter() - t0:.2f}"})
        print("  ".join(f"{key}={val}" for key, val in rows[-1].items()), flush=True)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0 if all(r["residual"] == "0" for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
