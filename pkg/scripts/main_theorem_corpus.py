"""Run the level-1 and Fricke corpus and write per-entry JSON plus a summary.

    python3 scripts/main_theorem_corpus.py --out-dir results --workers 4
"""
import argparse
import json
import sys
from pathlib import Path

from serrezeros import RunConfig
from serrezeros.corpus import fricke_entries, level1_entries, run_corpus, summary_rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iterates", type=int, default=5)
    ap.add_argument("--levels", default="2,3,5,7", help="Fricke levels, alongside level 1")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", default="corpus_results")
    args = ap.parse_args(argv)

    levels = tuple(int(x) for x in args.levels.split(",") if x)
    entries = level1_entries(args.iterates) + fricke_entries(levels)
    results = run_corpus(entries, RunConfig(), args.workers)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for r in results:
        safe = "".join(c if c.isalnum() else "_" for c in r.name)
        (out / f"{safe}.json").write_text(json.dumps(r.to_json(), indent=2, sort_keys=True) + "\n")
    rows = summary_rows(results)
    (out / "summary.json").write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    for row, r in zip(rows, results):
        print(f"{row['status']}  {row['entry']:<22} iterates={row['iterates']} "
              f"interlacing={row['interlacing']:<7} certified={row['certified'] or '-'}  "
              f"{r.seconds:.1f}s")
    ok = sum(r.ok for r in results)
    print(f"{ok}/{len(results)} entries passed; JSON in {out}/")
    return 0 if ok == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
