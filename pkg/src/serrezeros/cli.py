"""Command-line entry point: ``serre-zeros <command> [options]``.

Commands: gen, serre, geom, zeros, audit, jpoly, plot-data, suite.  JSON and
CSV outputs carry ``schema: serre-zeros/1``; all numbers are decimal strings.
Exit status is 0 only when every audit balances, every certificate is issued
and no tail-estimate flag fired.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .arcs import (TailEstimateError, sample_arc, scan_all_arcs, valence_audit, zero_row)
from .config import RunConfig, load_config
from .corpus import default_corpus, run_corpus, summary_rows
from .formspec import FormSpecError, parse_form_spec
from .generators import SUPPORTED_LEVELS
from .geometry import domain_spec, rh_check
from .jpoly import DecompositionError, certify_zeros_on_arc
from .qseries import SCHEMA, TruncationError
from .serre import serre_iterate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common(p: argparse.ArgumentParser, form: bool = True, level: bool = True):
    if level:
        p.add_argument("--level", type=int, default=1, choices=SUPPORTED_LEVELS)
    if form:
        p.add_argument("--form", required=True, help='form spec, e.g. "E4^3 - E6^2"')
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--precision", type=int, dest="precision_bits")
    p.add_argument("--truncation", "-N", type=int)
    p.add_argument("--grid", type=int, dest="grid_size")
    p.add_argument("--tol", type=float, dest="refine_tol")
    p.add_argument("--minima-threshold", dest="minima_threshold")
    p.add_argument("--csv", dest="csv_path")
    p.add_argument("--json", dest="json_path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="serre-zeros",
                                 description="Zeros of Serre derivatives on Fricke-group arcs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="q-expansion of a form")
    _common(p)
    p.add_argument("--terms", type=int, default=16, help="coefficients to print")

    p = sub.add_parser("serre", help="q-expansion of an iterated Serre derivative")
    _common(p)
    p.add_argument("--iterate", type=int, default=1)
    p.add_argument("--terms", type=int, default=16)

    p = sub.add_parser("geom", help="fundamental-domain data for a level")
    _common(p, form=False)

    p = sub.add_parser("zeros", help="arc zeros (CSV) and valence audit (JSON)")
    _common(p)
    p.add_argument("--serre", type=int, default=0, help="apply the Serre derivative n times")

    p = sub.add_parser("audit", help="valence audit (JSON)")
    _common(p)
    p.add_argument("--serre", type=int, default=0)

    p = sub.add_parser("jpoly", help="exact level-1 certificate via j-polynomials")
    _common(p, level=False)

    p = sub.add_parser("plot-data", help="samples of the arc restriction (CSV)")
    _common(p)
    p.add_argument("--serre", type=int, default=0)
    p.add_argument("--points", type=int, default=256)

    p = sub.add_parser("suite", help="run the verification corpus")
    _common(p, form=False, level=False)
    p.add_argument("--levels", default="1,2,3,5,7")
    p.add_argument("--max-weight", type=int, default=60)
    p.add_argument("--iterates", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default=None, help="per-entry JSON files and summaries")
    return ap


def _config(args) -> RunConfig:
    keys = ("precision_bits", "truncation", "grid_size", "refine_tol", "minima_threshold",
            "csv_path", "json_path")
    over = {k: getattr(args, k, None) for k in keys}
    if over["minima_threshold"] not in (None, "adaptive"):
        over["minima_threshold"] = float(over["minima_threshold"])
    return load_config(args.config, **over)


def _dump_json(obj, path: str | None, out) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _write_csv(rows: list[dict], columns: list[str], path: str | None, out) -> None:
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: "" if r.get(c) is None else r.get(c) for c in columns})
    if path:
        Path(path).write_text(buf.getvalue(), encoding="utf-8")
    else:
        out.write(buf.getvalue())


def _form(args, cfg, n: int = 0):
    f = parse_form_spec(args.form, getattr(args, "level", 1), cfg.truncation)
    if n:
        f = serre_iterate(f, n)
    return f


def _series_json(f, terms: int) -> dict:
    d = f.to_json()
    d["coeffs"] = d["coeffs"][:terms]
    d["shown_terms"] = len(d["coeffs"])
    return d


def cmd_gen(args, cfg, out) -> int:
    _dump_json(_series_json(_form(args, cfg), args.terms), cfg.json_path, out)
    return EXIT_OK


def cmd_serre(args, cfg, out) -> int:
    _dump_json(_series_json(_form(args, cfg, args.iterate), args.terms), cfg.json_path, out)
    return EXIT_OK


def cmd_geom(args, cfg, out) -> int:
    d = domain_spec(args.level).to_json()
    lhs, rhs = rh_check(args.level)
    d["riemann_hurwitz"] = {"lhs": str(lhs), "rhs": str(rhs), "passed": lhs == rhs}
    _dump_json(d, cfg.json_path, out)
    return EXIT_OK if lhs == rhs else EXIT_FAIL


ZERO_COLUMNS = ["arc", "theta", "re_tau", "im_tau", "parity", "bracket_width", "order",
                "half_order", "label"]


def cmd_zeros(args, cfg, out) -> int:
    f = _form(args, cfg, args.serre)
    settings = cfg.scan_settings()
    zeros = scan_all_arcs(f, settings)
    _write_csv([zero_row(z) for z in zeros], ZERO_COLUMNS, cfg.csv_path, out)
    report = valence_audit(f, settings, zeros)
    _dump_json(report.to_json(), cfg.json_path, out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_audit(args, cfg, out) -> int:
    report = valence_audit(_form(args, cfg, args.serre), cfg.scan_settings())
    _dump_json(report.to_json(), cfg.json_path, out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_jpoly(args, cfg, out) -> int:
    cert = certify_zeros_on_arc(parse_form_spec(args.form, 1, cfg.truncation))
    _dump_json(cert.to_json(), cfg.json_path, out)
    return EXIT_OK if cert.certified else EXIT_FAIL


def cmd_plot_data(args, cfg, out) -> int:
    f = _form(args, cfg, args.serre)
    settings = cfg.scan_settings()
    rows = []
    for arc in domain_spec(f.level).arcs:
        for th, val in sample_arc(f, arc.arc_id, args.points, settings):
            rows.append({"arc": arc.arc_id, "theta": format(th, ".20g"),
                         "F": format(val, ".20g")})
    _write_csv(rows, ["arc", "theta", "F"], cfg.csv_path, out)
    return EXIT_OK


SUMMARY_COLUMNS = ["entry", "status", "hypothesis", "iterates", "final_residual", "interlacing",
                   "certified"]


def cmd_suite(args, cfg, out) -> int:
    try:
        levels = tuple(int(x) for x in args.levels.split(","))
    except ValueError:
        raise FormSpecError(f"bad --levels {args.levels!r}")
    bad = [p for p in levels if p not in SUPPORTED_LEVELS]
    if bad:
        raise FormSpecError(f"unsupported levels {bad}")
    entries = default_corpus(levels, args.max_weight, args.iterates)
    results = run_corpus(entries, cfg, args.workers)
    rows = summary_rows(results)
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for r in results:
            safe = "".join(c if c.isalnum() else "_" for c in r.name)
            _dump_json({"schema": SCHEMA, **r.to_json()}, str(d / f"{safe}.json"), out)
        _write_csv(rows, SUMMARY_COLUMNS, str(d / "summary.csv"), out)
        _dump_json({"schema": SCHEMA, "entries": rows,
                    "passed": all(r.ok for r in results)}, str(d / "summary.json"), out)
    width = max(len(r["entry"]) for r in rows) if rows else 10
    for r, res in zip(rows, results):
        out.write(f"{r['status']}  {r['entry']:<{width}}  residual={r['final_residual']:<5} "
                  f"interlacing={r['interlacing']:<6} certified={r['certified'] or '-':<5} "
                  f"{res.seconds:7.2f}s\n")
        for e in res.errors:
            out.write(f"      {e}\n")
    n_ok = sum(r.ok for r in results)
    out.write(f"{n_ok}/{len(results)} entries passed\n")
    return EXIT_OK if n_ok == len(results) else EXIT_FAIL


COMMANDS = {"gen": cmd_gen, "serre": cmd_serre, "geom": cmd_geom, "zeros": cmd_zeros,
            "audit": cmd_audit, "jpoly": cmd_jpoly, "plot-data": cmd_plot_data,
            "suite": cmd_suite}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, out)
    except FormSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TailEstimateError as exc:
        print(f"error: tail-estimate flag: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (TruncationError, DecompositionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
