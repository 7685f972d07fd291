"""The verification corpus and the per-entry pipeline run by ``suite``.

Each entry is a form spec at a level.  The pipeline checks the hypothesis on f
(all zeros in the fundamental domain on the arcs), then audits each Serre
iterate, checks interlacing of consecutive zero sets and realness on every
arc, and at level 1 adds the exact j-polynomial certificate.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .arcs import (TailEstimateError, interlacing_from_zeros, realness_check, scan_all_arcs,
                   valence_audit)
from .config import RunConfig
from .formspec import parse_form_spec
from .generators import SUPPORTED_LEVELS
from .geometry import domain_spec
from .jpoly import certify_zeros_on_arc, decompose, sturm_count
from .serre import serre_derivative

LEVEL1_CORPUS = ("E4", "E6", "E4^2", "E4*E6", "E4^3", "E12", "Delta*E4", "E4/Delta", "E6/Delta")
FRICKE_WEIGHTS = (4, 6, 8, 12)
RSD_STURM_MAX = 40


@dataclass(frozen=True)
class CorpusEntry:
    spec: str
    level: int
    iterates: int = 1
    kind: str = "theorem"  # "theorem" audits derivatives; "rsd" audits f only
    certify: bool = False
    realness: bool = True

    @property
    def name(self) -> str:
        return f"p{self.level}:{self.spec}"


def level1_entries(iterates: int = 5) -> list[CorpusEntry]:
    return [CorpusEntry(s, 1, iterates, certify=True) for s in LEVEL1_CORPUS]


def fricke_entries(levels=(2, 3, 5, 7)) -> list[CorpusEntry]:
    return [CorpusEntry(f"FrickeE({k})", p) for p in levels if p != 1 for k in FRICKE_WEIGHTS]


def rsd_entries(max_weight: int = 60) -> list[CorpusEntry]:
    return [CorpusEntry(f"E{k}", 1, 0, "rsd", certify=k <= RSD_STURM_MAX, realness=False)
            for k in range(4, max_weight + 1, 2)]


def default_corpus(levels=SUPPORTED_LEVELS, max_weight: int = 60,
                   iterates: int = 5) -> list[CorpusEntry]:
    out = []
    if 1 in levels:
        out += level1_entries(iterates) + rsd_entries(max_weight)
    out += fricke_entries([p for p in levels if p != 1])
    return out


@dataclass
class EntryResult:
    name: str
    level: int
    spec: str
    ok: bool
    hypothesis: str
    audits: list = field(default_factory=list)  # one dict per iterate (n = 0 is f)
    interlacing_violations: int = 0
    interlacing_pairs: int = 0
    max_imag: float | None = None
    certificate: dict | None = None
    errors: list = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        if self.max_imag is not None:
            d["max_imag"] = f"{self.max_imag:.3e}"
        del d["seconds"]  # wall time would break byte-identical reruns
        return d


def run_entry(entry: CorpusEntry, config: RunConfig = RunConfig()) -> EntryResult:
    t0 = time.perf_counter()
    res = EntryResult(entry.name, entry.level, entry.spec, False, "unchecked")
    settings = config.scan_settings()
    try:
        f = parse_form_spec(entry.spec, entry.level, config.truncation)
        if f.quasi:
            raise ValueError("quasi-modular input has no valence formula")
        zeros = scan_all_arcs(f, settings)
        audit = valence_audit(f, settings, zeros)
        res.audits.append({"n": 0, **_audit_summary(audit)})
        res.hypothesis = "holds" if audit.hypothesis_holds else "failed"
        if entry.realness:
            spec = domain_spec(entry.level)
            res.max_imag = max(realness_check(f, a.arc_id, 512, 1e-10, config.precision_bits,
                                              config.eval_tol).max_imag for a in spec.arcs)
            if res.max_imag >= 1e-10:
                res.errors.append(f"realness violated: max |Im F| = {res.max_imag:.3e}")
        if not audit.hypothesis_holds:
            res.errors.append("hypothesis failed on f: " + "; ".join(audit.diagnostics or
                                                                     ["no zeros in H"]))
        else:
            g, gz = f, zeros
            for n in range(1, entry.iterates + 1):
                dg = serre_derivative(g)
                dz = scan_all_arcs(dg, settings)
                da = valence_audit(dg, settings, dz)
                res.audits.append({"n": n, **_audit_summary(da)})
                if not da.passed:
                    res.errors.append(f"audit of d^{n} f failed: " + "; ".join(da.diagnostics))
                il = interlacing_from_zeros(entry.level, gz, dz)
                res.interlacing_pairs += len(il.pairs)
                res.interlacing_violations += il.violations
                g, gz = dg, dz
            if res.interlacing_violations:
                res.errors.append(f"{res.interlacing_violations} interlacing violations")
        if entry.certify:
            res.certificate = _certificate(f, entry)
            if not res.certificate["certified"]:
                res.errors.append("certificate refused: " + res.certificate["reason"])
    except TailEstimateError as exc:
        res.errors.append(f"tail-estimate flag: {exc}")
    except ValueError as exc:
        res.errors.append(f"{type(exc).__name__}: {exc}")
    res.ok = not res.errors
    res.seconds = time.perf_counter() - t0
    return res


def _audit_summary(a) -> dict:
    return {"weight": a.weight, "ord_infinity": a.ord_inf, "budget": str(a.budget),
            "residual": str(a.residual), "status": a.status, "zeros": len(a.zeros),
            "diagnostics": list(a.diagnostics)}


def _certificate(f, entry: CorpusEntry) -> dict:
    if entry.kind == "rsd":
        d = decompose(f)
        if d.poly.degree < 1:
            return {"certified": True, "reason": "constant polynomial", "poly": d.poly.to_strings()}
        r = sturm_count(d.poly, 0, 1728)
        ok = r.all_roots_inside
        return {"certified": ok, "reason": "" if ok else "roots of P_f outside [0, 1728]",
                "poly_degree": d.poly.degree, "roots_in_interval": r.count}
    return certify_zeros_on_arc(f).to_json()


def run_corpus(entries, config: RunConfig = RunConfig(), workers: int = 1) -> list[EntryResult]:
    """Run entries, concurrently when ``workers > 1``; results keep the input order."""
    entries = list(entries)
    if workers <= 1:
        return [run_entry(e, config) for e in entries]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_entry, entries, [config] * len(entries)))


def summary_rows(results) -> list[dict]:
    rows = []
    for r in results:
        last = r.audits[-1] if r.audits else {}
        rows.append({"entry": r.name, "status": "PASS" if r.ok else "FAIL",
                     "hypothesis": r.hypothesis, "iterates": max(len(r.audits) - 1, 0),
                     "final_residual": last.get("residual", ""),
                     "interlacing": f"{r.interlacing_pairs - r.interlacing_violations}/"
                                    f"{r.interlacing_pairs}",
                     "certified": "" if r.certificate is None else str(r.certificate["certified"])})
    return rows

