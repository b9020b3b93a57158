"""JSON/CSV serialization of analysis results.

Rationals are written as ``"p/q"`` strings and never converted to floats;
floats are rounded to 12 significant digits so reports are byte-stable.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Iterable, List, Sequence

from . import __version__
from . import _linalg as la
from .bisubstitution import pair_labels
from .hull import format_form
from .substitution import serialize_substitution


def round_float(x: float) -> float:
    return float(f"{x:.12g}")


def vector_dict(labels: Sequence[str], v) -> dict:
    return {lab: la.fmt(x) for lab, x in zip(labels, v)}


def sigma_rows(labels: Sequence[str], table, ks: Iterable[int]) -> List[dict]:
    return [{"k": k, "values": vector_dict(labels, table[k])} for k in ks]


def hull_dict(est) -> dict:
    labels = pair_labels(est.substitution_)
    hull = est.hull_
    return {
        "eigenspace_dim": hull.eigenspace_dim,
        "spans_eigenspace": hull.spans_eigenspace,
        "basis": [vector_dict(labels, b) for b in hull.basis],
        "constraints": [
            {"form": format_form(f), "coefficients": [la.fmt(c) for c in f], "multiplicity": m}
            for f, m in hull.constraints
        ],
        "vertices": [[la.fmt(x) for x in v] for v in hull.vertices],
        "rays": [vector_dict(labels, r) for r in hull.rays],
    }


def decomposition_dict(d) -> dict:
    return {
        "classes": d.class_labels(),
        "transient": d.transient_labels(),
        "periods": list(d.periods),
        "exponent": d.exponent,
    }


def build_report(est, n_sigma: int = 64, timings: bool = False) -> dict:
    """Report for a (possibly partially) fitted :class:`SpectralTypeAnalyzer`."""
    out = {"tool": "substitution-spectra", "version": __version__}
    s = getattr(est, "substitution_", None)
    if s is None:
        out["stages"] = dict(getattr(est, "stages_", {}))
        return out
    out["input"] = json.loads(serialize_substitution(s))
    labels = pair_labels(s)
    if hasattr(est, "instruction_matrices_"):
        out["instruction_matrices"] = [r.tolist() for r in est.instruction_matrices_]
        out["substitution_matrix"] = est.substitution_matrix_.tolist()
    if "primitivity" in est.stages_:
        out["primitivity"] = {"primitive": est.stages_["primitivity"] == "ok",
                              "witness_exponent": est.primitivity_exponent_}
    if hasattr(est, "frequencies_"):
        out["perron_eigenvalue"] = s.length
        out["frequencies"] = vector_dict(s.alphabet, est.frequencies_)
    if hasattr(est, "aperiodicity_"):
        w = est.aperiodicity_
        out["aperiodicity"] = {"aperiodic": w.aperiodic, "witness_letter": w.letter,
                               "neighbourhoods": [list(p) for p in w.neighbourhoods]}
    if hasattr(est, "height_"):
        h = est.height_
        out["height"] = {"height": h.height, "return_gcd": h.return_gcd, "seed": h.seed,
                         "power": h.power, "note": f"height (stable at horizon {h.horizon})"}
    if hasattr(est, "decomposition_"):
        out["ergodic_decomposition"] = decomposition_dict(est.decomposition_)
    if hasattr(est, "correlations_"):
        out["sigma"] = sigma_rows(labels, est.correlations_, range(n_sigma + 1))
        out["consistency"] = [{"p": p, "k": k, "ok": ok}
                              for (p, k), ok in sorted(est.consistency_.items())]
    if hasattr(est, "hull_"):
        out["hull"] = hull_dict(est)
    if hasattr(est, "profiles_"):
        out["rays"] = [p.to_dict(labels) for p in est.profiles_]
    if hasattr(est, "report_"):
        rep = est.report_
        out["maximal_type"] = {
            "point_factor": rep.point_factor,
            "components": [{"ray": i, "verdict": p.verdict, "certificate": p.certificate}
                           for i, p in enumerate(rep.profiles)],
            "notes": rep.notes,
        }
        if rep.weighted is not None:
            out["weighted"] = rep.weighted.to_dict()
    out["stages"] = dict(est.stages_)
    if timings:
        out["timings"] = {k: round_float(v) for k, v in est.timings_.items()}
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def write_csv(rows: Iterable[Sequence], header: Sequence[str], fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([round_float(x) if isinstance(x, float) else x for x in row])
    return "" if fh is not None else buf.getvalue()
