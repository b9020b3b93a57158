"""Command-line interface: ``substitution-spectra <command> ...``.

JSON reports go to stdout (or ``--out``); plottable series are CSV.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from contextlib import contextmanager
from typing import List

from . import _linalg as la
from .bisubstitution import build_bisubstitution, ergodic_decomposition, pair_labels
from .classify import profile_rays
from .correlation import CorrelationTable, verify_theorem_consistency
from .estimator import AnalysisError, SpectralTypeAnalyzer, exit_code_for
from .hull import spectral_hull
from .numerics import empirical_autocorrelation, growth_test, periodogram, wiener_average
from .report import build_report, decomposition_dict, dumps, write_csv
from .sequences import generate, partial_sums
from .validation import check_substitution

_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def _term(text: str):
    m = _TERM.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad number {text!r}")
    base, exp = int(m.group(1)), m.group(2)
    return (base, int(exp)) if exp is not None else (base, None)


def _value(term) -> int:
    base, exp = term
    return base if exp is None else base**exp


def parse_n_list(text: str, geometric: bool = False) -> List[int]:
    """Parse ``"1024,4096"``, ``"4^5..4^10"`` or ``"100..200"``.

    With ``geometric=True`` a range whose ends share a base (``b^i..b^j``)
    expands to ``b^i, ..., b^j``; otherwise ranges are all integers in between.
    """
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = (_term(x) for x in part.split("..", 1))
            if geometric and lo[1] is not None and hi[1] is not None and lo[0] == hi[0]:
                out.extend(lo[0] ** e for e in range(lo[1], hi[1] + 1))
            else:
                out.extend(range(_value(lo), _value(hi) + 1))
        else:
            out.append(_value(_term(part)))
    if not out or any(b <= a for a, b in zip(out, out[1:])):
        raise argparse.ArgumentTypeError(f"N list {text!r} must be nonempty and strictly ascending")
    return out


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_analyze(args) -> int:
    est = SpectralTypeAnalyzer(k_max=args.kmax, seed_letter=args.seed_letter)
    code = 0
    try:
        est.fit(args.spec)
    except AnalysisError as exc:
        code = exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
    report = build_report(est, timings=args.timings)
    if code:
        failed = next((k for k, v in est.stages_.items() if v == "failed"), None)
        report["error"] = {"stage": failed, "exit_code": code}
    with _output(args.out) as fh:
        fh.write(dumps(report))
    return code


def cmd_sigma(args) -> int:
    s = check_substitution(args.spec)
    table = CorrelationTable(s)
    labels = pair_labels(s)
    if args.table:
        rows = ((k, lab, la.fmt(x)) for k in range(args.k + 1) for lab, x in zip(labels, table[k]))
        with _output(args.out) as fh:
            write_csv(rows, ["k", "pair", "value"], fh)
        return 0
    out = {"k": args.k, "values": {lab: la.fmt(x) for lab, x in zip(labels, table[args.k])}}
    code = 0
    if args.p is not None:
        ok = verify_theorem_consistency(s, args.k, args.p, table)
        out["consistency"] = {"p": args.p, "ok": ok}
        code = 0 if ok else 1
    with _output(args.out) as fh:
        fh.write(dumps(out))
    return code


def cmd_hull(args) -> int:
    est = SpectralTypeAnalyzer()
    s = check_substitution(args.spec)
    est.substitution_ = s
    est.decomposition_ = ergodic_decomposition(build_bisubstitution(s))
    est.hull_ = spectral_hull(s, est.decomposition_)
    from .report import hull_dict

    out = {"ergodic_decomposition": decomposition_dict(est.decomposition_), "hull": hull_dict(est)}
    with _output(args.out) as fh:
        fh.write(dumps(out))
    return 0


def cmd_classify(args) -> int:
    s = check_substitution(args.spec)
    d = ergodic_decomposition(build_bisubstitution(s))
    hull = spectral_hull(s, d)
    profiles = profile_rays(hull, CorrelationTable(s), args.kmax)
    labels = pair_labels(s)
    out = {"rays": [p.to_dict(labels) for p in profiles]}
    with _output(args.out) as fh:
        fh.write(dumps(out))
    return 0


def cmd_sequence(args) -> int:
    values = generate(args.generator, args.n)
    with _output(args.out) as fh:
        if args.format == "csv":
            write_csv(((i, int(v)) for i, v in enumerate(values)), ["n", "value"], fh)
        else:
            fh.writelines("+1\n" if v > 0 else "-1\n" for v in values)
    return 0


def cmd_partials(args) -> int:
    rows = partial_sums(args.generator, args.N)
    with _output(args.out) as fh:
        write_csv(rows, ["N", "sum", "ratio", "log4N"], fh)
    return 0


def cmd_periodogram(args) -> int:
    seq = generate(args.generator, args.n)
    m = args.grid_factor * args.n
    values = periodogram(seq, args.n, m)
    with _output(args.out) as fh:
        write_csv(((j / m, float(v)) for j, v in enumerate(values)), ["theta", "value"], fh)
    return 0


def cmd_growth(args) -> int:
    seq = generate(args.generator, max(args.N))
    rows = growth_test(seq, args.N, args.grid_factor)
    with _output(args.out) as fh:
        write_csv(rows, ["N", "sup", "ratio"], fh)
    return 0


def cmd_autocorrelation(args) -> int:
    seq = generate(args.generator, args.n + args.kmax)
    c = empirical_autocorrelation(seq, args.n, args.kmax)
    with _output(args.out) as fh:
        write_csv(((k, float(v)) for k, v in enumerate(c)), ["k", "value"], fh)
    return 0


def cmd_wiener(args) -> int:
    k_list = args.K
    seq = generate(args.generator, args.n + max(k_list))
    c = empirical_autocorrelation(seq, args.n, max(k_list))
    with _output(args.out) as fh:
        write_csv(zip(k_list, wiener_average(c, k_list)), ["K", "value"], fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="substitution-spectra",
        description="Exact spectral classification of constant-length substitutions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kmax=True):
        p.add_argument("--out", "-o", default=None, help="output file (default: stdout)")
        if kmax:
            p.add_argument("--kmax", type=int, default=4096, help="classification horizon")

    p = sub.add_parser("analyze", help="run the full pipeline and emit a JSON report")
    p.add_argument("spec")
    common(p)
    p.add_argument("--seed-letter", default=None)
    p.add_argument("--timings", action="store_true", help="include stage timings (not byte-stable)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sigma", help="exact correlation vector at lag k")
    p.add_argument("spec")
    p.add_argument("k", type=int)
    p.add_argument("--p", type=int, default=None, help="also check the level-p block identity")
    p.add_argument("--table", action="store_true", help="CSV table for lags 0..k")
    common(p, kmax=False)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("hull", help="ergodic decomposition, semipositivity forms and extreme rays")
    p.add_argument("spec")
    common(p, kmax=False)
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("classify", help="classify the extreme-ray measures")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sequence", help="dump a +-1 sequence")
    p.add_argument("generator", choices=["rsl", "rs", "ones"])
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["tokens", "csv"], default="tokens")
    common(p, kmax=False)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("partials", help="partial sums and their sqrt(N) ratios (CSV)")
    p.add_argument("generator", choices=["rsl", "rs", "ones"])
    p.add_argument("N", type=parse_n_list, help='e.g. "4^5..4^10" (every N) or "16,64,256"')
    common(p, kmax=False)
    p.set_defaults(func=cmd_partials)

    p = sub.add_parser("periodogram", help="periodogram on a grid (CSV)")
    p.add_argument("generator", choices=["rsl", "rs", "ones"])
    p.add_argument("n", type=int)
    p.add_argument("--grid-factor", type=int, default=1)
    common(p, kmax=False)
    p.set_defaults(func=cmd_periodogram)

    p = sub.add_parser("growth", help="grid sup of |S_N| over sqrt(N) (CSV)")
    p.add_argument("generator", choices=["rsl", "rs", "ones"])
    p.add_argument("N", type=lambda t: parse_n_list(t, geometric=True),
                   help='e.g. "4^4..4^9" (powers) or "256,1024"')
    p.add_argument("--grid-factor", type=int, default=8)
    common(p, kmax=False)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("autocorrelation", help="empirical autocorrelation (CSV)")
    p.add_argument("generator", choices=["rsl", "rs", "ones"])
    p.add_argument("n", type=int)
    common(p)
    p.set_defaults(func=cmd_autocorrelation, kmax=64)

    p = sub.add_parser("wiener", help="Wiener averages of the empirical autocorrelation (CSV)")
    p.add_argument("generator", choices=["rsl", "rs", "ones"])
    p.add_argument("n", type=int)
    p.add_argument("K", type=lambda t: parse_n_list(t, geometric=True))
    common(p, kmax=False)
    p.set_defaults(func=cmd_wiener)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except (ValueError, OSError, ArithmeticError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
