"""Command-line front end.

Every subcommand prints one report.  JSON is the canonical format and is
written with sorted keys so identical inputs and cache state give identical
bytes.  Exit status is 0 on success, 2 for rejected input and 3 when a result
could not be certified to the requested accuracy.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .cache import ZeroCache, default_cache_path, get_zeros
from .characters import CharacterLabel, character_from_label, enumerate_characters, enumerate_primitive
from .charsums import DEFAULT_C3, DEFAULT_C4, burgess_scan, scan_lemma3
from .distinct import DistinctnessParams, compare_zero_multisets, region, verify_thm1
from .errors import AccuracyError, IncompleteError
from .landau import CSV_COLUMNS, ExactX, report_from_zeros, verify_thm2
from .lfunc import EvalSettings, eval_L
from .zeros import DEFAULT_ZERO_SETTINGS, ZeroSettings, find_zeros

log = logging.getLogger("lzeros")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ACCURACY = 3
RATIO_THRESHOLD = 5.0
GRID_MODULI = (1, 3, 4, 5)
GRID_XS = ("2", "3", "4", "5", "7", "8", "9", "5/2", "6")
GRID_T2S = (50.0, 100.0, 200.0)


# -- argument parsing ----------------------------------------------------------

def exact_rational(text: str) -> Fraction:
    """``"2.5"`` -> 5/2, ``"7/3"`` -> 7/3; no float round trip."""
    try:
        v = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None
    return v


def label_arg(text: str) -> CharacterLabel:
    try:
        return CharacterLabel.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def complex_arg(text: str) -> complex:
    t = text.replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected sigma+it, got {text!r}") from None


def q_range_arg(text: str) -> range:
    try:
        a, b = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(a, b + 1)


def _csv_list(kind):
    def parse(text):
        return [kind(v) for v in text.split(",") if v.strip()]
    return parse


def _add_output(p, csv_ok=True):
    g = p.add_mutually_exclusive_group()
    choices = ["json", "csv", "human"] if csv_ok else ["json", "human"]
    g.add_argument("--format", choices=choices, default="json")
    g.add_argument("--json", dest="format", action="store_const", const="json")
    if csv_ok:
        g.add_argument("--csv", dest="format", action="store_const", const="csv")


def _add_cache(p):
    p.add_argument("--cache", default=None,
                   help="zero cache (JSON Lines); defaults to $LZEROS_CACHE")
    p.add_argument("--no-cache", action="store_true", help="ignore $LZEROS_CACHE")


def _add_distinct_params(p):
    p.add_argument("--theta", type=float, default=None,
                   help="0.4 by default, 0.3 with --cubefree")
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--c3", type=float, default=DEFAULT_C3)
    p.add_argument("--c4", type=float, default=DEFAULT_C4)
    p.add_argument("--cubefree", action="store_true", help="use the cubefree Burgess path")
    p.add_argument("--tol", type=float, default=1e-6, help="zero matching tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lzeros", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chars", help="list Dirichlet characters mod q")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--primitive-only", action="store_true")
    _add_output(p)

    p = sub.add_parser("eval", help="evaluate L(s, chi)")
    p.add_argument("--label", type=label_arg, required=True)
    p.add_argument("--s", type=complex_arg, required=True, help='e.g. "0.5+14.1i"')
    p.add_argument("--precision", choices=["standard", "extended"], default="standard")
    p.add_argument("--dps", type=int, default=30, help="digits in extended mode")
    _add_output(p, csv_ok=False)

    p = sub.add_parser("zeros", help="zeros with t1 < gamma < t2")
    p.add_argument("--label", type=label_arg, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=float, required=True)
    p.add_argument("--step-scale", type=float, default=1.0)
    p.add_argument("--plot", default=None, help="write a Hardy Z figure here")
    _add_cache(p)
    _add_output(p)

    for name, text in (("landau", "zero sum against main term and budget"),
                       ("verify-thm2", "Landau-Gonek check, one cell or the full grid")):
        p = sub.add_parser(name, help=text)
        grid = name == "verify-thm2"
        p.add_argument("--label", type=label_arg, required=not grid)
        p.add_argument("--x", type=exact_rational, required=not grid)
        p.add_argument("--t1", type=float, default=1.0 if grid else None, required=not grid)
        p.add_argument("--t2", type=float, default=None, required=not grid)
        if grid:
            p.add_argument("--grid", action="store_true",
                           help="all primitive characters for --moduli over --xs and --t2s")
            p.add_argument("--moduli", type=_csv_list(int), default=list(GRID_MODULI))
            p.add_argument("--xs", type=_csv_list(exact_rational),
                           default=[Fraction(x) for x in GRID_XS])
            p.add_argument("--t2s", type=_csv_list(float), default=list(GRID_T2S))
            p.add_argument("--threshold", type=float, default=RATIO_THRESHOLD)
            p.add_argument("--jobs", type=int, default=1)
            p.add_argument("--plot", default=None, help="write a ratio figure here")
        _add_cache(p)
        _add_output(p)

    p = sub.add_parser("burgess", help="witness primes and Burgess ratios")
    p.add_argument("--q-range", type=q_range_arg, required=True, help="A:B inclusive")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--c3", type=float, default=DEFAULT_C3)
    p.add_argument("--c4", type=float, default=DEFAULT_C4)
    p.add_argument("--cubefree-only", action="store_true")
    p.add_argument("--coprime", action="store_true", help="skip primes dividing q")
    p.add_argument("--plot", default=None, help="write a witness figure here")
    _add_output(p)

    p = sub.add_parser("distinct", help="compare zero multisets over R(q, T)")
    p.add_argument("--label1", type=label_arg, required=True)
    p.add_argument("--label2", type=label_arg, required=True)
    p.add_argument("--T", type=float, required=True)
    _add_distinct_params(p)
    _add_cache(p)
    _add_output(p, csv_ok=False)

    p = sub.add_parser("verify-thm1", help="witness prime, Landau sums and zero diff")
    p.add_argument("--label1", type=label_arg, required=True)
    p.add_argument("--label2", type=label_arg, required=True)
    p.add_argument("--T", type=float, required=True)
    _add_distinct_params(p)
    _add_cache(p)
    _add_output(p, csv_ok=False)
    return ap


# -- output ------------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def dump_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})
    return buf.getvalue()


def dump_human(obj, indent: int = 0) -> str:
    pad = " " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(dump_human(v, indent + 2).rstrip("\n"))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                lines.append(pad + "  ".join(f"{k}={v[k]}" for k in sorted(v)))
            else:
                lines.append(f"{pad}{v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines) + "\n"


def emit(args, obj, rows=None, columns=None, out=None) -> None:
    out = out or sys.stdout
    if args.format == "csv":
        out.write(dump_csv(rows if rows is not None else [obj], columns))
    elif args.format == "human":
        out.write(dump_human(obj))
    else:
        out.write(dump_json(obj))


# -- helpers ---------------------------------------------------------------------

def _cache(args):
    if getattr(args, "no_cache", False):
        return None
    path = args.cache or default_cache_path()
    return ZeroCache(path) if path else None


def _primitive(label: CharacterLabel):
    chi = character_from_label(label)
    if not chi.primitive:
        raise ValueError(f"{label} is not primitive (conductor {chi.conductor})")
    return chi


def _distinct_params(args) -> DistinctnessParams:
    theta = args.theta if args.theta is not None else (0.3 if args.cubefree else 0.4)
    return DistinctnessParams(theta=theta, c1=args.c1, c2=args.c2, c3=args.c3, c4=args.c4,
                              cubefree=args.cubefree)


def _zero_lists(chars, t1, t2, settings, cache, jobs):
    """Zero lists for several characters; workers compute, this process
    alone touches the cache."""
    out, todo = {}, []
    for chi in chars:
        hit = cache.load(str(chi.label), (t1, t2), settings.fingerprint()) if cache else None
        if hit is not None:
            out[chi.label] = hit
        else:
            todo.append(chi)
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            lists = list(ex.map(find_zeros, todo, [t1] * len(todo), [t2] * len(todo),
                                [settings] * len(todo)))
    else:
        lists = [find_zeros(chi, t1, t2, settings) for chi in todo]
    for chi, zl in zip(todo, lists):
        if cache:
            cache.store(zl, settings.fingerprint())
        out[chi.label] = zl
    return [out[chi.label] for chi in chars]


# -- subcommands -------------------------------------------------------------------

def cmd_chars(args) -> int:
    q = args.modulus
    if q < 1:
        raise ValueError("modulus must be positive")
    chars = enumerate_primitive(q) if args.primitive_only else enumerate_characters(q)
    rows = [{"label": str(c.label), "conductor": c.conductor, "order": c.order,
             "parity": c.parity} for c in chars]
    emit(args, rows, rows, ("label", "conductor", "order", "parity"))
    return EXIT_OK


def cmd_eval(args) -> int:
    chi = character_from_label(args.label)
    settings = EvalSettings(precision=args.precision, dps=args.dps)
    v = eval_L(chi, args.s, settings)
    emit(args, {"label": str(chi.label), "s_re": args.s.real, "s_im": args.s.imag,
                "value_re": v.value.real, "value_im": v.value.imag,
                "err_estimate": v.err, "precision": args.precision,
                "settings_fingerprint": settings.fingerprint(), "version": __version__})
    return EXIT_OK


ZERO_COLUMNS = ("label", "gamma", "beta", "mult", "acc", "source", "certified")


def cmd_zeros(args) -> int:
    chi = _primitive(args.label)
    settings = ZeroSettings(step_scale=args.step_scale)
    zl = get_zeros(chi, args.t1, args.t2, settings, _cache(args))
    zeros = [{"gamma": repr(z.gamma), "beta": z.beta, "mult": z.multiplicity,
              "acc": z.accuracy, "source": z.source} for z in zl.zeros]
    report = {"label": zl.label, "t1": args.t1, "t2": args.t2, "count": zl.count,
              "certified": zl.certified, "zeros": zeros,
              "settings_fingerprint": settings.fingerprint(), "version": __version__}
    rows = [dict(z, label=zl.label, certified=zl.certified) for z in zeros]
    emit(args, report, rows, ZERO_COLUMNS)
    if args.plot:
        from .plotting import plot_hardy_z
        plot_hardy_z(chi, zl, args.plot)
    return EXIT_OK if zl.certified else EXIT_ACCURACY


def cmd_landau(args) -> int:
    chi = _primitive(args.label)
    rep = verify_thm2(chi, ExactX(args.x), args.t1, args.t2, _cache(args))
    emit(args, rep.to_dict(), None, CSV_COLUMNS)
    return EXIT_OK if rep.certified else EXIT_ACCURACY


def cmd_verify_thm2(args) -> int:
    cache = _cache(args)
    if not args.grid:
        if args.label is None or args.x is None or args.t2 is None:
            raise ValueError("need --label, --x and --t2 (or --grid)")
        chi = _primitive(args.label)
        rep = verify_thm2(chi, ExactX(args.x), args.t1, args.t2, cache)
        d = dict(rep.to_dict(), threshold=args.threshold, within_threshold=rep.ratio <= args.threshold)
        emit(args, d, None, CSV_COLUMNS + ("threshold", "within_threshold"))
        return EXIT_OK if rep.certified else EXIT_ACCURACY
    chars = [c for q in args.moduli for c in enumerate_primitive(q)]
    if not chars or not args.xs or not args.t2s:
        raise ValueError("empty grid")
    xs = [ExactX(x) for x in args.xs]
    settings = DEFAULT_ZERO_SETTINGS
    top = max(args.t2s)
    if not top > args.t1 >= 1:
        raise ValueError(f"need T2 > T1 >= 1, got ({args.t1}, {top})")
    lists = _zero_lists(chars, args.t1, top, settings, cache, args.jobs)
    reports = []
    for chi, full in zip(chars, lists):
        for t2 in sorted(args.t2s):
            zl = full if t2 == top else full.restrict(args.t1, t2)
            reports.extend(report_from_zeros(chi, x, zl, args.t1, t2, settings.fingerprint())
                           for x in xs)
    rows = [r.to_dict() for r in reports]
    worst = max(reports, key=lambda r: r.ratio)
    certified = all(r.certified for r in reports)
    summary = {"reports": rows, "max_ratio": worst.ratio,
               "max_ratio_cell": {"label": worst.label, "x": worst.x, "t2": worst.t2},
               "threshold": args.threshold, "within_threshold": worst.ratio <= args.threshold,
               "params": {"moduli": args.moduli, "xs": [str(x) for x in xs],
                          "t1": args.t1, "t2s": sorted(args.t2s)},
               "certified": certified, "settings_fingerprint": settings.fingerprint(),
               "version": __version__}
    emit(args, summary, rows, CSV_COLUMNS)
    if args.plot:
        from .plotting import plot_landau_ratios
        plot_landau_ratios(reports, args.plot, args.threshold)
    return EXIT_OK if certified else EXIT_ACCURACY


BURGESS_COLUMNS = ("label", "found", "p0", "distance", "scaled", "bound", "threshold",
                   "char_sum_abs", "burgess_rhs", "burgess_ratio")


def cmd_burgess(args) -> int:
    scan = scan_lemma3(args.q_range, args.theta, args.c3, args.c4, args.cubefree_only,
                       args.coprime)
    bur = burgess_scan(args.q_range, args.theta, args.cubefree_only)
    by_label = {r.label: r for r in bur}
    rows = []
    for w in scan.rows:
        b = by_label.get(w.label)
        rows.append({"label": w.label, "found": w.found, "p0": w.p0, "distance": w.distance,
                     "scaled": w.scaled, "bound": w.bound, "threshold": w.threshold,
                     "char_sum_abs": b.magnitude if b else None,
                     "burgess_rhs": b.burgess_rhs if b else None,
                     "burgess_ratio": b.ratio if b else None})
    worst = scan.worst
    summary = {"rows": rows, "all_found": scan.all_found,
               "worst": None if worst is None else worst.label,
               "max_burgess_ratio": max((r.ratio for r in bur), default=None),
               "params": {"q_range": [args.q_range.start, args.q_range.stop - 1],
                          "theta": args.theta, "c3": args.c3, "c4": args.c4,
                          "cubefree_only": args.cubefree_only, "coprime": args.coprime},
               "version": __version__}
    emit(args, summary, rows, BURGESS_COLUMNS)
    if args.plot:
        from .plotting import plot_witnesses
        plot_witnesses(scan, bur, args.plot)
    return EXIT_OK


def cmd_distinct(args) -> int:
    chi1, chi2 = _primitive(args.label1), _primitive(args.label2)
    params = _distinct_params(args)
    reg = region(chi1.modulus, args.T, params)
    diff = compare_zero_multisets(chi1, chi2, reg.t_lo, reg.t_hi, args.tol, _cache(args))
    report = {"labels": [str(chi1.label), str(chi2.label)], "T": args.T,
              "params": params.as_dict(),
              "region": {"t_lo": reg.t_lo, "t_hi": reg.t_hi, "width": reg.width,
                         "in_hypothesis": reg.in_hypothesis},
              "diff": diff.to_dict(), "certified": diff.verdict != "withheld",
              "settings_fingerprint": DEFAULT_ZERO_SETTINGS.fingerprint(),
              "version": __version__}
    emit(args, report)
    return EXIT_OK if report["certified"] else EXIT_ACCURACY


def cmd_verify_thm1(args) -> int:
    chi1, chi2 = _primitive(args.label1), _primitive(args.label2)
    rep = verify_thm1(chi1, chi2, args.T, _distinct_params(args), _cache(args), tol=args.tol)
    emit(args, rep.to_dict())
    if rep.status != "ok" or not rep.certified:
        return EXIT_ACCURACY
    return EXIT_OK


COMMANDS = {"chars": cmd_chars, "eval": cmd_eval, "zeros": cmd_zeros, "landau": cmd_landau,
            "verify-thm2": cmd_verify_thm2, "burgess": cmd_burgess,
            "distinct": cmd_distinct, "verify-thm1": cmd_verify_thm1}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (AccuracyError, IncompleteError) as exc:
        print(f"lzeros: accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (ValueError, TypeError) as exc:
        print(f"lzeros: rejected input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
