"""sumset-lab command line.

Exit codes: 0 success, 1 a checked inequality failed (a bug signal, since
every check is a theorem), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import BoundReport, bound_suite, rho
from .constructions import FAMILIES, build
from .extractor import (EXACT_SUBSET_LIMIT, EXACT_WINDOW_LIMIT, ExtractionReport,
                        StabilityReport, inverse_extract, stability_analyze)
from .group import GroupSpec
from .harness import ConfigError, default_jobs, fuzz_check, read_config, sweep, write_outputs
from .shadow import lexmin_embedding, shadow, tuple_embedding
from .sumsets import PointSet, PtsFormatError, format_pts, is_dissociated, read_pts, sumset_chain

log = logging.getLogger("sumset_lab")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- JSON rendering --------------------------------------------------------------

def jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator, "float": float(v)}
    if isinstance(v, float):
        return v
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "elements"):  # PointSet
        return [list(p) for p in v.elements]
    if hasattr(v, "item"):
        return v.item()
    return str(v)


def _dump(obj):
    print(json.dumps(jsonable(obj), indent=2, sort_keys=False))


def _load(path) -> PointSet:
    try:
        A, _ = read_pts(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (PtsFormatError, OSError) as exc:
        raise UsageError(str(exc)) from None
    if not len(A):
        raise UsageError(f"{path}: the set is empty")
    return A


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


# -- subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    kw = {k: getattr(args, k) for k in ("n", "base", "m", "K", "p", "seed", "k", "d", "h", "alpha")
          if getattr(args, k) is not None}
    try:
        A, realized = build(args.family, **kw)
    except KeyError as exc:
        raise UsageError(f"family {args.family} needs --{exc.args[0]}") from None
    except (ValueError, OverflowError) as exc:
        raise UsageError(str(exc)) from None
    comment = f"{args.family} " + " ".join(f"{k}={v}" for k, v in kw.items())
    text = format_pts(A, [comment])
    meta = {"family": args.family, "size": len(A), "group": list(A.group.moduli),
            "params": realized}
    if args.output:
        out = Path(args.output)
        out.write_text(text)
        out.with_suffix(".json").write_text(json.dumps(jsonable(meta), indent=2) + "\n")
        print(f"wrote {len(A)} points to {out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _stats(A, H):
    chain = sumset_chain(A, H)
    sizes = [len(S) for S in chain]
    n = sizes[0]
    return {
        "group": list(A.group.moduli),
        "sizes": sizes,
        "K": Fraction(sizes[1], n) if H >= 2 else None,
        "alpha": {h: Fraction(sizes[h - 1], n) for h in range(2, H + 1)},
        "rho": {h: rho(sizes[h - 1], sizes[h], h) for h in range(2, H)},
    }


def cmd_stats(args) -> int:
    A = _load(args.input)
    if args.max_h < 2:
        raise UsageError("--max-h must be at least 2")
    st = _stats(A, args.max_h)
    if args.json:
        _dump(st)
    else:
        for h, s in enumerate(st["sizes"], 1):
            print(f"|{h}A| = {s}")
        print(f"K = {float(st['K']):.6g}")
        for h, r in st["rho"].items():
            print(f"rho_{h} = {r:.6g}")
    return EXIT_OK


def _bound_json(rep: BoundReport):
    return {
        "sizes": rep.sizes,
        "x": rep.xs,
        "all_hold": rep.all_hold,
        "checks": [{"name": c.name, "h": c.h, "value": c.value, "relation": c.relation,
                    "bound": c.bound,
                    "holds": c.holds, "exact": c.exact} for c in rep.checks],
    }


def cmd_check(args) -> int:
    A = _load(args.input)
    if args.max_h < 3:
        raise UsageError("--max-h must be at least 3")
    rep = bound_suite(A, args.max_h)
    if args.json:
        _dump(_bound_json(rep))
    else:
        for c in rep.checks:
            mark = "ok  " if c.holds else "FAIL"
            print(f"{mark} {c.name:<17} h={c.h}  {c.value} {c.relation} {float(c.bound):.6g}")
    if not rep.all_hold:
        print("witness set:", file=sys.stderr)
        sys.stderr.write(format_pts(A))
    return EXIT_OK if rep.all_hold else EXIT_VIOLATION


def cmd_embed(args) -> int:
    A = _load(args.input)
    if args.h < 2:
        raise UsageError("--h must be at least 2")
    S, C = lexmin_embedding(A, args.h), lexmin_embedding(A, args.h - 1)
    dS = shadow(S)
    ok = dS.as_set() == C.as_set()
    if args.json:
        _dump({"h": args.h, "sizes": {"S": len(S), "C": len(C), "shadow": len(dS)},
               "shadow_identity": ok})
        return EXIT_OK if ok else EXIT_VIOLATION
    if args.tuples:
        pts = A.elements
        print(f"# S: lexicographically minimal {args.h}-tuples")
        for t in tuple_embedding(A, args.h):
            print(" ".join(",".join(map(str, pts[i])) for i in t))
    else:
        for title, fam in ((f"S: minimal {args.h}-multisets", S),
                           (f"C: minimal {args.h - 1}-multisets", C), ("shadow of S", dS)):
            print(f"# {title} ({len(fam)})")
            for line in fam.lines():
                print(line)
    print(f"# shadow identity: {'ok' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_dissoc(args) -> int:
    A = _load(args.input)
    if args.h < 2:
        raise UsageError("--h must be at least 2")
    res = is_dissociated(A, args.h)
    if args.json:
        _dump({"h": args.h, "dissociated": res})
    else:
        print("true" if res else "false")
    return EXIT_OK


def _extraction_json(rep: ExtractionReport):
    return {
        "variant": rep.variant, "h": rep.h, "M": rep.M, "strategy": rep.strategy,
        "sizes": rep.sizes, "hypothesis_holds": rep.hypothesis_holds,
        "hypothesis": rep.hypothesis, "delta": rep.delta,
        "X": rep.X, "Y": rep.Y, "size_y": rep.size_y, "size_sum_y": rep.size_sum_y,
        "y_lower": rep.y_lower, "y_upper": rep.y_upper, "sum_y_lower": rep.sum_y_lower,
        "conclusion1_holds": rep.conclusion1_holds, "conclusion2_holds": rep.conclusion2_holds,
        "large_subset": None if rep.large_subset is None else {
            "size": len(rep.large_subset.X), "min_size": rep.large_subset.min_size,
            "sumset_size": rep.large_subset.sumset_size, "bound": rep.large_subset.bound,
            "bound_holds": rep.large_subset.bound_holds},
        "notes": rep.notes,
    }


def cmd_extract(args) -> int:
    A = _load(args.input)
    try:
        rep = inverse_extract(A, args.h, args.M, args.variant, args.strategy, args.threshold,
                              force=args.force)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _dump(_extraction_json(rep))
    else:
        print(f"variant {rep.variant}, h={rep.h}, M={rep.M}: sizes {rep.sizes}")
        if rep.delta is None:
            print("not applicable: hypotheses fail", rep.hypothesis)
        else:
            print(f"delta = {rep.delta:.6g}, |X| = {len(rep.X)}, |Y| = {rep.size_y}, "
                  f"|{rep.h + 1}Y| = {rep.size_sum_y}")
            print(f"conclusion 1 ({rep.y_lower:.4g} <= |Y| < {rep.y_upper:.4g}): "
                  f"{rep.conclusion1_holds}")
            print(f"conclusion 2 (|{rep.h + 1}Y| >= {rep.sum_y_lower:.4g}): {rep.conclusion2_holds}")
        for note in rep.notes:
            print("note:", note)
    guaranteed = rep.hypothesis_holds and rep.strategy == "exact"
    if guaranteed and not (rep.conclusion1_holds and rep.conclusion2_holds):
        return EXIT_VIOLATION
    if rep.large_subset is not None and rep.strategy == "exact" and not rep.large_subset.bound_holds:
        return EXIT_VIOLATION
    return EXIT_OK


def _stability_json(rep: StabilityReport):
    return {
        "x": rep.x, "delta": rep.delta, "window": rep.window, "Y": rep.Y,
        "size_y": rep.size_y, "size_3y": rep.size_3y, "triple_lower": rep.triple_lower,
        "size_window_holds": rep.size_window_holds,
        "triple_bound_holds": rep.triple_bound_holds,
        "delta_within_theorem": rep.delta_within_theorem, "x_y": rep.x_y,
        "macaulay_y_holds": rep.macaulay_y_holds, "strategy": rep.strategy, "notes": rep.notes,
    }


def cmd_stability(args) -> int:
    A = _load(args.input)
    try:
        rep = stability_analyze(A, args.strategy, args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _dump(_stability_json(rep))
    else:
        print(f"x = {float(rep.x):.6g}, delta = {float(rep.delta):.6g}, "
              f"window [{rep.window[0]:.4g}, {rep.window[1]:.4g})")
        if rep.Y is not None:
            print(f"|Y| = {rep.size_y}, |3Y| = {rep.size_3y} "
                  f"(needs >= {rep.triple_lower:.6g}): {rep.triple_bound_holds}")
        for note in rep.notes:
            print("note:", note)
    return EXIT_OK if rep.macaulay_y_holds else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    try:
        cfg = read_config(args.config)
    except FileNotFoundError:
        raise UsageError(f"no such file: {args.config}") from None
    except ConfigError as exc:
        raise UsageError(f"{args.config}: {exc}") from None
    if cfg.family not in FAMILIES:
        raise UsageError(f"unknown family {cfg.family!r}")
    output = args.output or cfg.output
    if not output:
        raise UsageError("no output path: set 'output' in the config or pass -o")
    records = sweep(cfg, args.jobs)
    try:
        csv_path, jsonl_path = write_outputs(cfg, records, output)
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from None
    bad = [r for r in records if not r.bounds_ok or any(r.rho(h) > 1 for h in range(2, cfg.max_h))]
    print(f"{len(records)} records -> {csv_path}, {jsonl_path}")
    for r in bad:
        print(f"violation at grid point {r.index}: {r.violations}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_fuzz(args) -> int:
    try:
        group = GroupSpec.parse(args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        summary = fuzz_check(group, args.trials, args.size_max, args.seed, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    moduli = " ".join(map(str, group.moduli))
    print(f"{summary.trials} trials in group [{moduli}], size <= {summary.size_max}, "
          f"seed {summary.seed}: {len(summary.violations)} violations")
    for v in summary.violations:
        print(f"trial {v.trial}: {', '.join(v.checks)}")
        print(format_pts(v.witness, [f"minimized witness for {v.checks[0]}"]), end="")
    return EXIT_OK if summary.ok else EXIT_VIOLATION


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sumset-lab", description="Sumset growth experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a construction family member")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("-o", "--output", help=".pts path (a .json sidecar is written next to it)")
    for name in ("n", "base", "m", "seed", "k", "d", "h"):
        g.add_argument(f"--{name}", type=int)
    for name in ("K", "p", "alpha"):
        g.add_argument(f"--{name}", type=_fraction)
    g.set_defaults(func=cmd_gen)

    def with_input(sp):
        sp.add_argument("-i", "--input", required=True)
        return sp

    s = with_input(sub.add_parser("stats", help="sumset sizes and growth ratios"))
    s.add_argument("--max-h", type=int, default=3)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    c = with_input(sub.add_parser("check", help="evaluate every sumset inequality"))
    c.add_argument("--max-h", type=int, default=3)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    e = with_input(sub.add_parser("embed", help="lexicographically minimal embedding of hA"))
    e.add_argument("--h", type=int, default=2)
    e.add_argument("--tuples", action="store_true", help="list ordered tuples instead of multisets")
    e.add_argument("--json", action="store_true", help="summary only")
    e.set_defaults(func=cmd_embed)

    d = with_input(sub.add_parser("dissoc", help="test h-dissociativity"))
    d.add_argument("--h", type=int, default=2)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dissoc)

    x = with_input(sub.add_parser("extract", help="constructive inverse theorem"))
    x.add_argument("--h", type=int, default=2)
    x.add_argument("--M", type=_fraction, required=True)
    x.add_argument("--variant", choices=("h2", "alpha", "K"), default="h2")
    x.add_argument("--strategy", choices=("exact", "greedy"), default="exact")
    x.add_argument("--threshold", type=int, default=EXACT_SUBSET_LIMIT)
    x.add_argument("--force", action="store_true",
                   help="run even when only the M range hypothesis holds")
    x.add_argument("--json", action="store_true")
    x.set_defaults(func=cmd_extract)

    st = with_input(sub.add_parser("stability", help="near-dissociated subset search"))
    st.add_argument("--strategy", choices=("exact", "greedy"), default="exact")
    st.add_argument("--threshold", type=int, default=EXACT_WINDOW_LIMIT)
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_stability)

    sw = sub.add_parser("sweep", help="run a parameter sweep config")
    sw.add_argument("config")
    sw.add_argument("-o", "--output", help="output base path (overrides the config)")
    sw.add_argument("-j", "--jobs", type=int, default=None)
    sw.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fuzz", help="random property checks")
    f.add_argument("--group", default="0", help="moduli, e.g. '0' for Z or '16 16'")
    f.add_argument("--trials", type=int, default=500)
    f.add_argument("--size-max", type=int, default=8)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("-j", "--jobs", type=int, default=default_jobs())
    f.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
