"""Parameter sweeps over the construction families and randomized fuzzing
of every inequality checker.

Sweep configs are flat ``key = value`` text::

    # ruzsa sharpness table
    family = ruzsa
    m = [2, 3, 4]
    K = m^2
    max_h = 3
    output = out/ruzsa

Reserved keys are ``family``, ``max_h`` (default 3), ``seeds`` (list; fed
to the ``seed`` parameter of seeded families), ``output`` (``.csv`` and
``.jsonl`` are appended when missing) and ``jobs``.  Every other key is a
family parameter: a literal, a bracketed list of literals (a grid axis) or
an arithmetic expression in earlier parameters.  Grid order is the
row-major product of the axes in file order, then seeds.
"""

from __future__ import annotations

import ast
import csv
import io
import json
import logging
import operator
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from .bounds import bound_suite
from .constructions import build
from .group import GroupSpec
from .shadow import triangle_stats, tuple_embedding_projections, verify_shadow_identity
from .sumsets import PointSet

log = logging.getLogger(__name__)

JOBS_ENV = "SUMSET_LAB_JOBS"
RESERVED = ("family", "max_h", "seeds", "output", "jobs")


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


# -- config ------------------------------------------------------------------

class ConfigError(ValueError):
    pass


_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv,
    ast.Pow: operator.pow, ast.Mod: operator.mod,
}


def safe_eval(expr: str, names: dict):
    """Arithmetic on numbers and known names; ``^`` means power and ``/``
    is exact division."""
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse {expr!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ConfigError(f"unknown name {node.id!r} in {expr!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div) and not isinstance(a, float) and not isinstance(b, float):
                q = Fraction(a) / Fraction(b)
                return int(q) if q.denominator == 1 else q
            return _BINOPS[type(node.op)](a, b)
        if isinstance(node, ast.List):
            return [ev(e) for e in node.elts]
        raise ConfigError(f"unsupported syntax in {expr!r}")

    return ev(tree)


@dataclass
class SweepConfig:
    family: str
    axes: dict = field(default_factory=dict)  # name -> list of values
    derived: dict = field(default_factory=dict)  # name -> expression text
    order: list = field(default_factory=list)  # parameter names in file order
    max_h: int = 3
    seeds: list = field(default_factory=list)
    output: str | None = None
    jobs: int = 1

    @property
    def param_names(self) -> list[str]:
        names = list(self.order)
        if self.seeds and "seed" not in names:
            names.append("seed")
        return names

    def grid(self) -> list[dict]:
        """Parameter dicts in grid order (derived values filled in)."""
        axis_names = [k for k in self.order if k in self.axes]
        seeds = self.seeds or [None]
        out = []
        for combo in product(*(self.axes[k] for k in axis_names), seeds):
            point = dict(zip(axis_names, combo[:-1]))
            env = dict(point)
            for k in self.order:
                if k in self.derived:
                    env[k] = safe_eval(self.derived[k], env)
            if combo[-1] is not None:
                env["seed"] = combo[-1]
            out.append({k: env[k] for k in self.param_names})
        return out


def parse_config(text: str) -> SweepConfig:
    raw = {}
    order = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key.isidentifier():
            raise ConfigError(f"line {lineno}: bad key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
        if key not in RESERVED:
            order.append(key)
    if "family" not in raw:
        raise ConfigError("missing 'family'")
    cfg = SweepConfig(family=raw["family"], order=order)
    try:
        cfg.max_h = int(raw.get("max_h", 3))
        cfg.jobs = int(raw["jobs"]) if "jobs" in raw else default_jobs()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.max_h < 3:
        raise ConfigError("max_h must be at least 3")
    if "seeds" in raw:
        seeds = safe_eval(raw["seeds"], {})
        cfg.seeds = [int(s) for s in (seeds if isinstance(seeds, list) else [seeds])]
    cfg.output = raw.get("output")
    for k in order:
        v = raw[k]
        if v.startswith("["):
            vals = safe_eval(v, {})
            cfg.axes[k] = vals
        else:
            try:
                cfg.axes[k] = [safe_eval(v, {})]
            except ConfigError:
                cfg.derived[k] = v
    # derived names must resolve against earlier parameters
    known = set()
    for k in order:
        if k in cfg.derived:
            safe_eval(cfg.derived[k], {n: 1 for n in known})
        known.add(k)
    return cfg


def read_config(path) -> SweepConfig:
    return parse_config(Path(path).read_text())


# -- sweeps --------------------------------------------------------------------

@dataclass
class RunRecord:
    index: int
    family: str
    params: dict  # the grid point as configured
    realized: dict  # realized construction parameters
    sizes: tuple[int, ...]  # |A|, |2A|, ..., |HA|
    bounds_ok: bool
    violations: list
    wall_time: float

    @property
    def K(self) -> float:
        return self.sizes[1] / self.sizes[0]

    def alpha(self, h: int) -> float:
        return self.sizes[h - 1] / self.sizes[0]

    def rho(self, h: int) -> float:
        """|(h+1)A| / (alpha_h |A|)^((h+1)/h)."""
        return self.sizes[h] / self.sizes[h - 1] ** ((h + 1) / h)

    def to_json(self) -> dict:
        H = len(self.sizes)
        return {
            "index": self.index,
            "family": self.family,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "realized": {k: _plain(v) for k, v in self.realized.items()},
            "sizes": list(self.sizes),
            "K": self.K,
            "alpha": {str(h): self.alpha(h) for h in range(2, H + 1)},
            "rho": {str(h): self.rho(h) for h in range(2, H)},
            "bounds_ok": self.bounds_ok,
            "violations": self.violations,
            "wall_time": self.wall_time,
        }


def _plain(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, list):
        return [_plain(x) for x in v]
    return v


def _run_point(args):
    index, family, params, max_h = args
    t0 = time.perf_counter()
    try:
        A, realized = build(family, **params)
    except (ValueError, OverflowError) as exc:
        return index, None, str(exc)
    rep = bound_suite(A, max_h)
    viol = [f"{c.name}(h={c.h})" for c in rep.violations()]
    return index, RunRecord(index, family, params, realized, rep.sizes, rep.all_hold, viol,
                            time.perf_counter() - t0), None


def sweep(cfg: SweepConfig, jobs: int | None = None) -> list[RunRecord]:
    """One record per valid grid point, ordered by grid index."""
    jobs = cfg.jobs if jobs is None else jobs
    tasks = [(i, cfg.family, p, cfg.max_h) for i, p in enumerate(cfg.grid())]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point, tasks))
    else:
        results = [_run_point(t) for t in tasks]
    records = []
    for index, rec, reason in sorted(results, key=lambda r: r[0]):
        if rec is None:
            log.warning("grid point %d %s skipped: %s", index, tasks[index][2], reason)
        else:
            records.append(rec)
    return records


def _param_column(name: str) -> str:
    # a parameter named like a measured column (K for most families) gets a suffix
    return f"{name}_param" if name in ("K", "bounds_ok", "family") else name


def csv_header(cfg: SweepConfig) -> list[str]:
    H = cfg.max_h
    return (["family", *map(_param_column, cfg.param_names), "|A|"]
            + [f"|{h}A|" for h in range(2, H + 1)]
            + ["K"] + [f"alpha_{h}" for h in range(2, H + 1)]
            + [f"rho_{h}" for h in range(2, H)] + ["bounds_ok"])


def format_csv(cfg: SweepConfig, records: list[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(cfg))
    H = cfg.max_h
    for r in records:
        w.writerow([r.family, *(_plain(r.params[k]) for k in cfg.param_names), *r.sizes,
                    repr(r.K), *(repr(r.alpha(h)) for h in range(2, H + 1)),
                    *(repr(r.rho(h)) for h in range(2, H)), str(r.bounds_ok).lower()])
    return buf.getvalue()


def format_jsonl(records: list[RunRecord]) -> str:
    return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in records)


def output_paths(output: str) -> tuple[Path, Path]:
    base = Path(output)
    if base.suffix in (".csv", ".jsonl"):
        base = base.with_suffix("")
    return base.with_name(base.name + ".csv"), base.with_name(base.name + ".jsonl")


def write_outputs(cfg: SweepConfig, records: list[RunRecord], output: str) -> tuple[Path, Path]:
    csv_path, jsonl_path = output_paths(output)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(format_csv(cfg, records))
    jsonl_path.write_text(format_jsonl(records))
    return csv_path, jsonl_path


# -- fuzzing -------------------------------------------------------------------

@dataclass
class Violation:
    trial: int
    checks: list
    witness: PointSet


@dataclass
class FuzzSummary:
    group: GroupSpec
    trials: int
    size_max: int
    seed: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def random_pointset(group: GroupSpec, size_max: int, rng: np.random.Generator,
                    spread: int = 12) -> PointSet:
    """1..size_max random points; Z coordinates drawn from [-spread, spread]."""
    k = int(rng.integers(1, size_max + 1))
    cols = []
    for n in group.moduli:
        cols.append(rng.integers(0, n, size=k) if n else rng.integers(-spread, spread + 1, size=k))
    return PointSet.from_array(group, np.stack(cols, axis=1))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def failed_checks(A: PointSet) -> list[str]:
    """Names of every inequality/identity that fails on A (empty when sound)."""
    out = [f"{c.name}(h={c.h})" for c in bound_suite(A, 4).violations()]
    for h in (2, 3, 4):
        if not verify_shadow_identity(A, h).passed:
            out.append(f"shadow-identity(h={h})")
    if not tuple_embedding_projections(A).passed:
        out.append("projections")
    if not triangle_stats(A).passed:
        out.append("triangle-stats")
    return out


def minimize_witness(A: PointSet, check: str) -> PointSet:
    """Drop elements one at a time while ``check`` keeps failing."""
    cur = A
    changed = True
    while changed and len(cur) > 1:
        changed = False
        for i in range(len(cur) - 1, -1, -1):
            cand = cur.take(j for j in range(len(cur)) if j != i)
            if check in failed_checks(cand):
                cur, changed = cand, True
                break
    return cur


def _fuzz_trial(args):
    group, size_max, seed, trial = args
    A = random_pointset(group, size_max, trial_rng(seed, trial))
    bad = failed_checks(A)
    if not bad:
        return None
    return Violation(trial, bad, minimize_witness(A, bad[0]))


def fuzz_check(group: GroupSpec, trials: int, size_max: int, seed: int = 0,
               jobs: int | None = None) -> FuzzSummary:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if size_max < 1:
        raise ValueError("size_max must be at least 1")
    jobs = default_jobs() if jobs is None else jobs
    tasks = [(group, size_max, seed, t) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fuzz_trial, tasks, chunksize=16))
    else:
        results = [_fuzz_trial(t) for t in tasks]
    return FuzzSummary(group, trials, size_max, seed, [v for v in results if v is not None])
