"""Batch experiment harness.

Builds instances from specs, runs the exploration algorithms and the greedy
spanner over them, applies the competitive-ratio / lightness bound matching
each family's (known) genus, and produces deterministic report rows for the
CLI.  All quantities in rows are exact "p/q" strings; *_float columns are
advisory conveniences.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Graph, as_fraction, minimum_spanning_tree, restrict
from .errors import ParseError
from .exploration import (
    ExplorationParams,
    TieBreak,
    run_blocking,
    run_nearest_neighbor,
    taken_union_mst,
)
from .instances import BuiltInstance, InstanceSpec, build_instance
from .oracle import (
    brute_force_exploration,
    brute_force_optspan,
    enumerate_cycles_check,
    exact_tsp,
)
from .spanner import (
    greedy_spanner,
    verify_mst_containment,
    verify_spanner_minimality,
    verify_spanner_stretch,
)

_TSP_ROW_MAX_N = 15
_SAMPLED_STRETCH_PAIRS = 2000

EXPLORE_CHECKS = ("cost_chain", "cycle_minimality")
SPANNER_CHECKS = ("stretch", "minimality", "mst_containment")


def dyadic_log2(n: int) -> Fraction:
    """log2(n) rounded to a dyadic grid finer than 1/n^2; exact integers in,
    exact rational out (shift-and-square digit extraction, no floats)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    s = (n * n - 1).bit_length()  # 2^s >= n^2
    prec = s + 16
    a = n.bit_length() - 1
    y = (n << prec) >> a  # n / 2^a in [1, 2), fixed point
    bits = 0
    for _ in range(prec):
        y = (y * y) >> prec
        bits <<= 1
        if y >> (prec + 1):
            bits |= 1
            y >>= 1
    frac_bits = (bits + (1 << 15)) >> 16  # round the 16 guard bits away
    return a + Fraction(frac_bits, 1 << s)


def resolve_delta(expr, n: int) -> Fraction:
    """A delta expression is either a rational or the string "log2n"."""
    if expr == "log2n":
        return dyadic_log2(n)
    return as_fraction(expr)


def competitive_bound(delta: Fraction, genus: int | None) -> Fraction | None:
    """Cost/w(MST) bound 2(d+2)(1+2/d)(1+2g/(1+d)) for known-genus families."""
    if genus is None:
        return None
    d = as_fraction(delta)
    return 2 * (d + 2) * (1 + Fraction(2) / d) * (1 + Fraction(2 * genus) / (1 + d))


def lightness_bound(epsilon: Fraction, genus: int | None) -> Fraction | None:
    """Greedy-spanner lightness bound (1+2/e)(1+2g/(1+e)) for known genus."""
    if genus is None:
        return None
    e = as_fraction(epsilon)
    return (1 + Fraction(2) / e) * (1 + Fraction(2 * genus) / (1 + e))


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str  # "blocking" | "nearest_neighbor"
    delta: object = None  # Fraction or "log2n"; None for nearest_neighbor

    def __post_init__(self):
        if self.name == "blocking":
            if self.delta != "log2n":
                object.__setattr__(self, "delta", as_fraction(self.delta))
        elif self.name == "nearest_neighbor":
            if self.delta is not None:
                raise ValueError("nearest_neighbor takes no delta")
        else:
            raise ValueError(f"unknown algorithm {self.name!r}")

    @property
    def label(self) -> str:
        if self.name == "blocking":
            return f"blocking[{self.delta}]"
        return self.name

    def to_json_dict(self) -> dict:
        out = {"name": self.name}
        if self.name == "blocking":
            out["delta"] = str(self.delta)
        return out

    @classmethod
    def from_json_dict(cls, d: dict) -> "AlgorithmSpec":
        return cls(name=d["name"], delta=d.get("delta"))


@dataclass
class ExperimentConfig:
    instances: list
    algorithms: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    checks: tuple = EXPLORE_CHECKS + SPANNER_CHECKS
    jobs: int = 1
    strict: bool = False
    out_path: str | None = None
    out_format: str = "csv"

    def __post_init__(self):
        if not self.instances:
            raise ValueError("config needs at least one instance")
        self.epsilons = [as_fraction(e) for e in self.epsilons]
        known = set(EXPLORE_CHECKS + SPANNER_CHECKS)
        bad = set(self.checks) - known
        if bad:
            raise ValueError(f"unknown checks: {sorted(bad)}")
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.out_format!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @classmethod
    def from_json_dict(cls, d: dict) -> "ExperimentConfig":
        try:
            instances = [InstanceSpec.from_json_dict(i) for i in d["instances"]]
            algorithms = [AlgorithmSpec.from_json_dict(a) for a in d.get("algorithms", [])]
            out = d.get("output", {})
            return cls(
                instances=instances,
                algorithms=algorithms,
                epsilons=d.get("epsilons", []),
                checks=tuple(d.get("checks", EXPLORE_CHECKS + SPANNER_CHECKS)),
                jobs=int(d.get("parallelism", d.get("jobs", 1))),
                strict=bool(d.get("strict", False)),
                out_path=out.get("path"),
                out_format=out.get("format", "csv"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad experiment config: {exc}") from exc


def _fmt(x) -> str:
    if x is None:
        return ""
    return str(x)


def _ffloat(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _tie_break_for(built: BuiltInstance) -> TieBreak:
    if built.tie_break_script is not None:
        return TieBreak.adversarial(built.tie_break_script)
    return TieBreak.by_edge_id()


def explore_row(built: BuiltInstance, algo: AlgorithmSpec, checks) -> dict:
    """One report row: run `algo` on the built instance and bound-check it."""
    g = built.graph
    delta = None
    if algo.name == "blocking":
        delta = resolve_delta(algo.delta, g.n)
        params = ExplorationParams(
            delta=delta,
            start=built.start,
            tie_break=_tie_break_for(built),
            verify_invariants=bool({"cost_chain", "cycle_minimality"} & set(checks)),
        )
        log = run_blocking(g, params)
    else:
        log = run_nearest_neighbor(g, built.start)
    mst_w = minimum_spanning_tree(g).weight()
    ratio = log.total_cost / mst_w if mst_w else None
    bound = competitive_bound(delta, built.genus) if delta is not None else None
    bound_ok = None if (bound is None or ratio is None) else ratio <= bound
    opt = None
    if g.n <= _TSP_ROW_MAX_N:
        opt = exact_tsp(g, built.start).cost
    checks_ok = True
    failed = []
    for name in ("cost_chain", "cycle_minimality"):
        if name in checks and algo.name == "blocking":
            verdict = log.verification.get(name, {}).get("ok")
            if verdict is not True:
                checks_ok = False
                failed.append(name)
    return {
        "instance": built.spec.label,
        "n": str(g.n),
        "m": str(g.edge_count),
        "genus": _fmt(built.genus),
        "algorithm": algo.name,
        "delta": _fmt(delta),
        "total_cost": str(log.total_cost),
        "total_cost_float": _ffloat(log.total_cost),
        "mst_weight": str(mst_w),
        "ratio_vs_mst": _fmt(ratio),
        "ratio_vs_mst_float": _ffloat(ratio),
        "bound": _fmt(bound),
        "bound_ok": "" if bound_ok is None else ("yes" if bound_ok else "no"),
        "opt_cost": _fmt(opt),
        "ratio_vs_opt": _fmt(log.total_cost / opt if opt else None),
        "verified_ok": "yes" if checks_ok else "no:" + ",".join(failed),
    }


EXPLORE_COLUMNS = (
    "instance", "n", "m", "genus", "algorithm", "delta",
    "total_cost", "total_cost_float", "mst_weight",
    "ratio_vs_mst", "ratio_vs_mst_float", "bound", "bound_ok",
    "opt_cost", "ratio_vs_opt", "verified_ok",
)


def spanner_row(built: BuiltInstance, epsilon: Fraction, checks) -> dict:
    g = built.graph
    res = greedy_spanner(g, epsilon)
    bound = lightness_bound(epsilon, built.genus)
    bound_ok = None if bound is None else res.lightness <= bound
    verdicts = {}
    if "stretch" in checks:
        if g.n <= 2000:
            rep = verify_spanner_stretch(g, res.edges, epsilon)
        else:
            rep = verify_spanner_stretch(
                g, res.edges, epsilon, mode="sampled", seed=0, count=_SAMPLED_STRETCH_PAIRS
            )
        verdicts["stretch"] = rep.ok
    if "minimality" in checks:
        sub, _ = restrict(g, res.edges)
        verdicts["minimality"] = verify_spanner_minimality(sub, epsilon).ok
    if "mst_containment" in checks:
        verdicts["mst_containment"] = verify_mst_containment(g, res.edges).ok
    failed = sorted(k for k, v in verdicts.items() if not v)
    return {
        "instance": built.spec.label,
        "n": str(g.n),
        "m": str(g.edge_count),
        "genus": _fmt(built.genus),
        "epsilon": str(epsilon),
        "kept_edges": str(len(res.edges)),
        "spanner_weight": str(res.edges.weight()),
        "spanner_weight_float": _ffloat(res.edges.weight()),
        "mst_weight": str(minimum_spanning_tree(g).weight()),
        "lightness": str(res.lightness),
        "lightness_float": _ffloat(res.lightness),
        "bound": _fmt(bound),
        "bound_ok": "" if bound_ok is None else ("yes" if bound_ok else "no"),
        "stretch_certificate": str(res.stretch_certificate),
        "stretch_certificate_float": _ffloat(res.stretch_certificate),
        "verified_ok": "yes" if not failed else "no:" + ",".join(failed),
    }


SPANNER_COLUMNS = (
    "instance", "n", "m", "genus", "epsilon", "kept_edges",
    "spanner_weight", "spanner_weight_float", "mst_weight",
    "lightness", "lightness_float", "bound", "bound_ok",
    "stretch_certificate", "stretch_certificate_float", "verified_ok",
)


def verify_rows(built: BuiltInstance, config: ExperimentConfig) -> list[dict]:
    """Cross-check campaign rows for one instance.

    Runs every configured blocking delta with full invariant verification,
    compares the cycle property against brute-force cycle enumeration when
    the cyclomatic number permits, cross-checks the TSP oracles on tiny
    instances, and validates every configured spanner epsilon including the
    optimum-lightness comparison on tiny edge counts.
    """
    g = built.graph
    rows = []

    def row(check: str, param, ok: bool, detail: str = "") -> dict:
        return {
            "instance": built.spec.label,
            "check": check,
            "param": _fmt(param),
            "ok": "yes" if ok else "no",
            "detail": detail,
        }

    for algo in config.algorithms:
        if algo.name != "blocking":
            continue
        delta = resolve_delta(algo.delta, g.n)
        params = ExplorationParams(
            delta=delta, start=built.start, tie_break=_tie_break_for(built)
        )
        log = run_blocking(g, params)
        chain = log.verification["cost_chain"]
        rows.append(row("cost_chain", delta, chain["ok"]))
        cyc = log.verification["cycle_minimality"]
        rows.append(row("cycle_minimality", delta, cyc["ok"]))
        audit = log.verification["access_audit"]
        rows.append(
            row("online_purity", delta, audit["violations"] == 0,
                f"reads={audit['adjacency_reads']}")
        )
        # brute-force agreement on the taken-plus-MST subgraph
        s_edges = taken_union_mst(g, log)
        sub, _ = restrict(g, s_edges)
        nu = sub.edge_count - sub.n + 1
        if nu <= 12:
            rep = enumerate_cycles_check(sub, 1 + delta)
            rows.append(
                row("cycle_enumeration_agreement", delta,
                    rep.ok == cyc["ok"] and rep.ok,
                    f"cycles={rep.cycles_checked}")
            )
    if g.n <= 8:
        a = exact_tsp(g, built.start)
        b = brute_force_exploration(g, built.start)
        rows.append(row("tsp_permutation_agreement", None, a.cost == b.cost,
                        f"cost={a.cost}"))
    if g.n <= _TSP_ROW_MAX_N:
        lo = minimum_spanning_tree(g).weight()
        t = exact_tsp(g, built.start)
        rows.append(row("tsp_mst_sandwich", None, lo <= t.cost <= 2 * lo))
    for eps in config.epsilons:
        res = greedy_spanner(g, eps)
        sub, _ = restrict(g, res.edges)
        ok_stretch = verify_spanner_stretch(g, res.edges, eps).ok if g.n <= 2000 else (
            verify_spanner_stretch(g, res.edges, eps, mode="sampled", seed=0,
                                   count=_SAMPLED_STRETCH_PAIRS).ok
        )
        rows.append(row("spanner_stretch", eps, ok_stretch))
        rows.append(row("spanner_minimality", eps, verify_spanner_minimality(sub, eps).ok))
        rows.append(row("spanner_mst_containment", eps, verify_mst_containment(g, res.edges).ok))
        if g.edge_count <= 20:
            best = brute_force_optspan(g, eps)
            rows.append(
                row("optspan_lower_bounds_greedy", eps, best <= res.lightness,
                    f"opt={best} greedy={res.lightness}")
            )
    return rows


VERIFY_COLUMNS = ("instance", "check", "param", "ok", "detail")


def _explore_task(args) -> list[dict]:
    spec_json, algo_jsons, checks = args
    built = build_instance(InstanceSpec.from_json_dict(json.loads(spec_json)))
    return [
        explore_row(built, AlgorithmSpec.from_json_dict(json.loads(a)), checks)
        for a in algo_jsons
    ]


def _spanner_task(args) -> list[dict]:
    spec_json, eps_strs, checks = args
    built = build_instance(InstanceSpec.from_json_dict(json.loads(spec_json)))
    return [spanner_row(built, as_fraction(e), checks) for e in eps_strs]


def _verify_task(args) -> list[dict]:
    spec_json, config_json = args
    config = ExperimentConfig.from_json_dict(json.loads(config_json))
    built = build_instance(InstanceSpec.from_json_dict(json.loads(spec_json)))
    return verify_rows(built, config)


def _run_tasks(task_fn, tasks, jobs: int) -> list[dict]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(task_fn, tasks))
    else:
        chunks = [task_fn(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def _num(s: str) -> Fraction:
    return as_fraction(s) if s else Fraction(-1)


def _sort_key_explore(row: dict):
    return (row["instance"], row["algorithm"], _num(row["delta"]))


def run_explore(config: ExperimentConfig) -> list[dict]:
    algos = [a for a in config.algorithms if a.name in ("blocking", "nearest_neighbor")]
    if not algos:
        raise ValueError("explore needs at least one algorithm")
    checks = tuple(c for c in config.checks if c in EXPLORE_CHECKS)
    tasks = [
        (json.dumps(s.to_json_dict()), [json.dumps(a.to_json_dict()) for a in algos], checks)
        for s in config.instances
    ]
    rows = _run_tasks(_explore_task, tasks, config.jobs)
    rows.sort(key=_sort_key_explore)
    return rows


def run_spanner(config: ExperimentConfig) -> list[dict]:
    if not config.epsilons:
        raise ValueError("spanner needs at least one epsilon")
    checks = tuple(c for c in config.checks if c in SPANNER_CHECKS)
    tasks = [
        (json.dumps(s.to_json_dict()), [str(e) for e in config.epsilons], checks)
        for s in config.instances
    ]
    rows = _run_tasks(_spanner_task, tasks, config.jobs)
    rows.sort(key=lambda r: (r["instance"], _num(r["epsilon"])))
    return rows


def run_verify(config: ExperimentConfig) -> list[dict]:
    cfg_json = json.dumps(
        {
            "instances": [s.to_json_dict() for s in config.instances],
            "algorithms": [a.to_json_dict() for a in config.algorithms],
            "epsilons": [str(e) for e in config.epsilons],
        }
    )
    tasks = [(json.dumps(s.to_json_dict()), cfg_json) for s in config.instances]
    rows = _run_tasks(_verify_task, tasks, config.jobs)
    rows.sort(key=lambda r: (r["instance"], r["check"], r["param"]))
    return rows


def report_failures(rows: list[dict], strict: bool) -> list[str]:
    """Row-level failures that should drive a nonzero exit.

    Bound violations always count; verification verdicts count under strict.
    """
    bad = []
    for r in rows:
        if r.get("bound_ok") == "no":
            bad.append(f"{r['instance']}: bound exceeded")
        if r.get("ok") == "no":
            bad.append(f"{r['instance']}: check {r.get('check')} failed")
        if strict and r.get("verified_ok", "yes").startswith("no"):
            bad.append(f"{r['instance']}: verification failed ({r['verified_ok']})")
    return bad
