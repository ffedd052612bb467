"""Small-instance brute-force oracles.

Everything here recomputes quantities by exhaustive search so the fast
implementations can be cross-checked on instances small enough to afford it.
Each entry point guards its input size and raises ResourceGuardError rather
than silently taking forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .core import (
    INF,
    EdgeSubset,
    Graph,
    _dijkstra,
    as_fraction,
    fundamental_cycle,
    minimum_spanning_tree,
    require_connected,
)
from .errors import ResourceGuardError

_TSP_MAX_N = 15
_OPTSPAN_MAX_M = 20
_CYCLE_SPACE_MAX_NU = 12


@dataclass(frozen=True)
class TourResult:
    cost: Fraction
    order: tuple[int, ...]


def exact_tsp(g: Graph, start: int = 0) -> TourResult:
    """Cheapest closed walk visiting every vertex, by Held-Karp.

    Works on the metric closure, so the reported order is the visiting
    order and consecutive vertices may be far apart in g.  Guarded to
    n <= 15.
    """
    require_connected(g, "exact_tsp")
    n = g.n
    if n > _TSP_MAX_N:
        raise ResourceGuardError(f"exact_tsp guarded to n <= {_TSP_MAX_N} (got {n})")
    if not (0 <= start < n):
        raise ValueError(f"start {start} out of range")
    if n == 1:
        return TourResult(cost=Fraction(0), order=(start,))
    # metric closure in scaled ints
    dmat = []
    for s in range(n):
        dist, _ = _dijkstra(g, [(0, s)])
        dmat.append(dist)
    others = [v for v in range(n) if v != start]
    idx = {v: i for i, v in enumerate(others)}
    full = (1 << len(others)) - 1
    # dp[(mask, i)] = (cost of start -> ... -> others[i] covering mask, parent i)
    dp: dict[tuple[int, int], tuple[int, int]] = {}
    for i, v in enumerate(others):
        dp[(1 << i, i)] = (dmat[start][v], -1)
    for mask in range(1, full + 1):
        for i, v in enumerate(others):
            if not (mask >> i) & 1:
                continue
            cur = dp.get((mask, i))
            if cur is None:
                continue
            base = cur[0]
            for j, u in enumerate(others):
                if (mask >> j) & 1:
                    continue
                nk = (mask | (1 << j), j)
                cand = base + dmat[v][u]
                if nk not in dp or cand < dp[nk][0]:
                    dp[nk] = (cand, i)
    best = None
    for i, v in enumerate(others):
        entry = dp[(full, i)]
        total = entry[0] + dmat[v][start]
        if best is None or total < best[0]:
            best = (total, i)
    # reconstruct visiting order
    order = []
    mask, i = full, best[1]
    while i != -1:
        order.append(others[i])
        _, pi = dp[(mask, i)]
        mask ^= 1 << i
        i = pi
    order.reverse()
    return TourResult(cost=Fraction(best[0], g._scale), order=(start, *order, start))


def mst_bounds(g: Graph) -> tuple[Fraction, Fraction]:
    """(MST weight, 2 * MST weight): the classic tour sandwich.

    Any closed walk covering all vertices weighs at least the MST and at
    most twice it.
    """
    require_connected(g, "mst_bounds")
    w = minimum_spanning_tree(g).weight()
    return w, 2 * w


def _stretch_ok_all_pairs(g: Graph, keep, one_plus: Fraction) -> bool:
    """Exact all-pairs test that `keep` edges form a (1+eps)-spanner of g."""
    p, q = one_plus.numerator, one_plus.denominator
    for s in range(g.n):
        dg, _ = _dijkstra(g, [(0, s)])
        dh, _ = _dijkstra(g, [(0, s)], edge_ok=keep.__contains__)
        for t in range(s + 1, g.n):
            if dg[t] == INF:
                continue
            if dh[t] == INF or dh[t] * q > dg[t] * p:
                return False
    return True


def brute_force_optspan_edges(g: Graph, epsilon, forced_edges=()) -> EdgeSubset:
    """Minimum-weight (1+eps)-spanner by exhaustive edge-subset search.

    Searches over which edges to REMOVE, with two prunings: supersets of an
    infeasible removal set are never feasible (stretch only degrades), and
    branches that cannot beat the incumbent weight are cut.  `forced_edges`
    must stay in every candidate.  Guarded to m <= 20.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    require_connected(g, "brute_force_optspan")
    m = g.edge_count
    if m > _OPTSPAN_MAX_M:
        raise ResourceGuardError(
            f"brute_force_optspan guarded to m <= {_OPTSPAN_MAX_M} (got {m})"
        )
    one_plus = 1 + eps
    forced = frozenset(forced_edges)
    for eid in forced:
        if not (0 <= eid < m):
            raise ValueError(f"forced edge id {eid} out of range")
    iw = g._iw
    removable = sorted(set(range(m)) - forced, key=lambda e: -iw[e])
    all_ids = frozenset(range(m))
    if not _stretch_ok_all_pairs(g, all_ids, one_plus):
        # cannot happen: g is trivially a spanner of itself
        raise AssertionError("graph is not a spanner of itself")
    best_keep = all_ids
    best_w = sum(iw)

    def search(i: int, removed: set[int], removed_w: int) -> None:
        nonlocal best_keep, best_w
        keep_w = sum(iw) - removed_w
        if keep_w < best_w:
            keep = all_ids - removed
            if _stretch_ok_all_pairs(g, keep, one_plus):
                best_keep, best_w = keep, keep_w
        for j in range(i, len(removable)):
            e = removable[j]
            removed.add(e)
            # monotone pruning: only recurse when this removal alone keeps
            # the instance feasible; otherwise every superset fails too
            if _stretch_ok_all_pairs(g, all_ids - removed, one_plus):
                search(j + 1, removed, removed_w + iw[e])
            removed.discard(e)

    search(0, set(), 0)
    return EdgeSubset(g, best_keep)


def brute_force_optspan(g: Graph, epsilon) -> Fraction:
    """Minimum lightness over all spanning (1+eps)-spanner subgraphs; exact.

    Thin wrapper over brute_force_optspan_edges; same m <= 20 guard.
    """
    best = brute_force_optspan_edges(g, epsilon)
    mst_w = minimum_spanning_tree(g).weight()
    return best.weight() / mst_w


@dataclass
class CycleCheckReport:
    ok: bool
    cycles_checked: int
    violations: list

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "cycles_checked": self.cycles_checked,
            "violations": self.violations[:10],
        }


def enumerate_cycles_check(g: Graph, bound, edge_ids=None) -> CycleCheckReport:
    """Heaviest edge on every simple cycle must exceed its detour allowance.

    `bound` is the full detour multiplier (1+delta for exploration checks,
    1+epsilon for spanner checks).  Enumerates the whole cycle space (all
    2^nu - 1 nonempty XOR combinations of fundamental cycles, nu = m-n+1),
    keeps the simple cycles (every degree 0 or 2, one connected piece), and
    flags a cycle whenever its weight minus its heaviest edge e is at most
    bound * w(e): the rest of the cycle is then a cheap detour around e.
    With edge_ids, only cycles whose heaviest edge lies in that set are
    examined.  Guarded to nu <= 12.
    """
    b = as_fraction(bound)
    if b < 1:
        raise ValueError(f"bound must be at least 1, got {b}")
    require_connected(g, "enumerate_cycles_check")
    m = g.edge_count
    nu = m - g.n + 1
    if nu > _CYCLE_SPACE_MAX_NU:
        raise ResourceGuardError(
            f"enumerate_cycles_check guarded to cyclomatic number <= "
            f"{_CYCLE_SPACE_MAX_NU} (got {nu})"
        )
    watch = None if edge_ids is None else frozenset(edge_ids)
    tree = minimum_spanning_tree(g)
    non_tree = sorted(set(range(m)) - tree.ids)
    fund = []
    for eid in non_tree:
        mask = 0
        for ce in fundamental_cycle(g, tree, eid):
            mask |= 1 << ce
        fund.append(mask)
    iw = g._iw
    checked = 0
    violations = []
    for combo in range(1, 1 << len(fund)):
        mask = 0
        c = combo
        i = 0
        while c:
            if c & 1:
                mask ^= fund[i]
            c >>= 1
            i += 1
        if mask == 0:
            continue
        edges = [e for e in range(m) if (mask >> e) & 1]
        # simple cycle: every touched vertex has degree exactly 2 and the
        # edge set is connected
        deg: dict[int, int] = {}
        for e in edges:
            u, v = g._edges[e]
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        if any(x != 2 for x in deg.values()):
            continue
        adj: dict[int, list[int]] = {}
        for e in edges:
            u, v = g._edges[e]
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        root = g._edges[edges[0]][0]
        seen = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(deg):
            continue
        heaviest = max(edges, key=lambda e: (iw[e], e))
        if watch is not None and heaviest not in watch:
            continue
        checked += 1
        rest = sum(iw[e] for e in edges) - iw[heaviest]
        # violation: the cycle minus its heaviest edge is within the detour
        # allowance of that edge
        if rest * b.denominator <= b.numerator * iw[heaviest]:
            violations.append(
                {
                    "cycle": edges,
                    "heaviest": heaviest,
                    "detour": str(Fraction(rest, g._scale)),
                    "allowed": str(b * g.weight(heaviest)),
                }
            )
    return CycleCheckReport(ok=not violations, cycles_checked=checked, violations=violations)


def brute_force_exploration(g: Graph, start: int = 0) -> TourResult:
    """Optimal covering closed walk by permutation search (tiny n only).

    Tries every visiting order of the remaining vertices over the metric
    closure; agrees with exact_tsp and exists purely to cross-check it.
    """
    require_connected(g, "brute_force_exploration")
    n = g.n
    if n > 8:
        raise ResourceGuardError(f"brute_force_exploration guarded to n <= 8 (got {n})")
    if not (0 <= start < n):
        raise ValueError(f"start {start} out of range")
    dmat = []
    for s in range(n):
        dist, _ = _dijkstra(g, [(0, s)])
        dmat.append(dist)
    others = [v for v in range(n) if v != start]
    best = None
    for perm in permutations(others):
        cost = 0
        cur = start
        for v in perm:
            cost += dmat[cur][v]
            cur = v
        cost += dmat[cur][start]
        if best is None or cost < best[0]:
            best = (cost, perm)
    if best is None:
        return TourResult(cost=Fraction(0), order=(start,))
    return TourResult(cost=Fraction(best[0], g._scale), order=(start, *best[1], start))
