"""Greedy (1+epsilon)-spanners and their verification.

The greedy construction scans edges from light to heavy (ties by id) and
keeps an edge only when the current spanner's distance between its endpoints
exceeds (1+epsilon) times its weight; all comparisons are exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heappush, heappop

from .core import (
    INF,
    EdgeSubset,
    Graph,
    _dijkstra,
    as_fraction,
    minimum_spanning_tree,
    require_connected,
    restrict,
)
from .errors import DegenerateInstanceError, ResourceGuardError

_EXACT_STRETCH_MAX_N = 2000


@dataclass
class SpannerResult:
    edges: EdgeSubset
    epsilon: Fraction
    lightness: Fraction
    stretch_certificate: Fraction
    checks: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "edge_ids": sorted(self.edges.ids),
            "lightness": str(self.lightness),
            "stretch_certificate": str(self.stretch_certificate),
            "checks": self.checks,
        }


def _bounded_subgraph_dist(g: Graph, in_h, u: int, v: int, radius: int):
    """Scaled distance from u to v using only edges with in_h[eid], capped.

    Returns the exact scaled distance if it is <= radius, else None.
    """
    if u == v:
        return 0
    n = g.n
    adj = g._adj
    dist = {u: 0}
    heap = [(0, u)]
    while heap:
        d, x = heappop(heap)
        if d > dist[x]:
            continue
        if d > radius:
            return None
        if x == v:
            return d
        for y, eid, w in adj[x]:
            if not in_h[eid]:
                continue
            nd = d + w
            if nd <= radius and (y not in dist or nd < dist[y]):
                dist[y] = nd
                heappush(heap, (nd, y))
    return None


def greedy_spanner(g: Graph, epsilon) -> SpannerResult:
    """Light-to-heavy greedy spanner with exact acceptance tests.

    Keeps edge e = (u, v) iff the distance inside the spanner built so far
    exceeds (1+epsilon) * w(e).  The result spans g, has stretch at most
    1+epsilon, contains the (weight, id)-tie Kruskal MST, and no kept edge
    is redundant.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    require_connected(g, "greedy_spanner")
    one_plus = 1 + eps
    p, q = one_plus.numerator, one_plus.denominator
    m = g.edge_count
    iw = g._iw
    in_h = [False] * m
    kept: list[int] = []
    for eid in sorted(range(m), key=lambda e: (iw[e], e)):
        u, v = g._edges[eid]
        radius = p * iw[eid] // q
        d = _bounded_subgraph_dist(g, in_h, u, v, radius)
        if d is None:  # distance exceeds (1+eps) * w: keep
            in_h[eid] = True
            kept.append(eid)
    h = EdgeSubset(g, kept)
    # max stretch over all vertex pairs equals the max over edge endpoint
    # pairs: along a shortest g-path, each edge's endpoints are within its
    # per-edge ratio in h, and those detours concatenate
    cert = Fraction(1)
    for eid in range(m):
        u, v = g._edges[eid]
        dh = _bounded_subgraph_dist(g, in_h, u, v, p * iw[eid] // q)
        assert dh is not None, "kept spanner must satisfy its own bound"
        if dh == 0:
            continue
        dg = _bounded_subgraph_dist(g, [True] * m, u, v, iw[eid])
        assert dg is not None and dg > 0  # edge itself bounds the search
        r = Fraction(dh, dg)
        if r > cert:
            cert = r
    return SpannerResult(
        edges=h,
        epsilon=eps,
        lightness=lightness(g, h),
        stretch_certificate=cert,
    )


def lightness(g: Graph, h: EdgeSubset) -> Fraction:
    """w(h) / w(MST of g); errors when the MST weight is zero."""
    if h.parent is not g:
        raise ValueError("subset belongs to a different graph")
    mst_w = minimum_spanning_tree(g).weight()
    if mst_w == 0:
        raise DegenerateInstanceError("MST weight is zero; lightness undefined")
    return h.weight() / mst_w


@dataclass
class StretchReport:
    ok: bool
    mode: str
    pairs_checked: int
    max_ratio: Fraction
    worst_pair: tuple[int, int] | None
    violations: list

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "max_ratio": str(self.max_ratio),
            "worst_pair": self.worst_pair,
            "violations": self.violations[:10],
        }


def verify_spanner_stretch(
    g: Graph, h: EdgeSubset, epsilon, mode: str = "exact", seed: int | None = None, count: int | None = None
) -> StretchReport:
    """Independent stretch check: d_h(u,v) <= (1+eps) d_g(u,v) for pairs.

    mode "exact" checks all pairs (guarded to n <= 2000); mode "sampled"
    checks `count` seeded random pairs.  Pairs at g-distance zero must be at
    h-distance zero.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    if h.parent is not g:
        raise ValueError("subset belongs to a different graph")
    one_plus = 1 + eps
    n = g.n
    if mode == "exact":
        if n > _EXACT_STRETCH_MAX_N:
            raise ResourceGuardError(
                f"exact stretch check guarded to n <= {_EXACT_STRETCH_MAX_N} "
                f"(got {n}); use mode='sampled'"
            )
        sources = range(n)
    elif mode == "sampled":
        if seed is None or count is None:
            raise ValueError("sampled mode needs seed and count")
        rng = random.Random(seed)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(count)]
        by_source: dict[int, list[int]] = {}
        for a, b in pairs:
            if a != b:
                by_source.setdefault(a, []).append(b)
        sources = sorted(by_source)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ids = h.ids
    max_ratio = Fraction(1)
    worst = None
    violations = []
    pairs_checked = 0
    for a in sources:
        dg, _ = _dijkstra(g, [(0, a)])
        dh, _ = _dijkstra(g, [(0, a)], edge_ok=ids.__contains__)
        targets = range(a + 1, n) if mode == "exact" else by_source[a]
        for b in targets:
            pairs_checked += 1
            if dg[b] == INF:
                continue  # disconnected pair: no constraint from g
            if dg[b] == 0:
                if dh[b] != 0:
                    violations.append({"pair": (a, b), "why": "zero g-distance, positive h-distance"})
                continue
            if dh[b] == INF:
                violations.append({"pair": (a, b), "why": "pair disconnected in h"})
                continue
            r = Fraction(dh[b], dg[b])
            if r > max_ratio:
                max_ratio = r
                worst = (a, b)
            if r > one_plus:
                violations.append(
                    {"pair": (a, b), "ratio": str(r), "allowed": str(one_plus)}
                )
    return StretchReport(
        ok=not violations,
        mode=mode,
        pairs_checked=pairs_checked,
        max_ratio=max_ratio,
        worst_pair=worst,
        violations=violations,
    )


@dataclass
class MinimalityReport:
    ok: bool
    checked: int
    redundant: list

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "redundant": self.redundant}


def verify_spanner_minimality(g_h: Graph, epsilon) -> MinimalityReport:
    """No single edge of g_h can be dropped and leave a (1+eps)-spanner of it.

    g_h is the spanner as a graph in its own right; an edge e = (u, v) is
    redundant iff the remaining edges keep u, v within (1+eps) * w(e).
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    one_plus = 1 + eps
    p, q = one_plus.numerator, one_plus.denominator
    iw = g_h._iw
    redundant = []
    for eid in range(g_h.edge_count):
        u, v = g_h._edges[eid]
        radius = p * iw[eid] // q
        dist, _ = _dijkstra(
            g_h, [(0, u)], edge_ok=lambda e, skip=eid: e != skip, radius=radius, target=v
        )
        if dist[v] != INF:
            redundant.append(
                {"edge": eid, "detour": str(Fraction(dist[v], g_h._scale)), "allowed": str(one_plus * g_h.weight(eid))}
            )
    return MinimalityReport(ok=not redundant, checked=g_h.edge_count, redundant=redundant)


@dataclass
class MstContainmentReport:
    ok: bool
    mst_weight: Fraction
    sub_mst_weight: Fraction
    kruskal_contained: bool

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "mst_weight": str(self.mst_weight),
            "sub_mst_weight": str(self.sub_mst_weight),
            "kruskal_contained": self.kruskal_contained,
        }


def verify_mst_containment(g: Graph, h: EdgeSubset) -> MstContainmentReport:
    """h contains a minimum spanning tree of g.

    Checked two ways: the MST weight of h as a graph equals g's, and the
    deterministic (weight, id)-tie Kruskal tree of g is literally a subset
    of h (true for the greedy spanner because both scan in the same order).
    """
    if h.parent is not g:
        raise ValueError("subset belongs to a different graph")
    g_mst_w = minimum_spanning_tree(g).weight()
    sub, _ids = restrict(g, h)
    sub_mst_w = minimum_spanning_tree(sub).weight()
    kruskal_ids = minimum_spanning_tree(g).ids
    contained = kruskal_ids <= h.ids
    return MstContainmentReport(
        ok=(sub_mst_w == g_mst_w) and contained,
        mst_weight=g_mst_w,
        sub_mst_weight=sub_mst_w,
        kruskal_contained=contained,
    )
