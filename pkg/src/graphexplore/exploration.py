"""Online exploration of a weighted graph with a delta-blocking waiting rule.

The agent stands on a vertex of an unknown connected graph.  Visiting a
vertex reveals (learns) its incident edges and their weights.  A boundary
edge has exactly one explored endpoint.  Distances d(x, y) used by the rule
are lengths of shortest *internally explored* paths: every interior vertex
of the path is explored; an edge touching an unexplored vertex may appear
only at the ends.

A boundary edge e = (u, v) is blocked when a strictly lighter boundary edge
e' = (u', v') exists with d(u, v') <= (1+delta) * w(e): a cheaper doorway is
nearby, so taking e now could be wasteful.  The explorer repeatedly takes an
unblocked boundary edge that either starts at its current recursion vertex
or was earlier blocked by an edge ending at that vertex, recursing on every
newly explored vertex and walking back afterwards.

The engine only ever reads adjacency of explored vertices; an auditing view
counts every adjacency read and raises if that discipline is broken.
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
    as_fraction,
    mst_maximizing_overlap,
    require_connected,
)
from .errors import (
    InvariantViolation,
    OnlinePurityError,
    StateError,
)


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class TieBreak:
    """Preference order used to pick among admissible boundary edges.

    kind "by_edge_id": smaller id wins.  kind "adversarial": a scripted id
    order, unscripted edges after all scripted ones.  kind "random": a seeded
    shuffle of the ids, fixed for the whole run.
    """

    kind: str = "by_edge_id"
    script: tuple[int, ...] | None = None
    seed: int | None = None

    @classmethod
    def by_edge_id(cls) -> "TieBreak":
        return cls("by_edge_id")

    @classmethod
    def adversarial(cls, script) -> "TieBreak":
        return cls("adversarial", script=tuple(int(e) for e in script))

    @classmethod
    def random(cls, seed: int) -> "TieBreak":
        return cls("random", seed=int(seed))

    def priorities(self, m: int) -> list[int]:
        """prio[eid]; candidates are compared by (prio[eid], eid)."""
        if self.kind == "by_edge_id":
            return list(range(m))
        if self.kind == "adversarial":
            if self.script is None:
                raise ValueError("adversarial tie-break needs a script")
            prio = [m + i for i in range(m)]
            for pos, eid in enumerate(self.script):
                if not (0 <= eid < m):
                    raise ValueError(f"scripted edge id {eid} out of range")
                prio[eid] = pos
            return prio
        if self.kind == "random":
            if self.seed is None:
                raise ValueError("random tie-break needs a seed")
            prio = list(range(m))
            random.Random(self.seed).shuffle(prio)
            return prio
        raise ValueError(f"unknown tie-break kind {self.kind!r}")

    def describe(self):
        if self.kind == "by_edge_id":
            return "by_edge_id"
        if self.kind == "adversarial":
            return {"adversarial": list(self.script or ())}
        return {"random": self.seed}


@dataclass(frozen=True)
class ExplorationParams:
    delta: Fraction
    start: int = 0
    tie_break: TieBreak = field(default_factory=TieBreak.by_edge_id)
    verify_invariants: bool = True

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")


# ---------------------------------------------------------------------------
# the online view: all adjacency reads go through here

class OnlineView:
    """Gatekeeper between the engine and the hidden graph.

    Grants adjacency only for explored vertices, counting every read.  A read
    of an unexplored vertex's neighborhood is an engine bug and raises.
    """

    __slots__ = ("_adj", "explored", "adjacency_reads")

    def __init__(self, g: Graph, explored: list[bool]):
        self._adj = g._adj
        self.explored = explored
        self.adjacency_reads = 0

    def incident(self, u: int):
        self.adjacency_reads += 1
        if not self.explored[u]:
            raise OnlinePurityError(f"adjacency of unexplored vertex {u} requested")
        return self._adj[u]


# ---------------------------------------------------------------------------
# exploration state

class ExplorationState:
    """Explored/learned sets, oriented boundary, and blocking bookkeeping.

    blocker_records[e] collects, per boundary edge e, every unexplored
    endpoint v' of an edge observed to block e at some evaluation; reaching
    such a v' later re-activates e for the invocation started there.
    """

    def __init__(self, g: Graph, position: int):
        n = g.n
        self.g = g
        self.explored = [False] * n
        self.learned = [False] * n
        self.explored_count = 0
        # eid -> (explored endpoint, unexplored endpoint, scaled weight)
        self.boundary: dict[int, tuple[int, int, int]] = {}
        self.b_by_expl: dict[int, set[int]] = {}
        self.b_by_unexpl: dict[int, set[int]] = {}
        self.blocker_records: dict[int, set[int]] = {}
        self.rec_by_witness: dict[int, set[int]] = {}
        # working copies of blocker_records used for O(1) re-confirmation
        self._active_wit: dict[int, list[int]] = {}
        self._maxw_heap: list[tuple[int, int]] = []
        self._minw_heap: list[tuple[int, int]] = []
        self.position = position
        self.cost = 0  # scaled
        self.view = OnlineView(g, self.explored)
        # stamped scratch arrays for Dijkstra (avoid per-call allocation)
        self._gen = 0
        self._dj_stamp = [0] * n
        self._dj_dist = [0] * n
        self._dj_pare = [-1] * n
        self._dj_parv = [-1] * n

    @classmethod
    def initial(cls, g: Graph, start: int) -> "ExplorationState":
        if not (0 <= start < g.n):
            raise ValueError(f"start vertex {start} out of range")
        st = cls(g, start)
        st.mark_explored(start)
        return st

    @classmethod
    def from_explored(cls, g: Graph, explored, position: int | None = None) -> "ExplorationState":
        """State as if the given vertices had been visited (for offline checks)."""
        vs = sorted(set(explored))
        if not vs:
            raise ValueError("need at least one explored vertex")
        st = cls(g, position if position is not None else vs[0])
        for v in vs:
            st.mark_explored(v)
        if not st.explored[st.position]:
            raise ValueError(f"position {st.position} is not explored")
        return st

    def mark_explored(self, v: int) -> None:
        if self.explored[v]:
            raise StateError(f"vertex {v} already explored")
        self.explored[v] = True
        self.explored_count += 1
        self.learned[v] = True
        # edges into v stop being boundary; edges to unexplored vertices start
        for eid in tuple(self.b_by_unexpl.get(v, ())):
            u, _, _ = self.boundary.pop(eid)
            self.b_by_expl[u].discard(eid)
        self.b_by_unexpl.pop(v, None)
        for other, eid, w in self.view.incident(v):
            self.learned[other] = True
            if not self.explored[other]:
                self.boundary[eid] = (v, other, w)
                self.b_by_expl.setdefault(v, set()).add(eid)
                self.b_by_unexpl.setdefault(other, set()).add(eid)
                heappush(self._maxw_heap, (-w, eid))
                heappush(self._minw_heap, (w, eid))

    def max_boundary_weight_scaled(self) -> int | None:
        heap = self._maxw_heap
        while heap:
            w, eid = heap[0]
            if eid in self.boundary:
                return -w
            heappop(heap)
        return None

    def min_boundary_weight_scaled(self) -> int | None:
        heap = self._minw_heap
        while heap:
            w, eid = heap[0]
            if eid in self.boundary:
                return w
            heappop(heap)
        return None

    def min_weight_at(self, v: int) -> int | None:
        """Lightest boundary edge whose unexplored endpoint is v (scaled)."""
        eids = self.b_by_unexpl.get(v)
        if not eids:
            return None
        return min(self.boundary[e][2] for e in eids)

    def record_witness(self, eid: int, v: int) -> None:
        rec = self.blocker_records.setdefault(eid, set())
        if v not in rec:
            rec.add(v)
            self.rec_by_witness.setdefault(v, set()).add(eid)
            self._active_wit.setdefault(eid, []).append(v)

    def has_valid_witness(self, eid: int, w_scaled: int) -> bool:
        """Re-confirm blocking from an already recorded witness.

        A recorded pair's distance clause can only get easier to satisfy over
        time (the explored set grows, distances shrink), so a recorded witness
        v that is still unexplored and still has a boundary edge lighter than
        w(e) proves e is blocked right now without recomputing distances.
        """
        lst = self._active_wit.get(eid)
        if not lst:
            return False
        explored = self.explored
        for i, v in enumerate(lst):
            if explored[v]:
                continue
            bw = self.min_weight_at(v)
            if bw is not None and bw < w_scaled:
                if i:
                    lst[0], lst[i] = lst[i], lst[0]
                return True
        # drop entries that can never confirm again (their vertex is explored)
        lst[:] = [v for v in lst if not explored[v]]
        return False

    def check_invariants(self) -> None:
        g = self.g
        for v in range(g.n):
            if self.explored[v] and not self.learned[v]:
                raise InvariantViolation("explored-subset-learned", witness=v)
        for eid, (u, v, w) in self.boundary.items():
            a, b = g.endpoints(eid)
            if {a, b} != {u, v} or not self.explored[u] or self.explored[v]:
                raise InvariantViolation("boundary-orientation", witness=eid)
            if not self.learned[v]:
                raise InvariantViolation("boundary-endpoint-learned", witness=eid)
        if not self.explored[self.position]:
            raise InvariantViolation("position-explored", witness=self.position)


# ---------------------------------------------------------------------------
# internally explored Dijkstra on top of a state

def _run_dijkstra(state: ExplorationState, seeds, radius=None, target=None, parents=False):
    """Dijkstra that only relaxes out of explored vertices.

    seeds: (scaled distance, vertex) pairs.  Returns (settled, gen); exact
    distances exist for settled vertices via state._dj_dist and are valid for
    this generation stamp only.
    """
    state._gen += 1
    gen = state._gen
    stamp = state._dj_stamp
    dist = state._dj_dist
    pare = state._dj_pare
    parv = state._dj_parv
    explored = state.explored
    view = state.view
    heap = []
    for d0, s in seeds:
        if stamp[s] != gen or d0 < dist[s]:
            stamp[s] = gen
            dist[s] = d0
            if parents:
                pare[s] = -1
                parv[s] = -1
            heappush(heap, (d0, s))
    settled = []
    while heap:
        d, u = heappop(heap)
        if stamp[u] != gen or d > dist[u]:
            continue
        if radius is not None and d > radius:
            break
        settled.append(u)
        stamp[u] = -gen  # mark settled
        if u == target:
            break
        if not explored[u]:
            continue
        for other, eid, w in view.incident(u):
            if stamp[other] == -gen:
                continue
            nd = d + w
            if stamp[other] != gen or nd < dist[other]:
                stamp[other] = gen
                dist[other] = nd
                if parents:
                    pare[other] = eid
                    parv[other] = u
                heappush(heap, (nd, other))
    return settled, gen


def internally_explored_distance(state: ExplorationState, g: Graph, x: int, y: int):
    """d(x, y): shortest path whose interior vertices are all explored.

    Both endpoints must be learned (or explored).  Returns a Fraction, or
    inf when no such path exists yet.
    """
    if g is not state.g:
        raise ValueError("state belongs to a different graph")
    for z in (x, y):
        if not (0 <= z < g.n) or not state.learned[z]:
            raise ValueError(f"vertex {z} is not learned")
    if x == y:
        return Fraction(0)
    best_direct = None
    if not state.explored[x]:
        seeds = []
        for other, eid, w in g._adj[x]:
            if other == y and (best_direct is None or w < best_direct):
                best_direct = w
            if state.explored[other]:
                seeds.append((w, other))
    else:
        seeds = [(0, x)]
    settled, gen = _run_dijkstra(state, seeds, target=y)
    d = state._dj_dist[y] if state._dj_stamp[y] == -state._gen else None
    if best_direct is not None and (d is None or best_direct < d):
        d = best_direct
    if d is None:
        return INF
    return Fraction(d, g._scale)


def is_blocked(state: ExplorationState, g: Graph, eid: int, delta):
    """Is boundary edge eid blocked, and by which unexplored endpoints?

    Blocked means: some strictly lighter boundary edge e' = (u', v') has
    d(u, v') <= (1+delta) * w(eid), with u the explored endpoint of eid.
    All witnesses v' found are recorded into state.blocker_records.
    """
    if g is not state.g:
        raise ValueError("state belongs to a different graph")
    if eid not in state.boundary:
        raise StateError(f"edge {eid} is not a boundary edge")
    d = as_fraction(delta)
    if d <= 0:
        raise ValueError(f"delta must be positive, got {d}")
    one_plus = 1 + d
    u, _, w = state.boundary[eid]
    radius = one_plus.numerator * w // one_plus.denominator
    blockers = _fresh_blockers(state, u, eid, w, radius)
    for v in blockers:
        state.record_witness(eid, v)
    return bool(blockers), set(blockers)


def _fresh_blockers(state: ExplorationState, u: int, eid: int, w_scaled: int, radius: int):
    """All unexplored endpoints of lighter boundary edges within the radius."""
    mn = state.min_boundary_weight_scaled()
    if mn is None or mn >= w_scaled:
        return []
    settled, gen = _run_dijkstra(state, [(0, u)], radius=radius)
    dist = state._dj_dist
    out = []
    for v in settled:
        if state.explored[v]:
            continue
        bw = min(
            (state.boundary[e2][2] for e2 in state.b_by_unexpl.get(v, ()) if e2 != eid),
            default=None,
        )
        if bw is not None and bw < w_scaled:
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# traversal logs

APPROACH = "approach"
TAKE = "take-boundary"
RETURN = "return"


@dataclass(frozen=True)
class TraversalStep:
    edge: int
    source: int
    dest: int
    role: str
    charged_to: int


@dataclass
class TraversalLog:
    algorithm: str
    start: int
    steps: tuple[TraversalStep, ...]
    total_cost: Fraction
    taken_boundary: EdgeSubset
    delta: Fraction | None = None
    tie_break: TieBreak | None = None
    blocker_records: dict = field(default_factory=dict)
    verification: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        params: dict = {"algorithm": self.algorithm, "start": self.start}
        if self.delta is not None:
            params["delta"] = str(self.delta)
        if self.tie_break is not None:
            params["tie_break"] = self.tie_break.describe()
        return {
            "params": params,
            "steps": [
                {
                    "edge": s.edge,
                    "from": s.source,
                    "to": s.dest,
                    "role": s.role,
                    "charged_to": s.charged_to,
                }
                for s in self.steps
            ],
            "total_cost": str(self.total_cost),
            "boundary_edges": sorted(self.taken_boundary.ids),
            "verification": self.verification,
        }


# ---------------------------------------------------------------------------
# the explorer

class _Engine:
    def __init__(self, g: Graph, params: ExplorationParams):
        require_connected(g, "run_blocking")
        self.g = g
        self.params = params
        one_plus = 1 + params.delta
        two_plus = 2 + params.delta
        self.p1, self.q1 = one_plus.numerator, one_plus.denominator
        self.p2, self.q2 = two_plus.numerator, two_plus.denominator
        self.prio = params.tie_break.priorities(g.edge_count)
        self.state = ExplorationState.initial(g, params.start)
        self.steps: list[TraversalStep] = []
        self.taken: list[int] = []

    # -- blocking checks ----------------------------------------------------

    def _bound(self, w_scaled: int) -> int:
        return self.p1 * w_scaled // self.q1

    def _blocked_many(self, source: int, eids: list[int]) -> dict[int, bool]:
        """Blocked status for boundary edges sharing explored endpoint source.

        Cheap path first: an already recorded witness that is still valid
        proves "blocked" with no distance work.  The rest share one bounded
        Dijkstra from the source; every witness discovered is recorded.
        """
        st = self.state
        out: dict[int, bool] = {}
        mn = st.min_boundary_weight_scaled()
        needy: list[tuple[int, int]] = []
        for eid in eids:
            w = st.boundary[eid][2]
            if mn is None or mn >= w:
                out[eid] = False  # nothing on the boundary is lighter
            elif st.has_valid_witness(eid, w):
                out[eid] = True
            else:
                needy.append((eid, w))
        if not needy:
            return out
        radius = max(self._bound(w) for _, w in needy)
        settled, gen = _run_dijkstra(st, [(0, source)], radius=radius)
        dist = st._dj_dist
        learned_near = []
        for v in settled:
            if not st.explored[v]:
                bw = st.min_weight_at(v)
                if bw is not None:
                    learned_near.append((v, dist[v], bw))
        for eid, w in needy:
            bound = self._bound(w)
            own_far_end = st.boundary[eid][1]
            blocked = False
            for v, dv, bw in learned_near:
                if dv > bound or bw >= w:
                    continue
                if v == own_far_end:
                    # e itself may be the lightest edge at its far end; a
                    # witness there needs a *different* lighter edge
                    bw2 = min(
                        (
                            st.boundary[e2][2]
                            for e2 in st.b_by_unexpl.get(v, ())
                            if e2 != eid
                        ),
                        default=None,
                    )
                    if bw2 is None or bw2 >= w:
                        continue
                st.record_witness(eid, v)
                blocked = True
            out[eid] = blocked
        return out

    def _select(self, v: int):
        """First admissible boundary edge at the invocation vertex v, or None.

        Admissible: not blocked, and either leaving v itself or re-activated
        because v was recorded as a blocker endpoint for it.  Edges leaving v
        are preferred as a class; within a class the tie-break order decides.
        """
        st = self.state
        prio = self.prio
        class1 = sorted(st.b_by_expl.get(v, ()), key=lambda e: (prio[e], e))
        if class1:
            status = self._blocked_many(v, class1)
            for eid in class1:
                if not status[eid]:
                    return eid
        recs = st.rec_by_witness.get(v)
        if recs:
            class2 = sorted(
                (e for e in recs if e in st.boundary and st.boundary[e][0] != v),
                key=lambda e: (prio[e], e),
            )
            by_source: dict[int, list[int]] = {}
            for eid in class2:
                by_source.setdefault(st.boundary[eid][0], []).append(eid)
            status2: dict[int, bool] = {}
            for source, eids in by_source.items():
                status2.update(self._blocked_many(source, eids))
            for eid in class2:
                if not status2[eid]:
                    return eid
        return None

    # -- movement -----------------------------------------------------------

    def _walk(self, to: int, role: str, charge: int, radius: int) -> None:
        st = self.state
        if st.position == to:
            return
        settled, gen = _run_dijkstra(
            st, [(0, st.position)], radius=radius, target=to, parents=True
        )
        if st._dj_stamp[to] != -gen:
            raise InvariantViolation(
                "walk-distance-bound",
                witness=(st.position, to, role),
                detail="no internally explored path within the guaranteed radius",
            )
        path = []
        x = to
        while st._dj_parv[x] != -1:
            path.append((st._dj_pare[x], st._dj_parv[x], x))
            x = st._dj_parv[x]
        for eid, a, b in reversed(path):
            self.steps.append(TraversalStep(eid, a, b, role, charge))
            st.cost += st.g._iw[eid]
        st.position = to

    def _witness_sweep(self, x: int) -> None:
        """Record x as a blocker endpoint for every boundary edge it blocks.

        Runs just before x is explored: the edges from explored territory
        into x are about to vanish, and any edge they block right now must
        remember x so that the invocation at x can re-activate it.  Distances
        only shrink over time, so checking at this last moment catches every
        pair that ever satisfied the blocking clause.
        """
        st = self.state
        inc = st.b_by_unexpl.get(x)
        if not inc:
            return
        wmin = min(st.boundary[e][2] for e in inc)
        maxw = st.max_boundary_weight_scaled()
        if maxw is None or maxw <= wmin:
            return
        seeds: dict[int, int] = {}
        for eid in inc:
            u, _, w = st.boundary[eid]
            if u not in seeds or w < seeds[u]:
                seeds[u] = w
        settled, gen = _run_dijkstra(
            st, [(w, u) for u, w in seeds.items()], radius=self._bound(maxw)
        )
        dist = st._dj_dist
        for u in settled:
            if not st.explored[u]:
                continue
            du = dist[u]
            for eid in st.b_by_expl.get(u, ()):
                w = st.boundary[eid][2]
                if w > wmin and st.boundary[eid][1] != x and du <= self._bound(w):
                    st.record_witness(eid, x)

    # -- main loop ----------------------------------------------------------

    def run(self) -> TraversalLog:
        st = self.state
        g = self.g
        frames: list[tuple[int, int]] = [(st.position, -1)]
        while frames:
            v = frames[-1][0]
            eid = self._select(v)
            if eid is None:
                _, entered_by = frames.pop()
                if frames:
                    self._walk(
                        frames[-1][0],
                        RETURN,
                        entered_by,
                        self.p2 * g._iw[entered_by] // self.q2,
                    )
                continue
            y, x, w = st.boundary[eid]
            if y != v:
                self._walk(y, APPROACH, eid, self._bound(w))
            self._witness_sweep(x)
            self.steps.append(TraversalStep(eid, y, x, TAKE, eid))
            st.cost += w
            st.mark_explored(x)
            st.position = x
            self.taken.append(eid)
            frames.append((x, eid))
        if st.explored_count != g.n:
            missing = next(i for i in range(g.n) if not st.explored[i])
            raise InvariantViolation("exploration-complete", witness=missing)
        if st.position != self.params.start:
            raise InvariantViolation("return-to-start", witness=st.position)
        log = TraversalLog(
            algorithm="blocking",
            start=self.params.start,
            steps=tuple(self.steps),
            total_cost=Fraction(st.cost, g._scale),
            taken_boundary=EdgeSubset(g, self.taken),
            delta=self.params.delta,
            tie_break=self.params.tie_break,
            blocker_records={e: frozenset(s) for e, s in st.blocker_records.items()},
        )
        log.verification["access_audit"] = {
            "adjacency_reads": st.view.adjacency_reads,
            "violations": 0,
        }
        return log


def run_blocking(g: Graph, params: ExplorationParams) -> TraversalLog:
    """Explore g with the delta-blocking rule; returns the full traversal log.

    Deterministic given (g, params).  With verify_invariants, the cost-charge
    bound and the long-cycle property of the taken edges are checked before
    returning and a failure raises InvariantViolation.
    """
    log = _Engine(g, params).run()
    if params.verify_invariants:
        chain = verify_cost_chain(g, log, params.delta)
        log.verification["cost_chain"] = chain.to_dict()
        if not chain.ok:
            raise InvariantViolation("cost-charge-bound", witness=chain.failures[:3])
        cyc = verify_blocking_cycle_property(g, log, params.delta)
        log.verification["cycle_minimality"] = cyc.to_dict()
        if not cyc.ok:
            raise InvariantViolation("taken-edges-cycle-minimality", witness=cyc.violations[:3])
    return log


# ---------------------------------------------------------------------------
# verification

@dataclass
class CostChainReport:
    """Charge accounting for one blocking run.

    Each taken boundary edge e absorbs the approach walk before it, its own
    traversal and the walk back after its recursion; the three parts are
    bounded by (1+delta), 1 and (2+delta) times w(e), for 2(delta+2)w(e)
    total, so total cost <= 2(delta+2) * w(taken edges).
    """

    ok: bool
    total_cost: Fraction
    boundary_weight: Fraction
    bound: Fraction
    per_edge: list
    failures: list
    optspan_bound: Fraction | None = None
    mst_b_weight: Fraction | None = None
    optspan_ok: bool | None = None

    def to_dict(self) -> dict:
        d = {
            "ok": self.ok,
            "total_cost": str(self.total_cost),
            "boundary_weight": str(self.boundary_weight),
            "bound": str(self.bound),
            "failures": self.failures,
        }
        if self.optspan_bound is not None:
            d["optspan_bound"] = str(self.optspan_bound)
            d["mst_b_weight"] = str(self.mst_b_weight)
            d["optspan_ok"] = self.optspan_ok
        return d


def verify_cost_chain(g: Graph, log: TraversalLog, delta, optspan_bound=None) -> CostChainReport:
    """Check the per-edge charge decomposition and the total cost bound.

    With optspan_bound (an upper bound on the best spanner lightness of the
    taken edges plus their overlap-maximizing MST), additionally checks
    total <= 2(delta+2) * optspan_bound * w(MST_B).
    """
    d = as_fraction(delta)
    one_plus = 1 + d
    two_plus = 2 + d
    w_b = log.taken_boundary.weight()
    bound = 2 * two_plus * w_b
    approach: dict[int, Fraction] = {}
    take: dict[int, Fraction] = {}
    ret: dict[int, Fraction] = {}
    failures = []
    for s in log.steps:
        w = g.weight(s.edge)
        if s.charged_to not in log.taken_boundary:
            failures.append({"edge": s.edge, "why": "charged to an untaken edge"})
            continue
        slot = {APPROACH: approach, TAKE: take, RETURN: ret}[s.role]
        slot[s.charged_to] = slot.get(s.charged_to, Fraction(0)) + w
    per_edge = []
    for eid in log.taken_boundary:
        w = g.weight(eid)
        a = approach.get(eid, Fraction(0))
        t = take.get(eid, Fraction(0))
        r = ret.get(eid, Fraction(0))
        entry = {"edge": eid, "approach": a, "take": t, "ret": r, "weight": w}
        per_edge.append(entry)
        if a > one_plus * w:
            failures.append({"edge": eid, "why": f"approach {a} > (1+delta)w = {one_plus * w}"})
        if t != w:
            failures.append({"edge": eid, "why": f"take {t} != w = {w}"})
        if r > two_plus * w:
            failures.append({"edge": eid, "why": f"return {r} > (2+delta)w = {two_plus * w}"})
    total = sum((g.weight(s.edge) for s in log.steps), Fraction(0))
    if total != log.total_cost:
        failures.append({"why": f"step sum {total} != logged total {log.total_cost}"})
    if log.total_cost > bound:
        failures.append({"why": f"total {log.total_cost} > 2(delta+2)w(B) = {bound}"})
    report = CostChainReport(
        ok=not failures,
        total_cost=log.total_cost,
        boundary_weight=w_b,
        bound=bound,
        per_edge=per_edge,
        failures=failures,
    )
    if optspan_bound is not None:
        ob = as_fraction(optspan_bound)
        mst_b = mst_maximizing_overlap(g, log.taken_boundary)
        report.optspan_bound = ob
        report.mst_b_weight = mst_b.weight()
        report.optspan_ok = log.total_cost <= 2 * two_plus * ob * mst_b.weight()
        if not report.optspan_ok:
            report.ok = False
            report.failures.append(
                {"why": f"total exceeds 2(delta+2)*{ob}*w(MST_B)={2 * two_plus * ob * mst_b.weight()}"}
            )
    return report


@dataclass
class CycleMinimalityReport:
    """Per-edge detour check over the taken edges plus their preferred MST.

    For S = B union MST_B and every e = (u, v) in S, the distance from u to
    v inside S without e must exceed (1+delta) * w(e); equivalently no proper
    subgraph of S is a (1+delta)-spanner of S, and every cycle C in S obeys
    w(C minus e) > (1+delta) w(e).
    """

    ok: bool
    checked: int
    entries: list
    violations: list

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violations": self.violations}


def taken_union_mst(g: Graph, log: TraversalLog) -> EdgeSubset:
    """B union MST_B: the taken boundary edges plus the overlap-preferring MST."""
    b = log.taken_boundary
    mst_b = mst_maximizing_overlap(g, b)
    return EdgeSubset(g, set(b.ids) | set(mst_b.ids))


def verify_blocking_cycle_property(g: Graph, log: TraversalLog, delta) -> CycleMinimalityReport:
    d = as_fraction(delta)
    one_plus = 1 + d
    p, q = one_plus.numerator, one_plus.denominator
    s_ids = taken_union_mst(g, log).ids
    iw = g._iw
    entries = []
    violations = []
    from .core import _dijkstra

    for eid in sorted(s_ids):
        u, v = g.endpoints(eid)
        radius = p * iw[eid] // q
        keep = s_ids - {eid}
        dist, _ = _dijkstra(
            g, [(0, u)], edge_ok=keep.__contains__, radius=radius, target=v
        )
        dv = dist[v]
        detour = INF if dv == INF else Fraction(dv, g._scale)
        bound = one_plus * g.weight(eid)
        entry = {"edge": eid, "detour": detour, "bound": bound}
        entries.append(entry)
        if detour != INF and detour <= bound:
            violations.append(
                {"edge": eid, "detour": str(detour), "bound": str(bound)}
            )
    return CycleMinimalityReport(
        ok=not violations, checked=len(entries), entries=entries, violations=violations
    )


# ---------------------------------------------------------------------------
# nearest-neighbor baseline

def run_nearest_neighbor(g: Graph, start: int = 0) -> TraversalLog:
    """Repeatedly walk to the nearest unexplored learned vertex, then home.

    Ties on distance go to the smaller vertex id.  Uses the same online view
    as the blocking explorer; serves as the classic baseline whose ratio is
    Theta(log n) in the worst case.
    """
    require_connected(g, "run_nearest_neighbor")
    if not (0 <= start < g.n):
        raise ValueError(f"start vertex {start} out of range")
    st = ExplorationState.initial(g, start)
    steps: list[TraversalStep] = []
    taken: list[int] = []
    while st.explored_count < g.n:
        # nearest unexplored vertex: first such vertex settled by Dijkstra
        settled, gen = _run_dijkstra(st, [(0, st.position)], parents=True)
        target = None
        for v in settled:
            if not st.explored[v]:
                target = v
                break
        if target is None:
            raise InvariantViolation("nearest-neighbor-frontier", witness=st.position)
        path = []
        x = target
        while st._dj_parv[x] != -1:
            path.append((st._dj_pare[x], st._dj_parv[x], x))
            x = st._dj_parv[x]
        final_eid = path[0][0]
        for eid, a, b2 in reversed(path):
            role = TAKE if b2 == target else APPROACH
            steps.append(TraversalStep(eid, a, b2, role, final_eid))
            st.cost += g._iw[eid]
        taken.append(final_eid)
        st.mark_explored(target)
        st.position = target
    if st.position != start and taken:
        settled, gen = _run_dijkstra(st, [(0, st.position)], target=start, parents=True)
        path = []
        x = start
        while st._dj_parv[x] != -1:
            path.append((st._dj_pare[x], st._dj_parv[x], x))
            x = st._dj_parv[x]
        for eid, a, b2 in reversed(path):
            steps.append(TraversalStep(eid, a, b2, RETURN, taken[-1]))
            st.cost += g._iw[eid]
        st.position = start
    log = TraversalLog(
        algorithm="nearest_neighbor",
        start=start,
        steps=tuple(steps),
        total_cost=Fraction(st.cost, g._scale),
        taken_boundary=EdgeSubset(g, taken),
    )
    log.verification["access_audit"] = {
        "adjacency_reads": st.view.adjacency_reads,
        "violations": 0,
    }
    return log
