"""Instance generators, the edge-list file format, and instance specs.

Every generator is deterministic in its arguments (seeded where random) and
assigns edge ids in a documented order, so the same spec always produces a
byte-identical graph file.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import Graph, as_fraction
from .errors import (
    DegenerateCombWarning,
    GenerationError,
    ParseError,
)

# weights drawn from [1, 2] use this fixed dyadic denominator
_RAND_DENOM = 2**20
# planar edge lengths are snapped to multiples of this
_PLANAR_DENOM = 2**30


def _rand_weight(rng) -> Fraction:
    """Seeded rational in [1, 2], denominator 2**20."""
    return Fraction(_RAND_DENOM + int(rng.integers(0, _RAND_DENOM + 1)), _RAND_DENOM)


def gen_comb_lower_bound(k: int, delta) -> tuple[Graph, int, tuple[int, ...]]:
    """Comb tree that makes the blocking explorer pay for every heavy tooth.

    A spine of 2k unit-weight edges' worth of vertices (2k vertices, 2k-1
    edges), a unit leaf on each of the first k spine vertices, and a leaf of
    weight (k+1)/(delta+1) on each of the last k.  n = 4k.  The heavy teeth
    sit exactly at the blocking threshold: from the far end of the spine the
    nearest light leaf is at distance k+1 = (1+delta) * heavy weight, so every
    heavy tooth stays blocked until the light teeth have all been taken.

    Returns (graph, start vertex, tie-break script).  The script prefers spine
    edges over the equal-weight light leaves so a scripted run walks the spine
    first; edge ids are assigned spine (0..2k-2), light (2k-1..3k-2) and heavy
    (3k-1..4k-2) to make that order explicit.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive int, got {k!r}")
    d = as_fraction(delta)
    if d <= 0:
        raise ValueError(f"delta must be positive, got {d}")
    heavy = Fraction(k + 1) / (d + 1)
    if heavy <= 1:
        warnings.warn(
            f"comb with k={k}, delta={d} is degenerate: heavy weight {heavy} <= 1, "
            "no tooth is ever blocked",
            DegenerateCombWarning,
            stacklevel=2,
        )
    edges = []
    for i in range(2 * k - 1):
        edges.append((i, i + 1, Fraction(1)))
    for i in range(k):
        edges.append((i, 2 * k + i, Fraction(1)))
    for i in range(k):
        edges.append((k + i, 3 * k + i, heavy))
    g = Graph(4 * k, edges)
    script = tuple(range(g.edge_count))
    return g, 0, script


def gen_random_planar(points: int, seed: int) -> Graph:
    """Delaunay triangulation of seeded uniform points in the unit square.

    Edge weights are the Euclidean lengths snapped to multiples of 2**-30.
    Edges are listed in sorted (u, v) order.  Degenerate point sets (QHull
    failure or a zero-length snapped edge) trigger an internal reseed, a few
    times, before giving up.
    """
    from scipy.spatial import Delaunay
    from scipy.spatial import QhullError

    if points < 3:
        raise ValueError(f"need at least 3 points, got {points}")
    for attempt in range(5):
        rng = np.random.default_rng(seed + 1_000_003 * attempt)
        pts = rng.random((points, 2))
        try:
            tri = Delaunay(pts)
        except QhullError:
            continue
        pairs = set()
        for simplex in tri.simplices:
            a, b, c = int(simplex[0]), int(simplex[1]), int(simplex[2])
            pairs.add((min(a, b), max(a, b)))
            pairs.add((min(b, c), max(b, c)))
            pairs.add((min(a, c), max(a, c)))
        edges = []
        ok = True
        for u, v in sorted(pairs):
            d = math.dist(pts[u], pts[v])
            w = Fraction(round(d * _PLANAR_DENOM), _PLANAR_DENOM)
            if w == 0:
                ok = False
                break
            edges.append((u, v, w))
        if not ok:
            continue
        return Graph(points, edges)
    raise GenerationError(f"no valid triangulation after 5 attempts (seed {seed})")


def gen_toroidal_grid(p: int, q: int, weights: str = "uniform", seed: int = 0) -> Graph:
    """p x q grid with wraparound rows and columns (a torus), m = 2pq.

    weights: "unit" for all-ones, "uniform" for seeded rationals in [1, 2].
    Vertex (i, j) has id i*q + j; for each vertex its rightward edge is listed
    before its downward edge.
    """
    if p < 3 or q < 3:
        raise ValueError(f"need p, q >= 3 to avoid parallel edges, got {p}x{q}")
    if weights not in ("unit", "uniform"):
        raise ValueError(f"unknown weight mode {weights!r}")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(p):
        for j in range(q):
            here = i * q + j
            for other in (i * q + (j + 1) % q, ((i + 1) % p) * q + j):
                w = Fraction(1) if weights == "unit" else _rand_weight(rng)
                edges.append((here, other, w))
    return Graph(p * q, edges)


def gen_grid(p: int, q: int, weights: str = "unit", seed: int = 0) -> Graph:
    """Plain p x q grid (no wraparound); weights as in gen_toroidal_grid."""
    if p < 1 or q < 1 or p * q < 2:
        raise ValueError(f"grid {p}x{q} too small")
    if weights not in ("unit", "uniform"):
        raise ValueError(f"unknown weight mode {weights!r}")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(p):
        for j in range(q):
            here = i * q + j
            if j + 1 < q:
                w = Fraction(1) if weights == "unit" else _rand_weight(rng)
                edges.append((here, here + 1, w))
            if i + 1 < p:
                w = Fraction(1) if weights == "unit" else _rand_weight(rng)
                edges.append((here, here + q, w))
    return Graph(p * q, edges)


def gen_random_tree(n: int, seed: int = 0, weights: str = "uniform") -> Graph:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if weights not in ("unit", "uniform"):
        raise ValueError(f"unknown weight mode {weights!r}")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(1, n):
        parent = int(rng.integers(0, i))
        w = Fraction(1) if weights == "unit" else _rand_weight(rng)
        edges.append((parent, i, w))
    return Graph(n, edges)


def gen_erdos_renyi(n: int, p, seed: int = 0, weights: str = "uniform") -> Graph:
    """G(n, p) with seeded [1, 2] weights; resamples until connected.

    Up to 50 resamples (advancing the stream, same seed);
    raises GenerationError if none of them is connected.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    pf = float(Fraction(p))  # accepts "1/2" strings from JSON specs
    if not (0 < pf <= 1):
        raise ValueError(f"edge probability must be in (0, 1], got {p}")
    if weights not in ("unit", "uniform"):
        raise ValueError(f"unknown weight mode {weights!r}")
    rng = np.random.default_rng(seed)
    from .core import is_connected

    for _ in range(50):
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < pf:
                    w = Fraction(1) if weights == "unit" else _rand_weight(rng)
                    edges.append((u, v, w))
        g = Graph(n, edges)
        if is_connected(g):
            return g
    raise GenerationError(f"no connected G({n}, {p}) after 50 samples (seed {seed})")


# ---------------------------------------------------------------------------
# edge-list file format: "n m" header, then one "u v p q" line per edge,
# '#' lines are comments.  write_graph emits a canonical form that read_graph
# round-trips byte-identically.


def graph_to_text(g: Graph) -> str:
    """Canonical edge-list text: header `n m`, then `u v p q` per edge."""
    lines = [f"{g.n} {g.edge_count}"]
    for eid, (u, v) in enumerate(g.edges):
        w = g.weight(eid)
        lines.append(f"{u} {v} {w.numerator} {w.denominator}")
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(graph_to_text(g), encoding="utf-8")


def read_graph(path) -> Graph:
    path = Path(path)
    header = None
    edges = []
    n = m = None
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise ParseError(f"header must be 'n m', got {raw!r}", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"header must be two ints, got {raw!r}", lineno) from None
            if n < 1 or m < 0:
                raise ParseError(f"bad sizes n={n} m={m}", lineno)
            header = (n, m)
            continue
        if len(parts) != 4:
            raise ParseError(f"edge line must be 'u v p q', got {raw!r}", lineno)
        try:
            u, v, p, q = (int(x) for x in parts)
        except ValueError:
            raise ParseError(f"edge line must be four ints, got {raw!r}", lineno) from None
        if q < 1:
            raise ParseError(f"weight denominator must be >= 1, got {q}", lineno)
        if p < 0:
            raise ParseError(f"negative weight {p}/{q}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u},{v}) out of range for n={n}", lineno)
        if u == v:
            raise ParseError(f"self-loop at {u}", lineno)
        edges.append((u, v, Fraction(p, q)))
    if header is None:
        raise ParseError("empty file: missing 'n m' header")
    if len(edges) != m:
        raise ParseError(f"header promised {m} edges, file has {len(edges)}")
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# instance specs: a JSON-friendly description that builds a concrete instance


@dataclass(frozen=True)
class InstanceSpec:
    """Serializable description of one instance: family, parameters, seed."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_json_dict(cls, d: dict) -> "InstanceSpec":
        if "family" not in d:
            raise ValueError(f"instance spec needs a 'family': {d!r}")
        return cls(
            family=d["family"],
            params=dict(d.get("params", {})),
            seed=int(d.get("seed", 0)),
        )

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}[{inner}]#{self.seed}"

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items())), self.seed))

    def __eq__(self, other):
        return (
            isinstance(other, InstanceSpec)
            and self.family == other.family
            and self.params == other.params
            and self.seed == other.seed
        )


@dataclass
class BuiltInstance:
    graph: Graph
    start: int
    spec: InstanceSpec
    tie_break_script: tuple[int, ...] | None = None
    genus: int | None = None  # None = unknown

    @property
    def label(self) -> str:
        return self.spec.label


def build_instance(spec: InstanceSpec) -> BuiltInstance:
    """Materialize a spec; same spec always gives an identical graph."""
    fam = spec.family
    p = spec.params
    if fam == "comb_lower_bound":
        g, start, script = gen_comb_lower_bound(int(p["k"]), as_fraction(p["delta"]))
        return BuiltInstance(g, start, spec, tie_break_script=script, genus=0)
    if fam == "random_planar":
        g = gen_random_planar(int(p["points"]), spec.seed)
        return BuiltInstance(g, 0, spec, genus=0)
    if fam == "toroidal_grid":
        g = gen_toroidal_grid(int(p["p"]), int(p["q"]), p.get("weights", "uniform"), spec.seed)
        return BuiltInstance(g, 0, spec, genus=1)
    if fam == "grid":
        g = gen_grid(int(p["p"]), int(p["q"]), p.get("weights", "unit"), spec.seed)
        return BuiltInstance(g, 0, spec, genus=0)
    if fam == "random_tree":
        g = gen_random_tree(int(p["n"]), spec.seed, p.get("weights", "uniform"))
        return BuiltInstance(g, 0, spec, genus=0)
    if fam == "erdos_renyi":
        g = gen_erdos_renyi(int(p["n"]), p["p"], spec.seed, p.get("weights", "uniform"))
        return BuiltInstance(g, 0, spec, genus=None)
    if fam == "file":
        g = read_graph(p["path"])
        return BuiltInstance(g, int(p.get("start", 0)), spec, genus=None)
    raise ValueError(f"unknown instance family {fam!r}")
