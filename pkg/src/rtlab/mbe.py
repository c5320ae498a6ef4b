"""Multipartite Bollobas-Erdos graphs.

q vertex classes, each a copy of a high dimensional Borsuk graph B(ell)
built through the hypergraph pipeline {Q_h} -> B -> B' -> B(ell):

  * Q_h splits the r = 2^ell binary strings of length ell by their h-th bit;
  * B is an r-uniform geometric hypergraph on ell-tuples of sphere points
    whose hyperedges realise every Q_h split by an almost antipodal pair of
    projections (|x - y| >= 2 - mu);
  * B' optionally blows every point up into t^(1/ell) near-duplicates,
    retains blown-up hyperedge copies at random, and deletes every small
    dense subconfiguration;
  * B(ell) is the shadow graph of B'.

Cross edges between classes i and i' require |u_h - v_{h'}| <= sqrt(2) - mu
for every (i,i')-related coordinate pair (h, h'), where relatedness is
derived from a proper (q-1)-edge colouring of K_q.

At desk scale the equal-measure partition with diameter mu/4 is far out of
reach, and hyperedges only exist when the point set contains almost
antipodal pairs, so the default point scheme samples m/2 uniform points and
adds their exact antipodes.  The partition route is kept as an option, and
an explicit point set can be supplied for experiments.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import sphere
from .analysis import LabeledGraph
from .sphere import GEOM_TOL

MAX_Q_FAMILY_ELL = 6
MAX_BASE_VERTICES = 10 ** 6
MAX_ASSIGNMENTS = 10 ** 5
MAX_BLOWUP_EDGES = 2 * 10 ** 5

_STREAM_POINTS = 20
_STREAM_DUPS = 21
_STREAM_RETAIN = 22


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MbeParams:
    ell: int
    p: int
    q: int
    k: int          # spheres are S^k(R), i.e. unit spheres in R^{k+1}
    m: int          # points per sphere
    epsilon: float
    t: int = 1      # blow-up multiplicity, a perfect ell-th power
    retention: float = 0.5
    seed: int = 0
    point_mode: str = "antipodal"

    def __post_init__(self):
        if self.q < 2 or self.q % 2:
            raise ValueError("q must be even and at least 2")
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.ell < self.p * (self.q - 1):
            raise ValueError("ell must be at least p (q - 1)")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.t < 1 or round(self.t ** (1 / self.ell)) ** self.ell != self.t:
            raise ValueError("t must be a perfect ell-th power")
        if not 0.0 < self.retention <= 1.0:
            raise ValueError("retention must lie in (0, 1]")
        if self.point_mode not in ("antipodal", "partition"):
            raise ValueError("point_mode must be 'antipodal' or 'partition'")
        if self.point_mode == "antipodal" and self.m % 2:
            raise ValueError("antipodal point mode needs even m")

    @property
    def mu(self) -> float:
        return self.epsilon / math.sqrt(self.k)

    @property
    def r(self) -> int:
        return 2 ** self.ell

    @property
    def zeta(self) -> float:
        return math.exp(-self.k * self.mu / (3 * 2 ** (2 * self.ell)))

    @property
    def t_root(self) -> int:
        return round(self.t ** (1 / self.ell))

    def to_dict(self) -> dict:
        return {"ell": self.ell, "p": self.p, "q": self.q, "k": self.k,
                "m": self.m, "epsilon": self.epsilon, "t": self.t,
                "retention": self.retention, "seed": self.seed,
                "point_mode": self.point_mode, "mu": self.mu,
                "r": self.r, "zeta": self.zeta}


# ---------------------------------------------------------------------------
# step 1: binary strings and the graphs Q_h
# ---------------------------------------------------------------------------

class BinaryStringFamily:
    """The r = 2^ell binary strings with the bipartite splits Q_h, h in [ell]."""

    def __init__(self, ell: int):
        if not 1 <= ell <= MAX_Q_FAMILY_ELL:
            raise ValueError(f"ell must lie in [1, {MAX_Q_FAMILY_ELL}]")
        self.ell = ell
        self.r = 2 ** ell
        self.strings = [tuple((i >> (ell - 1 - b)) & 1 for b in range(ell))
                        for i in range(self.r)]

    def q_edges(self, h: int) -> set:
        """Edges of Q_h (1-based coordinate): string pairs differing in bit h."""
        if not 1 <= h <= self.ell:
            raise ValueError("coordinate out of range")
        return {(i, j) for i in range(self.r) for j in range(i + 1, self.r)
                if self.strings[i][h - 1] != self.strings[j][h - 1]}

    def union_alpha(self, coords) -> int:
        """Independence number of the union of Q_h over h in coords, by brute
        force over string subsets (feasible up to ell = 4, gated by size)."""
        coords = set(coords)
        if self.r > 16:
            raise sphere.ResourceLimit("brute-force independence gated at r <= 16")
        edges = set()
        for h in coords:
            edges |= self.q_edges(h)
        best = 0
        for size in range(self.r, 0, -1):
            if size <= best:
                break
            for sub in itertools.combinations(range(self.r), size):
                if not any((a, b) in edges for a, b in itertools.combinations(sub, 2)):
                    best = size
                    break
        return best


def build_q_family(ell: int) -> BinaryStringFamily:
    return BinaryStringFamily(ell)


# ---------------------------------------------------------------------------
# proper edge colouring of K_q (round-robin 1-factorisation)
# ---------------------------------------------------------------------------

def proper_edge_coloring(q: int) -> dict:
    """Colour map {i, j} -> colour in [q-1]; each colour class is a perfect
    matching (circle method; classes are 0-based, colours 1-based)."""
    if q < 2 or q % 2:
        raise ValueError("q must be even and at least 2")
    coloring = {}
    fixed = q - 1
    for rnd in range(q - 1):
        coloring[frozenset((fixed, rnd))] = rnd + 1
        for i in range(1, q // 2):
            a = (rnd + i) % (q - 1)
            b = (rnd - i) % (q - 1)
            coloring[frozenset((a, b))] = rnd + 1
    return coloring


def related_coordinates(i: int, ip: int, params: MbeParams, coloring: dict) -> set:
    """(i,i')-related coordinate pairs (1-based), exactly ell - p of them.

    (h, h') is related iff h = (c_{ij}-1) p + s and h' = (c_{i'j}-1) p + s for
    some third class j and s in [p], or h = h' > p (q - 1).
    """
    if i == ip:
        raise ValueError("classes must be distinct")
    out = set()
    for j in range(params.q):
        if j in (i, ip):
            continue
        cij = coloring[frozenset((i, j))]
        cipj = coloring[frozenset((ip, j))]
        for s in range(1, params.p + 1):
            out.add(((cij - 1) * params.p + s, (cipj - 1) * params.p + s))
    for h in range(params.p * (params.q - 1) + 1, params.ell + 1):
        out.add((h, h))
    return out


# ---------------------------------------------------------------------------
# steps 2-3: the geometric hypergraph and its blow-up
# ---------------------------------------------------------------------------

class GeometricHypergraph:
    """r-uniform hypergraph on ell-tuples of sphere points.

    Vertices are tuples of point ids (one per coordinate h in [ell]) into
    `points`; hyperedges are stored as ordered r-tuples of vertex ids,
    labelled by the binary strings, and satisfy: whenever strings b_i, b_j
    differ in coordinate h, the h-th projections are almost antipodal
    (|x - y| >= 2 - mu).
    """

    def __init__(self, ell: int, mu: float, points: np.ndarray,
                 vertices: list, hyperedges: list, base_of=None):
        self.ell = ell
        self.mu = mu
        self.points = points
        self.vertices = vertices
        self.vertex_index = {v: i for i, v in enumerate(vertices)}
        self.hyperedges = hyperedges
        self.base_of = base_of  # point id -> base point id after blow-up
        self.family = BinaryStringFamily(ell)

    @property
    def r(self) -> int:
        return 2 ** self.ell

    def hyperedge_valid(self, edge) -> bool:
        """Re-check the antipodality constraints of one ordered hyperedge."""
        fam = self.family
        for h in range(1, self.ell + 1):
            for a, b in fam.q_edges(h):
                xa = self.points[self.vertices[edge[a]][h - 1]]
                xb = self.points[self.vertices[edge[b]][h - 1]]
                if np.linalg.norm(xa - xb) < (2 - self.mu) - GEOM_TOL:
                    return False
        return True

    def write_hyperedges(self, path):
        with open(path, "w") as fh:
            fh.write(f"# r={self.r} vertices={len(self.vertices)}\n")
            for edge in self.hyperedges:
                fh.write(" ".join(str(v) for v in edge) + "\n")


def default_points(params: MbeParams) -> np.ndarray:
    """Point set P on S^k(R) per the configured mode.

    antipodal: m/2 uniform points plus their exact antipodes (indices
    i and i + m/2 are antipodal), so almost antipodal pairs exist and the
    Borsuk structure is non-degenerate at desk scale.
    partition: representatives of an equal-measure partition with diameter
    mu/4 (usually infeasible below astronomical m).
    """
    if params.point_mode == "partition":
        part = sphere.partition_real_sphere(params.k + 1, params.m,
                                            params.mu / 4, params.seed)
        return part.representatives
    rng = sphere.philox_rng(params.seed, _STREAM_POINTS)
    half = sphere.sample_real_sphere(params.k + 1, params.m // 2, rng)
    return np.vstack([half, -half])


def _coordinate_assignments(far: np.ndarray, fam: BinaryStringFamily, h: int):
    """All maps string-index -> point id with far(x_i, x_j) whenever the
    strings differ in coordinate h.  DFS with cross-side pruning."""
    r = fam.r
    side = [fam.strings[i][h - 1] for i in range(r)]
    m = far.shape[0]
    out = []
    assign = [0] * r

    def dfs(i):
        if len(out) > MAX_ASSIGNMENTS:
            raise sphere.ResourceLimit("hyperedge assignment enumeration too large")
        if i == r:
            out.append(tuple(assign))
            return
        for pt in range(m):
            ok = all(far[pt, assign[j]] for j in range(i) if side[j] != side[i])
            if ok:
                assign[i] = pt
                dfs(i + 1)

    dfs(0)
    return out


def build_base_hypergraph(params: MbeParams, points: np.ndarray | None = None) -> GeometricHypergraph:
    """Hypergraph B on the full vertex set P^ell.

    Hyperedges are enumerated per coordinate from the almost-antipodal pair
    structure of P and combined across coordinates; this never brute-forces
    all m^(ell r) labelled tuples.
    """
    P = default_points(params) if points is None else np.asarray(points, dtype=float)
    m = P.shape[0]
    if m ** params.ell > MAX_BASE_VERTICES:
        raise sphere.ResourceLimit(
            f"m^ell = {m ** params.ell} exceeds the desk bound {MAX_BASE_VERTICES}")
    fam = BinaryStringFamily(params.ell)
    gram = P @ P.T
    far = gram <= (1.0 - (2 - params.mu) ** 2 / 2.0) + GEOM_TOL

    vertices = [tuple(v) for v in itertools.product(range(m), repeat=params.ell)]
    vertex_index = {v: i for i, v in enumerate(vertices)}

    per_coord = [_coordinate_assignments(far, fam, h)
                 for h in range(1, params.ell + 1)]
    total = 1
    for a in per_coord:
        total *= len(a)
        if total > MAX_ASSIGNMENTS:
            raise sphere.ResourceLimit("hyperedge combination count too large")

    seen = set()
    hyperedges = []
    for combo in itertools.product(*per_coord):
        edge = tuple(vertex_index[tuple(combo[h][i] for h in range(params.ell))]
                     for i in range(fam.r))
        key = frozenset(edge)
        if key not in seen:
            seen.add(key)
            hyperedges.append(edge)
    return GeometricHypergraph(params.ell, params.mu, P, vertices, hyperedges)


# -- blow-up and sparsification ---------------------------------------------

def _bullet2_value(n_vertices: int, n_edges: int, zeta: float, r: int) -> float:
    return n_vertices + (1 + zeta - r) * (n_edges - 1)


def find_dense_subconfig(hyperedges, zeta: float, r: int, max_vertices: int,
                         max_edges: int = 8):
    """Search connected hyperedge subsets violating the sparsity condition
    |V| + (1 + zeta - r)(|E| - 1) < r, up to max_vertices vertices.

    Breadth-first over connected subsets (smallest violating configuration
    first); a disconnected violator always contains a connected one, so
    connected subsets suffice.  Returns a tuple of hyperedge indices or None.
    """
    edge_sets = [frozenset(e) for e in hyperedges]
    n = len(edge_sets)
    neighbors = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if edge_sets[i] & edge_sets[j]:
                neighbors[i].add(j)
                neighbors[j].add(i)

    frontier = [frozenset((i,)) for i in range(n)]
    seen = set(frontier)
    while frontier:
        nxt = []
        for chosen in frontier:
            verts = frozenset.union(*(edge_sets[i] for i in chosen))
            if len(chosen) >= 2 and len(verts) <= max_vertices:
                if _bullet2_value(len(verts), len(chosen), zeta, r) < r - GEOM_TOL:
                    return tuple(sorted(chosen))
            if len(chosen) >= max_edges or len(verts) > max_vertices:
                continue
            grow = set().union(*(neighbors[i] for i in chosen)) - chosen
            for j in grow:
                cand = chosen | {j}
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    return None


@dataclass(frozen=True)
class BlowupReport:
    base_edges: int
    candidate_copies: int
    retained: int
    deleted: int


def blowup_sparsify(base: GeometricHypergraph, t: int, zeta: float, seed: int,
                    retention: float = 0.5):
    """Blow up the base hypergraph by t corresponding copies per vertex,
    retain each blown-up hyperedge copy independently with the given
    probability, then delete hyperedges until no small dense subconfiguration
    remains.  Returns (B', report).

    t = 1 is the identity blow-up: B is returned unchanged.
    """
    ell = base.ell
    t_root = round(t ** (1 / ell))
    if t_root ** ell != t:
        raise ValueError("t must be a perfect ell-th power")
    if t == 1:
        report = BlowupReport(len(base.hyperedges), len(base.hyperedges),
                              len(base.hyperedges), 0)
        return base, report

    m, dim = base.points.shape
    mu = base.mu
    rng = sphere.philox_rng(seed, _STREAM_DUPS)
    dup_points = np.empty((m * t_root, dim))
    base_of = np.repeat(np.arange(m), t_root)
    for pid in range(m):
        for c in range(t_root):
            noise = rng.standard_normal(dim)
            x = base.points[pid] + (mu / 100) * noise / np.linalg.norm(noise)
            dup_points[pid * t_root + c] = x / np.linalg.norm(x)

    def dup_ids(pid):
        return range(pid * t_root, (pid + 1) * t_root)

    vertices = []
    for v in base.vertices:
        for combo in itertools.product(*(dup_ids(pid) for pid in v)):
            vertices.append(tuple(combo))
    vertex_index = {v: i for i, v in enumerate(vertices)}

    r = base.r
    copies_per_edge = t ** r
    candidates = len(base.hyperedges) * copies_per_edge
    if candidates > MAX_BLOWUP_EDGES:
        raise sphere.ResourceLimit(
            f"blow-up would enumerate {candidates} hyperedge copies")

    rng_keep = sphere.philox_rng(seed, _STREAM_RETAIN)
    retained = []
    for edge in base.hyperedges:
        member_copies = []
        for vid in edge:
            v = base.vertices[vid]
            member_copies.append([vertex_index[c] for c in
                                  itertools.product(*(dup_ids(pid) for pid in v))])
        for combo in itertools.product(*member_copies):
            if rng_keep.random() < retention:
                retained.append(tuple(combo))

    kept = list(retained)
    deleted = 0
    max_cfg_vertices = r ** 3
    while True:
        bad = find_dense_subconfig(kept, zeta, r, max_cfg_vertices)
        if bad is None:
            break
        kept.pop(bad[-1])
        deleted += 1

    blown = GeometricHypergraph(ell, mu, dup_points, vertices, kept,
                                base_of=base_of)
    report = BlowupReport(len(base.hyperedges), candidates, len(retained), deleted)
    return blown, report


# ---------------------------------------------------------------------------
# step 4: shadow graph
# ---------------------------------------------------------------------------

class BorsukGraph:
    """Shadow graph of a geometric hypergraph: u ~ v iff some hyperedge
    contains both.  Keeps a covering hyperedge reference per edge."""

    def __init__(self, hypergraph: GeometricHypergraph):
        self.hypergraph = hypergraph
        n = len(hypergraph.vertices)
        self.n = n
        self.adjacency = np.zeros((n, n), dtype=bool)
        self.edge_cover = {}
        for ei, edge in enumerate(hypergraph.hyperedges):
            for a, b in itertools.combinations(sorted(set(edge)), 2):
                self.adjacency[a, b] = self.adjacency[b, a] = True
                self.edge_cover.setdefault((a, b), ei)

    def to_labeled_graph(self) -> LabeledGraph:
        return LabeledGraph.from_adjacency(self.adjacency)

    def coordinate_points(self, v: int) -> np.ndarray:
        hg = self.hypergraph
        return hg.points[list(hg.vertices[v])]


def shadow_graph(hypergraph: GeometricHypergraph) -> BorsukGraph:
    return BorsukGraph(hypergraph)


def lengthy_coordinates(borsuk: BorsukGraph, vertex_ids, mu: float) -> set:
    """Coordinates h in [ell] witnessed by an almost antipodal pair
    (|v_h - v'_h| >= 2 - mu) within the given vertex set."""
    ids = list(vertex_ids)
    hg = borsuk.hypergraph
    out = set()
    for h in range(1, hg.ell + 1):
        pts = hg.points[[hg.vertices[v][h - 1] for v in ids]]
        if len(ids) < 2:
            break
        gram = pts @ pts.T
        thr = 1.0 - (2 - mu) ** 2 / 2.0
        iu = np.triu_indices(len(ids), k=1)
        if np.any(gram[iu] <= thr + GEOM_TOL):
            out.add(h)
    return out


# ---------------------------------------------------------------------------
# the final graph
# ---------------------------------------------------------------------------

class MbeGraph:
    """q classes, each a copy of B(ell); global ids are class * N + local."""

    def __init__(self, params: MbeParams, borsuk: BorsukGraph, coloring: dict,
                 blowup_report: BlowupReport):
        self.params = params
        self.borsuk = borsuk
        self.coloring = coloring
        self.blowup_report = blowup_report
        self.related = {}
        N = borsuk.n
        q = params.q
        self.class_size = N
        self.n = N * q
        adjacency = np.zeros((self.n, self.n), dtype=bool)
        for i in range(q):
            adjacency[i * N:(i + 1) * N, i * N:(i + 1) * N] = borsuk.adjacency

        hg = borsuk.hypergraph
        coord_ids = np.array([list(hg.vertices[v]) for v in range(N)])
        gram = hg.points @ hg.points.T
        near = gram >= (math.sqrt(2) * params.mu - params.mu ** 2 / 2.0) - GEOM_TOL
        # |x - y| <= sqrt(2) - mu  <=>  <x,y> >= sqrt(2) mu - mu^2/2

        for i in range(q):
            for ip in range(i + 1, q):
                rel = related_coordinates(i, ip, params, coloring)
                self.related[(i, ip)] = rel
                block = np.ones((N, N), dtype=bool)
                for h, hp in sorted(rel):
                    block &= near[np.ix_(coord_ids[:, h - 1], coord_ids[:, hp - 1])]
                adjacency[i * N:(i + 1) * N, ip * N:(ip + 1) * N] = block
                adjacency[ip * N:(ip + 1) * N, i * N:(i + 1) * N] = block.T
        self.adjacency = adjacency

    def omega_bound(self) -> int:
        return 2 ** self.params.ell + 2 ** self.params.p + self.params.q - 2

    def class_of(self, v: int) -> int:
        return v // self.class_size

    def local_id(self, v: int) -> int:
        return v % self.class_size

    def to_labeled_graph(self) -> LabeledGraph:
        labels = [f"V{1 + v // self.class_size}" for v in range(self.n)]
        return LabeledGraph.from_adjacency(self.adjacency, labels)

    def pair_density(self, i: int, ip: int) -> float:
        N = self.class_size
        block = self.adjacency[i * N:(i + 1) * N, ip * N:(ip + 1) * N]
        return float(block.sum()) / (N * N)

    def header_dict(self) -> dict:
        return {"params": self.params.to_dict(),
                "class_sizes": {f"V{i+1}": self.class_size for i in range(self.params.q)},
                "coloring": {f"{min(a,b)},{max(a,b)}": c
                             for key, c in self.coloring.items()
                             for a, b in [tuple(sorted(key))]},
                "blowup": {"base_edges": self.blowup_report.base_edges,
                           "retained": self.blowup_report.retained,
                           "deleted": self.blowup_report.deleted}}

    def write_edge_list(self, path):
        with open(path, "w") as fh:
            fh.write(f"# n={self.n}\n")
            fh.write(f"# classes: {self.params.q} x {self.class_size}\n")
            rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
            for u, v in zip(rows, cols):
                fh.write(f"{u} {v}\n")


def build_mbe(params: MbeParams, points: np.ndarray | None = None) -> MbeGraph:
    """Full pipeline: points -> B -> B' -> B(ell) -> q classes with cross
    edges; deterministic given the seed."""
    base = build_base_hypergraph(params, points)
    blown, report = blowup_sparsify(base, params.t, params.zeta, params.seed,
                                    params.retention)
    borsuk = shadow_graph(blown)
    coloring = proper_edge_coloring(params.q)
    return MbeGraph(params, borsuk, coloring, report)
