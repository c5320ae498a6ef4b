"""Complex Bollobas-Erdos graphs.

Two equal vertex classes W and Z of points on the complex unit sphere
S^{k-1}(C).  Inside a class, u and v are adjacent when u is an h-rotation of
v for some h in [p-1], i.e. |u - rho^h v| <= sqrt(mu) for the primitive
p-th root of unity rho.  A cross pair (w, z) is adjacent when the inner
product <w, z> avoids the thin strips where Im(rho^h <w,z>) is small for
some h, and its argument falls in the window [0, 2 pi ell / p].

Two point-selection modes are supported.  The `sampled` default draws W and
Z i.i.d. uniform on the sphere; the clique bounds are deterministic
consequences of the edge rules alone, so they hold in either mode.  The
`strict` mode follows the equal-measure partition route (one cell per index,
two points per cell), which is only feasible for very small mu or k = 1.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import sphere
from .analysis import LabeledGraph
from .sphere import GEOM_TOL

_STREAM_W = 10
_STREAM_Z = 11


@dataclass(frozen=True)
class CbeParams:
    p: int
    ell: int
    k: int
    n: int
    epsilon: float
    bigK: float
    seed: int
    mode: str = "sampled"

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if not 1 <= self.ell < self.p:
            raise ValueError("ell must satisfy 1 <= ell < p")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.bigK < 1:
            raise ValueError("bigK must be at least 1")
        if self.mode not in ("sampled", "strict"):
            raise ValueError("mode must be 'sampled' or 'strict'")
        if 3 * math.sqrt(self.mu) >= 4 / self.p:
            warnings.warn(
                f"parameter hierarchy advisory: 3 sqrt(mu)={3*math.sqrt(self.mu):.4f} "
                f">= 4/p={4/self.p:.4f}; rotation composition is not guaranteed",
                stacklevel=2)
        if self.bigK * self.mu >= 1:
            warnings.warn(
                f"parameter hierarchy advisory: bigK*mu={self.bigK*self.mu:.4f} >= 1",
                stacklevel=2)

    @property
    def mu(self) -> float:
        return self.epsilon / math.sqrt(2 * self.k)

    @property
    def rho(self) -> complex:
        return complex(math.cos(2 * math.pi / self.p), math.sin(2 * math.pi / self.p))

    def to_dict(self) -> dict:
        return {
            "p": self.p, "ell": self.ell, "k": self.k, "n": self.n,
            "epsilon": self.epsilon, "bigK": self.bigK, "seed": self.seed,
            "mode": self.mode, "mu": self.mu,
            "rho": [self.rho.real, self.rho.imag],
        }


def rotation_witness(u, v, params: CbeParams):
    """Smallest h in [p-1] with |u - rho^h v| <= sqrt(mu), or None."""
    uu = np.asarray(u.coords if isinstance(u, sphere.ComplexUnitVector) else u,
                    dtype=np.complex128)
    vv = np.asarray(v.coords if isinstance(v, sphere.ComplexUnitVector) else v,
                    dtype=np.complex128)
    if uu.shape != vv.shape:
        raise ValueError("dimension mismatch")
    ip = complex(np.sum(uu * np.conj(vv)))
    for h in range(1, params.p):
        # |u - rho^h v|^2 = 2 - 2 Re(rho^{-h} <u, v>) on unit vectors
        dist_sq = 2.0 - 2.0 * (params.rho ** (-h) * ip).real
        if dist_sq <= params.mu + GEOM_TOL:
            return h
    return None


def _cross_conditions(ip: complex, params: CbeParams):
    """(strip condition, window condition) for a single inner product."""
    kmu = params.bigK * params.mu
    strips = all(abs((params.rho ** h * ip).imag) >= kmu - GEOM_TOL
                 for h in range(params.p))
    window_hi = 2 * math.pi * params.ell / params.p
    ang = cmath.phase(ip) % (2 * math.pi)
    window = ang <= window_hi + GEOM_TOL or ang >= 2 * math.pi - GEOM_TOL
    return strips, window


def cross_edge(w, z, params: CbeParams) -> bool:
    """Cross rule: |Im(rho^h <w,z>)| >= K mu for all h, and
    arg <w,z> in [0, 2 pi ell / p]."""
    ww = np.asarray(w.coords if isinstance(w, sphere.ComplexUnitVector) else w,
                    dtype=np.complex128)
    zz = np.asarray(z.coords if isinstance(z, sphere.ComplexUnitVector) else z,
                    dtype=np.complex128)
    if ww.shape != zz.shape:
        raise ValueError("dimension mismatch")
    ip = complex(np.sum(ww * np.conj(zz)))
    strips, window = _cross_conditions(ip, params)
    return strips and window


def _inner_adjacency(points: np.ndarray, params: CbeParams):
    """Bit adjacency and smallest-witness labels for one class."""
    n = points.shape[0]
    gram = points @ points.conj().T
    witness = np.zeros((n, n), dtype=np.int64)
    for h in range(1, params.p):
        dist_sq = 2.0 - 2.0 * (params.rho ** (-h) * gram).real
        hit = (dist_sq <= params.mu + GEOM_TOL) & (witness == 0)
        np.fill_diagonal(hit, False)
        witness[hit] = h
    # u h-rotation of v iff v (p-h)-rotation of u; keep the i<j orientation
    labels = {}
    adjacency = np.zeros((n, n), dtype=bool)
    for i, j in zip(*np.nonzero(witness)):
        if i < j:
            adjacency[i, j] = adjacency[j, i] = True
            labels[(int(i), int(j))] = int(witness[i, j])
    return adjacency, labels


def _cross_adjacency(W: np.ndarray, Z: np.ndarray, params: CbeParams):
    gram = W @ Z.conj().T
    kmu = params.bigK * params.mu
    strips = np.ones(gram.shape, dtype=bool)
    for h in range(params.p):
        strips &= np.abs((params.rho ** h * gram).imag) >= kmu - GEOM_TOL
    ang = np.angle(gram) % (2 * math.pi)
    window_hi = 2 * math.pi * params.ell / params.p
    window = (ang <= window_hi + GEOM_TOL) | (ang >= 2 * math.pi - GEOM_TOL)
    return strips & window


class CbeGraph:
    """Built complex Bollobas-Erdos graph; vertices 0..n-1 are W, n..2n-1 are Z."""

    def __init__(self, params: CbeParams, W: np.ndarray, Z: np.ndarray):
        if W.shape != (params.n, params.k) or Z.shape != (params.n, params.k):
            raise ValueError("point arrays must have shape (n, k)")
        self.params = params
        self.W = W
        self.Z = Z
        adj_w, labels_w = _inner_adjacency(W, params)
        adj_z, labels_z = _inner_adjacency(Z, params)
        cross = _cross_adjacency(W, Z, params)
        n = params.n
        adjacency = np.zeros((2 * n, 2 * n), dtype=bool)
        adjacency[:n, :n] = adj_w
        adjacency[n:, n:] = adj_z
        adjacency[:n, n:] = cross
        adjacency[n:, :n] = cross.T
        self.adjacency = adjacency
        self.rotation_labels = dict(labels_w)
        self.rotation_labels.update({(i + n, j + n): h for (i, j), h in labels_z.items()})

    @property
    def n(self) -> int:
        return self.params.n

    def vertex_point(self, v: int) -> np.ndarray:
        return self.W[v] if v < self.n else self.Z[v - self.n]

    def cross_density(self) -> float:
        n = self.n
        return float(self.adjacency[:n, n:].sum()) / (n * n)

    def cross_degrees(self) -> np.ndarray:
        n = self.n
        return np.concatenate([self.adjacency[:n, n:].sum(axis=1),
                               self.adjacency[n:, :n].sum(axis=1)])

    def max_inner_degree(self) -> int:
        n = self.n
        return int(max(self.adjacency[:n, :n].sum(axis=1).max(initial=0),
                       self.adjacency[n:, n:].sum(axis=1).max(initial=0)))

    def to_labeled_graph(self) -> LabeledGraph:
        labels = ["W"] * self.n + ["Z"] * self.n
        return LabeledGraph.from_adjacency(self.adjacency, labels)

    def header_dict(self) -> dict:
        return {"params": self.params.to_dict(),
                "class_sizes": {"W": self.n, "Z": self.n}}

    def write_edge_list(self, path):
        with open(path, "w") as fh:
            fh.write(f"# n={2 * self.n}\n")
            fh.write(f"# classes W=[0,{self.n}) Z=[{self.n},{2 * self.n})\n")
            rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
            for u, v in zip(rows, cols):
                fh.write(f"{u} {v}\n")

    def write_header(self, path):
        with open(path, "w") as fh:
            json.dump(self.header_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def _sample_distinct(k: int, n: int, seed: int, stream: int) -> np.ndarray:
    rng = sphere.philox_rng(seed, stream)
    pts = sphere.sample_complex_sphere(k, n, rng)
    # duplicates have probability zero; resample defensively anyway
    while True:
        gram = pts @ pts.conj().T
        np.fill_diagonal(gram, 0)
        dup = np.argwhere(np.abs(gram - 1.0) < 1e-15)
        if dup.size == 0:
            return pts
        for i, _ in dup:
            pts[i] = sphere.sample_complex_sphere(k, 1, rng)[0]


def build_cbe(params: CbeParams) -> CbeGraph:
    """Construct the graph; deterministic for fixed params.

    strict mode partitions the sphere into n cells of diameter mu/4 and takes
    both class points from the same cell; InfeasiblePartition propagates when
    n is too small for that.  sampled mode draws the two classes i.i.d.
    """
    if params.mode == "strict":
        part = sphere.partition_sphere(params.k, params.n, params.mu / 4, params.seed)
        pairs = [part.sample_cell(i, 2, substream=1) for i in range(params.n)]
        W = np.array([p[0] for p in pairs])
        Z = np.array([p[1] for p in pairs])
    else:
        W = _sample_distinct(params.k, params.n, params.seed, _STREAM_W)
        Z = _sample_distinct(params.k, params.n, params.seed, _STREAM_Z)
    graph = CbeGraph(params, W, Z)
    if params.k >= 32:
        lo = (params.ell / params.p - 0.2) * params.n
        hi = (params.ell / params.p + 0.2) * params.n
        degs = graph.cross_degrees()
        if degs.min() < lo or degs.max() > hi:
            warnings.warn(
                f"cross degree concentration check failed: range "
                f"[{degs.min()}, {degs.max()}] outside [{lo:.1f}, {hi:.1f}]",
                stacklevel=2)
    return graph
