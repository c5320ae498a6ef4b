"""Geometry of high dimensional real and complex unit spheres.

Provides unit-vector types, the coordinate-interleaving isometry between
S^{k-1}(C) and S^{2k-1}(R), spherical caps with closed-form measure bounds
and Monte Carlo oracles, equal-measure partitions with certified diameter
bounds, and an exhaustive search for rhombus configurations (two nearly
antipodal pairs whose four cross distances are all at most sqrt(2)-mu),
which cannot exist among genuine unit vectors.

All geometric predicates use closed comparisons with an absolute slack of
GEOM_TOL so that boundary cases keep their mathematical truth value at
double precision.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

GEOM_TOL = 1e-9

_TWO_PI = 2.0 * math.pi

# Stream ids so different consumers of the same seed never share a Philox key.
_STREAM_MC = 1
_STREAM_CELL = 2
_STREAM_SAMPLE = 3


class InfeasiblePartition(ValueError):
    """The requested cell count cannot meet the diameter bound."""


class ResourceLimit(RuntimeError):
    """An operation exceeded its configured exact-mode size gate."""


def philox_rng(seed: int, stream: int = 0, substream: int = 0) -> np.random.Generator:
    """Counter-based generator; (seed, stream, substream) fully determine output.

    Substreams let Monte Carlo chunks be distributed over threads while the
    pooled result stays identical to a sequential run.
    """
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF,
           ((int(stream) & 0xFFFFFFFF) << 32) | (int(substream) & 0xFFFFFFFF)]
    return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# Unit vectors and the interleaving isometry
# ---------------------------------------------------------------------------

class ComplexUnitVector:
    """A point on S^{k-1}(C); renormalised to unit l2-norm on construction."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        z = np.asarray(coords, dtype=np.complex128).reshape(-1)
        if z.size < 1:
            raise ValueError("dimension must be at least 1")
        nrm = float(np.linalg.norm(z))
        if not math.isfinite(nrm) or nrm <= 0.0:
            raise ValueError("cannot normalise a zero or non-finite vector")
        z = z / nrm
        z.flags.writeable = False
        self.coords = z

    @property
    def k(self) -> int:
        return self.coords.size

    def __repr__(self):
        return f"ComplexUnitVector(k={self.k})"


class RealUnitVector:
    """A point on S^{d-1}(R); renormalised to unit l2-norm on construction."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        x = np.asarray(coords, dtype=np.float64).reshape(-1)
        if x.size < 1:
            raise ValueError("dimension must be at least 1")
        nrm = float(np.linalg.norm(x))
        if not math.isfinite(nrm) or nrm <= 0.0:
            raise ValueError("cannot normalise a zero or non-finite vector")
        x = x / nrm
        x.flags.writeable = False
        self.coords = x

    @property
    def d(self) -> int:
        return self.coords.size

    def __repr__(self):
        return f"RealUnitVector(d={self.d})"


def as_complex_array(points) -> np.ndarray:
    """Coerce ComplexUnitVector iterables or (n, k) arrays to a complex array."""
    if isinstance(points, np.ndarray) and points.ndim == 2:
        return np.asarray(points, dtype=np.complex128)
    rows = [p.coords if isinstance(p, ComplexUnitVector) else np.asarray(p, dtype=np.complex128)
            for p in points]
    return np.asarray(rows, dtype=np.complex128)


def as_real_array(points) -> np.ndarray:
    """Coerce RealUnitVector iterables or (n, d) arrays to a float array."""
    if isinstance(points, np.ndarray) and points.ndim == 2:
        return np.asarray(points, dtype=np.float64)
    rows = [p.coords if isinstance(p, RealUnitVector) else np.asarray(p, dtype=np.float64)
            for p in points]
    return np.asarray(rows, dtype=np.float64)


def interleave(z: np.ndarray) -> np.ndarray:
    """(x1+iy1,...,xk+iyk) -> (x1,y1,...,xk,yk), vectorised over rows."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=np.float64)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def uninterleave(x: np.ndarray) -> np.ndarray:
    """Inverse of interleave; last axis length must be even."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] % 2:
        raise ValueError("real dimension must be even")
    return x[..., 0::2] + 1j * x[..., 1::2]


def complex_to_real(z: ComplexUnitVector) -> RealUnitVector:
    """Distance-preserving map from S^{k-1}(C) to S^{2k-1}(R)."""
    return RealUnitVector(interleave(z.coords))


def real_to_complex(x: RealUnitVector) -> ComplexUnitVector:
    return ComplexUnitVector(uninterleave(x.coords))


# ---------------------------------------------------------------------------
# Spherical caps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphericalCap:
    """Cap {x : <x, center> >= alpha} (real inner product via the isometry).

    height = 1 - alpha, diameter = 2 sqrt(1 - alpha^2).
    """

    center: object  # RealUnitVector or ComplexUnitVector
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")

    @property
    def height(self) -> float:
        return 1.0 - self.alpha

    @property
    def diameter(self) -> float:
        return 2.0 * math.sqrt(1.0 - self.alpha * self.alpha)

    def contains(self, points) -> np.ndarray:
        if isinstance(self.center, ComplexUnitVector):
            c = interleave(self.center.coords)
            pts = interleave(as_complex_array(points))
        else:
            c = self.center.coords
            pts = as_real_array(points)
        return pts @ c >= self.alpha - GEOM_TOL


def cap_measure_upper_bound(k: int, alpha: float) -> float:
    """Upper bound exp(-k alpha^2) on the measure of a height-(1-alpha) cap
    of S^{k-1}(C)."""
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    if k < 1:
        raise ValueError("k must be positive")
    return math.exp(-k * alpha * alpha)


def cap_measure_lower_bound(k: int, delta: float) -> float:
    """Lower bound max(0, 1/2 - sqrt(2) delta) on the measure of the cap of
    points within distance sqrt(2) - delta/sqrt(2k) of a fixed point of
    S^{k-1}(C); requires k >= 3."""
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if k < 3:
        raise ValueError("k must be at least 3")
    return max(0.0, 0.5 - math.sqrt(2.0) * delta)


# ---------------------------------------------------------------------------
# Uniform sampling and Monte Carlo measure oracles
# ---------------------------------------------------------------------------

def sample_real_sphere(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform points on S^{d-1}(R), shape (size, d)."""
    x = rng.standard_normal((size, d))
    nrm = np.linalg.norm(x, axis=1, keepdims=True)
    # resample the measure-zero event of an exactly zero Gaussian row
    while np.any(nrm == 0.0):
        bad = nrm[:, 0] == 0.0
        x[bad] = rng.standard_normal((int(bad.sum()), d))
        nrm = np.linalg.norm(x, axis=1, keepdims=True)
    return x / nrm


def sample_complex_sphere(k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform points on S^{k-1}(C), shape (size, k) complex."""
    return uninterleave(sample_real_sphere(2 * k, size, rng))


_MC_CHUNK = 1 << 15


def _mc_first_coord_fraction(d: int, threshold: float, samples: int, seed: int,
                             substream_base: int, threads: int = 1):
    """Fraction of uniform points on S^{d-1}(R) with first coordinate at
    least `threshold`, plus its binomial standard error.

    Chunks are keyed by (seed, chunk index), so the count is identical for
    any thread count.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    sizes = [(_MC_CHUNK if (i + 1) * _MC_CHUNK <= samples else samples - i * _MC_CHUNK)
             for i in range((samples + _MC_CHUNK - 1) // _MC_CHUNK)]

    def count_chunk(ci_size):
        ci, size = ci_size
        rng = philox_rng(seed, _STREAM_MC, substream_base + ci)
        x = rng.standard_normal((size, d))
        nrm = np.linalg.norm(x, axis=1)
        return int(np.count_nonzero(x[:, 0] >= threshold * nrm))

    jobs = list(enumerate(sizes))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(count_chunk, jobs))
    else:
        hits = sum(count_chunk(j) for j in jobs)
    phat = hits / samples
    se = math.sqrt(max(phat * (1.0 - phat), 1.0 / samples) / samples)
    return phat, se


def mc_cap_height_measure(k: int, alpha: float, samples: int, seed: int,
                          threads: int = 1):
    """Monte Carlo measure of a cap of height 1-alpha on S^{k-1}(C)."""
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    return _mc_first_coord_fraction(2 * k, alpha, samples, seed, 0, threads)


def mc_cap_radius_measure(k: int, radius: float, samples: int, seed: int,
                          threads: int = 1):
    """Monte Carlo measure of {x : |x - pole| <= radius} on S^{k-1}(C)."""
    if not 0.0 < radius <= 2.0:
        raise ValueError("radius must lie in (0, 2]")
    threshold = 1.0 - radius * radius / 2.0
    return _mc_first_coord_fraction(2 * k, threshold, samples, seed, 1 << 20, threads)


def two_set_distance_check(A, B, nu: float) -> bool:
    """True iff max_{a in A, b in B} |a - b| >= 2 - nu (closed, GEOM_TOL slack)."""
    a = as_complex_array(A)
    b = as_complex_array(B)
    if a.size == 0 or b.size == 0:
        raise ValueError("A and B must be nonempty")
    ra = interleave(a)
    rb = interleave(b)
    # |a-b|^2 = 2 - 2 <a, b> on unit vectors
    min_ip = float(np.min(ra @ rb.T))
    dmax = math.sqrt(max(0.0, 2.0 - 2.0 * min_ip))
    return dmax >= (2.0 - nu) - GEOM_TOL


def rhombus_search(P, Q, mu: float):
    """Search for p1, p2 in P and q1, q2 in Q with |p1-p2| >= 2-mu,
    |q1-q2| >= 2-mu and all four cross distances <= sqrt(2)-mu.

    Exhaustive over all quadruples: any witness quadruple must consist of a
    far pair of P and a far pair of Q, so enumerating far pairs first loses
    nothing.  No witness exists for genuine unit vectors; a non-None return
    indicates corrupted input upstream.
    """
    if not 0.0 < mu < 0.25:
        raise ValueError("mu must lie in (0, 1/4)")
    p = as_real_array(P)
    q = as_real_array(Q)
    far_ip = 1.0 - (2.0 - mu) ** 2 / 2.0          # <x,y> <= far_ip  <=>  |x-y| >= 2-mu
    near_ip = 1.0 - (math.sqrt(2.0) - mu) ** 2 / 2.0  # <x,y> >= near_ip <=> |x-y| <= sqrt2-mu

    def far_pairs(x):
        g = x @ x.T
        idx = np.argwhere(np.triu(g <= far_ip + GEOM_TOL, k=1))
        return [tuple(ij) for ij in idx]

    fp = far_pairs(p)
    if not fp:
        return None
    fq = far_pairs(q)
    if not fq:
        return None
    cross = p @ q.T
    for i1, i2 in fp:
        for j1, j2 in fq:
            if (cross[i1, j1] >= near_ip - GEOM_TOL and cross[i1, j2] >= near_ip - GEOM_TOL
                    and cross[i2, j1] >= near_ip - GEOM_TOL and cross[i2, j2] >= near_ip - GEOM_TOL):
                return (p[i1].copy(), p[i2].copy(), q[j1].copy(), q[j2].copy())
    return None


# ---------------------------------------------------------------------------
# Equal-measure partitions
#
# S^{d-1}(R) is parametrised by nested spherical coordinates: axis j < d-2 is
# a polar angle in [0, pi] with density proportional to sin^{d-2-j}, axis d-2
# is the azimuth, uniform on [0, 2 pi).  The product density is the uniform
# measure, so axis-aligned boxes have measure equal to the product of their
# one-dimensional quantile spans.
#
# Cells are built by the cap-and-collar scheme: the two polar caps become
# single cells, the collar in between is cut into latitude bands whose cell
# counts are proportional to band measure (cumulative rounding), band
# boundaries are then re-placed at exact measure quantiles, and each band is
# partitioned recursively on the subsphere one dimension down.  Every cell
# has normalised measure 1/n by construction and carries a certified
# diameter bound computed from its box.
# ---------------------------------------------------------------------------

def _chord(w: float) -> float:
    return 2.0 if w >= math.pi else 2.0 * math.sin(0.5 * w)


def _polar_cdf(m: int, theta: float) -> float:
    """Normalised integral of sin^m on [0, theta], theta in [0, pi], m >= 1."""
    if theta <= 0.0:
        return 0.0
    if theta >= math.pi:
        return 1.0
    a = 0.5 * (m + 1)
    if theta <= 0.5 * math.pi:
        return 0.5 * float(special.betainc(a, 0.5, math.sin(theta) ** 2))
    return 1.0 - 0.5 * float(special.betainc(a, 0.5, math.sin(math.pi - theta) ** 2))


def _polar_ppf(m: int, u: float) -> float:
    """Inverse of _polar_cdf in u, clipped to [0, pi]."""
    u = min(max(u, 0.0), 1.0)
    a = 0.5 * (m + 1)
    if u <= 0.5:
        x = float(special.betaincinv(a, 0.5, 2.0 * u))
        return math.asin(min(1.0, math.sqrt(x)))
    x = float(special.betaincinv(a, 0.5, 2.0 * (1.0 - u)))
    return math.pi - math.asin(min(1.0, math.sqrt(x)))


class _Axis:
    """CDF/quantile pair for one angular axis of S^{d-1}(R)."""

    def __init__(self, d: int, axis: int):
        self.m = 0 if axis == d - 2 else d - 2 - axis
        self.hi = _TWO_PI if axis == d - 2 else math.pi

    def cdf(self, theta: float) -> float:
        if self.m == 0:
            return min(max(theta / _TWO_PI, 0.0), 1.0)
        return _polar_cdf(self.m, theta)

    def ppf(self, u: float) -> float:
        if self.m == 0:
            return min(max(u, 0.0), 1.0) * _TWO_PI
        return _polar_ppf(self.m, u)


def _box_diameter_bound(lo: np.ndarray, hi: np.ndarray) -> float:
    """Upper bound on the Euclidean diameter of the box's sphere patch."""
    diam = _chord(hi[-1] - lo[-1])
    for j in range(len(lo) - 2, -1, -1):
        w = hi[j] - lo[j]
        if lo[j] <= 0.5 * math.pi <= hi[j]:
            smax = 1.0
        else:
            smax = max(math.sin(lo[j]), math.sin(hi[j]))
        diam = math.sqrt(min(4.0, _chord(w) ** 2 + (smax * diam) ** 2))
    return min(diam, 2.0)


@dataclass(frozen=True)
class _Node:
    axis: int
    cuts: np.ndarray          # internal boundaries, ascending
    children: tuple           # _Node or int cell id per bucket


class RealSpherePartition:
    """n equal-measure cells of S^{d-1}(R) with a certified diameter bound.

    Each cell is an axis-aligned box in nested spherical coordinates; the
    binary split tree doubles as a point-location structure.
    """

    def __init__(self, d: int, n: int, cells, tree, max_diameter: float, seed: int):
        self.d = d
        self.n = n
        self.cells = cells              # list of (lo, hi) angle arrays
        self.tree = tree                # _Split or cell id
        self.max_diameter = max_diameter
        self.seed = seed
        self._axes = [_Axis(d, j) for j in range(d - 1)]
        self.representatives = np.vstack(
            [self.sample_cell(i, 1, substream=0) for i in range(n)])

    # -- geometry -----------------------------------------------------------

    def cell_measure(self, i: int) -> float:
        lo, hi = self.cells[i]
        meas = 1.0
        for j, ax in enumerate(self._axes):
            meas *= ax.cdf(hi[j]) - ax.cdf(lo[j])
        return meas

    def cell_diameter_bound(self, i: int) -> float:
        lo, hi = self.cells[i]
        return _box_diameter_bound(lo, hi)

    def _angles_to_points(self, ang: np.ndarray) -> np.ndarray:
        n = ang.shape[0]
        x = np.empty((n, self.d))
        s = np.ones(n)
        for j in range(self.d - 2):
            x[:, j] = s * np.cos(ang[:, j])
            s = s * np.sin(ang[:, j])
        x[:, self.d - 2] = s * np.cos(ang[:, -1])
        x[:, self.d - 1] = s * np.sin(ang[:, -1])
        return x

    def _points_to_angles(self, pts: np.ndarray) -> np.ndarray:
        pts = as_real_array(pts)
        nrm = np.linalg.norm(pts, axis=1, keepdims=True)
        pts = pts / nrm
        n = pts.shape[0]
        ang = np.empty((n, self.d - 1))
        tail = np.sqrt(np.cumsum(pts[:, ::-1] ** 2, axis=1))[:, ::-1]
        for j in range(self.d - 2):
            ang[:, j] = np.arctan2(tail[:, j + 1], pts[:, j])
        ang[:, -1] = np.mod(np.arctan2(pts[:, -1], pts[:, -2]), _TWO_PI)
        return ang

    # -- sampling and location ----------------------------------------------

    def sample_cell(self, i: int, count: int, substream: int = 0) -> np.ndarray:
        """Uniform points inside cell i, deterministic per (seed, i, substream)."""
        lo, hi = self.cells[i]
        rng = philox_rng(self.seed, _STREAM_CELL + substream, i)
        u = rng.random((count, self.d - 1))
        ang = np.empty_like(u)
        for j, ax in enumerate(self._axes):
            flo, fhi = ax.cdf(lo[j]), ax.cdf(hi[j])
            for t in range(count):
                ang[t, j] = ax.ppf(flo + u[t, j] * (fhi - flo))
        return self._angles_to_points(ang)

    def locate(self, points) -> np.ndarray:
        """Cell index for each point; total on the whole sphere."""
        ang = self._points_to_angles(as_real_array(points))
        out = np.empty(ang.shape[0], dtype=np.int64)
        stack = [(self.tree, np.arange(ang.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if isinstance(node, int):
                out[idx] = node
                continue
            bucket = np.searchsorted(node.cuts, ang[idx, node.axis], side="right")
            for ci, child in enumerate(node.children):
                stack.append((child, idx[bucket == ci]))
        return out


def _band_counts(m: int, n: int) -> list[int]:
    """Cell counts per latitude band for n cells on a subsphere whose polar
    density is sin^m: 1 per polar cap, collar counts proportional to band
    measure at the ideal band width, rounded cumulatively.

    The band width targets the uniform ideal cell width (surface area of
    S^{m+1} per cell)^(1/(m+1)), which keeps per-axis widths balanced all
    the way down the recursion.
    """
    if n <= 2:
        return [1] * n
    theta_c = _polar_ppf(m, 1.0 / n)
    r = m + 1  # angular dimension count of the current subsphere S^r
    area = 2.0 * math.pi ** (0.5 * (r + 1)) / math.gamma(0.5 * (r + 1))
    w_ideal = (area / n) ** (1.0 / r)
    n_bands = max(1, round((math.pi - 2.0 * theta_c) / w_ideal))
    edges = np.linspace(theta_c, math.pi - theta_c, n_bands + 1)
    measures = np.array([_polar_cdf(m, edges[i + 1]) - _polar_cdf(m, edges[i])
                         for i in range(n_bands)])
    targets = np.cumsum(measures) / measures.sum() * (n - 2)
    counts, prev = [1], 0
    for t in targets:
        c = int(round(t)) - prev
        prev += c
        if c > 0:
            counts.append(c)
    counts.append(1)
    return counts


def partition_real_sphere(d: int, n: int, delta: float, seed: int) -> RealSpherePartition:
    """Partition S^{d-1}(R) into n equal-measure cells of diameter <= delta.

    Raises InfeasiblePartition when the cap-and-collar scheme cannot certify
    the bound with n cells (the reported bound is this scheme's own, not a
    universal optimum).
    """
    if d < 2:
        raise ValueError("real dimension must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 < delta <= 2.0:
        raise ValueError("delta must lie in (0, 2]")
    axes = [_Axis(d, j) for j in range(d - 1)]
    cells = []

    def build(axis, lo, hi, count):
        if count == 1:
            cells.append((lo, hi))
            return len(cells) - 1
        ax = axes[axis]
        if axis == d - 2:
            # circle: equal arcs
            edges = np.linspace(0.0, _TWO_PI, count + 1)
            children = []
            for i in range(count):
                clo = lo.copy(); chi = hi.copy()
                clo[axis], chi[axis] = edges[i], edges[i + 1]
                cells.append((clo, chi))
                children.append(len(cells) - 1)
            return _Node(axis, edges[1:-1], tuple(children))
        counts = _band_counts(ax.m, count)
        cum = np.cumsum(counts)
        cuts = np.array([ax.ppf(c / count) for c in cum[:-1]])
        if np.any(np.diff(cuts) <= 0.0) or (cuts.size and not (0.0 < cuts[0] and cuts[-1] < math.pi)):
            raise InfeasiblePartition(
                f"band quantiles collapsed on axis {axis}; n={n} exceeds float resolution")
        children = []
        lo_b = 0.0
        for i, c in enumerate(counts):
            hi_b = math.pi if i == len(counts) - 1 else float(cuts[i])
            blo = lo.copy(); bhi = hi.copy()
            blo[axis], bhi[axis] = lo_b, hi_b
            children.append(build(axis + 1, blo, bhi, c))
            lo_b = hi_b
        return _Node(axis, cuts, tuple(children))

    lo0 = np.zeros(d - 1)
    hi0 = np.array([ax.hi for ax in axes])
    tree = build(0, lo0, hi0, n)
    max_diam = max(_box_diameter_bound(lo, hi) for lo, hi in cells)
    if max_diam > delta + GEOM_TOL:
        raise InfeasiblePartition(
            f"n={n} cells on S^{d-1}(R) certify diameter {max_diam:.6f} > delta={delta}")
    return RealSpherePartition(d, n, cells, tree, max_diam, seed)


class SpherePartition:
    """Equal-measure partition of S^{k-1}(C) via the interleaving isometry."""

    def __init__(self, k: int, real: RealSpherePartition):
        if real.d != 2 * k:
            raise ValueError("real partition dimension must be 2k")
        self.k = k
        self.real = real
        self.n = real.n
        self.max_diameter = real.max_diameter
        self.representatives = uninterleave(real.representatives)

    def locate(self, points) -> np.ndarray:
        return self.real.locate(interleave(as_complex_array(points)))

    def sample_cell(self, i: int, count: int, substream: int = 0) -> np.ndarray:
        return uninterleave(self.real.sample_cell(i, count, substream))

    def to_json(self) -> str:
        reps = [[[float(z.real), float(z.imag)] for z in row]
                for row in self.representatives]
        return json.dumps({"k": self.k, "n": self.n,
                           "max_diameter": self.max_diameter,
                           "representatives": reps}, sort_keys=True)


def partition_sphere(k: int, n: int, delta: float, seed: int) -> SpherePartition:
    """Partition S^{k-1}(C) into n equal-measure cells of diameter <= delta."""
    if k < 1:
        raise ValueError("complex dimension must be at least 1")
    return SpherePartition(k, partition_real_sphere(2 * k, n, delta, seed))


def monte_carlo_cell_counts(partition, samples: int, seed: int,
                            threads: int = 1) -> np.ndarray:
    """Hit counts per cell for uniform sphere samples (counter-keyed chunks)."""
    real = partition.real if isinstance(partition, SpherePartition) else partition
    sizes = [(_MC_CHUNK if (i + 1) * _MC_CHUNK <= samples else samples - i * _MC_CHUNK)
             for i in range((samples + _MC_CHUNK - 1) // _MC_CHUNK)]

    def one(ci_size):
        ci, size = ci_size
        rng = philox_rng(seed, _STREAM_SAMPLE, ci)
        pts = sample_real_sphere(real.d, size, rng)
        return np.bincount(real.locate(pts), minlength=real.n)

    jobs = list(enumerate(sizes))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, jobs))
    else:
        parts = [one(j) for j in jobs]
    return np.sum(parts, axis=0)
