"""Weighted-graph upper-bound calculus.

A p-weighted graph carries symmetric integer edge weights in {0,...,p} with
zero diagonal.  A vertex enumeration v_1..v_m with vertex weights w(v_j) in
{1,...,p} is a *dominating extension* when for every j >= 2 with a = w(v_j)
the multiset of backwards edge weights {w(v_i, v_j) : i < j} dominates

    { p(a-1)/a + 1  (j-2 copies),  a }

as sorted multisets (exact rational comparison).  The *size* of an
extension is the total vertex weight; G_p(q) is the family of positive
p-weighted graphs admitting a dominating extension of size at least q.

The module provides the dominance primitives, pointwise-maximal extensions,
exact membership search via a subset dynamic program, the simplex quadratic
program g(A) = max u^T A u over the probability simplex (exact rational
support enumeration plus a multiplicative-update numeric fallback), dense
cores, heroic/herculean sets with verifiable certificates, and the
constructive subgraph finder used by the p in {3, 4} density bounds.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import sphere
from .analysis import rho_star
from .sphere import ResourceLimit

MAX_EXACT_GPQ = 10
MAX_EXACT_SIMPLEX = 16
MAX_HERCULEAN = 18


# ---------------------------------------------------------------------------
# p-weighted graphs
# ---------------------------------------------------------------------------

class PWeightedGraph:
    """Symmetric edge weights V^2 -> {0,...,p} with zero diagonal."""

    __slots__ = ("p", "w")

    def __init__(self, p: int, w):
        if p < 1:
            raise ValueError("p must be at least 1")
        rows = tuple(tuple(int(x) for x in row) for row in w)
        m = len(rows)
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ValueError("weight matrix must be square")
            if row[i] != 0:
                raise ValueError("diagonal must be zero")
            for j, x in enumerate(row):
                if not 0 <= x <= p:
                    raise ValueError(f"weight {x} outside 0..{p}")
                if x != rows[j][i]:
                    raise ValueError("weight matrix must be symmetric")
        self.p = p
        self.w = rows

    @classmethod
    def from_upper(cls, p: int, m: int, upper) -> "PWeightedGraph":
        it = iter(upper)
        w = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                x = int(next(it))
                w[i][j] = w[j][i] = x
        return cls(p, w)

    @property
    def m(self) -> int:
        return len(self.w)

    def degree(self, x: int) -> int:
        return sum(self.w[x])

    def delta(self) -> int:
        return min(self.degree(x) for x in range(self.m)) if self.m else 0

    def is_positive(self) -> bool:
        return all(self.w[i][j] > 0
                   for i in range(self.m) for j in range(i + 1, self.m))

    def wtilde(self, x: int, y: int) -> int:
        return self.p - self.w[x][y]

    def wtilde_total(self, K) -> int:
        K = list(K)
        return sum(self.wtilde(K[a], K[b])
                   for a in range(len(K)) for b in range(a + 1, len(K)))

    def gamma(self, K, x: int) -> int:
        return sum(self.wtilde(x, y) for y in K if y != x)

    def subgraph(self, vertices) -> "PWeightedGraph":
        vs = list(vertices)
        return PWeightedGraph(self.p, [[self.w[a][b] for b in vs] for a in vs])

    # text format: first line "p m", then upper-triangle weights row by row
    def to_text(self) -> str:
        lines = [f"{self.p} {self.m}"]
        for i in range(self.m):
            if i < self.m - 1:
                lines.append(" ".join(str(self.w[i][j])
                                      for j in range(i + 1, self.m)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PWeightedGraph":
        tokens = text.split()
        p, m = int(tokens[0]), int(tokens[1])
        return cls.from_upper(p, m, (int(t) for t in tokens[2:]))


# ---------------------------------------------------------------------------
# dominance primitives
# ---------------------------------------------------------------------------

def multiset_dominates(a, b) -> bool:
    """Sorted pointwise comparison of equal-size rational multisets."""
    a = sorted(Fraction(x) for x in a)
    b = sorted(Fraction(x) for x in b)
    if len(a) != len(b):
        raise ValueError("multisets must have equal size")
    return all(x >= y for x, y in zip(a, b))


def dominance_target(p: int, a: int, j: int) -> list:
    """Target multiset for weight a at position j: j-2 copies of
    p(a-1)/a + 1, then a."""
    if j < 2:
        raise ValueError("positions start at 2")
    return [Fraction(p * (a - 1), a) + 1] * (j - 2) + [Fraction(a)]


def is_dominating_extension(g: PWeightedGraph, order, weights) -> bool:
    """Definition check: position 1 is unconstrained, every later position
    passes the dominance test with exact rational targets.

    The order may enumerate any subset of distinct vertices; it is then an
    extension of the induced subgraph.
    """
    order = list(order)
    weights = list(weights)
    if len(set(order)) != len(order) or len(weights) != len(order):
        raise ValueError("order must list distinct vertices, one weight each")
    if any(v not in range(g.m) for v in order):
        raise ValueError("vertex id out of range")
    if any(not 1 <= a <= g.p for a in weights):
        return False
    for j in range(2, len(order) + 1):
        backwards = [g.w[order[i]][order[j - 1]] for i in range(j - 1)]
        if not multiset_dominates(backwards, dominance_target(g.p, weights[j - 1], j)):
            return False
    return True


def max_feasible_weight(p: int, backwards) -> int:
    """Largest a in {1,...,p} whose target multiset the backwards weights
    dominate; 0 when even a = 1 fails (some backwards weight is 0).

    Sorted targets are [a, c, ..., c] with c = p(a-1)/a + 1 >= a, so only the
    two smallest backwards weights matter; the c comparison is done in
    integers as a*b >= (p+1)a - p.
    """
    backwards = sorted(backwards)
    if not backwards:
        return p
    min1 = backwards[0]
    min2 = backwards[1] if len(backwards) > 1 else None
    for a in range(p, 0, -1):
        if min1 < a:
            continue
        if min2 is not None and a * min2 < (p + 1) * a - p:
            continue
        return a
    return 0


def maximal_dominating_extension(g: PWeightedGraph, order) -> tuple:
    """Pointwise-maximal dominating weights for the given enumeration (of
    any distinct-vertex subset).

    Rejects enumerations whose prefix pairs contain a zero weight, since
    those force vertex weight 0, which is outside {1,...,p}.
    """
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("order must list distinct vertices")
    weights = []
    for j in range(1, len(order) + 1):
        backwards = [g.w[order[i]][order[j - 1]] for i in range(j - 1)]
        a = max_feasible_weight(g.p, backwards)
        if a == 0:
            raise ValueError(
                f"zero weight on a prefix pair forces weight 0 at position {j}")
        weights.append(a)
    return tuple(weights)


@dataclass(frozen=True)
class DominatingExtension:
    order: tuple
    weights: tuple
    size: int

    def verify(self, g: PWeightedGraph) -> bool:
        return (self.size == sum(self.weights)
                and is_dominating_extension(g, self.order, self.weights))

    def to_json(self, g: PWeightedGraph | None = None) -> str:
        doc = {"order": list(self.order), "weights": list(self.weights),
               "size": self.size}
        if g is not None:
            doc["checks"] = {"dominating": self.verify(g)}
        return json.dumps(doc, sort_keys=True)


# ---------------------------------------------------------------------------
# extension-size dynamic program over vertex subsets
# ---------------------------------------------------------------------------

def _two_smallest(g: PWeightedGraph, u: int, mask: int):
    min1 = min2 = None
    row = g.w[u]
    while mask:
        v = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        x = row[v]
        if min1 is None or x < min1:
            min1, min2 = x, min1
        elif min2 is None or x < min2:
            min2 = x
    return min1, min2


def _wmax(g: PWeightedGraph, u: int, mask: int) -> int:
    """max_feasible_weight of u against the backwards set given by mask."""
    if mask == 0:
        return g.p
    min1, min2 = _two_smallest(g, u, mask)
    p = g.p
    for a in range(p, 0, -1):
        if min1 < a:
            continue
        if min2 is not None and a * min2 < (p + 1) * a - p:
            continue
        return a
    return 0


def extension_value_table(g: PWeightedGraph):
    """val[mask] = maximal dominating-extension size of the induced subgraph
    on mask (-inf when no extension exists), with a back-pointer table.

    The feasible weight of a vertex depends only on the set of earlier
    vertices, so the maximum over enumerations is a subset DP.
    """
    m = g.m
    size = 1 << m
    NEG = -(10 ** 9)
    val = [NEG] * size
    last = [-1] * size
    val[0] = 0
    for mask in range(1, size):
        rest = mask
        best, arg = NEG, -1
        while rest:
            u = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            prev = mask & ~(1 << u)
            if val[prev] == NEG:
                continue
            wu = _wmax(g, u, prev)
            if wu == 0:
                continue
            cand = val[prev] + wu
            if cand > best:
                best, arg = cand, u
        val[mask] = best
        last[mask] = arg
    return val, last


def _reconstruct(g: PWeightedGraph, last, mask: int):
    """Extension (global vertex ids) achieving val[mask] from the DP table."""
    order = []
    while mask:
        u = last[mask]
        order.append(u)
        mask &= ~(1 << u)
    order.reverse()
    weights = maximal_dominating_extension(g, order)
    return DominatingExtension(tuple(order), weights, sum(weights))


@dataclass(frozen=True)
class MembershipResult:
    extension: DominatingExtension | None
    exhaustive: bool

    @property
    def member(self) -> bool:
        return self.extension is not None


def in_G_p_q(g: PWeightedGraph, q: int, exact_limit: int = MAX_EXACT_GPQ) -> MembershipResult:
    """Search for a dominating extension of size at least q.

    Exact (subset DP over all enumerations) up to exact_limit vertices;
    beyond that a small set of greedy enumerations is tried and a miss is
    reported as non-exhaustive.
    """
    if not g.is_positive():
        return MembershipResult(None, True)
    if g.m <= exact_limit:
        val, last = extension_value_table(g)
        full = (1 << g.m) - 1
        if val[full] >= q:
            ext = _reconstruct(g, last, full)
            assert ext.verify(g)
            return MembershipResult(ext, True)
        return MembershipResult(None, True)
    # heuristic: greedy orders seeded by each max-weight edge
    best = None
    edges = sorted(((g.w[i][j], i, j) for i in range(g.m)
                    for j in range(i + 1, g.m)), reverse=True)
    for _, i, j in edges[:5]:
        order = [i, j]
        remaining = set(range(g.m)) - {i, j}
        while remaining:
            u = max(remaining,
                    key=lambda x: (max_feasible_weight(
                        g.p, [g.w[x][o] for o in order]), -x))
            order.append(u)
            remaining.remove(u)
        weights = maximal_dominating_extension(g, order)
        ext = DominatingExtension(tuple(order), weights, sum(weights))
        if best is None or ext.size > best.size:
            best = ext
    if best is not None and best.size >= q:
        return MembershipResult(best, False)
    return MembershipResult(None, False)


# ---------------------------------------------------------------------------
# the simplex quadratic program g(A)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimplexSolution:
    value: Fraction
    u: tuple
    support: tuple
    exact: bool

    def row_sums(self, A) -> dict:
        """sum_{i != j} a_ij u_i for j in the support (equals value when
        the solution is exact)."""
        out = {}
        for j in self.support:
            out[j] = sum(Fraction(A[i][j]) * self.u[i]
                         for i in range(len(self.u)) if i != j)
        return out


def _as_matrix(A):
    M = [list(int(x) for x in row) for row in A]
    m = len(M)
    for i, row in enumerate(M):
        if len(row) != m:
            raise ValueError("matrix must be square")
        if row[i] != 0:
            raise ValueError("diagonal must be zero")
        for j, x in enumerate(row):
            if x < 0 or x != M[j][i]:
                raise ValueError("matrix must be symmetric nonnegative")
    return M


def _solve_support(M, support):
    """Exact solution of the stationarity system on a support: all row sums
    equal g, coordinates sum to 1.  Returns (g, u_full) or None."""
    k = len(support)
    n = k + 1
    rows = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for r, j in enumerate(support):
        for c, i in enumerate(support):
            if i != j:
                rows[r][c] = Fraction(M[i][j])
        rows[r][k] = Fraction(-1)
    for c in range(k):
        rows[k][c] = Fraction(1)
    rhs[k] = Fraction(1)
    # Gaussian elimination with partial pivoting, exact
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = rows[col][col]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col] / inv
                for c in range(col, n):
                    rows[r][c] -= f * rows[col][c]
                rhs[r] -= f * rhs[col]
    sol = [rhs[r] / rows[r][r] for r in range(n)]
    u_part, gval = sol[:k], sol[k]
    if any(x < 0 for x in u_part):
        return None
    m = len(M)
    u = [Fraction(0)] * m
    for c, i in enumerate(support):
        u[i] = u_part[c]
    return gval, u


def g_of_A(A, exact_limit: int = MAX_EXACT_SIMPLEX) -> SimplexSolution:
    """max u^T A u over the probability simplex, exact.

    Every maximiser satisfies the equal-row-sum stationarity system on its
    support, so enumerating supports (smallest first) and keeping the best
    feasible solution is exhaustive.  Gated at exact_limit; use
    g_of_A_numeric beyond.
    """
    M = _as_matrix(A)
    m = len(M)
    if m == 0:
        return SimplexSolution(Fraction(0), (), (), True)
    if m > exact_limit:
        raise ResourceLimit(f"exact simplex optimisation gated at {exact_limit}")
    best_g = Fraction(0)
    best_u = [Fraction(0)] * m
    best_u[0] = Fraction(1)
    best_support = (0,)
    for size in range(2, m + 1):
        for support in itertools.combinations(range(m), size):
            sol = _solve_support(M, support)
            if sol is None:
                continue
            gval, u = sol
            if gval > best_g:
                best_g, best_u = gval, u
                best_support = tuple(i for i in range(m) if u[i] > 0)
    return SimplexSolution(best_g, tuple(best_u), best_support, True)


def g_of_A_numeric(A, steps: int = 10_000, restarts: int = 50, seed: int = 0):
    """Multiplicative-update (replicator) ascent with restarts; returns
    (value, u).  The quadratic form is nonconcave, so restarts hedge local
    maxima; the exact mode is authoritative."""
    M = np.asarray(A, dtype=float)
    m = M.shape[0]
    if m == 0:
        return 0.0, np.zeros(0)
    best_val, best_u = 0.0, None
    for restart in range(restarts):
        if restart == 0:
            u = np.full(m, 1.0 / m)
        else:
            rng = sphere.philox_rng(seed, 40, restart)
            u = rng.dirichlet(np.ones(m))
        for _ in range(steps):
            Au = M @ u
            val = float(u @ Au)
            if val <= 0:
                break
            nxt = u * Au / val
            if np.max(np.abs(nxt - u)) < 1e-15:
                u = nxt
                break
            u = nxt
        val = float(u @ (M @ u))
        if val > best_val:
            best_val, best_u = val, u.copy()
    if best_u is None:
        best_u = np.zeros(m)
        best_u[0] = 1.0
    return best_val, best_u


def g_of_A_grid(A, step: float = 0.001):
    """Brute-force grid oracle over the simplex; 2x2 matrices only."""
    M = np.asarray(A, dtype=float)
    if M.shape != (2, 2):
        raise ValueError("grid oracle is for 2x2 matrices")
    best = 0.0
    ticks = int(round(1 / step))
    for i in range(ticks + 1):
        u0 = i * step
        u = np.array([u0, 1 - u0])
        best = max(best, float(u @ M @ u))
    return best


def dense_core(A):
    """Minimal index set J with g(A[J]) = g(A); the returned submatrix is
    dense (every one-index deletion strictly decreases g)."""
    M = _as_matrix(A)
    m = len(M)
    if m == 0:
        raise ValueError("empty matrix has no core")
    if m > MAX_EXACT_SIMPLEX:
        raise ResourceLimit(f"dense core gated at {MAX_EXACT_SIMPLEX}")
    full_g = g_of_A(M).value
    for size in range(1, m + 1):
        for J in itertools.combinations(range(m), size):
            sub = [[M[a][b] for b in J] for a in J]
            sol = g_of_A(sub)
            if sol.value >= full_g:
                return J, sol
    raise AssertionError("unreachable: the full set always attains g(A)")


# ---------------------------------------------------------------------------
# heroic and herculean sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HerculeanCertificate:
    K: tuple
    value: int                      # p|K| - wtilde(K)
    heroic_evidence: dict           # frozenset(L) -> DominatingExtension on L
    gamma_inside: dict              # y in K -> gamma_K(y), all <= p-1
    gamma_outside: dict             # x not in K -> gamma_K(x), all >= p
    exchange: dict                  # (x, y) -> (gamma_{K\y}(x), gamma_K(y))

    def verify(self, g: PWeightedGraph) -> bool:
        K = set(self.K)
        if self.value != g.p * len(K) - g.wtilde_total(K):
            return False
        for L, ext in self.heroic_evidence.items():
            if set(ext.order) != set(L):
                return False
            if ext.size < g.p * len(L) - g.wtilde_total(L):
                return False
            if not ext.verify(g):
                return False
        for y in self.K:
            if g.gamma(K, y) > g.p - 1:
                return False
        for x in range(g.m):
            if x not in K and g.gamma(K, x) < g.p:
                return False
        for (x, y), (gxy, gy) in self.exchange.items():
            if g.gamma(K - {y}, x) != gxy or g.gamma(K, y) != gy or gxy < gy:
                return False
        return True


def find_herculean(g: PWeightedGraph) -> HerculeanCertificate:
    """Herculean set: heroic (every nonempty subset L has an extension of
    size >= p|L| - wtilde(L)), maximising p|K| - wtilde(K), of minimal size
    among maximisers."""
    m = g.m
    if m < 1:
        raise ValueError("graph must have at least one vertex")
    if m > MAX_HERCULEAN:
        raise ResourceLimit(f"herculean search gated at {MAX_HERCULEAN}")
    val, last = extension_value_table(g)
    size = 1 << m
    p = g.p

    wtl = [0] * size  # wtilde over pairs inside mask
    for mask in range(1, size):
        u = (mask & -mask).bit_length() - 1
        prev = mask & ~(1 << u)
        extra = 0
        rest = prev
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            extra += p - g.w[u][v]
        wtl[mask] = wtl[prev] + extra

    heroic = [False] * size
    best = None  # (score, -popcount suppressed: use tuple ordering manually)
    for mask in range(1, size):
        pc = mask.bit_count()
        ok = val[mask] >= p * pc - wtl[mask]
        if ok:
            rest = mask
            while rest and ok:
                u = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                sub = mask & ~(1 << u)
                if sub and not heroic[sub]:
                    ok = False
        heroic[mask] = ok
        if ok:
            score = p * pc - wtl[mask]
            key = (score, -pc, -mask)
            if best is None or key > best[0]:
                best = (key, mask)
    k_mask = best[1]
    K = tuple(i for i in range(m) if (k_mask >> i) & 1)
    Kset = set(K)

    evidence = {}
    sub = k_mask
    while True:
        if sub:
            L = tuple(i for i in range(m) if (sub >> i) & 1)
            evidence[frozenset(L)] = _reconstruct(g, last, sub)
        if sub == 0:
            break
        sub = (sub - 1) & k_mask

    gamma_inside = {y: g.gamma(Kset, y) for y in K}
    gamma_outside = {x: g.gamma(Kset, x) for x in range(m) if x not in Kset}
    exchange = {}
    for x in range(m):
        if x in Kset:
            continue
        for y in K:
            exchange[(x, y)] = (g.gamma(Kset - {y}, x), g.gamma(Kset, y))
    cert = HerculeanCertificate(K, p * len(K) - wtl[k_mask], evidence,
                                gamma_inside, gamma_outside, exchange)
    return cert


# ---------------------------------------------------------------------------
# the constructive subgraph finder for p in {3, 4}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgraphSearchResult:
    found: bool
    vertices: tuple | None
    extension: DominatingExtension | None
    used_fallback: bool
    herculean: HerculeanCertificate
    failure: dict | None


def find_G_pq_subgraph(g: PWeightedGraph, t: int) -> SubgraphSearchResult:
    """Find J with an extension of size >= p t + 2 (p = g.p in {3, 4}).

    Follows the constructive recipe: take a herculean K with its maximal
    extension, then search the best augmentation appending outside vertices;
    on a miss, falls back to the exhaustive subset optimum before reporting
    failure with the violated minimum-degree condition.
    """
    p = g.p
    if p not in (3, 4):
        raise ValueError("the constructive finder is for p in {3, 4}")
    if t < 1:
        raise ValueError("t must be at least 1")
    if not g.is_positive():
        raise ValueError("graph must be positive")
    if g.m > MAX_HERCULEAN:
        raise ResourceLimit(f"search gated at {MAX_HERCULEAN}")
    target = p * t + 2
    cert = find_herculean(g)
    K = cert.K
    k_mask = sum(1 << v for v in K)
    others = [v for v in range(g.m) if v not in set(K)]

    # augmentation DP over subsets of the outside vertices, appended after K
    base_val = cert.heroic_evidence[frozenset(K)].size
    n_out = len(others)
    add_val = [0] * (1 << n_out)
    add_last = [-1] * (1 << n_out)
    best_add, best_mask = 0, 0
    for mask in range(1, 1 << n_out):
        rest = mask
        best = -1
        arg = -1
        while rest:
            ui = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            prev = mask & ~(1 << ui)
            prefix = k_mask
            pm = prev
            while pm:
                vi = (pm & -pm).bit_length() - 1
                pm &= pm - 1
                prefix |= 1 << others[vi]
            wu = _wmax(g, others[ui], prefix)
            cand = add_val[prev] + wu
            if cand > best:
                best, arg = cand, ui
        add_val[mask] = best
        add_last[mask] = arg
        if best > best_add:
            best_add, best_mask = best, mask

    def build_extension(mask):
        base_ext = cert.heroic_evidence[frozenset(K)]
        order = list(base_ext.order)
        tail = []
        while mask:
            ui = add_last[mask]
            tail.append(others[ui])
            mask &= ~(1 << ui)
        order.extend(reversed(tail))
        weights = maximal_dominating_extension(g, order)
        return order, DominatingExtension(tuple(order), weights, sum(weights))

    if base_val + best_add >= target:
        order, ext = build_extension(best_mask)
        assert ext.verify(g) and ext.size >= target
        return SubgraphSearchResult(True, tuple(sorted(order)), ext, False,
                                    cert, None)

    # exhaustive fallback: the recipe is a proof device, not the only route
    val, last = extension_value_table(g)
    best_mask_all = max(range(1, 1 << g.m), key=lambda s: val[s])
    if val[best_mask_all] >= target:
        ext = _reconstruct(g, last, best_mask_all)
        assert ext.verify(g) and ext.size >= target
        return SubgraphSearchResult(True, tuple(sorted(ext.order)), ext, True,
                                    cert, None)

    threshold = Fraction(p) * rho_star(p, p * t + 2)[0] * g.m
    failure = {
        "target": target,
        "best_size": max(base_val + best_add, val[best_mask_all]),
        "delta": g.delta(),
        "degree_threshold": threshold,
        "hypothesis_met": Fraction(g.delta()) > threshold,
    }
    return SubgraphSearchResult(False, None, None, False, cert, failure)


# ---------------------------------------------------------------------------
# the parameter-window infeasibility check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowReport:
    p: int
    s: int
    t: int
    m_range: tuple
    slacks: dict      # m -> (s+t-m)(m-1)/m - s(t-1)/t, must never be positive
    passed: bool


def verify_theorem15_window(p: int, s: int, t: int) -> WindowReport:
    """Confirm by exact rational arithmetic that no integer m >= 2 satisfies
    s(t-1)/t < (s+t-m)(m-1)/m inside the window t(t-2) <= s <= t^2,
    s + t - 1 <= p.

    For m > s + t the right side is nonpositive while the left side is
    nonnegative, so checking m in [2, s+t] plus a small margin is complete.
    """
    if t < 1 or s < 1:
        raise ValueError("s and t must be positive")
    if not t * (t - 2) <= s <= t * t:
        raise ValueError(f"s={s} outside window [{t*(t-2)}, {t*t}]")
    if s + t - 1 > p:
        raise ValueError(f"p={p} violates s + t - 1 <= p")
    lhs = Fraction(s * (t - 1), t)
    m_hi = s + t + 2
    slacks = {}
    passed = True
    for m in range(2, m_hi + 1):
        rhs = Fraction((s + t - m) * (m - 1), m)
        slacks[m] = rhs - lhs
        if rhs > lhs:
            passed = False
    return WindowReport(p, s, t, (2, m_hi), slacks, passed)
