import itertools
import math
from fractions import Fraction

import pytest

from rtlab import sphere as S
from rtlab.analysis import (
    LabeledGraph,
    complete_join,
    density_report,
    max_clique,
    p_independence,
    read_edge_list,
    rho_star,
    theorem13_density,
    write_edge_list,
)
from rtlab.sphere import ResourceLimit


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def brute_max_clique(g: LabeledGraph) -> int:
    """Enumerate every clique by DFS over least-vertex extensions."""
    best = 0

    def grow(clique_size, cand):
        nonlocal best
        best = max(best, clique_size)
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            grow(clique_size + 1, g.adj[v] & cand)

    grow(0, (1 << g.n) - 1)
    return best


def brute_alpha_p(g: LabeledGraph, p: int) -> int:
    """Exhaustive over all vertex subsets."""
    def kp_free(sub):
        for combo in itertools.combinations(sub, p):
            if all(g.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
                return False
        return True

    best = 0
    verts = list(range(g.n))
    for r in range(g.n, -1, -1):
        if r <= best:
            break
        for sub in itertools.combinations(verts, r):
            if kp_free(sub):
                best = r
                break
    return best


def random_graph(n, density, seed):
    rng = S.philox_rng(seed, 77)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < density]
    return LabeledGraph.from_edges(n, edges)


def complete_graph(n):
    return LabeledGraph.from_edges(n, itertools.combinations(range(n), 2))


# ---------------------------------------------------------------------------
# max clique
# ---------------------------------------------------------------------------

def test_max_clique_k5():
    cert = max_clique(complete_graph(5))
    assert cert.size == 5 and cert.exhaustive
    assert cert.witness == (0, 1, 2, 3, 4)


def test_max_clique_empty_graph():
    g = LabeledGraph.from_edges(10, [])
    cert = max_clique(g)
    assert cert.size == 1 and cert.exhaustive


def test_max_clique_matches_bruteforce_g50():
    g = random_graph(50, 0.5, seed=123)
    cert = max_clique(g)
    assert cert.exhaustive
    assert cert.size == brute_max_clique(g)
    assert all(g.has_edge(a, b) for a, b in itertools.combinations(cert.witness, 2))


def test_max_clique_matches_bruteforce_small():
    # 200 random instances on up to 20 vertices
    for seed in range(200):
        g = random_graph(12 + seed % 9, 0.2 + (seed % 7) / 10, seed)
        assert max_clique(g).size == brute_max_clique(g), seed


def test_max_clique_cutoff_semantics():
    g = complete_graph(6)
    over = max_clique(g, cutoff=3)
    assert over.size >= 4 and not over.exhaustive and over.upper_bound is None
    under = max_clique(g, cutoff=10)
    assert under.upper_bound == 10 and not under.exhaustive
    assert under.size <= 10


def test_max_clique_resource_gate():
    g = LabeledGraph.from_edges(5001, [])
    with pytest.raises(ResourceLimit):
        max_clique(g)
    cert = max_clique(g, cutoff=4)
    assert cert.upper_bound == 4


# ---------------------------------------------------------------------------
# p-independence
# ---------------------------------------------------------------------------

def test_alpha_2_of_complete_graph():
    lb, ub, exact = p_independence(complete_graph(7), 2)
    assert (lb, ub, exact) == (1, 1, True)


def test_alpha_3_of_complete_graph():
    lb, ub, exact = p_independence(complete_graph(7), 3)
    assert (lb, ub, exact) == (2, 2, True)


def test_alpha_2_of_c5():
    c5 = LabeledGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert brute_alpha_p(c5, 2) == 2
    assert p_independence(c5, 2) == (2, 2, True)


@pytest.mark.parametrize("seed,p", [(1, 2), (2, 3), (3, 3), (4, 4), (5, 2)])
def test_p_independence_exact_matches_bruteforce(seed, p):
    g = random_graph(13, 0.5, seed)
    expected = brute_alpha_p(g, p)
    assert p_independence(g, p) == (expected, expected, True)


def test_p_independence_heuristic_brackets_exact():
    g = random_graph(18, 0.4, seed=9)
    exact = p_independence(g, 3)[0]
    lb, ub, flag = p_independence(g, 3, exact_limit=5)
    assert not flag
    assert lb <= exact <= ub


def test_p_independence_validation():
    with pytest.raises(ValueError):
        p_independence(complete_graph(3), 1)


# ---------------------------------------------------------------------------
# density report and complete join
# ---------------------------------------------------------------------------

def test_density_report_k33():
    labels = ["A"] * 3 + ["B"] * 3
    edges = [(u, v) for u in range(3) for v in range(3, 6)]
    g = LabeledGraph.from_edges(6, edges, labels)
    rep = density_report(g)
    assert rep.pair_densities[("A", "B")] == 1.0
    assert rep.inner_edges == {"A": 0, "B": 0}
    assert rep.edge_count == 9
    assert math.isclose(rep.global_density, 9 / 15)


def test_density_report_empty():
    g = LabeledGraph.from_edges(4, [], labels=["A", "A", "B", "B"])
    rep = density_report(g)
    assert rep.global_density == 0.0
    assert rep.pair_densities[("A", "B")] == 0.0
    assert rep.edge_count == 0


def test_density_report_consistency():
    g = random_graph(20, 0.3, seed=5)
    g.labels = ["A"] * 10 + ["B"] * 10
    rep = density_report(g)
    cross = round(rep.pair_densities[("A", "B")] * 100)
    assert rep.inner_edges["A"] + rep.inner_edges["B"] + cross == rep.edge_count


def test_complete_join_two_vertices():
    v = LabeledGraph.from_edges(1, [])
    j = complete_join([v, v])
    assert j.n == 2 and j.has_edge(0, 1)


def test_complete_join_k2_k3():
    j = complete_join([complete_graph(2), complete_graph(3)])
    assert max_clique(j).size == 5
    assert j.edge_count() == 10


def test_join_of_free_graphs_is_free():
    # a K_4-free graph joined with a K_3-free graph is K_6-free
    g1 = random_graph(8, 0.45, seed=31)
    while brute_max_clique(g1) > 3:
        g1 = random_graph(8, 0.3, seed=31 + g1.edge_count())
    g2 = LabeledGraph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    j = complete_join([g1, g2])
    cert = max_clique(j)
    assert cert.exhaustive and cert.size <= 5
    assert cert.size == brute_max_clique(g1) + brute_max_clique(g2)


def test_join_additivity_random():
    for seed in range(4):
        parts = [random_graph(6, 0.5, seed * 3 + i) for i in range(3)]
        joined = complete_join(parts)
        assert max_clique(joined).size == sum(max_clique(p).size for p in parts)


# ---------------------------------------------------------------------------
# rational density formulas
# ---------------------------------------------------------------------------

def test_rho_star_3_5():
    value, (t, r) = rho_star(3, 5)
    assert value == Fraction(1, 6)
    assert (t, r) == (1, 0)


@pytest.mark.parametrize("t", range(1, 11))
def test_rho_star_p3_family(t):
    value, _ = rho_star(3, 3 * t + 2)
    assert value == Fraction(5 * t - 4, 5 * t + 1)


@pytest.mark.parametrize("t", range(1, 11))
def test_rho_star_p4_family(t):
    value, _ = rho_star(4, 4 * t + 2)
    assert value == Fraction(7 * t - 6, 7 * t + 1)


def test_rho_star_low_clique_family():
    for p in range(2, 11):
        for ell in range(1, p // 2 + 1):
            value, _ = rho_star(p, p + ell + 1)
            assert value == Fraction(ell, 2 * p)


def test_rho_star_rejects_small_q():
    with pytest.raises(ValueError):
        rho_star(3, 4)


def test_rho_star_monotone_in_q():
    for p in range(2, 11):
        prev = Fraction(-1)
        for q in range(p + 2, 61):
            value, _ = rho_star(p, q)
            assert value >= prev
            prev = value


def test_theorem13_separation_example():
    rep = theorem13_density(9, 3, 4)
    assert rep.p_star == 512 and rep.q_star == 523
    assert rep.lower_bound == Fraction(6, 512)
    assert rep.rho_star_value == Fraction(5, 512)
    assert rep.exceeds_conjecture and rep.strict_expected
    assert rep.equality_window  # q (q-2) = 8 <= 2^p = 8 <= 16 = q^2


def test_theorem13_q2_not_strict():
    rep = theorem13_density(3, 1, 2)
    assert rep.lower_bound == Fraction(1, 2 ** (3 - 1)) * Fraction(1, 2)
    assert not rep.strict_expected
    assert not rep.exceeds_conjecture  # bound meets rho_star exactly at q = 2
    assert rep.lower_bound == rep.rho_star_value


def test_theorem13_validation():
    with pytest.raises(ValueError):
        theorem13_density(9, 3, 5)  # odd q
    with pytest.raises(ValueError):
        theorem13_density(2, 1, 4)  # ell < p (q-1)


# ---------------------------------------------------------------------------
# interchange format
# ---------------------------------------------------------------------------

def test_edge_list_roundtrip(tmp_path):
    g = random_graph(15, 0.4, seed=2)
    path = tmp_path / "g.edges"
    write_edge_list(path, g, comments=["format test"])
    h = read_edge_list(path)
    assert h.n == g.n
    assert h.adj == g.adj
