import itertools

import numpy as np
import pytest

from rtlab import sphere as S
from rtlab.analysis import max_clique
from rtlab.mbe import (
    BinaryStringFamily,
    MbeParams,
    blowup_sparsify,
    build_base_hypergraph,
    build_mbe,
    build_q_family,
    find_dense_subconfig,
    lengthy_coordinates,
    proper_edge_coloring,
    related_coordinates,
    shadow_graph,
)


def mbe_params(ell=2, p=1, q=2, k=6, m=4, epsilon=0.05, t=1, seed=1, **kw):
    return MbeParams(ell=ell, p=p, q=q, k=k, m=m, epsilon=epsilon, t=t,
                     seed=seed, **kw)


def antipodal_points(k, half, seed):
    rng = S.philox_rng(seed, 55)
    pts = S.sample_real_sphere(k + 1, half, rng)
    return np.vstack([pts, -pts])


# ---------------------------------------------------------------------------
# Q_h family
# ---------------------------------------------------------------------------

def test_q_family_ell1():
    fam = build_q_family(1)
    assert fam.r == 2
    assert fam.q_edges(1) == {(0, 1)}


def test_q_family_ell2():
    fam = build_q_family(2)
    assert fam.r == 4
    union = fam.q_edges(1) | fam.q_edges(2)
    assert union == set(itertools.combinations(range(4), 2))  # Q_0 = K_4
    assert len(fam.q_edges(1)) == 4  # K_{2,2}
    assert fam.union_alpha([1, 2]) == 1


def test_q_family_alpha_single_coordinate():
    fam = build_q_family(3)
    assert fam.union_alpha([1]) == 4  # 2^{3-1}


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_q_family_alpha_formula(ell):
    fam = build_q_family(ell)
    for size in range(ell + 1):
        for coords in itertools.combinations(range(1, ell + 1), size):
            assert fam.union_alpha(coords) == 2 ** (ell - size)


def test_q_family_gate():
    with pytest.raises(ValueError):
        build_q_family(7)
    with pytest.raises(ValueError):
        build_q_family(0)


# ---------------------------------------------------------------------------
# edge colouring
# ---------------------------------------------------------------------------

def test_coloring_q2():
    col = proper_edge_coloring(2)
    assert col == {frozenset((0, 1)): 1}


@pytest.mark.parametrize("q", [2, 4, 6, 8, 10, 12])
def test_coloring_is_one_factorization(q):
    col = proper_edge_coloring(q)
    assert len(col) == q * (q - 1) // 2
    by_color = {}
    for pair, c in col.items():
        assert 1 <= c <= q - 1
        by_color.setdefault(c, []).append(pair)
    for c, pairs in by_color.items():
        used = [v for pair in pairs for v in pair]
        assert len(pairs) == q // 2 and len(set(used)) == q  # perfect matching
    for v in range(q):
        seen = [c for pair, c in col.items() if v in pair]
        assert len(set(seen)) == q - 1  # properness at every vertex


def test_coloring_rejects_odd():
    with pytest.raises(ValueError):
        proper_edge_coloring(5)


# ---------------------------------------------------------------------------
# related coordinates
# ---------------------------------------------------------------------------

def test_related_count_and_uniqueness():
    pr = MbeParams(ell=7, p=2, q=4, k=4, m=4, epsilon=0.05, seed=0)
    col = proper_edge_coloring(4)
    for i, ip in itertools.combinations(range(4), 2):
        rel = related_coordinates(i, ip, pr, col)
        assert len(rel) == pr.ell - pr.p
        # each h has at most one partner
        for h in range(1, pr.ell + 1):
            assert sum(1 for a, _ in rel if a == h) <= 1


def test_related_second_clause():
    # ell = p (q-1) + 2: the last two coordinates pair with themselves
    pr = MbeParams(ell=5, p=1, q=4, k=4, m=4, epsilon=0.05, seed=0)
    col = proper_edge_coloring(4)
    for i, ip in itertools.combinations(range(4), 2):
        rel = related_coordinates(i, ip, pr, col)
        assert (4, 4) in rel and (5, 5) in rel


def test_related_rejects_same_class():
    pr = mbe_params()
    with pytest.raises(ValueError):
        related_coordinates(1, 1, pr, proper_edge_coloring(pr.q))


# ---------------------------------------------------------------------------
# base hypergraph
# ---------------------------------------------------------------------------

def test_base_hyperedge_antipodal_pair():
    pr = mbe_params(ell=1, p=1, q=2, k=3, m=2)
    rng = S.philox_rng(3, 91)
    e1 = np.array([1.0, 0, 0, 0])
    noise = pr.mu / 10 * rng.standard_normal((2, 4))
    P = np.vstack([e1 + noise[0], -e1 + noise[1]])
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    hg = build_base_hypergraph(pr, points=P)
    assert len(hg.hyperedges) == 1
    assert hg.hyperedge_valid(hg.hyperedges[0])


def test_base_hyperedge_orthogonal_pair_absent():
    pr = mbe_params(ell=1, p=1, q=2, k=3, m=2)
    P = np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 0]])
    hg = build_base_hypergraph(pr, points=P)
    assert hg.hyperedges == []


def brute_force_base_edges(P, ell, mu):
    """All r-subsets of P^ell admitting a labelling that satisfies every
    Q_h antipodality constraint."""
    fam = BinaryStringFamily(ell)
    m = P.shape[0]
    vertices = list(itertools.product(range(m), repeat=ell))
    vid = {v: i for i, v in enumerate(vertices)}
    q_edges = {h: fam.q_edges(h) for h in range(1, ell + 1)}

    def ok(labelled):
        for h in range(1, ell + 1):
            for a, b in q_edges[h]:
                xa = P[labelled[a][h - 1]]
                xb = P[labelled[b][h - 1]]
                if np.linalg.norm(xa - xb) < 2 - mu:
                    return False
        return True

    found = set()
    for subset in itertools.combinations(vertices, fam.r):
        for perm in itertools.permutations(subset):
            if ok(perm):
                found.add(frozenset(vid[v] for v in subset))
                break
    return found


def test_base_hypergraph_matches_bruteforce():
    pr = mbe_params(ell=2, p=1, q=2, k=5, m=4)
    P = antipodal_points(pr.k, 2, seed=7)
    hg = build_base_hypergraph(pr, points=P)
    built = {frozenset(e) for e in hg.hyperedges}
    expected = brute_force_base_edges(P, pr.ell, pr.mu)
    assert built == expected
    assert len(built) == 4  # one per choice of unordered pair per coordinate
    for edge in hg.hyperedges:
        assert hg.hyperedge_valid(edge)


def test_base_hyperedge_two_exact_antipodal_pairs():
    pr = mbe_params(ell=2, p=1, q=2, k=3, m=4)
    a = np.array([1.0, 0, 0, 0])
    b = np.array([0, 1.0, 0, 0])
    P = np.vstack([a, b, -a, -b])
    hg = build_base_hypergraph(pr, points=P)
    # vertices combining the pair {a,-a} in coordinate 1 with {b,-b} in 2
    target = frozenset(hg.vertex_index[v] for v in
                       [(0, 1), (0, 3), (2, 1), (2, 3)])
    assert target in {frozenset(e) for e in hg.hyperedges}


# ---------------------------------------------------------------------------
# blow-up and sparsification
# ---------------------------------------------------------------------------

def test_blowup_identity_at_t1():
    pr = mbe_params(ell=1, p=1, q=2, k=3, m=4)
    hg = build_base_hypergraph(pr, points=antipodal_points(3, 2, seed=5))
    blown, report = blowup_sparsify(hg, 1, pr.zeta, seed=1)
    assert blown is hg
    assert report.deleted == 0 and report.retained == len(hg.hyperedges)


def test_blowup_copies_and_geometry():
    pr = mbe_params(ell=1, p=1, q=2, k=3, m=4, t=4)
    hg = build_base_hypergraph(pr, points=antipodal_points(3, 2, seed=6))
    blown, report = blowup_sparsify(hg, 4, pr.zeta, seed=2, retention=1.0)
    assert len(blown.vertices) == len(hg.vertices) * 4
    assert report.candidate_copies == len(hg.hyperedges) * 4 ** hg.r
    # blown-up hyperedges keep the antipodality constraints (mu slack)
    for edge in blown.hyperedges[:20]:
        assert blown.hyperedge_valid(edge)


def test_blowup_bullet2_sparsity():
    # exhaustive scan after construction: no small dense subconfiguration
    pr = mbe_params(ell=2, p=1, q=2, k=4, m=2, t=4)
    hg = build_base_hypergraph(pr, points=antipodal_points(4, 1, seed=8))
    assert len(hg.hyperedges) == 1
    blown, report = blowup_sparsify(hg, 4, pr.zeta, seed=3, retention=0.5)
    assert report.deleted > 0  # copies of one base edge overlap heavily
    assert find_dense_subconfig(blown.hyperedges, pr.zeta, hg.r,
                                hg.r ** 3) is None
    # independent pairwise check: sharing >= 2 vertices violates the bound
    sets = [frozenset(e) for e in blown.hyperedges]
    for e1, e2 in itertools.combinations(sets, 2):
        assert len(e1 & e2) <= 1


def test_blowup_covering_property():
    # transversal copies of base hyperedges survive with high frequency
    pr = mbe_params(ell=1, p=1, q=2, k=3, m=8, t=4)
    hg = build_base_hypergraph(pr, points=antipodal_points(3, 4, seed=9))
    blown, _ = blowup_sparsify(hg, 4, pr.zeta, seed=4, retention=0.5)
    kept_base = set()
    for edge in blown.hyperedges:
        base = frozenset(int(blown.base_of[blown.vertices[v][0]])
                         for v in edge)
        kept_base.add(base)
    rng = S.philox_rng(10, 1)
    hits = 0
    for _ in range(20):
        base_edge = hg.hyperedges[int(rng.integers(len(hg.hyperedges)))]
        base_pts = frozenset(hg.vertices[v][0] for v in base_edge)
        hits += base_pts in kept_base
    assert hits / 20 >= 0.95


def test_blowup_rejects_bad_t():
    pr = mbe_params(ell=2, p=1, q=2, k=4, m=2)
    hg = build_base_hypergraph(pr, points=antipodal_points(4, 1, seed=8))
    with pytest.raises(ValueError):
        blowup_sparsify(hg, 3, pr.zeta, seed=0)


# ---------------------------------------------------------------------------
# shadow graph
# ---------------------------------------------------------------------------

def test_shadow_single_hyperedge_is_complete():
    pr = mbe_params(ell=2, p=1, q=2, k=4, m=2)
    hg = build_base_hypergraph(pr, points=antipodal_points(4, 1, seed=11))
    bg = shadow_graph(hg)
    cert = max_clique(bg.to_labeled_graph())
    assert cert.size == hg.r  # K_r


def test_shadow_empty():
    pr = mbe_params(ell=1, p=1, q=2, k=3, m=2)
    P = np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 0]])
    bg = shadow_graph(build_base_hypergraph(pr, points=P))
    assert not bg.adjacency.any()


def test_shadow_clique_bound_and_hyperedge_containment():
    pr = mbe_params(ell=2, p=1, q=2, k=6, m=8)
    bg = shadow_graph(build_base_hypergraph(pr, points=antipodal_points(6, 4, seed=12)))
    g = bg.to_labeled_graph()
    cert = max_clique(g)
    assert cert.exhaustive and cert.size <= bg.hypergraph.r
    # every maximal clique lies inside a single hyperedge
    import networkx as nx
    G = nx.Graph(list(g.edges()))
    edge_sets = [frozenset(e) for e in bg.hypergraph.hyperedges]
    for clique in nx.find_cliques(G):
        assert any(set(clique) <= es for es in edge_sets)


# ---------------------------------------------------------------------------
# lengthy coordinates
# ---------------------------------------------------------------------------

def test_lengthy_trivial_cases():
    pr = mbe_params(ell=2, p=1, q=2, k=3, m=4)
    a = np.array([1.0, 0, 0, 0])
    b = np.array([0, 1.0, 0, 0])
    P = np.vstack([a, b, -a, -b])
    bg = shadow_graph(build_base_hypergraph(pr, points=P))
    assert lengthy_coordinates(bg, [], pr.mu) == set()
    assert lengthy_coordinates(bg, [0], pr.mu) == set()
    # two vertices antipodal in coordinate 1 only: (a, b) vs (-a, b)
    v1 = bg.hypergraph.vertex_index[(0, 1)]
    v2 = bg.hypergraph.vertex_index[(2, 1)]
    assert lengthy_coordinates(bg, [v1, v2], pr.mu) == {1}


# ---------------------------------------------------------------------------
# the final graph
# ---------------------------------------------------------------------------

def test_mbe_params_validation():
    with pytest.raises(ValueError):
        mbe_params(q=3)
    with pytest.raises(ValueError):
        mbe_params(ell=2, p=1, q=4)   # ell < p (q-1)
    with pytest.raises(ValueError):
        mbe_params(t=3)               # not a perfect square for ell = 2
    with pytest.raises(ValueError):
        mbe_params(m=5)               # antipodal mode needs even m


def test_mbe_complete_cross_when_no_related():
    # ell = p = 1, q = 2: related set is empty, cross pair complete
    pr = mbe_params(ell=1, p=1, q=2, k=6, m=8)
    g = build_mbe(pr)
    N = g.class_size
    assert g.pair_density(0, 1) == 1.0
    cert = max_clique(g.to_labeled_graph())
    assert cert.exhaustive
    assert cert.size <= g.omega_bound() == 4
    assert cert.size == 4  # inner matching edge in each class joins completely


def test_mbe_cross_density():
    pr = mbe_params(ell=2, p=1, q=2, k=12, m=8, seed=3)
    g = build_mbe(pr)
    assert abs(g.pair_density(0, 1) - 0.5) <= 0.2


def test_mbe_clique_bound_314():
    pr = MbeParams(ell=3, p=1, q=4, k=8, m=4, epsilon=0.05, seed=5)
    g = build_mbe(pr)
    assert g.n == 4 ** 3 * 4 // 4 * 4  # m^ell * t * q
    bound = g.omega_bound()
    assert bound == 12
    cert = max_clique(g.to_labeled_graph(), cutoff=bound)
    assert cert.upper_bound == bound


def test_mbe_clique_budget_lemmas():
    # for every maximal clique A: |A n V_i| <= 2^{|L_i|} and sum |L_i| <= ell + p
    import networkx as nx
    pr = mbe_params(ell=2, p=1, q=2, k=6, m=4, seed=7)
    g = build_mbe(pr)
    lg = g.to_labeled_graph()
    G = nx.Graph(list(lg.edges()))
    G.add_nodes_from(range(lg.n))
    N = g.class_size
    for clique in nx.find_cliques(G):
        if len(clique) < 2:
            continue
        total_lengthy = 0
        for i in range(pr.q):
            local = [v - i * N for v in clique if i * N <= v < (i + 1) * N]
            lengthy = lengthy_coordinates(g.borsuk, local, pr.mu)
            total_lengthy += len(lengthy)
            assert len(local) <= 2 ** len(lengthy)
        if total_lengthy > pr.ell + pr.p:
            # a budget violation would mean four sphere points forming the
            # impossible rhombus configuration; localize before failing
            from rtlab.sphere import rhombus_search
            pts = g.borsuk.hypergraph.points
            witness = rhombus_search(pts, pts, pr.mu)
            raise AssertionError(
                f"lengthy budget violated; rhombus witness: {witness}")


def test_mbe_determinism():
    pr = mbe_params(ell=2, p=1, q=2, k=6, m=4, seed=9)
    g1 = build_mbe(pr)
    g2 = build_mbe(pr)
    assert np.array_equal(g1.adjacency, g2.adjacency)


def test_mbe_exports(tmp_path):
    pr = mbe_params(ell=2, p=1, q=2, k=6, m=4, seed=9)
    g = build_mbe(pr)
    g.write_edge_list(tmp_path / "g.edges")
    g.borsuk.hypergraph.write_hyperedges(tmp_path / "g.hyper")
    from rtlab.analysis import read_edge_list
    back = read_edge_list(tmp_path / "g.edges")
    assert back.n == g.n
    lines = [l for l in (tmp_path / "g.hyper").read_text().splitlines()
             if not l.startswith("#")]
    assert all(len(l.split()) == g.borsuk.hypergraph.r for l in lines)
    header = g.header_dict()
    assert header["params"]["r"] == 4
