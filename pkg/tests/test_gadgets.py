import pytest
from zflow.cutcensus import degree_classes, edge_connectivity, hypothesis_check, small_sides
from zflow.errors import HypothesisError, InvalidArgument
from zflow.flowsolve import Orientation, all_boundaries, find_beta_orientation, is_beta_orientation, tau
from zflow.gadgets import (
    ANCHOR,
    LE5,
    PASSTHROUGH,
    SIX_SEVEN_P,
    SIX_SEVEN_Q,
    Z3_CASE,
    anchor_augment_3flow,
    extend_orientation,
    glue_k7,
    ltwz_check,
    recover_orientation,
    z0_augment_3flow,
    z0_augment_z3,
)
from zflow.harness import GenSpec, generate
from zflow.multigraph import Multigraph, complete_graph, cycle_graph, parallel_edges

# K6 plus a parallel edge on 01: vertices 2..5 keep degree 5
K6_PLUS = complete_graph(6).add_edges([(0, 1)])
# three degree-3 vertices (triangle 012 joined to 3), vertex 3 tied to 4 by four edges
THREE_P = Multigraph(5, ((0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)) + ((3, 4),) * 4)
# one degree-3 vertex (0) and one degree-5 vertex (1), the rest degree 4;
# 3-edge-connected, no nontrivial 3-cut, and every U with |U| >= 2 and
# d(U) <= 5 meets {0, 1}
GAP_GRAPH = Multigraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 2), (1, 3), (1, 3), (2, 3)))


def test_glue_single_vertex_is_k7():
    g, copies = glue_k7(Multigraph(1))
    assert (g.n, g.m) == (7, 21)
    assert copies == ((0, 1, 2, 3, 4, 5, 6),)


def test_glue_digon_bundle():
    g, _ = glue_k7(parallel_edges(5))
    assert (g.n, g.m) == (14, 47)
    assert min(g.degrees()) == 6
    assert edge_connectivity(g) == 5


def test_glue_k4():
    g, copies = glue_k7(complete_graph(4))
    assert (g.n, g.m) == (28, 6 + 84)
    assert set(g.degrees()) == {6, 9}
    assert all(g.degree(v) == 9 for v in range(4))
    assert edge_connectivity(g) == 3
    assert all(len(set(c)) == 7 and c[0] == v for v, c in enumerate(copies))


def test_augment_four_q_vertices():
    aug = z0_augment_3flow(K6_PLUS)
    assert aug.case == LE5
    assert [aug.graph.edges[e] for e in aug.added] == [(v, 6) for v in (2, 3, 4, 5)]
    assert all(aug.pre[e] == aug.z0 for e in aug.added)
    assert aug.beta[aug.z0] == 1
    assert [aug.beta[v] for v in (2, 3, 4, 5)] == [2, 2, 2, 2]
    assert aug.beta[0] == aug.beta[1] == 0


def test_augment_three_p_vertices():
    aug = z0_augment_3flow(THREE_P)
    assert aug.case == SIX_SEVEN_P
    z0 = aug.z0
    tails = sorted((aug.graph.edges[e], aug.pre[e]) for e in aug.added)
    assert tails == [((0, 5), 0), ((0, 5), 0), ((1, 5), z0), ((1, 5), z0), ((2, 5), z0), ((2, 5), z0)]
    assert aug.beta[0] == 2 and aug.beta[1] == aug.beta[2] == 1
    assert aug.beta[z0] == 2
    out = sum(1 for e in aug.added if aug.pre[e] == z0)
    assert (out - (len(aug.added) - out) - aug.beta[z0]) % 3 == 0


def test_augment_q_only_six():
    # K6 plus two extra disjoint parallel edges: no, that leaves 2 Q' vertices; use K7 minus a matching of size 3
    k7 = complete_graph(7)
    g = Multigraph(7, tuple(e for e in k7.edges if e not in {(0, 1), (2, 3), (4, 5)}))
    aug = z0_augment_3flow(g)
    assert aug.case == SIX_SEVEN_Q
    into = sorted(aug.graph.edges[e][0] for e in aug.added if aug.pre[e] != aug.z0)
    assert into == [0, 1]
    assert aug.beta[0] == aug.beta[1] == 1
    assert all(aug.beta[v] == 2 for v in (2, 3, 4, 5))
    assert aug.beta[aug.z0] == 2


def test_augment_four_regular_passthrough():
    aug = z0_augment_3flow(complete_graph(5))
    assert aug.case == PASSTHROUGH and aug.added == ()
    assert set(aug.beta) == {0}


def test_augment_rejects_k4():
    with pytest.raises(HypothesisError):
        z0_augment_3flow(complete_graph(4))


def test_z3_augment_k6():
    aug = z0_augment_z3(complete_graph(6), [0] * 6)
    assert aug.case == Z3_CASE and len(aug.added) == 6
    assert aug.beta == (2, 2, 2, 2, 2, 2, 0)
    assert sum(aug.beta) % 3 == 0


def test_z3_augment_k7_passthrough():
    beta = (1, 2, 0, 0, 0, 0, 0)
    aug = z0_augment_z3(complete_graph(7), beta)
    assert aug.case == PASSTHROUGH and aug.beta[:7] == beta and aug.added == ()


def test_z3_augment_k6_plus():
    aug = z0_augment_z3(K6_PLUS, [0] * 6)
    assert len(aug.added) == 4 and aug.beta[aug.z0] == 1


def test_z3_augment_rejects_low_connectivity():
    with pytest.raises(HypothesisError):
        z0_augment_z3(complete_graph(5), [0] * 5)
    with pytest.raises(InvalidArgument):
        z0_augment_z3(complete_graph(6), [1, 0, 0, 0, 0, 0])


def test_ltwz_k4_fails_subset_condition():
    k4 = complete_graph(4)
    pre = {e: 0 for e, ends in enumerate(k4.edges) if 0 in ends}
    r = ltwz_check(k4, [0] * 4, 0, pre)
    assert r.enough_vertices and r.z0_condition and not r.subset_condition
    assert r.violation == (1,) and r.violation_degree == 3 and r.violation_tau == 3


def test_ltwz_two_vertices_fail_first_condition():
    r = ltwz_check(parallel_edges(2), [2, 1], 0, {0: 0, 1: 0})
    assert not r.enough_vertices and not r.holds


def test_ltwz_validates_pre_orientation():
    k4 = complete_graph(4)
    with pytest.raises(InvalidArgument):
        ltwz_check(k4, [0] * 4, 0, {0: 0})
    with pytest.raises(InvalidArgument):
        ltwz_check(k4, [0] * 4, 0, {0: 3, 1: 0, 2: 0})


def test_extend_c5_outside_lemma():
    c5 = cycle_graph(5)
    cert = extend_orientation(c5, [0] * 5, 0, {0: 0, 4: 4}, require_conditions=False)
    assert cert.exists
    assert [t for t, _ in cert.payload.arcs] == [0, 1, 2, 3, 4]
    with pytest.raises(HypothesisError):
        extend_orientation(c5, [0] * 5, 0, {0: 0, 4: 4})


def test_k6_every_boundary_through_z3_gadget():
    # six degree-5 vertices put d(z0) = 6 over the lemma's bound, but the
    # extension exists for every boundary anyway
    k6 = complete_graph(6)
    for beta in all_boundaries(6):
        aug = z0_augment_z3(k6, beta)
        assert not ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre).z0_condition
        cert = extend_orientation(aug.graph, aug.beta, aug.z0, aug.pre, require_conditions=False)
        d = recover_orientation(aug, cert.payload)
        assert is_beta_orientation(k6, d, beta)


def test_z3_gadget_single_degree5_vertex_needs_reduction():
    # with S' = {v} and beta(v) = 0, A = V - v has d = 5 and |tau| = 3; the
    # five-cut around v is what the contraction step removes first
    g = complete_graph(6).add_edges([(0, 3), (2, 4), (3, 5)])
    assert degree_classes(g).s_prime == {1}
    aug = z0_augment_z3(g, [0] * 6)
    r = ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre)
    assert r.violation == (0, 2, 3, 4, 5) and (r.violation_degree, r.violation_tau) == (5, 3)
    aug = z0_augment_z3(g, [0, 1, 2, 0, 0, 0])
    assert ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre).holds


def test_recover_passthrough_is_identity():
    aug = z0_augment_3flow(complete_graph(5))
    full = find_beta_orientation(aug.graph, aug.beta).payload
    assert recover_orientation(aug, full).arcs == full.arcs


def test_recover_rejects_mismatch():
    aug = z0_augment_z3(K6_PLUS, [0] * 6)
    cert = extend_orientation(aug.graph, aug.beta, aug.z0, aug.pre)
    with pytest.raises(InvalidArgument):
        recover_orientation(aug, cert.payload.reversed())


def test_three_flow_leaf_gap_instance():
    # the degree-3 vertex w = 0 sends two arcs to z0 and q = 1 one arc;
    # A = V - w then has d = 3 + 1 = 4 but |tau| = 2
    assert _irreducible(GAP_GRAPH)
    aug = z0_augment_3flow(GAP_GRAPH)
    r = ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre)
    assert r.violation == (1, 2, 3)
    assert (r.violation_degree, r.violation_tau) == (4, 2)
    # the extension still happens to exist
    assert extend_orientation(aug.graph, aug.beta, aug.z0, aug.pre, require_conditions=False).exists


def test_anchor_augmentation_repairs_gap_instance():
    aug = anchor_augment_3flow(GAP_GRAPH)
    assert aug.case == ANCHOR and aug.z0 == 0
    assert aug.beta == (1, 2, 0, 0)
    assert ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre).holds
    cert = extend_orientation(aug.graph, aug.beta, aug.z0, aug.pre)
    d = recover_orientation(aug, cert.payload)
    assert all(b % 3 == 0 for b in d.balances(GAP_GRAPH.n))


def _irreducible(g):
    """Nothing for the reductions to do: 3-edge-connected, no degree 2, no
    nontrivial 3-cut, and every U with |U| >= 2 and d(U) <= 5 meets the
    degree-3 or degree-5 vertices."""
    deg = g.degrees()
    if edge_connectivity(g) < 3 or 2 in deg:
        return False
    low = {v for v in range(g.n) if deg[v] in (3, 5)}
    for x, size in small_sides(g, 5):
        if size == 3 and 2 <= len(x) <= g.n - 2:
            return False
        if len(x) >= 2 and not x & low:
            return False
    return True


def test_anchor_requires_one_of_each():
    with pytest.raises(HypothesisError):
        anchor_augment_3flow(complete_graph(5))


def _three_flow_inputs():
    graphs = []
    for seed in range(40):
        kind = ("uniform", "booster", "regular", "glued")[seed % 4]
        spec = GenSpec(kind, 3 + seed % 6, "1.12", 2, 20, seed)
        graphs.append(generate(spec))
    return graphs


THREE_FLOW_INPUTS = _three_flow_inputs()


@pytest.mark.parametrize("g", THREE_FLOW_INPUTS, ids=lambda g: f"n{g.n}m{g.m}")
def test_three_flow_augmentation_invariants(g):
    aug = z0_augment_3flow(g)
    cls = degree_classes(g)
    deg = aug.graph.degrees()
    assert all(deg[v] == 5 for v in cls.p_prime)
    assert all(deg[v] == 6 for v in cls.q_prime)
    assert sum(aug.beta) % 3 == 0
    r = ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre)
    assert r.z0_condition
    cert = extend_orientation(aug.graph, aug.beta, aug.z0, aug.pre, require_conditions=False)
    if cert.exists:
        d = recover_orientation(aug, cert.payload)
        assert all(b % 3 == 0 for b in d.balances(g.n))


def _reduced(g):
    """No U with |U| >= 2 and d(U) = 5 avoids the degree-5 vertices."""
    s_prime = degree_classes(g).s_prime
    return all(x & s_prime for x, size in small_sides(g, 5) if size == 5 and len(x) >= 2)


def _five_connected_inputs():
    graphs = [K6_PLUS, complete_graph(7), complete_graph(8)]
    for seed in range(40):
        g = generate(GenSpec("glued", 6 + seed % 2, "1.17", 5, 30, seed))
        if _reduced(g):
            graphs.append(g)
    assert all(hypothesis_check(g, "1.17").holds for g in graphs)
    return graphs[:10]


@pytest.mark.parametrize("g", _five_connected_inputs(), ids=lambda g: f"n{g.n}m{g.m}")
def test_z3_augmentation_satisfies_lemma(g):
    for beta in all_boundaries(g.n)[:: max(1, 3 ** (g.n - 1) // 40)]:
        aug = z0_augment_z3(g, beta)
        assert sum(aug.beta) % 3 == 0
        deg = aug.graph.degrees()
        assert all(deg[v] == 6 for v in degree_classes(g).s_prime)
        assert ltwz_check(aug.graph, aug.beta, aug.z0, aug.pre).holds
        cert = extend_orientation(aug.graph, aug.beta, aug.z0, aug.pre)
        assert is_beta_orientation(g, recover_orientation(aug, cert.payload), beta)


def test_degree_bounds_from_tau():
    for beta in range(3):
        for d in range(21):
            t = tau(beta, d)
            if d <= 5:
                assert d <= 4 + t
            else:
                assert d >= 4 + t
