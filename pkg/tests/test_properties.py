import math
from itertools import product

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor.decider import (
    ClusterInstance,
    ReductionFailure,
    brute_force_two_colorable,
    cluster_feasible,
    is_two_colorable,
    reduce_to_prescribed,
    solve_prescribed,
)
from hypercolor.generators import (
    PerturbationSpec,
    XYZConstruction,
    build_xyz,
    perturb,
    random_graph,
    random_uniform,
    sample_perturbation,
)
from hypercolor.hypergraph import Hypergraph, degree, is_proper, link, neighborhood
from hypercolor.procedures import (
    ActivityThresholds,
    ReductionFailed,
    WitnessFailure,
    check_family_invariants,
    degree_window_holds,
    extract_families,
    grow_witness_tree,
    k_partite_reduction,
    random_batches,
    random_partite_hypergraph,
    regularize_degrees,
    verify_witness,
)


@st.composite
def hypergraphs(draw, max_n=10, arities=(2, 3, 4)):
    n = draw(st.integers(4, max_n))
    edges = draw(
        st.lists(
            st.sampled_from(arities).flatmap(lambda s: st.sets(st.integers(0, n - 1), min_size=s, max_size=s)),
            max_size=3 * n,
        )
    )
    return Hypergraph(n, [tuple(e) for e in edges])


@st.composite
def colorings(draw, n):
    return draw(st.lists(st.integers(1, 2), min_size=n, max_size=n))


@settings(max_examples=150, deadline=None)
@given(hypergraphs())
def test_vertex_degrees_sum_to_edge_sizes(h):
    assert sum(degree(h, {v}) for v in range(h.n)) == sum(len(e) for e in h.edges)


@settings(max_examples=100, deadline=None)
@given(hypergraphs(arities=(3,)), st.data())
def test_neighborhood_and_link_definitions(h, data):
    a = tuple(sorted(data.draw(st.sets(st.integers(0, h.n - 1), min_size=2, max_size=2))))
    nb = neighborhood(h, a, 3)
    for w in range(h.n):
        if w not in a:
            assert (w in nb) == (tuple(sorted((*a, w))) in h)
    v = a[0]
    g = link(h, (v,), 3)
    assert g.num_edges == degree(h, (v,), 3)
    assert all(tuple(sorted((v, x, y))) in h for x, y in g.edges)


@settings(max_examples=100, deadline=None)
@given(hypergraphs(), st.data())
def test_proper_is_monotone_under_edge_removal(h, data):
    c = data.draw(colorings(h.n))
    if h.num_edges and is_proper(h, c):
        assert is_proper(Hypergraph(h.n, h.edges[1:]), c)


@settings(max_examples=250, deadline=None)
@given(hypergraphs(max_n=12))
def test_decider_matches_brute_force(h):
    fast = is_two_colorable(h)
    assert fast.colorable == brute_force_two_colorable(h).colorable
    if fast.colorable:
        assert is_proper(h, fast.witness)


@settings(max_examples=80, deadline=None)
@given(hypergraphs(max_n=9), st.data())
def test_adding_edges_is_monotone(h, data):
    extra = data.draw(hypergraphs(max_n=9))
    extra_edges = [e for e in extra.edges if max(e) < h.n]
    if extra_edges and not is_two_colorable(h).colorable:
        assert not is_two_colorable(h.with_edges(extra_edges)).colorable


@settings(max_examples=80, deadline=None)
@given(st.integers(12, 40), st.integers(0, 10**6), st.integers(0, 12))
def test_construction_is_colorable_and_reduction_sound(n, seed, count):
    spec = XYZConstruction(n, 3, 0.8, ell=2)
    hl = build_xyz(spec)
    assert is_proper(hl, spec.canonical_coloring())
    r = sample_perturbation(n, PerturbationSpec.fixed(count, 2, seed))
    try:
        red = reduce_to_prescribed(spec, r)
    except ReductionFailure:
        return
    res = solve_prescribed(red.instance)
    if res.colorable:
        assert is_proper(perturb(hl, r), red.compose(spec, res))


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 10), st.integers(0, 10**6))
def test_cluster_feasibility_matches_enumeration(n, seed):
    rng = np.random.default_rng(seed)
    edges = [tuple(rng.choice(n, size=int(rng.integers(2, 4)), replace=False)) for _ in range(n)]
    perm = rng.permutation(n)
    clusters = [perm[:2].tolist(), perm[2:4].tolist()]
    res = cluster_feasible(ClusterInstance.build(n, clusters, edges))
    h = Hypergraph(n, edges)
    truth = any(
        is_proper(h, c) and c[clusters[0][0]] == c[clusters[0][1]] and c[clusters[1][0]] == c[clusters[1][1]]
        for c in product((1, 2), repeat=n)
    )
    assert res.colorable == truth


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([64, 128]), st.sampled_from([0.3, 0.5]), st.sampled_from([2, 3]), st.integers(0, 10**6))
def test_family_invariants_on_random_graphs(n, delta, ell, seed):
    m = min(math.comb(n, 2), math.ceil(n ** (2 - delta)))
    fx = extract_families(random_graph(n, m, seed), delta, ell)
    assert not fx.precondition_failed
    assert check_family_invariants(fx).all_hold


@settings(max_examples=40, deadline=None)
@given(st.integers(20, 40), st.integers(200, 2000), st.integers(0, 10**6), st.floats(0.3, 0.9))
def test_regularized_degree_window(n, m, seed, eps):
    m = min(m, math.comb(n, 3))
    ph = k_partite_reduction(random_uniform(n, 3, m, seed), 5, seed)
    try:
        out, _ = regularize_degrees(ph, eps, 2)
    except ReductionFailed:
        return
    assert degree_window_holds(out)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4]), st.integers(0, 10**6))
def test_grown_trees_verify(k, seed):
    ph = random_partite_hypergraph(5 if k == 3 else 4, k, 2, seed, density=0.8)
    batches = random_batches(ph, 2, 5, seed)
    try:
        tree = grow_witness_tree(ph, batches, ActivityThresholds.constant(k, 2))
    except WitnessFailure:
        return
    assert verify_witness(tree, ph, batches)
