from itertools import combinations, product

import numpy as np
import pytest

from hypercolor.decider import (
    BRUTE_FORCE_MAX_N,
    Status,
    brute_force_two_colorable,
    is_two_colorable,
)
from hypercolor.generators import make_rng
from hypercolor.hypergraph import Hypergraph, InputError, is_proper


def random_mixed(rng, n, m):
    edges = []
    for _ in range(m):
        s = int(rng.integers(2, 5))
        edges.append(tuple(rng.choice(n, size=min(s, n), replace=False).tolist()))
    return Hypergraph(n, edges)


def cycle(length):
    return Hypergraph(length, [(i, (i + 1) % length) for i in range(length)])


def test_triangle_not_colorable():
    assert is_two_colorable(cycle(3)).status is Status.NOT_COLORABLE


def test_fano_not_colorable(fano):
    assert not is_two_colorable(fano).colorable
    assert not brute_force_two_colorable(fano).colorable


def test_k4_triples_colorable(k4_triples):
    res = is_two_colorable(k4_triples)
    assert res.colorable
    assert is_proper(k4_triples, res.witness)
    # two colors, two vertices each, like (1, 1, 2, 2)
    assert sorted(res.witness) == [1, 1, 2, 2]


@pytest.mark.parametrize("length", [3, 5, 7, 9, 31])
def test_odd_cycles(length):
    assert is_two_colorable(cycle(length)).status is Status.NOT_COLORABLE


@pytest.mark.parametrize("length", [4, 6, 8, 30])
def test_even_cycles(length):
    res = is_two_colorable(cycle(length))
    assert res.colorable and is_proper(cycle(length), res.witness)


def test_brute_force_trivia():
    assert brute_force_two_colorable(Hypergraph(3)).colorable
    assert brute_force_two_colorable(Hypergraph(2, [(0, 1)])).colorable
    with pytest.raises(InputError):
        brute_force_two_colorable(Hypergraph(BRUTE_FORCE_MAX_N + 1))


def test_empty_and_edgeless():
    assert is_two_colorable(Hypergraph(0)).colorable
    assert is_two_colorable(Hypergraph(5)).witness == (1,) * 5


def test_agrees_with_brute_force_on_random_mixed():
    rng = make_rng(101)
    for _ in range(400):
        n = int(rng.integers(3, 13))
        h = random_mixed(rng, n, int(rng.integers(1, 4 * n)))
        fast, slow = is_two_colorable(h), brute_force_two_colorable(h)
        assert fast.colorable == slow.colorable
        if fast.colorable:
            assert is_proper(h, fast.witness)


def test_fixed_colors_are_honored():
    rng = make_rng(7)
    for _ in range(200):
        n = int(rng.integers(4, 11))
        h = random_mixed(rng, n, int(rng.integers(1, 2 * n)))
        fixed = {int(v): int(rng.integers(1, 3)) for v in rng.choice(n, size=2, replace=False)}
        res = is_two_colorable(h, fixed=fixed)
        truth = any(
            is_proper(h, c) for c in product((1, 2), repeat=n) if all(c[v] == col for v, col in fixed.items())
        )
        assert res.colorable == truth
        if truth:
            assert is_proper(h, res.witness)
            assert all(res.witness[v] == c for v, c in fixed.items())


def test_fixed_colors_validated():
    with pytest.raises(InputError):
        is_two_colorable(Hypergraph(3, [(0, 1)]), fixed={5: 1})
    with pytest.raises(InputError):
        is_two_colorable(Hypergraph(3, [(0, 1)]), fixed={0: 3})


def test_budget_yields_undecided():
    # complete 3-uniform on 9 vertices is not 2-colorable and needs real search
    h = Hypergraph(9, combinations(range(9), 3))
    res = is_two_colorable(h, budget=1)
    assert res.status is Status.UNDECIDED and res.colorable is None
    assert is_two_colorable(h).status is Status.NOT_COLORABLE


def test_search_is_deterministic(fano):
    h = Hypergraph(12, list(fano.edges) + [(7, 8), (8, 9), (9, 10, 11)])
    a, b = is_two_colorable(h), is_two_colorable(h)
    assert a.witness == b.witness and a.nodes == b.nodes


def test_adding_edges_never_restores_colorability():
    rng = make_rng(3)
    for _ in range(100):
        h = random_mixed(rng, 10, 25)
        extra = random_mixed(rng, 10, 3)
        if not is_two_colorable(h).colorable:
            assert not is_two_colorable(h.with_edges(extra.edges)).colorable


def test_report_json(fano):
    rep = is_two_colorable(fano).to_json()
    assert rep["status"] == "not_colorable" and rep["witness"] is None
    assert Status.UNDECIDED == 2


def test_large_bipartite_instance_fast():
    n = 2000
    rng = make_rng(1)
    u = rng.integers(0, n // 2, 5000) * 2
    v = rng.integers(0, n // 2, 5000) * 2 + 1
    h = Hypergraph(n, np.column_stack([u, v]))
    res = is_two_colorable(h)
    assert res.colorable and is_proper(h, res.witness)
