from itertools import product

import pytest

from hypercolor.decider import ClusterInstance, brute_force_two_colorable, cluster_feasible, contract
from hypercolor.generators import make_rng
from hypercolor.hypergraph import Hypergraph, InputError, is_proper


def test_edge_inside_cluster():
    assert not cluster_feasible(ClusterInstance.build(2, [[0, 1]], [[0, 1]])).colorable


def test_opposite_clusters():
    res = cluster_feasible(ClusterInstance.build(4, [[0, 1], [2, 3]], [[0, 2]]))
    assert res.colorable
    assert res.witness[0] == res.witness[1] != res.witness[2] == res.witness[3]


@pytest.mark.parametrize("mode", ["contract", "exhaustive"])
def test_contracted_triangle(mode):
    inst = ClusterInstance.build(6, [[0, 1], [2, 3], [4, 5]], [[0, 2], [3, 4], [5, 1]])
    assert not cluster_feasible(inst, mode=mode).colorable


def test_overlap_rejected():
    with pytest.raises(InputError):
        ClusterInstance.build(4, [[0, 1], [1, 2]], [])


def test_exhaustive_guard():
    inst = ClusterInstance.build(62, [[2 * i, 2 * i + 1] for i in range(31)], [])
    with pytest.raises(InputError):
        cluster_feasible(inst, mode="exhaustive")


def test_contraction_renumbers_free_vertices():
    h, image = contract(ClusterInstance.build(5, [[1, 3]], [[0, 1, 4]]))
    assert list(image) == [1, 0, 2, 0, 3]
    assert set(h.edges) == {(0, 1, 3)}


def _brute_cluster(inst):
    h = Hypergraph(inst.n, inst.r_edges)
    free = [v for v in range(inst.n) if not any(v in a for a in inst.clusters)]
    for pattern in product((1, 2), repeat=len(inst.clusters)):
        for rest in product((1, 2), repeat=len(free)):
            c = [0] * inst.n
            for a, col in zip(inst.clusters, pattern):
                for v in a:
                    c[v] = col
            for v, col in zip(free, rest):
                c[v] = col
            if is_proper(h, c):
                return True
    return False


def test_matches_exhaustive_enumeration():
    rng = make_rng(23)
    for _ in range(150):
        n = int(rng.integers(6, 13))
        perm = rng.permutation(n).tolist()
        t = int(rng.integers(1, 5))
        clusters, pos = [], 0
        for _ in range(t):
            size = int(rng.integers(1, 3))
            clusters.append(perm[pos : pos + size])
            pos += size
        ell = int(rng.integers(2, 4))
        edges = [rng.choice(n, size=ell, replace=False).tolist() for _ in range(int(rng.integers(1, 2 * n)))]
        inst = ClusterInstance.build(n, clusters, edges)
        truth = _brute_cluster(inst)
        for mode in ("contract", "exhaustive"):
            res = cluster_feasible(inst, mode=mode)
            assert res.colorable == truth
            if truth:
                assert is_proper(Hypergraph(n, edges), res.witness)
                assert all(len({res.witness[v] for v in a}) == 1 for a in clusters)


def test_no_clusters_is_plain_decision(fano):
    res = cluster_feasible(ClusterInstance.build(7, [], fano.edges))
    assert res.colorable == brute_force_two_colorable(fano).colorable
