import math

import numpy as np
import pytest

from hypercolor.generators import random_uniform
from hypercolor.hypergraph import Hypergraph
from hypercolor.procedures import (
    Constants,
    PartiteHypergraph,
    ReductionFailed,
    bucket_thresholds,
    degree_buckets,
    degree_window_holds,
    k_partite_reduction,
    random_partite_hypergraph,
    regularize_degrees,
    select_bucket,
    stage_count,
)


def test_single_edge_retained():
    ph = k_partite_reduction(Hypergraph(3, [(0, 1, 2)]), 50, 0)
    assert ph.retained_fraction == 1.0
    assert ph.is_partite()


def test_complete_tripartite_found_with_many_trials():
    h = Hypergraph(6, [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])
    ph = k_partite_reduction(h, 2000, 1)
    assert ph.retained_fraction == 1.0


def test_random_triples_beat_expectation():
    h = random_uniform(100, 3, 1000, 8)
    ph = k_partite_reduction(h, 20, 8)
    assert ph.retained_fraction >= 2 / 9
    assert ph.is_partite()
    assert ph.source_edges == 1000


def test_ordered_rows_follow_parts():
    ph = k_partite_reduction(random_uniform(30, 3, 200, 1), 10, 1)
    rows = ph.ordered_rows()
    assert (ph.parts[rows] == np.arange(3)).all()


def test_constants_chain():
    c = Constants.from_counts(1000, 10, 3, 0.5, 2)
    assert c.c1 == pytest.approx(1000 / 10**2.5)
    assert c.c3 == pytest.approx(6 / 27 * c.c2)
    assert c.c5 == pytest.approx(c.c4 * min(c.c4 / 4, 1 / 8))


def test_degree_buckets_profile():
    assert degree_buckets([4, 4, 5, 8, 9, 16]) == {2: (3, 13), 3: (2, 17), 4: (1, 16)}
    assert degree_buckets([1, 2, 3, 7, 8, 1023, 1024]) == {0: (1, 1), 1: (2, 5), 2: (1, 7), 3: (1, 8), 9: (1, 1023), 10: (1, 1024)}


def test_select_bucket_ratio_argmax():
    assert select_bucket({2: 13, 3: 17, 4: 16}, {2: 1.0, 3: 1.0, 4: 1.0}) == 3
    assert select_bucket({0: 90, 1: 10}, {0: 2.0, 1: 2.0}) == 0
    assert select_bucket({0: 50, 1: 50}, {0: 1.0, 1: 1.0}) == 0
    with pytest.raises(ReductionFailed):
        select_bucket({}, {})


def test_thresholds_formula():
    n, eps, ell, c4 = 100, 0.5, 3, 0.1
    d1 = 4 * (ell - 1) / c4 * n ** (-(1 - eps) / (ell - 1))
    d2 = 8 * n ** ((ell - 2) * (1 - eps / 2) / (ell - 1))
    expect = 2 ** (-2 / 2) / d1 + 2 ** (2 * 1 / 2) / d2
    assert bucket_thresholds(n, eps, ell, c4, [2])[0] == pytest.approx(expect)


def test_equal_degrees_single_bucket():
    ph = random_partite_hypergraph(8, 3, 4, 0)
    out, buckets = regularize_degrees(ph, 0.5, 2)
    assert [b.index for b in buckets] == [2]
    assert out.alpha == pytest.approx(1 - math.log(4) / math.log(ph.n))
    assert out.hypergraph.num_edges == ph.hypergraph.num_edges
    assert degree_window_holds(out)


def test_low_degree_tuples_cut():
    ph = random_partite_hypergraph(10, 3, 1, 0)
    # c4 n^(1-eps) exceeds 1 when the whole edge set is tiny relative to a huge fake source count
    fake = PartiteHypergraph(ph.hypergraph, ph.parts, 3, source_edges=ph.n**3)
    with pytest.raises(ReductionFailed):
        regularize_degrees(fake, 0.1, 2)


def test_empty_fails():
    ph = PartiteHypergraph(Hypergraph(6), np.repeat(np.arange(3), 2), 3, 0)
    with pytest.raises(ReductionFailed):
        regularize_degrees(ph, 0.5, 2)


@pytest.mark.parametrize("seed", range(5))
def test_window_after_regularizing_random(seed):
    h = random_uniform(40, 3, 3000, seed)
    ph = k_partite_reduction(h, 10, seed)
    out, _ = regularize_degrees(ph, 0.6, 2)
    assert degree_window_holds(out)
    assert out.is_partite()
    assert out.constants.c1 == pytest.approx(3000 / 40 ** (3 - 0.6))


def test_window_check_rejects_wide_profiles():
    ph = random_partite_hypergraph(8, 3, 1, 0)
    wide = PartiteHypergraph(ph.hypergraph.with_edges([(0, 8, 16), (0, 8, 17), (0, 8, 18)]), ph.parts, 3, 0, alpha=1.0)
    assert not degree_window_holds(wide)
    assert not degree_window_holds(ph)  # alpha unset


def test_stage_count_clamped():
    c = Constants.from_counts(10, 100, 3, 0.5, 2)
    assert stage_count(c, 100, 3, 2, 0.6, 0.5) == 1
    big = Constants(1, 1, 1, 1, 1)
    assert stage_count(big, 10**4, 3, 2, 1.0, 0.0) == math.floor(2**-3 * 10**8)
