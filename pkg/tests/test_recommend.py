import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from trustspectra import (
    DenseTrustMatrix,
    TrustDataError,
    decompose_edge,
    rank_trustees,
    refine_query,
    svd,
)
from trustspectra import fixtures as fx
from trustspectra.recommend import qualified_ratings


def order(rec):
    return [o for o, _ in rec.ranking]


def test_food_concept_for_b(example_decomp):
    rec = rank_trustees(example_decomp, "b", 2)
    assert order(rec) == ["k", "j", "i"]
    np.testing.assert_allclose([r for _, r in rec.ranking], [.35, .3, -.2], atol=0.02)
    assert rec.best == "k"


def test_gun_concept_for_b(example_decomp):
    rec = rank_trustees(example_decomp, "b", 1)
    assert rec.best == "i"
    assert rec.ranking[0][1] == pytest.approx(1.245, abs=0.02)
    assert not rec.negative_affinity


def test_food_concept_for_d(example_decomp):
    rec = rank_trustees(example_decomp, "d", 2)
    assert rec.best == "i" and order(rec)[-1] == "k"
    assert rec.ranking[0][1] == pytest.approx(.32, abs=0.02)
    assert rec.ranking[-1][1] == pytest.approx(-.56, abs=0.02)


def test_negative_affinity_flag(example_decomp):
    # b loads against concept 2's canonical sign; d loads with it
    u = example_decomp.u
    for s, j in (("b", 1), ("d", 3)):
        assert rank_trustees(example_decomp, s, 2).negative_affinity == bool(u[j, 1] < 0)


def test_ratings_are_the_oracle_products(example_decomp):
    lam, u, v = fx.REFERENCE_LAMBDAS, fx.REFERENCE_U, fx.REFERENCE_V
    for k in (1, 2):
        got = dict(qualified_ratings(example_decomp, "b", k))
        for i, o in enumerate(("i", "j", "k")):
            assert got[o] == pytest.approx(lam[k - 1] * u[1, k - 1] * v[i, k - 1], abs=0.03)


def test_ties_keep_source_order():
    m = DenseTrustMatrix(("x", "y", "z"), ("p",), [[1.0], [2.0], [1.0]])
    rec = rank_trustees(svd(m), "p", 1)
    assert order(rec) == ["y", "x", "z"]


def test_bad_concept_and_subject(example_decomp):
    for bad in (0, 3, True, 1.0):
        with pytest.raises(TrustDataError):
            rank_trustees(example_decomp, "b", bad)
    with pytest.raises(TrustDataError):
        rank_trustees(example_decomp, "zz", 1)


def test_refine(example_decomp):
    food = refine_query(example_decomp, "b", ["i", "j"], 2)
    assert food.best == "j"
    np.testing.assert_allclose([r for _, r in food.ratings], [.3, -.2], atol=0.02)
    guns = refine_query(example_decomp, "b", ["j", "i"], 1)
    assert guns.best == "i"
    np.testing.assert_allclose(dict(guns.ratings)["j"], .825, atol=0.02)
    assert refine_query(example_decomp, "b", ["i"], 2).best == "i"


def test_refine_errors(example_decomp):
    with pytest.raises(TrustDataError):
        refine_query(example_decomp, "b", [], 1)
    with pytest.raises(TrustDataError, match="outlet"):
        refine_query(example_decomp, "b", ["i", "zz"], 1)


def test_json(example_decomp):
    doc = json.loads(rank_trustees(example_decomp, "b", 2).to_json())
    assert doc["concept"] == 2 and [r["object"] for r in doc["ranking"]] == ["k", "j", "i"]
    assert refine_query(example_decomp, "b", ["i", "j"], 2).to_dict()["best"] == "j"


def test_scaling_invariance_worked_example(example_block):
    d = svd(example_block, tol=fx.WORKED_EXAMPLE_TOL)
    dc = svd(example_block.scaled(10.0), tol=10 * fx.WORKED_EXAMPLE_TOL)
    for s in d.col_ids:
        for k in (1, 2):
            assert order(rank_trustees(d, s, k)) == order(rank_trustees(dc, s, k))


matrices = arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)),
                  elements=st.floats(-5, 5, allow_nan=False))


@settings(max_examples=100, deadline=None)
@given(matrices, st.data())
def test_refine_consistent_with_full_ranking(a, data):
    d = svd(a)
    if d.rank == 0:
        return
    k = data.draw(st.integers(1, d.rank))
    subj = data.draw(st.sampled_from(d.col_ids))
    outlets = data.draw(st.lists(st.sampled_from(d.row_ids), min_size=1, unique=True))
    full = [o for o in order(rank_trustees(d, subj, k)) if o in outlets]
    assert [o for o, _ in refine_query(d, subj, outlets, k).ratings] == full


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_ratings_sum_to_edge_total(a):
    d = svd(a)
    for subj in d.col_ids:
        per_obj = {o: 0.0 for o in d.row_ids}
        for k in range(1, d.rank + 1):
            for o, r in qualified_ratings(d, subj, k):
                per_obj[o] += r
        for o in d.row_ids:
            assert abs(per_obj[o] - decompose_edge(d, subj, o).total) <= 1e-12 * max(1, abs(a).max())
