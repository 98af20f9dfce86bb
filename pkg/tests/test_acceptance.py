"""Acceptance gate: one test per exit criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s -v`` to see the lines.
"""
import pytest

from oracles import abs_cosine, matvec
from trustspectra import acceptance
from trustspectra import fixtures as fx


def _gate(check, *args, **kwargs):
    result = check(*args, **kwargs)
    print(result.line())
    assert result.passed, result.line()
    return result


def test_criterion_1_worked_example_svd():
    _gate(acceptance.worked_example_svd)


def test_criterion_2_qualified_matrices():
    _gate(acceptance.qualified_matrices)


def test_criterion_3_edge_decomposition():
    _gate(acceptance.edge_decomposition)


def test_criterion_4_counterexample():
    result = _gate(acceptance.counterexample)
    # independent route: plain-Python arithmetic on the raw fixture values
    m = fx.worked_example_block().values.tolist()
    phi, psi = (list(map(float, x)) for x in fx.COUNTEREXAMPLE_PAIR)
    before = abs_cosine(phi, psi)
    after = abs_cosine(matvec(m, phi), matvec(m, psi))
    assert round(before, 4) == 0.7035 and round(after, 4) == 0.3124
    assert before - after >= 0.3
    assert f"s_before={before:.4f}" in result.detail
    assert f"s_after={after:.4f}" in result.detail


def test_criterion_5_engine_invariants():
    _gate(acceptance.engine_invariants)


def test_criterion_6_span_preservation():
    _gate(acceptance.span_preservation)


def test_criterion_7_power_iteration():
    _gate(acceptance.power_iteration)


def test_criterion_8_recommendations():
    _gate(acceptance.recommendations)


@pytest.mark.slow
def test_criterion_9_desk_scale():
    _gate(acceptance.desk_scale)


def test_criterion_edge_oracle():
    # the (d,k) cell of the source table is reproduced by the food concept alone
    lam, u, v = fx.REFERENCE_LAMBDAS, fx.REFERENCE_U, fx.REFERENCE_V
    assert lam[0] * u[3, 0] * v[2, 0] == 0
    assert lam[1] * u[3, 1] * v[2, 1] == pytest.approx(-.56)
    assert fx.worked_example_block().values[2, 3] == -.56


def test_all_criteria_listed():
    assert [c.__name__ for c in acceptance.CRITERIA] == [
        "worked_example_svd", "qualified_matrices", "edge_decomposition", "counterexample",
        "engine_invariants", "span_preservation", "power_iteration", "recommendations",
        "desk_scale",
    ]
    numbers = [c().number for c in acceptance.CRITERIA[:4]]
    assert numbers == [1, 2, 3, 4]
