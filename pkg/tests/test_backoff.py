import math

import pytest
from hypothesis import given, settings, strategies as st

from mprlab.attempts import AttemptDistribution, cdf
from mprlab.backoff import (
    EBParams,
    SteadyStateUnreachableError,
    asymptotic_lambda,
    pc_of_pt,
    pt_of_pc,
    solve_fixed_point,
)


def test_pt_collision_free():
    assert pt_of_pc(0.0, EBParams(w0=16, r=2.0)) == pytest.approx(
        2 / 17, rel=1e-15)


def test_pt_worked_example():
    got = pt_of_pc(0.3, EBParams(w0=16, r=2.0))
    assert got == pytest.approx(0.8 / 11.6, rel=1e-12)
    assert got == pytest.approx(0.068966, abs=1e-6)


def test_pt_rejects_unstable_regime():
    with pytest.raises(SteadyStateUnreachableError):
        pt_of_pc(0.5, EBParams(w0=16, r=2.0))
    with pytest.raises(SteadyStateUnreachableError):
        pt_of_pc(0.6, EBParams(w0=16, r=2.0))


def test_pt_decreasing_in_pc():
    eb = EBParams(w0=32, r=2.0)
    values = [pt_of_pc(pc, eb) for pc in (0.0, 0.1, 0.2, 0.3, 0.4, 0.49)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(0 < v <= 1 for v in values)


def test_pc_empty_channel():
    assert pc_of_pt(0.0, 10, 2) == 0.0


def test_pc_two_rivals():
    assert pc_of_pt(0.5, 3, 1) == pytest.approx(0.75, rel=1e-12)


def test_pc_capability_covers_everyone():
    for p in (0.0, 0.3, 1.0):
        assert pc_of_pt(p, 4, 4) == 0.0


def test_pc_nondecreasing_in_pt():
    values = [pc_of_pt(p, 20, 3) for p in (0.01, 0.05, 0.1, 0.3, 0.7)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_eb_params_validation():
    with pytest.raises(ValueError):
        EBParams(w0=0, r=2.0)
    with pytest.raises(ValueError):
        EBParams(w0=16, r=1.0)


def test_fixed_point_collision_free_case():
    sol = solve_fixed_point(3, 4, EBParams(w0=16, r=2.0))
    assert sol.p_c == 0.0
    assert sol.p_t == pytest.approx(2 / 17, rel=1e-12)


def test_fixed_point_consistency():
    eb = EBParams(w0=16, r=2.0)
    sol = solve_fixed_point(50, 4, eb)
    assert abs(sol.p_t - pt_of_pc(pc_of_pt(sol.p_t, 50, 4), eb)) < 1e-12
    assert sol.residual < 1e-12
    # frozen solver output for the headline validation operating point
    assert sol.p_t == pytest.approx(0.0597862963316, abs=1e-10)
    assert sol.n_p_t == pytest.approx(50 * sol.p_t, rel=1e-15)


def test_fixed_point_matches_asymptotic_rate_at_large_n():
    n = 10**4
    sol = solve_fixed_point(n, 2, EBParams(w0=32, r=2.0))
    lam = asymptotic_lambda(2, 2.0)
    assert abs(sol.n_p_t - lam) / lam < 0.01


def test_fixed_point_converges_monotonically_in_n():
    lam = asymptotic_lambda(2, 2.0)
    gaps = [abs(solve_fixed_point(n, 2, EBParams(w0=32, r=2.0)).n_p_t - lam)
            for n in (100, 1000, 10**4)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_fixed_point_w0_independent_limit():
    sols = [solve_fixed_point(10**4, 2, EBParams(w0=w0, r=2.0)).n_p_t
            for w0 in (16, 32)]
    assert abs(sols[0] - sols[1]) / sols[1] < 0.01


def test_asymptotic_lambda_closed_form():
    assert asymptotic_lambda(1, 2.0) == pytest.approx(math.log(2), abs=1e-9)


def test_asymptotic_lambda_two_antennas():
    assert asymptotic_lambda(2, 2.0) == pytest.approx(1.6783, abs=1e-3)


def test_asymptotic_lambda_satisfies_balance_equation():
    for m in (1, 2, 5):
        for r in (1.5, 2.0, 8.0):
            lam = asymptotic_lambda(m, r)
            dist = AttemptDistribution(kind="poisson", lam=lam)
            assert cdf(dist, m - 1) == pytest.approx(1 - 1 / r, abs=1e-12)


def test_asymptotic_lambda_decreasing_in_r():
    """Weak backoff keeps attempt pressure high; strong backoff kills it."""
    values = [asymptotic_lambda(1, r) for r in (1.01, 1.1, 2.0, 8.0, 64.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[0] > 4.0
    assert values[-1] < 0.02


def test_asymptotic_lambda_rejects_bad_r():
    with pytest.raises(ValueError):
        asymptotic_lambda(2, 1.0)
    with pytest.raises(ValueError):
        asymptotic_lambda(2, 0.5)


@given(st.integers(min_value=1, max_value=60),
       st.integers(min_value=1, max_value=8),
       st.integers(min_value=1, max_value=256),
       st.floats(min_value=1.1, max_value=16.0))
@settings(max_examples=40, deadline=None)
def test_fixed_point_always_consistent(n, m, w0, r):
    eb = EBParams(w0=w0, r=r)
    sol = solve_fixed_point(n, m, eb)
    assert 0 < sol.p_t <= 1
    assert 0 <= sol.p_c < 1 / r
    assert abs(sol.p_t - pt_of_pc(sol.p_c, eb)) < 1e-9
    assert abs(sol.p_c - pc_of_pt(sol.p_t, n, m)) < 1e-9
