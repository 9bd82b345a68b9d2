import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bbr.series import (
    TruncatedSeries,
    exp_unit,
    log_unit,
    min_re_on_circle,
    order_for_budget,
    pow_real,
)


def series(values, rate=None):
    return TruncatedSeries(np.asarray(values, dtype=np.complex128), rate)


def max_diff(a: TruncatedSeries, b: TruncatedSeries) -> float:
    m = min(a.order, b.order)
    return float(np.max(np.abs(a.coeffs[: m + 1] - b.coeffs[: m + 1])))


# -- strategies ----------------------------------------------------------------

complex_coeff = st.tuples(
    st.floats(-1, 1, allow_nan=False), st.floats(-1, 1, allow_nan=False)
).map(lambda t: complex(*t))


def small_series(min_order=0, max_order=24):
    return st.lists(complex_coeff, min_size=min_order + 1, max_size=max_order + 1).map(
        series
    )


@st.composite
def zero_free_unit_series(draw, max_order=48):
    """Constant term 1 and tail 1-norm <= 0.9, hence no zeros in the disk.

    That is the regime where coefficientwise log/exp roundtrips are well
    conditioned in double precision; see the conditioning note in the
    series module.
    """
    n = draw(st.integers(4, max_order))
    tail = np.array(draw(st.lists(complex_coeff, min_size=n, max_size=n)))
    mass = np.sum(np.abs(tail))
    if mass > 0:
        tail = tail * (0.9 / max(mass, 0.9))
    return series(np.concatenate(([1.0 + 0j], tail)))


# -- construction and invariants ----------------------------------------------------


def test_order_matches_length():
    s = series([1, 2, 3])
    assert s.order == 2
    assert len(s) == 3


def test_rejects_empty_and_bad_rate():
    with pytest.raises(ValueError):
        series([])
    with pytest.raises(ValueError):
        series([1.0], rate=-1.0)
    with pytest.raises(ValueError):
        series([1.0], rate=math.inf)


def test_coefficients_immutable():
    s = series([1, 2])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5.0


# -- add -------------------------------------------------------------------------


def test_add_cancellation():
    total = series([1, 1]) + series([1, -1])
    assert np.array_equal(total.coeffs, [2, 0])


def test_add_identity():
    p = series([1, 0.5, 0.25], rate=1.0)
    q = p + TruncatedSeries.constant(0.0, 2)
    assert np.array_equal(q.coeffs, p.coeffs)


def test_add_truncates_to_shorter():
    total = series([1, 2, 1]) + series([1, 1])
    assert total.order == 1
    assert np.array_equal(total.coeffs, [2, 3])


def test_add_rate_combination():
    both = series([1, 1], rate=2.0) + series([1, 1], rate=3.0)
    assert both.tail_bound_rate == 5.0
    partial = series([1, 1], rate=2.0) + series([1, 1])
    assert partial.tail_bound_rate is None


def test_scalar_add_keeps_tail():
    s = series([1, 2], rate=2.0) + 1.0
    assert np.array_equal(s.coeffs, [2, 2])
    assert s.tail_bound_rate == 2.0


# -- mul -------------------------------------------------------------------------


def test_mul_square():
    sq = series([1, 1]) * series([1, 1])
    assert np.array_equal(sq.coeffs, [1, 2])  # truncated at min order 1


def test_mul_square_full_order():
    sq = series([1, 1, 0]) * series([1, 1, 0])
    assert np.array_equal(sq.coeffs, [1, 2, 1])


def test_mul_identity():
    p = series([1, 0.3, -0.2, 0.1])
    one = TruncatedSeries.constant(1.0, 3)
    assert max_diff(p * one, p) == 0.0


def test_mul_geometric_telescope():
    order = 8
    geometric = series(np.ones(order + 1))
    factor = series(np.concatenate(([1.0, -1.0], np.zeros(order - 1))))
    product = geometric * factor

    # Independent oracle: direct double-loop convolution.
    a, b = np.ones(order + 1), np.concatenate(([1.0, -1.0], np.zeros(order - 1)))
    expected = [
        sum(a[i] * b[l - i] for i in range(l + 1)) for l in range(order + 1)
    ]
    assert np.allclose(product.coeffs, expected, atol=0)
    assert np.array_equal(product.coeffs, np.eye(order + 1)[0])


def test_mul_drops_rate():
    p = series([1, 1], rate=1.0) * series([1, 1], rate=1.0)
    assert p.tail_bound_rate is None


def test_scalar_mul_scales_rate():
    s = series([1, 2], rate=2.0) * (-0.5)
    assert np.array_equal(s.coeffs, [-0.5, -1.0])
    assert s.tail_bound_rate == 1.0


# -- truncation --------------------------------------------------------------------


def test_truncated_widens_rate_over_dropped():
    s = series([1, 5, 0.1], rate=0.5).truncated(1)
    assert s.order == 1
    assert s.tail_bound_rate == 0.5  # dropped coefficient 0.1 is within rate
    t = series([1, 0.1, 5], rate=0.5).truncated(1)
    assert t.tail_bound_rate == 5.0


# -- log / exp / pow ------------------------------------------------------------------


def test_log_of_one_is_zero():
    out = log_unit(TruncatedSeries.constant(1.0, 8))
    assert np.array_equal(out.coeffs, np.zeros(9))


def test_log_mercator():
    out = log_unit(series(np.concatenate(([1.0, 1.0], np.zeros(9)))))
    expected = [0.0] + [(-1.0) ** (l + 1) / l for l in range(1, 11)]
    assert np.allclose(out.coeffs, expected, atol=1e-15)


def test_log_requires_unit_constant():
    with pytest.raises(ValueError):
        log_unit(series([2.0, 1.0]))


def test_exp_of_zero_is_one():
    out = exp_unit(TruncatedSeries.constant(0.0, 6))
    assert np.array_equal(out.coeffs, np.eye(7)[0])


def test_exp_of_z_is_inverse_factorials():
    out = exp_unit(series(np.concatenate(([0.0, 1.0], np.zeros(9)))))
    expected = [1.0 / math.factorial(l) for l in range(11)]
    assert np.allclose(out.coeffs, expected, atol=1e-16)


def test_exp_requires_zero_constant():
    with pytest.raises(ValueError):
        exp_unit(series([1.0, 1.0]))


def test_exp_log_roundtrip_example():
    a = series(np.concatenate(([1.0, 0.3, 0.1], np.zeros(30))))
    assert max_diff(exp_unit(log_unit(a)), a) < 1e-13


def test_log_exp_roundtrip_example():
    coeffs = np.zeros(33, dtype=np.complex128)
    coeffs[1], coeffs[3] = 0.5, -0.2
    a = series(coeffs)
    assert max_diff(log_unit(exp_unit(a)), a) < 1e-13


def test_pow_real_identity_returns_input():
    a = series([1, 0.4, 0.1])
    assert pow_real(a, 1.0) is a


def test_pow_real_square():
    out = pow_real(series(np.concatenate(([1.0, 1.0], np.zeros(6)))), 2.0)
    assert np.allclose(out.coeffs, [1, 2, 1, 0, 0, 0, 0, 0], atol=1e-15)


def test_pow_real_zero_power():
    out = pow_real(series([1, 0.4, 0.1]), 0.0)
    assert np.array_equal(out.coeffs, [1, 0, 0])


def test_pow_real_roundtrip_sigma():
    a = series(np.concatenate(([1.0, 0.4, 0.1], np.zeros(30))))
    back = pow_real(pow_real(a, 2.5), 1 / 2.5)
    assert max_diff(back, a) < 1e-12


# -- z derivative -----------------------------------------------------------------------


def test_z_derivative_constant():
    assert np.array_equal(TruncatedSeries.constant(1.0, 3).z_derivative().coeffs, np.zeros(4))


def test_z_derivative_monomial():
    out = series([0, 0, 0, 1]).z_derivative()
    assert np.array_equal(out.coeffs, [0, 0, 0, 3])


def test_z_derivative_termwise():
    out = series([1, 2, 5]).z_derivative()
    assert np.array_equal(out.coeffs, [0, 2, 10])


# -- evaluation ---------------------------------------------------------------------------


def test_eval_constant_with_zero_rate():
    value, err = TruncatedSeries.constant(1.0, 4).eval_with_bound(0.5)
    assert value == 1.0
    assert err == 0.0


def test_eval_geometric_bound():
    n = 20
    geometric = series(np.ones(n + 1), rate=1.0)
    value, err = geometric.eval_with_bound(0.5)
    assert err == pytest.approx(0.5 ** 21 / 0.5, rel=1e-15)
    assert abs(value - 2.0) <= err


def test_eval_at_zero():
    value, err = series([3.5, 1, 1], rate=2.0).eval_with_bound(0.0)
    assert value == 3.5
    assert err == 0.0


def test_eval_without_rate_reports_unknown():
    _, err = series([1, 1]).eval_with_bound(0.3)
    assert err == math.inf


def test_eval_rejects_boundary():
    with pytest.raises(ValueError):
        series([1, 1]).eval_with_bound(1.0)
    with pytest.raises(ValueError):
        series([1, 1]).eval_with_bound(1.2 * 1j)


# -- circle minima ----------------------------------------------------------------------------


def test_min_re_constant():
    assert min_re_on_circle(TruncatedSeries.constant(1.0, 4), 0.7) == 1.0


def test_min_re_half_plane_map():
    # (1+z)/(1-z) restricted to |z| = r has minimal real part (1-r)/(1+r).
    order = 64
    coeffs = np.full(order + 1, 2.0, dtype=np.complex128)
    coeffs[0] = 1.0
    half_plane = TruncatedSeries(coeffs, tail_bound_rate=2.0)
    got = min_re_on_circle(half_plane, 0.5)
    assert got == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_min_re_validates_inputs():
    s = series([1, 1])
    with pytest.raises(ValueError):
        min_re_on_circle(s, 1.0)
    with pytest.raises(ValueError):
        min_re_on_circle(s, 0.5, grid=4)


def test_min_re_full_sum_matches_cutoff():
    coeffs = np.full(257, 2.0, dtype=np.complex128)
    coeffs[0] = 1.0
    s = TruncatedSeries(coeffs, tail_bound_rate=2.0)
    fast = min_re_on_circle(s, 0.4)
    exact = min_re_on_circle(s, 0.4, cutoff_tol=0.0)
    assert abs(fast - exact) < 1e-13


# -- order selection -----------------------------------------------------------------------------


def test_order_for_budget_satisfies_budget():
    for rate, r, budget in [(2.0, 0.9, 1e-8), (6.0, 0.999, 1e-4), (1.0, 0.5, 1e-12)]:
        n = order_for_budget(rate, r, budget)
        assert rate * r ** (n + 1) / (1 - r) <= budget
        if n > 0:
            assert rate * r ** n / (1 - r) > budget


def test_order_for_budget_edge_cases():
    assert order_for_budget(0.0, 0.9, 1e-8) == 0
    assert order_for_budget(2.0, 0.0, 1e-8) == 0
    with pytest.raises(ValueError):
        order_for_budget(1.0, 1.0, 1e-8)
    with pytest.raises(ValueError):
        order_for_budget(1.0, 0.5, 0.0)


# -- algebraic properties -------------------------------------------------------------------------


def _scale(*parts) -> float:
    product = 1.0
    for p in parts:
        product *= float(np.sum(np.abs(p.coeffs)))
    return max(1.0, product)


@given(small_series(), small_series())
def test_add_mul_commute(a, b):
    assert max_diff(a + b, b + a) == 0.0
    assert max_diff(a * b, b * a) <= 1e-14 * _scale(a, b)


@given(small_series(), small_series(), small_series())
def test_associativity(a, b, c):
    assert max_diff((a + b) + c, a + (b + c)) <= 1e-14 * _scale(a, b, c)
    assert max_diff((a * b) * c, a * (b * c)) <= 1e-14 * _scale(a, b, c)


@given(small_series(), small_series(), small_series())
def test_mul_distributes_over_add(a, b, c):
    assert max_diff(a * (b + c), a * b + a * c) <= 1e-13 * _scale(a, b, c)


@given(small_series(), small_series())
def test_leibniz_rule(a, b):
    lhs = (a * b).z_derivative()
    rhs = a.z_derivative() * b + a * b.z_derivative()
    bound = 1e-12 * _scale(a, b) * (min(a.order, b.order) + 1)
    assert max_diff(lhs, rhs) <= bound


@given(zero_free_unit_series())
def test_exp_log_identity(a):
    assert max_diff(exp_unit(log_unit(a)), a) <= 1e-12


@given(zero_free_unit_series(), st.floats(0.25, 3.0))
def test_pow_inverse_pairs(a, alpha):
    product = pow_real(a, alpha) * pow_real(a, -alpha)
    assert max_diff(product, TruncatedSeries.constant(1.0, product.order)) <= 1e-12


@given(st.floats(0.0, 0.9), st.floats(0.0, 2 * math.pi))
def test_eval_bound_is_valid_for_geometric(r, theta):
    z = r * complex(math.cos(theta), math.sin(theta))
    geometric = TruncatedSeries(np.ones(33, dtype=np.complex128), tail_bound_rate=1.0)
    value, err = geometric.eval_with_bound(z)
    assert abs(value - 1.0 / (1.0 - z)) <= err + 1e-13
