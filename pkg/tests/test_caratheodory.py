import json
import math

import numpy as np
import pytest

from bbr.caratheodory import (
    AtomicMeasure,
    ClassParams,
    extremal_measure,
    extremal_pk,
    herglotz_series,
    mobius_kernel,
    pk_combination,
    random_pk_member,
)
from bbr.series import min_re_on_circle, order_for_budget


def max_diff(a, b) -> float:
    return float(np.max(np.abs(a.coeffs - b.coeffs)))


# -- parameter validation -----------------------------------------------------


def test_class_params_validation():
    ClassParams(2.0, 0.0)
    ClassParams(6.0, 0.75)
    with pytest.raises(ValueError):
        ClassParams(1.5, 0.0)
    with pytest.raises(ValueError):
        ClassParams(3.0, 1.0)
    with pytest.raises(ValueError):
        ClassParams(3.0, -0.1)


def test_measure_mass_validation():
    AtomicMeasure(((0.0, 1.0), (1.0, 1.0)))
    with pytest.raises(ValueError):
        AtomicMeasure(((0.0, 1.0), (1.0, 0.5)))


def test_measure_angle_canonicalization():
    m = AtomicMeasure(((2 * math.pi + 0.25, 2.0),))
    assert m.atoms[0][0] == pytest.approx(0.25, abs=1e-12)


def test_measure_variation_check():
    m = AtomicMeasure(((0.0, 3.0), (1.0, -1.0)))
    m.validate_for(ClassParams(4.0, 0.0))
    with pytest.raises(ValueError):
        m.validate_for(ClassParams(2.5, 0.0))


def test_measure_json_roundtrip():
    params = ClassParams(3.0, 0.25)
    m = AtomicMeasure(((0.5, 2.25), (4.0, -0.25)))
    blob = json.dumps(m.to_json_dict(params))
    back, back_params = AtomicMeasure.from_json_dict(json.loads(blob))
    assert back == m
    assert back_params == params


# -- kernel ----------------------------------------------------------------------


def test_kernel_at_angle_zero_is_half_plane_map():
    kernel = mobius_kernel(0.0, 0.0, 8)
    assert np.allclose(kernel.coeffs, [1] + [2] * 8, atol=0)
    assert kernel.tail_bound_rate == 2.0


def test_kernel_beta_half_unimodular_coefficients():
    s = 0.7
    kernel = mobius_kernel(0.5, s, 6)
    expected = [1.0] + [np.exp(-1j * l * s) for l in range(1, 7)]
    assert np.allclose(kernel.coeffs, expected, atol=1e-14)
    # as beta -> 1 every non-constant coefficient collapses
    nearly_one = mobius_kernel(1.0 - 1e-12, s, 6)
    assert np.max(np.abs(nearly_one.coeffs[1:])) < 3e-12


def test_kernel_at_angle_pi_alternates():
    kernel = mobius_kernel(0.0, math.pi, 8)
    expected = [1.0] + [2.0 * (-1.0) ** l for l in range(1, 9)]
    assert np.allclose(kernel.coeffs, expected, atol=1e-13)


def test_kernel_closed_form_values():
    beta, s = 0.25, 1.1
    kernel = mobius_kernel(beta, s, 64)
    for z in (0.3, 0.2 + 0.4j, -0.5j):
        value, err = kernel.eval_with_bound(z)
        w = z * np.exp(-1j * s)
        closed = (1 + (1 - 2 * beta) * w) / (1 - w)
        assert abs(value - closed) <= err + 1e-13


def test_kernel_validates_beta():
    with pytest.raises(ValueError):
        mobius_kernel(1.0, 0.0, 8)


# -- herglotz construction ------------------------------------------------------------


def test_single_atom_is_shifted_half_plane_map():
    beta = 0.3
    got = herglotz_series(AtomicMeasure(((0.0, 2.0),)), beta, 16)
    expected = [1.0] + [2 * (1 - beta)] * 16
    assert np.allclose(got.coeffs, expected, atol=1e-15)


def test_constant_term_exactly_one():
    series, _ = random_pk_member(ClassParams(3.7, 0.2), 7, 123, 16)
    assert series.coeffs[0] == 1.0


def test_two_atom_measure_matches_extremal():
    for params in (ClassParams(2.0, 0.0), ClassParams(4.0, 0.25), ClassParams(6.0, 0.75)):
        via_measure = herglotz_series(extremal_measure(params), params.beta, 64)
        direct = extremal_pk(params, 64)
        # The pi atom is a double, so each coefficient carries an angle
        # defect of about l * ulp(pi) * mass on top of plain roundoff.
        budget = 3.0 * (params.k + 2.0) * (1 - params.beta) * 64 * 2.3e-16
        assert max_diff(via_measure, direct) <= budget


def test_herglotz_rejects_wrong_mass():
    bad = AtomicMeasure.__new__(AtomicMeasure)
    object.__setattr__(bad, "atoms", ((0.0, 1.0),))
    with pytest.raises(ValueError):
        herglotz_series(bad, 0.0, 8)


def test_herglotz_tail_rate_is_total_variation_scaled():
    m = AtomicMeasure(((0.0, 2.5), (2.0, -0.5)))
    series = herglotz_series(m, 0.25, 8)
    assert series.tail_bound_rate == pytest.approx(0.75 * 3.0)


# -- extremal member --------------------------------------------------------------------


def test_extremal_k2_alternating():
    params = ClassParams(2.0, 0.25)
    member = extremal_pk(params, 8)
    expected = [1.0] + [2 * 0.75 * (-1.0) ** l for l in range(1, 9)]
    assert np.allclose(member.coeffs, expected, atol=0)


def test_extremal_k4_pattern():
    member = extremal_pk(ClassParams(4.0, 0.0), 4)
    assert np.array_equal(member.coeffs, [1, -4, 2, -4, 2])


def test_extremal_rate():
    assert extremal_pk(ClassParams(5.0, 0.5), 8).tail_bound_rate == 2.5


# -- combination ---------------------------------------------------------------------------


def test_combination_at_k2_returns_first():
    params = ClassParams(2.0, 0.1)
    p = mobius_kernel(0.1, 0.3, 16)
    q = mobius_kernel(0.1, 2.0, 16)
    assert max_diff(pk_combination(p, q, params), p) == 0.0


def test_combination_of_equal_inputs_is_identity():
    params = ClassParams(3.5, 0.0)
    p = mobius_kernel(0.0, 1.0, 16)
    out = pk_combination(p, p, params)
    assert max_diff(out, p) < 1e-15


def test_combination_of_rotated_kernels_is_extremal():
    params = ClassParams(4.0, 0.25)
    p = mobius_kernel(params.beta, math.pi, 32)
    q = mobius_kernel(params.beta, 0.0, 32)
    got = pk_combination(p, q, params)
    budget = 3.0 * (params.k + 2.0) * (1 - params.beta) * 32 * 2.3e-16
    assert max_diff(got, extremal_pk(params, 32)) <= budget


# -- random members ---------------------------------------------------------------------------


def test_random_member_invariants():
    for seed in range(12):
        params = ClassParams(2.0 + seed / 3.0, (seed % 4) / 5.0)
        series, measure = random_pk_member(params, 2 + seed % 5, seed, 32)
        assert abs(measure.total_mass - 2.0) < 1e-12
        assert measure.total_variation <= params.k + 1e-12
        assert series.coeffs[0] == 1.0
        assert np.max(np.abs(series.coeffs[1:])) <= params.coeff_bound + 1e-12


def test_random_member_seed_is_bit_reproducible():
    a_series, a_measure = random_pk_member(ClassParams(3.0, 0.25), 5, 42, 32)
    b_series, b_measure = random_pk_member(ClassParams(3.0, 0.25), 5, 42, 32)
    assert a_measure == b_measure
    assert np.array_equal(a_series.coeffs, b_series.coeffs)


def test_single_atom_member_is_rotated_kernel():
    series, measure = random_pk_member(ClassParams(2.0, 0.0), 1, 9, 16)
    assert len(measure.atoms) == 1
    s, w = measure.atoms[0]
    assert w == pytest.approx(2.0)
    assert max_diff(series, mobius_kernel(0.0, s, 16)) < 1e-12


def test_positive_members_respect_real_part_floor():
    # Nonnegative measures yield members with Re >= beta on every circle.
    for beta in (0.0, 0.25, 0.5, 0.75):
        params = ClassParams(2.0, beta)
        order = max(64, order_for_budget(2.0 * (1 - beta), 0.95, 1e-8))
        for seed in range(3):
            member, measure = random_pk_member(params, 4, seed, order)
            assert np.all(measure.weights() >= 0)
            for r in (0.3, 0.6, 0.9, 0.95):
                budget = member.tail_error(r) + 1e-9
                assert min_re_on_circle(member, r) >= beta - budget


def test_mixed_member_coefficient_bound_is_sharp_on_extremal():
    params = ClassParams(4.0, 0.25)
    member = extremal_pk(params, 16)
    assert np.max(np.abs(member.coeffs[1:])) == pytest.approx(params.coeff_bound)


def test_extremal_real_axis_curve_matches_closed_form():
    for params in (ClassParams(2.0, 0.0), ClassParams(4.0, 0.5), ClassParams(6.0, 0.75)):
        order = max(64, order_for_budget(params.coeff_bound, 0.95, 1e-9))
        member = extremal_pk(params, order)
        k, beta = params.k, params.beta
        for r in np.linspace(0.0, 0.95, 7):
            value, err = member.eval_with_bound(float(r))
            closed = ((1 - 2 * beta) * r * r - (1 - beta) * k * r + 1) / (1 - r * r)
            assert abs(value.real - closed) <= err + 1e-11
            assert abs(value.imag) <= err + 1e-11
