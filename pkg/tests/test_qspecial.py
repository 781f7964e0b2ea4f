"""q-special function layer: examples against direct oracles, invariants."""

import cmath

import numpy as np
import pytest

from ybe_forge.errors import CapExceeded, DivergentBase, PoleHit, ZeroArgument
from ybe_forge.qspecial import (TruncationPolicy, basic_hypergeometric,
                                connection_formula_residual, exp_q, exp_q_inv,
                                exp_q_series, frac_pow, phi21, qnum,
                                qpoch_finite, qpoch_inf, scalar_f6v,
                                scalar_f6v_expsum, scalar_fq_hexagon,
                                scalar_fq_hexagon_expsum, scalar_phi_twist,
                                scalar_rho8v, theta_q)

RNG = np.random.default_rng(20260810)


def test_qpoch_finite_empty_product():
    assert qpoch_finite(0.7, 0.4, 0) == 1.0


def test_qpoch_finite_two_factors():
    assert qpoch_finite(0.5, 0.5, 2) == pytest.approx((1 - 0.5) * (1 - 0.25))
    assert qpoch_finite(0.5, 0.5, 2) == pytest.approx(0.375)


def test_qpoch_finite_direct_product_oracle():
    a, q, k = 0.3, 0.5, 5
    oracle = 1.0
    for l in range(k):
        oracle *= 1 - a * q**l
    assert qpoch_finite(a, q, k) == pytest.approx(oracle, rel=1e-14)


def test_qpoch_inf_zero_argument_is_one():
    assert qpoch_inf([0.0], [0.5]).value == 1.0


def test_qpoch_inf_direct_depth50_oracle():
    oracle = 1.0
    for l in range(50):
        oracle *= 1 - 0.5 * 0.1**l
    got = qpoch_inf([0.5], [0.1])
    assert got.value == pytest.approx(oracle, rel=1e-14)
    assert got.tail_bound < 1e-13


def test_qpoch_inf_ratio_equals_exp_sum_f():
    u, q = 0.2, 0.4
    lhs = (qpoch_inf([u, q**4 * u], [q**4]).value
           / qpoch_inf([q**2 * u], [q**4]).value ** 2)
    assert lhs == pytest.approx(scalar_f6v_expsum(u, q).value, abs=1e-12)


def test_qpoch_inf_divergent_base():
    with pytest.raises(DivergentBase):
        qpoch_inf([0.5], [1.0])


def test_qpoch_inf_cap_exceeded():
    with pytest.raises(CapExceeded):
        qpoch_inf([0.5], [0.99999], TruncationPolicy(max_terms=4, tail_tolerance=1e-15,
                                                     hard_cap=10))


def test_qpoch_inf_two_bases_matches_iterated_single_base():
    z, b1, b2 = 0.3, 0.25, 0.4
    oracle = 1.0
    for l1 in range(80):
        for l2 in range(80):
            oracle *= 1 - z * b1**l1 * b2**l2
    assert qpoch_inf([z], [b1, b2]).value == pytest.approx(oracle, rel=1e-13)


def test_theta_contains_vanishing_factor():
    assert abs(theta_q(0.3, 0.3).value) < 1e-14


def test_theta_symmetry():
    z, q = 0.4, 0.25
    assert theta_q(z, q).value == pytest.approx(theta_q(q / z, q).value, rel=1e-13)


def test_theta_quasi_periodicity():
    z, q = 0.7 + 0.1j, 0.2
    got = theta_q(q * z, q).value + theta_q(z, q).value / z
    assert abs(got) < 1e-14


def test_theta_zero_argument():
    with pytest.raises(ZeroArgument):
        theta_q(0.0, 0.3)


def test_exp_q_at_zero():
    assert exp_q(0.0, 0.4).value == pytest.approx(1.0)


def test_exp_q_times_inverse_is_one():
    z, q = 1.3, 0.35
    assert exp_q(z, q).value * exp_q_inv(z, q).value == pytest.approx(1.0, abs=1e-13)


def test_exp_q_series_vs_product():
    z, q = 0.5, 0.4
    assert exp_q(z, q).value == pytest.approx(exp_q_series(z, q).value, rel=1e-13)


def test_exp_q_pole():
    q = 0.5
    with pytest.raises(PoleHit):
        exp_q(1.0 / (1 - q * q), q)


def test_hypergeometric_at_zero_argument():
    assert basic_hypergeometric([0.2, 0.9], [0.5], 0.4, 0.0).value == 1.0
    assert basic_hypergeometric([], [0.5], 0.4, 0.0).value == 1.0


def test_hypergeometric_series_term_oracle():
    a, b, c, q, z = 0.2, 0.3, 0.5, 0.4, 0.1
    total = 0.0
    for k in range(60):
        total += (qpoch_finite(a, q, k) * qpoch_finite(b, q, k)
                  / (qpoch_finite(q, q, k) * qpoch_finite(c, q, k)) * z**k)
    assert phi21(a, b, c, q, z) == pytest.approx(total, rel=1e-13)


def test_hypergeometric_three_term_relation():
    a, b, c, q, z = 0.2, 0.3, 0.5, 0.4, 0.1
    f0, f1, f2 = (phi21(a, b, c, q, s * z) for s in (1, q, q * q))
    resid = (1 - z) * f0 + ((a + b) * z - c / q - 1) * f1 + (c / q - a * b * z) * f2
    assert abs(resid) < 1e-10


def test_lower_parameter_pairing_identity():
    a, q, z = 0.3, 0.5, 0.2
    lhs = basic_hypergeometric([], [a], q, a * z).value
    rhs = qpoch_inf([z], [q * q]).value * phi21(-q * a, -a, a * a, q * q, z)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_hypergeometric_forbidden_lower_parameter():
    with pytest.raises(PoleHit):
        basic_hypergeometric([0.2], [1.0], 0.4, 0.1)
    with pytest.raises(PoleHit):
        basic_hypergeometric([0.2], [0.4 ** (-2)], 0.4, 0.1)


def test_connection_formula_spec_points():
    assert connection_formula_residual(0.2, 0.3, 0.7, 0.4, 0.5) < 1e-9
    assert connection_formula_residual(0.1, 0.5, 0.9, 0.3, 0.4 + 0.2j) < 1e-9


def test_connection_formula_degenerate_pair():
    with pytest.raises(PoleHit):
        connection_formula_residual(0.3, 0.3, 0.7, 0.4, 0.5)


def test_connection_formula_sample():
    count = 0
    while count < 50:
        a, b = RNG.uniform(0.05, 0.45), RNG.uniform(0.5, 0.9)
        c = RNG.uniform(0.1, 0.95)
        q = RNG.uniform(0.15, 0.55)
        z = RNG.uniform(0.2, 0.9) * cmath.exp(1j * RNG.uniform(0, 2 * np.pi))
        try:
            assert connection_formula_residual(a, b, c, q, z) < 1e-9
        except PoleHit:
            continue
        count += 1


def test_three_term_relation_random_sample():
    for _ in range(100):
        a, b = RNG.uniform(0.05, 0.9, 2)
        c, q = RNG.uniform(0.1, 0.9), RNG.uniform(0.1, 0.6)
        z = RNG.uniform(0.05, 0.7) * cmath.exp(1j * RNG.uniform(0, 2 * np.pi))
        f0, f1, f2 = (phi21(a, b, c, q, s * z) for s in (1, q, q * q))
        resid = (1 - z) * f0 + ((a + b) * z - c / q - 1) * f1 + (c / q - a * b * z) * f2
        assert abs(resid) / max(abs(f0), 1.0) < 1e-10


def test_scalar_zero_argument_values():
    assert scalar_f6v(0.0, 0.4).value == pytest.approx(1.0)
    assert scalar_phi_twist(0.0, 0.3, 0.4).value == pytest.approx(1.0)


def test_scalar_f6v_product_vs_exp_sum():
    u, q = 0.2, 0.4
    assert scalar_f6v(u, q).value == pytest.approx(scalar_f6v_expsum(u, q).value,
                                                   abs=1e-10)


def test_scalar_rho_corner_identity():
    # rho ties the 6-vertex and twist scalars together: f(z) phi(z) = phi(1/z) rho(z)
    z, p, q = 0.5, 0.2, 0.45
    lhs = scalar_f6v(z, q).value * scalar_phi_twist(z, p, q).value
    rhs = scalar_phi_twist(1 / z, p, q).value * scalar_rho8v(z, p, q).value
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_scalar_fq_rank1_exp_sum():
    z, q, r = 0.1, 0.3, 1
    total = 0.0
    for k in range(1, 30):
        total += q**k * qnum(k, q) * z**k / (k * qnum(2 * k, q))
    assert scalar_fq_hexagon(z, q, r).value == pytest.approx(cmath.exp(total),
                                                             rel=1e-12)


def test_scalar_fq_product_vs_exp_sum_general_rank():
    for r in (1, 2, 3):
        z, q = 0.15, 0.35
        assert scalar_fq_hexagon(z, q, r).value == pytest.approx(
            scalar_fq_hexagon_expsum(z, q, r).value, rel=1e-12)


def test_tail_bound_monotone_under_tightening():
    bounds = []
    for tol in (1e-6, 1e-9, 1e-12, 1e-15):
        pol = TruncationPolicy(max_terms=512, tail_tolerance=tol, hard_cap=20000)
        bounds.append(qpoch_inf([0.5], [0.5], pol).tail_bound)
    assert all(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:]))


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(max_terms=0)
    with pytest.raises(ValueError):
        TruncationPolicy(max_terms=100, hard_cap=10)
    with pytest.raises(ValueError):
        TruncationPolicy(tail_tolerance=-1.0)


def test_frac_pow_principal_branch():
    assert frac_pow(4.0, 1, 2) == pytest.approx(2.0)
    val = frac_pow(-1.0 + 0j, 1, 2)
    assert val.imag > 0  # argument in (-pi, pi]
    assert frac_pow(0.3, 1, 8) ** 8 == pytest.approx(0.3)
