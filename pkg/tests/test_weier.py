"""q-series evaluators for wp, wp', zeta: guards, anchors, lattice oracles."""

import math

import pytest

from wpfield.eisenstein import invariants_at
from wpfield.errors import ConvergenceDomain, PoleProximity
from wpfield.weier import (
    half_periods,
    wp_lattice_oracle,
    wp_prime_q,
    wp_q,
    wp_second_derivative,
    zeta_lattice_oracle,
    zeta_q,
)

# Frozen from the radius-400 lattice-sum oracle (truncation error ~1e-6).
WP_I = complex(0.0, -6.875186597320904)  # wp(i; 0.25+0.25i)
ZE_I = complex(2.0964268756017965, -2.0964268756017965)  # zeta(i; 0.25+0.25i)
WP_A = complex(-2.599328085769629, -0.47147390586453364)  # wp(0.3+1.7i; 0.4+0.6i)
ZE_A = complex(1.4029267887593695, -1.0468238202589064)  # zeta(0.3+1.7i; 0.4+0.6i)


def test_wp_frozen_oracle_values():
    assert abs(wp_q(1j, 0.25 + 0.25j).value - WP_I) < 1e-5
    assert abs(wp_q(complex(0.3, 1.7), complex(0.4, 0.6)).value - WP_A) < 1e-5


def test_zeta_frozen_oracle_values():
    assert abs(zeta_q(1j, 0.25 + 0.25j).value - ZE_I) < 1e-5
    assert abs(zeta_q(complex(0.3, 1.7), complex(0.4, 0.6)).value - ZE_A) < 1e-5


def test_wp_live_oracle_cross_check():
    for tau, z in ((1j, 0.25 + 0.25j), (complex(-0.2, 1.3), complex(0.6, 0.4))):
        direct = wp_lattice_oracle(tau, z, 100)
        assert abs(direct - wp_q(tau, z).value) < 1e-4


def test_zeta_live_oracle_cross_check():
    for tau, z in ((1j, 0.25 + 0.25j), (complex(-0.2, 1.3), complex(0.6, 0.4))):
        direct = zeta_lattice_oracle(tau, z, 100)
        assert abs(direct - zeta_q(tau, z).value) < 1e-4


def test_ode_at_sample_point():
    tau, z = 1j, 0.25 + 0.25j
    inv = invariants_at(tau)
    p = wp_q(tau, z).value
    pp = wp_prime_q(tau, z).value
    assert abs(pp * pp - (4.0 * p**3 - inv.g2 * p - inv.g3)) < 1e-10


def test_wp_is_even_and_zeta_is_odd():
    tau, z = 1j, 0.25 + 0.17j
    assert abs(wp_q(tau, -z).value - wp_q(tau, z).value) < 1e-12
    assert abs(zeta_q(tau, -z).value + zeta_q(tau, z).value) < 1e-12


def test_sine_limit_far_in_the_cusp():
    # for tau = 30i the lattice is effectively Z and wp collapses to the
    # trigonometric function pi^2/sin^2(pi z) - pi^2/3
    for x in (0.1, 0.25, 0.5, 0.75, 0.9):
        limit = math.pi**2 / math.sin(math.pi * x) ** 2 - math.pi**2 / 3.0
        assert abs(wp_q(30j, x).value - limit) < 1e-10


def test_principal_part_via_oracle():
    # wp(z) ~ 1/z^2 near the origin; the q-route is pole-guarded there, so the
    # lattice sum provides the values
    for eps, tol in ((1e-2, 1e-6), (1e-3, 1e-10)):
        v = wp_lattice_oracle(1j, eps, 400)
        assert abs(v * eps * eps - 1.0) < tol


def test_wp_prime_branch_near_origin():
    # Laurent expansion: wp' = -2/z^3 + g2 z/10 + g2^2 z^5/200 + ... (g3(i) = 0);
    # fixes the sign convention of the odd function wp'
    z = 0.05
    g2 = invariants_at(1j).g2.real
    expected = -2.0 / z**3 + g2 * z / 10.0 + g2**2 * z**5 / 200.0
    got = wp_prime_q(1j, z).value
    assert got.real < 0
    assert abs(got - expected) < 1e-8


def test_wp_second_derivative_matches_finite_difference():
    tau, z, h = 1j, 0.31 + 0.22j, 1e-4
    fd = (wp_prime_q(tau, z + h).value - wp_prime_q(tau, z - h).value) / (2.0 * h)
    assert abs(wp_second_derivative(tau, z) - fd) < 1e-4


def test_half_periods_square_lattice():
    hp = half_periods(1j)
    g2 = invariants_at(1j).g2
    assert abs(hp.e1 + hp.e2 + hp.e3) < 1e-12
    assert abs(hp.e3) < 1e-12  # the (1+tau)/2 value vanishes on the square lattice
    assert abs(hp.e1 - math.sqrt(g2.real) / 2.0) < 1e-12
    assert abs(hp.e1 + hp.e2) < 1e-12


def test_wp_prime_vanishes_at_half_periods():
    for w in (0.5, 0.5j + 0.5, 1j * 0.5):
        assert abs(wp_prime_q(1j, w).value) < 1e-12


def test_half_period_symmetric_functions():
    tau = complex(0.2, 1.4)
    hp = half_periods(tau)
    inv = invariants_at(tau)
    sym2 = hp.e1 * hp.e2 + hp.e1 * hp.e3 + hp.e2 * hp.e3
    assert abs(-4.0 * sym2 - inv.g2) < 1e-10
    assert abs(4.0 * hp.e1 * hp.e2 * hp.e3 - inv.g3) < 1e-10


def test_pole_guard():
    with pytest.raises(PoleProximity):
        wp_q(1j, 1e-6)
    with pytest.raises(PoleProximity):
        zeta_q(1j, 1.0 + 1j + 1e-7)


def test_convergence_guard_far_below_the_cell():
    with pytest.raises(ConvergenceDomain):
        wp_q(1j, complex(0.5, -2.2))
    with pytest.raises(ConvergenceDomain):
        wp_q(1j, complex(0.5, 2.2) + 2j)


def test_est_error_floor_and_sanity():
    res = wp_q(1j, 0.25 + 0.25j)
    assert res.est_error >= 1e-12
    assert res.est_error < 1e-9
    # the estimate really does bound the distance to the oracle value up to the
    # oracle's own truncation error
    assert abs(res.value - WP_I) < res.est_error + 1e-5


def test_est_error_inflates_near_pole():
    far = wp_q(1j, 0.5 + 0.5j).est_error
    near = wp_q(1j, 0.002).est_error
    assert near > far


def test_oracle_radius_validation():
    with pytest.raises(ValueError):
        wp_lattice_oracle(1j, 0.25, 10)
    with pytest.raises(ValueError):
        zeta_lattice_oracle(1j, 0.25, 49)


def test_oracle_pole_guard():
    with pytest.raises(PoleProximity):
        wp_lattice_oracle(1j, 1e-9, 60)
