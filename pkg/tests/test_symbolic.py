"""Exact symbolic layer: arithmetic, derivative closure, serialization."""

import math

import pytest

from wpfield.errors import NearSingular
from wpfield.eisenstein import invariants_at
from wpfield.symbolic import (
    E2,
    E4,
    E6,
    I,
    ONE,
    PI,
    TAU,
    WP,
    WP1,
    Z,
    ZERO,
    ZETA,
    Expr,
    build_rule_table,
    default_rule_table,
    delta_expr,
    differentiate,
    eval_expr,
    expr_to_text,
    fd_check,
    g2_expr,
    g3_expr,
    parse_expr,
    rational,
)

TAU0 = complex(0.13, 1.21)
Z0 = complex(0.31, 0.42)


# --- arithmetic and normalization --------------------------------------------


def test_square_expands():
    assert (Z + ONE) ** 2 == Z * Z + rational(2) * Z + ONE


def test_power_zero_and_negative():
    assert WP**0 == ONE
    assert WP**-1 == ONE / WP
    # quotients are kept as-is (no gcd cancellation), so compare by difference
    assert ((WP**-2) * WP * WP - ONE).is_zero()


def test_subtraction_cancels():
    e = WP * WP1 - WP1 * WP
    assert e.is_zero()


def test_division_normalizes_leading_coefficient():
    a = (rational(2) * WP) / (rational(4) * WP1)
    b = WP / (rational(2) * WP1)
    assert a == b


def test_no_gcd_cancellation_but_numeric_agreement():
    # normalization is light: quotients are not reduced to lowest terms
    quot = (WP * WP - ONE) / (WP - ONE)
    plain = WP + ONE
    assert quot != plain
    diff = eval_expr(quot, TAU0, Z0) - eval_expr(plain, TAU0, Z0)
    assert abs(diff) < 1e-12


def test_structural_hash():
    assert len({Z + ONE, ONE + Z, Z + ONE}) == 1


def test_complex_rational_coefficients():
    e = (ONE + I) * (ONE - I)
    assert e == rational(2)


# --- differentiation ----------------------------------------------------------


def test_zeta_z_derivative_prints_exactly():
    assert expr_to_text(differentiate(ZETA, "z")) == "-(wp)"


def test_basic_z_rules():
    assert differentiate(Z, "z") == ONE
    assert differentiate(TAU, "z").is_zero()
    assert differentiate(WP, "z") == WP1
    assert differentiate(E4, "z").is_zero()
    assert differentiate(PI, "z").is_zero()


def test_wp1_z_rule_is_second_derivative():
    got = differentiate(WP1, "z")
    want = rational(6) * WP * WP - g2_expr() / rational(2)
    assert got == want


def test_ode_is_differentially_closed_in_z():
    ode = WP1**2 - (rational(4) * WP**3 - g2_expr() * WP - g3_expr())
    assert differentiate(ode, "z").is_zero()


def test_ode_tau_derivative_vanishes_numerically():
    # the full tau-derivative of the ODE defect need not normalize to the zero
    # polynomial, but it must vanish at every point of the surface
    ode = WP1**2 - (rational(4) * WP**3 - g2_expr() * WP - g3_expr())
    d = differentiate(ode, "tau")
    assert abs(eval_expr(d, TAU0, Z0)) < 1e-6
    assert abs(eval_expr(ode, TAU0, Z0)) < 1e-8


def test_mixed_partials_commute():
    dz_dt = differentiate(differentiate(WP, "tau"), "z")
    dt_dz = differentiate(differentiate(WP, "z"), "tau")
    assert dz_dt == dt_dz
    num = eval_expr(dz_dt, TAU0, Z0) - eval_expr(dt_dz, TAU0, Z0)
    assert abs(num) < 1e-12


def test_product_and_quotient_rules():
    e = (WP * ZETA) / E4
    d = differentiate(e, "z")
    # the quotient rule leaves an uncancelled E4/E4^2, so compare exactly by
    # cross-multiplied difference rather than by structure
    want = (WP1 * ZETA - WP * WP) / E4
    assert (d - want).is_zero()


@pytest.mark.parametrize("var", ["z", "tau"])
@pytest.mark.parametrize(
    "gen", [Z, TAU, WP, WP1, ZETA, E2, E4, E6], ids=lambda e: expr_to_text(e)
)
def test_fd_certificate_every_generator(gen, var):
    assert fd_check(gen, var, TAU0, Z0) < 1e-5


def test_fd_certificate_composite():
    e = (WP1 * ZETA + rational(3) * E2) / (WP + rational(5, 7))
    assert fd_check(e, "z", TAU0, Z0) < 1e-5
    assert fd_check(e, "tau", TAU0, Z0) < 1e-5


def test_fd_step_validation():
    with pytest.raises(ValueError):
        fd_check(WP, "z", TAU0, Z0, h=1e-2)
    with pytest.raises(ValueError):
        differentiate(WP, "x")


# --- invariants expressions ---------------------------------------------------


def test_invariant_expressions_match_numeric_bridges():
    inv = invariants_at(1j)
    assert abs(eval_expr(g2_expr(), 1j) - inv.g2) < 1e-10
    assert abs(eval_expr(g3_expr(), 1j) - inv.g3) < 1e-10
    assert abs(eval_expr(delta_expr(), 1j) - inv.delta) < 1e-9


def test_delta_equals_g2_cubed_at_i():
    # g3 vanishes on the square lattice, so delta(i) = g2(i)^3
    g2_val = eval_expr(g2_expr(), 1j)
    assert abs(eval_expr(delta_expr(), 1j) - g2_val**3) < 1e-9


# --- evaluation guards --------------------------------------------------------


def test_eval_requires_z_only_when_needed():
    assert abs(eval_expr(E2, 1j) - 3.0 / math.pi) < 1e-13
    assert abs(eval_expr(PI * I, 1j) - math.pi * 1j) < 1e-16
    with pytest.raises(ValueError):
        eval_expr(WP, 1j)


def test_near_singular_denominator():
    with pytest.raises(NearSingular):
        eval_expr(ONE / E6, 1j)  # E6(i) = 0


# --- serialization ------------------------------------------------------------


@pytest.mark.parametrize(
    "expr",
    [
        WP,
        -WP,
        ZERO,
        ONE,
        rational(-7, 3) * WP + I * ZETA,
        (WP1**2 - rational(4) * WP**3) / (E4 * E6 + rational(1, 2)),
        differentiate(WP, "tau"),
        differentiate(ZETA, "tau"),
        PI**3 * E2 - Z * TAU,
    ],
)
def test_round_trip(expr):
    assert parse_expr(expr_to_text(expr)) == expr


def test_parse_simple_forms():
    assert parse_expr("wp") == WP
    assert parse_expr("(wp+wp1)") == WP + WP1
    assert parse_expr("(3/4)") == rational(3, 4)
    assert parse_expr("wp^-2") == WP**-2
    assert parse_expr("-(wp)") == -WP
    assert parse_expr("(I*pi)") == I * PI


def test_parse_rejects_garbage():
    for bad in ("wp+", "(wp", "q", "wp^x", "2.5", ""):
        with pytest.raises(ValueError):
            parse_expr(bad)


# --- mutation sensitivity -----------------------------------------------------


def test_corrupted_ramanujan_rule_detected():
    bad = build_rule_table()
    bad["tau"] = tuple(
        rational(12, 13) * r if k == 5 else r for k, r in enumerate(bad["tau"])
    )
    residual = fd_check(E2, "tau", TAU0, rules=bad)
    assert residual > 1e-3
    # sanity: the pristine table stays correct
    assert fd_check(E2, "tau", TAU0) < 1e-5


def test_corrupted_zeta_sign_detected():
    bad = build_rule_table()
    bad["z"] = tuple(WP if k == 4 else r for k, r in enumerate(bad["z"]))
    assert fd_check(ZETA, "z", TAU0, Z0, rules=bad) > 1e-2


def test_corrupted_wp_tau_rule_detected():
    bad = build_rule_table()
    bad["tau"] = tuple(
        r + rational(1, 7) * WP if k == 2 else r for k, r in enumerate(bad["tau"])
    )
    assert fd_check(WP, "tau", TAU0, Z0, rules=bad) > 1e-3
