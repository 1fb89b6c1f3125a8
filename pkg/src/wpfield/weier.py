"""q-series evaluation of wp, wp', zeta, half periods, and lattice-sum oracles.

With q = exp(2*pi*i*tau) and u = exp(2*pi*i*z):

    wp(tau; z)  = (2*pi*i)^2 [ sum_{m in Z} u q^m / (1 - u q^m)^2
                               + 1/12 - 2 sum_{m >= 1} q^m / (1 - q^m)^2 ]
    wp'(tau; z) = (2*pi*i)^3   sum_{m in Z} u q^m (1 + u q^m) / (1 - u q^m)^3
    zeta(tau;z) = 2*pi*i [ sum_{n >= 0} -q^n u / (1 - q^n u)
                           + sum_{n >= 1} (q^n / u) / (1 - q^n / u) ]
                  + eta1 * z - pi*i

The m < 0 halves are folded onto positive powers of q (substitute v = q^|m|/u),
which keeps every stored term below 1 in magnitude; wp' picks up a minus sign on
the folded half, so no square root or branch choice ever enters.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_POLICY,
    TWO_PI_I,
    ensure_finite,
    lattice_distance,
    nome,
    require_upper_half,
)
from .eisenstein import DEFAULT_TRUNCATION, QTruncation, eisenstein_at, invariants_at
from .errors import ConvergenceDomain, PoleProximity

_MACHINE = 1e-15


@dataclass(frozen=True)
class WValue:
    """An evaluated function value with a conservative accuracy estimate."""

    value: complex
    est_error: float


@dataclass(frozen=True)
class HalfPeriodData:
    """wp at the three half periods 1/2, tau/2, (1+tau)/2."""

    e1: complex
    e2: complex
    e3: complex


def _geometric_tail(first: float, ratio: float, pole_power: int) -> float:
    """Bound sum_{j>=0} t_j where t_j <= first*ratio^j / (1-first*ratio^j)^pole_power."""
    if first >= 1.0 or ratio >= 1.0:
        return math.inf
    return first / ((1.0 - first) ** pole_power * (1.0 - ratio))


def _series_guards(
    tau: complex, z: complex, pole_guard: float
) -> tuple[complex, complex]:
    tau = require_upper_half(tau)
    z = complex(z)
    dist = lattice_distance(tau, z)
    if dist < pole_guard:
        raise PoleProximity(
            f"z = {z} is within {dist:.3e} of the lattice (guard {pole_guard:.1e})"
        )
    q = nome(tau)
    u = cmath.exp(TWO_PI_I * z)
    if abs(q * u) >= 1.0 or abs(q / u) >= 1.0:
        raise ConvergenceDomain(
            "need |q*u| < 1 and |q/u| < 1; reduce z into the period cell first"
        )
    return q, u


def wp_q(
    tau: complex,
    z: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> WValue:
    """Weierstrass wp via the q-series; intended for reduced tau and z in the cell."""
    q, u = _series_guards(tau, z, pole_guard)
    n_terms = trunc.order
    w = u
    total = w / (1.0 - w) ** 2  # m = 0
    qm = 1.0 + 0.0j
    for _ in range(1, n_terms + 1):
        qm *= q
        w = u * qm
        total += w / (1.0 - w) ** 2
        v = qm / u
        total += v / (1.0 - v) ** 2
        total -= 2.0 * qm / (1.0 - qm) ** 2
    total += 1.0 / 12.0
    value = ensure_finite(TWO_PI_I**2 * total, "wp")

    qa, ua = abs(q), abs(u)
    first = qa ** (n_terms + 1)
    tail = (2.0 * math.pi) ** 2 * (
        _geometric_tail(first * ua, qa, 2)
        + _geometric_tail(first / ua, qa, 2)
        + 2.0 * _geometric_tail(first, qa, 2)
    )
    dist = max(lattice_distance(tau, z), 1e-300)
    est = max(tail + _MACHINE * (1.0 + abs(value)) * max(1.0, 0.01 / dist),
              DEFAULT_POLICY.series_tail_bound)
    return WValue(value=value, est_error=est)


def wp_prime_q(
    tau: complex,
    z: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> WValue:
    """d(wp)/dz via the term-wise derivative of the wp series (branch-free)."""
    q, u = _series_guards(tau, z, pole_guard)
    n_terms = trunc.order
    w = u
    total = w * (1.0 + w) / (1.0 - w) ** 3  # m = 0
    qm = 1.0 + 0.0j
    for _ in range(1, n_terms + 1):
        qm *= q
        w = u * qm
        total += w * (1.0 + w) / (1.0 - w) ** 3
        v = qm / u
        total -= v * (1.0 + v) / (1.0 - v) ** 3  # folded half flips sign
    value = ensure_finite(TWO_PI_I**3 * total, "wp'")

    qa, ua = abs(q), abs(u)
    first = qa ** (n_terms + 1)
    tail = (2.0 * math.pi) ** 3 * 2.0 * (
        _geometric_tail(first * ua, qa, 3) + _geometric_tail(first / ua, qa, 3)
    )
    dist = max(lattice_distance(tau, z), 1e-300)
    est = max(tail + _MACHINE * (1.0 + abs(value)) * max(1.0, 0.01 / dist),
              DEFAULT_POLICY.series_tail_bound)
    return WValue(value=value, est_error=est)


def zeta_q(
    tau: complex,
    z: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> WValue:
    """Weierstrass zeta via the q-series plus the eta1*z - pi*i tail.

    eta1 comes from the same q-data as E2: eta1 = (pi^2/3) E2(tau).
    """
    q, u = _series_guards(tau, z, pole_guard)
    n_terms = trunc.order
    total = -u / (1.0 - u)  # n = 0 term of the u-sum
    qm = 1.0 + 0.0j
    for _ in range(1, n_terms + 1):
        qm *= q
        w = u * qm
        total -= w / (1.0 - w)
        v = qm / u
        total += v / (1.0 - v)
    eta1 = (math.pi**2 / 3.0) * eisenstein_at(tau, trunc).e2
    value = ensure_finite(TWO_PI_I * total + eta1 * z - 1j * math.pi, "zeta")

    qa, ua = abs(q), abs(u)
    first = qa ** (n_terms + 1)
    tail = 2.0 * math.pi * (
        _geometric_tail(first * ua, qa, 1) + _geometric_tail(first / ua, qa, 1)
    )
    dist = max(lattice_distance(tau, z), 1e-300)
    est = max(tail + _MACHINE * (1.0 + abs(value)) * max(1.0, 0.01 / dist),
              DEFAULT_POLICY.series_tail_bound)
    return WValue(value=value, est_error=est)


def half_periods(
    tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION
) -> HalfPeriodData:
    """e1 = wp(1/2), e2 = wp(tau/2), e3 = wp((1+tau)/2); the roots of
    4 t^3 - g2 t - g3, so e1 + e2 + e3 = 0."""
    tau = require_upper_half(tau)
    e1 = wp_q(tau, 0.5, trunc).value
    e2 = wp_q(tau, tau / 2.0, trunc).value
    e3 = wp_q(tau, (1.0 + tau) / 2.0, trunc).value
    return HalfPeriodData(e1=e1, e2=e2, e3=e3)


def wp_second_derivative(tau: complex, z: complex, trunc: QTruncation = DEFAULT_TRUNCATION) -> complex:
    """wp'' = 6 wp^2 - g2/2, differentiating the cubic ODE once."""
    p = wp_q(tau, z, trunc).value
    g2 = invariants_at(tau, trunc).g2
    return 6.0 * p * p - 0.5 * g2


def _lattice_points(tau: complex, radius: int) -> np.ndarray:
    ms = np.arange(-radius, radius + 1)
    m_grid, n_grid = np.meshgrid(ms, ms, indexing="ij")
    mask = (m_grid != 0) | (n_grid != 0)
    return m_grid[mask] + n_grid[mask] * complex(tau)


def wp_lattice_oracle(
    tau: complex,
    z: complex,
    radius: int,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> complex:
    """Direct lattice sum 1/z^2 + sum' [1/(z-w)^2 - 1/w^2], truncated at
    max(|m|, |n|) <= radius.  Slow; error O(1/radius).  Cross-check only."""
    tau = require_upper_half(tau)
    z = complex(z)
    if radius < 50:
        raise ValueError(f"radius must be >= 50, got {radius}")
    if lattice_distance(tau, z) < pole_guard:
        raise PoleProximity(f"z = {z} too close to the lattice for the oracle")
    omega = _lattice_points(tau, radius)
    total = np.sum((z - omega) ** (-2) - omega ** (-2))
    return ensure_finite(complex(total) + 1.0 / z**2, "wp oracle")


def zeta_lattice_oracle(
    tau: complex,
    z: complex,
    radius: int,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> complex:
    """Direct lattice sum 1/z + sum' [1/(z-w) + 1/w + z/w^2]; error O(1/radius)."""
    tau = require_upper_half(tau)
    z = complex(z)
    if radius < 50:
        raise ValueError(f"radius must be >= 50, got {radius}")
    if lattice_distance(tau, z) < pole_guard:
        raise PoleProximity(f"z = {z} too close to the lattice for the oracle")
    omega = _lattice_points(tau, radius)
    total = np.sum(1.0 / (z - omega) + 1.0 / omega + z / omega**2)
    return ensure_finite(complex(total) + 1.0 / z, "zeta oracle")
