"""SL(2,Z) reduction of tau, cell reduction of z, and evaluate-anywhere wrappers.

Reduction moves (tau, z) into the region where the q-series converge fast, and
the value is transported back with the weight of the function:

    wp(tau; z)  = s^-2 wp(tau*; z/s)        s = c*tau + d, tau* = (a*tau+b)/s
    wp'(tau; z) = s^-3 wp'(tau*; z/s)
    zeta(tau;z) = s^-1 [zeta(tau*; z*) + m*eta1(tau*) + n*eta2(tau*)]

where z/s = z* + m + n*tau* and eta1 = 2 zeta(tau*; 1/2),
eta2 = 2 zeta(tau*; tau*/2).  E2 inverts the quasimodular law

    G2(gamma tau) = s^2 G2(tau) - pi*i*c*s,      G2 = zeta(2) E2,

and E4, E6 transport with weights 4 and 6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    DEFAULT_POLICY,
    coords_wrt_lattice,
    ensure_finite,
    lattice_distance,
    require_upper_half,
)
from .eisenstein import (
    DEFAULT_TRUNCATION,
    ZETA2,
    LatticeInvariants,
    QTruncation,
    eisenstein_at,
)
from .errors import DegenerateConfiguration, NonTermination, PoleProximity
from .weier import WValue, wp_prime_q, wp_q, zeta_q

_MAX_REDUCTION_STEPS = 10_000
_CIRCLE_EPS = 1e-12


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer matrix (a b; c d) with determinant one, acting by Mobius maps."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1: {self}")

    @classmethod
    def identity(cls) -> "UnimodularMatrix":
        return cls(1, 0, 0, 1)

    @classmethod
    def inversion(cls) -> "UnimodularMatrix":
        """S: tau -> -1/tau."""
        return cls(0, -1, 1, 0)

    @classmethod
    def translation(cls, k: int) -> "UnimodularMatrix":
        """T^k: tau -> tau + k."""
        return cls(1, k, 0, 1)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def mobius(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def scale(self, tau: complex) -> complex:
        """The transport factor c*tau + d."""
        return self.c * tau + self.d


@dataclass(frozen=True)
class ReductionResult:
    gamma: UnimodularMatrix
    tau_star: complex
    m: int
    n: int
    z_star: complex | None
    scale: complex


def reduce_tau(tau: complex) -> tuple[UnimodularMatrix, complex]:
    """Reduce tau into the fundamental domain |tau| >= 1, -1/2 <= Re < 1/2.

    Boundary tie-break: points with |tau| = 1 and Re(tau) > 0 get one more
    inversion, so the canonical representative has Re <= 0 on the unit circle.
    Returns (gamma, tau*) with tau* = gamma(tau).
    """
    cur = require_upper_half(tau)
    gamma = UnimodularMatrix.identity()
    for _ in range(_MAX_REDUCTION_STEPS):
        k = math.floor(cur.real + 0.5)
        if k != 0:
            cur = cur - k
            gamma = UnimodularMatrix.translation(-k) @ gamma
        norm2 = cur.real * cur.real + cur.imag * cur.imag
        if norm2 < 1.0 - _CIRCLE_EPS:
            cur = -1.0 / cur
            gamma = UnimodularMatrix.inversion() @ gamma
            continue
        if norm2 <= 1.0 + _CIRCLE_EPS and cur.real > _CIRCLE_EPS:
            cur = -1.0 / cur
            gamma = UnimodularMatrix.inversion() @ gamma
        return gamma, cur
    raise NonTermination(f"tau reduction did not settle after {_MAX_REDUCTION_STEPS} steps")


def reduce_z(tau: complex, z: complex) -> tuple[int, int, complex]:
    """Split z = z* + m + n*tau with z* in the half-open period cell.

    Returns (m, n, z*): m strips integer multiples of 1, n of tau.
    """
    a, b = coords_wrt_lattice(tau, z)
    n = math.floor(a)
    m = math.floor(b)
    return m, n, z - m - n * tau


def reduce_point(tau: complex, z: complex | None = None) -> ReductionResult:
    """Full reduction: tau into the fundamental domain, then z/s into the cell."""
    gamma, tau_star = reduce_tau(tau)
    scale = gamma.scale(tau)
    if z is None:
        return ReductionResult(gamma, tau_star, 0, 0, None, scale)
    m, n, z_star = reduce_z(tau_star, complex(z) / scale)
    return ReductionResult(gamma, tau_star, m, n, z_star, scale)


def lattice_distance_anywhere(tau: complex, z: complex) -> float:
    """Distance from z to Z + tau*Z, computed in the reduced frame where the
    nearest-corner search is exact, then scaled back."""
    rr = reduce_point(tau, z)
    return lattice_distance(rr.tau_star, rr.z_star) * abs(rr.scale)


def _guard_pole(tau: complex, rr: ReductionResult, pole_guard: float) -> None:
    dist = lattice_distance(rr.tau_star, rr.z_star) * abs(rr.scale)
    if dist < pole_guard:
        raise PoleProximity(
            f"z within {dist:.3e} of the lattice of tau = {tau} (guard {pole_guard:.1e})"
        )


def wp_anywhere(
    tau: complex,
    z: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> WValue:
    """wp at any tau in the upper half-plane and any non-lattice z (weight 2)."""
    rr = reduce_point(tau, z)
    _guard_pole(tau, rr, pole_guard)
    inner = wp_q(rr.tau_star, rr.z_star, trunc, pole_guard=0.0)
    s2 = rr.scale * rr.scale
    value = ensure_finite(inner.value / s2, "wp")
    return WValue(value=value, est_error=inner.est_error / abs(s2))


def wp_prime_anywhere(
    tau: complex,
    z: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> WValue:
    """d(wp)/dz at any tau, z (weight 3)."""
    rr = reduce_point(tau, z)
    _guard_pole(tau, rr, pole_guard)
    inner = wp_prime_q(rr.tau_star, rr.z_star, trunc, pole_guard=0.0)
    s3 = rr.scale**3
    value = ensure_finite(inner.value / s3, "wp'")
    return WValue(value=value, est_error=inner.est_error / abs(s3))


def zeta_anywhere(
    tau: complex,
    z: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> WValue:
    """zeta at any tau, z: weight-1 transport plus quasi-period unwinding."""
    rr = reduce_point(tau, z)
    _guard_pole(tau, rr, pole_guard)
    ts = rr.tau_star
    inner = zeta_q(ts, rr.z_star, trunc, pole_guard=0.0)
    value = inner.value
    if rr.m != 0:
        value += rr.m * 2.0 * zeta_q(ts, 0.5, trunc).value
    if rr.n != 0:
        value += rr.n * 2.0 * zeta_q(ts, ts / 2.0, trunc).value
    value = ensure_finite(value / rr.scale, "zeta")
    est = (inner.est_error * (1.0 + abs(rr.m) + abs(rr.n))) / abs(rr.scale)
    return WValue(value=value, est_error=est)


def e2_anywhere(tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION) -> complex:
    """E2 at any tau by inverting the quasimodular transformation law."""
    gamma, tau_star = reduce_tau(tau)
    s = gamma.scale(tau)
    g2_star = ZETA2 * eisenstein_at(tau_star, trunc).e2
    g2_val = (g2_star + 1j * math.pi * gamma.c * s) / (s * s)
    return ensure_finite(g2_val / ZETA2, "E2")


def e4_anywhere(tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION) -> complex:
    """E4 at any tau (weight-4 modular transport)."""
    gamma, tau_star = reduce_tau(tau)
    s = gamma.scale(tau)
    return ensure_finite(eisenstein_at(tau_star, trunc).e4 / s**4, "E4")


def e6_anywhere(tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION) -> complex:
    """E6 at any tau (weight-6 modular transport)."""
    gamma, tau_star = reduce_tau(tau)
    s = gamma.scale(tau)
    return ensure_finite(eisenstein_at(tau_star, trunc).e6 / s**6, "E6")


def invariants_anywhere(
    tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION
) -> LatticeInvariants:
    """g2, g3, delta, eta1 at any tau, via the transported Eisenstein values."""
    e4 = e4_anywhere(tau, trunc)
    e6 = e6_anywhere(tau, trunc)
    g2 = (4.0 * math.pi**4 / 3.0) * e4
    g3 = (8.0 * math.pi**6 / 27.0) * e6
    delta = g2**3 - 27.0 * g3**2
    eta1 = (math.pi**2 / 3.0) * e2_anywhere(tau, trunc)
    return LatticeInvariants(g2=g2, g3=g3, delta=ensure_finite(delta, "delta"), eta1=eta1)


def wp_add(
    tau: complex,
    z1: complex,
    z2: complex,
    trunc: QTruncation = DEFAULT_TRUNCATION,
    *,
    pole_guard: float = DEFAULT_POLICY.pole_guard_radius,
) -> complex:
    """wp(z1 + z2) from values at z1 and z2 via the algebraic addition formula.

    Generic branch:  wp(z1+z2) = ((wp'(z1)-wp'(z2))/(wp(z1)-wp(z2)))^2 / 4
                                 - wp(z1) - wp(z2)
    Duplication (z1 = z2 mod lattice):
                     wp(2 z1)  = (wp''(z1) / (2 wp'(z1)))^2 - 2 wp(z1)
    with wp'' = 6 wp^2 - g2/2.  Raises DegenerateConfiguration when
    z1 + z2 lies on the lattice (the result would be the pole).
    """
    tau = require_upper_half(tau)
    if lattice_distance_anywhere(tau, z1 + z2) < pole_guard:
        raise DegenerateConfiguration("z1 + z2 is on (or nearly on) the lattice")
    p1 = wp_anywhere(tau, z1, trunc, pole_guard=pole_guard).value
    p2 = wp_anywhere(tau, z2, trunc, pole_guard=pole_guard).value
    same_point = (
        lattice_distance_anywhere(tau, z1 - z2) < 1e-6
        and abs(p1 - p2) < 1e-8 * max(1.0, abs(p1))
    )
    if same_point:
        pp = wp_prime_anywhere(tau, z1, trunc, pole_guard=pole_guard).value
        g2 = invariants_anywhere(tau, trunc).g2
        second = 6.0 * p1 * p1 - 0.5 * g2
        return ensure_finite((second / (2.0 * pp)) ** 2 - 2.0 * p1, "wp_add")
    pp1 = wp_prime_anywhere(tau, z1, trunc, pole_guard=pole_guard).value
    pp2 = wp_prime_anywhere(tau, z2, trunc, pole_guard=pole_guard).value
    slope = (pp1 - pp2) / (p1 - p2)
    return ensure_finite(0.25 * slope * slope - p1 - p2, "wp_add")
