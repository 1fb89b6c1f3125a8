"""Eisenstein series E2, E4, E6, lattice invariants, and lattice-sum oracles.

The fast route is the normalized q-expansion

    E2 = 1 - 24 sum sigma_1(n) q^n
    E4 = 1 + 240 sum sigma_3(n) q^n
    E6 = 1 - 504 sum sigma_5(n) q^n

and the slow route is a direct sum over lattice points, kept deliberately
independent so the two can cross-check each other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import NOME_RADIUS, TWO_PI_I, ensure_finite, nome, require_upper_half
from .errors import ConvergenceDomain

# Below this height the default truncation no longer gives useful tails.
MIN_IM_TAU = 0.1

ZETA2 = math.pi**2 / 6.0
ZETA4 = math.pi**4 / 90.0
ZETA6 = math.pi**6 / 945.0


def sigma(n: int, k: int) -> int:
    """Divisor power sum sigma_k(n) by direct divisor enumeration."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
    return total


@lru_cache(maxsize=None)
def _sigma_table(order: int, k: int) -> tuple[int, ...]:
    return tuple(sigma(n, k) for n in range(1, order + 1))


def _power_series_tail(q_abs: float, order: int, degree: int, scale: float) -> float:
    """Bound scale * sum_{n > order} n**degree * q_abs**n by a geometric majorant."""
    if not 0.0 <= q_abs < 1.0:
        return math.inf
    ratio = q_abs * ((order + 2) / (order + 1)) ** degree
    if ratio >= 1.0:
        return math.inf
    first = scale * (order + 1) ** degree * q_abs ** (order + 1)
    return first / (1.0 - ratio)


@dataclass(frozen=True)
class QTruncation:
    """Truncation order for all q-expansions plus an a-priori tail bound.

    The bound covers the worst of the three Eisenstein series (the sigma_5 one,
    via sigma_5(n) <= n^6) for any |q| <= exp(-pi*sqrt(3)), i.e. for reduced tau.
    """

    order: int = 40
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("truncation order must be >= 1")
        if self.tail_bound == 0.0:
            bound = _power_series_tail(NOME_RADIUS, self.order, 6, 504.0)
            object.__setattr__(self, "tail_bound", bound)


DEFAULT_TRUNCATION = QTruncation()


@dataclass(frozen=True)
class EisensteinValues:
    e2: complex
    e4: complex
    e6: complex


@dataclass(frozen=True)
class LatticeInvariants:
    g2: complex
    g3: complex
    delta: complex
    eta1: complex


def _q_powers(q: complex, order: int) -> list[complex]:
    powers = [1.0 + 0.0j] * (order + 1)
    for n in range(1, order + 1):
        powers[n] = powers[n - 1] * q
    return powers


def eisenstein_at(tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION) -> EisensteinValues:
    """Normalized E2, E4, E6 at tau via the divisor-sum q-expansions.

    Accepts any Im(tau) >= 0.1; accuracy degrades with |q| and is machine-level
    once tau is reduced.
    """
    tau = require_upper_half(tau)
    if tau.imag < MIN_IM_TAU:
        raise ConvergenceDomain(
            f"Im(tau) = {tau.imag} is below {MIN_IM_TAU}; reduce tau first"
        )
    q = nome(tau)
    qn = _q_powers(q, trunc.order)
    s1 = _sigma_table(trunc.order, 1)
    s3 = _sigma_table(trunc.order, 3)
    s5 = _sigma_table(trunc.order, 5)
    acc1 = 0.0 + 0.0j
    acc3 = 0.0 + 0.0j
    acc5 = 0.0 + 0.0j
    for n in range(trunc.order, 0, -1):  # small terms first
        acc1 += s1[n - 1] * qn[n]
        acc3 += s3[n - 1] * qn[n]
        acc5 += s5[n - 1] * qn[n]
    e2 = ensure_finite(1.0 - 24.0 * acc1, "E2")
    e4 = ensure_finite(1.0 + 240.0 * acc3, "E4")
    e6 = ensure_finite(1.0 - 504.0 * acc5, "E6")
    return EisensteinValues(e2=e2, e4=e4, e6=e6)


def invariants_at(tau: complex, trunc: QTruncation = DEFAULT_TRUNCATION) -> LatticeInvariants:
    """g2, g3, discriminant, and eta1 for the lattice Z + tau*Z.

    Bridges: g2 = (4*pi^4/3) E4, g3 = (8*pi^6/27) E6, delta = g2^3 - 27 g3^2,
    eta1 = (pi^2/3) E2 (sign pinned by eta1(i) = +pi).
    """
    e = eisenstein_at(tau, trunc)
    g2 = (4.0 * math.pi**4 / 3.0) * e.e4
    g3 = (8.0 * math.pi**6 / 27.0) * e.e6
    delta = g2**3 - 27.0 * g3**2
    eta1 = (math.pi**2 / 3.0) * e.e2
    return LatticeInvariants(g2=g2, g3=g3, delta=ensure_finite(delta, "delta"), eta1=eta1)


def lattice_sum_eisenstein(tau: complex, k: int, radius: int) -> complex:
    """Slow oracle: sum of omega^(-2k) over nonzero lattice points of Z + tau*Z.

    Equals 2*zeta(2k)*E_{2k} for every k.  For k = 1 the sum is only
    conditionally convergent, so the row-by-row order is mandatory; each row is
    summed in closed form,

        sum' omega^(-2) = 2*zeta(2) + 2 * sum_{m >= 1} pi^2 / sin^2(pi*m*tau).

    For k = 2, 3 the absolutely convergent double sum over max(|m|, |n|) <=
    radius is returned; its truncation error decays like O(radius^(1-2k)).
    """
    tau = require_upper_half(tau)
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2, or 3, got {k}")
    if radius < 10:
        raise ValueError(f"radius must be >= 10, got {radius}")
    if k == 1:
        total = complex(ZETA2)
        for m in range(1, radius + 1):
            w = math.pi * m * tau
            if abs(w.imag) < 300.0:
                total += (math.pi / cmath.sin(w)) ** 2
            else:
                # identical closed form, written in the nome to dodge sinh overflow
                qm = cmath.exp(TWO_PI_I * m * tau)
                total += -4.0 * math.pi**2 * qm / (1.0 - qm) ** 2
        return ensure_finite(2.0 * total, "weight-2 oracle")
    ms = np.arange(-radius, radius + 1)
    m_grid, n_grid = np.meshgrid(ms, ms, indexing="ij")
    mask = (m_grid != 0) | (n_grid != 0)
    omega = m_grid[mask] + n_grid[mask] * complex(tau)
    total = np.sum(omega ** (-2 * k))
    return ensure_finite(complex(total), "eisenstein oracle")


_Q_SERIES = {
    "e2": (-24, 1),
    "e4": (240, 3),
    "e6": (-504, 5),
}


def q_coefficients(kind: str, order: int) -> list[int]:
    """Integer q-expansion coefficients [c_0, ..., c_order] of E2, E4, or E6."""
    key = kind.lower()
    if key not in _Q_SERIES:
        raise ValueError(f"kind must be one of {sorted(_Q_SERIES)}, got {kind!r}")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    scale, power = _Q_SERIES[key]
    table = _sigma_table(order, power) if order >= 1 else ()
    return [1] + [scale * table[n - 1] for n in range(1, order + 1)]
