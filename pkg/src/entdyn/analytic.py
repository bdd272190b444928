"""Closed-form concurrence solutions for the solvable state/channel families.

These are the cross-validation oracles: two-qubit Bell states under
dephasing, zero-temperature, thermal, and infinite-temperature channels,
and the exactly solvable qudit families (two-term dephasing, |0m>+|m0>
and |00>+|mm> under pure decay). Every function returns the clamped
max{c_T, 0}; ``clamp=False`` exposes the pre-clamp value where the
asymptotics are of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.optimize import brentq

from .errors import DomainError, NumericError


class BellKind(Enum):
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"

    @property
    def is_psi(self) -> bool:
        return self in (BellKind.PSI_PLUS, BellKind.PSI_MINUS)


@dataclass(frozen=True)
class ThermalParams:
    gamma: float
    nbar: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise DomainError("gamma must be positive")
        if self.nbar < 0:
            raise DomainError("nbar must be non-negative")

    def beta(self, t: float) -> float:
        """e^{-Gamma (2 nbar + 1) t}, the single decaying scale of the thermal forms."""
        return math.exp(-self.gamma * (2.0 * self.nbar + 1.0) * t)


def bell_dephasing(t: float, gamma: float) -> float:
    """c(t) = e^{-Gamma t}, identical for all four Bell states."""
    return math.exp(-gamma * t)


def bell_zero_temperature(kind: BellKind, t: float, gamma: float) -> float:
    """Psi decays as e^{-Gamma t}; Phi twice as fast (both excitations can decay)."""
    rate = gamma if kind.is_psi else 2.0 * gamma
    return math.exp(-rate * t)


def bell_thermal(kind: BellKind, t: float, params: ThermalParams,
                 clamp: bool = True) -> float:
    """Finite-temperature Bell-state concurrence, c = max{c_T, 0}."""
    nb = params.nbar
    beta = params.beta(t)
    w = nb * nb + nb
    denom = (2.0 * nb + 1.0) ** 2
    if kind.is_psi:
        ct = beta - 2.0 * (1.0 - beta) * math.sqrt(w * w * (beta + 1.0) ** 2 + beta * w) / denom
    else:
        ct = beta + ((2.0 * w + 1.0) * beta * beta - beta - 2.0 * w) / denom
    return max(ct, 0.0) if clamp else ct


def bell_infinite_temperature(t: float, gamma_tilde: float, clamp: bool = True) -> float:
    """Infinite-temperature limit, same for all Bell kinds."""
    x = math.exp(-2.0 * gamma_tilde * t)
    ct = 0.5 * x * x + x - 0.5
    return max(ct, 0.0) if clamp else ct


def short_time_rate(kind: BellKind, params: ThermalParams) -> float:
    """Initial concurrence decay rate under the thermal channel (first order in t)."""
    nb = params.nbar
    if kind.is_psi:
        return (2.0 * nb + 1.0 + 2.0 * math.sqrt(nb * (nb + 1.0))) * params.gamma
    return 2.0 * (2.0 * nb + 1.0) * params.gamma


def separability_time(kind: BellKind, params: ThermalParams) -> float:
    """First time at which the thermal concurrence hits zero exactly.

    Found by bracketed root-finding on beta in (0, 1); at nbar = 0
    separability is only asymptotic and +inf is returned.
    """
    if params.nbar == 0.0:
        return math.inf
    rate = params.gamma * (2.0 * params.nbar + 1.0)

    def ct_of_beta(beta: float) -> float:
        t = -math.log(beta) / rate
        return bell_thermal(kind, t, params, clamp=False)

    lo, hi = 1e-300, 1.0 - 1e-15
    if ct_of_beta(lo) * ct_of_beta(hi) > 0:
        raise NumericError("no sign change on the beta bracket; cannot locate t_sep")
    beta_root = brentq(ct_of_beta, lo, hi, xtol=1e-15, rtol=1e-15)
    return -math.log(beta_root) / rate


def infinite_temperature_separability_time(gamma_tilde: float) -> float:
    """ln(1 + sqrt(2)) / (2 Gamma-tilde), the root of x^2/2 + x - 1/2 = 0."""
    return math.log(1.0 + math.sqrt(2.0)) / (2.0 * gamma_tilde)


def two_term_dephasing(a: complex, b: complex, m1: int, m2: int, n1: int, n2: int,
                       t: float, gamma: float) -> float:
    """Dephasing of a|m1 m2> + b|n1 n2>:
    c(t) = 2|ab| exp(-(Gamma t / 2)[(m1-n1)^2 + (m2-n2)^2])."""
    rate = 0.5 * gamma * ((m1 - n1) ** 2 + (m2 - n2) ** 2)
    return 2.0 * abs(a * b) * math.exp(-rate * t)


def zero_t_0m_m0(a: complex, b: complex, m: int, t: float, gamma: float) -> float:
    """Pure decay of a|0m> + b|m0>: c(t) = 2|ab| e^{-m Gamma t} (bounds coincide)."""
    return 2.0 * abs(a * b) * math.exp(-m * gamma * t)


def zero_t_00mm(a: complex, b: complex, m: int, t: float, gamma: float,
                clamp: bool = True) -> float:
    """Pure decay of a|00> + b|mm>:
    c(t) = max{0, 2 e^{-m Gamma t}(|ab| - (1 - e^{-Gamma t})^m |b|^2)}."""
    x = math.exp(-gamma * t)
    ct = 2.0 * math.exp(-m * gamma * t) * (abs(a * b) - (1.0 - x) ** m * abs(b) ** 2)
    return max(ct, 0.0) if clamp else ct
