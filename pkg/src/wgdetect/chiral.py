"""Single-atom chiral scattering and ensemble detection efficiency.

With direction-dependent coupling there are no collective effects and the
atom spacing drops out, so a chain of N emitters is a cascade of identical
single-atom scatterers.  On resonance each atom is characterized by the
branching fractions

    beta_pm = gamma_pm / (gamma_plus + gamma_minus + gamma_prime),

transmission t_pm = 1 - 2*beta_pm and reflection r_pm = -2*sqrt(beta_plus*beta_minus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class ChiralRates:
    """Directional waveguide rates plus engineered/free-space decay."""

    gamma_plus: float
    gamma_minus: float = 0.0
    gamma_eng: float = 0.0
    gamma_free: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma_plus) and self.gamma_plus > 0):
            raise ValueError("gamma_plus must be positive")
        for name in ("gamma_minus", "gamma_eng", "gamma_free"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0")

    @property
    def gamma_prime(self) -> float:
        return self.gamma_eng + self.gamma_free


class SingleAtomScattering(NamedTuple):
    beta_plus: float
    beta_minus: float
    t_plus: float
    r_plus: float
    a_plus: float


class ChiralEfficiency(NamedTuple):
    eta_exact: float
    eta_first_order: float


def single_atom_scattering(rates: ChiralRates) -> SingleAtomScattering:
    """On-resonance transmission, reflection and absorption for one atom.

    The absorption probability for a right-moving photon is defined by flux
    conservation, a_plus = 1 - t_plus^2 - r_plus^2 = 4*beta_plus*(1 - beta_plus - beta_minus),
    so the three channels add to one identically.
    """
    total = rates.gamma_plus + rates.gamma_minus + rates.gamma_prime
    beta_plus = rates.gamma_plus / total
    beta_minus = rates.gamma_minus / total
    t_plus = 1.0 - 2.0 * beta_plus
    r_plus = -2.0 * math.sqrt(beta_plus * beta_minus)
    a_plus = 1.0 - t_plus**2 - r_plus**2
    return SingleAtomScattering(beta_plus, beta_minus, t_plus, r_plus, a_plus)


def chain_transmission(t_plus: float, n_atoms: int) -> float:
    """Probability |t|^(2N) that a photon passes N emitters unabsorbed."""
    if n_atoms < 0:
        raise ValueError("n_atoms must be >= 0")
    if abs(t_plus) > 1 + 1e-12:
        raise ValueError("|t_plus| must not exceed 1")
    return float(abs(t_plus) ** (2 * n_atoms))


def chiral_efficiency(rates: ChiralRates) -> ChiralEfficiency:
    """Ensemble detection efficiency, exact branching vs first-order form.

    Deep chains absorb or backscatter every photon, so the efficiency is the
    per-atom branching ratio between engineered absorption and all loss
    channels (backscatter plus free-space decay).  Backscatter is treated
    probabilistically to first order: the absorption branch carries weight
    4*beta_plus*(1 - beta_minus), which drops the second-order
    backscatter-interference share of the flux-conserving single-pass value.
    The first-order form expands the same ratio in gamma_minus/gamma_plus:

        eta ~= (gamma_eng/gamma_prime) * (1 - gamma_minus/(gamma_plus + gamma_prime)).

    The two agree to second order in gamma_minus/gamma_plus.
    """
    gamma_prime = rates.gamma_prime
    if gamma_prime <= 0:
        raise ValueError("detection requires gamma_eng + gamma_free > 0")
    sc = single_atom_scattering(rates)
    absorbed = 4.0 * sc.beta_plus * (1.0 - sc.beta_minus)
    if absorbed <= 0 and sc.r_plus == 0:
        raise ValueError("degenerate chain: no absorption or backscatter")
    p_detect = absorbed * rates.gamma_eng / gamma_prime
    p_loss = sc.r_plus**2 + absorbed * rates.gamma_free / gamma_prime
    eta_exact = p_detect / (p_detect + p_loss)
    eta_first = (rates.gamma_eng / gamma_prime) * (
        1.0 - rates.gamma_minus / (rates.gamma_plus + gamma_prime)
    )
    return ChiralEfficiency(eta_exact=float(eta_exact), eta_first_order=float(eta_first))
