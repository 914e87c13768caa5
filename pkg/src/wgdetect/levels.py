"""Effective rates of the Raman-engineered decay and nonlinearity bounds.

The engineered decay to the metastable shelf state is produced by two driven
Raman branches.  After adiabatic elimination of the far-detuned intermediate
levels (valid for detunings large against the Rabi frequencies, which is the
caller's responsibility) the dynamics reduce to three effective jump
channels whose rates are squared moduli of the elimination amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class DoubleLambdaParams:
    """Drive and decay parameters of the two Raman branches.

    Branch 1 produces the waveguide-visible decay (intermediate level decays
    to the ground state at ``gamma_g``); branch 2 produces the engineered
    decay (intermediate level decays to the shelf at ``gamma_s``).  The
    ``gamma_1e``/``gamma_2e`` rates are parasitic decays of the intermediate
    levels back to the excited state, which show up as pure dephasing.
    """

    omega1: float
    omega2: float
    delta1: float
    delta2: float
    gamma_g: float
    gamma_s: float
    gamma_1e: float = 0.0
    gamma_2e: float = 0.0

    def __post_init__(self):
        if self.gamma_g <= 0 or self.gamma_s <= 0:
            raise ValueError("gamma_g and gamma_s must be positive")
        for name in ("omega1", "omega2", "gamma_1e", "gamma_2e"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


class EffectiveRates(NamedTuple):
    gamma_1d_eff: float
    gamma_eng_eff: float
    gamma_dephase: float


@dataclass(frozen=True)
class ValidityReport:
    """Regime checks for the double-Raman scheme."""

    parasitic_ratio: float
    parasitic_ok: bool
    cpa_ratio: float
    cpa_ok: bool
    threshold: float


class NonlinearityEstimate(NamedTuple):
    delta_p_abs: float
    p_success: float


def _branch_amplitude(rate_out: float, rabi: float, detuning: float, rate_back: float) -> complex:
    return math.sqrt(rate_out) * rabi / (2.0 * detuning - 1j * (rate_out + rate_back))


def effective_rates(params: DoubleLambdaParams) -> EffectiveRates:
    """Waveguide, engineered and dephasing rates after adiabatic elimination.

    Each rate is |amplitude|^2 of the corresponding jump operator, e.g.

        gamma_1d_eff = gamma_g * omega1^2 / (4*delta1^2 + (gamma_g + gamma_1e)^2).

    The dephasing channel is fed coherently by both parasitic decays, so its
    two amplitudes add before squaring.  All rates scale as the square of
    the drive strengths.
    """
    amp_1d = _branch_amplitude(params.gamma_g, params.omega1, params.delta1, params.gamma_1e)
    amp_eng = _branch_amplitude(params.gamma_s, params.omega2, params.delta2, params.gamma_2e)
    amp_dephase = (
        math.sqrt(params.gamma_1e)
        * params.omega1
        / (2.0 * params.delta1 - 1j * (params.gamma_g + params.gamma_1e))
        + math.sqrt(params.gamma_2e)
        * params.omega2
        / (2.0 * params.delta2 - 1j * (params.gamma_s + params.gamma_2e))
    )
    return EffectiveRates(
        gamma_1d_eff=abs(amp_1d) ** 2,
        gamma_eng_eff=abs(amp_eng) ** 2,
        gamma_dephase=abs(amp_dephase) ** 2,
    )


def validity_flags(params: DoubleLambdaParams, threshold: float = 0.1) -> ValidityReport:
    """Flag the two regime requirements of the engineered-decay scheme.

    ``parasitic_ratio`` = gamma_2e / gamma_s must be small, otherwise the
    dephasing grows with the same drive parameters as the engineered decay
    itself.  ``cpa_ratio`` = gamma_1d_eff / gamma_eng_eff must be small for
    the perfect-absorption tuning to be reachable.  The smallness threshold
    is a policy choice, default 0.1.
    """
    rates = effective_rates(params)
    parasitic = params.gamma_2e / params.gamma_s
    cpa = rates.gamma_1d_eff / rates.gamma_eng_eff if rates.gamma_eng_eff > 0 else math.inf
    return ValidityReport(
        parasitic_ratio=parasitic,
        parasitic_ok=parasitic < threshold,
        cpa_ratio=cpa,
        cpa_ok=cpa < threshold,
        threshold=threshold,
    )


def nonlinearity_estimate(m_photons: int, n_atoms: int) -> NonlinearityEstimate:
    """Perturbative cost of absorbing ``m`` photons into ``n`` atoms.

    Each absorbed photon removes one atom from the collective mode, reducing
    the enhanced decay rate and detuning the array from its perfect-absorption
    point.  To leading order the absorption probability for the m-th photon
    drops by m^2 / (4 n^2), and the probability that all m photons are
    absorbed (starting from p_abs = 1) is

        1 - (2 m^3 - 3 m^2 + m) / (24 n^2),

    a third-order-in-1/n estimate; it leaves [0, 1] once m approaches n for
    large arrays, where the expansion has broken down.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    if not 1 <= m_photons <= n_atoms:
        raise ValueError("need 1 <= m_photons <= n_atoms")
    delta_p_abs = m_photons**2 / (4.0 * n_atoms**2)
    p_success = 1.0 - (2 * m_photons**3 - 3 * m_photons**2 + m_photons) / (24.0 * n_atoms**2)
    return NonlinearityEstimate(delta_p_abs=delta_p_abs, p_success=p_success)
