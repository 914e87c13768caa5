"""Frequency-domain scattering, absorption and detection metrics.

The scattering matrix of a drift model with uniform extra decay
``gamma_prime`` at detuning ``omega`` is

    S(omega) = 1 + coupling^dag @ inv(drift - gamma_prime/2 + i*omega) @ coupling,

a p x p matrix over the input ports.  With ``gamma_prime = 0`` it is
unitary; with loss its singular values drop below one, and it acquires an
exact zero eigenvalue whenever ``(gamma_prime, omega)`` matches the decay
rate and resonance detuning of one collective mode.  That operating point
(coherent perfect absorption) is what :func:`cpa_tuning` computes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .model import DriftModel, Rates
from .numerics import SingularMatrixError, eigenvalues, linear_solve


class PoleError(ValueError):
    """Scattering evaluated exactly at a pole of the requested quantity."""


class InsufficientDecayError(ValueError):
    """Selected mode decays too slowly to absorb into the engineered channel."""


@dataclass(frozen=True)
class ScatteringMatrix:
    """Amplitude scattering matrix at one detuning.

    Port order: the single mirror port for p = 1; (right-moving,
    left-moving) for p = 2.
    """

    omega: float
    matrix: np.ndarray


@dataclass(frozen=True)
class Mode:
    """One collective mode: drift eigenvalue, decay rate, resonance detuning."""

    eigenvalue: complex
    kappa: float
    omega_res: float


@dataclass(frozen=True)
class CpaTuning:
    """Loss rate and detuning at which the scattering matrix has a zero."""

    gamma_prime: float
    gamma_eng: float
    omega: float


@dataclass(frozen=True)
class DetectionMetrics:
    """Absorption probability and detection efficiency at one detuning."""

    p_abs: float
    eta: float
    p_loss: float
    bandwidth: float | None = None


def _resolvent_apply(model: DriftModel, gamma_prime: float, omega: float) -> np.ndarray:
    a = model.drift + (-gamma_prime / 2.0 + 1j * omega) * np.eye(model.n_atoms)
    return linear_solve(a, model.coupling)


def smatrix(model: DriftModel, gamma_prime: float, omega: float) -> ScatteringMatrix:
    """Scattering matrix S(omega) for uniform extra decay ``gamma_prime``."""
    if gamma_prime < 0:
        raise ValueError("gamma_prime must be >= 0")
    try:
        x = _resolvent_apply(model, gamma_prime, omega)
    except SingularMatrixError as err:
        raise PoleError(
            f"scattering matrix pole at omega={omega}, gamma_prime={gamma_prime}"
        ) from err
    s = np.eye(model.n_ports, dtype=np.complex128) + model.coupling.conj().T @ x
    return ScatteringMatrix(omega=float(omega), matrix=s)


def inverse_smatrix(model: DriftModel, gamma_prime: float, omega: float) -> np.ndarray:
    """Inverse scattering matrix, computed from the adjoint resolvent.

        S^-1(omega) = 1 + coupling^dag @ inv(drift^dag + gamma_prime/2 - i*omega) @ coupling

    The inner matrix is singular exactly at a coherent-perfect-absorption
    point, where S has a zero eigenvalue; a :class:`PoleError` there is the
    numerical witness of that condition.
    """
    if gamma_prime < 0:
        raise ValueError("gamma_prime must be >= 0")
    a = model.drift.conj().T + (gamma_prime / 2.0 - 1j * omega) * np.eye(model.n_atoms)
    try:
        x = linear_solve(a, model.coupling)
    except SingularMatrixError as err:
        raise PoleError(
            f"inverse scattering matrix pole (perfect-absorption point) at "
            f"omega={omega}, gamma_prime={gamma_prime}"
        ) from err
    return np.eye(model.n_ports, dtype=np.complex128) + model.coupling.conj().T @ x


def mode_spectrum(model: DriftModel) -> list[Mode]:
    """Collective modes of the drift matrix, most dissipative first.

    Each drift eigenvalue d maps to a decay rate kappa = -2 Re d and a
    resonance detuning omega_res = -Im d.  Sorted by kappa descending with
    ties broken by omega_res ascending.
    """
    eig = eigenvalues(model.drift)
    modes = [
        Mode(eigenvalue=complex(d), kappa=float(-2.0 * d.real), omega_res=float(-d.imag))
        for d in eig
    ]
    modes.sort(key=lambda m: (-m.kappa, m.omega_res))
    return modes


def cpa_tuning(model: DriftModel, rates: Rates, mode_index: int = 0) -> CpaTuning:
    """Loss and detuning that put a scattering-matrix zero on one mode.

    The zero sits at ``gamma_prime = kappa`` and ``omega = omega_res`` of the
    selected mode (index into the kappa-descending spectrum; the default, the
    most dissipative mode, gives both the best efficiency and the widest
    bandwidth).  The engineered share is ``gamma_eng = kappa - gamma_free``,
    so the mode must decay faster than the free-space rate.
    """
    modes = mode_spectrum(model)
    if not 0 <= mode_index < len(modes):
        raise IndexError(f"mode_index {mode_index} out of range for {len(modes)} modes")
    mode = modes[mode_index]
    if mode.kappa <= rates.gamma_free:
        raise InsufficientDecayError(
            f"insufficient collective decay: kappa={mode.kappa:.3e} <= "
            f"gamma_free={rates.gamma_free:.3e}"
        )
    return CpaTuning(
        gamma_prime=mode.kappa,
        gamma_eng=mode.kappa - rates.gamma_free,
        omega=mode.omega_res,
    )


def detection_metrics(
    model: DriftModel, rates: Rates, omega: float, input_port: int = 0
) -> DetectionMetrics:
    """Absorption probability and detection efficiency for one input port.

    ``p_abs`` is one minus the total outgoing probability for a photon in
    ``input_port`` (column of S); ``eta`` is the share of the absorbed
    photon that decays through the engineered channel,
    eta = p_abs * gamma_eng / (gamma_eng + gamma_free).
    """
    gamma_prime = rates.gamma_prime
    if gamma_prime <= 0:
        raise ValueError("detection requires gamma_eng + gamma_free > 0")
    if not 0 <= input_port < model.n_ports:
        raise ValueError(f"input_port {input_port} out of range")
    s = smatrix(model, gamma_prime, omega).matrix
    p_abs = 1.0 - float(np.sum(np.abs(s[:, input_port]) ** 2))
    eta = p_abs * rates.gamma_eng / gamma_prime
    return DetectionMetrics(p_abs=p_abs, eta=eta, p_loss=1.0 - eta)


def amc_analytic_output(n: int, gamma_1d: float, gamma_prime: float, omega: float) -> float:
    """Closed-form output/input photon flux for the antinode-lattice mirror array.

    Only the symmetric collective mode couples there, so the array behaves
    as a one-sided cavity with coupling n*gamma_1d and total linewidth
    gamma_tot = n*gamma_1d + gamma_prime:

        |1 - n*gamma_1d / (gamma_tot/2 - i*omega)|^2

    Tuning gamma_prime = n*gamma_1d makes this vanish on resonance.
    """
    if n < 1:
        raise ValueError("need at least one atom")
    gamma_tot = n * gamma_1d + gamma_prime
    amp = 1.0 - n * gamma_1d / (gamma_tot / 2.0 - 1j * omega)
    return float(np.abs(amp) ** 2)


@dataclass(frozen=True)
class ResponseCurve:
    """Detection metrics swept over a detuning grid."""

    omega: np.ndarray
    p_abs: np.ndarray
    eta: np.ndarray
    p_loss: np.ndarray

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["omega", "p_abs", "eta", "p_loss"])
            for row in zip(self.omega, self.p_abs, self.eta, self.p_loss):
                writer.writerow([repr(float(v)) for v in row])


def response_curve(model: DriftModel, rates: Rates, omega_grid, input_port: int = 0) -> ResponseCurve:
    """Sweep :func:`detection_metrics` over a sorted detuning grid."""
    omegas = np.asarray(omega_grid, dtype=float)
    if omegas.ndim != 1 or omegas.size < 3:
        raise ValueError("omega_grid must be 1-D with at least 3 points")
    if not (np.diff(omegas) > 0).all():
        raise ValueError("omega_grid must be strictly increasing")
    p_abs = np.empty_like(omegas)
    eta = np.empty_like(omegas)
    for i, w in enumerate(omegas):
        m = detection_metrics(model, rates, w, input_port)
        p_abs[i] = m.p_abs
        eta[i] = m.eta
    return ResponseCurve(omega=omegas, p_abs=p_abs, eta=eta, p_loss=1.0 - eta)


def bandwidth(curve: ResponseCurve) -> float:
    """Full width of the efficiency peak at half of its maximum.

    Crossings are located by linear interpolation between grid points.  An
    identically non-positive curve has zero bandwidth; a peak whose
    half-maximum level is not crossed inside the grid raises ValueError.
    """
    eta = curve.eta
    omega = curve.omega
    peak = int(np.argmax(eta))
    eta_peak = eta[peak]
    if eta_peak <= 0:
        return 0.0
    half = eta_peak / 2.0
    if eta[0] >= half or eta[-1] >= half:
        raise ValueError("peak not bracketed by grid: curve does not fall below half maximum")

    def cross(i_out, i_in):
        # linear interpolation of the half-max crossing between two grid points
        w0, w1 = omega[i_out], omega[i_in]
        e0, e1 = eta[i_out], eta[i_in]
        return w0 + (half - e0) / (e1 - e0) * (w1 - w0)

    lo = peak
    while eta[lo] >= half:
        lo -= 1
    hi = peak
    while eta[hi] >= half:
        hi += 1
    return float(cross(hi, hi - 1) - cross(lo, lo + 1))
