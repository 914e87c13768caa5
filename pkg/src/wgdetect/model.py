"""Detector geometries and their linearized drift / input-coupling matrices.

Conventions used throughout the package:

* positions are measured in wavelengths of the guided light, so the
  reference wavevector is ``k0 = 2*pi`` and a lattice spacing of 1.0 means
  one wavelength;
* ``gamma_1d`` is the total single-atom emission rate into the waveguide
  and sets the frequency unit (default 1);
* frequencies are detunings from the rotating-frame origin;
* the drift matrix is the waveguide-only part of the linearized amplitude
  equations, with the uniform extra decay ``gamma_prime`` applied separately
  by the scattering layer.

Every drift model satisfies two structural identities: the drift matrix is
complex symmetric, and drift + drift^dag + coupling @ coupling^dag = 0
(the damping of every mode is exactly accounted for by its coupling to the
input ports).  The motional-averaged variant is the one exception; averaging
the couplings over fast thermal motion removes amplitude coherence that the
static identity relies on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import dawson

K0 = 2.0 * math.pi

_GEOMETRIES = ("mirror", "infinite")


class GeometryError(ValueError):
    """Invalid atom placement for the requested geometry."""


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AtomArray:
    """Atom positions (in wavelengths) plus the geometry they live in.

    ``lattice`` and ``sigma`` record how the array was generated (base
    lattice constant and disorder strength) and ride along through JSON
    serialization; they do not affect any physics computed from the
    positions themselves.
    """

    positions: np.ndarray
    geometry: str = "mirror"
    lattice: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        pos = np.atleast_1d(np.asarray(self.positions, dtype=float))
        if pos.ndim != 1 or pos.size < 1:
            raise GeometryError("positions must be a non-empty 1-D sequence")
        if not np.isfinite(pos).all():
            raise GeometryError("positions must be finite")
        if self.geometry not in _GEOMETRIES:
            raise GeometryError(f"unknown geometry {self.geometry!r}")
        if self.geometry == "mirror" and (pos <= 0).any():
            raise GeometryError("mirror geometry requires strictly positive positions")
        object.__setattr__(self, "positions", _frozen_array(pos))

    @property
    def n(self) -> int:
        return self.positions.size

    @property
    def k0(self) -> float:
        return K0

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry,
            "positions": [float(x) for x in self.positions],
            "lattice": self.lattice,
            "sigma": self.sigma,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "AtomArray":
        return cls(
            positions=data["positions"],
            geometry=data["geometry"],
            lattice=data.get("lattice"),
            sigma=data.get("sigma"),
        )

    @classmethod
    def from_json(cls, text: str) -> "AtomArray":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Rates:
    """Decay-rate bundle: waveguide, engineered and free-space channels."""

    gamma_1d: float = 1.0
    gamma_eng: float = 0.0
    gamma_free: float = 0.0

    def __post_init__(self):
        for name in ("gamma_1d", "gamma_eng", "gamma_free"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @property
    def gamma_prime(self) -> float:
        return self.gamma_eng + self.gamma_free

    @property
    def purcell(self) -> float:
        if self.gamma_free <= 0:
            raise ValueError("purcell factor undefined for gamma_free = 0")
        return self.gamma_1d / self.gamma_free

    @classmethod
    def from_purcell(cls, purcell: float, gamma_1d: float = 1.0, gamma_eng: float = 0.0) -> "Rates":
        if purcell <= 0:
            raise ValueError("purcell factor must be positive")
        return cls(gamma_1d=gamma_1d, gamma_eng=gamma_eng, gamma_free=gamma_1d / purcell)


@dataclass(frozen=True)
class DriftModel:
    """Waveguide drift matrix and input coupling for one geometry instance.

    ``drift`` is N x N complex symmetric; ``coupling`` is N x p with p = 1
    for the mirror geometry and p = 2 (port order: right-moving, left-moving)
    for the infinite waveguide.  Instances are immutable and safe to share
    across threads.
    """

    drift: np.ndarray
    coupling: np.ndarray
    geometry: str

    def __post_init__(self):
        d = np.asarray(self.drift, dtype=np.complex128)
        c = np.asarray(self.coupling, dtype=np.complex128)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("drift must be square")
        if c.ndim != 2 or c.shape[0] != d.shape[0]:
            raise ValueError("coupling must have one row per atom")
        if not (np.isfinite(d).all() and np.isfinite(c).all()):
            raise ValueError("drift/coupling entries must be finite")
        scale = max(1.0, float(np.abs(d).max()))
        if np.abs(d - d.T).max() > 1e-12 * scale:
            raise ValueError("drift matrix must be complex symmetric")
        object.__setattr__(self, "drift", _frozen_array(d, dtype=np.complex128))
        object.__setattr__(self, "coupling", _frozen_array(c, dtype=np.complex128))

    @property
    def n_atoms(self) -> int:
        return self.drift.shape[0]

    @property
    def n_ports(self) -> int:
        return self.coupling.shape[1]


def fluctuation_dissipation_residual(model: DriftModel) -> float:
    """Max-entry residual of drift + drift^dag + coupling @ coupling^dag.

    Zero (to rounding) for the static mirror and infinite geometries; nonzero
    for motional-averaged models, where it measures how much damping is no
    longer traceable to the input ports.
    """
    bracket = model.drift + model.drift.conj().T + model.coupling @ model.coupling.conj().T
    return float(np.abs(bracket).max())


def mirror_lattice(n: int, a: float = 1.0) -> AtomArray:
    """Regular mirror-geometry lattice x_j = (1/4 + j) * a for j = 0..n-1."""
    if n < 1:
        raise GeometryError("need at least one atom")
    return AtomArray((0.25 + np.arange(n)) * a, geometry="mirror", lattice=a, sigma=0.0)


def amc_positions(n: int) -> AtomArray:
    """Atomic mirror configuration: antinode lattice with spacing one wavelength."""
    return mirror_lattice(n, 1.0)


def infinite_lattice(n: int, a: float) -> AtomArray:
    """Regular lattice x_j = j * a on an infinite waveguide."""
    if n < 1:
        raise GeometryError("need at least one atom")
    return AtomArray(np.arange(n) * a, geometry="infinite", lattice=a, sigma=0.0)


def mirror_drift(array: AtomArray, gamma_1d: float = 1.0) -> DriftModel:
    """Drift and coupling for atoms in front of a mirror at x = 0.

    Photons couple atoms both directly and via the mirror bounce:

        drift_mn    = -(gamma_1d/4) * [exp(i k0 |x_m - x_n|) - exp(i k0 (x_m + x_n))]
        coupling_n  =  sqrt(gamma_1d) * sin(k0 x_n)

    A single atom on an antinode (x = 1/4) decays at gamma_1d; in the
    antinode lattice (spacing 1) only the symmetric collective mode is
    coupled and decays at n * gamma_1d.
    """
    x = array.positions
    if (x <= 0).any():
        raise GeometryError("mirror geometry requires strictly positive positions")
    diff = np.abs(x[:, None] - x[None, :])
    tot = x[:, None] + x[None, :]
    drift = -(gamma_1d / 4.0) * (np.exp(1j * K0 * diff) - np.exp(1j * K0 * tot))
    coupling = np.sqrt(gamma_1d) * np.sin(K0 * x)[:, None]
    model = DriftModel(drift=drift, coupling=coupling, geometry="mirror")
    _check_damping_identity(model, gamma_1d)
    return model


def infinite_drift(array: AtomArray, gamma_1d: float = 1.0) -> DriftModel:
    """Drift and coupling for atoms on an infinite two-port waveguide.

        drift_mn       = -(gamma_1d/2) * exp(i k0 |x_m - x_n|)
        coupling_n,+/- =  sqrt(gamma_1d/2) * exp(+/- i k0 x_n)

    Column 0 couples to right-movers, column 1 to left-movers; each atom
    radiates gamma_1d/2 into each direction, gamma_1d in total.
    """
    x = array.positions
    diff = np.abs(x[:, None] - x[None, :])
    drift = -(gamma_1d / 2.0) * np.exp(1j * K0 * diff)
    amp = np.sqrt(gamma_1d / 2.0)
    coupling = np.stack([amp * np.exp(1j * K0 * x), amp * np.exp(-1j * K0 * x)], axis=1)
    model = DriftModel(drift=drift, coupling=coupling, geometry="infinite")
    _check_damping_identity(model, gamma_1d)
    return model


def thermal_mirror_drift(array: AtomArray, gamma_1d: float = 1.0, k0_sigma: float = 0.0) -> DriftModel:
    """Antinode-lattice mirror model with couplings averaged over fast motion.

    Atoms jitter around antinode positions much faster than the collective
    dynamics, so each pair coupling is replaced by its Gaussian average over
    the two positions (spread ``k0_sigma = k0 * sigma``, dimensionless):

        off-diagonal: -(gamma_1d/2) * [exp(-k0_sigma^2) + (i/sqrt(pi)) F(k0_sigma)]
        diagonal:     -(gamma_1d/4) * [1 + exp(-k0_sigma^2)]

    with F the Dawson integral.  The input coupling is kept at its static
    antinode value sqrt(gamma_1d); only the pair couplings are averaged, so
    the damping identity holds only at k0_sigma = 0.
    """
    if k0_sigma < 0:
        raise ValueError("k0_sigma must be >= 0")
    x = array.positions
    offsets = x - 0.25
    if not np.allclose(offsets, np.round(offsets), atol=1e-9) or (x <= 0).any():
        raise GeometryError("thermal averaging requires antinode base positions (1/4 + integer)")
    n = array.n
    gauss = math.exp(-k0_sigma**2)
    off_diag = -(gamma_1d / 2.0) * (gauss + 1j * float(dawson(k0_sigma)) / math.sqrt(math.pi))
    diag = -(gamma_1d / 4.0) * (1.0 + gauss)
    drift = np.full((n, n), off_diag, dtype=np.complex128)
    np.fill_diagonal(drift, diag)
    coupling = np.full((n, 1), np.sqrt(gamma_1d), dtype=np.complex128)
    return DriftModel(drift=drift, coupling=coupling, geometry="mirror")


def _check_damping_identity(model: DriftModel, gamma_1d: float) -> None:
    tol = 1e-12 * max(1.0, gamma_1d) * max(1.0, math.sqrt(model.n_atoms))
    residual = fluctuation_dissipation_residual(model)
    if residual > tol:
        raise ValueError(f"damping identity violated, residual {residual:.2e}")
