"""Disorder ensembles, dissipation-tuning strategies and eigenvalue scaling.

Three ways to pick the engineered dissipation for a disordered array:

* ``fixed_amc``       -- pretend the array is the ideal antinode lattice and
                         set gamma_eng = N*gamma_1d - gamma_free, probing on
                         resonance.  Optimal without disorder, saturates with it.
* ``ensemble_mean``   -- tune to the *average* decay rate and detuning of the
                         most dissipative mode, estimated on an independent
                         calibration ensemble with the same (N, sigma).  Needs
                         only the disorder statistics, not the realization.
* ``characterized``   -- per-realization exact tuning to the most dissipative
                         mode (possible when the disorder is fixed and has been
                         measured); the best of the three.

Realizations are seeded from (master_seed, stream, index), so ensembles are
reproducible bit for bit, independent realizations can run in parallel, and
the calibration stream never overlaps the evaluation stream.
"""

from __future__ import annotations

import json
import math
import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .model import AtomArray, DriftModel, Rates, infinite_drift, mirror_drift
from .scattering import (
    InsufficientDecayError,
    PoleError,
    cpa_tuning,
    detection_metrics,
    mode_spectrum,
)

EVAL_STREAM = 0
CALIBRATION_STREAM = 1

STRATEGIES = ("fixed_amc", "ensemble_mean", "characterized")


@dataclass(frozen=True)
class DisorderSpec:
    """Ensemble definition: geometry, base lattice, disorder and seeding."""

    geometry: str = "mirror"
    n_atoms: int = 10
    lattice: float = 1.0
    sigma: float = 0.0
    master_seed: int = 0
    n_realizations: int = 150

    def __post_init__(self):
        if self.geometry not in ("mirror", "infinite"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if self.lattice <= 0:
            raise ValueError("lattice constant must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be >= 0")


@dataclass(frozen=True)
class Tuning:
    """Engineered rate and probe detuning chosen by a strategy."""

    gamma_eng: float
    omega: float


@dataclass(frozen=True)
class RealizationRecord:
    """Per-realization outcome; failed realizations carry NaN metrics."""

    index: int
    seed: str
    status: str
    p_abs: float
    eta: float
    p_loss: float
    kappa_max: float
    omega_res: float
    gamma_eng: float
    omega_probe: float

    FIELDS = (
        "index", "seed", "status", "p_abs", "eta", "p_loss",
        "kappa_max", "omega_res", "gamma_eng", "omega_probe",
    )


@dataclass(frozen=True)
class EnsembleResult:
    """Per-realization records plus their aggregates for one ensemble run."""

    spec: DisorderSpec
    strategy: str
    records: tuple
    mean_p_loss: float
    std_p_loss: float
    mean_eta: float
    std_eta: float
    n_failed: int

    @classmethod
    def from_records(cls, spec, strategy, records) -> "EnsembleResult":
        ok = [r for r in records if r.status == "ok"]
        if ok:
            p_loss = np.array([r.p_loss for r in ok])
            eta = np.array([r.eta for r in ok])
            agg = (p_loss.mean(), p_loss.std(), eta.mean(), eta.std())
        else:
            agg = (math.nan,) * 4
        return cls(
            spec=spec,
            strategy=strategy,
            records=tuple(records),
            mean_p_loss=float(agg[0]),
            std_p_loss=float(agg[1]),
            mean_eta=float(agg[2]),
            std_eta=float(agg[3]),
            n_failed=len(records) - len(ok),
        )

    def aggregates(self) -> dict:
        return {
            "mean_p_loss": self.mean_p_loss,
            "std_p_loss": self.std_p_loss,
            "mean_eta": self.mean_eta,
            "std_eta": self.std_eta,
            "n_failed": self.n_failed,
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(RealizationRecord.FIELDS)
            for r in self.records:
                writer.writerow(_csv_cells(r))

    def write_meta(self, path, code_version: str) -> None:
        payload = {
            "spec": asdict(self.spec),
            "strategy": self.strategy,
            "aggregates": self.aggregates(),
            "code_version": code_version,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _csv_cells(record: RealizationRecord):
    cells = []
    for name in RealizationRecord.FIELDS:
        v = getattr(record, name)
        cells.append(repr(float(v)) if isinstance(v, float) else v)
    return cells


def _seed_label(spec: DisorderSpec, stream: int, index: int) -> str:
    return f"{spec.master_seed}:{stream}:{index}"


def sample_positions(spec: DisorderSpec, realization_index: int, stream: int = EVAL_STREAM) -> AtomArray:
    """Draw one disordered atom array, deterministically seeded.

    Positions are the base lattice plus i.i.d. Gaussian offsets of standard
    deviation ``sigma``.  In the mirror geometry any atom pushed to x <= 0
    is redrawn (relevant only for sigma comparable to the first position).
    """
    rng = np.random.default_rng([spec.master_seed, stream, realization_index])
    if spec.geometry == "mirror":
        base = (0.25 + np.arange(spec.n_atoms)) * spec.lattice
    else:
        base = np.arange(spec.n_atoms) * spec.lattice
    x = base + rng.normal(0.0, spec.sigma, spec.n_atoms)
    if spec.geometry == "mirror":
        bad = x <= 0
        while bad.any():
            x[bad] = base[bad] + rng.normal(0.0, spec.sigma, int(bad.sum()))
            bad = x <= 0
    return AtomArray(x, geometry=spec.geometry, lattice=spec.lattice, sigma=spec.sigma)


def build_drift(array: AtomArray, gamma_1d: float = 1.0) -> DriftModel:
    """Drift model matching the array's geometry tag."""
    if array.geometry == "mirror":
        return mirror_drift(array, gamma_1d)
    return infinite_drift(array, gamma_1d)


def strategy_fixed_amc(n_atoms: int, rates: Rates) -> Tuning:
    """Ideal antinode-lattice tuning: gamma_prime = N*gamma_1d, on resonance."""
    gamma_eng = n_atoms * rates.gamma_1d - rates.gamma_free
    if gamma_eng <= 0:
        raise InsufficientDecayError(
            f"N*gamma_1d = {n_atoms * rates.gamma_1d:.3e} does not exceed "
            f"gamma_free = {rates.gamma_free:.3e}"
        )
    return Tuning(gamma_eng=gamma_eng, omega=0.0)


def strategy_ensemble_mean(spec: DisorderSpec, rates: Rates, n_calibration: int | None = None) -> Tuning:
    """Tune to the ensemble-average most-dissipative mode.

    The average decay rate and resonance detuning are estimated by Monte
    Carlo on a calibration ensemble drawn from a seed stream disjoint from
    the evaluation stream, so the tuning is independent of the realizations
    it will be applied to.
    """
    n_cal = spec.n_realizations if n_calibration is None else n_calibration
    kappas = np.empty(n_cal)
    omegas = np.empty(n_cal)
    for i in range(n_cal):
        array = sample_positions(spec, i, stream=CALIBRATION_STREAM)
        top = mode_spectrum(build_drift(array, rates.gamma_1d))[0]
        kappas[i] = top.kappa
        omegas[i] = top.omega_res
    gamma_eng = float(kappas.mean()) - rates.gamma_free
    if gamma_eng <= 0:
        raise InsufficientDecayError(
            f"mean kappa_max = {kappas.mean():.3e} does not exceed "
            f"gamma_free = {rates.gamma_free:.3e}"
        )
    return Tuning(gamma_eng=gamma_eng, omega=float(omegas.mean()))


def strategy_characterized(model: DriftModel, rates: Rates) -> Tuning:
    """Per-realization exact tuning to the most dissipative mode."""
    tuning = cpa_tuning(model, rates, mode_index=0)
    return Tuning(gamma_eng=tuning.gamma_eng, omega=tuning.omega)


def ensemble_efficiency(
    spec: DisorderSpec,
    rates: Rates,
    strategy: str = "fixed_amc",
    threads: int = 1,
) -> EnsembleResult:
    """Detection metrics over a disorder ensemble under one tuning strategy.

    Each realization records the most dissipative mode of its drift matrix
    and the detection metrics at the strategy's (gamma_eng, omega).  A
    realization whose strategy or scattering evaluation fails is marked
    ``failed`` and excluded from the aggregates rather than aborting the
    ensemble.  Results are deterministic functions of the spec and identical
    for serial and parallel execution.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    shared: Tuning | None = None
    if strategy == "fixed_amc":
        shared = strategy_fixed_amc(spec.n_atoms, rates)
    elif strategy == "ensemble_mean":
        shared = strategy_ensemble_mean(spec, rates)

    def run_one(index: int) -> RealizationRecord:
        array = sample_positions(spec, index, stream=EVAL_STREAM)
        model = build_drift(array, rates.gamma_1d)
        top = mode_spectrum(model)[0]
        seed = _seed_label(spec, EVAL_STREAM, index)
        try:
            tuning = shared if shared is not None else strategy_characterized(model, rates)
            probe_rates = Rates(
                gamma_1d=rates.gamma_1d, gamma_eng=tuning.gamma_eng, gamma_free=rates.gamma_free
            )
            metrics = detection_metrics(model, probe_rates, tuning.omega)
        except (InsufficientDecayError, PoleError):
            return RealizationRecord(
                index=index, seed=seed, status="failed",
                p_abs=math.nan, eta=math.nan, p_loss=math.nan,
                kappa_max=top.kappa, omega_res=top.omega_res,
                gamma_eng=math.nan, omega_probe=math.nan,
            )
        return RealizationRecord(
            index=index, seed=seed, status="ok",
            p_abs=metrics.p_abs, eta=metrics.eta, p_loss=metrics.p_loss,
            kappa_max=top.kappa, omega_res=top.omega_res,
            gamma_eng=tuning.gamma_eng, omega_probe=tuning.omega,
        )

    indices = range(spec.n_realizations)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run_one, indices))
    else:
        records = [run_one(i) for i in indices]
    return EnsembleResult.from_records(spec, strategy, records)


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit kappa_max ~ N^alpha for one array family."""

    label: str
    n_values: tuple
    kappa_max: tuple
    alpha: float
    residual: float


def eigenvalue_scaling(
    geometry: str,
    spacings,
    n_values,
    sigma: float = 0.0,
    n_realizations: int = 12,
    master_seed: int = 0,
    gamma_1d: float = 1.0,
) -> list[ScalingFit]:
    """Fit the growth exponent of the largest collective decay rate with N.

    ``spacings`` entries are lattice constants (wavelengths) or the string
    ``"random"`` for fully random arrays (lattice-scale Gaussian disorder,
    sigma = lattice = 1, averaged over ``n_realizations``).  Ordered entries
    use ``sigma``; with sigma > 0 they are ensemble-averaged too.  The
    antinode-lattice mirror case gives alpha = 1 exactly; generic spacings,
    ordered or random, share a common sub-linear exponent.
    """
    n_values = [int(n) for n in n_values]
    if len(n_values) < 4:
        raise ValueError("need at least 4 atom numbers for a scaling fit")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("atom numbers must be strictly increasing")

    fits = []
    for spacing in spacings:
        randomized = isinstance(spacing, str)
        if randomized and spacing != "random":
            raise ValueError(f"unknown spacing entry {spacing!r}")
        kappas = []
        for n in n_values:
            if randomized:
                spec = DisorderSpec(
                    geometry=geometry, n_atoms=n, lattice=1.0, sigma=1.0,
                    master_seed=master_seed, n_realizations=n_realizations,
                )
            else:
                spec = DisorderSpec(
                    geometry=geometry, n_atoms=n, lattice=float(spacing), sigma=sigma,
                    master_seed=master_seed, n_realizations=n_realizations,
                )
            if spec.sigma == 0:
                samples = [sample_positions(spec, 0)]
            else:
                samples = [sample_positions(spec, i) for i in range(n_realizations)]
            vals = [mode_spectrum(build_drift(a, gamma_1d))[0].kappa for a in samples]
            kappas.append(float(np.mean(vals)))
        kappas_arr = np.array(kappas)
        if (kappas_arr <= 0).any():
            raise ValueError("degenerate fit: non-positive kappa_max encountered")
        log_n = np.log(np.array(n_values, dtype=float))
        log_k = np.log(kappas_arr)
        alpha, intercept = np.polyfit(log_n, log_k, 1)
        resid = float(np.sqrt(np.mean((log_k - (alpha * log_n + intercept)) ** 2)))
        if not math.isfinite(alpha):
            raise ValueError("degenerate fit: non-finite exponent")
        fits.append(
            ScalingFit(
                label="random" if randomized else repr(float(spacing)),
                n_values=tuple(n_values),
                kappa_max=tuple(kappas),
                alpha=float(alpha),
                residual=resid,
            )
        )
    return fits
