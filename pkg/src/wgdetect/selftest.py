"""Randomized invariant battery runnable from the command line.

Every structural identity promised by the library is exercised here with
seeded random inputs: one line per invariant, nonzero process exit on any
violation.  The pytest suite covers the same ground (and more) with the
documented tolerances; this module is the quick field check.
"""

from __future__ import annotations

import sys

import numpy as np

from .chiral import ChiralRates, chiral_efficiency, single_atom_scattering
from .disorder import (
    DisorderSpec,
    build_drift,
    ensemble_efficiency,
    sample_positions,
    strategy_characterized,
    strategy_ensemble_mean,
    strategy_fixed_amc,
)
from .levels import DoubleLambdaParams, effective_rates, nonlinearity_estimate
from .model import (
    AtomArray,
    Rates,
    amc_positions,
    fluctuation_dissipation_residual,
    infinite_drift,
    infinite_lattice,
    mirror_drift,
)
from .numerics import dawson, eigenvalues, min_singular_value
from .scattering import (
    amc_analytic_output,
    cpa_tuning,
    detection_metrics,
    inverse_smatrix,
    mode_spectrum,
    smatrix,
)

_RNG = np.random.default_rng(20240109)


def _random_mirror(n):
    return mirror_drift(AtomArray(np.sort(_RNG.uniform(0.05, n * 0.8, n)) + 0.05))


def _random_infinite(n):
    return infinite_drift(
        AtomArray(np.sort(_RNG.uniform(0.0, n * 0.4, n)), geometry="infinite")
    )


def _random_models(count=20, nmax=30):
    for _ in range(count):
        n = int(_RNG.integers(2, nmax))
        yield _random_mirror(n)
        yield _random_infinite(n)


def check_eigen_similarity():
    a = _RNG.normal(size=(8, 8)) + 1j * _RNG.normal(size=(8, 8))
    p = np.eye(8)[_RNG.permutation(8)]
    ev_a = np.sort_complex(eigenvalues(a))
    ev_p = np.sort_complex(eigenvalues(p @ a @ p.T))
    assert np.abs(ev_a - ev_p).max() < 1e-8


def check_eigen_trace():
    for _ in range(5):
        a = _RNG.normal(size=(12, 12)) + 1j * _RNG.normal(size=(12, 12))
        assert abs(eigenvalues(a).sum() - np.trace(a)) < 1e-8 * max(1.0, abs(np.trace(a)))


def check_dawson_ode():
    x = np.linspace(-5, 5, 401)
    h = 1e-4
    deriv = (dawson(x + h) - dawson(x - h)) / (2 * h)
    assert np.abs(deriv - (1 - 2 * x * dawson(x))).max() < 1e-6


def check_min_singular_bound():
    for _ in range(5):
        a = _RNG.normal(size=(6, 6)) + 1j * _RNG.normal(size=(6, 6))
        v = _RNG.normal(size=6) + 1j * _RNG.normal(size=6)
        assert min_singular_value(a) <= np.linalg.norm(a @ v) / np.linalg.norm(v) + 1e-12


def check_drift_identities():
    for model in _random_models(10):
        assert np.abs(model.drift - model.drift.T).max() < 1e-12
        assert fluctuation_dissipation_residual(model) < 1e-12 * model.n_atoms


def check_amc_collective_mode():
    n = 7
    model = mirror_drift(amc_positions(n))
    ev = np.sort(eigenvalues(model.drift).real)
    assert abs(ev[0] + n / 2) < 1e-10
    assert np.abs(ev[1:]).max() < 1e-10


def check_translation_invariance():
    array = infinite_lattice(6, 0.31)
    shifted = AtomArray(array.positions + 0.177, geometry="infinite")
    s0 = smatrix(infinite_drift(array), 0.7, 0.4).matrix
    s1 = smatrix(infinite_drift(shifted), 0.7, 0.4).matrix
    assert np.abs(np.abs(s0) - np.abs(s1)).max() < 1e-10


def check_unitarity():
    for model in _random_models(10):
        s = smatrix(model, 0.0, float(_RNG.uniform(-2, 2))).matrix
        assert np.abs(s.conj().T @ s - np.eye(model.n_ports)).max() < 1e-10


def check_inverse_identity():
    for model in _random_models(10):
        gp = float(_RNG.uniform(0.2, 2.0))
        w = float(_RNG.uniform(-2, 2))
        s = smatrix(model, gp, w).matrix
        sinv = inverse_smatrix(model, gp, w)
        assert np.abs(sinv @ s - np.eye(model.n_ports)).max() < 1e-8


def check_subunitarity():
    for model in _random_models(10):
        s = smatrix(model, float(_RNG.uniform(0.1, 3.0)), float(_RNG.uniform(-2, 2))).matrix
        assert np.linalg.svd(s, compute_uv=False)[0] <= 1 + 1e-9


def check_reciprocity_and_parity():
    for _ in range(5):
        n = int(_RNG.integers(2, 25))
        model = infinite_drift(infinite_lattice(n, float(_RNG.uniform(0.1, 0.9))))
        s = smatrix(model, float(_RNG.uniform(0.0, 2.0)), float(_RNG.uniform(-2, 2))).matrix
        assert abs(s[0, 0] - s[1, 1]) < 1e-10
        assert abs(abs(s[0, 1]) - abs(s[1, 0])) < 1e-10


def check_amc_equivalence():
    n = 5
    model = mirror_drift(amc_positions(n))
    for w in np.linspace(-5 * n, 5 * n, 41):
        matrix_val = abs(smatrix(model, n * 1.0, w).matrix[0, 0]) ** 2
        assert abs(matrix_val - amc_analytic_output(n, 1.0, n * 1.0, w)) < 1e-10


def check_cpa_zero_witness():
    rates = Rates.from_purcell(10.0)
    for _ in range(5):
        model = _random_mirror(int(_RNG.integers(5, 30)))
        tuning = cpa_tuning(model, rates)
        s = smatrix(model, tuning.gamma_prime, tuning.omega).matrix
        assert min_singular_value(s) < 1e-6


def check_ensemble_determinism():
    spec = DisorderSpec(n_atoms=12, sigma=0.1, master_seed=42, n_realizations=8)
    rates = Rates.from_purcell(10.0)
    a = ensemble_efficiency(spec, rates, "characterized")
    b = ensemble_efficiency(spec, rates, "characterized")
    c = ensemble_efficiency(spec, rates, "characterized", threads=4)
    assert a.records == b.records == c.records


def check_zero_sigma_strategies_coincide():
    spec = DisorderSpec(n_atoms=9, sigma=0.0, master_seed=3, n_realizations=4)
    rates = Rates.from_purcell(10.0)
    fixed = strategy_fixed_amc(spec.n_atoms, rates)
    mean = strategy_ensemble_mean(spec, rates)
    char = strategy_characterized(build_drift(sample_positions(spec, 0)), rates)
    assert abs(fixed.gamma_eng - mean.gamma_eng) < 1e-9
    assert abs(fixed.gamma_eng - char.gamma_eng) < 1e-9
    assert abs(mean.omega) < 1e-9 and abs(char.omega) < 1e-9


def check_infinite_lattice_absorption():
    rates = Rates.from_purcell(10.0)
    prev = 0.0
    for n in (5, 10, 20, 40):
        model = infinite_drift(infinite_lattice(n, 0.25))
        tuning = cpa_tuning(model, rates)
        probe = Rates(1.0, tuning.gamma_eng, rates.gamma_free)
        p_abs = detection_metrics(model, probe, tuning.omega).p_abs
        assert p_abs > prev
        prev = p_abs
    model = infinite_drift(infinite_lattice(10, 1.0))
    tuning = cpa_tuning(model, rates)
    probe = Rates(1.0, tuning.gamma_eng, rates.gamma_free)
    assert abs(detection_metrics(model, probe, tuning.omega).p_abs - 0.5) < 1e-9


def check_chiral_conservation():
    for _ in range(10):
        rates = ChiralRates(
            gamma_plus=float(_RNG.uniform(0.5, 2.0)),
            gamma_minus=float(_RNG.uniform(0.0, 0.5)),
            gamma_eng=float(_RNG.uniform(0.1, 2.0)),
            gamma_free=float(_RNG.uniform(0.0, 0.5)),
        )
        sc = single_atom_scattering(rates)
        assert abs(sc.t_plus**2 + sc.r_plus**2 + sc.a_plus - 1) < 1e-12
        total = rates.gamma_plus + rates.gamma_minus + rates.gamma_prime
        assert abs(sc.beta_plus + sc.beta_minus + rates.gamma_prime / total - 1) < 1e-12


def check_chiral_monotone():
    etas = [
        chiral_efficiency(ChiralRates(1.0, 0.05, g, 0.1)).eta_exact
        for g in np.linspace(0.2, 3.0, 12)
    ]
    assert all(b > a for a, b in zip(etas, etas[1:]))


def check_levels_quadratic_scaling():
    p = DoubleLambdaParams(0.1, 0.2, 5.0, 6.0, 1.0, 1.2, 0.05, 0.02)
    doubled = DoubleLambdaParams(0.2, 0.4, 5.0, 6.0, 1.0, 1.2, 0.05, 0.02)
    r1, r2 = effective_rates(p), effective_rates(doubled)
    for a, b in zip(r1, r2):
        assert abs(b - 4 * a) < 1e-12 * max(1.0, abs(b))


def check_nonlinearity_monotone():
    for n in (5, 10, 13):
        vals = [nonlinearity_estimate(m, n).p_success for m in range(1, n + 1)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
    for m in (1, 2, 3):
        vals = [nonlinearity_estimate(m, n).p_success for n in range(m, m + 10)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


CHECKS = [
    ("eigenvalues invariant under similarity", check_eigen_similarity),
    ("eigenvalue sum equals trace", check_eigen_trace),
    ("dawson satisfies F' = 1 - 2xF", check_dawson_ode),
    ("min singular value lower-bounds Rayleigh quotients", check_min_singular_bound),
    ("drift symmetric and damping identity holds", check_drift_identities),
    ("antinode lattice has a single collective mode", check_amc_collective_mode),
    ("translation changes only scattering phases", check_translation_invariance),
    ("lossless scattering is unitary", check_unitarity),
    ("inverse scattering matrix inverts S", check_inverse_identity),
    ("lossy scattering is sub-unitary", check_subunitarity),
    ("reciprocity and ordered-array parity", check_reciprocity_and_parity),
    ("antinode lattice matches one-mode closed form", check_amc_equivalence),
    ("tuned scattering matrix has a zero", check_cpa_zero_witness),
    ("ensembles deterministic, serial == parallel", check_ensemble_determinism),
    ("zero disorder collapses all strategies", check_zero_sigma_strategies_coincide),
    ("infinite lattice absorption: 1/2 at a=1, ->1 at a=1/4", check_infinite_lattice_absorption),
    ("chiral flux conservation", check_chiral_conservation),
    ("chiral efficiency monotone in engineered rate", check_chiral_monotone),
    ("effective rates quadratic in drive", check_levels_quadratic_scaling),
    ("multi-photon success probability monotone", check_nonlinearity_monotone),
]


def run_all(verbose: bool = True) -> int:
    failures = 0
    for name, check in CHECKS:
        try:
            check()
        except Exception as err:  # noqa: BLE001 - every violation must be reported
            failures += 1
            if verbose:
                print(f"[FAIL] {name}: {err}")
        else:
            if verbose:
                print(f"[ ok ] {name}")
    return failures


def main() -> int:
    failures = run_all()
    if failures:
        print(f"{failures} invariant(s) violated")
        return 1
    print(f"all {len(CHECKS)} invariants hold")
    return 0


if __name__ == "__main__":
    sys.exit(main())
