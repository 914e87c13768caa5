"""Experiment runners behind the command-line harness.

Each experiment turns a validated configuration into ``results.csv`` (one
fully expanded table, documented per experiment in docs/cli.md), a
``meta.json`` sidecar (resolved config, seed, library version, wall time,
aggregates) and optionally ``plot.svg``.  All outputs are deterministic
functions of the configuration; meta.json additionally records wall time.
"""

from __future__ import annotations

import csv
import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .chiral import ChiralRates, chain_transmission, chiral_efficiency, single_atom_scattering
from .disorder import DisorderSpec, ensemble_efficiency, eigenvalue_scaling, sample_positions, build_drift
from .levels import DoubleLambdaParams, effective_rates, nonlinearity_estimate, validity_flags
from .model import Rates
from .scattering import amc_analytic_output, cpa_tuning, response_curve
from .svgplot import Figure, write_svg


def _cell(v):
    if isinstance(v, float):
        return repr(float(v))
    return v


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _write_meta(path: Path, config: dict, extra: dict, wall_time: float) -> None:
    payload = {
        "experiment": config["experiment"],
        "config": config,
        "seed": config.get("master_seed"),
        "code_version": __version__,
        "wall_time_s": wall_time,
    }
    payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _rates(config: dict) -> Rates:
    return Rates.from_purcell(config["purcell"], gamma_1d=config["gamma_1d"])


RECORD_FIELDS = (
    "realization", "seed", "status", "p_abs", "eta", "p_loss",
    "kappa_max", "omega_res", "gamma_eng", "omega_probe",
)


def _ensemble_study(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Shared engine for the mirror-geometry disorder studies."""
    rates = _rates(config)
    rows = []
    aggregates = []
    fig = Figure(
        title=config["experiment"],
        xlabel="atom number N",
        ylabel="photon loss p_loss",
        xlog=True,
        ylog=True,
    )
    for strategy in config["strategies"]:
        for sigma in config["sigma"]:
            means, stds = [], []
            for n in config["N"]:
                spec = DisorderSpec(
                    geometry=config["geometry"],
                    n_atoms=n,
                    lattice=config["lattice"],
                    sigma=sigma,
                    master_seed=config["master_seed"],
                    n_realizations=config["n_realizations"],
                )
                result = ensemble_efficiency(spec, rates, strategy, threads=threads)
                for r in result.records:
                    rows.append(
                        (strategy, sigma, n, r.index, r.seed, r.status, r.p_abs, r.eta,
                         r.p_loss, r.kappa_max, r.omega_res, r.gamma_eng, r.omega_probe)
                    )
                aggregates.append(
                    {"strategy": strategy, "sigma": sigma, "N": n, **result.aggregates()}
                )
                means.append(result.mean_p_loss)
                stds.append(result.std_p_loss)
            means = np.array(means)
            stds = np.array(stds)
            fig.add(
                config["N"],
                means,
                label=f"{strategy} sigma={sigma:g}",
                band_lo=list(means - stds),
                band_hi=list(means + stds),
            )
    _write_csv(
        out_dir / "results.csv",
        ("strategy", "sigma", "N") + RECORD_FIELDS,
        rows,
    )
    if plot:
        write_svg(fig, out_dir / "plot.svg")
    config["_aggregates"] = aggregates


def run_fig2a(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    _ensemble_study(config, out_dir, threads, plot)


def run_fig2b(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    _ensemble_study(config, out_dir, threads, plot)


def run_fig2c(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Efficiency curves of one random array tuned to its leading modes."""
    rates = _rates(config)
    spec = DisorderSpec(
        geometry="mirror",
        n_atoms=config["N"][0],
        lattice=config["lattice"],
        sigma=config["sigma"][0],
        master_seed=config["master_seed"],
        n_realizations=1,
    )
    array = sample_positions(spec, 0)
    model = build_drift(array, rates.gamma_1d)
    rows = []
    tunings = []
    fig = Figure(
        title="efficiency vs detuning, mode-by-mode tuning",
        xlabel="detuning omega",
        ylabel="eta",
    )
    points = config["omega_grid"]["points"]
    span_factor = config["omega_grid"]["span"]
    for mode_index in config["mode_indices"]:
        tuning = cpa_tuning(model, rates, mode_index=mode_index)
        probe = Rates(rates.gamma_1d, tuning.gamma_eng, rates.gamma_free)
        span = span_factor * tuning.gamma_prime
        grid = np.linspace(tuning.omega - span, tuning.omega + span, points)
        curve = response_curve(model, probe, grid)
        for w, pa, et, pl in zip(curve.omega, curve.p_abs, curve.eta, curve.p_loss):
            rows.append((mode_index, w, pa, et, pl))
        tunings.append(
            {"mode_index": mode_index, "gamma_prime": tuning.gamma_prime,
             "gamma_eng": tuning.gamma_eng, "omega": tuning.omega}
        )
        fig.add(curve.omega, curve.eta, label=f"mode {mode_index}")
    _write_csv(out_dir / "results.csv", ("mode_index", "omega", "p_abs", "eta", "p_loss"), rows)
    if plot:
        write_svg(fig, out_dir / "plot.svg")
    config["_tunings"] = tunings


def run_infinite_scan(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Per-realization tuned detection on the infinite waveguide vs N."""
    rates = _rates(config)
    rows = []
    fig = Figure(
        title="infinite waveguide, tuned absorption",
        xlabel="atom number N",
        ylabel="p_abs (right-moving input)",
        xlog=True,
    )
    for spacing in config["spacings"]:
        for sigma in config["sigma"]:
            xs, ys = [], []
            for n in config["N"]:
                spec = DisorderSpec(
                    geometry="infinite",
                    n_atoms=n,
                    lattice=float(spacing),
                    sigma=sigma,
                    master_seed=config["master_seed"],
                    n_realizations=1 if sigma == 0 else config["n_realizations"],
                )
                result = ensemble_efficiency(spec, rates, "characterized", threads=threads)
                ok = [r for r in result.records if r.status == "ok"]
                p_abs = np.array([r.p_abs for r in ok])
                rows.append(
                    (spacing, sigma, n,
                     float(p_abs.mean()), float(p_abs.std()),
                     result.mean_eta, result.std_eta,
                     result.mean_p_loss, result.std_p_loss,
                     result.n_failed)
                )
                xs.append(n)
                ys.append(float(p_abs.mean()))
            fig.add(xs, ys, label=f"a={spacing:g} sigma={sigma:g}")
    _write_csv(
        out_dir / "results.csv",
        ("spacing", "sigma", "N", "p_abs_mean", "p_abs_std", "eta_mean", "eta_std",
         "p_loss_mean", "p_loss_std", "n_failed"),
        rows,
    )
    if plot:
        write_svg(fig, out_dir / "plot.svg")


def run_eigen_scaling(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Growth of the largest collective decay rate with atom number."""
    spacings = [s if s == "random" else float(s) for s in config["spacings"]]
    fits = eigenvalue_scaling(
        config["geometry"],
        spacings,
        config["N"],
        sigma=config["sigma"][0],
        n_realizations=config["n_realizations"],
        master_seed=config["master_seed"],
        gamma_1d=config["gamma_1d"],
    )
    rows = []
    fig = Figure(
        title="largest decay rate vs atom number",
        xlabel="atom number N",
        ylabel="kappa_max",
        xlog=True,
        ylog=True,
    )
    for fit in fits:
        for n, k in zip(fit.n_values, fit.kappa_max):
            rows.append((fit.label, n, k, fit.alpha, fit.residual))
        fig.add(fit.n_values, fit.kappa_max, label=f"{fit.label}: alpha={fit.alpha:.2f}")
    _write_csv(out_dir / "results.csv", ("spacing", "N", "kappa_max", "alpha", "residual"), rows)
    if plot:
        write_svg(fig, out_dir / "plot.svg")
    config["_fits"] = [
        {"spacing": f.label, "alpha": f.alpha, "residual": f.residual} for f in fits
    ]


def run_chiral_sweep(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Exact vs first-order chain efficiency over the backscatter ratio."""
    p = config["chiral"]
    rows = []
    fig = Figure(
        title="chiral chain detection efficiency",
        xlabel="gamma_minus / gamma_plus",
        ylabel="eta",
    )
    exact, first = [], []
    ratios = config["gamma_ratios"]
    for ratio in ratios:
        rates = ChiralRates(
            gamma_plus=p["gamma_plus"],
            gamma_minus=ratio * p["gamma_plus"],
            gamma_eng=p["gamma_eng"],
            gamma_free=p["gamma_free"],
        )
        eff = chiral_efficiency(rates)
        rows.append((ratio, eff.eta_exact, eff.eta_first_order))
        exact.append(eff.eta_exact)
        first.append(eff.eta_first_order)
    _write_csv(out_dir / "results.csv", ("gamma_ratio", "eta_exact", "eta_first_order"), rows)
    if plot:
        fig.add(ratios, exact, label="exact branching")
        fig.add(ratios, first, label="first order")
        write_svg(fig, out_dir / "plot.svg")
    sc = single_atom_scattering(
        ChiralRates(p["gamma_plus"], 0.0, p["gamma_eng"], p["gamma_free"])
    )
    config["_directional_transmission"] = {
        "t_plus": sc.t_plus,
        "chain_10": chain_transmission(sc.t_plus, 10),
    }


def run_levels_report(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Effective rates, regime flags and the nonlinearity estimate."""
    params = DoubleLambdaParams(**config["levels"])
    rates = effective_rates(params)
    report = validity_flags(params, threshold=config["threshold"])
    nl = nonlinearity_estimate(config["nonlinearity"]["m"], config["nonlinearity"]["n_atoms"])
    row = (
        rates.gamma_1d_eff, rates.gamma_eng_eff, rates.gamma_dephase,
        report.parasitic_ratio, report.parasitic_ok,
        report.cpa_ratio, report.cpa_ok,
        config["nonlinearity"]["m"], config["nonlinearity"]["n_atoms"],
        nl.delta_p_abs, nl.p_success,
    )
    _write_csv(
        out_dir / "results.csv",
        ("gamma_1d_eff", "gamma_eng_eff", "gamma_dephase",
         "parasitic_ratio", "parasitic_ok", "cpa_ratio", "cpa_ok",
         "m_photons", "n_atoms", "nonlin_delta_p_abs", "nonlin_p_success"),
        [row],
    )


def run_amc_analytic(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    """Closed-form antinode-lattice detector metrics at ideal tuning."""
    rates = _rates(config)
    rows = []
    fig = Figure(
        title="ideal antinode-lattice detector",
        xlabel="atom number N",
        ylabel="p_loss",
        xlog=True,
        ylog=True,
    )
    xs, ys = [], []
    for n in config["N"]:
        gamma_prime = n * rates.gamma_1d
        gamma_eng = gamma_prime - rates.gamma_free
        if gamma_eng <= 0:
            raise ValueError(f"N={n} too small for purcell={config['purcell']}")
        p_abs = 1.0 - amc_analytic_output(n, rates.gamma_1d, gamma_prime, 0.0)
        eta = p_abs * gamma_eng / gamma_prime
        rows.append((n, p_abs, eta, 1.0 - eta, 2.0 * n * rates.gamma_1d))
        xs.append(n)
        ys.append(1.0 - eta)
    _write_csv(out_dir / "results.csv", ("N", "p_abs", "eta", "p_loss", "bandwidth"), rows)
    if plot:
        fig.add(xs, ys, label="1/(N*P)")
        write_svg(fig, out_dir / "plot.svg")


def run_selftest(config: dict, out_dir: Path, threads: int, plot: bool) -> None:
    from .selftest import run_all

    failures = run_all()
    if failures:
        raise RuntimeError(f"selftest failed: {failures} invariant(s) violated")


RUNNERS = {
    "fig2a": run_fig2a,
    "fig2b": run_fig2b,
    "fig2c": run_fig2c,
    "infinite-scan": run_infinite_scan,
    "eigen-scaling": run_eigen_scaling,
    "chiral-sweep": run_chiral_sweep,
    "levels-report": run_levels_report,
    "amc-analytic": run_amc_analytic,
    "selftest": run_selftest,
}


def run(config: dict, out_dir, threads: int = 1, plot: bool = True) -> Path:
    """Execute one experiment, writing its artifact set into ``out_dir``."""
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    runner = RUNNERS[config["experiment"]]
    start = time.perf_counter()
    runner(config, out_path, threads, plot)
    wall = time.perf_counter() - start
    extra = {k: config.pop(k) for k in list(config) if k.startswith("_")}
    if config["experiment"] != "selftest":
        _write_meta(out_path / "meta.json", config, extra, wall)
    return out_path
