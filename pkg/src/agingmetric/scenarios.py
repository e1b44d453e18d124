"""Turn a :class:`ScenarioConfig` into model objects and run it.

:func:`prepare` builds every model object from the configuration and fails
with :class:`ConfigError` or :class:`DomainError` before any numerics run;
:func:`execute` performs the computation and returns a :class:`RunResult`
holding the output table, scalar metrics, manifest entries and the series
to plot.  :func:`run_sweep` repeats this for each sweep value and collates
ordering statistics.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import necking as nk
from . import processes as pr
from . import ring as rg
from .config import ScenarioConfig
from .errors import AgingModelError, ConfigError, DomainError, NumericalFailure
from .potentials import (
    DornPotential,
    ElasticModuli,
    ExponentialRatePotential,
    QuadraticPotential,
    SRPolynomial,
    UAPolynomial,
)
from .variations import verify_rows

__all__ = [
    "Series",
    "RunResult",
    "SweepRow",
    "SweepResult",
    "prepare",
    "execute",
    "run_scenario",
    "run_sweep",
    "ordering",
    "PRIMARY_METRIC",
]

#: Metric whose ordering across a sweep is reported for each process.
PRIMARY_METRIC = {
    "ua": "terminal_shrinkage",
    "sr": "sigma_end",
    "creep": "time_to_failure",
    "necking": "load_excess",
    "ring": "sigma_rr_inner",
    "varcheck": "max_rel_error",
}


@dataclass
class Series:
    """One plotted curve."""

    label: str
    x: np.ndarray
    y: np.ndarray


@dataclass
class RunResult:
    """Outcome of one scenario run.

    Attributes
    ----------
    config : ScenarioConfig
    columns : list of str
        CSV header names.
    rows : list of tuple
        Table body (floats, ints or strings).
    metrics : dict
        Scalars summarising the run (used by sweeps).
    manifest : dict
        JSON-ready diagnostics: termination, events, drift, checks.
    series : list of Series
        Curves for the chart.
    xlabel, ylabel, title : str
        Chart labels.
    xscale, yscale : str
        ``"linear"`` or ``"log"``.
    """

    config: ScenarioConfig
    columns: List[str]
    rows: List[tuple]
    metrics: Dict[str, Any]
    manifest: Dict[str, Any]
    series: List[Series]
    xlabel: str
    ylabel: str
    title: str
    xscale: str = "linear"
    yscale: str = "linear"


@dataclass
class _Prepared:
    config: ScenarioConfig
    payload: Any


# ---------------------------------------------------------------------------
# building model objects
# ---------------------------------------------------------------------------


def _moduli(cfg: ScenarioConfig) -> ElasticModuli:
    return ElasticModuli.from_young_poisson(cfg["Y"], cfg["nu"])


def _rate_potential(cfg: ScenarioConfig):
    kind = cfg["dissipation"]
    if kind == "exponential":
        return ExponentialRatePotential(cfg["D"], cfg["c"])
    if kind == "dorn":
        return DornPotential(cfg["c"], cfg["beta"], cfg["D"])
    raise ConfigError(f"dissipation must be 'exponential' or 'dorn', got {kind!r}")


def _rod_spec(cfg: ScenarioConfig) -> Tuple[pr.ProcessSpec, pr.ProcessState]:
    if cfg.process == "ua":
        spec = pr.ProcessSpec(
            pr.ProcessKind.UA,
            UAPolynomial(cfg["c1"], cfg["c2"], cfg["p"], cfg["k"]),
            QuadraticPotential(cfg["alpha"]),
        )
        return spec, pr.ProcessState(cfg["xi0"], cfg["S0"])
    ground = SRPolynomial(cfg["q1"], cfg["q2"], cfg["b0"], cfg["b1"], cfg["a1"])
    if cfg.process == "sr":
        spec = pr.ProcessSpec(pr.ProcessKind.SR, ground, _rate_potential(cfg), _moduli(cfg), eta_star=cfg["eta_star"])
    else:
        spec = pr.ProcessSpec(
            pr.ProcessKind.CREEP,
            ground,
            _rate_potential(cfg),
            _moduli(cfg),
            force=cfg["force"],
            area0=cfg["A0"],
            load_coupling=cfg["load_coupling"],
            eta_cap=cfg["eta_cap"],
        )
    return spec, pr.ProcessState(cfg["eta0"], cfg["S0"])


def prepare(cfg: ScenarioConfig) -> _Prepared:
    """Build model objects; raises ``ConfigError``/``DomainError`` on bad input."""
    if cfg.sweep is not None:
        raise ConfigError("prepare() takes a single-run configuration; use run_sweep for sweeps")
    if cfg.process in ("ua", "sr", "creep"):
        if not cfg["horizon"] > 0:
            raise ConfigError("horizon must be positive")
        if not cfg["tol"] > 0:
            raise ConfigError("tol must be positive")
        spec, state0 = _rod_spec(cfg)
        if spec.kind is pr.ProcessKind.UA:
            pr.ua_rhs(state0, spec)  # raises DomainError outside the admissible region
        return _Prepared(cfg, (spec, state0))
    if cfg.process == "necking":
        model = nk.NeckingModel(
            cfg["a"], cfg["b"], cfg["lambda0"], cfg["lambda1"], cfg["force_per_area"], cfg["speed"],
            QuadraticPotential(cfg["alpha"]),
        )
        return _Prepared(cfg, model)
    if cfg.process == "ring":
        geom = rg.RingGeometry(cfg["r_outer"], cfg["r_inner"], cfg["r_degraded"])
        state = rg.DegradationState.from_density_jump(cfg["density_jump"], _moduli(cfg), exact=cfg["exact"])
        return _Prepared(cfg, (geom, state))
    if cfg["samples"] < 1:
        raise ConfigError("samples must be at least 1")
    return _Prepared(cfg, None)


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def _drift(J: np.ndarray) -> float:
    J0 = J[0]
    return float(np.max(np.abs(J - J0)) / max(abs(J0), np.finfo(float).tiny))


def _events(traj: pr.Trajectory) -> List[dict]:
    return [{"name": e.name, "t": float(e.t), "state": [float(v) for v in e.y]} for e in traj.events]


def _termination(traj: pr.Trajectory) -> dict:
    t = traj.termination
    return {"reason": t.reason, "time": t.time, "strain_var": t.state.strain_var, "lapse": t.state.lapse, "detail": t.detail}


def _run_rod(cfg: ScenarioConfig, spec: pr.ProcessSpec, state0: pr.ProcessState) -> RunResult:
    traj = pr.integrate(spec, state0, cfg["horizon"], tol=cfg["tol"], n_samples=cfg["samples"])
    t, x, S = traj.times, traj.strain_var, traj.lapse
    J = pr.first_integral(spec, x, S)
    out = pr.stress_output(spec.kind, traj, spec)
    drift = _drift(J)
    manifest = {"termination": _termination(traj), "events": _events(traj), "first_integral_drift": drift}
    label = cfg.name
    if spec.kind is pr.ProcessKind.UA:
        shrink = -out["volume_change"]
        columns = ["t", "xi", "S", "volume_change", "shrinkage", "J"]
        body = np.column_stack([t, x, S, out["volume_change"], shrink, J])
        metrics = {
            "terminal_shrinkage": float(shrink[-1]),
            "stop_time": traj.termination.time,
            "termination": traj.termination.reason,
            "first_integral_drift": drift,
        }
        manifest["checks"] = {"terminal_shrinkage_in_2_to_5_percent": bool(0.02 <= shrink[-1] <= 0.05)}
        series = [Series(label, t, shrink)]
        xlabel, ylabel, title, xscale = "time t", "shrinkage -dV/V", "Unconstrained aging: shrinkage", "linear"
    elif spec.kind is pr.ProcessKind.SR:
        sig = out["sigma_zz"]
        columns = ["t", "eta", "S", "eps_z", "sigma_zz", "J"]
        body = np.column_stack([t, x, S, out["eps_z"], sig, J])
        b0, q2 = spec.ground.b0, spec.ground.q2
        closed = np.sqrt(S[0] ** 2 + (b0 / q2) * (x - x[0]))
        metrics = {
            "sigma_start": float(sig[0]),
            "sigma_end": float(sig[-1]),
            "stop_time": traj.termination.time,
            "termination": traj.termination.reason,
            "first_integral_drift": drift,
            "closed_form_error": float(np.max(np.abs(S - closed))),
        }
        manifest["checks"] = {
            "sigma_monotone_decreasing": bool(np.all(np.diff(sig) <= 0.0)),
            "sigma_positive": bool(np.all(sig > 0)),
        }
        series = [Series(label, t, sig)]
        xlabel, ylabel, title, xscale = "time t", "axial stress sigma_zz", "Stress relaxation", "linear"
    else:
        columns = ["t", "eta", "S", "sigma_zz", "J"]
        body = np.column_stack([t, x, S, out["sigma_zz"], J])
        failed = traj.termination.reason == "ductile_failure"
        metrics = {
            "time_to_failure": traj.termination.time if failed else math.nan,
            "failed": failed,
            "termination": traj.termination.reason,
            "first_integral_drift": drift,
        }
        series = [Series(label, t, x)]
        xlabel, ylabel, title, xscale = "time t", "inelastic stretch eta", "Creep", "log"
    manifest["metrics"] = metrics
    rows = [tuple(r) for r in body]
    return RunResult(cfg, columns, rows, metrics, manifest, series, xlabel, ylabel, title, xscale)


def _run_necking(cfg: ScenarioConfig, model: nk.NeckingModel) -> RunResult:
    prof = nk.kink_profile(model, n_points=cfg["n_points"], search_load=cfg["search_load"])
    eqs = nk.classify_equilibria(model.with_load_excess(prof.load_excess))
    columns = ["s", "stretch", "stretch_tau", "density"]
    body = np.column_stack([prof.s, prof.stretch, prof.stretch_tau, prof.density])
    metrics = {
        "load_excess": prof.load_excess,
        "force_per_area": prof.force_per_area,
        "drawn_stretch": prof.drawn_stretch,
        "matching_defect": prof.matching_defect,
    }
    manifest = {
        "metrics": metrics,
        "equilibria": [
            {"stretch": e.stretch, "kind": e.kind, "eigenvalues": [[float(v.real), float(v.imag)] for v in e.eigenvalues]}
            for e in eqs
        ],
        "checks": {"profile_monotone": bool(np.all(np.diff(prof.stretch) >= 0) or np.all(np.diff(prof.stretch) <= 0))},
    }
    series = [Series(cfg.name, prof.s, prof.stretch)]
    return RunResult(cfg, columns, [tuple(r) for r in body], metrics, manifest, series,
                     "moving coordinate s = X - N t", "stretch lambda", "Necking kink profile")


def _run_ring(cfg: ScenarioConfig, geom: rg.RingGeometry, state: rg.DegradationState) -> RunResult:
    res = rg.ring_stress_state(geom, state, n_grid=cfg["n_grid"])
    columns = ["r", "sigma_rr", "sigma_tt", "curvature_material", "curvature_final"]
    body = np.column_stack([res.r, res.sigma_rr_profile, res.sigma_tt_profile, res.curvature_material, res.curvature_final])
    metrics = {
        "epsilon": state.epsilon,
        "gap": rg.interface_gap(geom, state),
        "sigma_rr_inner": res.sigma_rr_inner,
        "sigma_rr_outer": res.sigma_rr_outer,
        "continuity_residual": res.continuity_residual,
        "final_flatness": res.final_flatness,
        "material_curvature_peak": res.material_curvature_peak,
    }
    manifest = {"metrics": metrics, "checks": {"continuous": res.continuous, "final_metric_flat": res.flat}}
    series = [Series("sigma_rr", res.r, res.sigma_rr_profile), Series("sigma_tt", res.r, res.sigma_tt_profile)]
    return RunResult(cfg, columns, [tuple(r) for r in body], metrics, manifest, series,
                     "radius r", "stress", "Degraded ring: radial profiles")


def _run_varcheck(cfg: ScenarioConfig) -> RunResult:
    reports = verify_rows(cfg["samples"], seed=cfg["seed"], h=cfg["h"])
    columns = ["case", "layout", "samples", "max_rel_error", "passed"]
    rows = [(r.case, r.layout, r.samples, r.max_rel_error, int(r.max_rel_error <= 1e-6)) for r in reports]
    worst = max(r.max_rel_error for r in reports)
    metrics = {"max_rel_error": worst, "all_passed": worst <= 1e-6}
    manifest = {
        "metrics": metrics,
        "seconds": {f"{r.case}/{r.layout}": r.seconds for r in reports},
        "total_seconds": sum(r.seconds for r in reports),
    }
    idx = np.arange(len(reports), dtype=float)
    series = [Series("max relative error", idx, np.array([max(r.max_rel_error, 1e-18) for r in reports]))]
    return RunResult(cfg, columns, rows, metrics, manifest, series,
                     "row index (" + ", ".join(f"{i}={r.case}/{r.layout}" for i, r in enumerate(reports)) + ")",
                     "max relative error", "Variation rows against the finite-difference oracle", yscale="log")


def execute(prep: _Prepared) -> RunResult:
    """Run a prepared scenario.

    Raises
    ------
    NumericalFailure
        If the computation fails; domain violations met while integrating
        are reported as numerical failures with their diagnostic.
    """
    cfg = prep.config
    try:
        if cfg.process in ("ua", "sr", "creep"):
            return _run_rod(cfg, *prep.payload)
        if cfg.process == "necking":
            return _run_necking(cfg, prep.payload)
        if cfg.process == "ring":
            return _run_ring(cfg, *prep.payload)
        return _run_varcheck(cfg)
    except NumericalFailure:
        raise
    except (AgingModelError, FloatingPointError, ArithmeticError) as exc:
        raise NumericalFailure(f"{cfg.name}: {type(exc).__name__}: {exc}") from exc


def run_scenario(cfg: ScenarioConfig) -> RunResult:
    """``execute(prepare(cfg))``."""
    return execute(prepare(cfg))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


@dataclass
class SweepRow:
    value: Any
    result: Optional[RunResult]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.result is not None


@dataclass
class SweepResult:
    config: ScenarioConfig
    key: str
    rows: List[SweepRow]
    orderings: Dict[str, str] = field(default_factory=dict)
    pointwise: Optional[Dict[str, Any]] = None

    @property
    def n_ok(self) -> int:
        return sum(r.ok for r in self.rows)


def ordering(values: Sequence[float]) -> str:
    """``strictly_increasing``, ``strictly_decreasing``, ``constant`` or ``non_monotone``."""
    v = np.asarray([x for x in values], dtype=float)
    if v.size < 2 or np.any(~np.isfinite(v)):
        return "undetermined"
    d = np.diff(v)
    if np.all(d > 0):
        return "strictly_increasing"
    if np.all(d < 0):
        return "strictly_decreasing"
    if np.all(d == 0):
        return "constant"
    return "non_monotone"


def _one(cfg: ScenarioConfig) -> SweepRow:
    value = None
    try:
        return SweepRow(value, run_scenario(cfg))
    except (ConfigError, DomainError, NumericalFailure, ValueError) as exc:
        return SweepRow(value, None, f"{type(exc).__name__}: {exc}")


def _pointwise_order(rows: List[SweepRow], n: int = 201) -> Optional[Dict[str, Any]]:
    """Pointwise ordering of the plotted families on a shared time grid.

    Rod runs hold their terminal state after stopping, so the curves are
    compared over the longest integrated span (ductile failure ends a curve).
    """
    ok = [r for r in rows if r.ok and r.result.config.process in ("ua", "sr")]
    if len(ok) < 2 or len(ok) != len(rows):
        return None
    t_end = max(r.result.rows[-1][0] for r in ok)
    grid = np.linspace(0.0, t_end, n)
    curves = []
    for r in ok:
        s = r.result.series[0]
        y = np.interp(grid, s.x, s.y)
        y[grid > s.x[-1]] = s.y[-1]
        curves.append(y)
    curves = np.array(curves)
    d = np.diff(curves, axis=0)
    return {
        "grid_points": n,
        "t_end": float(t_end),
        "nondecreasing_in_sweep_value": bool(np.all(d >= -1e-12)),
        "nonincreasing_in_sweep_value": bool(np.all(d <= 1e-12)),
    }


def run_sweep(cfg: ScenarioConfig, jobs: int = 1) -> SweepResult:
    """Run one scenario per sweep value and collate the results.

    Sub-runs are independent; with ``jobs > 1`` they run in worker
    processes.  Results are always collated in sweep-value order.
    """
    if cfg.sweep is None:
        raise ConfigError("configuration has no sweep_key / sweep_values")
    key, values = cfg.sweep
    subs = []
    for v in values:
        try:
            subs.append(cfg.single_run(v))
        except ConfigError as exc:
            subs.append(exc)
    runnable = [s for s in subs if isinstance(s, ScenarioConfig)]
    if jobs > 1 and len(runnable) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = iter(list(pool.map(_one, runnable)))
    else:
        done = iter([_one(s) for s in runnable])
    rows = []
    for v, s in zip(values, subs):
        row = SweepRow(v, None, f"ConfigError: {s}") if isinstance(s, ConfigError) else next(done)
        row.value = v
        rows.append(row)
    metric = PRIMARY_METRIC[cfg.process]
    orderings = {}
    if all(r.ok for r in rows):
        names = [k for k, val in rows[0].result.metrics.items() if isinstance(val, (int, float)) and not isinstance(val, bool)]
        for name in names:
            orderings[name] = ordering([r.result.metrics[name] for r in rows])
    else:
        orderings[metric] = "undetermined"
    return SweepResult(cfg, key, rows, orderings, _pointwise_order(rows))
