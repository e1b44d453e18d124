"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line with the measured quantity; the
lines are printed in the terminal summary (see ``conftest.py``) and when
the module is run directly::

    python tests/test_acceptance.py
"""

import math
import time

import numpy as np
import pytest

from agingmetric import processes as pr
from agingmetric.fixtures import load_fixture
from agingmetric.kinematics import (
    AdmMetric,
    DeformationJet,
    rod_extrinsic_curvature,
    rod_metric,
    strain_linear,
    strain_log,
)
from agingmetric.necking import NeckingModel, classify_equilibria, kink_profile
from agingmetric.potentials import ElasticModuli, TwoPhase1D
from agingmetric.ring import DegradationState, RingGeometry, ring_stress_state, shrinkage_from_density
from agingmetric.scenarios import prepare, run_sweep
from agingmetric.variational import constraint_residual, energy_balance_residual
from agingmetric.variations import verify_rows

from oracles import (
    CREEP_MIN_DECADES,
    RING_SHRINK_PER_DENSITY,
    UA_VOLUME_LOSS_BAND,
    necking_eigenvalue_sq,
    two_phase_gap,
)

RESULTS = {}

TOL = 1e-10


def record(number, title, ok, detail):
    RESULTS[number] = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    assert ok, RESULTS[number]


def fixture_trajectories(name):
    """Integrate every member of a fixture sweep; returns (spec, trajectory, seconds)."""
    base = load_fixture(name)
    key, values = base.sweep
    out = []
    for v in values:
        cfg = base.single_run(v).with_values(tol=TOL)
        spec, state0 = prepare(cfg).payload
        t0 = time.perf_counter()
        traj = pr.integrate(spec, state0, cfg["horizon"], tol=TOL, n_samples=cfg["samples"])
        out.append((v, spec, traj, time.perf_counter() - t0))
    return out


@pytest.fixture(scope="module")
def rods():
    return {name: fixture_trajectories(name) for name in ("ua_family", "sr_family", "creep_family")}


def test_criterion_01_variation_rows():
    t0 = time.perf_counter()
    reports = verify_rows(n_samples=100, seed=0)
    elapsed = time.perf_counter() - t0
    worst = max(r.max_rel_error for r in reports)
    record(1, "variation rows vs finite-difference oracle", worst <= 1e-6 and elapsed < 10.0,
           f"max rel error {worst:.2e} over {len(reports)} rows x 100 samples in {elapsed:.1f} s")


def test_criterion_02_first_integrals(rods):
    worst, slowest = 0.0, 0.0
    for trajs in rods.values():
        for _, spec, traj, secs in trajs:
            J = pr.first_integral(spec, traj.strain_var, traj.lapse)
            worst = max(worst, float(np.max(np.abs(J - J[0])) / abs(J[0])))
            slowest = max(slowest, secs)
    record(2, "first-integral conservation", worst <= 1e-8 and slowest < 1.0,
           f"max relative drift {worst:.2e}, slowest trajectory {slowest:.2f} s")


def test_criterion_03_sr_closed_form(rods):
    worst = 0.0
    for _, spec, traj, _ in rods["sr_family"]:
        g = spec.ground
        S0 = traj.lapse[0]
        closed = np.sqrt(S0**2 + (g.b0 / g.q2) * (traj.strain_var - traj.strain_var[0]))
        worst = max(worst, float(np.max(np.abs(traj.lapse - closed))))
    record(3, "SR closed form for S(t)", worst <= 1e-7, f"max |S - closed form| {worst:.2e}")


def test_criterion_04_ua_family():
    sweep = run_sweep(load_fixture("ua_family"))
    shrink = [r.result.metrics["terminal_shrinkage"] for r in sweep.rows]
    lo, hi = UA_VOLUME_LOSS_BAND
    decreasing = all(a > b for a, b in zip(shrink, shrink[1:]))
    in_band = all(lo <= s <= hi for s in shrink)
    record(4, "unconstrained aging family", decreasing and in_band,
           "terminal volume loss " + ", ".join(f"{s:.4f}" for s in shrink) + f" for S0 = {sweep.rows[0].value}..{sweep.rows[-1].value}")


def test_criterion_05_sr_family():
    sweep = run_sweep(load_fixture("sr_family"))
    pw = sweep.pointwise
    ordered = bool(pw and (pw["nondecreasing_in_sweep_value"] or pw["nonincreasing_in_sweep_value"]))
    sigmas = [np.asarray(r.result.series[0].y) for r in sweep.rows]
    monotone = all(np.all(np.diff(s) <= 0.0) for s in sigmas)
    positive = all(s[-1] > 0 and r.result.metrics["termination"] == "psi_deactivation" for s, r in zip(sigmas, sweep.rows))
    ends = ", ".join(f"{r.result.metrics['sigma_end']:.3f}" for r in sweep.rows)
    record(5, "stress relaxation family", ordered and monotone and positive,
           f"pointwise ordered={ordered}, monotone={monotone}, positive rest stress={positive} (sigma_end {ends})")


def test_criterion_06_creep_family():
    sweep = run_sweep(load_fixture("creep_family"))
    forces = [r.value for r in sweep.rows]
    ttf = [r.result.metrics["time_to_failure"] for r in sweep.rows]
    finite = all(math.isfinite(t) for t in ttf)
    decreasing = finite and all(a > b for a, b in zip(ttf, ttf[1:]))
    t1, t3 = ttf[forces.index(1.0)], ttf[forces.index(3.0)]
    decades = math.log10(t1 / t3) if finite else float("nan")
    record(6, "creep time to failure", decreasing and decades >= CREEP_MIN_DECADES,
           "t_f " + ", ".join(f"{t:.4g}" for t in ttf) + f"; force 1 -> 3 shortens by {decades:.2f} decades")


def test_criterion_07_strain_algebra():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        A, B = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
        g = np.eye(3) + 0.1 * (A + A.T)
        g0 = np.eye(3) + 0.1 * (B + B.T)
        F = np.eye(3) + 0.2 * rng.standard_normal((3, 3))
        if np.linalg.det(F) <= 0:
            F[:, 0] *= -1
        s = strain_linear(AdmMetric(1.0, None, g), DeformationJet(F), g0)
        worst = max(worst, float(np.max(np.abs(s.total - s.elastic - s.inelastic))))
    A = rng.standard_normal((3, 3))
    A = 0.5 * (A + A.T)
    errs = []
    for d in (1e-2, 5e-3, 2.5e-3):
        m = AdmMetric(1.0, None, np.eye(3) + d * A)
        lin = strain_linear(m, DeformationJet(np.eye(3)))
        log = strain_log(m, DeformationJet(np.eye(3)))
        errs.append(float(np.max(np.abs(log.inelastic - lin.inelastic))))
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    ok = worst <= 1e-14 and all(3.5 <= r <= 4.5 for r in ratios)
    record(7, "strain algebra", ok,
           f"additivity error {worst:.1e}; log-linear ratios {ratios[0]:.3f}, {ratios[1]:.3f}")


def test_criterion_08_two_phase_gap():
    worst = 0.0
    h = 1e-4
    for c4, Q in ((0.7, 1.3), (2.0, 0.5), (0.1, -2.0)):
        F = TwoPhase1D(0.3, 1.0, c4, Q)
        fd = [(F.value(E + h) - 2 * F.value(E) + F.value(E - h)) / h**2 for E in (0.0, Q)]
        gap = two_phase_gap(c4, Q)
        worst = max(worst, abs((fd[1] - fd[0]) - gap) / abs(gap))
    record(8, "two-phase stiffness gap", worst <= 1e-6, f"max relative deviation {worst:.1e}")


def test_criterion_09_necking():
    prof = kink_profile(NeckingModel())
    eqs = classify_equilibria(NeckingModel().with_load_excess(prof.load_excess))
    kinds = [e.kind for e in eqs]
    resid = max(abs(w * w - necking_eigenvalue_sq(e.stretch, prof.load_excess)) for e in eqs for w in e.eigenvalues)
    l0, _, l1 = prof.equilibria
    ends = max(abs(prof.stretch[0] - l0), abs(prof.stretch[-1] - l1))
    monotone = bool(np.all(np.diff(prof.stretch) >= 0))
    ok = kinds == ["saddle", "center", "saddle"] and resid <= 1e-10 and ends <= 1e-6 and monotone
    record(9, "necking kink", ok,
           f"{'/'.join(kinds)}, eigenvalue residual {resid:.1e}, endpoint error {ends:.1e}, monotone={monotone}")


def test_criterion_10_ring():
    errs = [abs(shrinkage_from_density(d, exact=True) - RING_SHRINK_PER_DENSITY * d) for d in (4e-3, 2e-3, 1e-3)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    geom = RingGeometry(10.0, 9.0, 9.1)
    res = ring_stress_state(geom, DegradationState.from_density_jump(1.5e-3, ElasticModuli.from_young_poisson(1.0, 0.4)))
    ok = (
        all(3.5 <= r <= 4.5 for r in ratios)
        and res.continuity_residual <= 1e-12
        and res.final_flatness <= 1e-8
        and res.material_curvature_peak > 1e-3
    )
    record(10, "degradation ring", ok,
           f"second-order ratios {ratios[0]:.3f}, {ratios[1]:.3f}; continuity {res.continuity_residual:.1e}; "
           f"|K(g_final)| {res.final_flatness:.1e}; |K(g')| peak {res.material_curvature_peak:.3g}")


def test_criterion_11_energy_balance(rods):
    worst = 0.0
    for name in ("ua_family", "sr_family"):
        for _, spec, traj, _ in rods[name]:
            E = pr.process_energy(spec, traj.strain_var, traj.lapse)
            r = energy_balance_residual(traj.times, E)
            dt = float(np.max(np.diff(traj.times)))
            worst = max(worst, float(np.max(np.abs(r))) * dt / float(np.max(np.abs(E))))
    record(11, "energy balance", worst <= 10 * TOL,
           f"max |dE/dt| * dt / max|E| = {worst:.1e} (bound {10 * TOL:.0e})")


def test_criterion_12_constraint(rods):
    worst = 0.0
    for _, spec, traj, _ in rods["ua_family"]:
        rate, _ = pr.process_rates(spec, traj.strain_var, traj.lapse)
        for xi, S, q in zip(traj.strain_var, traj.lapse, rate):
            m = AdmMetric(float(S), None, rod_metric(float(xi), 0.0))
            K = rod_extrinsic_curvature(float(q), 0.0, float(S))
            worst = max(worst, abs(constraint_residual(spec.ground, spec.dissipation, m, K, strain_var=float(xi))))
    record(12, "lapse constraint along UA", worst <= 1e-8, f"max residual {worst:.1e}")


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
