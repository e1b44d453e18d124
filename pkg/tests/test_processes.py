import numpy as np
import pytest

from agingmetric import processes as pr
from agingmetric.errors import DomainError
from agingmetric.potentials import ElasticModuli, ExponentialRatePotential, QuadraticPotential, SRPolynomial, UAPolynomial

from oracles import SR_INITIAL_STRESS


def ua_spec():
    return pr.ProcessSpec(pr.ProcessKind.UA, UAPolynomial(-5e-4, 1e-4, -0.035, 1e-4), QuadraticPotential(-1.0))


def sr_spec(eta_star=0.1):
    return pr.ProcessSpec(
        pr.ProcessKind.SR,
        SRPolynomial(-0.1, -0.1, -0.1, 0.0, -1.0),
        ExponentialRatePotential(1.0, 0.0),
        ElasticModuli.from_young_poisson(100.0, 0.3),
        eta_star=eta_star,
    )


def creep_spec(force):
    return pr.ProcessSpec(
        pr.ProcessKind.CREEP,
        SRPolynomial(-0.2, -0.1499995, -0.1, -1.9, -0.1),
        ExponentialRatePotential(1.0, 0.0),
        ElasticModuli.from_young_poisson(1.0, 0.3),
        force=force,
    )


def drift(spec, tr):
    J = pr.first_integral(spec, tr.strain_var, tr.lapse)
    return np.max(np.abs(J - J[0])) / abs(J[0])


@pytest.mark.parametrize("S0", [1.0, 1.3, 1.9])
def test_ua_conserves_first_integral_and_stops(S0):
    spec = ua_spec()
    tr = pr.integrate(spec, pr.ProcessState(0.0, S0), 1000.0, tol=1e-10)
    assert tr.termination.reason == "stopping_curve"
    assert drift(spec, tr) <= 1e-8
    # lapse never decreases, volume never grows
    assert np.all(np.diff(tr.lapse) >= -1e-14)
    assert np.all(np.diff(tr.strain_var) <= 1e-14)


@pytest.mark.parametrize("eta_star", [0.1, 0.25])
def test_sr_closed_form_and_initial_stress(eta_star):
    spec = sr_spec(eta_star)
    tr = pr.integrate(spec, pr.ProcessState(0.0, 1.0), 50.0, tol=1e-10)
    g = spec.ground
    closed = np.sqrt(1.0 + (g.b0 / g.q2) * tr.strain_var)
    assert np.max(np.abs(tr.lapse - closed)) <= 1e-7
    sig = pr.stress_output("sr", tr, spec)["sigma_zz"]
    assert sig[0] == pytest.approx(SR_INITIAL_STRESS[eta_star])
    assert drift(spec, tr) <= 1e-8
    assert tr.termination.reason == "psi_deactivation"


def test_creep_fails_under_large_force():
    spec = creep_spec(3.0)
    ok, margin = pr.creep_threshold(spec, pr.ProcessState(0.0, 1.0))
    assert ok and margin > 0
    tr = pr.integrate(spec, pr.ProcessState(0.0, 1.0), 1e5, tol=1e-10)
    assert tr.termination.reason == "ductile_failure"
    assert tr.strain_var[-1] == pytest.approx(spec.eta_cap, abs=1e-6)


def test_inactive_state_returns_immediately():
    spec = sr_spec(0.0)
    tr = pr.integrate(spec, pr.ProcessState(0.0, 1.0), 10.0)
    assert tr.termination.reason == "inactive_at_start"
    assert len(tr) == 1
    held = tr.sample([0.0, 3.0])
    np.testing.assert_allclose(held, [[0.0, 1.0], [0.0, 1.0]])


def test_ua_rejects_state_outside_region():
    spec = ua_spec()
    with pytest.raises(DomainError) as err:
        pr.ua_rhs(pr.ProcessState(0.0, 3.0), spec)
    assert err.value.distance < 0


def test_spec_checks_pairing():
    with pytest.raises(DomainError):
        pr.ProcessSpec(pr.ProcessKind.UA, SRPolynomial(-0.1, -0.1, -0.1, 0.0, -1.0), QuadraticPotential(-1.0))
    with pytest.raises(DomainError):
        pr.ProcessSpec(pr.ProcessKind.SR, SRPolynomial(-0.1, -0.1, -0.1, 0.0, -1.0), ExponentialRatePotential(1.0))


def test_sample_holds_terminal_state_after_stop():
    spec = ua_spec()
    tr = pr.integrate(spec, pr.ProcessState(0.0, 1.0), 1000.0)
    out = tr.sample([tr.times[-1] + 5.0, -1.0])
    np.testing.assert_allclose(out[0], [tr.strain_var[-1], tr.lapse[-1]])
    assert np.all(np.isnan(out[1]))


def test_sample_is_nan_after_failure():
    spec = creep_spec(3.0)
    tr = pr.integrate(spec, pr.ProcessState(0.0, 1.0), 1e5)
    assert np.all(np.isnan(tr.sample([tr.times[-1] + 1.0])))


def test_rod_kinematics_density():
    rk = pr.RodKinematics.from_strains(-0.01, 0.02)
    assert rk.density_ratio == pytest.approx(np.exp(0.03), rel=1e-12)
