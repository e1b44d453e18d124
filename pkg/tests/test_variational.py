import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agingmetric.errors import DomainError
from agingmetric.kinematics import AdmMetric, DeformationJet, rod_extrinsic_curvature, rod_metric
from agingmetric.potentials import ElasticModuli, InvariantBased, QuadraticPotential, TwoPhase1D, UAPolynomial
from agingmetric.variational import (
    constraint_residual,
    energy_balance_residual,
    first_pk_finite_difference,
    isotropic_projection,
    metric_lagrangian,
    moduli_from_ground_state,
    rod_strain_energy,
    strain_energy,
    stress_tensors,
)

from oracles import ISOTROPIC_ENERGY_COEFF, two_phase_gap


@given(st.floats(-0.3, 0.3))
def test_isotropic_strain_energy(eps):
    mod = ElasticModuli.from_lame(1.0, 1.0)
    assert strain_energy(eps * np.eye(3), mod) == pytest.approx(ISOTROPIC_ENERGY_COEFF * eps * eps, abs=1e-15)


def test_rod_energy_deviatoric_part():
    # diag(ev - ed/2, ev - ed/2, ev + ed) has |dev E|^2 = (3/2) ed^2, so the
    # shear part of the rod form is mu |dev E|^2.
    mod = ElasticModuli.from_young_poisson(3.0, 0.2)
    ev, ed = 0.01, -0.02
    E = np.diag([ev - ed / 2, ev - ed / 2, ev + ed])
    dev = E - np.trace(E) / 3 * np.eye(3)
    shear = rod_strain_energy(ev, ed, mod) - rod_strain_energy(ev, 0.0, mod)
    assert shear == pytest.approx(mod.mu * np.trace(dev @ dev), rel=1e-12)
    assert rod_strain_energy(ev, 0.0, mod) == pytest.approx(0.5 * mod.bulk_K * ev * ev)


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_first_pk_is_energy_gradient(seed):
    rng = np.random.default_rng(seed)
    F = np.eye(3) + 0.2 * rng.standard_normal((3, 3))
    if np.linalg.det(F) <= 0:
        F[:, 0] *= -1
    A = rng.standard_normal((3, 3))
    g = np.eye(3) + 0.1 * (A + A.T)
    mod = ElasticModuli.from_lame(rng.uniform(0.5, 2), rng.uniform(0.1, 1))
    jet = DeformationJet(F)
    st_ = stress_tensors(jet, g, mod)
    np.testing.assert_allclose(st_.first_pk, first_pk_finite_difference(jet, g, mod), rtol=1e-6, atol=1e-8)


def test_eshelby_structure():
    F = np.diag([1.05, 0.98, 1.01])
    V = np.array([0.1, 0.0, -0.2])
    mod = ElasticModuli.from_lame(1.0, 0.5)
    s = stress_tensors(DeformationJet(F, V), np.eye(3), mod)
    f = s.strain_energy_density
    assert s.eshelby[0, 0] == pytest.approx(f)
    np.testing.assert_allclose(s.eshelby[0, 1:], 0.0)
    np.testing.assert_allclose(s.eshelby[1:, 1:], f * np.eye(3) - s.second_pk)
    np.testing.assert_allclose(s.eshelby[1:, 0], -s.first_pk @ V)


def test_hooke_uniaxial_small_strain():
    # The energy carries (mu/2) Tr E^2, so its stress is mu E + lam Tr(E) I:
    # the textbook shear modulus is mu/2.
    mod = ElasticModuli.from_lame(1.0, 0.6)
    eff = ElasticModuli.from_lame(mod.mu / 2.0, mod.lam)
    eps, nu = 1e-7, eff.poisson_nu
    F = np.diag([1 - nu * eps, 1 - nu * eps, 1 + eps])
    s = stress_tensors(DeformationJet(F), np.eye(3), mod)
    assert s.cauchy[2, 2] / eps == pytest.approx(eff.young_Y, rel=1e-5)
    assert abs(s.cauchy[0, 0]) < 1e-5 * abs(s.cauchy[2, 2])


def test_stress_rejects_inverted_jacobian():
    with pytest.raises(DomainError):
        DeformationJet(np.diag([1.0, -1.0, 1.0]))


def test_metric_lagrangian_sums_terms():
    m = AdmMetric(1.2, None, rod_metric(-0.01, 0.0))
    K = rod_extrinsic_curvature(-0.2, 0.0, 1.2)
    F = UAPolynomial(-5e-4, 1e-4, -0.035, 1e-4)
    chi = QuadraticPotential(-1.0)
    L = metric_lagrangian(F, chi, 0.5, 0.25, m, K, divN=2.0, R=4.0, strain_var=-0.01)
    assert L == pytest.approx(F.value(1.2, -0.01) + chi.of_curvature(K) + 0.5 * 4.0 + 0.25 * 4.0)


def test_constraint_vanishes_on_ua_field():
    F = UAPolynomial(-5e-4, 1e-4, -0.035, 1e-4)
    chi = QuadraticPotential(-1.0)
    S, xi = 1.3, -0.002
    arg = F.constraint_part(S, xi) / chi.alpha
    rate = -S * np.sqrt(arg)
    res = constraint_residual(F, chi, AdmMetric(S, None, rod_metric(xi, 0.0)), rod_extrinsic_curvature(rate, 0.0, S), strain_var=xi)
    assert abs(res) < 1e-15


def test_energy_balance_of_exact_data():
    t = np.linspace(0.0, 1.0, 50) ** 2
    r = energy_balance_residual(t, 3.0 * t + 1.0, flux=3.0)
    np.testing.assert_allclose(r, 0.0, atol=1e-12)


@pytest.mark.parametrize("t,E", [(np.arange(2.0), np.arange(2.0)), (np.arange(4.0), np.arange(3.0))])
def test_energy_balance_input_errors(t, E):
    with pytest.raises(DomainError):
        energy_balance_residual(t, E)


def test_isotropic_projection_recovers_coefficients():
    d = np.eye(3)
    e = 2.0 * np.einsum("bc,da->abcd", d, d) + 0.7 * np.einsum("ab,cd->abcd", d, d)
    two_mu, lam, res = isotropic_projection(e)
    assert (two_mu, lam) == pytest.approx((2.0, 0.7))
    assert res < 1e-13


@pytest.mark.parametrize("mode", ["trace_cube", "det"])
def test_ground_state_moduli_at_zero_strain(mode):
    F = InvariantBased({(1, 0, 0): 0.0, (0, 1, 0): 0.8, (2, 0, 0): 0.6}, mode)
    m = moduli_from_ground_state(F, np.zeros((3, 3)))
    np.testing.assert_allclose(m.C, 0.0, atol=1e-15)
    # lam = F11(0) and 2 mu = 2 F2
    assert m.lam == pytest.approx(2 * 0.6)
    assert m.two_mu == pytest.approx(2 * 0.8)
    assert m.isotropy_residual < 1e-12


def test_ground_state_moduli_second_differential():
    F = InvariantBased({(1, 0, 0): 0.3, (0, 1, 0): 0.5, (0, 0, 1): -0.2, (1, 1, 0): 0.1, (0, 0, 2): 0.05}, "det")
    rng = np.random.default_rng(11)
    E0 = 0.1 * rng.standard_normal((3, 3))
    B = rng.standard_normal((3, 3))
    m = moduli_from_ground_state(F, E0)
    h = 1e-4
    val = lambda s: F.value_at(F.invariants(E0 + s * B))
    d1 = (val(h) - val(-h)) / (2 * h)
    d2 = (val(h) - 2 * val(0.0) + val(-h)) / h**2
    assert np.sum(m.C * B.T) == pytest.approx(d1, rel=1e-7)
    assert np.einsum("abcd,ab,cd->", m.e, B, B) == pytest.approx(d2, rel=1e-5)


def test_one_dimensional_moduli():
    F = TwoPhase1D(0.0, 1.0, 0.7, 1.3)
    m0, m1 = moduli_from_ground_state(F, 0.0), moduli_from_ground_state(F, 1.3)
    assert m1.stiffness - m0.stiffness == pytest.approx(two_phase_gap(0.7, 1.3))
    assert m0.young == pytest.approx(m0.stiffness / 2)


def test_moduli_reject_unknown_energy():
    with pytest.raises(DomainError):
        moduli_from_ground_state(object(), 0.0)
