import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from agingmetric.errors import DomainError
from agingmetric.kinematics import (
    AdmMetric,
    DeformationJet,
    ExtrinsicCurvature,
    StrainConvention,
    adm_assemble,
    advect_mass_1d,
    cauchy_green,
    elastic_strain_4d,
    extrinsic_curvature,
    flow_vector,
    inelastic_strain_4d,
    mass_density,
    rod_extrinsic_curvature,
    rod_metric,
    spd_log_ratio,
    strain_linear,
    strain_log,
)

finite = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)


def spd(rng, n=3, spread=1.0):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.exp(rng.uniform(-spread, spread, n))
    g = (Q * lam) @ Q.T
    return 0.5 * (g + g.T)


@st.composite
def adm_metrics(draw):
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    S = draw(st.floats(0.2, 5.0))
    N = draw(arrays(float, 3, elements=finite))
    return AdmMetric(S, N, spd(rng))


def test_assemble_identity_shift_free():
    m = AdmMetric(2.0, None, np.diag([1.0, 4.0, 9.0]))
    G = adm_assemble(m)
    np.testing.assert_allclose(G.matrix, np.diag([4.0, 1.0, 4.0, 9.0]))
    assert G.sqrt_det == pytest.approx(2.0 * 6.0)


@given(adm_metrics())
@settings(max_examples=60, deadline=None)
def test_assembled_inverse_is_inverse(m):
    G = adm_assemble(m)
    np.testing.assert_allclose(G.matrix @ G.inverse, np.eye(4), atol=1e-10 * np.linalg.cond(G.matrix))
    assert G.sqrt_det == pytest.approx(np.sqrt(np.linalg.det(G.matrix)), rel=1e-9)


@given(adm_metrics())
@settings(max_examples=60, deadline=None)
def test_flow_vector_unit_and_dual(m):
    u, u_flat = flow_vector(m)
    G = adm_assemble(m).matrix
    assert u @ G @ u == pytest.approx(1.0, rel=1e-10)
    # the lowered flow vector has zero spatial components
    np.testing.assert_allclose(G @ u, u_flat, atol=1e-10 * max(1.0, np.abs(G).max()))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lapse=0.0),
        dict(lapse=-1.0),
        dict(lapse=1.0, spatial=np.diag([1.0, -1.0, 1.0])),
        dict(lapse=1.0, spatial=np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])),
    ],
)
def test_invalid_metrics_rejected(kwargs):
    with pytest.raises(DomainError):
        AdmMetric(**kwargs)


def test_jet_rejects_reflection():
    with pytest.raises(DomainError):
        DeformationJet(np.diag([1.0, 1.0, -1.0]))


def test_cauchy_green_blocks():
    F = np.array([[1.0, 0.2, 0.0], [0.0, 1.1, 0.0], [0.0, 0.0, 0.9]])
    V = np.array([0.1, -0.2, 0.3])
    C3, C4 = cauchy_green(DeformationJet(F, V))
    np.testing.assert_allclose(C3, F.T @ F)
    assert C4[0, 0] == pytest.approx(V @ V)
    np.testing.assert_allclose(C4[0, 1:], V @ F)
    np.testing.assert_allclose(C4[1:, 1:], C3)


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=80, deadline=None)
def test_linear_strains_are_additive(seed):
    rng = np.random.default_rng(seed)
    g, g0 = spd(rng, spread=0.4), spd(rng, spread=0.4)
    F = np.eye(3) + 0.3 * rng.standard_normal((3, 3))
    if np.linalg.det(F) <= 0:
        F[:, 0] *= -1
    s = strain_linear(AdmMetric(1.0, None, g), DeformationJet(F), g0)
    assert s.convention is StrainConvention.LINEAR
    np.testing.assert_allclose(s.total, s.elastic + s.inelastic, rtol=0, atol=1e-14)


def test_linear_strain_values():
    g = np.diag([1.0, 1.0, 1.21])
    m = AdmMetric(1.0, None, g)
    s = strain_linear(m, DeformationJet(np.diag([1.0, 1.0, 1.2])))
    np.testing.assert_allclose(np.diag(s.elastic), [0.0, 0.0, 0.5 * (1.44 / 1.21 - 1.0)])
    np.testing.assert_allclose(np.diag(s.inelastic), [0.0, 0.0, 0.5 * (1.0 - 1.0 / 1.21)])


def test_log_strain_of_pure_stretch():
    m = AdmMetric(1.0, None, np.diag([np.exp(0.2), 1.0, 1.0]))
    s = strain_log(m, DeformationJet(np.diag([np.exp(0.3), 1.0, 1.0])))
    np.testing.assert_allclose(np.diag(s.inelastic), [0.1, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(np.diag(s.total), [0.3, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(np.diag(s.elastic), [0.2, 0.0, 0.0], atol=1e-15)


def test_log_matches_linear_to_second_order():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((3, 3))
    A = 0.5 * (A + A.T)
    errs = []
    for d in (1e-2, 5e-3, 2.5e-3):
        g = np.eye(3) + d * A
        s_lin = strain_linear(AdmMetric(1.0, None, g), DeformationJet(np.eye(3)))
        s_log = strain_log(AdmMetric(1.0, None, g), DeformationJet(np.eye(3)))
        errs.append(np.abs(s_log.inelastic - s_lin.inelastic).max())
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    assert all(3.5 <= r <= 4.5 for r in ratios)


def test_log_ratio_rejects_indefinite():
    with pytest.raises(DomainError):
        spd_log_ratio(np.eye(3), np.diag([1.0, -0.5, 1.0]))


def test_four_dimensional_strains():
    m = AdmMetric(1.5, np.array([0.1, 0.0, -0.2]), np.diag([1.0, 2.0, 0.5]))
    jet = DeformationJet(np.diag([1.1, 1.0, 0.9]), np.array([0.3, 0.0, 0.0]))
    E4 = elastic_strain_4d(m, jet)
    assert E4.shape == (3, 4)
    s = strain_linear(m, jet)
    np.testing.assert_allclose(E4[:, 1:], s.elastic, atol=1e-14)
    I4 = inelastic_strain_4d(m)
    np.testing.assert_allclose(I4[:, 1:], s.inelastic, atol=1e-14)


def test_four_dimensional_elastic_strain_vanishes_when_matched():
    F = np.array([[1.1, 0.1, 0.0], [0.0, 0.9, 0.0], [0.0, 0.2, 1.0]])
    V = np.array([0.3, -0.1, 0.2])
    C3, C4 = cauchy_green(DeformationJet(F, V))
    N = np.linalg.solve(C3, C4[1:, 0])
    E4 = elastic_strain_4d(AdmMetric(1.0, N, C3), DeformationJet(F, V))
    np.testing.assert_allclose(E4, 0.0, atol=1e-14)


def test_extrinsic_curvature_block_diagonal():
    g = np.diag([1.0, 2.0, 3.0])
    gdot = np.diag([0.5, 0.2, -0.3])
    K = extrinsic_curvature(AdmMetric(2.0, None, g), gdot)
    np.testing.assert_allclose(np.diag(K.tensor), np.diag(gdot) / np.diag(g) / 2.0)


def test_extrinsic_curvature_lie_derivative_of_constant_shift():
    # g depends on X^1 only and a constant shift transports it: a pure
    # relabelling of material points gives K = 0.
    g = np.diag([1.0, 2.0, 3.0])
    dg = np.zeros((3, 3, 3))
    dg[0] = np.diag([0.1, 0.4, -0.2])
    N = np.array([0.7, 0.0, 0.0])
    K = extrinsic_curvature(AdmMetric(1.0, N, g), N[0] * dg[0], dg)
    np.testing.assert_allclose(K.tensor, 0.0, atol=1e-15)


def test_rod_metric_and_curvature_axial_index():
    g = rod_metric(0.01, 0.02, axial_index=1)
    np.testing.assert_allclose(np.log(np.diag(g)) / 2, [0.0, 0.03, 0.0], atol=1e-15)
    K = rod_extrinsic_curvature(0.1, 0.2, 2.0)
    assert K.trace == pytest.approx(6 * 0.1 / 2.0)
    assert K.volumetric_rate == pytest.approx(0.1 / 2.0)
    assert K.deviatoric_rate == pytest.approx(0.2 / 2.0)


@given(st.floats(-0.2, 0.2), st.floats(-0.2, 0.2), st.floats(0.5, 3.0))
@settings(max_examples=50, deadline=None)
def test_rod_curvature_is_metric_rate(xi_t, eta_t, S):
    dt = 1e-6
    g0, g1 = rod_metric(0.0, 0.0), rod_metric(xi_t * dt, eta_t * dt)
    K_fd = np.linalg.solve(g0, (g1 - g0) / dt) / S
    K = rod_extrinsic_curvature(xi_t, eta_t, S).tensor
    np.testing.assert_allclose(K, K_fd, atol=5e-6)


def test_deviatoric_square_is_trace_free_part():
    K = ExtrinsicCurvature(np.diag([1.0, 2.0, 6.0]))
    dev = K.tensor - np.trace(K.tensor) / 3 * np.eye(3)
    assert K.deviatoric_sq == pytest.approx(np.trace(dev @ dev))


def test_mass_density_scales_with_volume():
    m = AdmMetric(1.0, None, np.diag([4.0, 1.0, 1.0]))
    assert mass_density(2.0, m) == pytest.approx(1.0)


def test_advection_conserves_mass():
    x = np.linspace(0, 1, 64, endpoint=False)
    q = 1.0 + 0.5 * np.sin(2 * np.pi * x)
    N = 0.3 + 0.1 * np.cos(2 * np.pi * x)
    out = q.copy()
    for _ in range(50):
        out = advect_mass_1d(out, N, dx=1 / 64, dt=0.01)
    assert out.sum() == pytest.approx(q.sum(), rel=1e-13)
    with pytest.raises(DomainError):
        advect_mass_1d(q, 10.0, dx=1 / 64, dt=0.01)
