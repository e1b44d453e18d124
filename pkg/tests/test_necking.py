import numpy as np
import pytest

from agingmetric.errors import DomainError, NoConnectionError
from agingmetric.necking import (
    NeckingModel,
    classify_equilibria,
    critical_load,
    critical_load_quadrature,
    kink_profile,
    necking_rhs,
    shooting_defect,
    wave_field,
)
from agingmetric.potentials import QuadraticPotential

from oracles import (
    NECKING_CENTRE_STRETCH,
    NECKING_CRITICAL_LOAD,
    NECKING_DRAWN_STRETCH,
    necking_eigenvalue_sq,
)


@pytest.fixture(scope="module")
def profile():
    return kink_profile(NeckingModel())


def test_critical_load_matches_oracle(profile):
    assert profile.load_excess == pytest.approx(NECKING_CRITICAL_LOAD, abs=1e-10)
    assert critical_load_quadrature(NeckingModel()) == pytest.approx(NECKING_CRITICAL_LOAD, abs=1e-12)


def test_kink_endpoints_and_monotone(profile):
    l0, lc, l1 = profile.equilibria
    assert l0 == pytest.approx(1.0, abs=1e-12)
    assert lc == pytest.approx(NECKING_CENTRE_STRETCH, abs=1e-9)
    assert l1 == pytest.approx(NECKING_DRAWN_STRETCH, abs=1e-9)
    assert abs(profile.stretch[0] - l0) <= 1e-6
    assert abs(profile.stretch[-1] - l1) <= 1e-6
    assert np.all(np.diff(profile.stretch) >= 0)
    np.testing.assert_allclose(profile.density, 1.0 / profile.stretch)


def test_equilibria_types_and_eigenvalues():
    m = NeckingModel().with_load_excess(NECKING_CRITICAL_LOAD)
    eqs = classify_equilibria(m)
    assert [e.kind for e in eqs] == ["saddle", "center", "saddle"]
    for e in eqs:
        mu2 = necking_eigenvalue_sq(e.stretch, NECKING_CRITICAL_LOAD)
        for w in e.eigenvalues:
            assert abs(w * w - mu2) <= 1e-10


def test_equilibria_are_rest_points():
    m = NeckingModel().with_load_excess(NECKING_CRITICAL_LOAD)
    for e in classify_equilibria(m):
        assert necking_rhs(e.stretch, 0.0, m) == pytest.approx(0.0, abs=1e-13)


def test_defect_changes_sign_across_critical_load():
    base = NeckingModel()
    lo = shooting_defect(base.with_load_excess(NECKING_CRITICAL_LOAD - 0.01))[0]
    hi = shooting_defect(base.with_load_excess(NECKING_CRITICAL_LOAD + 0.01))[0]
    assert lo * hi < 0


def test_fixed_load_without_connection_raises():
    with pytest.raises(NoConnectionError):
        kink_profile(NeckingModel(), search_load=False)


def test_potential_requirements():
    with pytest.raises(DomainError):
        NeckingModel(chi=QuadraticPotential(-1.0))


def test_wave_field_travels(profile):
    X = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(wave_field(profile, X + 2.0, 2.0), wave_field(profile, X, 0.0))
    assert wave_field(profile, np.array([-1e6]), 0.0)[0] == profile.equilibria[0]
