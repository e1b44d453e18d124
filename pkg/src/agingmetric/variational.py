"""Lagrangian densities, stresses and the scalar identities of the model.

The elastic part follows the linear-elastic energy
``f = (mu/2) Tr(E^2) + (lam/2) (Tr E)^2`` of the elastic strain; stresses
are its derivatives with respect to the deformation gradient.  The metric
part collects the ground energy, the dissipative potential and the
gradient terms.  Also here: the lapse constraint, the homogeneous energy
balance and elastic moduli generated by a ground-state energy.

The analytic first-variation rows and their finite-difference oracle
live in :mod:`agingmetric.variations`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .kinematics import AdmMetric, DeformationJet, ExtrinsicCurvature, StrainSet, cauchy_green
from .potentials import (
    Classical1D,
    ElasticModuli,
    InvariantBased,
    TwoPhase1D,
    adjugate3,
)

__all__ = [
    "strain_energy",
    "rod_strain_energy",
    "StressState",
    "stress_tensors",
    "first_pk_finite_difference",
    "metric_lagrangian",
    "constraint_residual",
    "energy_balance_residual",
    "GroundStateModuli",
    "OneDimensionalModuli",
    "moduli_from_ground_state",
    "isotropic_projection",
]


def _elastic(e) -> np.ndarray:
    return np.asarray(e.elastic if isinstance(e, StrainSet) else e, dtype=float)


def strain_energy(e: Union[StrainSet, np.ndarray], mod: ElasticModuli) -> float:
    """Elastic energy density ``(mu/2) Tr(E^2) + (lam/2) (Tr E)^2``.

    Parameters
    ----------
    e : StrainSet or ndarray
        Strain set (its elastic part is used) or a mixed tensor ``E^el``.
    mod : ElasticModuli
    """
    E = _elastic(e)
    tr = np.trace(E)
    return float(0.5 * mod.mu * np.trace(E @ E) + 0.5 * mod.lam * tr * tr)


def rod_strain_energy(eps_v: float, eps_d: float, mod: ElasticModuli) -> float:
    """Rod form ``(K/2) eps_v^2 + (3 mu/2) eps_d^2``."""
    return 0.5 * mod.bulk_K * eps_v**2 + 1.5 * mod.mu * eps_d**2


@dataclass(frozen=True)
class StressState:
    """Stresses generated by the elastic energy at one material point.

    Attributes
    ----------
    first_pk : ndarray
        ``P[I, j] = df / d phi^j_{,I}``.
    second_pk : ndarray
        ``S^I_J = P^I_i phi^i_{,J}``.
    cauchy : ndarray
        ``sigma_ij = J^{-1} h_ik phi^k_{,I} P^I_j``.
    eshelby : ndarray
        4x4 energy-momentum tensor ``b``: ``b^0_0 = f``, ``b^0_J = 0``
        (quasi-static), ``b^I_0 = -P^I_i phi^i_{,0}``, ``b^I_J = f delta - S``.
    strain_energy_density : float
    """

    first_pk: np.ndarray
    second_pk: np.ndarray
    cauchy: np.ndarray
    eshelby: np.ndarray
    strain_energy_density: float


def _spatial(metric) -> np.ndarray:
    if isinstance(metric, AdmMetric):
        return np.asarray(metric.spatial)
    return np.asarray(metric, dtype=float)


def _elastic_strain(jet: DeformationJet, g: np.ndarray) -> np.ndarray:
    C3, _ = cauchy_green(jet)
    return 0.5 * (np.linalg.solve(g, C3) - np.eye(g.shape[0]))


def stress_tensors(jet: DeformationJet, metric, mod: ElasticModuli) -> StressState:
    """Piola-Kirchhoff, Cauchy and Eshelby tensors of the quadratic energy.

    Parameters
    ----------
    jet : DeformationJet
    metric : AdmMetric or ndarray
        Ground metric ``g`` the elastic strain is measured against.
    mod : ElasticModuli
    """
    g = _spatial(metric)
    phi, h, V = jet.spatial_gradient, jet.ambient_metric, jet.velocity
    J = float(np.linalg.det(phi))
    if J <= 0.0:
        raise DomainError("deformation gradient has non-positive Jacobian")
    E = _elastic_strain(jet, g)
    f = strain_energy(E, mod)
    n = g.shape[0]
    M = mod.mu * E + mod.lam * np.trace(E) * np.eye(n)
    # df = Tr(M dE) with dE = g^{-1} dC / 2 and dC = dphi^T h phi + phi^T h dphi.
    D = h @ phi @ M @ np.linalg.inv(g)
    P = D.T
    S = P @ phi
    sigma = h @ phi @ P / J
    b = np.zeros((n + 1, n + 1))
    b[0, 0] = f
    b[1:, 0] = -P @ V
    b[1:, 1:] = f * np.eye(n) - S
    return StressState(first_pk=P, second_pk=S, cauchy=sigma, eshelby=b, strain_energy_density=f)


def first_pk_finite_difference(jet: DeformationJet, metric, mod: ElasticModuli, h: float = 1e-6):
    """Central-difference approximation of ``df / d phi^j_{,I}`` (layout of ``first_pk``)."""
    g = _spatial(metric)
    phi = np.array(jet.spatial_gradient)
    n = phi.shape[0]
    P = np.zeros((n, n))
    for j in range(n):
        for I in range(n):
            vals = []
            for s in (1.0, -1.0):
                p = phi.copy()
                p[j, I] += s * h
                jj = DeformationJet(p, jet.velocity, jet.ambient_metric)
                vals.append(strain_energy(_elastic_strain(jj, g), mod))
            P[I, j] = (vals[0] - vals[1]) / (2.0 * h)
    return P


def metric_lagrangian(
    F,
    chi,
    div_weight: float,
    curvature_weight: float,
    m: AdmMetric,
    K: ExtrinsicCurvature,
    divN: float = 0.0,
    R: float = 0.0,
    strain_var: float = 0.0,
) -> float:
    """Metric Lagrangian density ``F + chi(K) + alpha div_g(N)^2 + beta R(g)``.

    Parameters
    ----------
    F : ground-state energy
        Any form with ``value(lapse, strain_var)``; ``None`` means ``F = 0``.
    chi : dissipative potential
    div_weight, curvature_weight : float
        The coefficients ``alpha`` and ``beta``.
    m : AdmMetric
    K : ExtrinsicCurvature
    divN, R : float
        ``div_g N`` and the scalar curvature of ``g``.
    strain_var : float
        Inelastic strain variable passed to ``F`` (``xi``, ``eta`` or the
        necking stretch).
    """
    fval = 0.0 if F is None else float(_ground_value(F, m.lapse, strain_var))
    return fval + chi.of_curvature(K) + div_weight * divN**2 + curvature_weight * R


def _ground_value(F, lapse, strain_var):
    if hasattr(F, "d_lapse"):
        return F.value(lapse, strain_var)
    return F.value(strain_var)


def constraint_residual(
    F,
    chi,
    m: AdmMetric,
    K: ExtrinsicCurvature,
    R: float = 0.0,
    f: float = 0.0,
    strain_var: float = 0.0,
    curvature_weight: float = 1.0,
) -> float:
    """Residual of the lapse variation in the block-diagonal case.

    ``(F + S dF/dS) + (chi(K) - dchi/dK : K) + beta R - f``.

    ``F = None`` means a vanishing ground energy.
    """
    S = m.lapse
    part = 0.0 if F is None else float(F.value(S, strain_var) + S * F.d_lapse(S, strain_var))
    P = chi.grad_curvature(K)
    legendre = chi.of_curvature(K) - float(np.sum(P * K.tensor))
    return part + legendre + curvature_weight * R - f


def energy_balance_residual(times, energy, flux=0.0) -> np.ndarray:
    """Pointwise residual ``dE/dt - flux`` of the homogeneous energy balance.

    The derivative is a second-order finite difference on the (possibly
    non-uniform) sample times.

    Parameters
    ----------
    times, energy : array_like
        Samples of the total energy density along a trajectory.
    flux : float or array_like
        Energy supplied through the boundary per unit time.
    """
    t = np.asarray(times, dtype=float)
    E = np.asarray(energy, dtype=float)
    if t.shape != E.shape or t.ndim != 1:
        raise DomainError("times and energy must be 1D arrays of equal length")
    if t.size < 3:
        raise DomainError("energy balance needs at least 3 samples")
    return np.gradient(E, t, edge_order=2) - np.asarray(flux, dtype=float)


# ---------------------------------------------------------------------------
# moduli generated by a ground-state energy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroundStateModuli:
    """Linearisation of an invariant-based ground energy about ``E_in``.

    ``F(E_in + B) = F(E_in) + Tr(C B) + (1/2) e[A,B,C,D] B[A,B] B[C,D] + O(B^3)``.

    Attributes
    ----------
    C : ndarray
        ``dF/dE`` (mixed tensor).
    e : ndarray
        Second differential as a 4-index array.
    two_mu, lam : float
        Coefficients of the isotropic projection
        ``e = 2mu delta^B_C delta^D_A + lam delta^B_A delta^D_C``.
    isotropy_residual : float
        Frobenius norm of ``e`` minus that projection.
    """

    C: np.ndarray
    e: np.ndarray
    two_mu: float
    lam: float
    isotropy_residual: float


@dataclass(frozen=True)
class OneDimensionalModuli:
    """One-dimensional moduli: ``stiffness = F''`` and ``young = F''/2``."""

    stiffness: float
    young: float


def isotropic_projection(e: np.ndarray):
    """Least-squares fit of ``e`` by the two isotropic basis tensors.

    Returns ``(two_mu, lam, residual_norm)``.
    """
    n = e.shape[0]
    d = np.eye(n)
    T1 = np.einsum("bc,da->abcd", d, d)
    T2 = np.einsum("ab,cd->abcd", d, d)
    A = np.stack([T1.ravel(), T2.ravel()], axis=1)
    coef, *_ = np.linalg.lstsq(A, e.ravel(), rcond=None)
    resid = float(np.linalg.norm(e.ravel() - A @ coef))
    return float(coef[0]), float(coef[1]), resid


def _invariant_derivatives(E: np.ndarray, mode: str):
    d = np.eye(3)
    grads = [d, 2.0 * E.T]
    hess = [
        np.zeros((3, 3, 3, 3)),
        2.0 * np.einsum("bc,da->abcd", d, d),
    ]
    if mode == "trace_cube":
        grads.append(3.0 * (E @ E).T)
        hess.append(3.0 * (np.einsum("bc,da->abcd", d, E) + np.einsum("bc,da->abcd", E, d)))
    else:
        trE = np.trace(E)
        grads.append(adjugate3(E).T)
        hess.append(
            trE * (np.einsum("ab,cd->abcd", d, d) - np.einsum("bc,ad->abcd", d, d))
            - np.einsum("ab,dc->abcd", d, E)
            - np.einsum("cd,ba->abcd", d, E)
            + np.einsum("da,bc->abcd", E, d)
            + np.einsum("bc,da->abcd", E, d)
        )
    return grads, hess


def moduli_from_ground_state(F, E_in):
    """Elastic response generated by a ground-state energy.

    Parameters
    ----------
    F : InvariantBased, TwoPhase1D or Classical1D
    E_in : ndarray or float
        Inelastic strain about which the energy is expanded.

    Returns
    -------
    GroundStateModuli or OneDimensionalModuli
        For an :class:`InvariantBased` energy, ``C = F1 I + 2 F2 E + 3 F3 E^2``
        (or ``F3 adj E`` for the determinant variant) and the second
        differential ``e``.  For the 1D forms, ``Y = F''(E_in) / 2``.
    """
    if isinstance(F, (TwoPhase1D, Classical1D)):
        k = float(F.d2(float(E_in)))
        return OneDimensionalModuli(stiffness=k, young=0.5 * k)
    if not isinstance(F, InvariantBased):
        raise DomainError(f"moduli_from_ground_state does not support {type(F).__name__}")
    E = np.asarray(E_in, dtype=float)
    if E.shape != (3, 3):
        raise DomainError("invariant-based energies need a 3x3 inelastic strain")
    inv = F.invariants(E)
    dF = F.gradient(inv)
    d2F = F.hessian(inv)
    grads, hess = _invariant_derivatives(E, F.i3_mode)
    C = sum(dF[k] * grads[k].T for k in range(3))
    e = sum(dF[k] * hess[k] for k in range(3))
    for j in range(3):
        for k in range(3):
            if d2F[j, k] != 0.0:
                e = e + d2F[j, k] * np.einsum("ab,cd->abcd", grads[j], grads[k])
    two_mu, lam, resid = isotropic_projection(e)
    return GroundStateModuli(C=C, e=e, two_mu=two_mu, lam=lam, isotropy_residual=resid)
