"""Geometry of the 4D material metric.

The material metric is stored in lapse-shift form: a positive lapse ``S``,
a shift vector ``N`` and a symmetric positive-definite spatial metric
``g``.  This module assembles the 4x4 metric and its inverse, builds the
Cauchy-Green tensors of a deformation, forms elastic, inelastic and total
strains (linear and logarithmic conventions), computes the extrinsic
curvature that drives dissipation, and evolves the reference mass
density.

All routines are pure functions over immutable values.

Index conventions
-----------------
* ``spatial_gradient[i, I]`` is the deformation gradient entry
  ``phi^i_{,I}``; the spatial row index comes first.
* Mixed (1,1) tensors such as strains and ``K`` are stored as matrices
  ``A[I, J] = A^I_J``.
* Spatial derivatives of the metric are passed as ``dg[K, I, J]`` holding
  ``d g_IJ / d X^K``; shift gradients as ``dN[I, K]`` holding
  ``d N^K / d X^I``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "AdmMetric",
    "AssembledMetric",
    "DeformationJet",
    "StrainConvention",
    "StrainSet",
    "ExtrinsicCurvature",
    "adm_assemble",
    "flow_vector",
    "cauchy_green",
    "strain_linear",
    "strain_log",
    "elastic_strain_4d",
    "inelastic_strain_4d",
    "extrinsic_curvature",
    "rod_metric",
    "rod_extrinsic_curvature",
    "mass_density",
    "advect_mass_1d",
    "spd_log_ratio",
]

_SYM_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _check_spd(mat: np.ndarray, name: str) -> None:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError(f"{name} must be a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DomainError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(mat))))
    if np.max(np.abs(mat - mat.T)) > _SYM_TOL * scale:
        raise DomainError(f"{name} is not symmetric")
    w = np.linalg.eigvalsh(mat)
    if w[0] <= 0.0:
        raise DomainError(
            f"{name} is not positive definite (smallest eigenvalue {w[0]:.3e})",
            distance=float(w[0]),
        )


@dataclass(frozen=True)
class AdmMetric:
    """Material metric in lapse-shift (ADM) form.

    Parameters
    ----------
    lapse : float
        Positive time-rate factor ``S``.
    shift : array_like, optional
        Shift vector ``N^I``; zero by default (block-diagonal metric).
    spatial : array_like, optional
        Symmetric positive-definite spatial metric ``g_IJ``; identity by
        default.  Its size fixes the spatial dimension.
    """

    lapse: float
    shift: Optional[np.ndarray] = None
    spatial: Optional[np.ndarray] = None

    def __post_init__(self):
        g = np.eye(3) if self.spatial is None else np.array(self.spatial, dtype=float)
        n = g.shape[0] if g.ndim == 2 else 0
        N = np.zeros(n) if self.shift is None else np.array(self.shift, dtype=float)
        _check_spd(g, "spatial metric g")
        if N.shape != (n,):
            raise DomainError(f"shift must have shape ({n},), got {N.shape}")
        if not (np.isfinite(self.lapse) and self.lapse > 0.0):
            raise DomainError(f"lapse must be positive, got {self.lapse}")
        object.__setattr__(self, "lapse", float(self.lapse))
        object.__setattr__(self, "spatial", _frozen(g))
        object.__setattr__(self, "shift", _frozen(N))

    @property
    def dim(self) -> int:
        return self.spatial.shape[0]

    @property
    def spatial_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.spatial)

    @property
    def shift_lower(self) -> np.ndarray:
        """Covariant shift ``N_I = g_IJ N^J``."""
        return self.spatial @ self.shift

    @property
    def det_spatial(self) -> float:
        return float(np.linalg.det(self.spatial))

    @property
    def shift_norm_sq(self) -> float:
        """Squared norm ``g(N, N)``."""
        return float(self.shift @ self.spatial @ self.shift)


@dataclass(frozen=True)
class AssembledMetric:
    """Output of :func:`adm_assemble`."""

    matrix: np.ndarray
    inverse: np.ndarray
    sqrt_det: float


def adm_assemble(m: AdmMetric) -> AssembledMetric:
    """Assemble the full space-time metric and its inverse.

    ``G_00 = N_A N^A + S^2``, ``G_0J = N_J`` and ``G_IJ = g_IJ``; the
    inverse has ``G^00 = 1/S^2``, ``G^0J = -N^J/S^2`` and
    ``G^IJ = g^IJ + N^I N^J / S^2``.

    Parameters
    ----------
    m : AdmMetric

    Returns
    -------
    AssembledMetric
        Matrix, closed-form inverse and ``sqrt|G| = S sqrt|g|``.
    """
    n = m.dim
    S2 = m.lapse**2
    N = m.shift
    Nl = m.shift_lower
    G = np.empty((n + 1, n + 1))
    G[0, 0] = N @ Nl + S2
    G[0, 1:] = Nl
    G[1:, 0] = Nl
    G[1:, 1:] = m.spatial
    Gi = np.empty_like(G)
    Gi[0, 0] = 1.0 / S2
    Gi[0, 1:] = -N / S2
    Gi[1:, 0] = -N / S2
    Gi[1:, 1:] = m.spatial_inverse + np.outer(N, N) / S2
    return AssembledMetric(
        matrix=_frozen(G),
        inverse=_frozen(Gi),
        sqrt_det=m.lapse * float(np.sqrt(m.det_spatial)),
    )


def flow_vector(m: AdmMetric):
    """Unit flow vector of the metric and its dual 1-form.

    Returns
    -------
    u : ndarray
        ``(1/S, -N/S)``, normalised so that ``G(u, u) = 1``.
    u_flat : ndarray
        ``(S, 0, ..., 0)``.
    """
    u = np.concatenate(([1.0], -m.shift)) / m.lapse
    u_flat = np.zeros(m.dim + 1)
    u_flat[0] = m.lapse
    return u, u_flat


@dataclass(frozen=True)
class DeformationJet:
    """First derivatives of a synchronized deformation at a point.

    Parameters
    ----------
    spatial_gradient : array_like
        ``phi^i_{,I}`` with the spatial index first; must have positive
        determinant.
    velocity : array_like, optional
        ``V = phi^i_{,0}``; zero by default.
    ambient_metric : array_like, optional
        Physical metric ``h_ij``; identity by default.
    """

    spatial_gradient: np.ndarray
    velocity: Optional[np.ndarray] = None
    ambient_metric: Optional[np.ndarray] = None

    def __post_init__(self):
        F = np.array(self.spatial_gradient, dtype=float)
        n = F.shape[0]
        V = np.zeros(n) if self.velocity is None else np.array(self.velocity, dtype=float)
        h = np.eye(n) if self.ambient_metric is None else np.array(self.ambient_metric, dtype=float)
        if F.shape != (n, n) or V.shape != (n,):
            raise DomainError("deformation gradient and velocity shapes are inconsistent")
        _check_spd(h, "ambient metric h")
        det = np.linalg.det(F)
        if not det > 0.0:
            raise DomainError(f"deformation gradient must have positive determinant, got {det:.3e}")
        object.__setattr__(self, "spatial_gradient", _frozen(F))
        object.__setattr__(self, "velocity", _frozen(V))
        object.__setattr__(self, "ambient_metric", _frozen(h))

    @property
    def jacobian(self) -> float:
        """Volume ratio ``sqrt(det C_3)`` relative to the reference frame."""
        C3 = self.spatial_gradient.T @ self.ambient_metric @ self.spatial_gradient
        return float(np.sqrt(np.linalg.det(C3)))


def cauchy_green(jet: DeformationJet):
    """Spatial and space-time Cauchy-Green tensors of a deformation.

    Returns
    -------
    C3 : ndarray
        ``phi^T h phi``.
    C4 : ndarray
        Degenerate 4x4 tensor with ``|V|_h^2`` at ``(0, 0)``, the couplings
        ``<V, phi_{,J}>_h`` in the mixed slots and ``C3`` in the spatial
        block.
    """
    F, V, h = jet.spatial_gradient, jet.velocity, jet.ambient_metric
    hF = h @ F
    C3 = F.T @ hF
    n = C3.shape[0]
    C4 = np.zeros((n + 1, n + 1))
    C4[0, 0] = V @ h @ V
    C4[0, 1:] = V @ hF
    C4[1:, 0] = V @ hF
    C4[1:, 1:] = C3
    return C3, C4


class StrainConvention(enum.Enum):
    LINEAR = "linear"
    LOGARITHMIC = "logarithmic"


@dataclass(frozen=True)
class StrainSet:
    """Elastic, inelastic and total (1,1)-strain tensors.

    Attributes
    ----------
    elastic, inelastic, total : ndarray
        Mixed tensors ``E^I_J``.
    convention : StrainConvention
    reference : ndarray
        Reference metric ``g0`` the inelastic and total strains are
        measured from.
    """

    elastic: np.ndarray
    inelastic: np.ndarray
    total: np.ndarray
    convention: StrainConvention
    reference: np.ndarray = field(repr=False, default=None)


def _reference(m: AdmMetric, reference) -> np.ndarray:
    g0 = np.eye(m.dim) if reference is None else np.array(reference, dtype=float)
    _check_spd(g0, "reference metric g0")
    return g0


def strain_linear(m: AdmMetric, jet: DeformationJet, reference=None) -> StrainSet:
    """Linear-convention strains on the time slices.

    ``E^el = (g^{-1} C3 - I)/2``, ``E^in = (I - g^{-1} g0)/2`` and the total
    strain is their sum, so additivity holds exactly.

    Parameters
    ----------
    m : AdmMetric
    jet : DeformationJet
    reference : array_like, optional
        Reference metric ``g0``; identity by default.
    """
    g0 = _reference(m, reference)
    C3, _ = cauchy_green(jet)
    gi = m.spatial_inverse
    eye = np.eye(m.dim)
    el = 0.5 * (gi @ C3 - eye)
    inel = 0.5 * (eye - gi @ g0)
    return StrainSet(
        elastic=_frozen(el),
        inelastic=_frozen(inel),
        total=_frozen(el + inel),
        convention=StrainConvention.LINEAR,
        reference=_frozen(g0),
    )


def elastic_strain_4d(m: AdmMetric, jet: DeformationJet) -> np.ndarray:
    """Projected space-time elastic strain.

    Rows are spatial (the projector on the slices removes the time row);
    column 0 holds the velocity coupling
    ``(g^{IK} <phi_{,K}, V>_h - N^I) / 2`` and the spatial block is the
    linear elastic strain.  The whole matrix vanishes exactly when
    ``g = C3`` and ``N^I = g^{IK} <phi_{,0}, phi_{,K}>_h``.
    """
    C3, C4 = cauchy_green(jet)
    gi = m.spatial_inverse
    out = np.zeros((m.dim, m.dim + 1))
    out[:, 0] = 0.5 * (gi @ C4[1:, 0] - m.shift)
    out[:, 1:] = 0.5 * (gi @ C3 - np.eye(m.dim))
    return out


def inelastic_strain_4d(m: AdmMetric, reference=None) -> np.ndarray:
    """Projected space-time inelastic strain against a shift-free reference.

    Column 0 is ``(N^I - g^{IK} g0_{KB} N^B) / 2``; the spatial block is the
    linear inelastic strain.
    """
    g0 = _reference(m, reference)
    gi = m.spatial_inverse
    out = np.zeros((m.dim, m.dim + 1))
    out[:, 0] = 0.5 * (m.shift - gi @ g0 @ m.shift)
    out[:, 1:] = 0.5 * (np.eye(m.dim) - gi @ g0)
    return out


def spd_log_ratio(A: np.ndarray, B: np.ndarray, name: str = "A^-1 B") -> np.ndarray:
    """Real logarithm of ``A^{-1} B`` for symmetric positive-definite ``A``.

    The product is similar to ``A^{-1/2} B A^{-1/2}``, which is symmetric, so
    the logarithm is taken through its eigendecomposition and transformed
    back.

    Raises
    ------
    DomainError
        If the symmetrized product has a non-positive eigenvalue.
    """
    wa, Qa = np.linalg.eigh(A)
    if wa[0] <= 0.0:
        raise DomainError(f"logarithm of {name}: left factor is not positive definite")
    a_mhalf = (Qa / np.sqrt(wa)) @ Qa.T
    a_half = (Qa * np.sqrt(wa)) @ Qa.T
    M = a_mhalf @ B @ a_mhalf
    w, Q = np.linalg.eigh(0.5 * (M + M.T))
    if w[0] <= 0.0:
        raise DomainError(
            f"logarithm of {name}: non-positive eigenvalue {w[0]:.3e}", distance=float(w[0])
        )
    return a_mhalf @ ((Q * np.log(w)) @ Q.T) @ a_half


def strain_log(m: AdmMetric, jet: DeformationJet, reference=None) -> StrainSet:
    """Logarithmic strains ``ln(g^{-1}C3)/2``, ``ln(g0^{-1}g)/2``, ``ln(g0^{-1}C3)/2``.

    These are additive only when the three metrics commute.
    """
    g0 = _reference(m, reference)
    C3, _ = cauchy_green(jet)
    g = np.asarray(m.spatial)
    return StrainSet(
        elastic=_frozen(0.5 * spd_log_ratio(g, C3, "g^-1 C_3")),
        inelastic=_frozen(0.5 * spd_log_ratio(g0, g, "g0^-1 g")),
        total=_frozen(0.5 * spd_log_ratio(g0, C3, "g0^-1 C_3")),
        convention=StrainConvention.LOGARITHMIC,
        reference=_frozen(g0),
    )


@dataclass(frozen=True)
class ExtrinsicCurvature:
    """Mixed tensor ``K^I_J`` (per unit material time) and its invariants."""

    tensor: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.tensor))

    @property
    def trace_sq(self) -> float:
        return float(np.trace(self.tensor @ self.tensor))

    @property
    def deviatoric_sq(self) -> float:
        """``Tr(dev K)^2 = Tr K^2 - (Tr K)^2 / n``."""
        n = self.tensor.shape[0]
        return self.trace_sq - self.trace**2 / n

    @property
    def volumetric_rate(self) -> float:
        """Scalar volumetric rate ``Tr K / 6`` (equals ``xi_t / S`` for a rod)."""
        return self.trace / 6.0

    @property
    def deviatoric_rate(self) -> float:
        """Scalar deviatoric rate ``sqrt(Tr(dev K)^2 / 6)`` (``|eta_t| / S`` for a rod)."""
        return float(np.sqrt(max(self.deviatoric_sq, 0.0) / 6.0))


def extrinsic_curvature(
    m: AdmMetric,
    g_time_derivative,
    g_space_derivatives=None,
    shift_gradient=None,
) -> ExtrinsicCurvature:
    """Extrinsic curvature ``K = S^{-1} g^{-1} (d_T g - Lie_N g)``.

    Parameters
    ----------
    m : AdmMetric
    g_time_derivative : array_like
        ``d g_IJ / dT``.
    g_space_derivatives : array_like, optional
        ``dg[K, I, J] = d g_IJ / d X^K``; only needed with a nonzero shift.
    shift_gradient : array_like, optional
        ``dN[I, K] = d N^K / d X^I``; zero when omitted.

    Returns
    -------
    ExtrinsicCurvature
    """
    n = m.dim
    gdot = np.asarray(g_time_derivative, dtype=float)
    lie = np.zeros((n, n))
    if g_space_derivatives is not None:
        dg = np.asarray(g_space_derivatives, dtype=float)
        lie += np.einsum("k,kij->ij", m.shift, dg)
    if shift_gradient is not None:
        dN = np.asarray(shift_gradient, dtype=float)
        t = dN @ m.spatial
        lie += t + t.T
    K = m.spatial_inverse @ (gdot - lie) / m.lapse
    return ExtrinsicCurvature(_frozen(K))


def _rod_diag(iso: float, dev: float, axial_index: int) -> np.ndarray:
    d = np.full(3, iso - 0.5 * dev)
    d[axial_index] = iso + dev
    return d


def rod_metric(xi: float, eta: float, axial_index: int = 2) -> np.ndarray:
    """Homogeneous rod metric with log-strain ``diag(xi - eta/2, xi - eta/2, xi + eta)``.

    ``xi`` is the volumetric and ``eta`` the deviatoric (axial) inelastic
    strain; ``axial_index`` places the axial direction.
    """
    return np.diag(np.exp(2.0 * _rod_diag(xi, eta, axial_index)))


def rod_extrinsic_curvature(
    xi_t: float, eta_t: float, lapse: float, axial_index: int = 2
) -> ExtrinsicCurvature:
    """Curvature of :func:`rod_metric` along a history ``(xi(t), eta(t))``.

    ``K = S^{-1} diag(2 xi_t - eta_t, 2 xi_t - eta_t, 2 xi_t + 2 eta_t)`` with the
    axial entry at ``axial_index``, so ``Tr K = 6 xi_t / S``.
    """
    return ExtrinsicCurvature(_frozen(np.diag(2.0 * _rod_diag(xi_t, eta_t, axial_index)) / lapse))


def mass_density(initial_density, m):
    """Reference mass density for a block-diagonal metric history.

    ``rho0(T) = rho0(0) / sqrt|g(T)|``.

    Parameters
    ----------
    initial_density : float or ndarray
    m : AdmMetric, or float/ndarray of ``|g|`` values
    """
    det = m.det_spatial if isinstance(m, AdmMetric) else np.asarray(m, dtype=float)
    return np.asarray(initial_density, dtype=float) / np.sqrt(det)


def advect_mass_1d(q, shift, dx: float, dt: float) -> np.ndarray:
    """One conservative upwind step of ``q_T = (N q)_X`` on a periodic grid.

    ``q = rho0 sqrt|g|`` is transported with velocity ``-N``; the scheme
    conserves ``sum(q) dx`` exactly and is first-order accurate.

    Parameters
    ----------
    q : ndarray
        Cell values of ``rho0 sqrt|g|``.
    shift : float or ndarray
        Shift ``N`` at cell centres.
    dx, dt : float
        Grid spacing and time step; ``max|N| dt / dx`` must not exceed 1.
    """
    q = np.asarray(q, dtype=float)
    N = np.broadcast_to(np.asarray(shift, dtype=float), q.shape)
    a = -0.5 * (N + np.roll(N, -1))  # velocity at the i+1/2 faces
    if np.max(np.abs(a)) * dt > dx:
        raise DomainError("upwind step violates the CFL condition")
    flux = np.where(a > 0.0, a * q, a * np.roll(q, -1))
    return q - dt / dx * (flux - np.roll(flux, 1))
