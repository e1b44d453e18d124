"""Chemical degradation of a thin tube wall.

An inner layer ``R_i < r < R_d`` densifies by ``delta = Delta rho0 / rho0``.
Mass conservation shrinks its material metric by ``epsilon ~ -(2/3) delta``,
which opens a gap ``w = (2/3) delta R_d`` against the unchanged outer
layer.  Closing the gap stretches the inner layer elastically
(``E^el ~ (2/3) delta I``), putting it in tension and the outer layer in
compression.  The material metric ``g'`` jumps at the interface (singular
curvature) while the Cauchy metric of the closed ring is flat; both
statements are checked with the Gauss curvature of a diagonal metric
``diag(A(r), B(r) r^2)`` on a radial grid.

Within the layer the shrunk metric is taken as the uniform scaling
``g' = (1 + epsilon)^2 diag(1, r^2)``, the form that reproduces the gap and
the isotropic elastic strain.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .potentials import ElasticModuli

__all__ = [
    "RingGeometry",
    "DegradationState",
    "RingStressState",
    "shrinkage_from_density",
    "interface_gap",
    "ring_stress_state",
    "gauss_curvature_diagonal",
]

_THIN = 0.2


@dataclass(frozen=True)
class RingGeometry:
    """Radii of the tube cross-section, ``R_i < R_d < R_o``.

    Thick walls (``t/R_o``) or deep layers (``t_d/t``) above 0.2 raise a
    warning, since the thin-ring reasoning loses accuracy there.
    """

    r_outer: float
    r_inner: float
    r_degraded: float

    def __post_init__(self):
        if not (0 < self.r_inner < self.r_degraded < self.r_outer):
            raise DomainError("ring radii must satisfy 0 < R_i < R_d < R_o")
        if self.thickness / self.r_outer > _THIN:
            warnings.warn(f"wall is not thin: t/R_o = {self.thickness / self.r_outer:.3g}", stacklevel=2)
        if self.layer_thickness / self.thickness > _THIN:
            warnings.warn(f"degraded layer is not thin: t_d/t = {self.layer_thickness / self.thickness:.3g}", stacklevel=2)

    @property
    def thickness(self) -> float:
        return self.r_outer - self.r_inner

    @property
    def layer_thickness(self) -> float:
        return self.r_degraded - self.r_inner


def shrinkage_from_density(density_jump: float, exact: bool = False) -> float:
    """Radial metric change produced by a density jump.

    First order: ``epsilon = -(2/3) delta``.  With ``exact=True`` the mass
    balance ``1 / (1 + delta) = (1 + epsilon)^{3/2}`` is solved instead.

    Raises
    ------
    DomainError
        If ``|delta| >= 0.05``.
    """
    d = float(density_jump)
    if not abs(d) < 0.05:
        raise DomainError(f"density jump {d} is outside the small-change range |jump| < 0.05")
    if exact:
        return float((1.0 + d) ** (-2.0 / 3.0) - 1.0)
    return -2.0 * d / 3.0


@dataclass(frozen=True)
class DegradationState:
    """Density jump, the resulting metric change and the layer moduli."""

    density_jump: float
    epsilon: float
    moduli: ElasticModuli

    def __post_init__(self):
        if not abs(self.epsilon) < 0.1:
            raise DomainError(f"|epsilon| = {abs(self.epsilon)} is outside the small-strain range")

    @classmethod
    def from_density_jump(cls, density_jump: float, moduli: ElasticModuli, exact: bool = True) -> "DegradationState":
        return cls(float(density_jump), shrinkage_from_density(density_jump, exact=exact), moduli)


def interface_gap(geom: RingGeometry, state: DegradationState) -> float:
    """Gap ``w = (2/3) delta R_d`` left by the unconstrained shrinkage."""
    return 2.0 * state.density_jump / 3.0 * geom.r_degraded


def gauss_curvature_diagonal(r: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gauss curvature of ``A(r) dr^2 + B(r) r^2 dtheta^2`` by central differences.

    ``K = -1 / (2 sqrt(E G)) d/dr (G_r / sqrt(E G))`` with ``E = A``,
    ``G = B r^2``.
    """
    E = np.asarray(A, dtype=float)
    G = np.asarray(B, dtype=float) * r * r
    root = np.sqrt(E * G)
    G_r = np.gradient(G, r, edge_order=2)
    return -np.gradient(G_r / root, r, edge_order=2) / (2.0 * root)


@dataclass(frozen=True)
class RingStressState:
    """Strains, stresses and curvature checks of the degraded ring.

    Attributes
    ----------
    elastic_strain : ndarray
        First-order closing strain ``(2/3) delta I`` (2x2).
    elastic_strain_exact : ndarray
        Strain of the exact closing map, ``((1 + epsilon)^{-2} - 1)/2 I``.
    sigma_rr_inner, sigma_rr_outer : float
        Radial stress on each side of the interface.
    sigma_tt_inner, sigma_tt_outer : float
        Hoop stresses: equibiaxial Hooke's law in the layer, hoop-force
        balance ``t_d sigma_in + (t - t_d) sigma_out = 0`` outside.
    continuity_residual : float
        ``|sigma_in n_in - sigma_out n_out|`` with outward layer normals
        ``n_in = +1`` and ``n_out = -1`` at ``R_d``.
    r, curvature_material, curvature_final : ndarray
        Radial grid and Gauss curvature of ``g'`` and of ``g_final``.
    """

    elastic_strain: np.ndarray
    elastic_strain_exact: np.ndarray
    sigma_rr_inner: float
    sigma_rr_outer: float
    sigma_tt_inner: float
    sigma_tt_outer: float
    continuity_residual: float
    r: np.ndarray
    sigma_rr_profile: np.ndarray
    sigma_tt_profile: np.ndarray
    curvature_material: np.ndarray
    curvature_final: np.ndarray

    @property
    def continuous(self) -> bool:
        return self.continuity_residual <= 1e-12

    @property
    def final_flatness(self) -> float:
        return float(np.max(np.abs(self.curvature_final)))

    @property
    def material_curvature_peak(self) -> float:
        return float(np.max(np.abs(self.curvature_material)))

    @property
    def flat(self) -> bool:
        return self.final_flatness <= 1e-8


def ring_stress_state(geom: RingGeometry, state: DegradationState, n_grid: int = 1000) -> RingStressState:
    """Stress state and metric compatibility of the degraded ring.

    Parameters
    ----------
    geom : RingGeometry
    state : DegradationState
    n_grid : int
        Radial grid points over ``[R_i, R_o]``.
    """
    nu = state.moduli.poisson_nu
    if nu == 1.0:
        raise DomainError("plane-stress factor Y/(1 - nu) is singular at nu = 1")
    Y = state.moduli.young_Y
    d = state.density_jump
    e_lin = 2.0 * d / 3.0
    e_exact = 0.5 * ((1.0 + state.epsilon) ** -2 - 1.0)
    sig_in = Y / (1.0 - nu) * e_lin
    sig_out = -sig_in
    t, td = geom.thickness, geom.layer_thickness
    hoop_out = -sig_in * td / (t - td)
    resid = abs(sig_in * 1.0 - sig_out * (-1.0))

    r = np.linspace(geom.r_inner, geom.r_outer, n_grid)
    layer = r < geom.r_degraded
    scale = np.where(layer, (1.0 + state.epsilon) ** 2, 1.0)
    # g' = scale * diag(1, r^2); the closing strain is isotropic, so
    # g_final = g' (I + 2 E^el) keeps the diagonal form.
    final = scale * np.where(layer, 1.0 + 2.0 * e_exact, 1.0)
    return RingStressState(
        elastic_strain=e_lin * np.eye(2),
        elastic_strain_exact=e_exact * np.eye(2),
        sigma_rr_inner=sig_in,
        sigma_rr_outer=sig_out,
        sigma_tt_inner=sig_in,
        sigma_tt_outer=hoop_out,
        continuity_residual=resid,
        r=r,
        sigma_rr_profile=np.where(layer, sig_in, sig_out),
        sigma_tt_profile=np.where(layer, sig_in, hoop_out),
        curvature_material=gauss_curvature_diagonal(r, scale, scale),
        curvature_final=gauss_curvature_diagonal(r, final, final),
    )
