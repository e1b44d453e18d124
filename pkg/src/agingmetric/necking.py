"""Cold drawing of a fibre as a travelling kink of the stretch.

In the frame moving with the shift speed, the stretch ``lam(s)`` obeys

    chi''(u) lam'' = (lam'/2) [chi'(u) + u chi''(u)] + (lam^2/4) F'(lam),
    u = 2 lam' / lam,

with the loaded double well
``F(lam) = (lam - lam0)^2 (a + b (lam - lam1)^2) - (force/A0)(lam - lam0)^2``.
Its equilibria are the roots of ``F'``; the outer two are saddles and the
middle one is a centre.  A kink is a heteroclinic orbit joining the two
saddles.  Along the orbit ``u chi'(u) - chi(u) - F`` grows (its derivative
is ``(u^2/2) chi'(u)``), so a connection between wells of equal depth is
impossible: the load has to be tuned.  :func:`kink_profile` finds the
critical load by shooting from both saddles and matching at the centre
stretch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from .errors import DomainError, NoConnectionError
from .ode import Event, dopri45
from .potentials import NeckingDoubleWell, QuadraticPotential

__all__ = [
    "NeckingModel",
    "Equilibrium",
    "KinkProfile",
    "necking_rhs",
    "classify_equilibria",
    "numerical_jacobian",
    "shooting_defect",
    "critical_load",
    "critical_load_quadrature",
    "kink_profile",
    "wave_field",
]


@dataclass(frozen=True)
class NeckingModel:
    """Parameters of the drawn-fibre model.

    Parameters
    ----------
    a, b : float
        Positive well coefficients.
    lambda0, lambda1 : float
        Stretches of the two wells, ``lambda1 > lambda0 > 0``.
    force_per_area : float, optional
        ``F/A0``; ``None`` means ``a`` (symmetric double well).
    speed : float
        Frame velocity ``N^1``.
    chi : dissipative potential
        Must satisfy ``chi'(0) = 0`` and ``chi''(0) > 0``.
    """

    a: float = 1.0
    b: float = 1.0
    lambda0: float = 1.0
    lambda1: float = 2.0
    force_per_area: Optional[float] = None
    speed: float = 1.0
    chi: object = field(default_factory=lambda: QuadraticPotential(1.0))

    def __post_init__(self):
        if self.force_per_area is None:
            object.__setattr__(self, "force_per_area", float(self.a))
        self.ground  # validates wells
        if not float(self.chi.d2chi(0.0)) > 0.0:
            raise DomainError("necking needs chi''(0) > 0")
        if abs(float(self.chi.dchi(0.0))) > 1e-14:
            raise DomainError("necking needs chi'(0) = 0")

    @property
    def ground(self) -> NeckingDoubleWell:
        return NeckingDoubleWell(self.a, self.b, self.lambda0, self.lambda1, self.force_per_area)

    def with_load_excess(self, kappa: float) -> "NeckingModel":
        """Copy with ``force_per_area = a + kappa``."""
        return replace(self, force_per_area=self.a + kappa)


def necking_rhs(lam: float, lam_tau: float, model: NeckingModel) -> float:
    """Second derivative ``lam_tautau`` of the stretch in the moving frame.

    Raises
    ------
    DomainError
        If ``chi''`` vanishes at the current rate argument.
    """
    u = 2.0 * lam_tau / lam
    c2 = float(model.chi.d2chi(u))
    if c2 == 0.0:
        raise DomainError(f"chi'' vanishes at rate argument u={u}")
    c1 = float(model.chi.dchi(u))
    return (0.5 * lam_tau * (c1 + u * c2) + 0.25 * lam * lam * model.ground.d1(lam)) / c2


@dataclass(frozen=True)
class Equilibrium:
    stretch: float
    kind: str  # "saddle" or "center"
    eigenvalues: Tuple[complex, complex]
    jacobian: np.ndarray = field(repr=False, default=None)


def numerical_jacobian(model: NeckingModel, lam: float, lam_tau: float = 0.0, h: float = 1e-4) -> np.ndarray:
    """Jacobian of ``(lam, lam_tau) -> (lam_tau, lam_tautau)`` by Richardson-extrapolated central differences."""

    def dcol(k):
        def central(step):
            e = np.zeros(2)
            e[k] = step
            fp = necking_rhs(lam + e[0], lam_tau + e[1], model)
            fm = necking_rhs(lam - e[0], lam_tau - e[1], model)
            return (fp - fm) / (2.0 * step)

        return (4.0 * central(0.5 * h) - central(h)) / 3.0

    return np.array([[0.0, 1.0], [dcol(0), dcol(1)]])


def classify_equilibria(model: NeckingModel) -> List[Equilibrium]:
    """Equilibria of the kink system with their linear type.

    Each root of ``F'`` is linearised numerically; real eigenvalues of
    opposite sign give a saddle and an imaginary pair gives a centre.
    """
    out = []
    for lam in model.ground.critical_stretches():
        J = numerical_jacobian(model, lam)
        w = np.linalg.eigvals(J)
        w = tuple(sorted(w, key=lambda z: (z.real, z.imag)))
        kind = "saddle" if J[1, 0] > 0 else "center"
        out.append(Equilibrium(float(lam), kind, w, J))
    return out


def _saddle_slope(model: NeckingModel, lam: float) -> float:
    k = lam * lam * model.ground.d2(lam) / (4.0 * float(model.chi.d2chi(0.0)))
    if k <= 0:
        raise NoConnectionError(f"stretch {lam} is not a saddle at this load")
    return math.sqrt(k)


@dataclass
class _Branch:
    reached: bool
    slope: float
    sol: object


def _shoot(model: NeckingModel, start: float, slope: float, target: float, backward: bool, delta: float, tol: float):
    sign = -1.0 if backward else 1.0

    def rhs(s, y):
        return sign * np.array([y[1], necking_rhs(y[0], y[1], model)])

    if backward:
        y0 = [start - delta, slope * delta]
        hit = Event("match", lambda s, y: y[0] - target, True, -1)
    else:
        y0 = [start + delta, slope * delta]
        hit = Event("match", lambda s, y: y[0] - target, True, +1)
    turn = Event("turn", lambda s, y: y[1], True, -1)
    escape = Event("escape", lambda s, y: abs(y[0] - start) - 10.0 * abs(target - start), True, +1)
    sol = dopri45(rhs, (0.0, 1e4), y0, rtol=tol, atol=tol, events=[hit, turn, escape])
    reached = sol.status == "event" and sol.terminal_event.name == "match"
    return _Branch(reached, float(sol.y[-1, 1]) if reached else 0.0, sol)


def shooting_defect(model: NeckingModel, delta: float = 1e-8, tol: float = 1e-12) -> Tuple[float, dict]:
    """Slope mismatch at the centre stretch between the two saddle manifolds.

    Returns
    -------
    defect : float
        ``lam_tau`` on the unstable manifold of the left saddle minus
        ``lam_tau`` on the stable manifold of the right saddle, both taken
        where ``lam`` equals the centre stretch.
    info : dict
        Equilibria and the two branches.
    """
    l0, lm, l1 = model.ground.critical_stretches()
    left = _shoot(model, l0, _saddle_slope(model, l0), lm, False, delta, tol)
    right = _shoot(model, l1, _saddle_slope(model, l1), lm, True, delta, tol)
    return left.slope - right.slope, {"equilibria": (l0, lm, l1), "left": left, "right": right}


def _kappa_range(model: NeckingModel) -> Tuple[float, float]:
    d2 = model.b * (model.lambda1 - model.lambda0) ** 2
    return -0.12 * d2, 0.95 * d2


def critical_load(model: NeckingModel, n_scan: int = 24, xtol: float = 1e-15) -> float:
    """Load excess ``kappa = F/A0 - a`` at which the two saddles connect.

    The bracket ``kappa in [-0.12, 0.95] b (lambda1 - lambda0)^2`` keeps three
    equilibria with saddles outside; it is scanned for a sign change of the
    shooting defect and refined with Brent's method.

    Raises
    ------
    NoConnectionError
        If the defect keeps one sign over the whole bracket.
    """
    lo, hi = _kappa_range(model)
    grid = np.linspace(lo, hi, n_scan)

    def defect(k):
        return shooting_defect(model.with_load_excess(k))[0]

    vals = [defect(k) for k in grid]
    for k0, k1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if v0 == 0.0:
            return float(k0)
        if v0 * v1 < 0.0:
            return float(optimize.brentq(defect, k0, k1, xtol=xtol, rtol=4 * np.finfo(float).eps))
    raise NoConnectionError(
        f"shooting defect keeps one sign for load excess in [{lo:.6g}, {hi:.6g}]", interval=(lo, hi)
    )


def critical_load_quadrature(model: NeckingModel) -> float:
    """Critical load excess from the first integral of the quadratic-potential case.

    With ``chi = alpha u^2`` the variable ``w = 1/lam`` obeys
    ``w'' = -F'(1/w) / (8 alpha)``, a conservative system, so two saddles
    connect exactly when ``int_{lam0}^{lam1*} F'(lam) / lam^2 dlam = 0``.
    """
    if not isinstance(model.chi, QuadraticPotential):
        raise DomainError("the quadrature balance holds for a quadratic potential only")

    def balance(k):
        m = model.with_load_excess(k)
        l0, _, l1 = m.ground.critical_stretches()
        val, _ = sp_integrate.quad(lambda x: m.ground.d1(x) / (x * x), l0, l1, epsabs=1e-14, epsrel=1e-13)
        return val

    lo, hi = _kappa_range(model)
    return float(optimize.brentq(balance, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


@dataclass(frozen=True)
class KinkProfile:
    """Sampled kink ``lam(s)``, ``s = X - N^1 t``.

    Attributes
    ----------
    s, stretch, stretch_tau : ndarray
    density : ndarray
        ``rho_ref / lam`` (mass conservation along the wave).
    load_excess : float
        Critical ``F/A0 - a``.
    force_per_area : float
    equilibria : tuple
        ``(lam0, centre, drawn stretch)`` at the critical load.
    matching_defect : float
        Slope mismatch at the centre stretch.
    """

    s: np.ndarray
    stretch: np.ndarray
    stretch_tau: np.ndarray
    density: np.ndarray
    load_excess: float
    force_per_area: float
    equilibria: Tuple[float, float, float]
    matching_defect: float
    speed: float

    @property
    def drawn_stretch(self) -> float:
        return self.equilibria[2]


def kink_profile(
    model: NeckingModel,
    n_points: int = 801,
    search_load: bool = True,
    delta: float = 1e-8,
    reference_density: float = 1.0,
) -> KinkProfile:
    """Heteroclinic kink joining the two saddles.

    Parameters
    ----------
    model : NeckingModel
    n_points : int
        Number of uniform samples in ``s``.
    search_load : bool
        Tune the load to the critical value (default).  With ``False`` the
        model's own load is used and a nonzero defect raises.
    delta : float
        Offset from each saddle along its eigenvector where shooting starts.
    reference_density : float

    Raises
    ------
    NoConnectionError
        If no connecting load exists in the scanned bracket, or the model's
        own load does not connect when ``search_load`` is false.
    """
    if search_load:
        kappa = critical_load(model)
        m = model.with_load_excess(kappa)
    else:
        m = model
        kappa = model.force_per_area - model.a
    defect, info = shooting_defect(m, delta=delta)
    left, right = info["left"], info["right"]
    if not (left.reached and right.reached) or abs(defect) > 1e-8:
        raise NoConnectionError(
            f"no saddle connection at load excess {kappa:.6g} (defect {defect:.3e})", interval=(kappa, kappa)
        )
    sl, sr = left.sol, right.sol
    sL, sR = float(sl.t[-1]), float(sr.t[-1])
    s = np.linspace(-sL, sR, n_points)
    y = np.empty((n_points, 2))
    neg = s <= 0.0
    y[neg] = sl(s[neg] + sL)
    yr = sr(sR - s[~neg])
    y[~neg] = yr
    lam = y[:, 0]
    return KinkProfile(
        s=s,
        stretch=lam,
        stretch_tau=y[:, 1],
        density=reference_density / lam,
        load_excess=float(kappa),
        force_per_area=float(m.force_per_area),
        equilibria=tuple(float(v) for v in info["equilibria"]),
        matching_defect=float(defect),
        speed=float(model.speed),
    )


def wave_field(profile: KinkProfile, X, t: float) -> np.ndarray:
    """Stretch field ``lam(X - N^1 t)`` of the travelling wave.

    Outside the sampled window the far-field stretches are used.
    """
    xi = np.asarray(X, dtype=float) - profile.speed * t
    return np.interp(xi, profile.s, profile.stretch, left=profile.equilibria[0], right=profile.equilibria[2])
