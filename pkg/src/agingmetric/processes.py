"""Aging of a homogeneous rod: unconstrained aging, stress relaxation, creep.

Each process is a planar dynamical system in ``(strain_var, S)``:

* unconstrained aging (UA), ``y = (xi, S)``::

      xi_t = -S r,   S_t = -(p / (2 c2)) r,   r = chi^{-1}(c1 + 2 c2 S + k xi^2)

  with the quadratic potential ``chi = alpha x^2`` (``alpha = -1``), so
  ``r = sqrt((c1 + 2 c2 S + k xi^2) / alpha)``.  Evolution stops on the
  curve ``S = -(c1 + k xi^2) / (2 c2)``.  ``J = c2 S^2 - p xi`` is conserved.

* stress relaxation (SR) at fixed total stretch ``eta*``, ``y = (eta, S)``::

      eta_t = S psi^{-1}(A),   S_t = (b0 / (2 q2)) psi^{-1}(A),
      A = 2 q2 S + p2(eta)

  where ``p2(eta) = q1 + b1 eta + a1 eta^2 + (Y/2)(eta* - eta)^2``.

* creep under a constant force, same structure with
  ``A = (F/A0)(e^eta - 1) + Lambda F^2 e^{2 eta} + q1 + 2 q2 S + b1 eta + a1 eta^2``.

For SR and creep ``J = b0 eta - q2 S^2`` is conserved.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DomainError
from .kinematics import rod_extrinsic_curvature
from .ode import Event, EventRecord, OdeSolution, dopri45
from .potentials import (
    DornPotential,
    ElasticModuli,
    ExponentialRatePotential,
    QuadraticPotential,
    SRPolynomial,
    UAPolynomial,
)

__all__ = [
    "ProcessKind",
    "ProcessState",
    "ProcessSpec",
    "RodKinematics",
    "Termination",
    "Trajectory",
    "ua_rhs",
    "sr_rhs",
    "creep_rhs",
    "creep_threshold",
    "driving_force",
    "integrate",
    "stress_output",
    "first_integral",
    "process_energy",
    "process_rates",
    "UA_EVENT_LEVEL",
]

#: Root-argument level at which unconstrained aging is declared stopped.
UA_EVENT_LEVEL = 1e-12


class ProcessKind(enum.Enum):
    UA = "ua"
    SR = "sr"
    CREEP = "creep"


@dataclass(frozen=True)
class ProcessState:
    """Phase point of a rod process.

    ``strain_var`` is ``xi`` for UA and ``eta`` for SR and creep.
    """

    strain_var: float
    lapse: float
    time: float = 0.0


@dataclass(frozen=True)
class RodKinematics:
    """Stretch factors of a homogeneous rod.

    ``lambda_v = e^xi`` (volumetric), ``lambda_d = e^eta`` (deviatoric),
    axial ratio ``lambda = lambda_v lambda_d`` and lateral ratio
    ``lambda_v lambda_d^{-1/2}``.  ``eps_v``, ``eps_d`` are the small elastic
    factors superposed on the inelastic state.
    """

    lambda_v: float
    lambda_d: float
    eps_v: float = 0.0
    eps_d: float = 0.0
    area0: float = 1.0

    @classmethod
    def from_strains(cls, xi: float, eta: float, eps_v: float = 0.0, eps_d: float = 0.0, area0: float = 1.0):
        return cls(float(np.exp(xi)), float(np.exp(eta)), eps_v, eps_d, area0)

    @property
    def length_ratio(self) -> float:
        return self.lambda_v * self.lambda_d

    @property
    def lateral_ratio(self) -> float:
        return self.lambda_v / np.sqrt(self.lambda_d)

    @property
    def area(self) -> float:
        """Cross-section ``A0 * lateral_ratio^2``."""
        return self.area0 * self.lateral_ratio**2

    @property
    def sqrt_det_g(self) -> float:
        return self.lambda_v**3

    @property
    def density_ratio(self) -> float:
        """``rho0(t) / rho0(0) = lambda_v^{-3}``."""
        return 1.0 / self.sqrt_det_g


@dataclass(frozen=True)
class ProcessSpec:
    """Everything that defines one rod process.

    Parameters
    ----------
    kind : ProcessKind
    ground : UAPolynomial or SRPolynomial
    dissipation : potential
        Quadratic (UA) or an exponential-rate potential (SR, creep).
    moduli : ElasticModuli, optional
        Needed for SR and creep (Young's modulus).
    eta_star : float
        Fixed total stretch for SR.
    force, area0 : float
        Constant force and initial cross-section for creep.
    load_coupling : float, optional
        ``Lambda``; defaults to ``1 / (2 Y A0^2)`` so that the creep driving
        force at ``eta = 0`` matches the initiation threshold.
    eta_cap : float
        Creep failure cap.
    """

    kind: ProcessKind
    ground: object
    dissipation: object
    moduli: Optional[ElasticModuli] = None
    eta_star: float = 0.0
    force: float = 0.0
    area0: float = 1.0
    load_coupling: Optional[float] = None
    eta_cap: float = 5.0

    def __post_init__(self):
        kind = ProcessKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ProcessKind.UA:
            if not isinstance(self.ground, UAPolynomial):
                raise DomainError("UA needs a UAPolynomial ground energy")
            if not isinstance(self.dissipation, QuadraticPotential):
                raise DomainError("UA needs a quadratic dissipative potential")
        else:
            if not isinstance(self.ground, SRPolynomial):
                raise DomainError(f"{kind.value} needs an SRPolynomial ground energy")
            if not isinstance(self.dissipation, (DornPotential, ExponentialRatePotential)):
                raise DomainError(f"{kind.value} needs an exponential-rate dissipative potential")
            if self.moduli is None:
                raise DomainError(f"{kind.value} needs elastic moduli")
        if kind is ProcessKind.CREEP:
            if not self.area0 > 0:
                raise DomainError("creep needs a positive initial area A0")
            if self.load_coupling is None:
                Y = self.moduli.young_Y
                object.__setattr__(self, "load_coupling", 1.0 / (2.0 * Y * self.area0**2))
            if not self.eta_cap > 0:
                raise DomainError("eta_cap must be positive")

    @property
    def young(self) -> float:
        return self.moduli.young_Y


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


def _ua_argument(spec: ProcessSpec, xi, S):
    return spec.ground.constraint_part(S, xi) / spec.dissipation.alpha


def _ua_field(spec: ProcessSpec, xi, S):
    r = np.sqrt(np.maximum(_ua_argument(spec, xi, S), 0.0))
    return -S * r, -(spec.ground.p / (2.0 * spec.ground.c2)) * r


def ua_rhs(state: ProcessState, spec: ProcessSpec):
    """Unconstrained-aging rates ``(xi_t, S_t)``.

    Raises
    ------
    DomainError
        When the state lies outside the admissible region; ``distance``
        carries ``S_stop(xi) - S`` (negative outside).
    """
    arg = _ua_argument(spec, state.strain_var, state.lapse)
    if arg < -UA_EVENT_LEVEL:
        dist = spec.ground.stopping_lapse(state.strain_var) - state.lapse
        raise DomainError(
            f"UA state (xi={state.strain_var}, S={state.lapse}) is outside the admissible region",
            distance=float(dist),
        )
    xi_t, S_t = _ua_field(spec, state.strain_var, state.lapse)
    return float(xi_t), float(S_t)


def driving_force(spec: ProcessSpec, eta, S):
    """Argument ``A`` of ``psi^{-1}`` for SR or creep."""
    base = spec.ground.constraint_part(S, eta)
    if spec.kind is ProcessKind.SR:
        return base + 0.5 * spec.young * (spec.eta_star - eta) ** 2
    if spec.kind is ProcessKind.CREEP:
        s0 = spec.force / spec.area0
        return base + s0 * np.expm1(eta) + spec.load_coupling * spec.force**2 * np.exp(2.0 * eta)
    raise DomainError("driving force is defined for SR and creep only")


def _exp_field(spec: ProcessSpec, eta, S):
    rho = spec.dissipation.rate_inverse(driving_force(spec, eta, S))
    g = spec.ground
    return S * rho, (g.b0 / (2.0 * g.q2)) * rho


def sr_rhs(state: ProcessState, spec: ProcessSpec):
    """Stress-relaxation rates ``(eta_t, S_t)``; both vanish where ``A <= 0``."""
    if spec.kind is not ProcessKind.SR:
        raise DomainError("sr_rhs needs an SR process spec")
    a, b = _exp_field(spec, state.strain_var, state.lapse)
    return float(a), float(b)


def creep_rhs(state: ProcessState, spec: ProcessSpec):
    """Creep rates ``(eta_t, S_t)``; both vanish where ``A <= 0``."""
    if spec.kind is not ProcessKind.CREEP:
        raise DomainError("creep_rhs needs a creep process spec")
    a, b = _exp_field(spec, state.strain_var, state.lapse)
    return float(a), float(b)


def creep_threshold(spec: ProcessSpec, state0: ProcessState):
    """Creep initiation test.

    Returns
    -------
    (bool, float)
        Whether ``sigma0^2/(2Y) + q1 + 2 q2 S0 + a1 eta0^2 > 0`` with
        ``sigma0 = F / A0``, and that left-hand side.
    """
    g = spec.ground
    sigma0 = spec.force / spec.area0
    margin = sigma0**2 / (2.0 * spec.young) + g.q1 + 2.0 * g.q2 * state0.lapse + g.a1 * state0.strain_var**2
    return bool(margin > 0.0), float(margin)


def process_rates(spec: ProcessSpec, strain_var, lapse):
    """Vectorised rates ``(strain_var_t, S_t)`` over arrays of states (clamped)."""
    x = np.asarray(strain_var, dtype=float)
    S = np.asarray(lapse, dtype=float)
    if spec.kind is ProcessKind.UA:
        return _ua_field(spec, x, S)
    return _exp_field(spec, x, S)


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Termination:
    """Why and where a trajectory ended.

    ``reason`` is one of ``"stopping_curve"``, ``"psi_deactivation"``,
    ``"ductile_failure"``, ``"inactive_at_start"``, ``"horizon"``,
    ``"boundary_contact"`` or ``"max_steps"``.
    """

    reason: str
    time: float
    state: ProcessState
    detail: str = ""


@dataclass
class Trajectory:
    """Sampled solution of a rod process."""

    spec: ProcessSpec
    times: np.ndarray
    strain_var: np.ndarray
    lapse: np.ndarray
    termination: Termination
    events: List[EventRecord] = field(default_factory=list)
    solution: Optional[OdeSolution] = field(default=None, repr=False)

    def states(self) -> List[ProcessState]:
        return [ProcessState(float(x), float(s), float(t)) for t, x, s in zip(self.times, self.strain_var, self.lapse)]

    def __len__(self) -> int:
        return self.times.size

    def sample(self, times) -> np.ndarray:
        """State ``(strain_var, S)`` at arbitrary times, shape ``(n, 2)``.

        Inside the integrated span the continuous extension is used.  After a
        stop (stopping curve, deactivated rate law, or an initially inactive
        state) the vector field vanishes, so the terminal state is held; after
        ductile failure or before the start the values are NaN.
        """
        ts = np.atleast_1d(np.asarray(times, dtype=float))
        out = np.full((ts.size, 2), np.nan)
        t0, t1 = self.times[0], self.times[-1]
        inside = (ts >= t0) & (ts <= t1)
        if self.solution is not None and np.any(inside):
            out[inside] = self.solution(ts[inside])
        elif np.any(inside):
            out[inside] = [self.strain_var[0], self.lapse[0]]
        held = self.termination.reason in ("stopping_curve", "psi_deactivation", "inactive_at_start", "boundary_contact")
        after = ts > t1
        if held and np.any(after):
            out[after] = [self.strain_var[-1], self.lapse[-1]]
        return out


def _events(spec: ProcessSpec):
    if spec.kind is ProcessKind.UA:
        return [Event("stopping_curve", lambda t, y: _ua_argument(spec, y[0], y[1]) - UA_EVENT_LEVEL, True, -1)]
    evs = [Event("psi_deactivation", lambda t, y: driving_force(spec, y[0], y[1]), True, -1)]
    if spec.kind is ProcessKind.CREEP:
        evs.append(Event("ductile_failure", lambda t, y: y[0] - spec.eta_cap, True, +1))
    return evs


def _is_active(spec: ProcessSpec, state0: ProcessState) -> bool:
    if spec.kind is ProcessKind.UA:
        arg = _ua_argument(spec, state0.strain_var, state0.lapse)
        if arg < -UA_EVENT_LEVEL:
            ua_rhs(state0, spec)  # raises with the boundary distance
        return arg > UA_EVENT_LEVEL
    return driving_force(spec, state0.strain_var, state0.lapse) > 0.0


def integrate(
    spec: ProcessSpec,
    state0: ProcessState,
    horizon: float,
    tol: float = 1e-10,
    n_samples: int = 401,
) -> Trajectory:
    """Integrate a rod process until an event fires or the horizon is reached.

    Parameters
    ----------
    spec : ProcessSpec
    state0 : ProcessState
    horizon : float
        Time span after ``state0.time``.
    tol : float
        Relative and absolute per-step tolerance.
    n_samples : int
        Size of a uniform output grid merged with the accepted steps.

    Returns
    -------
    Trajectory
        Samples at the accepted step times and on the uniform grid; the last
        sample is the termination point.
    """
    t0 = state0.time
    y0 = np.array([state0.strain_var, state0.lapse], dtype=float)
    if not _is_active(spec, state0):
        return Trajectory(
            spec,
            np.array([t0]),
            y0[:1].copy(),
            y0[1:].copy(),
            Termination("inactive_at_start", t0, state0, "driving force is not positive at the initial state"),
        )

    if spec.kind is ProcessKind.UA:
        def rhs(t, y):
            a, b = _ua_field(spec, y[0], y[1])
            return np.array([a, b])
    else:
        def rhs(t, y):
            a, b = _exp_field(spec, y[0], y[1])
            return np.array([a, b])

    # The first pass finds where the process ends; the second steps onto a
    # uniform grid over that span, so every sample is an accepted step and
    # inherits the monotonicity of the step map (the interpolant between
    # long steps near a stop can wiggle at the tolerance level).
    first = dopri45(rhs, (t0, t0 + horizon), y0, rtol=tol, atol=tol, events=_events(spec))
    grid = np.linspace(t0, float(first.t[-1]), max(n_samples, 2))
    sol = dopri45(rhs, (t0, t0 + horizon), y0, rtol=tol, atol=tol, events=_events(spec), t_stops=grid[1:-1])
    t_end = float(sol.t[-1])
    times, ys = sol.t.copy(), sol.y.copy()
    end_state = ProcessState(float(sol.y[-1, 0]), float(sol.y[-1, 1]), t_end)
    if sol.status == "event":
        reason = sol.terminal_event.name
        detail = f"event located by bisection at t={t_end:.12g}"
    elif sol.status == "step_underflow":
        reason, detail = "boundary_contact", "step size underflow near the stopping boundary"
    elif sol.status == "max_steps":
        reason, detail = "max_steps", "step budget exhausted"
    else:
        reason, detail = "horizon", "integration horizon reached"
    return Trajectory(
        spec=spec,
        times=times,
        strain_var=ys[:, 0].copy(),
        lapse=ys[:, 1].copy(),
        termination=Termination(reason, t_end, end_state, detail),
        events=list(sol.events),
        solution=sol,
    )


# ---------------------------------------------------------------------------
# outputs
# ---------------------------------------------------------------------------


def first_integral(spec: ProcessSpec, strain_var, lapse):
    """``c2 S^2 - p xi`` for UA, ``b0 eta - q2 S^2`` for SR and creep."""
    return spec.ground.first_integral(np.asarray(lapse, dtype=float), np.asarray(strain_var, dtype=float))


def stress_output(kind, trajectory: Trajectory, spec: ProcessSpec) -> dict:
    """Stress and strain series derived from a trajectory.

    Returns a dict of arrays: UA gives ``xi`` and ``volume_change``
    (``e^{3 xi} - 1``); SR gives ``eps_z = eta* - eta`` and
    ``sigma_zz = Y eps_z``; creep gives ``sigma_zz = (F/A0) e^eta`` and the
    strain energy ``f = F^2 e^{2 eta} / (2 Y A0^2)``.
    """
    kind = ProcessKind(kind)
    x = trajectory.strain_var
    if kind is ProcessKind.UA:
        return {"xi": x.copy(), "volume_change": np.expm1(3.0 * x)}
    if kind is ProcessKind.SR:
        eps = spec.eta_star - x
        return {"eps_z": eps, "sigma_zz": spec.young * eps}
    s0 = spec.force / spec.area0
    return {
        "sigma_zz": s0 * np.exp(x),
        "strain_energy": spec.force**2 * np.exp(2.0 * x) / (2.0 * spec.young * spec.area0**2),
    }


def process_energy(spec: ProcessSpec, strain_var, lapse) -> np.ndarray:
    """Total energy density ``S (F + f + U + chi - chi':K)`` along a trajectory.

    ``f`` is the elastic energy (SR: ``(Y/2)(eta* - eta)^2``; creep:
    ``Lambda F^2 e^{2 eta}``), ``U = (F/A0)(e^eta - 1)`` is the potential of the
    creep load and ``chi - chi':K`` is evaluated on the scalar rate
    ``x = strain_var_t / S``.  With the load written as a potential the
    boundary flux is zero, so the energy is conserved exactly when the
    potential's Legendre response matches the rate law.
    """
    x = np.asarray(strain_var, dtype=float)
    S = np.asarray(lapse, dtype=float)
    rate, _ = process_rates(spec, x, S)
    legendre = spec.dissipation.legendre(rate / S)
    F = spec.ground.value(S, x)
    if spec.kind is ProcessKind.SR:
        F = F + 0.5 * spec.young * (spec.eta_star - x) ** 2
    elif spec.kind is ProcessKind.CREEP:
        F = F + spec.load_coupling * spec.force**2 * np.exp(2.0 * x) + spec.force / spec.area0 * np.expm1(x)
    return S * (F + legendre)


def rod_curvatures(spec: ProcessSpec, trajectory: Trajectory):
    """Extrinsic curvature of the rod metric at every sample."""
    rate, _ = process_rates(spec, trajectory.strain_var, trajectory.lapse)
    out = []
    for r, S in zip(rate, trajectory.lapse):
        if spec.kind is ProcessKind.UA:
            out.append(rod_extrinsic_curvature(float(r), 0.0, float(S)))
        else:
            out.append(rod_extrinsic_curvature(0.0, float(r), float(S)))
    return out
