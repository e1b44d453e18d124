"""Adaptive Dormand-Prince 5(4) integrator with dense output and events.

The rod systems have vector fields that are only Hölder continuous at
their stopping curves, so the integrator treats those curves as terminal
events: after every accepted step each event function is checked for a
sign change and the crossing is located by bisection on the continuous
extension of the step.

Only what the aging processes need is implemented: explicit stepping,
RMS error control, step rejection, a fourth-order continuous extension
and terminal or recording events.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

__all__ = ["Event", "EventRecord", "OdeSolution", "dopri45"]

# Dormand-Prince tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Coefficients of the continuous extension (Shampine's fourth-order interpolant).
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)


@dataclass(frozen=True)
class Event:
    """Scalar event function ``g(t, y)`` watched for sign changes.

    Parameters
    ----------
    name : str
    fn : callable
    terminal : bool
        Stop integration at the first crossing.
    direction : int
        ``-1`` only falling crossings, ``+1`` only rising, ``0`` both.
    """

    name: str
    fn: Callable[[float, np.ndarray], float]
    terminal: bool = True
    direction: int = 0


@dataclass(frozen=True)
class EventRecord:
    name: str
    t: float
    y: np.ndarray


@dataclass
class _Step:
    t0: float
    h: float
    y0: np.ndarray
    Q: np.ndarray  # (dim, 4) polynomial coefficients

    def __call__(self, t: float) -> np.ndarray:
        x = (t - self.t0) / self.h
        powers = np.array([x, x * x, x**3, x**4])
        return self.y0 + self.h * (self.Q @ powers)


@dataclass
class OdeSolution:
    """Result of :func:`dopri45`.

    Attributes
    ----------
    t, y : ndarray
        Accepted step end points (``y`` has shape ``(len(t), dim)``).
    status : str
        ``"horizon"``, ``"event"``, ``"step_underflow"`` or ``"max_steps"``.
    events : list of EventRecord
        Every detected crossing, terminal or not, in time order.
    nfev, naccept, nreject : int
    """

    t: np.ndarray
    y: np.ndarray
    status: str
    events: List[EventRecord]
    nfev: int
    naccept: int
    nreject: int
    _steps: List[_Step] = field(default_factory=list, repr=False)

    def __call__(self, t) -> np.ndarray:
        """Dense output at times inside ``[t[0], t[-1]]``."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if not self._steps:
            return np.repeat(self.y[:1], ts.size, axis=0)
        starts = np.array([s.t0 for s in self._steps])
        idx = np.clip(np.searchsorted(starts, ts, side="right") - 1, 0, len(self._steps) - 1)
        out = np.empty((ts.size, self.y.shape[1]))
        for i, (tt, k) in enumerate(zip(ts, idx)):
            out[i] = self._steps[k](min(tt, self.t[-1]))
        return out

    @property
    def terminal_event(self) -> Optional[EventRecord]:
        return self.events[-1] if self.status == "event" else None


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(x * x)))


def _initial_step(f, t0, y0, f0, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0, d1 = _rms(y0 / scale), _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    f1 = f(t0 + h0, y0 + h0 * f0)
    d2 = _rms((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def _crossed(g0: float, g1: float, direction: int) -> bool:
    if direction >= 0 and g0 < 0.0 <= g1:
        return True
    if direction <= 0 and g0 > 0.0 >= g1:
        return True
    return False


def _locate(ev: Event, step: _Step, ta: float, tb: float, ga: float, time_tol: float) -> float:
    """Bisection for the crossing of ``ev`` inside ``[ta, tb]``."""
    while tb - ta > time_tol:
        tm = 0.5 * (ta + tb)
        gm = ev.fn(tm, step(tm))
        if (gm > 0.0) == (ga > 0.0) and gm != 0.0:
            ta, ga = tm, gm
        else:
            tb = tm
    return tb


def dopri45(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t_span: Sequence[float],
    y0,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    events: Sequence[Event] = (),
    max_step: float = np.inf,
    max_steps: int = 200_000,
    event_time_tol: float = 1e-10,
    t_stops: Sequence[float] = (),
) -> OdeSolution:
    """Integrate ``y' = fun(t, y)`` forward from ``t_span[0]`` to ``t_span[1]``.

    Parameters
    ----------
    fun : callable
        Right-hand side returning an array shaped like ``y``.
    t_span : (float, float)
        Start and end time; the end time must exceed the start time.
    y0 : array_like
    rtol, atol : float
        Mixed error-per-step tolerances (RMS norm).
    events : sequence of Event
    max_step : float
    max_steps : int
    event_time_tol : float
        Width of the bisection bracket at which a crossing is accepted.
    t_stops : sequence of float
        Times the integrator must step onto exactly, so that the solution at
        those times comes from accepted steps rather than the interpolant.

    Returns
    -------
    OdeSolution
    """
    t0, tf = float(t_span[0]), float(t_span[1])
    if not tf > t0:
        raise ValueError("t_span must be increasing")
    y = np.array(y0, dtype=float)
    nfev = 1
    fcur = np.asarray(fun(t0, y), dtype=float)
    h = min(_initial_step(fun, t0, y, fcur, rtol, atol, tf - t0), max_step)
    nfev += 1
    t = t0
    ts, ys = [t0], [y.copy()]
    steps: List[_Step] = []
    records: List[EventRecord] = []
    gvals = [ev.fn(t0, y) for ev in events]
    naccept = nreject = 0
    K = np.empty((7, y.size))
    status = "horizon"
    stops = np.unique(np.asarray(t_stops, dtype=float))
    stops = stops[(stops > t0) & (stops < tf)]
    istop = 0
    while t < tf:
        if naccept + nreject >= max_steps:
            status = "max_steps"
            break
        h = min(h, max_step, tf - t)
        if h <= 16 * np.spacing(max(abs(t), 1.0)):
            status = "step_underflow"
            break
        while istop < stops.size and stops[istop] <= t:
            istop += 1
        h_free = h
        landing = istop < stops.size and t + h >= stops[istop]
        if landing:
            h = stops[istop] - t
        K[0] = fcur
        for s in range(1, 6):
            K[s] = fun(t + _C[s] * h, y + h * (_A[s] @ K[:s]))
        ynew = y + h * (_B[:6] @ K[:6])
        K[6] = fun(t + h, ynew)
        nfev += 6
        err = h * (_E @ K)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
        en = _rms(err / scale)
        if not np.all(np.isfinite(ynew)):
            en = np.inf
        if en > 1.0:
            nreject += 1
            fac = 0.2 if not np.isfinite(en) else max(0.2, 0.9 * en**-0.2)
            h *= fac
            continue
        step = _Step(t, h, y.copy(), (K.T @ _P).copy())
        tnew = stops[istop] if landing else t + h
        # Event scan on the accepted step.
        hit = None
        new_g = []
        for i, ev in enumerate(events):
            g1 = ev.fn(tnew, ynew)
            new_g.append(g1)
            if _crossed(gvals[i], g1, ev.direction):
                te = _locate(ev, step, t, tnew, gvals[i], event_time_tol)
                if hit is None or te < hit[0]:
                    hit = (te, i)
        naccept += 1
        if hit is not None:
            te, i = hit
            ye = step(te)
            records.append(EventRecord(events[i].name, te, ye))
            if events[i].terminal:
                steps.append(_rescaled(step, te))
                ts.append(te)
                ys.append(ye)
                status = "event"
                t = te
                break
        steps.append(step)
        ts.append(tnew)
        ys.append(ynew.copy())
        t, y, fcur = tnew, ynew, K[6].copy()
        gvals = new_g
        fac = 5.0 if en == 0.0 else min(5.0, max(0.2, 0.9 * en**-0.2))
        h = max(h * fac, h_free) if landing else h * fac
    return OdeSolution(
        t=np.array(ts),
        y=np.array(ys),
        status=status,
        events=records,
        nfev=nfev,
        naccept=naccept,
        nreject=nreject,
        _steps=steps,
    )


def _rescaled(step: _Step, te: float) -> _Step:
    """Restrict a step's interpolant to ``[t0, te]`` with the same polynomial."""
    r = (te - step.t0) / step.h
    Q = step.Q * (r ** np.arange(1, 5)) / r
    return _Step(step.t0, te - step.t0, step.y0, Q)
