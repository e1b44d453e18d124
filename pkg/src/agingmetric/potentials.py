"""Energy densities of the model.

Three families live here:

* ground-state energies ``F`` (cohesive energy of the unstrained state),
  one dataclass per functional form;
* dissipative potentials ``chi`` of the extrinsic curvature, together with
  the scalar rate law each one induces;
* isotropic elastic moduli with the usual interconversions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy import special

from .errors import DomainError
from .kinematics import ExtrinsicCurvature

__all__ = [
    "UAPolynomial",
    "SRPolynomial",
    "NeckingDoubleWell",
    "InvariantBased",
    "TwoPhase1D",
    "Classical1D",
    "QuadraticPotential",
    "DornPotential",
    "ExponentialRatePotential",
    "ElasticModuli",
    "adjugate3",
]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise DomainError(message)


# ---------------------------------------------------------------------------
# ground-state energies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UAPolynomial:
    """Ground energy for unconstrained aging.

    ``F(S, xi) = c1 + c2 S + p xi / S + k xi^2`` with ``c1 < 0``, ``c2 > 0``,
    ``p < 0`` and ``k > 0``.
    """

    c1: float
    c2: float
    p: float
    k: float

    def __post_init__(self):
        _require(self.c1 < 0, f"UA ground energy needs c1 < 0, got {self.c1}")
        _require(self.c2 > 0, f"UA ground energy needs c2 > 0, got {self.c2}")
        _require(self.p < 0, f"UA ground energy needs p < 0, got {self.p}")
        _require(self.k > 0, f"UA ground energy needs k > 0, got {self.k}")

    def value(self, lapse, xi):
        return self.c1 + self.c2 * lapse + self.p * xi / lapse + self.k * xi**2

    def d_lapse(self, lapse, xi):
        return self.c2 - self.p * xi / lapse**2

    def d_strain(self, lapse, xi):
        return self.p / lapse + 2.0 * self.k * xi

    def constraint_part(self, lapse, xi):
        """``F + S dF/dS = c1 + 2 c2 S + k xi^2``."""
        return self.c1 + 2.0 * self.c2 * lapse + self.k * xi**2

    def stopping_lapse(self, xi):
        """Lapse on the curve where unconstrained aging stops."""
        return -(self.c1 + self.k * xi**2) / (2.0 * self.c2)

    def first_integral(self, lapse, xi):
        """``J = c2 S^2 - p xi``."""
        return self.c2 * lapse**2 - self.p * xi


@dataclass(frozen=True)
class SRPolynomial:
    """Ground energy for stress relaxation and creep.

    ``F(S, eta) = q1 + q2 S + eta (b0 / S + b1 + a1 eta)`` with
    ``q1, q2, b0, a1 < 0``.
    """

    q1: float
    q2: float
    b0: float
    b1: float
    a1: float

    def __post_init__(self):
        for name in ("q1", "q2", "b0", "a1"):
            v = getattr(self, name)
            _require(v < 0, f"SR/creep ground energy needs {name} < 0, got {v}")

    def value(self, lapse, eta):
        return self.q1 + self.q2 * lapse + eta * (self.b0 / lapse + self.b1 + self.a1 * eta)

    def d_lapse(self, lapse, eta):
        return self.q2 - self.b0 * eta / lapse**2

    def d_strain(self, lapse, eta):
        return self.b0 / lapse + self.b1 + 2.0 * self.a1 * eta

    def constraint_part(self, lapse, eta):
        """``F + S dF/dS = q1 + 2 q2 S + b1 eta + a1 eta^2``."""
        return self.q1 + 2.0 * self.q2 * lapse + self.b1 * eta + self.a1 * eta**2

    def first_integral(self, lapse, eta):
        """``J = b0 eta - q2 S^2``."""
        return self.b0 * eta - self.q2 * lapse**2


@dataclass(frozen=True)
class NeckingDoubleWell:
    """Double-well energy of a drawn fibre as a function of the stretch.

    ``F(lam) = (lam - lam0)^2 (a + b (lam - lam1)^2) - (force/A0)(lam - lam0)^2``.
    With ``force_per_area = a`` this is the pure double well
    ``b (lam - lam0)^2 (lam - lam1)^2``; ``None`` selects that case.
    """

    a: float
    b: float
    lambda0: float = 1.0
    lambda1: float = 2.0
    force_per_area: float = None

    def __post_init__(self):
        _require(self.a > 0 and self.b > 0, "necking well coefficients a, b must be positive")
        _require(self.lambda0 > 0, "lambda0 must be positive")
        _require(self.lambda1 > self.lambda0, "degenerate wells: need lambda1 > lambda0")
        if self.force_per_area is None:
            object.__setattr__(self, "force_per_area", float(self.a))

    @property
    def load_excess(self) -> float:
        """``kappa = force/A0 - a``; zero for the symmetric double well."""
        return self.force_per_area - self.a

    def value(self, lam, lapse=None):
        u = lam - self.lambda0
        v = lam - self.lambda1
        return u**2 * (self.b * v**2 - self.load_excess)

    def d1(self, lam):
        u = lam - self.lambda0
        v = lam - self.lambda1
        return 2.0 * u * (self.b * v**2 - self.load_excess) + 2.0 * self.b * u**2 * v

    def d2(self, lam):
        u = lam - self.lambda0
        v = lam - self.lambda1
        return 2.0 * (self.b * v**2 - self.load_excess) + 8.0 * self.b * u * v + 2.0 * self.b * u**2

    def critical_stretches(self):
        """Roots of ``F'`` in increasing order (``lambda0`` and two more)."""
        l0, l1, b = self.lambda0, self.lambda1, self.b
        # F'/(2 (lam - lam0)) = b (lam - lam1)(2 lam - lam0 - lam1) - kappa
        A = 2.0 * b
        B = -b * (l0 + 3.0 * l1)
        C = b * l1 * (l0 + l1) - self.load_excess
        disc = B * B - 4.0 * A * C
        if disc < 0:
            raise DomainError("the loaded double well has a single equilibrium")
        r = math.sqrt(disc)
        q = -0.5 * (B + math.copysign(r, B))
        roots = sorted({q / A, C / q} | {l0})
        return tuple(roots)


@dataclass(frozen=True)
class InvariantBased:
    """Polynomial ground energy in the strain invariants.

    ``F = sum c_ijk I1^i I2^j I3^k`` where ``I1 = Tr E``, ``I2 = Tr E^2`` and
    ``I3`` is ``Tr E^3`` (``i3_mode="trace_cube"``, default) or ``det E``
    (``i3_mode="det"``).

    Parameters
    ----------
    coefficients : dict
        Maps exponent triples ``(i, j, k)`` to coefficients.
    i3_mode : str
    """

    coefficients: Dict[Tuple[int, int, int], float] = field(default_factory=dict)
    i3_mode: str = "trace_cube"

    def __post_init__(self):
        _require(self.i3_mode in ("trace_cube", "det"), f"unknown i3_mode {self.i3_mode!r}")
        for key in self.coefficients:
            _require(
                len(key) == 3 and all(int(e) == e and e >= 0 for e in key),
                f"invalid exponent triple {key!r}",
            )

    def invariants(self, E) -> np.ndarray:
        E = np.asarray(E, dtype=float)
        E2 = E @ E
        i3 = np.trace(E2 @ E) if self.i3_mode == "trace_cube" else np.linalg.det(E)
        return np.array([np.trace(E), np.trace(E2), i3])

    def value_at(self, inv) -> float:
        return float(
            sum(c * inv[0] ** i * inv[1] ** j * inv[2] ** k for (i, j, k), c in self.coefficients.items())
        )

    def value(self, E) -> float:
        return self.value_at(self.invariants(E))

    def gradient(self, inv) -> np.ndarray:
        """``dF/dI_n``, n = 1..3."""
        g = np.zeros(3)
        for exps, c in self.coefficients.items():
            for n in range(3):
                if exps[n] == 0:
                    continue
                e = list(exps)
                term = c * e[n]
                e[n] -= 1
                g[n] += term * inv[0] ** e[0] * inv[1] ** e[1] * inv[2] ** e[2]
        return g

    def hessian(self, inv) -> np.ndarray:
        """``d^2 F / dI_m dI_n``."""
        H = np.zeros((3, 3))
        for exps, c in self.coefficients.items():
            for m in range(3):
                for n in range(3):
                    e = list(exps)
                    coef = c * e[m]
                    e[m] -= 1
                    if e[m] < 0:
                        continue
                    coef *= e[n]
                    e[n] -= 1
                    if coef == 0 or e[n] < 0:
                        continue
                    H[m, n] += coef * inv[0] ** e[0] * inv[1] ** e[1] * inv[2] ** e[2]
        return H


@dataclass(frozen=True)
class TwoPhase1D:
    """One-dimensional two-phase energy ``F0 + c4 E^2 (E + 1/Q)^2 / 4 + c2 E^2 / 2``."""

    F0: float
    c2: float
    c4: float
    Q: float

    def __post_init__(self):
        _require(self.Q != 0, "two-phase energy needs Q != 0")

    def value(self, E):
        return self.F0 + 0.25 * self.c4 * E**2 * (E + 1.0 / self.Q) ** 2 + 0.5 * self.c2 * E**2

    def d2(self, E):
        return self.c2 + self.c4 * (3.0 * E**2 + 3.0 * E / self.Q + 0.5 / self.Q**2)

    def stiffness_gap(self) -> float:
        """``F''(Q) - F''(0) = 3 c4 (1 + Q^2)``."""
        return 3.0 * self.c4 * (1.0 + self.Q**2)


@dataclass(frozen=True)
class Classical1D:
    """One-dimensional classical energy ``F0 + c E^2``."""

    F0: float
    c: float

    def value(self, E):
        return self.F0 + self.c * E**2

    def d2(self, E):
        return 2.0 * self.c + 0.0 * E


def adjugate3(E) -> np.ndarray:
    """Adjugate of a 3x3 matrix through the Cayley-Hamilton identity."""
    E = np.asarray(E, dtype=float)
    E2 = E @ E
    tr = np.trace(E)
    return 0.5 * (tr**2 - np.trace(E2)) * np.eye(3) - tr * E + E2


# ---------------------------------------------------------------------------
# dissipative potentials
# ---------------------------------------------------------------------------


class _PotentialBase:
    """Shared plumbing: evaluation on an extrinsic curvature.

    ``argument`` selects the scalar rate the potential acts on:
    ``"volumetric"`` uses ``Tr K / 6`` and ``"deviatoric"`` uses
    ``sqrt(Tr(dev K)^2 / 6)``.  Both are homogeneous of degree one in ``K``,
    so ``dchi/dK : K = x chi'(x)``.
    """

    argument: str

    def scalar_rate(self, K: ExtrinsicCurvature) -> float:
        if self.argument == "volumetric":
            return K.volumetric_rate
        return K.deviatoric_rate

    def of_curvature(self, K: ExtrinsicCurvature) -> float:
        return float(self.chi(self.scalar_rate(K)))

    def grad_curvature(self, K: ExtrinsicCurvature) -> np.ndarray:
        """Matrix ``P[I, J] = d chi / d K^I_J``."""
        x = self.scalar_rate(K)
        n = K.tensor.shape[0]
        if self.argument == "volumetric":
            return float(self.dchi(x)) / 6.0 * np.eye(n)
        if x == 0.0:
            return np.zeros((n, n))
        dev = K.tensor - K.trace / n * np.eye(n)
        return float(self.dchi(x)) * dev.T / (6.0 * x)

    def legendre(self, x):
        """``chi(x) - x chi'(x)``, the scalar form of ``chi - chi':K``."""
        return self.chi(x) - x * self.dchi(x)


@dataclass(frozen=True)
class QuadraticPotential(_PotentialBase):
    """``chi(x) = alpha x^2``.

    The rate law is ``x chi' - chi = alpha x^2``; its inverse returns the
    magnitude ``sqrt(y / alpha)`` when ``y / alpha > 0`` and zero otherwise.
    """

    alpha: float = 1.0
    argument: str = "volumetric"

    def __post_init__(self):
        _require(self.alpha != 0, "quadratic potential needs alpha != 0")
        _require(self.argument in ("volumetric", "deviatoric"), f"bad argument {self.argument!r}")

    def chi(self, x):
        return self.alpha * np.square(x)

    def dchi(self, x):
        return 2.0 * self.alpha * np.asarray(x, dtype=float)

    def d2chi(self, x):
        return 2.0 * self.alpha + 0.0 * np.asarray(x, dtype=float)

    def rate_response(self, x):
        return self.alpha * np.square(x)

    def rate_inverse(self, y):
        z = np.asarray(y, dtype=float) / self.alpha
        return np.sqrt(np.maximum(z, 0.0))


def _exp_rate(D, x):
    return np.maximum(np.expm1(D * np.asarray(x, dtype=float)), 0.0)


def _exp_rate_inverse(D, y):
    y = np.asarray(y, dtype=float)
    return np.where(y > 0.0, np.log1p(np.maximum(y, 0.0)) / D, 0.0)


@dataclass(frozen=True)
class DornPotential(_PotentialBase):
    """Dorn-type potential.

    ``chi(x) = c x + x/(beta D) ln(x/D) - (1/beta)(1 + x/D) ln(1 + x/D)`` for
    ``x > 0`` and the continuation value 0 otherwise.  The process
    equations use the rate law ``psi(x) = (exp(D x) - 1)_+`` with inverse
    ``ln(1 + y) / D``; note that the Legendre response of the closed form,
    ``x chi' - chi = ln(1 + x/D) / beta``, is a different function.
    """

    c: float = 0.0
    beta: float = 1.0
    D: float = 1.0
    argument: str = "deviatoric"

    def __post_init__(self):
        _require(self.D > 0, f"Dorn potential needs D > 0, got {self.D}")
        _require(self.beta > 0, f"Dorn potential needs beta > 0, got {self.beta}")
        _require(self.argument in ("volumetric", "deviatoric"), f"bad argument {self.argument!r}")

    def chi(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.maximum(x, 0.0)
        r = xp / self.D
        val = self.c * xp + special.xlogy(xp, r) / (self.beta * self.D) - (1.0 + r) * np.log1p(r) / self.beta
        return np.where(x > 0.0, val, 0.0)

    def dchi(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        val = self.c + np.log(xp / (self.D + xp)) / (self.beta * self.D)
        return np.where(x > 0.0, val, 0.0)

    def d2chi(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, 1.0 / (self.beta * xp * (self.D + xp)), 0.0)

    def rate_response(self, x):
        return _exp_rate(self.D, x)

    def rate_inverse(self, y):
        return _exp_rate_inverse(self.D, y)


@dataclass(frozen=True)
class ExponentialRatePotential(_PotentialBase):
    """Potential whose Legendre response is exactly ``(exp(D x) - 1)_+``.

    Solving ``x chi' - chi = exp(D x) - 1`` gives
    ``chi(x) = D x Ei(D x) - (exp(D x) - 1) + c x`` for ``x > 0`` (``Ei`` is
    the exponential integral) and 0 otherwise.  It shares the rate law of
    :class:`DornPotential`, so trajectories coincide, but the constraint and
    energy identities close exactly with it.
    """

    D: float = 1.0
    c: float = 0.0
    argument: str = "deviatoric"

    def __post_init__(self):
        _require(self.D > 0, f"exponential-rate potential needs D > 0, got {self.D}")
        _require(self.argument in ("volumetric", "deviatoric"), f"bad argument {self.argument!r}")

    def chi(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        Dx = self.D * xp
        val = Dx * special.expi(Dx) - np.expm1(Dx) + self.c * xp
        return np.where(x > 0.0, val, 0.0)

    def dchi(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, self.D * special.expi(self.D * xp) + self.c, 0.0)

    def d2chi(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, self.D * np.exp(self.D * xp) / xp, 0.0)

    def rate_response(self, x):
        return _exp_rate(self.D, x)

    def rate_inverse(self, y):
        return _exp_rate_inverse(self.D, y)


# ---------------------------------------------------------------------------
# elastic moduli
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElasticModuli:
    """Isotropic elastic constants; build with one of the ``from_*`` methods."""

    mu: float
    lam: float
    bulk_K: float
    young_Y: float
    poisson_nu: float

    @classmethod
    def from_lame(cls, mu: float, lam: float) -> "ElasticModuli":
        _require(mu > 0, f"shear modulus must be positive, got {mu}")
        _require(3 * lam + 2 * mu > 0, "bulk modulus must be positive")
        return cls(
            mu=float(mu),
            lam=float(lam),
            bulk_K=lam + 2.0 * mu / 3.0,
            young_Y=mu * (3.0 * lam + 2.0 * mu) / (lam + mu),
            poisson_nu=lam / (2.0 * (lam + mu)),
        )

    @classmethod
    def from_young_poisson(cls, Y: float, nu: float) -> "ElasticModuli":
        _require(Y > 0, f"Young's modulus must be positive, got {Y}")
        _require(-1.0 < nu < 0.5, f"Poisson ratio must lie in (-1, 0.5), got {nu}")
        mu = Y / (2.0 * (1.0 + nu))
        lam = Y * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
        return cls(mu=mu, lam=lam, bulk_K=Y / (3.0 * (1.0 - 2.0 * nu)), young_Y=float(Y), poisson_nu=float(nu))

    @classmethod
    def from_bulk_shear(cls, K: float, mu: float) -> "ElasticModuli":
        return cls.from_lame(mu=mu, lam=K - 2.0 * mu / 3.0)
