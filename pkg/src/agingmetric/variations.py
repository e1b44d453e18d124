"""First variations of metric Lagrangian terms and their numerical check.

For a density ``f`` integrated against the material volume
``dM = rho0 S sqrt|g| dV`` the analytic variation is written as

    delta int f dM = int (V_S dS + V_N . dN + V_g : dg) dM,

and :func:`variation_rows` returns the coefficient fields
``(V_S, V_N, V_g)``.  :func:`fd_variation_oracle` differentiates the
discretised functional itself along a direction with central differences
and one Richardson step, so the two can be compared sample by sample.

Three kinds of field data are supported:

``PointFields``
    homogeneous values at one point (no derivatives);
``GridFields``
    fields on a periodic 1D or 2D grid with spectral differentiation;
``TimeSeriesFields``
    homogeneous, block-diagonal fields sampled over one period in time,
    used for the dissipative term ``chi(K)``.

On periodic grids with an odd number of points spectral differentiation is
a skew-symmetric matrix, so integration by parts is exact at the discrete
level and the rows below are the exact gradients of the discrete
functionals (up to aliasing for the curvature term).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError, NumericalFailure
from .kinematics import DeformationJet, ExtrinsicCurvature, cauchy_green
from .potentials import ElasticModuli, QuadraticPotential

__all__ = [
    "PointFields",
    "GridFields",
    "TimeSeriesFields",
    "Perturbation",
    "VariationTerm",
    "VariationRows",
    "TERM_KINDS",
    "SUPPORTED_ROWS",
    "functional",
    "variation_rows",
    "contract_rows",
    "fd_variation_oracle",
    "random_fields",
    "random_perturbation",
    "verify_rows",
    "RowReport",
    "VERIFICATION_CASES",
    "spectral_derivative",
]

TERM_KINDS = ("F_of_detg", "F_of_S", "NormN", "ChiK", "CurvatureTerm", "DivN", "ElasticF")

#: (term kind, field layout) pairs with an analytic row.
SUPPORTED_ROWS = (
    ("F_of_detg", "point"),
    ("F_of_detg", "grid"),
    ("F_of_S", "point"),
    ("F_of_S", "grid"),
    ("NormN", "point"),
    ("NormN", "grid"),
    ("ElasticF", "point"),
    ("ChiK", "time"),
    ("DivN", "grid"),
    ("CurvatureTerm", "grid"),
)


# ---------------------------------------------------------------------------
# field containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointFields:
    """Homogeneous lapse, shift, spatial metric and reference density."""

    lapse: float
    shift: np.ndarray
    spatial: np.ndarray
    rho0: float = 1.0
    layout = "point"

    def weights(self):
        return 1.0


@dataclass(frozen=True)
class GridFields:
    """Fields on a periodic grid of dimension ``d = spatial.shape[-1]``.

    Shapes: ``lapse`` and ``rho0`` are ``grid``; ``shift`` is ``grid + (d,)``;
    ``spatial`` is ``grid + (d, d)``.  ``lengths`` are the periods.
    """

    lapse: np.ndarray
    shift: np.ndarray
    spatial: np.ndarray
    rho0: np.ndarray
    lengths: Tuple[float, ...]
    layout = "grid"

    def weights(self):
        cell = float(np.prod([L / n for L, n in zip(self.lengths, self.lapse.shape)]))
        return cell


@dataclass(frozen=True)
class TimeSeriesFields:
    """Homogeneous block-diagonal fields over one time period.

    ``lapse`` and ``rho0`` have shape ``(n,)`` and ``spatial`` ``(n, d, d)``;
    ``shift`` is carried for uniformity and must be zero.
    """

    lapse: np.ndarray
    spatial: np.ndarray
    rho0: np.ndarray
    period: float
    shift: Optional[np.ndarray] = None
    layout = "time"

    def __post_init__(self):
        if self.shift is None:
            object.__setattr__(self, "shift", np.zeros(self.spatial.shape[:-1]))

    def weights(self):
        return self.period / self.lapse.shape[0]


@dataclass(frozen=True)
class Perturbation:
    """Direction ``(dS, dN, dg)``; ``None`` entries mean zero."""

    lapse: Optional[np.ndarray] = None
    shift: Optional[np.ndarray] = None
    spatial: Optional[np.ndarray] = None


def _perturbed(fields, d: Perturbation, eps: float):
    kw = {}
    for name in ("lapse", "shift", "spatial"):
        base = getattr(fields, name)
        inc = getattr(d, name)
        kw[name] = base if inc is None else np.asarray(base, dtype=float) + eps * np.asarray(inc, dtype=float)
    if isinstance(fields, PointFields):
        return PointFields(float(kw["lapse"]), kw["shift"], kw["spatial"], fields.rho0)
    if isinstance(fields, GridFields):
        return GridFields(kw["lapse"], kw["shift"], kw["spatial"], fields.rho0, fields.lengths)
    return TimeSeriesFields(kw["lapse"], kw["spatial"], fields.rho0, fields.period, kw["shift"])


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VariationTerm:
    """A Lagrangian term and the data it needs.

    Build with the class methods; ``kind`` is one of :data:`TERM_KINDS`.
    """

    kind: str
    f: Optional[Callable] = None
    df: Optional[Callable] = None
    chi: object = None
    jet: Optional[DeformationJet] = None
    moduli: Optional[ElasticModuli] = None

    def __post_init__(self):
        if self.kind not in TERM_KINDS:
            raise DomainError(f"unknown term {self.kind!r}; expected one of {TERM_KINDS}")

    @classmethod
    def of_detg(cls, f=lambda d: d, df=lambda d: np.ones_like(d)):
        """``f(|g|)``; the identity by default."""
        return cls("F_of_detg", f=f, df=df)

    @classmethod
    def of_lapse(cls, f=lambda s: s * s, df=lambda s: 2.0 * s):
        """``f(S)``; ``S^2`` by default."""
        return cls("F_of_S", f=f, df=df)

    @classmethod
    def shift_norm(cls):
        return cls("NormN")

    @classmethod
    def divergence(cls):
        return cls("DivN")

    @classmethod
    def curvature(cls):
        return cls("CurvatureTerm")

    @classmethod
    def dissipation(cls, chi=None):
        return cls("ChiK", chi=QuadraticPotential(1.0) if chi is None else chi)

    @classmethod
    def elastic(cls, jet: Optional[DeformationJet] = None, moduli: Optional[ElasticModuli] = None):
        jet = DeformationJet(np.diag([1.1, 0.95, 1.02])) if jet is None else jet
        moduli = ElasticModuli.from_lame(1.0, 0.5) if moduli is None else moduli
        return cls("ElasticF", jet=jet, moduli=moduli)

    @classmethod
    def default(cls, kind: str) -> "VariationTerm":
        return {
            "F_of_detg": cls.of_detg,
            "F_of_S": cls.of_lapse,
            "NormN": cls.shift_norm,
            "ChiK": cls.dissipation,
            "CurvatureTerm": cls.curvature,
            "DivN": cls.divergence,
            "ElasticF": cls.elastic,
        }[kind]()


@dataclass(frozen=True)
class VariationRows:
    """Coefficient fields multiplying ``dS``, ``dN`` and ``dg`` under ``dM``."""

    lapse: np.ndarray
    shift: np.ndarray
    spatial: np.ndarray


def _as_term(term) -> VariationTerm:
    return term if isinstance(term, VariationTerm) else VariationTerm.default(term)


def _check_supported(term: VariationTerm, fields) -> None:
    if (term.kind, fields.layout) not in SUPPORTED_ROWS:
        rows = ", ".join(f"{k} on {l} fields" for k, l in SUPPORTED_ROWS)
        raise DomainError(f"no analytic row for {term.kind} on {fields.layout} fields; supported rows: {rows}")


# ---------------------------------------------------------------------------
# spectral calculus on periodic grids
# ---------------------------------------------------------------------------


def spectral_derivative(u: np.ndarray, axis: int, length: float) -> np.ndarray:
    """Fourier derivative of periodic samples along ``axis``.

    An odd number of samples keeps the operator skew-symmetric.
    """
    n = u.shape[axis]
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    shape = [1] * u.ndim
    shape[axis] = n
    return np.real(np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(u, axis=axis), axis=axis))


def _grad(u: np.ndarray, fields: GridFields) -> np.ndarray:
    """Gradient along the grid axes, stacked as the last-but-trailing axis.

    For ``u`` of shape ``grid + tail`` returns ``grid + (d,) + tail``.
    """
    d = len(fields.lengths)
    parts = [spectral_derivative(u, a, fields.lengths[a]) for a in range(d)]
    return np.stack(parts, axis=d)


def _christoffel(g: np.ndarray, gi: np.ndarray, fields: GridFields):
    """``Gamma^k_ij = g^kl (d_i g_jl + d_j g_il - d_l g_ij) / 2`` as ``[..., k, i, j]``."""
    dg = _grad(g, fields)  # [..., k, i, j] = d_k g_ij
    di_gjl = dg
    dj_gil = np.swapaxes(dg, -3, -2)
    dl_gij = np.moveaxis(dg, -3, -1)
    low = 0.5 * (di_gjl + dj_gil - dl_gij)  # [..., i, j, l]
    return np.einsum("...kl,...ijl->...kij", gi, low)


def _ricci(g: np.ndarray, gi: np.ndarray, fields: GridFields) -> np.ndarray:
    G = _christoffel(g, gi, fields)  # [..., k, i, j]
    dG = _grad(G, fields)  # [..., m, k, i, j] = d_m Gamma^k_ij
    term1 = np.einsum("...kkij->...ij", dG)
    term2 = np.einsum("...jkik->...ij", dG)
    term3 = np.einsum("...kkl,...lij->...ij", G, G)
    term4 = np.einsum("...kjl,...lik->...ij", G, G)
    return term1 - term2 + term3 - term4


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------


def _density_point(term: VariationTerm, fields) -> np.ndarray:
    """Pointwise value of the Lagrangian term for point or grid fields."""
    S = np.asarray(fields.lapse, dtype=float)
    g = np.asarray(fields.spatial, dtype=float)
    N = np.asarray(fields.shift, dtype=float)
    if term.kind == "F_of_detg":
        return term.f(np.linalg.det(g))
    if term.kind == "F_of_S":
        return term.f(S)
    if term.kind == "NormN":
        return np.einsum("...i,...ij,...j->...", N, g, N)
    if term.kind == "ElasticF":
        C3, _ = cauchy_green(term.jet)
        E = 0.5 * (np.linalg.solve(g, C3) - np.eye(g.shape[-1]))
        tr = np.trace(E)
        return 0.5 * term.moduli.mu * np.trace(E @ E) + 0.5 * term.moduli.lam * tr * tr
    raise DomainError(f"{term.kind} has no pointwise density")


def _sqrt_det(g):
    return np.sqrt(np.linalg.det(g))


def _time_curvatures(fields: TimeSeriesFields):
    g = np.asarray(fields.spatial, dtype=float)
    gdot = spectral_derivative(g, 0, fields.period)
    gi = np.linalg.inv(g)
    return np.einsum("tij,tjk->tik", gi, gdot) / fields.lapse[:, None, None]


def functional(term, fields) -> float:
    """Discrete value of ``int f dM`` for a term and field data."""
    term = _as_term(term)
    w = fields.weights()
    S = np.asarray(fields.lapse, dtype=float)
    g = np.asarray(fields.spatial, dtype=float)
    mass = np.asarray(fields.rho0, dtype=float) * S * _sqrt_det(g)
    if term.kind == "ChiK":
        if fields.layout != "time":
            raise DomainError("the dissipative term needs time-series fields")
        K = _time_curvatures(fields)
        dens = np.array([term.chi.of_curvature(ExtrinsicCurvature(k)) for k in K])
    elif term.kind == "DivN":
        if fields.layout != "grid":
            raise DomainError("the divergence term needs grid fields")
        sq = _sqrt_det(g)
        flux = _grad(sq[..., None] * np.asarray(fields.shift, dtype=float), fields)
        dens = np.einsum("...kk->...", flux) / sq
    elif term.kind == "CurvatureTerm":
        if fields.layout != "grid":
            raise DomainError("the curvature term needs grid fields")
        gi = np.linalg.inv(g)
        dens = np.einsum("...ij,...ij->...", gi, _ricci(g, gi, fields))
    else:
        dens = _density_point(term, fields)
    return float(w * np.sum(dens * mass))


# ---------------------------------------------------------------------------
# analytic rows
# ---------------------------------------------------------------------------


def _sym(M):
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def variation_rows(term, fields) -> VariationRows:
    """Analytic variation coefficients of ``int f dM``.

    Rows (``g^{IJ}`` is the inverse metric, ``phi = rho0 S``):

    * ``f(|g|)``: ``V_S = f/S``, ``V_g = (f/2 + f'|g|) g^{IJ}``;
    * ``f(S)``: ``V_S = f' + f/S``, ``V_g = (f/2) g^{IJ}``;
    * ``|N|^2``: ``V_S = |N|^2/S``, ``V_N = 2 N_I``,
      ``V_g = N^I N^J + (|N|^2/2) g^{IJ}``;
    * ``div_g N``: ``V_S = div_g N / S``, ``V_N = -d_K ln phi``,
      ``V_g = -(1/2) N^K d_K ln phi g^{IJ}``;
    * elastic ``f``: ``V_S = f/S``, ``V_g = (f/2) g^{AB} - (1/2) S^{(AB)}`` with
      ``S^{AB} = S^A_J g^{JB}``;
    * ``chi(K)`` with ``K = S^{-1} g^{-1} g_t`` and ``P = dchi/dK``:
      ``V_S = (chi - P:K)/S`` and
      ``V_g = sym(-g^{-1} P K^T - (rho0 S sqrt|g|)^{-1} d_t(rho0 sqrt|g| g^{-1} P)) + (chi/2) g^{IJ}``;
    * ``R(g)``: ``V_S = R/S``,
      ``V_g = (R/2) g^{IJ} - R^{IJ} + (Hess^{IJ} phi - g^{IJ} Lap phi) / phi``.

    Raises
    ------
    DomainError
        For a term/field combination outside :data:`SUPPORTED_ROWS`.
    """
    term = _as_term(term)
    _check_supported(term, fields)
    S = np.asarray(fields.lapse, dtype=float)
    g = np.asarray(fields.spatial, dtype=float)
    N = np.asarray(fields.shift, dtype=float)
    gi = np.linalg.inv(g)
    zeroN = np.zeros_like(N)
    Sx = S[..., None, None]

    if term.kind == "F_of_detg":
        det = np.linalg.det(g)
        f, df = term.f(det), term.df(det)
        return VariationRows(f / S, zeroN, (0.5 * f + df * det)[..., None, None] * gi)
    if term.kind == "F_of_S":
        f, df = term.f(S), term.df(S)
        return VariationRows(df + f / S, zeroN, (0.5 * f)[..., None, None] * gi)
    if term.kind == "NormN":
        Nl = np.einsum("...ij,...j->...i", g, N)
        n2 = np.einsum("...i,...i->...", N, Nl)
        return VariationRows(
            n2 / S, 2.0 * Nl, np.einsum("...i,...j->...ij", N, N) + (0.5 * n2)[..., None, None] * gi
        )
    if term.kind == "ElasticF":
        f = _density_point(term, fields)
        C3, _ = cauchy_green(term.jet)
        E = 0.5 * (gi @ C3 - np.eye(g.shape[-1]))
        M = term.moduli.mu * E + term.moduli.lam * np.trace(E) * np.eye(g.shape[-1])
        second_pk = gi @ M.T @ C3
        return VariationRows(f / S, zeroN, 0.5 * f * gi - 0.5 * _sym(second_pk @ gi))
    if term.kind == "ChiK":
        K = _time_curvatures(fields)
        chi = np.empty(S.shape)
        P = np.empty_like(K)
        for t, k in enumerate(K):
            kc = ExtrinsicCurvature(k)
            chi[t] = term.chi.of_curvature(kc)
            P[t] = term.chi.grad_curvature(kc)
        PK = np.einsum("tij,tij->t", P, K)
        sq = _sqrt_det(g)
        rho = np.asarray(fields.rho0, dtype=float)
        W = (rho * sq)[:, None, None] * np.einsum("tij,tjk->tik", gi, P)
        dW = spectral_derivative(W, 0, fields.period)
        M = -np.einsum("tij,tjk,tlk->til", gi, P, K) - dW / (rho * S * sq)[:, None, None]
        return VariationRows((chi - PK) / S, zeroN, _sym(M) + (0.5 * chi)[:, None, None] * gi)
    phi = np.asarray(fields.rho0, dtype=float) * S
    dphi = _grad(phi, fields)  # [..., k]
    if term.kind == "DivN":
        sq = _sqrt_det(g)
        flux = _grad(sq[..., None] * N, fields)
        div = np.einsum("...kk->...", flux) / sq
        dlog = dphi / phi[..., None]
        vg = (-0.5 * np.einsum("...k,...k->...", N, dlog))[..., None, None] * gi
        return VariationRows(div / S, -dlog, vg)
    # CurvatureTerm
    ric = _ricci(g, gi, fields)
    R = np.einsum("...ij,...ij->...", gi, ric)
    ric_up = np.einsum("...ia,...jb,...ab->...ij", gi, gi, ric)
    Gam = _christoffel(g, gi, fields)
    hess = _grad(dphi, fields) - np.einsum("...kab,...k->...ab", Gam, dphi)
    hess = _sym(hess)
    hess_up = np.einsum("...ia,...jb,...ab->...ij", gi, gi, hess)
    lap = np.einsum("...ab,...ab->...", gi, hess)
    vg = 0.5 * R[..., None, None] * gi - ric_up + (hess_up - lap[..., None, None] * gi) / phi[..., None, None]
    return VariationRows(R / S, zeroN, vg)


def contract_rows(rows: VariationRows, fields, direction: Perturbation) -> float:
    """``int (V_S dS + V_N . dN + V_g : dg) dM`` on the discrete fields."""
    S = np.asarray(fields.lapse, dtype=float)
    g = np.asarray(fields.spatial, dtype=float)
    mass = np.asarray(fields.rho0, dtype=float) * S * _sqrt_det(g)
    total = np.zeros_like(mass, dtype=float)
    if direction.lapse is not None:
        total = total + rows.lapse * np.asarray(direction.lapse, dtype=float)
    if direction.shift is not None:
        total = total + np.einsum("...i,...i->...", rows.shift, np.asarray(direction.shift, dtype=float))
    if direction.spatial is not None:
        total = total + np.einsum("...ij,...ij->...", rows.spatial, np.asarray(direction.spatial, dtype=float))
    return float(fields.weights() * np.sum(total * mass))


def fd_variation_oracle(term, fields, direction: Perturbation, h: float = 1e-5) -> float:
    """Directional derivative of the discrete functional by finite differences.

    Central differences with steps ``h`` and ``h/2`` are combined by one
    Richardson extrapolation, ``(4 D(h/2) - D(h)) / 3``.  ``h`` is scaled by
    the field magnitude over the direction magnitude.

    Raises
    ------
    NumericalFailure
        If the functional is not finite at one of the probe points.
    """
    term = _as_term(term)
    fmag = max(
        1.0,
        float(np.max(np.abs(fields.lapse))),
        float(np.max(np.abs(fields.spatial))),
    )
    dmag = max(
        float(np.max(np.abs(v))) if v is not None else 0.0
        for v in (direction.lapse, direction.shift, direction.spatial)
    )
    if dmag == 0.0:
        return 0.0
    step = h * fmag / dmag

    def value(eps):
        v = functional(term, _perturbed(fields, direction, eps))
        if not np.isfinite(v):
            raise NumericalFailure(f"functional is not finite at eps={eps:.3e}")
        return v

    def central(s):
        return (value(s) - value(-s)) / (2.0 * s)

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


# ---------------------------------------------------------------------------
# random samples and the verification sweep
# ---------------------------------------------------------------------------


def _trig_field(rng, grid_axes, lengths, amplitude, modes=2, tail=()):
    """Smooth periodic field ``sum a cos(k.x) + b sin(k.x)`` with small wavenumbers."""
    coords = np.meshgrid(
        *[np.arange(n) * L / n for n, L in zip(grid_axes, lengths)], indexing="ij"
    )
    out = np.zeros(tuple(grid_axes) + tuple(tail))
    ks = [k for k in np.ndindex(*([2 * modes + 1] * len(grid_axes)))]
    for kk in ks:
        k = np.array(kk) - modes
        phase = sum(2.0 * np.pi * k[a] * coords[a] / lengths[a] for a in range(len(grid_axes)))
        a = rng.standard_normal(tail) * amplitude
        b = rng.standard_normal(tail) * amplitude
        out += np.cos(phase)[(...,) + (None,) * len(tail)] * a + np.sin(phase)[(...,) + (None,) * len(tail)] * b
    return out / len(ks) ** 0.5


def _spd_near_identity(rng, base_shape, d, spread=0.25):
    A = rng.standard_normal(base_shape + (d, d))
    return np.eye(d) + spread * _sym(A) / np.sqrt(d)


def random_fields(layout: str, rng: np.random.Generator, dim: int = 3, n: int = 17):
    """Random smooth field sample for a layout (``point``, ``grid1d``, ``grid2d``, ``time``)."""
    if layout == "point":
        lam = np.exp(rng.uniform(-1.0, 1.0, dim))
        Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        g = (Q * lam) @ Q.T
        return PointFields(float(rng.uniform(0.5, 2.0)), rng.standard_normal(dim), 0.5 * (g + g.T), float(rng.uniform(0.5, 2.0)))
    if layout in ("grid1d", "grid2d"):
        d = 1 if layout == "grid1d" else 2
        axes = (n,) * d
        L = tuple(float(v) for v in rng.uniform(1.0, 3.0, d))
        S = 1.0 + 0.3 * np.tanh(_trig_field(rng, axes, L, 1.0))
        rho = 1.0 + 0.3 * np.tanh(_trig_field(rng, axes, L, 1.0))
        N = _trig_field(rng, axes, L, 0.5, tail=(d,))
        pert = _trig_field(rng, axes, L, 0.15, tail=(d, d))
        g = np.eye(d) + _sym(pert)
        return GridFields(S, N, g, rho, L)
    if layout == "time":
        T = float(rng.uniform(1.0, 3.0))
        S = 1.0 + 0.3 * np.tanh(_trig_field(rng, (n,), (T,), 1.0))
        rho = 1.0 + 0.3 * np.tanh(_trig_field(rng, (n,), (T,), 1.0))
        g = np.eye(dim) + _sym(_trig_field(rng, (n,), (T,), 0.15, tail=(dim, dim)))
        return TimeSeriesFields(S, g, rho, T)
    raise DomainError(f"unknown layout {layout!r}")


def random_perturbation(fields, rng: np.random.Generator, which=("lapse", "shift", "spatial")) -> Perturbation:
    """Random direction with the shapes of ``fields`` (smooth on grids)."""
    out = {}
    S = np.asarray(fields.lapse, dtype=float)
    for name in which:
        base = np.asarray(getattr(fields, name), dtype=float)
        if isinstance(fields, PointFields):
            v = rng.standard_normal(base.shape)
        else:
            axes = S.shape
            lengths = fields.lengths if isinstance(fields, GridFields) else (fields.period,)
            v = _trig_field(rng, axes, lengths, 1.0, tail=base.shape[len(axes):])
        if name == "spatial":
            v = _sym(v)
        out[name] = v
    return Perturbation(**out)


#: Term/layout/potential combinations exercised by :func:`verify_rows`.
VERIFICATION_CASES = (
    ("F_of_detg", "point"),
    ("F_of_S", "point"),
    ("NormN", "point"),
    ("ElasticF", "point"),
    ("ChiK", "time"),
    ("ChiK-deviatoric", "time"),
    ("DivN", "grid1d"),
    ("DivN", "grid2d"),
    ("CurvatureTerm", "grid1d"),
    ("CurvatureTerm", "grid2d"),
)


# Products of metric components widen the spectrum; the 2D curvature term
# needs a finer torus for the aliasing error to drop below 1e-7.
_GRID_POINTS = {"grid2d": 41}


def _case_term(name: str, rng: np.random.Generator) -> VariationTerm:
    if name == "F_of_detg":
        c = rng.uniform(0.5, 1.5)
        return VariationTerm.of_detg(lambda d: c * d + np.sin(d), lambda d: c + np.cos(d))
    if name == "F_of_S":
        c = rng.uniform(0.5, 1.5)
        return VariationTerm.of_lapse(lambda s: s * s + c * np.log(s), lambda s: 2.0 * s + c / s)
    if name == "ElasticF":
        F = np.eye(3) + 0.2 * rng.standard_normal((3, 3))
        if np.linalg.det(F) <= 0:
            F[:, 0] *= -1.0
        return VariationTerm.elastic(DeformationJet(F), ElasticModuli.from_lame(rng.uniform(0.5, 2.0), rng.uniform(0.1, 1.0)))
    if name == "ChiK":
        return VariationTerm.dissipation(QuadraticPotential(rng.uniform(0.5, 2.0), "volumetric"))
    if name == "ChiK-deviatoric":
        return VariationTerm.dissipation(QuadraticPotential(rng.uniform(0.5, 2.0), "deviatoric"))
    return VariationTerm.default(name)


@dataclass
class RowReport:
    """Worst-case agreement of one verification case."""

    case: str
    layout: str
    samples: int
    max_rel_error: float
    seconds: float


def verify_rows(n_samples: int = 100, seed: int = 0, h: float = 1e-5, cases=VERIFICATION_CASES):
    """Compare every supported row with the oracle on random samples.

    Returns
    -------
    list of RowReport
        The error measure is ``|analytic - oracle| / max(1, |analytic|)``.
    """
    rng = np.random.default_rng(seed)
    reports = []
    for name, layout in cases:
        t0 = time.perf_counter()
        worst = 0.0
        for _ in range(n_samples):
            term = _case_term(name, rng)
            fields = random_fields(layout, rng, n=_GRID_POINTS.get(layout, 17))
            which = ("lapse", "spatial") if term.kind in ("ChiK", "ElasticF") else ("lapse", "shift", "spatial")
            if term.kind == "CurvatureTerm":
                which = ("lapse", "spatial")
            d = random_perturbation(fields, rng, which)
            a = contract_rows(variation_rows(term, fields), fields, d)
            o = fd_variation_oracle(term, fields, d, h)
            worst = max(worst, abs(a - o) / max(1.0, abs(a)))
        reports.append(RowReport(name, layout, n_samples, worst, time.perf_counter() - t0))
    return reports
