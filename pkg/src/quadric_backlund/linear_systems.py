"""Completely integrable linear systems in (alpha, beta, lambda, mu) driven by an angle field."""
from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numerics import cubic_along, diff1
from .quadric_geom import QuadricKind, QuadricSpec, h_function, h_gradient
from .sg_family import EquationKind, GridSpec, ScalarField, pde_residual


class SystemKind(Enum):
    PARAB_HYP_REAL = "parab_hyp_real"
    PARAB_HYP_IMAG = "parab_hyp_imag"
    PARAB_ELL_SINH = "parab_ell_sinh"
    PARAB_ELL_SINE = "parab_ell_sine"
    HYPERBOLOID_REAL = "hyperboloid_real"
    PARAB_EXP_SEED = "parab_exp_seed"

    @property
    def equation(self) -> EquationKind | None:
        """Equation solved by the driving angle (None when it couples to alpha, beta)."""
        return {
            SystemKind.PARAB_HYP_REAL: EquationKind.HYPERBOLIC_SINH,
            SystemKind.PARAB_HYP_IMAG: EquationKind.HYPERBOLIC_SINE,
            SystemKind.PARAB_ELL_SINH: EquationKind.ELLIPTIC_SINH,
            SystemKind.PARAB_ELL_SINE: EquationKind.ELLIPTIC_SINE,
        }.get(self)

    @property
    def circular(self) -> bool:
        return self in (SystemKind.PARAB_HYP_IMAG, SystemKind.PARAB_ELL_SINE)

    @property
    def lam_sign(self) -> int:
        """s in the prime integral mu^2 + s lambda^2 = H."""
        return 1 if self in (SystemKind.PARAB_HYP_IMAG, SystemKind.PARAB_ELL_SINH) else -1

    @property
    def eps(self) -> int:
        """Totally-real region sign of the paraboloid the system belongs to."""
        return -1 if self.circular else 1


@dataclass
class AuxState:
    alpha: np.ndarray
    beta: np.ndarray
    lam: np.ndarray
    mu: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.stack([np.asarray(x, dtype=float) for x in (self.alpha, self.beta, self.lam, self.mu)])

    @classmethod
    def from_array(cls, y) -> "AuxState":
        return cls(y[0], y[1], y[2], y[3])

    def at(self, idx) -> "AuxState":
        return AuxState(*(np.asarray(x)[idx] for x in (self.alpha, self.beta, self.lam, self.mu)))


@dataclass
class AuxField:
    grid: GridSpec
    states: AuxState
    kind: SystemKind
    valid: np.ndarray = None

    def __post_init__(self):
        if self.valid is None:
            self.valid = np.ones(self.grid.shape, dtype=bool)


def system_h(kind: SystemKind, spec: QuadricSpec, alpha, beta):
    if kind is SystemKind.PARAB_EXP_SEED:
        return np.sinh(beta)**2 + 1 / spec.a1 + np.exp(-2 * alpha)
    if kind is SystemKind.PARAB_ELL_SINH:
        return alpha**2 / spec.a1 - beta**2 / spec.a2 + 1
    if kind is SystemKind.PARAB_ELL_SINE:
        return -alpha**2 / spec.a1 - beta**2 / spec.a2 - 1
    if kind is SystemKind.PARAB_HYP_IMAG:
        return -alpha**2 / spec.a1 - beta**2 / spec.a2 - 1
    if kind is SystemKind.PARAB_HYP_REAL:
        return alpha**2 / spec.a1 - beta**2 / spec.a2 + 1
    return h_function(spec, alpha, beta)


def prime_integral(kind: SystemKind, state: AuxState, spec: QuadricSpec):
    """mu^2 + s lambda^2 - H, which vanishes on solutions."""
    return state.mu**2 + kind.lam_sign * state.lam**2 - system_h(kind, spec, state.alpha, state.beta)


def _check_spec(kind: SystemKind, spec: QuadricSpec):
    want = QuadricKind.HYPERBOLOID_ONE_SHEET if kind is SystemKind.HYPERBOLOID_REAL else QuadricKind.HYPERBOLIC_PARABOLOID
    if spec.kind is not want:
        raise ValueError(f"{kind.value} needs a {want.value} quadric, got {spec.kind.value}")


def rhs(kind: SystemKind, state: AuxState, theta, theta_u, theta_v, spec: QuadricSpec):
    """((a_u, b_u, l_u, m_u), (a_v, b_v, l_v, m_v))."""
    _check_spec(kind, spec)
    a, b, l, m = state.alpha, state.beta, state.lam, state.mu
    a1, a2 = spec.a1, spec.a2
    tu, tv = theta_u, theta_v
    if kind.circular:
        C, S = np.cos(theta), np.sin(theta)
    else:
        C, S = np.cosh(theta), np.sinh(theta)
    if kind is SystemKind.PARAB_HYP_REAL:
        du = (l * C, l * S, -C * a / a1 + S * b / a2 + m * tv, l * tv)
        dv = (m * S, m * C, m * tu, S * a / a1 - C * b / a2 + l * tu)
    elif kind is SystemKind.PARAB_HYP_IMAG:
        du = (l * C, l * S, -C * a / a1 - S * b / a2 - m * tv, l * tv)
        dv = (-m * S, m * C, -m * tu, S * a / a1 - C * b / a2 + l * tu)
    elif kind is SystemKind.PARAB_ELL_SINH:
        du = (l * C, l * S, C * a / a1 - S * b / a2 - m * tv, l * tv)
        dv = (m * S, m * C, m * tu, S * a / a1 - C * b / a2 - l * tu)
    elif kind is SystemKind.PARAB_ELL_SINE:
        du = (l * C, l * S, C * a / a1 + S * b / a2 + m * tv, l * tv)
        dv = (-m * S, m * C, -m * tu, S * a / a1 - C * b / a2 - l * tu)
    elif kind is SystemKind.HYPERBOLOID_REAL:
        ha, hb = h_gradient(spec, a, b)
        du = (l * C, l * S, -ha * C / 2 - hb * S / 2 + m * tv, l * tv)
        dv = (m * S, m * C, m * tu, ha * S / 2 + hb * C / 2 + l * tu)
    else:
        e2a, shch = np.exp(-2 * a), np.sinh(b) * np.cosh(b)
        du = (l * C, l * S, C * e2a - S * shch + m * tv, l * tv)
        dv = (m * S, m * C, m * tu, -S * e2a + C * shch + l * tu)
    return du, dv


def project(kind: SystemKind, spec: QuadricSpec, y: np.ndarray) -> np.ndarray:
    """Rescale (lambda, mu) so that mu^2 + s lambda^2 = H."""
    H = system_h(kind, spec, y[0], y[1])
    q = y[3]**2 + kind.lam_sign * y[2]**2
    t = np.sqrt(np.where(q * H > 0, H / np.where(q == 0, 1, q), 1.0))
    out = y.copy()
    out[2] *= t
    out[3] *= t
    return out


def _march(kind, spec, y0, track, h, substeps, drift_tol, which):
    n = track.shape[0]
    out = np.empty((n,) + y0.shape)
    y = y0.astype(float)
    out[0] = y
    hs = h / substeps

    def f(y, a):
        return np.stack(rhs(kind, AuxState.from_array(y), a[0], a[1], a[2], spec)[which])

    worst = 0.0
    for i in range(n - 1):
        for k in range(substeps):
            t0 = k / substeps
            a = cubic_along(track, i, t0)
            b = cubic_along(track, i, t0 + 0.5 / substeps)
            c = cubic_along(track, i, t0 + 1.0 / substeps)
            k1 = f(y, a)
            k2 = f(y + hs / 2 * k1, b)
            k3 = f(y + hs / 2 * k2, b)
            k4 = f(y + hs * k3, c)
            y = y + hs / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            d = float(np.max(np.abs(prime_integral(kind, AuxState.from_array(y), spec))))
            worst = max(worst, d)
            if d > drift_tol:
                raise ValueError(f"prime-integral drift {d:.3g} before projection: angle field inconsistent with the system")
            y = project(kind, spec, y)
        out[i + 1] = y
    return out, worst


@dataclass
class IntegrationReport:
    max_drift: float
    max_constraint: float


def integrate(kind: SystemKind, theta_field: ScalarField, init: AuxState, spec: QuadricSpec,
              order: str = "uv", substeps: int = 1, drift_tol: float = 1e-4, pde_tol: float | None = None,
              report: bool = False):
    """March the system over the grid of theta_field from init at its first sample."""
    _check_spec(kind, spec)
    g = theta_field.grid
    y0 = AuxState.from_array(np.array([init.alpha, init.beta, init.lam, init.mu], dtype=float))
    pi0 = abs(float(prime_integral(kind, y0, spec)))
    if pi0 > 1e-10:
        raise ValueError(f"initial state violates the prime integral by {pi0:.3g}")
    eq = kind.equation
    if eq is not None and pde_tol != np.inf:
        if theta_field.kind is not eq:
            raise ValueError(f"{kind.value} is driven by a {eq.value} field, got {theta_field.kind.value}")
        h = max(g.du, g.dv)
        tol = pde_tol if pde_tol is not None else max(1e3 * h**2, 1e-12)
        res = pde_residual(theta_field).max_abs(interior=True)
        if res > tol:
            raise ValueError(f"angle field fails its PDE check: residual {res:.3g} > {tol:.3g}")
    T = theta_field.values
    st = np.stack([T, diff1(T, g.du, 1, order=4), diff1(T, g.dv, 0, order=4)])
    y0 = y0.as_array()
    if order == "uv":
        row, d1 = _march(kind, spec, y0, np.moveaxis(st[:, 0, :], 1, 0), g.du, substeps, drift_tol, 0)  # (nu, 4)
        cols, d2 = _march(kind, spec, row.T, np.moveaxis(st, 1, 0), g.dv, substeps, drift_tol, 1)  # (nv, 4, nu)
        Y = np.moveaxis(cols, 1, 0)
    elif order == "vu":
        col, d1 = _march(kind, spec, y0, np.moveaxis(st[:, :, 0], 1, 0), g.dv, substeps, drift_tol, 1)  # (nv, 4)
        rows, d2 = _march(kind, spec, col.T, np.moveaxis(st, 2, 0), g.du, substeps, drift_tol, 0)  # (nu, 4, nv)
        Y = np.moveaxis(rows, (0, 1, 2), (2, 0, 1))
    else:
        raise ValueError("order must be 'uv' or 'vu'")
    st_ = AuxState.from_array(Y)
    field = AuxField(g, st_, kind)
    if report:
        return field, IntegrationReport(max(d1, d2), float(np.max(np.abs(prime_integral(kind, st_, spec)))))
    return field


def path_difference(kind: SystemKind, theta_field: ScalarField, init: AuxState, spec: QuadricSpec, **kw) -> float:
    a = integrate(kind, theta_field, init, spec, order="uv", **kw).states.as_array()
    b = integrate(kind, theta_field, init, spec, order="vu", **kw).states.as_array()
    return float(np.max(np.abs(a - b)))


def angle_decompose(alpha_field: ScalarField, beta_field: ScalarField, eps: int, order: int = 4):
    """Factor the Jacobian of (alpha, beta) into (lambda, mu, theta).

    Returns (lam, mu, theta, conjugacy_residual, valid) as arrays on the grid.
    """
    g = alpha_field.grid
    A, B = alpha_field.values, beta_field.values
    au, av = diff1(A, g.du, 1, order), diff1(A, g.dv, 0, order)
    bu, bv = diff1(B, g.du, 1, order), diff1(B, g.dv, 0, order)
    conj = au * av - eps * bu * bv
    if eps == 1:
        qa, qb = au**2 - bu**2, bv**2 - av**2
        ok = (qa > 0) & (qb > 0) & (np.abs(au) > 0)
        lam = np.sign(au) * np.sqrt(np.where(ok, qa, 0.0))
        mu = np.sign(bv) * np.sqrt(np.where(ok, qb, 0.0))
        ratio = np.where(ok, bu / np.where(au == 0, 1, au), 0.0)
        ok &= np.abs(ratio) < 1
        theta = np.arctanh(np.where(ok, ratio, 0.0))
    else:
        lam0 = np.sqrt(au**2 + bu**2)
        # sign of lambda fixed by continuity from the first sample (cos theta > 0 there)
        s0 = 1.0 if au.flat[0] >= 0 else -1.0
        lam = s0 * lam0
        theta = np.unwrap(np.unwrap(np.arctan2(bu / np.where(lam == 0, 1, lam), au / np.where(lam == 0, 1, lam)), axis=1), axis=0)
        mu = bv * np.cos(theta) - av * np.sin(theta)
        ok = lam0 > 0
    return lam, mu, theta, conj, ok


def auxfield_to_csv(f: AuxField) -> str:
    g = f.grid
    buf = io.StringIO()
    buf.write(f"# {g.nu} {g.nv} {g.du!r} {g.dv!r} {g.u0!r} {g.v0!r} {f.kind.value}\n")
    U, V = g.mesh()
    s = f.states
    for row in zip(U.ravel(), V.ravel(), s.alpha.ravel(), s.beta.ravel(), s.lam.ravel(), s.mu.ravel(), f.valid.ravel()):
        buf.write(",".join(f"{x:.17g}" for x in row[:6]) + f",{int(row[6])}\n")
    return buf.getvalue()


def auxfield_from_csv(text: str) -> AuxField:
    lines = text.strip().splitlines()
    head = lines[0].lstrip("#").split()
    nu, nv = int(head[0]), int(head[1])
    du, dv, u0, v0 = map(float, head[2:6])
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    g = GridSpec(u0, v0, du, dv, nu, nv)
    cols = [data[:, k].reshape(g.shape) for k in range(2, 6)]
    return AuxField(g, AuxState(*cols), SystemKind(head[6]), data[:, 6].reshape(g.shape) > 0.5)


def system_residual(kind: SystemKind, states: AuxState, theta, grid: GridSpec, spec: QuadricSpec,
                    band: int = 2) -> float:
    """Max finite-difference residual of all eight relations of the system over the grid
    interior (a band of `band` samples is dropped at each edge)."""
    d = lambda f, ax, h: diff1(f, h, ax, order=4)
    T = np.asarray(theta, dtype=float)
    du, dv = rhs(kind, states, T, d(T, 1, grid.du), d(T, 0, grid.dv), spec)
    comps = (states.alpha, states.beta, states.lam, states.mu)
    sl = (slice(band, -band or None), slice(band, -band or None))
    worst = 0.0
    for f, fu, fv in zip(comps, du, dv):
        worst = max(worst, float(np.max(np.abs((d(f, 1, grid.du) - fu)[sl]))),
                    float(np.max(np.abs((d(f, 0, grid.dv) - fv)[sl]))))
    return worst
