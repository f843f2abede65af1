"""Totally-real sine/sinh-Gordon equations, their Backlund transformations,
algebraic superposition, the coincident-parameter limit and cube identities."""
from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numerics import diff1, diff2, interior_mask, march

SINH_EDGE = 1.0 - 1e-12
OVERFLOW = 1e6


class EquationKind(Enum):
    HYPERBOLIC_SINE = "hsg"
    HYPERBOLIC_SINH = "hsgh"
    ELLIPTIC_SINE = "esg"
    ELLIPTIC_SINH = "esgh"

    @property
    def is_sinh(self) -> bool:
        return self in (EquationKind.HYPERBOLIC_SINH, EquationKind.ELLIPTIC_SINH)

    @property
    def is_elliptic(self) -> bool:
        return self in (EquationKind.ELLIPTIC_SINE, EquationKind.ELLIPTIC_SINH)

    @property
    def partner(self) -> "EquationKind":
        """Kind of a Backlund transform of a field of this kind."""
        if self is EquationKind.ELLIPTIC_SINE:
            return EquationKind.ELLIPTIC_SINH
        if self is EquationKind.ELLIPTIC_SINH:
            return EquationKind.ELLIPTIC_SINE
        return self


@dataclass(frozen=True)
class GridSpec:
    u0: float
    v0: float
    du: float
    dv: float
    nu: int
    nv: int

    def __post_init__(self):
        if not (self.du > 0 and self.dv > 0):
            raise ValueError("grid spacings must be positive")
        if self.nu < 3 or self.nv < 3:
            raise ValueError(f"grid needs at least 3 samples per direction, got {self.nu}x{self.nv}")

    @property
    def u(self) -> np.ndarray:
        return self.u0 + self.du * np.arange(self.nu)

    @property
    def v(self) -> np.ndarray:
        return self.v0 + self.dv * np.arange(self.nv)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nv, self.nu)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(U, V) arrays of shape (nv, nu): axis 0 is v, axis 1 is u."""
        return np.meshgrid(self.u, self.v)

    @classmethod
    def square(cls, lo: float, hi: float, h: float) -> "GridSpec":
        n = int(round((hi - lo) / h)) + 1
        return cls(lo, lo, h, h, n, n)


@dataclass
class ScalarField:
    grid: GridSpec
    values: np.ndarray
    kind: EquationKind
    valid: np.ndarray = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)
        if self.valid is None:
            self.valid = np.ones(self.grid.shape, dtype=bool)
        self.valid = np.asarray(self.valid, dtype=bool).reshape(self.grid.shape)
        bad = ~np.isfinite(self.values)
        if bad.any():
            self.values = np.where(bad, 0.0, self.values)
            self.valid = self.valid & ~bad

    def max_abs(self, interior: bool = False) -> float:
        m = self.valid & interior_mask(self.grid.shape) if interior else self.valid
        return float(np.max(np.abs(self.values[m]))) if m.any() else 0.0

    def with_values(self, values, valid=None, kind=None) -> "ScalarField":
        return ScalarField(self.grid, values, kind or self.kind, self.valid if valid is None else valid)


@dataclass(frozen=True)
class SpectralParam:
    sigma: complex

    def __post_init__(self):
        if self.sigma == 0:
            raise ValueError("spectral parameter must be nonzero")
        object.__setattr__(self, "sigma", complex(self.sigma))

    @classmethod
    def unit(cls, phi: float) -> "SpectralParam":
        return cls(complex(np.cos(phi), np.sin(phi)))

    @property
    def real_flag(self) -> bool:
        return self.sigma.imag == 0.0

    @property
    def unit_flag(self) -> bool:
        return abs(abs(self.sigma) - 1.0) <= 1e-12

    @property
    def phase(self) -> float:
        return float(np.angle(self.sigma))

    @property
    def p(self) -> complex:
        return (self.sigma + 1 / self.sigma) / 2

    @property
    def q(self) -> complex:
        return (self.sigma - 1 / self.sigma) / 2

    def exponent(self, kind: EquationKind, u, v):
        """Real exponent multiplying (u, v) in the 1-soliton of the given kind."""
        if kind.is_elliptic:
            self.require(kind)
            return np.sin(self.phase) * u + np.cos(self.phase) * v
        self.require(kind)
        return self.q.real * u + self.p.real * v

    def require(self, kind: EquationKind):
        if kind.is_elliptic and not self.unit_flag:
            raise ValueError(f"elliptic transforms need |sigma| = 1, got {self.sigma}")
        if not kind.is_elliptic and not self.real_flag:
            raise ValueError(f"hyperbolic transforms need real sigma, got {self.sigma}")


def _trig(kind: EquationKind):
    return (np.sin, np.cos, np.tan, np.arctan) if not kind.is_sinh else (np.sinh, np.cosh, np.tanh, np.arctanh)


def pde_residual(f: ScalarField) -> ScalarField:
    g = f.grid
    if g.nu < 3 or g.nv < 3:
        raise ValueError("grid too small for central differences")
    w = f.values
    fvv = diff2(w, g.dv, axis=0)
    fuu = diff2(w, g.du, axis=1)
    sgn = -1.0 if not f.kind.is_elliptic else 1.0
    s, c, _, _ = _trig(f.kind)
    r = fvv + sgn * fuu - c(w) * s(w)
    ok = interior_mask(g.shape) & _stencil_valid(f.valid)
    return ScalarField(g, np.where(ok, r, 0.0), f.kind, ok)


def _stencil_valid(valid: np.ndarray) -> np.ndarray:
    ok = valid.copy()
    ok[1:, :] &= valid[:-1, :]
    ok[:-1, :] &= valid[1:, :]
    ok[:, 1:] &= valid[:, :-1]
    ok[:, :-1] &= valid[:, 1:]
    return ok


def one_soliton(kind: EquationKind, sigma: SpectralParam, c1: float, sign: int, grid: GridSpec) -> ScalarField:
    U, V = grid.mesh()
    x = sigma.exponent(kind, U, V) + c1
    if not kind.is_sinh:
        return ScalarField(grid, sign * 2 * np.arctan(np.exp(x)), kind)
    y = np.exp(np.minimum(x, 0.0))
    ok = (x < 0) & (y < SINH_EDGE)  # samples with exponent >= 0 are outside the real domain
    vals = np.where(ok, sign * 2 * np.arctanh(np.where(ok, y, 0.0)), 0.0)
    return ScalarField(grid, vals, kind, ok)


def soliton_complex(sigma: complex, c1: complex, U, V):
    """Hyperbolic sine-Gordon 1-soliton evaluated in complex arithmetic."""
    sigma = complex(sigma)
    p, q = (sigma + 1 / sigma) / 2, (sigma - 1 / sigma) / 2
    return 2 * np.arctan(np.exp(q * U + p * V + c1))


def backlund_rhs(kind0: EquationKind, sigma: SpectralParam, f0, f0u, f0v, f1):
    """(f1_u, f1_v) prescribed by the Backlund relations with seed f0 of kind kind0."""
    if kind0.is_elliptic:
        phi = sigma.phase
        cp, sp = np.cos(phi), np.sin(phi)
        if kind0 is EquationKind.ELLIPTIC_SINE:
            om, th = f0, f1
            a = cp * np.sinh(th) * np.cos(om) + sp * np.cosh(th) * np.sin(om)
            b = cp * np.cosh(th) * np.sin(om) - sp * np.sinh(th) * np.cos(om)
            return -f0v - b, f0u + a
        th, om = f0, f1
        a = cp * np.sinh(th) * np.cos(om) + sp * np.cosh(th) * np.sin(om)
        b = cp * np.cosh(th) * np.sin(om) - sp * np.sinh(th) * np.cos(om)
        return f0v + a, -f0u + b
    s = sigma.sigma.real
    sn = _trig(kind0)[0]
    plus, minus = sn(f1 + f0), sn(f1 - f0)
    return f0v + (s * plus - minus / s) / 2, f0u + (s * plus + minus / s) / 2


def _check_pair(f0: ScalarField, f1: ScalarField):
    if f0.grid != f1.grid:
        raise ValueError("fields live on different grids")
    if f1.kind is not f0.kind.partner:
        raise ValueError(f"{f1.kind.name} is not a Backlund partner of {f0.kind.name}")


def backlund_residual(f0: ScalarField, f1: ScalarField, sigma: SpectralParam):
    """Residuals (r1, r2) = (f1_v - rhs_v, f1_u - rhs_u)."""
    _check_pair(f0, f1)
    sigma.require(f0.kind)
    g = f0.grid
    d = lambda w, ax, h: np.gradient(w, h, axis=ax)
    f0u, f0v = d(f0.values, 1, g.du), d(f0.values, 0, g.dv)
    f1u, f1v = d(f1.values, 1, g.du), d(f1.values, 0, g.dv)
    ru, rv = backlund_rhs(f0.kind, sigma, f0.values, f0u, f0v, f1.values)
    ok = interior_mask(g.shape) & _stencil_valid(f0.valid & f1.valid)
    r1 = np.where(ok, f1v - rv, 0.0)
    r2 = np.where(ok, f1u - ru, 0.0)
    return ScalarField(g, r1, f1.kind, ok), ScalarField(g, r2, f1.kind, ok)


def backlund_integrate(f0: ScalarField, sigma: SpectralParam, seed_value: float, eps1: int = 1,
                       order: str = "uv", substeps: int = 10, pde_tol: float | None = None) -> ScalarField:
    """Integrate the Backlund relations from f1(u0, v0) = seed_value.

    The relations are imposed on eps1*f1, so eps1 = -1 selects the mirrored leaf.
    order "uv" marches the first row in u and then every column in v; "vu" swaps the roles.
    """
    sigma.require(f0.kind)
    g = f0.grid
    if not f0.valid.all():
        raise ValueError("seed field has invalid samples")
    h = max(g.du, g.dv)
    tol = pde_tol if pde_tol is not None else max(1e3 * h**2, 1e-12)
    res = pde_residual(f0).max_abs(interior=True)
    if res > tol:
        raise ValueError(f"seed field fails its PDE check: residual {res:.3g} > {tol:.3g}")
    F = f0.values
    st = np.stack([F, diff1(F, g.du, 1, order=4), diff1(F, g.dv, 0, order=4)])  # (3, nv, nu)

    def du_rhs(w, a):
        return backlund_rhs(f0.kind, sigma, a[0], a[1], a[2], w)[0]

    def dv_rhs(w, a):
        return backlund_rhs(f0.kind, sigma, a[0], a[1], a[2], w)[1]

    w0 = eps1 * seed_value
    if order == "uv":
        row = march(du_rhs, w0, np.moveaxis(st[:, 0, :], 1, 0), g.du, substeps, OVERFLOW)  # (nu,)
        cols = march(dv_rhs, row, np.moveaxis(st, 1, 0), g.dv, substeps, OVERFLOW)  # (nv, nu)
        vals = cols
    elif order == "vu":
        col = march(dv_rhs, w0, np.moveaxis(st[:, :, 0], 1, 0), g.dv, substeps, OVERFLOW)  # (nv,)
        rows = march(du_rhs, col, np.moveaxis(st, 2, 0), g.du, substeps, OVERFLOW)  # (nu, nv)
        vals = rows.T
    else:
        raise ValueError("order must be 'uv' or 'vu'")
    return ScalarField(g, eps1 * vals, f0.kind.partner)


def _continue_branch(delta: np.ndarray, ok: np.ndarray) -> np.ndarray:
    """Nearest-branch continuation (period 2 pi) from the origin: first row, then columns."""
    d = delta.copy()
    d[0, :] = np.unwrap(d[0, :], period=2 * np.pi)
    return np.unwrap(d, period=2 * np.pi, axis=0)


def bpt_factor(kind0: EquationKind, s1: SpectralParam, s2: SpectralParam) -> float:
    """Real prefactor of the superposition formula for seed kind kind0."""
    if kind0.is_elliptic:
        s1.require(kind0), s2.require(kind0)
        cot = 1 / np.tan((s2.phase - s1.phase) / 2)
        return cot if kind0 is EquationKind.ELLIPTIC_SINE else -cot
    s1.require(kind0), s2.require(kind0)
    a, b = s1.sigma.real, s2.sigma.real
    if a == b:
        raise ValueError("coincident spectral parameters: use bpt_coincident_limit")
    return (b + a) / (b - a)


def bpt_superpose(f0: ScalarField, f1: ScalarField, f2: ScalarField, s1: SpectralParam, s2: SpectralParam) -> ScalarField:
    _check_pair(f0, f1)
    _check_pair(f0, f2)
    k = bpt_factor(f0.kind, s1, s2)
    half = (f2.values - f1.values) / 2
    ok = f0.valid & f1.valid & f2.valid
    if f1.kind.is_sinh:
        arg = k * np.tanh(half)
    else:
        ok &= np.abs(np.cos(half)) > 1e-12
        arg = k * np.tan(np.where(ok, half, 0.0))
    if f0.kind.is_sinh:
        ok &= np.abs(arg) < SINH_EDGE
        delta = 2 * np.arctanh(np.where(ok, arg, 0.0))
    else:
        delta = _continue_branch(2 * np.arctan(arg), ok)
    return ScalarField(f0.grid, np.where(ok, f0.values + delta, 0.0), f0.kind, ok)


def bpt_superpose_complex(f0, f1, f2, s1: complex, s2: complex):
    """Hyperbolic sine superposition in complex arithmetic (used for breathers)."""
    k = (s2 + s1) / (s2 - s1)
    return f0 + 2 * np.arctan(k * np.tan((f2 - f1) / 2))


def breather(sigma: complex, c1: complex, grid: GridSpec) -> np.ndarray:
    """Complex-conjugate superposition over the vacuum; returns a complex array."""
    U, V = grid.mesh()
    f1 = soliton_complex(sigma, c1, U, V)
    f2 = soliton_complex(np.conj(sigma), np.conj(c1), U, V)
    return bpt_superpose_complex(0.0, f1, f2, complex(sigma), complex(np.conj(sigma)))


def bpt_coincident_limit(f1: ScalarField, sigma1: SpectralParam, c: float) -> ScalarField:
    """Double transform B_s o B_s of the vacuum obtained as the limit of superposition."""
    if f1.kind is not EquationKind.HYPERBOLIC_SINE:
        raise ValueError("the coincident limit is available for the hyperbolic sine-Gordon equation")
    sigma1.require(f1.kind)
    U, V = f1.grid.mesh()
    lin = sigma1.p.real * U + sigma1.q.real * V + c
    delta = _continue_branch(2 * np.arctan(lin * np.sin(f1.values)), f1.valid)
    return ScalarField(f1.grid, delta, f1.kind, f1.valid)


def m3_residual(f1: ScalarField, f2: ScalarField, f4: ScalarField, f7: ScalarField,
                s1: SpectralParam, s2: SpectralParam, s3: SpectralParam, kind: EquationKind) -> float:
    """Cyclic three-term cube identity with f1, f2, f4 the single transforms of the vacuum
    by s1, s2, s3 and f7 the triple transform."""
    if kind.is_elliptic:
        raise ValueError("the cube identity is implemented for hyperbolic kinds")
    for f in (f2, f4, f7):
        if f.grid != f1.grid:
            raise ValueError("fields live on different grids")
    e = (lambda x: np.exp(1j * x)) if not kind.is_sinh else np.exp
    a, b, c = s1.sigma.real, s2.sigma.real, s3.sigma.real
    w1, w2, w4, w7 = f1.values, f2.values, f4.values, f7.values
    r = ((e(w2 + w4) - e(w1 + w7)) * (b / c - c / b)
         + (e(w1 + w4) - e(w2 + w7)) * (c / a - a / c)
         + (e(w1 + w2) - e(w4 + w7)) * (a / b - b / a))
    ok = f1.valid & f2.valid & f4.valid & f7.valid
    return float(np.max(np.abs(r[ok]))) if ok.any() else 0.0


def bpt_cube(kind: EquationKind, sigmas, cs, grid: GridSpec) -> dict[int, ScalarField]:
    """Vertices 0..7 of the cube of transforms of the vacuum: 1, 2, 4 are single transforms
    by sigmas[0..2]; 3, 5, 6 the pairwise superpositions; 7 the triple one."""
    s = [SpectralParam(x) for x in sigmas]
    f = {0: ScalarField(grid, np.zeros(grid.shape), kind)}
    f[1] = one_soliton(kind, s[0], cs[0], 1, grid)
    f[2] = one_soliton(kind, s[1], cs[1], 1, grid)
    f[4] = one_soliton(kind, s[2], cs[2], 1, grid)
    f[3] = bpt_superpose(f[0], f[1], f[2], s[0], s[1])
    f[5] = bpt_superpose(f[0], f[1], f[4], s[0], s[2])
    f[6] = bpt_superpose(f[0], f[2], f[4], s[1], s[2])
    f[7] = bpt_superpose(f[1], f[3], f[5], s[1], s[2])
    return f


def field_to_csv(f: ScalarField) -> str:
    g = f.grid
    buf = io.StringIO()
    buf.write(f"# {g.nu} {g.nv} {g.du!r} {g.dv!r} {g.u0!r} {g.v0!r} {f.kind.value}\n")
    U, V = g.mesh()
    for u, v, w, ok in zip(U.ravel(), V.ravel(), f.values.ravel(), f.valid.ravel()):
        buf.write(f"{u:.17g},{v:.17g},{w:.17g},{int(ok)}\n")
    return buf.getvalue()


def field_from_csv(text: str) -> ScalarField:
    lines = text.strip().splitlines()
    head = lines[0].lstrip("#").split()
    nu, nv = int(head[0]), int(head[1])
    du, dv, u0, v0 = map(float, head[2:6])
    kind = EquationKind(head[6])
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    if data.shape[0] != nu * nv:
        raise ValueError(f"expected {nu * nv} samples, found {data.shape[0]}")
    grid = GridSpec(u0, v0, du, dv, nu, nv)
    return ScalarField(grid, data[:, 2], kind, data[:, 3] > 0.5)
