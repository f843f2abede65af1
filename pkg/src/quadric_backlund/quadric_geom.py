"""Confocal quadric parametrizations, fundamental forms, Christoffel symbols,
the Ivory affinity and tangency-configuration identities.

Points carry complex coordinates internally: a coordinate with a factor i is
reported as a real magnitude plus a mask bit, and every metric is the bilinear
(signature-aware) square of the differentials.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq, newton

from .numerics import central


class QuadricKind(Enum):
    HYPERBOLIC_PARABOLOID = "hyperbolic_paraboloid"
    ELLIPTIC_PARABOLOID = "elliptic_paraboloid"
    HYPERBOLOID_ONE_SHEET = "hyperboloid"


@dataclass(frozen=True)
class QuadricSpec:
    kind: QuadricKind
    a1: float
    a2: float
    a3: float | None = None
    eps: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if self.kind is QuadricKind.HYPERBOLIC_PARABOLOID:
            if not (self.a1 > 0 > self.a2):
                raise ValueError("hyperbolic paraboloid needs a1 > 0 > a2")
            if abs(1 / self.a1 - 1 / self.a2 - 1) > 1e-12:
                raise ValueError("hyperbolic paraboloid needs 1/a1 - 1/a2 = 1")
        elif self.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
            if self.a3 is None or not (self.a1 > self.a2 and self.a3 < 0):
                raise ValueError("hyperboloid needs a1 > a2 and a3 < 0")
        elif not self.a1 > self.a2:
            raise ValueError("elliptic paraboloid needs a1 > a2")
        # an elliptic paraboloid spec carries the data (a1, a2) of its hyperbolic confocal family

    @classmethod
    def hyperbolic_paraboloid(cls, a1: float = 2.0, eps: int = 1) -> "QuadricSpec":
        return cls(QuadricKind.HYPERBOLIC_PARABOLOID, a1, a1 / (1 - a1) if a1 != 1 else -np.inf, eps=eps)

    def admissible(self, z: float) -> bool:
        if self.kind is QuadricKind.HYPERBOLIC_PARABOLOID:
            return z < self.a1
        return z < self.a2


@dataclass
class SurfacePoint:
    coords: np.ndarray
    imag_mask: tuple[bool, bool, bool]

    @property
    def complex(self) -> np.ndarray:
        f = np.array([1j if m else 1.0 for m in self.imag_mask])
        return f.reshape((3,) + (1,) * (np.ndim(self.coords) - 1)) * self.coords

    @classmethod
    def from_complex(cls, x) -> "SurfacePoint":
        x = np.asarray(x, dtype=complex)
        mask = []
        for k in range(3):
            re, im = np.abs(x[k].real), np.abs(x[k].imag)
            mask.append(bool(np.all(re <= 1e-13 * (1 + im)) and np.any(im > 0)))
        coords = np.stack([x[k].imag if mask[k] else x[k].real for k in range(3)])
        return cls(coords, tuple(mask))


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float
    second_imag: bool = False  # L, M, N carry a factor i (eps = -1 paraboloid region)


def bdot(a, b):
    """Bilinear dot product over the leading axis (signature-aware for masked coordinates)."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=0)


def cross(a, b):
    return np.stack([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _csqrt(x):
    return np.sqrt(np.asarray(x, dtype=complex))


def xz_complex(spec: QuadricSpec, z, alpha, beta):
    """Point of the confocal quadric x_z in complex coordinates."""
    a, b = np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)
    e = spec.eps
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        ca = np.cos(a)
        if np.any(np.abs(ca) < 1e-12):
            raise ValueError("hyperboloid parametrization is singular at alpha = +-pi/2")
        return np.stack([_csqrt(spec.a1 - z) * np.cos(b) / ca, _csqrt(spec.a2 - z) * np.sin(b) / ca,
                         _csqrt(z - spec.a3) * np.tan(a)])
    # the elliptic paraboloids are the members z < a2 of the same confocal family
    return np.stack([_csqrt(spec.a1 - z) * a, _csqrt(z - spec.a2) * _csqrt(e) * b,
                     (a**2 - e * b**2 + z) / 2 + 0j])


def xz_derivatives(spec: QuadricSpec, z, alpha, beta):
    """Closed-form (x_a, x_b, x_aa, x_ab, x_bb) of x_z, complex coordinates."""
    a, b = np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)
    e = spec.eps
    o = np.zeros_like(a + b) + 0j
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        k1, k2, k3 = _csqrt(spec.a1 - z), _csqrt(spec.a2 - z), _csqrt(z - spec.a3)
        sec, t = 1 / np.cos(a), np.tan(a)
        cb, sb = np.cos(b), np.sin(b)
        xa = np.stack([k1 * cb * sec * t, k2 * sb * sec * t, k3 * sec**2])
        xb = np.stack([-k1 * sb * sec, k2 * cb * sec, o])
        xaa = np.stack([k1 * cb * sec * (sec**2 + t**2), k2 * sb * sec * (sec**2 + t**2), 2 * k3 * sec**2 * t])
        xab = np.stack([-k1 * sb * sec * t, k2 * cb * sec * t, o])
        xbb = np.stack([-k1 * cb * sec, -k2 * sb * sec, o])
        return xa, xb, xaa, xab, xbb
    k1 = _csqrt(spec.a1 - z)
    k2, s3 = _csqrt(z - spec.a2) * _csqrt(e), -e
    one = o + 1
    xa = np.stack([k1 * one, o, a + o])
    xb = np.stack([o, k2 * one, s3 * b + o])
    return xa, xb, np.stack([o, o, one]), np.stack([o, o, o]), np.stack([o, o, s3 * one])


def xz_point(spec: QuadricSpec, z: float, alpha, beta) -> SurfacePoint:
    if not spec.admissible(z):
        raise ValueError(f"z = {z} is not admissible for {spec.kind.value}")
    return SurfacePoint.from_complex(xz_complex(spec, z, alpha, beta))


def h_function(spec: QuadricSpec, alpha, beta):
    a, b = np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)
    if spec.kind is QuadricKind.HYPERBOLIC_PARABOLOID:
        e = spec.eps
        return e * a**2 / spec.a1 - b**2 / spec.a2 + e
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        return np.cos(b)**2 / spec.a1 + np.sin(b)**2 / spec.a2 - np.sin(a)**2 / spec.a3
    raise ValueError("H is defined for the hyperbolic paraboloid and the hyperboloid")


def h_gradient(spec: QuadricSpec, alpha, beta):
    """(H_alpha, H_beta)."""
    a, b = np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)
    if spec.kind is QuadricKind.HYPERBOLIC_PARABOLOID:
        return 2 * spec.eps * a / spec.a1, -2 * b / spec.a2
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        return -np.sin(2 * a) / spec.a3, np.sin(2 * b) * (1 / spec.a2 - 1 / spec.a1)
    raise ValueError("H is defined for the hyperbolic paraboloid and the hyperboloid")


def normal_sign(spec: QuadricSpec) -> float:
    """Orientation making the second forms read (-eps da^2 + db^2) sqrt(eps)/sqrt(H) on the
    paraboloid and (da^2 - db^2)/(cos a sqrt(H)) on the hyperboloid."""
    return -1.0 if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET else -float(spec.eps)


def unit_normal(spec: QuadricSpec, z, alpha, beta):
    """Normal of x_z normalized with the bilinear square; at z = 0 on the paraboloid this is
    -eps x_a x x_b / sqrt(-a1 a2 H)."""
    xa, xb = xz_derivatives(spec, z, alpha, beta)[:2]
    n = cross(xa, xb)
    return normal_sign(spec) * n / np.sqrt(bdot(n, n))


def _forms_from(xa, xb, xaa, xab, xbb, n):
    E, F, G = bdot(xa, xa), bdot(xa, xb), bdot(xb, xb)
    L, M, N = bdot(n, xaa), bdot(n, xab), bdot(n, xbb)
    return E, F, G, L, M, N


def _pack(E, F, G, L, M, N) -> FundamentalForms:
    imag = bool(np.all(np.abs(np.real(L)) <= 1e-14 * (1 + np.abs(L)))) and bool(np.any(np.abs(np.imag(L)) > 0))
    part = np.imag if imag else np.real
    return FundamentalForms(*(np.real(x) for x in (E, F, G)), *(part(x) for x in (L, M, N)), second_imag=imag)


def fundamental_forms(spec: QuadricSpec, z: float, alpha, beta) -> FundamentalForms:
    d = xz_derivatives(spec, z, alpha, beta)
    n = unit_normal(spec, z, alpha, beta)
    E, F, G, L, M, N = _forms_from(*d, n)
    if spec.kind is QuadricKind.HYPERBOLIC_PARABOLOID and np.any(np.real(bdot(cross(d[0], d[1]), cross(d[0], d[1]))) == 0):
        raise ValueError("degenerate normal (H vanishes)")
    return _pack(E, F, G, L, M, N)


def fundamental_forms_fd(spec: QuadricSpec, z: float, alpha: float, beta: float, h: float = 1e-4) -> FundamentalForms:
    """Same quantities from central differences of the point map."""
    x = lambda a, b: xz_complex(spec, z, a, b)
    xa = (x(alpha + h, beta) - x(alpha - h, beta)) / (2 * h)
    xb = (x(alpha, beta + h) - x(alpha, beta - h)) / (2 * h)
    x0 = x(alpha, beta)
    xaa = (x(alpha + h, beta) - 2 * x0 + x(alpha - h, beta)) / h**2
    xbb = (x(alpha, beta + h) - 2 * x0 + x(alpha, beta - h)) / h**2
    xab = (x(alpha + h, beta + h) - x(alpha + h, beta - h) - x(alpha - h, beta + h) + x(alpha - h, beta - h)) / (4 * h * h)
    n = cross(xa, xb)
    n = normal_sign(spec) * n / np.sqrt(bdot(n, n))
    return _pack(*_forms_from(xa, xb, xaa, xab, xbb, n))


def christoffels(spec: QuadricSpec, alpha, beta):
    """(G1_11, G1_12, G1_22, G2_11, G2_12, G2_22) at z = 0."""
    H = h_function(spec, alpha, beta)
    if np.any(H <= 0):
        raise ValueError("H must be positive")
    ha, hb = h_gradient(spec, alpha, beta)
    la, lb = ha / (2 * H), hb / (2 * H)
    zero = np.zeros_like(la)
    if spec.kind is QuadricKind.HYPERBOLIC_PARABOLOID:
        e = spec.eps
        return la, zero, -e * la, -e * lb, zero, lb
    t = np.tan(np.asarray(alpha, dtype=float))
    return 2 * t + la, zero, -la, -lb, t + zero, lb


def christoffels_fd(spec: QuadricSpec, alpha: float, beta: float, h: float = 1e-4):
    """Christoffel symbols from tangential projections of finite-difference second derivatives."""
    x = lambda a, b: xz_complex(spec, 0.0, a, b)
    xa = (x(alpha + h, beta) - x(alpha - h, beta)) / (2 * h)
    xb = (x(alpha, beta + h) - x(alpha, beta - h)) / (2 * h)
    x0 = x(alpha, beta)
    xaa = (x(alpha + h, beta) - 2 * x0 + x(alpha - h, beta)) / h**2
    xbb = (x(alpha, beta + h) - 2 * x0 + x(alpha, beta - h)) / h**2
    xab = (x(alpha + h, beta + h) - x(alpha + h, beta - h) - x(alpha - h, beta + h) + x(alpha - h, beta - h)) / (4 * h * h)
    g = np.array([[bdot(xa, xa), bdot(xa, xb)], [bdot(xb, xa), bdot(xb, xb)]])
    gi = np.linalg.inv(g)
    out = {}
    for name, xx in (("11", xaa), ("12", xab), ("22", xbb)):
        c = gi @ np.array([bdot(xa, xx), bdot(xb, xx)])
        out["1" + name], out["2" + name] = c[0], c[1]
    return tuple(np.real(out[k]) for k in ("111", "112", "122", "211", "212", "222"))


def _second_coeffs(spec, a, b):
    f = fundamental_forms(spec, 0.0, a, b)
    return f.L, f.M, f.N


def codazzi_residual(spec: QuadricSpec, alpha: float, beta: float, h: float = 1e-3) -> float:
    """Codazzi-Mainardi equations with closed-form second form and symbols."""
    L, M, N = _second_coeffs(spec, alpha, beta)
    Lb = central(lambda t: _second_coeffs(spec, alpha, t)[0], beta, h)
    Ma = central(lambda t: _second_coeffs(spec, t, beta)[1], alpha, h)
    Mb = central(lambda t: _second_coeffs(spec, alpha, t)[1], beta, h)
    Na = central(lambda t: _second_coeffs(spec, t, beta)[2], alpha, h)
    g111, g112, g122, g211, g212, g222 = christoffels(spec, alpha, beta)
    r1 = Lb - Ma - (L * g112 + M * (g212 - g111) - N * g211)
    r2 = Mb - Na - (L * g122 + M * (g222 - g112) - N * g212)
    return float(max(abs(r1), abs(r2)))


def peterson_condition_residual(spec: QuadricSpec, alpha: float, beta: float, h: float = 1e-3) -> float:
    def ratio(a, b):
        L, _, N = _second_coeffs(spec, a, b)
        g = christoffels(spec, a, b)
        return g[3] * N / L, g[2] * L / N

    g = christoffels(spec, alpha, beta)
    rhs = -2 * g[3] * g[2]
    d1 = central(lambda t: ratio(t, beta)[0], alpha, h)
    d2 = central(lambda t: ratio(alpha, t)[1], beta, h)
    return float(max(abs(d1 - rhs), abs(d2 - rhs)))


def ivory_map(spec: QuadricSpec, z: float, alpha, beta) -> SurfacePoint:
    """Diagonal affinity applied to the point of x_0; the mask follows the radicand signs."""
    x0 = xz_complex(spec, 0.0, alpha, beta)
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        d = [_csqrt(1 - z / spec.a1), _csqrt(1 - z / spec.a2), _csqrt(1 - z / spec.a3)]
        shift = 0.0
    else:
        d = [_csqrt(1 - z / spec.a1), _csqrt(1 - z / spec.a2), 1.0]
        shift = z / 2
    sh = (3,) + (1,) * (np.ndim(x0) - 1)
    x = np.reshape(np.array(d), sh) * x0
    x[2] = x[2] + shift
    return SurfacePoint.from_complex(x)


def ruling_lengths(spec: QuadricSpec, z: float, alpha, beta):
    """Bilinear squares |x_za + x_zb|^2 and |x_za - x_zb|^2."""
    xa, xb = xz_derivatives(spec, z, alpha, beta)[:2]
    return np.real(bdot(xa + xb, xa + xb)), np.real(bdot(xa - xb, xa - xb))


def distinguished_field(spec: QuadricSpec, alpha, beta):
    """eps (log sqrt H)_alpha x_alpha - (log sqrt H)_beta x_beta on x_0 (paraboloid).

    Its square is 1 - eps/H; its products with x_alpha, x_beta are eps*alpha and -beta."""
    H = h_function(spec, alpha, beta)
    ha, hb = h_gradient(spec, alpha, beta)
    xa, xb = xz_derivatives(spec, 0.0, alpha, beta)[:2]
    return spec.eps * ha / (2 * H) * xa - hb / (2 * H) * xb


def tangency_residual(spec: QuadricSpec, z: float, V0, V1) -> float:
    a0, b0 = V0
    a1, b1 = V1
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        r1, r2, r3 = (np.sqrt(1 - z / a) for a in (spec.a1, spec.a2, spec.a3))
        return (r1 * np.cos(b0) * np.cos(b1) + r2 * np.sin(b0) * np.sin(b1)
                - np.cos(a0) * np.cos(a1) - r3 * np.sin(a0) * np.sin(a1))
    e = spec.eps
    r1, r2 = np.sqrt(1 - z / spec.a1), np.sqrt(1 - z / spec.a2)
    d1, d2 = r1 * a1 - a0, r2 * b1 - b0
    return d1**2 - e * d2**2 + e * z * h_function(spec, a1, b1)


def hyperboloid_normal0(spec: QuadricSpec, alpha, beta):
    """Unit normal of x_0 for the hyperboloid."""
    H = h_function(spec, alpha, beta)
    n = np.stack([np.cos(beta) / np.sqrt(spec.a1), np.sin(beta) / np.sqrt(spec.a2),
                  -np.sin(alpha) / np.sqrt(-spec.a3)])
    return n / np.sqrt(H)


def actc_residual(spec: QuadricSpec, z: float, pair, tc_tol: float = 1e-8):
    """Residuals of the two algebraic consequences of the tangency configuration."""
    if spec.kind is not QuadricKind.HYPERBOLOID_ONE_SHEET:
        raise ValueError("tangency consequences are stated for the hyperboloid")
    (a0, b0), (a1, b1) = pair
    tc = tangency_residual(spec, z, (a0, b0), (a1, b1))
    if abs(tc) > tc_tol:
        raise ValueError(f"pair violates the tangency configuration ({tc:.3g})")
    n = hyperboloid_normal0(spec, a0, b0)
    xa, xb = (np.real(w) for w in xz_derivatives(spec, z, a1, b1)[:2])
    first = -bdot(xa, n)**2 + bdot(xb, n)**2 + z / np.cos(a1)**2
    seg = np.real(xz_complex(spec, z, a1, b1) - xz_complex(spec, 0.0, a0, b0))
    refl = np.eye(3) - 2 * np.outer(n, n)
    second = (xa - xb) @ refl @ cross(xa + xb, seg)
    return float(first), float(second)


def solve_tc_beta1(spec: QuadricSpec, z: float, a0: float, b0: float, a1: float,
                   lo: float = -np.pi, hi: float = np.pi, n: int = 721):
    """All roots beta_1 of the hyperboloid tangency configuration in [lo, hi]
    (bracketing by sampling, bisection, Newton polish)."""
    f = lambda b: tangency_residual(spec, z, (a0, b0), (a1, b))
    grid = np.linspace(lo, hi, n)
    vals = f(grid)
    roots = []
    for i in range(n - 1):
        if vals[i] == 0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            r = brentq(f, grid[i], grid[i + 1], xtol=1e-14)
            roots.append(float(newton(f, r, tol=1e-15, maxiter=20)))
    return roots


def confocal_distance(spec: QuadricSpec, z: float, X) -> np.ndarray:
    """Implicit equation of the confocal paraboloid divided by its gradient norm.
    X is complex (masked coordinates carry i)."""
    X = np.asarray(X, dtype=complex)
    if spec.kind is QuadricKind.HYPERBOLOID_ONE_SHEET:
        a = [spec.a1 - z, spec.a2 - z, spec.a3 - z]
        F = sum(X[k]**2 / a[k] for k in range(3)) - 1
        grad = np.stack([2 * X[k] / a[k] for k in range(3)])
    else:
        F = X[0]**2 / (spec.a1 - z) + X[1]**2 / (spec.a2 - z) - 2 * X[2] + z
        grad = np.stack([2 * X[0] / (spec.a1 - z), 2 * X[1] / (spec.a2 - z), -2 + 0 * X[2]])
    return np.abs(F) / np.sqrt(np.abs(bdot(grad, np.conj(grad))))


def brioschi_curvature(E, F, G, du: float, dv: float):
    """Gauss curvature from the first form alone (arrays on a (v, u) grid)."""
    d = lambda f, ax, h: np.gradient(f, h, axis=ax)
    Eu, Ev = d(E, 1, du), d(E, 0, dv)
    Fu, Fv = d(F, 1, du), d(F, 0, dv)
    Gu, Gv = d(G, 1, du), d(G, 0, dv)
    Evv = d(Ev, 0, dv)
    Guu = d(Gu, 1, du)
    Fuv = d(Fu, 0, dv)
    m1 = np.array([[-Evv / 2 + Fuv - Guu / 2, Eu / 2, Fu - Ev / 2],
                   [Fv - Gu / 2, E, F],
                   [Gv / 2, F, G]])
    m2 = np.array([[0 * E, Ev / 2, Gu / 2], [Ev / 2, E, F], [Gu / 2, F, G]])
    det = lambda m: np.linalg.det(np.moveaxis(m, (0, 1), (-2, -1)))
    return (det(m1) - det(m2)) / (E * G - F**2)**2
