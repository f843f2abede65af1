"""Closed-form Peterson deformations of the hyperbolic paraboloid, the exponential seed,
and vacuum profiles used to seed the transform pipelines."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .linear_systems import AuxState
from .numerics import rk4
from .quadric_geom import QuadricKind, QuadricSpec


@dataclass(frozen=True)
class PetersonParams:
    spec: QuadricSpec
    s: float
    eps: int = 1

    def __post_init__(self):
        if self.spec.kind is not QuadricKind.HYPERBOLIC_PARABOLOID:
            raise ValueError("Peterson seeds deform the hyperbolic paraboloid")
        if not self.s > 0:
            raise ValueError("bending parameter s must be positive")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")


@dataclass(frozen=True)
class ExpSeedParams:
    spec: QuadricSpec
    c: float


def _scaled(params: PetersonParams, u, v):
    a1, a2 = params.spec.a1, params.spec.a2
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if params.eps == -1 and np.any(v <= 0):
        raise ValueError("the eps = -1 Peterson seed needs v > 0")
    return u / np.sqrt(a1), v / np.sqrt(-a2)


def vacuum_state(params: PetersonParams, u, v) -> AuxState:
    a1, a2, s = params.spec.a1, params.spec.a2, params.s
    up, vp = _scaled(params, u, v)
    alpha = np.sqrt(a1) * np.sinh(s) * np.sin(up)
    lam = np.sinh(s) * np.cos(up)
    if params.eps == 1:
        beta = np.sqrt(-a2) * np.cosh(s) * np.sinh(vp)
        mu = np.cosh(s) * np.cosh(vp)
    else:
        beta = np.sqrt(-a2) * np.cosh(s) * np.cosh(vp)
        mu = np.cosh(s) * np.sinh(vp)
    return AuxState(alpha, beta, lam, mu)


def peterson_point(params: PetersonParams, u, v) -> np.ndarray:
    """Ambient point (3, ...) of the deformed surface; real for both regions."""
    a1, a2, s = params.spec.a1, params.spec.a2, params.s
    up, vp = _scaled(params, u, v)
    x = a1 * (2 * up + np.sin(2 * up)) * np.sinh(s) / 4
    if params.eps == 1:
        y = -a2 * (2 * vp + np.sinh(2 * vp)) * np.cosh(s) / 4
        zz = (a1 * np.sin(up)**2 + a2 * np.sinh(vp)**2) * np.sinh(2 * s) / 4
    else:
        y = a2 * (2 * vp - np.sinh(2 * vp)) * np.cosh(s) / 4
        zz = (a1 * np.sin(up)**2 - a2 * np.sinh(vp)**2) * np.sinh(2 * s) / 4
    return np.stack([x, y, zz])


def peterson_point_integral(params: PetersonParams, alpha0: float, beta0: float) -> np.ndarray:
    """The same surface written through quadratures in (alpha0, beta0)."""
    a1, a2, s = params.spec.a1, params.spec.a2, params.s
    sh, ch, th = np.sinh(s), np.cosh(s), np.tanh(s)
    x = quad(lambda t: np.sqrt(a1 - t**2 / sh**2), 0.0, alpha0, epsabs=1e-14, epsrel=1e-13)[0]
    if params.eps == 1:
        y = quad(lambda t: np.sqrt(-a2 + t**2 / ch**2), 0.0, beta0, epsabs=1e-14, epsrel=1e-13)[0]
        zz = (alpha0**2 - beta0**2 * th**2) / (2 * th)
    else:
        lo = np.sqrt(-a2) * ch
        y = quad(lambda t: np.sqrt(max(a2 + t**2 / ch**2, 0.0)), lo, beta0, epsabs=1e-14, epsrel=1e-13)[0]
        zz = (alpha0**2 + beta0**2 * th**2) / (2 * th)
    return np.array([x, y, zz])


def peterson_point_ab(params: PetersonParams, alpha0, beta0) -> np.ndarray:
    """Closed-form surface point addressed by (alpha0, beta0) instead of (u, v)."""
    a1, a2, s = params.spec.a1, params.spec.a2, params.s
    up = np.arcsin(np.asarray(alpha0) / (np.sqrt(a1) * np.sinh(s)))
    w = np.asarray(beta0) / (np.sqrt(-a2) * np.cosh(s))
    vp = np.arcsinh(w) if params.eps == 1 else np.arccosh(w)
    return peterson_point(params, np.sqrt(a1) * up, np.sqrt(-a2) * vp)


@dataclass
class ExpProfiles:
    u: np.ndarray
    alpha: np.ndarray
    alpha_p: np.ndarray
    v: np.ndarray
    beta: np.ndarray
    beta_p: np.ndarray


def exp_seed_profile(params: ExpSeedParams, u_grid, v_grid, beta0: float = 0.0, alpha0: float | None = None,
                     sign_a: int = 1, sign_b: int = 1) -> ExpProfiles:
    """Profiles with beta'^2 - sinh^2 beta = alpha'^2 + exp(-2 alpha) + 1/a1 = c.

    The square-root equations are integrated in their differentiated form
    (beta'' = sinh beta cosh beta, alpha'' = exp(-2 alpha)), which passes turning points smoothly.
    """
    c, a1 = params.c, params.spec.a1
    rb = np.sinh(beta0)**2 + c
    if rb < 0:
        raise ValueError("c too small: beta'^2 would be negative at the start")
    if alpha0 is None:
        if c - 1 / a1 <= 0:
            raise ValueError("c must exceed 1/a1 for a real alpha profile")
        alpha0 = -0.5 * np.log(c - 1 / a1)
    ra = c - 1 / a1 - np.exp(-2 * alpha0)
    if ra < -1e-14:
        raise ValueError("c too small: alpha'^2 would be negative at the start")
    u = np.asarray(u_grid, dtype=float)
    v = np.asarray(v_grid, dtype=float)
    ya = _two_sided(lambda t, y: np.array([y[1], np.exp(-2 * y[0])]), [alpha0, sign_a * np.sqrt(max(ra, 0.0))], u)
    yb = _two_sided(lambda t, y: np.array([y[1], np.sinh(y[0]) * np.cosh(y[0])]), [beta0, sign_b * np.sqrt(rb)], v)
    if np.any(np.sinh(yb[:, 0])**2 + c < -1e-14):
        raise ValueError("c too small for the requested v range")
    return ExpProfiles(u, ya[:, 0], ya[:, 1], v, yb[:, 0], yb[:, 1])


def _two_sided(f, y0, t):
    """RK4 from t = 0 outwards in both directions over sample points t (must contain 0)."""
    i0 = int(np.argmin(np.abs(t)))
    if abs(t[i0]) > 1e-14:
        raise ValueError("sample points must contain 0")
    fwd = rk4(f, y0, t[i0:])
    back = rk4(f, y0, t[:i0 + 1][::-1])[::-1]
    return np.concatenate([back[:-1], fwd])


def exp_seed_point(params: ExpSeedParams, alpha, beta) -> np.ndarray:
    a1, a2 = params.spec.a1, params.spec.a2
    e = np.exp(alpha)
    return np.stack([np.sqrt(a1) * e * np.cosh(beta), np.sqrt(-a2) * e * np.sinh(beta), e**2 / 2])


def elliptic_vacuum_state(spec: QuadricSpec, sine: bool, s: float, u, v) -> AuxState:
    """Vacuum solutions of the elliptic-region systems (zero angle):
    alpha = A sqrt(a1) sinh(u/sqrt(a1)), beta = B sqrt(-a2) sinh(v/sqrt(-a2)) with
    A^2 + B^2 = 1 for the sinh system and A^2 - B^2 = 1 for the sine system."""
    a1, a2 = spec.a1, spec.a2
    if sine:
        A, B = np.cosh(s), np.sinh(s)
    else:
        A, B = np.cos(s), np.sin(s)
    up, vp = np.asarray(u) / np.sqrt(a1), np.asarray(v) / np.sqrt(-a2)
    return AuxState(A * np.sqrt(a1) * np.sinh(up), B * np.sqrt(-a2) * np.sinh(vp), A * np.cosh(up), B * np.cosh(vp))


@dataclass
class HyperboloidVacuum:
    """Zero-angle solution of the hyperboloid system: alpha(u), beta(v) with
    alpha'^2 = kappa + sin^2(alpha)/a3 and beta'^2 = kappa + cos^2(beta)/a1 + sin^2(beta)/a2."""
    spec: QuadricSpec
    kappa: float
    alpha0: float
    beta0: float

    def _rhs_a(self, t, y):
        return np.array([y[1], np.sin(2 * y[0]) / (2 * self.spec.a3)])

    def _rhs_b(self, t, y):
        return np.array([y[1], np.sin(2 * y[0]) * (1 / self.spec.a2 - 1 / self.spec.a1) / 2])

    def profiles(self, u, v):
        a1, a2, a3 = self.spec.a1, self.spec.a2, self.spec.a3
        ra = self.kappa + np.sin(self.alpha0)**2 / a3
        rb = self.kappa + np.cos(self.beta0)**2 / a1 + np.sin(self.beta0)**2 / a2
        if ra <= 0 or rb <= 0:
            raise ValueError("kappa too small for a monotone vacuum profile")
        ya = _two_sided(self._rhs_a, [self.alpha0, np.sqrt(ra)], np.asarray(u, dtype=float))
        yb = _two_sided(self._rhs_b, [self.beta0, np.sqrt(rb)], np.asarray(v, dtype=float))
        return ya, yb

    def state(self, u, v) -> AuxState:
        ya, yb = self.profiles(u, v)
        A, L = np.meshgrid(ya[:, 0], yb[:, 0])[0], np.meshgrid(ya[:, 1], yb[:, 1])[0]
        B, M = np.meshgrid(ya[:, 0], yb[:, 0])[1], np.meshgrid(ya[:, 1], yb[:, 1])[1]
        return AuxState(A, B, L, M)
