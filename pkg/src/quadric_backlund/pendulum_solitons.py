"""Degenerate (lambda = 0) deformations of the hyperbolic paraboloid: the hyperbolic pendulum
theta'' = sinh(theta) cosh(theta), the alpha profile, the (beta, mu) reconstruction and the
separable transform ODE for theta_1(u, theta_0)."""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .numerics import diff1, rk4
from .sg_family import SpectralParam, bpt_factor, EquationKind

OVERFLOW = 50.0


def energy_radicand(theta, c):
    return (np.cosh(theta)**2 + np.sinh(theta)**2 + c) / 2


@dataclass
class PendulumState:
    v: np.ndarray
    theta: np.ndarray
    theta_prime: np.ndarray
    c: float

    def energy_residual(self) -> np.ndarray:
        return self.theta_prime**2 - energy_radicand(self.theta, self.c)


def _pendulum_rhs(t, y):
    return np.array([y[1], np.sinh(y[0]) * np.cosh(y[0])])


def _initial_slope(c, theta0, sign):
    r = energy_radicand(theta0, c)
    if r < 0:
        raise ValueError(f"energy radicand (cosh^2 + sinh^2 + c)/2 = {r:.3g} is negative at the start")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * np.sqrt(r)


def pendulum_integrate(c: float, theta0: float, sign: int, v_grid, project: bool = True) -> PendulumState:
    """RK4 over v_grid (starting at v_grid[0]); theta' is projected back onto the energy level."""
    v = np.asarray(v_grid, dtype=float)
    y0 = [theta0, _initial_slope(c, theta0, sign)]

    def proj(y):
        r = energy_radicand(y[0], c)
        if r <= 0 or y[1] == 0:
            return y
        return np.array([y[0], np.sign(y[1]) * np.sqrt(r)])

    y = rk4(_pendulum_rhs, y0, v, project=proj if project else None, guard=OVERFLOW)
    return PendulumState(v, y[:, 0], y[:, 1], c)


def energy_drift_rate(c: float, theta0: float, sign: int, v_grid) -> float:
    """Unprojected energy drift divided by the length of the v window."""
    p = pendulum_integrate(c, theta0, sign, v_grid, project=False)
    return float(np.max(np.abs(p.energy_residual())) / (p.v[-1] - p.v[0]))


def seed_closed_form(c: float, v, c1: float, sign: int = 1):
    """Closed forms of the c = -1 and c = +1 trajectories."""
    v = np.asarray(v, dtype=float)
    if c == -1:
        x = sign * v + c1
        if np.any(x >= 0):
            raise ValueError("c = -1 closed form needs sign*v + c1 < 0")
        return 2 * np.arctanh(np.exp(x))
    if c == 1:
        return np.arcsinh(np.tan(sign * v + c1))
    raise ValueError("closed forms exist only for c = +-1")


def v_of_theta0(c: float, theta0, c1: float, sign: int = 1):
    theta0 = np.asarray(theta0, dtype=float)
    if c == -1:
        return (np.log(np.tanh(theta0 / 2)) - c1) * sign
    if c == 1:
        return (np.arctan(np.sinh(theta0)) - c1) * sign
    raise ValueError("closed forms exist only for c = +-1")


def sigma_one_soliton(v, c1: float, sign: int):
    """The sigma = 1 hyperbolic sinh-Gordon 1-soliton, a function of v alone."""
    return 2 * np.arctanh(np.exp(sign * np.asarray(v) + c1))


def soliton_match(p: PendulumState) -> tuple[float, float, int]:
    """Smallest sup-distance between the trajectory and a sigma = 1 sinh-Gordon 1-soliton
    2 atanh(exp(+-v + c1)); c1 is read off the samples where theta > 0 (median).
    Returns (distance, c1, sign)."""
    ok = p.theta > 0
    if not ok.any():
        return float("inf"), 0.0, 1
    best = (float("inf"), 0.0, 1)
    for sign in (1, -1):
        c1 = float(np.median(np.log(np.tanh(p.theta[ok] / 2)) - sign * p.v[ok]))
        x = sign * p.v + c1
        d = float(np.max(np.abs(2 * np.arctanh(np.exp(np.minimum(x, -1e-300))) - p.theta))) if np.all(x < 0) else float("inf")
        if d < best[0]:
            best = (d, c1, sign)
    return best


@dataclass
class AlphaProfile:
    v: np.ndarray
    alpha: np.ndarray
    alpha_prime: np.ndarray
    n_valid: int


def alpha_profile(p: PendulumState, a1: float, init=(1.0, 0.0), s_tol: float = 1e-8) -> AlphaProfile:
    """alpha'' = 2 (log sinh theta)' alpha' - alpha/a1, integrated jointly with the pendulum.

    The window is clipped before the first sample where sinh(theta) vanishes (n_valid)."""
    S = np.sinh(p.theta)
    bad = np.nonzero((np.abs(S) < s_tol) | (np.sign(S) != np.sign(S[0])))[0]
    n = int(bad[0]) if bad.size else len(p.v)
    if n < 2:
        raise ValueError("sinh(theta) vanishes at the start of the window")
    c = p.c

    def f(t, y):
        th, thp, a, ap = y
        return np.array([thp, np.sinh(th) * np.cosh(th), ap,
                         2 * np.cosh(th) * thp / np.sinh(th) * ap - a / a1])

    def proj(y):
        r = energy_radicand(y[0], c)
        return y if r <= 0 else np.array([y[0], np.sign(y[1]) * np.sqrt(r), y[2], y[3]])

    y = rk4(f, [p.theta[0], p.theta_prime[0], init[0], init[1]], p.v[:n], project=proj, guard=1e12)
    return AlphaProfile(p.v[:n], y[:, 2], y[:, 3], n)


@dataclass
class ZeroSolitonProfile:
    v: np.ndarray
    theta: np.ndarray
    theta_prime: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    mu: np.ndarray
    a1: float
    a2: float
    c: float
    constant: np.ndarray  # mu^2 - alpha^2/a1 + beta^2/a2 before normalization
    scale: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("v,theta,theta_prime,alpha,beta,mu\n")
        for row in zip(self.v, self.theta, self.theta_prime, self.alpha, self.beta, self.mu):
            buf.write(",".join(f"{x:.17g}" for x in row) + "\n")
        return buf.getvalue()


def _beta_mu(th, thp, a, ap, a1, a2):
    C, S = np.cosh(th), np.sinh(th)
    beta = -a2 * (thp / S**2 * ap - C / S * a / a1)
    mu = (C * a / a1 - S * beta / a2) / thp
    return beta, mu


def normalization_form(p: PendulumState, a1: float, a2: float) -> np.ndarray:
    """Symmetric 2x2 matrix of mu^2 - alpha^2/a1 + beta^2/a2 in the initial data (alpha, alpha')."""
    def K(a, ap):
        b, m = _beta_mu(p.theta[0], p.theta_prime[0], a, ap, a1, a2)
        return m**2 - a**2 / a1 + b**2 / a2
    off = (K(1.0, 1.0) - K(1.0, 0.0) - K(0.0, 1.0)) / 2
    return np.array([[K(1.0, 0.0), off], [off, K(0.0, 1.0)]])


def normalizable_init(p: PendulumState, a1: float, a2: float) -> tuple[float, float]:
    """Initial data (alpha, alpha') along the most positive direction of the constant,
    scaled so that the constant equals 1."""
    w, vec = np.linalg.eigh(normalization_form(p, a1, a2))
    if not w[-1] > 1e-14:
        raise ValueError("the constant is negative semidefinite for this trajectory; it cannot be normalized to 1")
    x = vec[:, -1] / np.sqrt(w[-1])
    return float(x[0]), float(x[1])


def reconstruct_zero_soliton(p: PendulumState, prof: AlphaProfile, a1: float, a2: float,
                             normalize: bool = True) -> ZeroSolitonProfile:
    n = prof.n_valid
    th, thp = p.theta[:n], p.theta_prime[:n]
    S = np.sinh(th)
    if np.any(np.abs(thp) < 1e-12) or np.any(np.abs(S) < 1e-12):
        raise ValueError("theta' or sinh(theta) vanishes on the window")
    a, ap = prof.alpha, prof.alpha_prime
    beta, mu = _beta_mu(th, thp, a, ap, a1, a2)
    K = mu**2 - a**2 / a1 + beta**2 / a2
    scale = 1.0
    if normalize:
        k0 = K[0]
        if not k0 > 0:
            raise ValueError(f"constant {k0:.3g} is not positive; rescaling alpha cannot normalize it to 1")
        scale = 1 / np.sqrt(k0)
    return ZeroSolitonProfile(prof.v, th, thp, scale * a, scale * beta, scale * mu, a1, a2, p.c, K, scale)


def reduced_system_residual(z: ZeroSolitonProfile, band: int = 2) -> float:
    """Max of the alpha' = mu S, beta' = mu C, mu' = S alpha/a1 - C beta/a2 residuals."""
    h = z.v[1] - z.v[0]
    C, S = np.cosh(z.theta), np.sinh(z.theta)
    d = lambda f: diff1(f, h, 0, order=4)
    r = [d(z.alpha) - z.mu * S, d(z.beta) - z.mu * C, d(z.mu) - (S * z.alpha / z.a1 - C * z.beta / z.a2)]
    sl = slice(band, -band or None)
    return float(max(np.max(np.abs(x[sl])) for x in r))


def constraint_residual(z: ZeroSolitonProfile) -> float:
    """The algebraic relation -C alpha/a1 + S beta/a2 + mu theta' = 0 (lambda_u with lambda = 0)."""
    C, S = np.cosh(z.theta), np.sinh(z.theta)
    return float(np.max(np.abs(-C * z.alpha / z.a1 + S * z.beta / z.a2 + z.mu * z.theta_prime)))


def theta_form_integral(z: ZeroSolitonProfile) -> np.ndarray:
    """The conserved quantity written with theta as the variable, minus 1."""
    C, S = np.cosh(z.theta), np.sinh(z.theta)
    w = (C**2 + S**2 + z.c) / (2 * S**2)
    da = z.mu * S / z.theta_prime  # d alpha / d theta
    a1 = z.a1
    return w * da**2 + a1 / (1 - a1) * (w * da - C / S * z.alpha / a1)**2 - z.alpha**2 / a1 - 1


# transform ODE over (u, theta_0) ---------------------------------------------------

def theta1_rhs(theta1, theta0, c: float, sigma: float, eps: int):
    """(theta1_u, theta1_theta0) of the separable pair."""
    p, q = (sigma + 1 / sigma) / 2, (sigma - 1 / sigma) / 2
    C0, S0, C1, S1 = np.cosh(theta0), np.sinh(theta0), np.cosh(theta1), np.sinh(theta1)
    r = C0**2 + S0**2 + c
    if np.any(r <= 0):
        raise ValueError("radicand C0^2 + S0^2 + c must be positive")
    fu = eps * np.sqrt(r) / np.sqrt(2) + q * S1 * C0 + p * C1 * S0
    ft = eps * np.sqrt(2) / np.sqrt(r) * (p * S1 * C0 + q * C1 * S0)
    return fu, ft


@dataclass
class Theta1Field:
    u: np.ndarray
    theta0: np.ndarray
    values: np.ndarray  # (n_theta0, n_u)
    c: float
    sigma: float
    eps: int


def theta1_transform(c: float, sigma: float, u_grid, theta0_grid, theta1_origin: float, eps: int = 1,
                     check_tol: float | None = 1e-4) -> Theta1Field:
    """Integrate along theta_0 at u = u_grid[0] from theta1_origin, then along u for every theta_0.

    The two constants of the transform are u_grid[0]'s theta_1 value and theta1_origin's placement."""
    SpectralParam(sigma).require(EquationKind.HYPERBOLIC_SINH)
    u = np.asarray(u_grid, dtype=float)
    t0 = np.asarray(theta0_grid, dtype=float)
    col = rk4(lambda t, y: theta1_rhs(y, t, c, sigma, eps)[1], theta1_origin, t0, guard=OVERFLOW)
    vals = rk4(lambda s, y: theta1_rhs(y, t0, c, sigma, eps)[0], col, u, guard=OVERFLOW).T
    f = Theta1Field(u, t0, vals, c, sigma, eps)
    if check_tol is not None:
        r = transform_consistency(f)
        if r > check_tol:
            raise ValueError(f"theta_0-equation residual {r:.3g} > {check_tol:g}: inconsistent constants")
    return f


def transform_consistency(f: Theta1Field, band: int = 2) -> float:
    """Residual of the theta_0-equation on the field produced from the u-equation."""
    h = f.theta0[1] - f.theta0[0]
    d = diff1(f.values, h, 0, order=4)
    _, ft = theta1_rhs(f.values, f.theta0[:, None], f.c, f.sigma, f.eps)
    return float(np.max(np.abs((d - ft)[band:-band, band:-band])))


def cross_partial_residual(f: Theta1Field, band: int = 1) -> float:
    """max |d_theta0 (theta1_u) - d_u (theta1_theta0)| with second-order differences."""
    fu, ft = theta1_rhs(f.values, f.theta0[:, None], f.c, f.sigma, f.eps)
    ht, hu = f.theta0[1] - f.theta0[0], f.u[1] - f.u[0]
    r = np.gradient(fu, ht, axis=0) - np.gradient(ft, hu, axis=1)
    return float(np.max(np.abs(r[band:-band, band:-band])))


def theta1_bpt_route(f: Theta1Field, c1: float, sign: int = 1) -> np.ndarray:
    """theta_1 from the superposition of the sigma = 1 soliton 2 atanh(exp(sign v + c1)) and
    the vacuum transform by f.sigma, with the vacuum constant fitted at the field's first sample."""
    s1, s2 = SpectralParam(1.0), SpectralParam(f.sigma)
    k = bpt_factor(EquationKind.HYPERBOLIC_SINH, s1, s2)
    U, T0 = np.meshgrid(f.u, f.theta0)
    V = (np.log(np.tanh(T0 / 2)) - c1) * sign
    f1 = sigma_one_soliton(V, c1, sign)
    # f2 = 2 s atanh(exp(q u + p v + c2)) matched to theta_1 at (u0, theta0_0)
    f2_0 = f1[0, 0] + 2 * np.arctanh(np.tanh(f.values[0, 0] / 2) / k)
    s = np.sign(f2_0)
    X0 = np.log(np.tanh(abs(f2_0) / 2))
    c2 = X0 - s2.q.real * U[0, 0] - s2.p.real * V[0, 0]
    X = s2.q.real * U + s2.p.real * V + c2
    if np.any(X >= 0):
        raise ValueError("vacuum transform leaves its real domain on the window")
    f2 = 2 * s * np.arctanh(np.exp(X))
    arg = k * np.tanh((f2 - f1) / 2)
    if np.any(np.abs(arg) >= 1):
        raise ValueError("superposition leaves the real branch on the window")
    return 2 * np.arctanh(arg)
