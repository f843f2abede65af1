"""Algebraic Backlund transform of auxiliary states, the spectral/confocal correspondence,
matrix superposition formulas, and the space realization of the transformed leaves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linear_systems import AuxState
from .numerics import diff1, march
from .quadric_geom import QuadricKind, QuadricSpec, cross, h_function, h_gradient, tangency_residual
from .sg_family import SpectralParam

COND_GUARD = 1e12


@dataclass(frozen=True)
class TransformParams:
    z: float
    eps1: int = 1
    eps1p: int = 1

    def __post_init__(self):
        if self.z == 0:
            raise ValueError("confocal parameter z must be nonzero")
        if self.eps1 not in (1, -1) or self.eps1p not in (1, -1):
            raise ValueError("signs must be +1 or -1")

    def r(self, spec: QuadricSpec):
        return np.sqrt(1 - self.z / spec.a1), np.sqrt(1 - self.z / spec.a2)

    def k(self) -> float:
        return self.eps1p * np.sqrt(self.z)

    def D(self, spec: QuadricSpec) -> np.ndarray:
        r1, r2 = self.r(spec)
        return np.diag([r1, r2]) / self.k()

    def inverse(self) -> "TransformParams":
        return TransformParams(self.z, self.eps1, -self.eps1p)


@dataclass(frozen=True)
class AngleMatrix:
    """R = [[C, eps S], [S, C]]; hyperbolic for eps = 1, circular for eps = -1."""
    C: float
    S: float
    eps: int = 1

    def __post_init__(self):
        det = np.asarray(self.C)**2 - self.eps * np.asarray(self.S)**2
        if np.any(np.abs(det - 1) > 1e-12 * np.maximum(1, np.asarray(self.C)**2)):
            raise ValueError("angle matrix violates its signature invariant")

    @classmethod
    def of(cls, theta, eps: int = 1) -> "AngleMatrix":
        if eps == 1:
            return cls(np.cosh(theta), np.sinh(theta), 1)
        return cls(np.cos(theta), np.sin(theta), -1)

    @property
    def matrix(self) -> np.ndarray:
        C, S = np.asarray(self.C, dtype=float), np.asarray(self.S, dtype=float)
        return np.moveaxis(np.array([[C, self.eps * S], [S, C]]), (0, 1), (-2, -1))

    @property
    def theta(self):
        return np.arctanh(self.S / self.C) if self.eps == 1 else np.arctan2(self.S, self.C)


def angle_matrix(theta, eps: int = 1) -> np.ndarray:
    return AngleMatrix.of(theta, eps).matrix


def e_matrix(eps1: int) -> np.ndarray:
    """Leaf-sign carrier diag(1, -eps1)."""
    return np.diag([1.0, -float(eps1)])


def signed_angle(theta, eps: int, eps1: int) -> np.ndarray:
    """R(theta) times the sign carrier of eps1."""
    return angle_matrix(theta, eps) @ e_matrix(eps1)


def split_signed(m: np.ndarray, eps: int = 1, tol: float = 1e-10):
    """Write m = b R(theta) diag(1, s); returns (theta, s, b).

    b = -1 only occurs for eps = 1 and marks the branch theta + i pi of the hyperbolic angle
    (cosh and sinh both change sign), which the scalar superposition reaches through
    |k tanh| > 1."""
    b = np.sign(m[..., 0, 0]) if eps == 1 else np.ones(m.shape[:-2])
    mm = m * b[..., None, None] if np.ndim(b) else m * b
    C, S = mm[..., 0, 0], mm[..., 1, 0]
    s = mm[..., 1, 1] / C
    if np.any(np.abs(np.abs(s) - 1) > tol):
        raise ValueError("sign carrier entries are not +-1 (co-cycle condition on the leaf signs fails)")
    s = np.sign(s)
    if np.any(np.abs(mm[..., 0, 1] - eps * S * s) > tol * np.maximum(1, np.abs(C))):
        raise ValueError("matrix is not of the form R diag(1, s)")
    if np.any(np.abs(C**2 - eps * S**2 - 1) > tol * np.maximum(1, C**2)):
        raise ValueError("signature invariant C^2 - eps S^2 = 1 violated")
    theta = np.arctanh(S / C) if eps == 1 else np.arctan2(S, C)
    return theta, s, b


def d_from_sigma(sigma: float, eps1: int) -> np.ndarray:
    """D with -D diag(1, -eps1) = diag((s - 1/s)/2, (s + 1/s)/2)."""
    p, q = (sigma + 1 / sigma) / 2, (sigma - 1 / sigma) / 2
    return np.diag([-q, eps1 * p])


# spectral parameter -------------------------------------------------------

def spectral_candidates(spec: QuadricSpec, params: TransformParams):
    """Both ways of reading (q, p) off the diagonal of -D E1, with their consistency
    residuals |p^2 - q^2 - 1|. For z < 0 the radical sqrt(z) is replaced by sqrt(-z)."""
    z = params.z
    r1, r2 = params.r(spec)
    kk = params.eps1p * np.sqrt(abs(z))
    d = (-r1 / kk, params.eps1 * r2 / kk)
    out = []
    for name, (q, p) in (("diagonal", d), ("swapped", d[::-1])):
        out.append((name, p, q, abs(p * p - q * q - 1)))
    return out


def spectral_from_confocal(spec: QuadricSpec, params: TransformParams, tol: float = 1e-10) -> SpectralParam:
    if spec.kind is not QuadricKind.HYPERBOLIC_PARABOLOID:
        raise ValueError("the spectral correspondence is stated for the hyperbolic paraboloid")
    if not params.z < spec.a1:
        raise ValueError("z must lie below a1")
    cands = spectral_candidates(spec, params)
    pick = cands[0] if params.z > 0 else cands[1]
    name, p, q, res = pick
    if res > tol:
        raise ValueError(f"inconsistent diagonal pairing ({name}): |p^2 - q^2 - 1| = {res:.3g}")
    return SpectralParam(p + q)


def spectral_identity_residual(spec: QuadricSpec, z: float) -> float:
    r1, r2 = np.sqrt(1 - z / spec.a1), np.sqrt(1 - z / spec.a2)
    return abs(r2**2 - r1**2 - z)


def spectral_from_confocal_imag(spec: QuadricSpec, params: TransformParams, region: int) -> SpectralParam:
    """Unit spectral parameter of the transform leaving the totally-real region `region`."""
    z = params.z
    if not z < min(spec.a2, 0):
        raise ValueError("the imaginary case needs z < a2")
    r1, r2, m = np.sqrt(1 - z / spec.a1), np.sqrt(-1 + z / spec.a2), np.sqrt(-z)
    sin_psi = -params.eps1p * r1 / m
    cos_psi = region * params.eps1 * params.eps1p * r2 / m
    return SpectralParam.unit(np.arctan2(sin_psi, cos_psi))


# algebraic transform -------------------------------------------------------

def _cs(theta, eps):
    return (np.cosh(theta), np.sinh(theta)) if eps == 1 else (np.cos(theta), np.sin(theta))


def algebraic_backlund(state0: AuxState, theta1, params: TransformParams, spec: QuadricSpec,
                       theta0=0.0) -> AuxState:
    """State of the transformed leaf: V1 = sqrt(R') V0 - k R1 E1 L0,
    L1 = E1 R0^-1 (k A' V0 + sqrt(R') R1 E1 L0), k = eps1' sqrt(z)."""
    if not 0 < params.z < spec.a1:
        raise ValueError("real transforms need 0 < z < a1")
    e, e1 = spec.eps, params.eps1
    r1, r2 = params.r(spec)
    k = params.k()
    a0, b0, l0, m0 = state0.alpha, state0.beta, state0.lam, state0.mu
    C1, S1 = _cs(theta1, e)
    C0, S0 = _cs(theta0, e)
    P = C1 * l0 - e * e1 * S1 * m0
    Q = S1 * l0 - e1 * C1 * m0
    a1 = r1 * a0 - k * P
    b1 = r2 * b0 - k * Q
    w1 = k * a0 / spec.a1 + r1 * P
    w2 = k * b0 / spec.a2 + r2 * Q
    lam1 = C0 * w1 - e * S0 * w2
    mu1 = -e1 * (-S0 * w1 + C0 * w2)
    return AuxState(a1, b1, lam1, mu1)


def algebraic_backlund_imag(state0: AuxState, theta1, params: TransformParams, spec: QuadricSpec,
                            theta0=0.0) -> AuxState:
    """Transform from the totally-real region eps = spec.eps into the region -eps.

    theta1 is the angle of the new state, which is circular when the new region is -1."""
    z, e, e1, ep = params.z, spec.eps, params.eps1, params.eps1p
    if not z < min(spec.a2, 0):
        raise ValueError("the imaginary case needs z < a2")
    r1, r2, m = np.sqrt(1 - z / spec.a1), np.sqrt(-1 + z / spec.a2), np.sqrt(-z)
    a0, b0, l0, m0 = state0.alpha, state0.beta, state0.lam, state0.mu
    C1, S1 = _cs(theta1, -e)
    C0, S0 = _cs(theta0, e)
    a1 = r1 * a0 - ep * m * (C1 * l0 + e * e1 * S1 * m0)
    b1 = e * r2 * b0 - ep * m * (S1 * l0 - e1 * C1 * m0)
    # the same relations read from the target side: (0, eps) <-> (1, -eps), eps0 = -eps1, eps0' = -eps1'
    E0, E0p, e_new = -e1, -ep, -e
    c1 = (r1 * a1 - a0) / (E0p * m)
    c2 = (e_new * r2 * b1 - b0) / (E0p * m)
    det = -E0 * C0**2 - e_new * E0 * S0**2
    lam1 = (-E0 * C0 * c1 - e_new * E0 * S0 * c2) / det
    mu1 = (C0 * c2 - S0 * c1) / det
    return AuxState(a1, b1, lam1, mu1)


def imag_identity_residual(state0: AuxState, state1: AuxState, params: TransformParams, spec: QuadricSpec):
    """(eps r2 b0 - b1)^2 + eps (r1 a0 - a1)^2 + z H0."""
    e, z = spec.eps, params.z
    r1, r2 = np.sqrt(1 - z / spec.a1), np.sqrt(-1 + z / spec.a2)
    H0 = h_function(spec, state0.alpha, state0.beta)
    return (e * r2 * state0.beta - state1.beta)**2 + e * (r1 * state0.alpha - state1.alpha)**2 + z * H0


# matrix superposition ------------------------------------------------------

def _guarded_inv(m: np.ndarray) -> np.ndarray:
    c = np.linalg.cond(m)
    size = np.max(np.abs(m), axis=(-2, -1))
    if np.any(~np.isfinite(c)) or np.any(c > COND_GUARD) or np.any(size < 1e-12):
        raise np.linalg.LinAlgError(f"2x2 inversion too ill-conditioned (cond {np.max(c):.3g})")
    return np.linalg.inv(m)


def bpt_states(R1E1: np.ndarray, R2E2: np.ndarray, D1: np.ndarray, D2: np.ndarray,
               R0: np.ndarray | None = None) -> np.ndarray:
    """R3 E1 E2 from R3 E1 E2 R0^-1 = (D1 X - D2)(D1 - D2 X)^-1 with X = R2 E1 E2 R1^-1."""
    X = R2E2 @ np.linalg.inv(R1E1)
    M = (D1 @ X - D2) @ _guarded_inv(D1 - D2 @ X)
    return M if R0 is None else M @ R0


def _pair(Di, Dj, RiEi, RjEj):
    inner = _guarded_inv(Di @ RiEi - Dj @ RjEj)
    return np.linalg.inv(Di @ Dj) @ ((Di @ Di - Dj @ Dj) @ Di @ RiEi @ inner - Di @ Di)


@dataclass
class M3Result:
    R7E: np.ndarray  # D1 D2 D3 normalised out: R7 E1 E2 E3
    disagreement: float


def m3_states(R1E1, R2E2, R4E3, D1, D2, D3, faces=None, tol: float = 1e-8) -> M3Result:
    """Triple transform through two routes of the cube; faces optionally overrides the
    pairwise superpositions (M3, M5, M6) for the (1,2), (1,3), (2,3) transforms."""
    if faces is None:
        M3, M5, M6 = _pair(D1, D2, R1E1, R2E2), _pair(D1, D3, R1E1, R4E3), _pair(D2, D3, R2E2, R4E3)
    else:
        M3, M5, M6 = faces
    lhs = D1 @ ((D2 @ D2 - D3 @ D3) @ D2 @ M3 @ _guarded_inv(D2 @ M3 - D3 @ M5) @ R1E1 - D2 @ D2 @ R1E1)
    rhs = D2 @ ((D3 @ D3 - D1 @ D1) @ D1 @ M3 @ _guarded_inv(D3 @ M6 - D1 @ M3) @ R2E2 - D1 @ D1 @ R2E2)
    n = np.linalg.inv(D1 @ D2 @ D3)
    a, b = n @ lhs, n @ rhs
    dis = float(np.max(np.abs(a - b)))
    if dis > tol:
        raise ValueError(f"M3 routes disagree by {dis:.3g}: inconsistent inputs")
    return M3Result((a + b) / 2, dis)


def m3_routes_disagreement(R1E1, R2E2, R4E3, D1, D2, D3, faces=None) -> float:
    return m3_states(R1E1, R2E2, R4E3, D1, D2, D3, faces=faces, tol=np.inf).disagreement


# space realization ------------------------------------------------------------

def mesh_tangents(x: np.ndarray, du: float, dv: float, state: AuxState, theta, eps: int):
    """(x_alpha, x_beta) from (u, v) mesh derivatives by inverting the angle factorization."""
    xu = diff1(x, du, axis=2, order=4)
    xv = diff1(x, dv, axis=1, order=4)
    C, S = _cs(theta, eps)
    lam, mu = state.lam, state.mu
    xa = C / lam * xu - S / mu * xv
    xb = -eps * S / lam * xu + C / mu * xv
    return xa, xb


def realize_leaf(x0: np.ndarray, du: float, dv: float, aux0: AuxState, theta0, aux1: AuxState,
                 params: TransformParams, spec: QuadricSpec, imaginary: bool = False,
                 tangents=None) -> np.ndarray:
    """x1 = x0 + x_alpha (r1 a1 - a0) + x_beta (r2 b1 - b0); in the imaginary case the
    second weight is (-eps r2 b1 - b0) with r2 = sqrt(-1 + z/a2)."""
    e = spec.eps
    xa, xb = tangents if tangents is not None else mesh_tangents(x0, du, dv, aux0, theta0, e)
    lam_ok = (np.abs(aux0.lam) > 1e-12) & (np.abs(aux0.mu) > 1e-12)
    r1 = np.sqrt(1 - params.z / spec.a1)
    if imaginary:
        w2 = -e * np.sqrt(-1 + params.z / spec.a2) * aux1.beta - aux0.beta
    else:
        w2 = np.sqrt(1 - params.z / spec.a2) * aux1.beta - aux0.beta
    x1 = x0 + xa * (r1 * aux1.alpha - aux0.alpha) + xb * w2
    return np.where(lam_ok, x1, np.nan)


def realize_bpt_leaf(x0: np.ndarray, du: float, dv: float, V0: AuxState, theta0, V1: AuxState, V3: AuxState,
                     p1: TransformParams, p2: TransformParams, spec: QuadricSpec, tangents=None) -> np.ndarray:
    """Double transform x3 directly from x0 and the states of vertices 0, 1, 3."""
    e = spec.eps
    xa, xb = tangents if tangents is not None else mesh_tangents(x0, du, dv, V0, theta0, e)
    r11, r12 = p1.r(spec)
    r21, r22 = p2.r(spec)
    H0 = h_function(spec, V0.alpha, V0.beta)
    ha, hb = h_gradient(spec, V0.alpha, V0.beta)
    field = e * ha / (2 * H0) * xa - hb / (2 * H0) * xb
    # oriented as x_beta x x_alpha for both regions (fixed by the route through two single leaves)
    n = -cross(xa, xb) / np.sqrt(-spec.a1 * spec.a2 * H0)
    # u = sqrt(R'_z2) V3 - V1, w = sqrt(R'_z1) V0 - V1
    u1, u2 = r21 * V3.alpha - V1.alpha, r22 * V3.beta - V1.beta
    w1, w2 = r11 * V0.alpha - V1.alpha, r12 * V0.beta - V1.beta
    quad_e = u1 * w1 - e * u2 * w2
    quad_j = -u1 * w2 + u2 * w1
    t1 = r11 * r21 * V3.alpha - V0.alpha
    t2 = r12 * r22 * V3.beta - V0.beta
    return x0 - e * quad_e * field + xa * t1 + xb * t2 + p1.eps1 / np.sqrt(H0) * quad_j * n


def transform_rigid(x: np.ndarray, rot: np.ndarray, shift: np.ndarray) -> np.ndarray:
    return np.einsum("ij,j...->i...", rot, x) + shift.reshape((3,) + (1,) * (x.ndim - 1))


def jacobian_sign(alpha, beta, du: float, dv: float):
    """Sign of det d(alpha, beta)/d(u, v) on a (v, u) grid."""
    au, av = diff1(alpha, du, 1, 4), diff1(alpha, dv, 0, 4)
    bu, bv = diff1(beta, du, 1, 4), diff1(beta, dv, 0, 4)
    return np.sign(au * bv - av * bu)


# hyperboloid -------------------------------------------------------------------

def _solve_trig(A, B, c, branch):
    """x with A cos x + B sin x = c."""
    R = np.hypot(A, B)
    ratio = c / R
    if np.any(np.abs(ratio) > 1):
        raise ValueError("no real solution of the dot-product relation (|c| > R)")
    return np.arctan2(B, A) + branch * np.arccos(ratio)


def hyperboloid_step(state0: AuxState, theta0, theta1, params: TransformParams, spec: QuadricSpec,
                     branch: int = 1) -> AuxState:
    """Transformed state on the hyperboloid from the closed dot-product relations (z < 0).

    Both angles take the same acos branch; mixed branches break the tangency configuration."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    if spec.kind is not QuadricKind.HYPERBOLOID_ONE_SHEET or not params.z < 0:
        raise ValueError("hyperboloid transforms need the hyperboloid kind and z < 0")
    z, e1 = params.z, params.eps1
    r1, r2, r3 = (np.sqrt(1 - z / a) for a in (spec.a1, spec.a2, spec.a3))
    k = params.eps1p * np.sqrt(-z)
    a0, b0, l0, m0 = state0.alpha, state0.beta, state0.lam, state0.mu
    C0, S0 = np.cosh(theta0), np.sinh(theta0)
    C1, S1 = np.cosh(theta1), np.sinh(theta1)
    P = C1 * l0 + e1 * S1 * m0
    Q = S1 * l0 + e1 * C1 * m0
    sa0, ca0, sb0, cb0 = np.sin(a0), np.cos(a0), np.sin(b0), np.cos(b0)
    al1 = _solve_trig(r3 * sa0, -ca0, k * P, branch)
    be1 = _solve_trig(r2 * sb0, -r1 * cb0, k * Q, branch)
    X = (sa0 * np.cos(al1) - r3 * ca0 * np.sin(al1)) / k
    Y = -(-r1 * sb0 * np.cos(be1) + r2 * cb0 * np.sin(be1)) / k
    lam1 = C0 * X - S0 * Y
    mu1 = e1 * (-S0 * X + C0 * Y)
    return AuxState(al1, be1, lam1, mu1)


def hyperboloid_angle_sums(state0: AuxState, state1: AuxState, theta0, theta1, params: TransformParams,
                           spec: QuadricSpec):
    """Right-hand sides (R1, R2) of theta0_u + eps1 theta1_v = R1, theta0_v + eps1 theta1_u = R2."""
    z, e1, ep = params.z, params.eps1, params.eps1p
    r1, r2, r3 = (np.sqrt(1 - z / a) for a in (spec.a1, spec.a2, spec.a3))
    m = np.sqrt(-z)
    a0, b0, a1, b1 = state0.alpha, state0.beta, state1.alpha, state1.beta
    A = np.sin(a0) * np.sin(a1) + r3 * np.cos(a0) * np.cos(a1)
    B = r1 * np.sin(b0) * np.sin(b1) + r2 * np.cos(b0) * np.cos(b1)
    C0, S0, C1, S1 = np.cosh(theta0), np.sinh(theta0), np.cosh(theta1), np.sinh(theta1)
    R1 = ep / m * (A * S0 * C1 - B * C0 * S1)
    R2 = -e1 * ep / m * (A * C0 * S1 - B * S0 * C1)
    return R1, R2


@dataclass
class HyperboloidLeaf:
    theta1: np.ndarray
    state1: AuxState


def hyperboloid_leaf(u: np.ndarray, v: np.ndarray, profile0: dict, theta1_origin: float,
                     params: TransformParams, spec: QuadricSpec, branch: int = 1, substeps: int = 1) -> HyperboloidLeaf:
    """Integrate theta1 over the grid from the angle-sum relations with a zero-angle seed.

    profile0 holds 1-D arrays alpha(u), lam(u), beta(v), mu(v) of the seed."""
    e1 = params.eps1
    a_u, l_u, b_v, m_v = (np.asarray(profile0[k], dtype=float) for k in ("alpha", "lam", "beta", "mu"))
    du, dv = u[1] - u[0], v[1] - v[0]

    def rel(t1, a, b, l, m):
        s0 = AuxState(a, b, l, m)
        s1 = hyperboloid_step(s0, 0.0, t1, params, spec, branch)
        return hyperboloid_angle_sums(s0, s1, 0.0, t1, params, spec)

    # along the first row (v = v0): theta1_u = eps1 R2
    track_u = np.stack([a_u, l_u, np.full_like(a_u, b_v[0]), np.full_like(a_u, m_v[0])], axis=1)
    row = march(lambda t, s: e1 * rel(t, s[0], s[2], s[1], s[3])[1], theta1_origin, track_u, du, substeps)
    # then up every column: theta1_v = eps1 R1
    nv, nu = len(v), len(u)
    track_v = np.stack([np.broadcast_to(a_u, (nv, nu)), np.broadcast_to(l_u, (nv, nu)),
                        np.broadcast_to(b_v[:, None], (nv, nu)), np.broadcast_to(m_v[:, None], (nv, nu))], axis=1)
    T1 = march(lambda t, s: e1 * rel(t, s[0], s[2], s[1], s[3])[0], row, track_v, dv, substeps)
    A, B = np.meshgrid(a_u, b_v)
    L, M = np.meshgrid(l_u, m_v)
    s1 = hyperboloid_step(AuxState(A, B, L, M), 0.0, T1, params, spec, branch)
    return HyperboloidLeaf(T1, s1)


def hyperboloid_angle_sum_residual(state0: AuxState, state1: AuxState, theta0, theta1, du: float, dv: float,
                                   params: TransformParams, spec: QuadricSpec, band: int = 2, tc_tol: float = 1e-8):
    """Finite-difference residuals of both angle-sum relations on a (v, u) grid."""
    tc = np.max(np.abs(tangency_residual(spec, params.z, (state0.alpha, state0.beta), (state1.alpha, state1.beta))))
    if tc > tc_tol:
        raise ValueError(f"pairs violate the tangency configuration ({tc:.3g})")
    T0 = np.broadcast_to(theta0, np.shape(theta1)).astype(float)
    T1 = np.asarray(theta1, dtype=float)
    R1, R2 = hyperboloid_angle_sums(state0, state1, T0, T1, params, spec)
    e1 = params.eps1
    d = lambda f, ax, h: diff1(f, h, ax, order=4)
    res1 = d(T0, 1, du) + e1 * d(T1, 0, dv) - R1
    res2 = d(T0, 0, dv) + e1 * d(T1, 1, du) - R2
    sl = (slice(band, -band), slice(band, -band))
    return float(np.max(np.abs(res1[sl]))), float(np.max(np.abs(res2[sl])))
