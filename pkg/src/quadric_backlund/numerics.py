"""Finite-difference stencils, fixed-step RK4 and small interpolation helpers."""
from __future__ import annotations

import numpy as np


def diff1(f, h: float, axis: int = -1, order: int = 2):
    """Central first derivative; one-sided second-order at the ends."""
    f = np.asarray(f)
    d = np.gradient(f, h, axis=axis, edge_order=2)
    if order == 4 and f.shape[axis] >= 5:
        g = np.moveaxis(f, axis, 0)
        dd = np.moveaxis(d, axis, 0).copy()
        dd[2:-2] = (g[:-4] - 8 * g[1:-3] + 8 * g[3:-1] - g[4:]) / (12 * h)
        # fourth-order one-sided stencils on the two end samples of each side
        dd[0] = (-25 * g[0] + 48 * g[1] - 36 * g[2] + 16 * g[3] - 3 * g[4]) / (12 * h)
        dd[1] = (-3 * g[0] - 10 * g[1] + 18 * g[2] - 6 * g[3] + g[4]) / (12 * h)
        dd[-1] = (25 * g[-1] - 48 * g[-2] + 36 * g[-3] - 16 * g[-4] + 3 * g[-5]) / (12 * h)
        dd[-2] = (3 * g[-1] + 10 * g[-2] - 18 * g[-3] + 6 * g[-4] - g[-5]) / (12 * h)
        d = np.moveaxis(dd, 0, axis)
    return d


def diff2(f, h: float, axis: int = -1):
    """Second-order central second derivative; zero on the two end slices."""
    g = np.moveaxis(np.asarray(f, dtype=float), axis, 0)
    out = np.zeros_like(g)
    out[1:-1] = (g[2:] - 2 * g[1:-1] + g[:-2]) / h**2
    return np.moveaxis(out, 0, axis)


def central(fun, x, h: float, order: int = 4):
    """Central difference of a callable at x (scalar or array argument)."""
    if order == 2:
        return (fun(x + h) - fun(x - h)) / (2 * h)
    return (fun(x - 2 * h) - 8 * fun(x - h) + 8 * fun(x + h) - fun(x + 2 * h)) / (12 * h)


def interior_mask(shape) -> np.ndarray:
    m = np.zeros(shape, dtype=bool)
    m[1:-1, 1:-1] = True
    return m


def cubic_weights(t: float) -> np.ndarray:
    """Lagrange weights on nodes -1, 0, 1, 2 for a point at offset t in [0, 1]."""
    nodes = np.array([-1.0, 0.0, 1.0, 2.0])
    w = np.ones(4)
    for i in range(4):
        for j in range(4):
            if i != j:
                w[i] *= (t - nodes[j]) / (nodes[i] - nodes[j])
    return w


def cubic_along(g, i: int, t: float):
    """Interpolate the leading axis of g between samples i and i+1 (clamped stencil)."""
    n = g.shape[0]
    lo = min(max(i - 1, 0), n - 4)
    w = cubic_weights(t + i - (lo + 1))
    return np.tensordot(w, g[lo:lo + 4], axes=(0, 0))


def rk4_step(f, t: float, y, h: float):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4(f, y0, t, project=None, guard: float | None = None):
    """Integrate y' = f(t, y) over the sample points t; optional projection after each step."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y0, dtype=float)
    out = np.empty((len(t),) + y.shape)
    out[0] = y
    for n in range(len(t) - 1):
        y = rk4_step(f, t[n], y, t[n + 1] - t[n])
        if project is not None:
            y = project(y)
        if guard is not None and not np.all(np.abs(y) < guard):
            raise OverflowError(f"integration left the guard |y| < {guard:g} at t={t[n + 1]:.6g}")
        out[n + 1] = y
    return out


def march(rhs, g0, track, h: float, substeps: int = 1, guard: float | None = None):
    """RK4 along the leading axis of track, whose samples are interpolated cubically at
    substep nodes; rhs(g, sample) gives dg/ds. Returns g at every track sample."""
    n = track.shape[0]
    g = np.asarray(g0, dtype=float)
    out = np.empty((n,) + g.shape)
    out[0] = g
    hs = h / substeps
    for i in range(n - 1):
        for k in range(substeps):
            t0 = k / substeps
            a = cubic_along(track, i, t0)
            b = cubic_along(track, i, t0 + 0.5 / substeps)
            c = cubic_along(track, i, t0 + 1.0 / substeps)
            k1 = rhs(g, a)
            k2 = rhs(g + hs / 2 * k1, b)
            k3 = rhs(g + hs / 2 * k2, b)
            k4 = rhs(g + hs * k3, c)
            g = g + hs / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if guard is not None and not np.all(np.abs(g) < guard):
            raise OverflowError(f"integration left the guard |y| < {guard:g}")
        out[i + 1] = g
    return out
