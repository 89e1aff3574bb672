"""Fixed-step integrators shared by the path and bigon machinery.

Every ODE here is linear (possibly affine) in the unknown, with a
coefficient sampled on a uniform grid.  Half-step values come from local
cubic (4-point Lagrange) interpolation, so the classical RK4 scheme keeps
its fourth order on sampled data.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline


def midpoints(y: np.ndarray, axis: int = 0) -> np.ndarray:
    """Cubic-interpolated values halfway between consecutive samples.

    Interior intervals use the centred stencil ``(-1, 9, 9, -1) / 16``;
    the two end intervals use one-sided 4-point stencils.  Needs at least
    4 samples along ``axis``.
    """
    y = np.moveaxis(np.asarray(y, dtype=float), axis, 0)
    n = y.shape[0] - 1
    if n < 3:
        raise ValueError(f"need at least 4 samples for cubic midpoints, got {n + 1}")
    mid = np.empty((n,) + y.shape[1:])
    mid[1:-1] = (-y[:-3] + 9.0 * y[1:-2] + 9.0 * y[2:-1] - y[3:]) / 16.0
    mid[0] = (5.0 * y[0] + 15.0 * y[1] - 5.0 * y[2] + y[3]) / 16.0
    mid[-1] = (y[-4] - 5.0 * y[-3] + 15.0 * y[-2] + 5.0 * y[-1]) / 16.0
    return np.moveaxis(mid, 0, axis)


def rk4_linear(A, y0, h, forcing=None, A_mid=None, forcing_mid=None, vector=False):
    """Integrate ``y' = A(t) y + f(t)`` with classical RK4 on a uniform grid.

    Parameters
    ----------
    A : array, shape (n+1, ..., d, d)
        Coefficient matrices at the grid nodes (time is axis 0).
    y0 : array, shape (..., d) or (..., d, k)
        Initial state; batch dimensions broadcast against ``A[0]``.
    h : float
        Step size.
    forcing : array, shape (n+1, ...) matching ``y0``, optional
        Inhomogeneous term at the nodes.
    A_mid, forcing_mid : optional
        Half-step values.  Default: cubic interpolation of the node values.
    vector : bool
        Treat the trailing axis of ``y0`` as a vector rather than a matrix.

    Returns
    -------
    array, shape (n+1,) + y.shape
        The trajectory at every node, ``y[0] == y0``.
    """
    A = np.asarray(A, dtype=float)
    y = np.array(y0, dtype=float)
    if vector:
        y = y[..., None]
    n = A.shape[0] - 1
    if A_mid is None:
        A_mid = midpoints(A)
    if forcing is not None:
        f = np.asarray(forcing, dtype=float)
        if vector:
            f = f[..., None]
        if forcing_mid is None:
            fm = midpoints(f)
        else:
            fm = np.asarray(forcing_mid, dtype=float)
            if vector:
                fm = fm[..., None]
    out = np.empty((n + 1,) + np.broadcast_shapes(y.shape, A.shape[1:-2] + y.shape[-2:]))
    out[0] = y
    y = out[0].copy()
    for i in range(n):
        a0, am, a1 = A[i], A_mid[i], A[i + 1]
        if forcing is None:
            k1 = a0 @ y
            k2 = am @ (y + 0.5 * h * k1)
            k3 = am @ (y + 0.5 * h * k2)
            k4 = a1 @ (y + h * k3)
        else:
            k1 = a0 @ y + f[i]
            k2 = am @ (y + 0.5 * h * k1) + fm[i]
            k3 = am @ (y + 0.5 * h * k2) + fm[i]
            k4 = a1 @ (y + h * k3) + f[i + 1]
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return out[..., 0] if vector else out


def spline(values: np.ndarray, axis: int = 0) -> CubicSpline:
    """Not-a-knot cubic spline through samples on the uniform grid of [0, 1]."""
    values = np.asarray(values, dtype=float)
    n = values.shape[axis] - 1
    return CubicSpline(np.linspace(0.0, 1.0, n + 1), values, axis=axis)


def resample(values: np.ndarray, x_new, axis: int = 0) -> np.ndarray:
    """Evaluate the cubic spline of ``values`` (uniform on [0, 1]) at ``x_new``."""
    x_new = np.clip(np.asarray(x_new, dtype=float), 0.0, 1.0)
    return spline(values, axis=axis)(x_new)
