"""Sampled paths, bigons and cubes on uniform grids of the unit square/cube.

A path lives on nodes ``t_i = i / N``; a bigon ``(a, b, z)`` on the
``(N+1) x (M+1)`` tensor grid in ``(t, s)``; a cube adds ``u`` with ``K``
segments.  Derivatives are second-order central differences and every
residual is a max-norm over interior nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._ode import resample
from .algebra import LieAlgebra, StrictLie2Algebra, _max, same_algebra

BASED_DERIVATIVE_CONSTANT = 10.0


@dataclass(frozen=True)
class GridSpec:
    N: int
    M: int | None = None
    K: int | None = None
    minimum: int = 8

    def __post_init__(self):
        for name in ("N", "M", "K"):
            value = getattr(self, name)
            if value is not None and value < self.minimum:
                raise ValueError(f"grid size {name}={value} below minimum {self.minimum}")

    @property
    def sizes(self) -> tuple[int, int, int]:
        M = self.M if self.M is not None else self.N
        K = self.K if self.K is not None else M
        return self.N, M, K


@dataclass(frozen=True)
class Cutoff:
    """Monotone reparametrization ``tau`` of [0, 1] with a closed form.

    ``kind`` is ``"smoothstep"`` (quintic, flat ends), ``"identity"`` or
    ``"blend"``, the convex combination ``(1 - w) t + w smoothstep(t)``; the
    blend with ``w < 1`` has ``tau' > 0`` everywhere.
    """

    kind: str = "smoothstep"
    weight: float = 1.0

    def __post_init__(self):
        if self.kind not in ("smoothstep", "identity", "blend"):
            raise ValueError(f"unknown cutoff kind {self.kind!r}")
        if self.kind == "blend" and not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"blend weight {self.weight} outside [0, 1] gives a non-monotone cutoff")
        probe = np.linspace(0.0, 1.0, 1001)
        if np.min(self.derivative(probe)) < -1e-14:
            raise ValueError(f"cutoff {self} is not non-decreasing")

    @property
    def flat(self) -> bool:
        """True when ``tau'`` vanishes at both ends."""
        return self.kind == "smoothstep" or (self.kind == "blend" and self.weight == 1.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        smooth = t**3 * (10.0 - 15.0 * t + 6.0 * t * t)
        if self.kind == "identity":
            return t.copy()
        if self.kind == "smoothstep":
            return smooth
        return (1.0 - self.weight) * t + self.weight * smooth

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        smooth = 30.0 * t * t * (1.0 - t) ** 2
        if self.kind == "identity":
            return np.ones_like(t)
        if self.kind == "smoothstep":
            return smooth
        return (1.0 - self.weight) + self.weight * smooth

    def sample(self, n: int) -> np.ndarray:
        return self(np.linspace(0.0, 1.0, n + 1))


SMOOTHSTEP = Cutoff("smoothstep")
IDENTITY = Cutoff("identity")


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Samples ``a[0..N]`` of a path in ``algebra`` on the uniform grid."""

    algebra: LieAlgebra
    samples: np.ndarray
    based: bool = False

    def __post_init__(self):
        x = np.array(self.samples, dtype=float)
        if x.ndim == 1 and self.algebra.dim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[1] != self.algebra.dim:
            raise ValueError(
                f"samples of shape {x.shape} do not fit an algebra of dim {self.algebra.dim}"
            )
        if x.shape[0] < 4:
            raise ValueError("a sampled path needs at least 4 nodes")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        if self.based and not self.check_based():
            raise ValueError("path is flagged as based but violates the boundary conditions")

    @property
    def n(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)

    def check_based(self, C: float = BASED_DERIVATIVE_CONSTANT) -> bool:
        """Zero end values and one-sided end derivatives of size at most ``C h``."""
        x, h = self.samples, self.h
        if np.any(x[0] != 0.0) or np.any(x[-1] != 0.0):
            return False
        d0 = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h)
        d1 = (3.0 * x[-1] - 4.0 * x[-2] + x[-3]) / (2.0 * h)
        return max(_max(d0), _max(d1)) <= C * h

    def __call__(self, t) -> np.ndarray:
        """Cubic-spline evaluation at arbitrary parameters in [0, 1]."""
        return resample(self.samples, t)

    def map(self, matrix, algebra: LieAlgebra) -> SampledPath:
        """Node-wise image under a linear map (``matrix`` is target x source)."""
        return SampledPath(algebra, self.samples @ np.asarray(matrix).T, based=False)

    def reversed_inverse(self) -> SampledPath:
        """The path ``-a(1 - t)``, which develops to the inverse endpoint."""
        return SampledPath(self.algebra, -self.samples[::-1], based=False)

    @classmethod
    def zero(cls, algebra: LieAlgebra, n: int = 8) -> SampledPath:
        return cls(algebra, np.zeros((n + 1, algebra.dim)), based=True)


def _check_grid_pair(x, y, name):
    if x.shape != y.shape:
        raise ValueError(f"{name}: shape mismatch {x.shape} vs {y.shape}")


@dataclass(frozen=True, eq=False)
class BigonData:
    """Grids ``a, b`` (h0-valued) and ``z`` (h1-valued) over (t, s) nodes."""

    context: StrictLie2Algebra
    a: np.ndarray
    b: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        a, b, z = (np.array(x, dtype=float) for x in (self.a, self.b, self.z))
        d0, d1 = self.context.dim0, self.context.dim1
        z = z.reshape(a.shape[:2] + (d1,))
        if a.ndim != 3 or a.shape[2] != d0:
            raise ValueError(f"a must have shape (N+1, M+1, {d0}), got {a.shape}")
        _check_grid_pair(a, b, "bigon a/b")
        if min(a.shape[:2]) < 4:
            raise ValueError("bigon grids need at least 4 nodes per direction")
        for name, x in (("a", a), ("b", b), ("z", z)):
            x.setflags(write=False)
            object.__setattr__(self, name, x)

    @property
    def N(self) -> int:
        return self.a.shape[0] - 1

    @property
    def M(self) -> int:
        return self.a.shape[1] - 1

    @property
    def ht(self) -> float:
        return 1.0 / self.N

    @property
    def hs(self) -> float:
        return 1.0 / self.M

    def source(self) -> SampledPath:
        return SampledPath(self.context.h0, self.a[:, 0])

    def target(self) -> SampledPath:
        return SampledPath(self.context.h0, self.a[:, -1])

    def boundary_defect(self) -> float:
        """Largest value of ``b`` or ``z`` on the faces t = 0 and t = 1."""
        return max(_max(self.b[[0, -1]]), _max(self.z[[0, -1]]))

    def magnitude(self) -> float:
        return max(_max(self.a), _max(self.b), _max(self.z))

    @classmethod
    def zero(cls, context: StrictLie2Algebra, N: int = 8, M: int | None = None) -> BigonData:
        M = N if M is None else M
        return cls(
            context,
            np.zeros((N + 1, M + 1, context.dim0)),
            np.zeros((N + 1, M + 1, context.dim0)),
            np.zeros((N + 1, M + 1, context.dim1)),
        )


def zero_faces(b, z):
    """Copies of ``b`` and ``z`` with the t = 0 and t = 1 faces set to zero."""
    b, z = np.array(b, dtype=float), np.array(z, dtype=float)
    b[[0, -1]] = 0.0
    z[[0, -1]] = 0.0
    return b, z


@dataclass(frozen=True, eq=False)
class CubeData:
    """A homotopy between bigons: six grids over (t, s, u) nodes."""

    context: StrictLie2Algebra
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "c", "x", "y", "z"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("b", "c"):
            _check_grid_pair(self.a, getattr(self, name), f"cube a/{name}")
        for name in ("y", "z"):
            _check_grid_pair(self.x, getattr(self, name), f"cube x/{name}")

    @property
    def steps(self) -> tuple[float, float, float]:
        return tuple(1.0 / (n - 1) for n in self.a.shape[:3])

    def boundary_defect(self) -> float:
        """Largest value of c, x, y on the t/s faces and of z on the t faces."""
        out = 0.0
        for arr in (self.c, self.x, self.y):
            out = max(out, _max(arr[[0, -1]]), _max(arr[:, [0, -1]]))
        return max(out, _max(self.z[[0, -1]]))

    @classmethod
    def constant(cls, B: BigonData, K: int = 8) -> CubeData:
        """The u-constant cube on a bigon (``c = x = y = 0``)."""
        rep = lambda arr: np.repeat(arr[:, :, None, :], K + 1, axis=2)
        zeros0 = np.zeros(B.a.shape[:2] + (K + 1, B.context.dim0))
        zeros1 = np.zeros(B.a.shape[:2] + (K + 1, B.context.dim1))
        return cls(B.context, rep(B.a), rep(B.b), zeros0, zeros1, zeros1.copy(), rep(B.z))


# -- residuals -----------------------------------------------------------------


def _d(f, axis, h):
    return np.gradient(f, h, axis=axis, edge_order=2)


def _interior(f, ndim):
    return f[(slice(1, -1),) * ndim]


def g_homotopy_residual(a, b, L: LieAlgebra) -> float:
    """``max |d_t b - d_s a - [a, b]|`` over interior nodes."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    _check_grid_pair(a, b, "g-homotopy a/b")
    ht, hs = 1.0 / (a.shape[0] - 1), 1.0 / (a.shape[1] - 1)
    r = _d(b, 0, ht) - _d(a, 1, hs) - L.bracket(a, b)
    return _max(_interior(r, 2))


def bigon_residual(B: BigonData) -> float:
    """``max |d_t b - d_s a - l2(a, b) - dM z|`` over interior nodes."""
    A = B.context
    r = _d(B.b, 0, B.ht) - _d(B.a, 1, B.hs) - A.l2(B.a, B.b) - A.d(B.z)
    return _max(_interior(r, 2))


def cube_residuals(C: CubeData) -> dict[str, float]:
    """Residuals of the four cube equations (keys ``abz``, ``cay``, ``cbx``, ``xyz``)."""
    A = C.context
    ht, hs, hu = C.steps
    dt = lambda f: _d(f, 0, ht)
    ds = lambda f: _d(f, 1, hs)
    du = lambda f: _d(f, 2, hu)
    a, b, c, x, y, z = C.a, C.b, C.c, C.x, C.y, C.z
    res = {
        "abz": dt(b) - ds(a) - A.l2(a, b) - A.d(z),
        "cay": dt(c) - du(a) - A.l2(a, c) - A.d(y),
        "cbx": ds(c) - du(b) - A.l2(b, c) - A.d(x),
        "xyz": du(z) - ds(y) + dt(x) - (A.act(a, x) - A.act(b, y) + A.act(c, z)),
    }
    return {k: _max(_interior(v, 3)) for k, v in res.items()}


def default_tolerance_constant(B: BigonData) -> float:
    """``10 (1 + max structure constant) (1 + max data magnitude)^2``."""
    return 10.0 * (1.0 + B.context.scale()) * (1.0 + B.magnitude()) ** 2


def bigon_tolerance(B: BigonData, C: float | None = None) -> float:
    C = default_tolerance_constant(B) if C is None else C
    return C * (B.ht**2 + B.hs**2)


# -- generators ------------------------------------------------------------------


def bump(t):
    """``30 t^2 (1 - t)^2``: zero value and slope at both ends, unit integral."""
    t = np.asarray(t, dtype=float)
    return 30.0 * t * t * (1.0 - t) ** 2


@dataclass(frozen=True, eq=False)
class PathGenerator:
    """Closed-form path: polynomial ``sum c_p t^p`` or sine series
    ``sum c_p sin((p+1) pi t)``, optionally multiplied by :func:`bump`."""

    kind: str
    coeffs: np.ndarray
    envelope: str = "none"

    def __post_init__(self):
        coeffs = np.atleast_2d(np.array(self.coeffs, dtype=float))
        if self.kind not in ("polynomial", "fourier"):
            raise ValueError(f"unknown path generator kind {self.kind!r}")
        if self.envelope not in ("none", "bump"):
            raise ValueError(f"unknown envelope {self.envelope!r}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        P = self.coeffs.shape[1]
        if self.kind == "polynomial":
            basis = t[..., None] ** np.arange(P)
        else:
            basis = np.sin(np.pi * np.arange(1, P + 1) * t[..., None])
        out = basis @ self.coeffs.T
        if self.envelope == "bump":
            out = out * bump(t)[..., None]
        return out

    def sample(self, algebra: LieAlgebra, n: int) -> SampledPath:
        x = self(np.linspace(0.0, 1.0, n + 1))
        if self.envelope == "bump":
            x[[0, -1]] = 0.0
        return SampledPath(algebra, x, based=self.envelope == "bump")


@dataclass(frozen=True, eq=False)
class SurfaceGenerator:
    """Closed-form surface vanishing at t = 0 and t = 1.

    ``polynomial``: ``t (1 - t) sum c[p, q] t^p s^q``;
    ``fourier``: ``sum c[p, q] sin((p+1) pi t) cos(q pi s)``.
    ``coeffs`` has shape (dim, P, Q).
    """

    kind: str
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 3:
            raise ValueError("surface coefficients must have shape (dim, P, Q)")
        if self.kind not in ("polynomial", "fourier"):
            raise ValueError(f"unknown surface generator kind {self.kind!r}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def _bases(self, t, s):
        P, Q = self.coeffs.shape[1:]
        p = np.arange(P)
        q = np.arange(Q)
        t = np.asarray(t, dtype=float)[..., None]
        s = np.asarray(s, dtype=float)[..., None]
        if self.kind == "polynomial":
            env = t * (1.0 - t)
            tp = env * t**p
            dtp = (1.0 - 2.0 * t) * t**p + env * p * t ** np.maximum(p - 1, 0)
            sq = s**q
        else:
            w = np.pi * (p + 1)
            tp = np.sin(w * t)
            dtp = w * np.cos(w * t)
            sq = np.cos(np.pi * q * s)
        return tp, dtp, sq

    def value(self, t, s) -> np.ndarray:
        tp, _, sq = self._bases(t, s)
        return np.einsum("...p,...q,kpq->...k", tp, sq, self.coeffs)

    def dt(self, t, s) -> np.ndarray:
        _, dtp, sq = self._bases(t, s)
        return np.einsum("...p,...q,kpq->...k", dtp, sq, self.coeffs)

    @classmethod
    def zero(cls, dim: int) -> SurfaceGenerator:
        return cls("fourier", np.zeros((dim, 1, 1)))


def _flow(l2, dM, a0, b_gen, z_gen, M, substeps):
    """Integrate ``d_s a = d_t b - l2(a, b) - dM z`` in s for every t node."""
    N = a0.shape[0] - 1
    t = np.linspace(0.0, 1.0, N + 1)
    h = 1.0 / (M * substeps)

    def rhs(s, a):
        ss = np.full_like(t, s)
        b = b_gen.value(t, ss)
        out = b_gen.dt(t, ss) - l2(a, b)
        if z_gen is not None:
            out = out - z_gen.value(t, ss) @ dM.T
        return out

    a = np.empty((N + 1, M + 1, a0.shape[1]))
    a[:, 0] = a0
    y = np.array(a0, dtype=float)
    for j in range(M):
        for k in range(substeps):
            s = (j * substeps + k) * h
            k1 = rhs(s, y)
            k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(s + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        a[:, j + 1] = y
    return a


def _surface_grid(gen, N, M):
    t, s = np.meshgrid(np.linspace(0.0, 1.0, N + 1), np.linspace(0.0, 1.0, M + 1), indexing="ij")
    return gen.value(t, s)


def flow_bigon(context: StrictLie2Algebra, a0, b_gen: SurfaceGenerator,
               z_gen: SurfaceGenerator, M: int, substeps: int = 2) -> BigonData:
    """A valid bigon from a source path and closed-form ``b``, ``z``.

    ``a`` is obtained by solving the defining equation as an ODE in ``s``
    (RK4 with ``substeps`` steps per grid cell), so the only discretization
    error left in :func:`bigon_residual` is the finite-difference one.
    """
    a0 = np.asarray(a0.samples if isinstance(a0, SampledPath) else a0, dtype=float)
    N = a0.shape[0] - 1
    a = _flow(context.l2, context.dM, a0, b_gen, z_gen, M, substeps)
    b, z = zero_faces(_surface_grid(b_gen, N, M), _surface_grid(z_gen, N, M))
    return BigonData(context, a, b, z)


def flow_homotopy(L: LieAlgebra, a0, b_gen: SurfaceGenerator, M: int, substeps: int = 2):
    """Grids ``(a, b)`` solving ``d_t b - d_s a = [a, b]`` with ``a(., 0) = a0``."""
    a0 = np.asarray(a0.samples if isinstance(a0, SampledPath) else a0, dtype=float)
    N = a0.shape[0] - 1
    a = _flow(L.bracket, np.zeros((L.dim, 0)), a0, b_gen, None, M, substeps)
    b = _surface_grid(b_gen, N, M)
    b[[0, -1]] = 0.0
    return a, b


def random_path_generator(dim: int, rng: np.random.Generator, scale: float = 0.5,
                          based: bool = True, terms: int = 3) -> PathGenerator:
    coeffs = scale * rng.standard_normal((dim, terms))
    if based:
        coeffs = coeffs / 2.0
    return PathGenerator("polynomial" if based else "fourier", coeffs,
                         envelope="bump" if based else "none")


def random_surface(dim: int, rng: np.random.Generator, scale: float = 0.5,
                   P: int = 2, Q: int = 2) -> SurfaceGenerator:
    decay = 1.0 / (1.0 + np.add.outer(np.arange(P), np.arange(Q)))
    return SurfaceGenerator("fourier", scale * rng.standard_normal((dim, P, Q)) * decay)


def random_bigon(context: StrictLie2Algebra, N: int, M: int, rng: np.random.Generator,
                 scale: float = 0.5, a0=None) -> BigonData:
    """A seeded valid bigon (based random source unless ``a0`` is given)."""
    if a0 is None:
        a0 = random_path_generator(context.dim0, rng, scale).sample(context.h0, N)
    b_gen = random_surface(context.dim0, rng, scale)
    z_gen = random_surface(context.dim1, rng, scale)
    return flow_bigon(context, a0, b_gen, z_gen, M)


# -- reparametrization and concatenation -------------------------------------------


def concat(p: SampledPath, q: SampledPath, cut: Cutoff = SMOOTHSTEP, n: int | None = None,
           require_based: bool = True) -> SampledPath:
    """``p (.) q``: run ``q`` on [0, 1/2], then ``p`` on [1/2, 1].

    The halves are ``2 tau'(2t) q(tau(2t))`` and ``2 tau'(2t - 1) p(tau(2t - 1))``;
    the output has ``n`` segments (default ``p.n + q.n``).
    """
    if not same_algebra(p.algebra, q.algebra):
        raise ValueError("cannot concatenate paths in different algebras")
    if require_based and not (p.based and q.based):
        raise ValueError("concatenation expects based paths (pass require_based=False to skip)")
    n = p.n + q.n if n is None else n
    t = np.linspace(0.0, 1.0, n + 1)
    first = t <= 0.5
    u = np.where(first, 2.0 * t, 2.0 * t - 1.0)
    out = np.empty((n + 1, p.algebra.dim))
    out[first] = 2.0 * cut.derivative(u[first])[:, None] * q(cut(u[first]))
    out[~first] = 2.0 * cut.derivative(u[~first])[:, None] * p(cut(u[~first]))
    based = cut.flat or (p.based and q.based)
    if based:
        out[[0, -1]] = 0.0
    return SampledPath(p.algebra, out, based=based and _flat_ends(out, n))


def _flat_ends(x, n):
    h = 1.0 / n
    d0 = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h)
    d1 = (3.0 * x[-1] - 4.0 * x[-2] + x[-3]) / (2.0 * h)
    return max(_max(d0), _max(d1)) <= BASED_DERIVATIVE_CONSTANT * h


def _resample_grid(values, T, S):
    """Separable cubic-spline evaluation of node data at parameters ``T`` x ``S``."""
    return resample(resample(values, T, axis=0), S, axis=1)


def reparametrize_bigon(B: BigonData, tau1: Cutoff = IDENTITY, tau2: Cutoff = IDENTITY) -> BigonData:
    """``(tau1' a, tau2' b, tau1' tau2' z)`` evaluated at ``(tau1(t), tau2(s))``."""
    t = np.linspace(0.0, 1.0, B.N + 1)
    s = np.linspace(0.0, 1.0, B.M + 1)
    T, S = tau1(t), tau2(s)
    ft = tau1.derivative(t)[:, None, None]
    fs = tau2.derivative(s)[None, :, None]
    a = ft * _resample_grid(B.a, T, S)
    b = fs * _resample_grid(B.b, T, S)
    z = ft * fs * _resample_grid(B.z, T, S)
    b, z = zero_faces(b, z)
    return BigonData(B.context, a, b, z)


def vertical_concat(B1: BigonData, B2: BigonData, cut: Cutoff = SMOOTHSTEP,
                    m: int | None = None, tol: float = 1e-12) -> BigonData:
    """Stack ``B1`` (s in [0, 1/2]) and then ``B2`` (s in [1/2, 1]).

    Requires the target slice of ``B1`` to match the source slice of ``B2``.
    """
    if not same_context(B1.context, B2.context):
        raise ValueError("bigons live over different 2-algebras")
    if B1.N != B2.N:
        raise ValueError(f"t-grids differ: {B1.N} vs {B2.N}")
    gap = _max(B1.a[:, -1] - B2.a[:, 0])
    if gap > tol:
        raise ValueError(f"target slice of B1 differs from source slice of B2 by {gap:.3e}")
    m = B1.M + B2.M if m is None else m
    s = np.linspace(0.0, 1.0, m + 1)
    first = s <= 0.5
    parts = []
    for sel, src, u in ((first, B1, 2.0 * s[first]), (~first, B2, 2.0 * s[~first] - 1.0)):
        S = cut(u)
        f = 2.0 * cut.derivative(u)[None, :, None]
        parts.append((
            resample(src.a, S, axis=1),
            f * resample(src.b, S, axis=1),
            f * resample(src.z, S, axis=1),
        ))
    a, b, z = (np.concatenate([p1, p2], axis=1) for p1, p2 in zip(*parts))
    b, z = zero_faces(b, z)
    return BigonData(B1.context, a, b, z)


def horizontal_concat(B: BigonData, Bd: BigonData, cut: Cutoff = SMOOTHSTEP,
                      n: int | None = None, m: int | None = None) -> BigonData:
    """Horizontal product: ``Bd`` on t in [0, 1/2], ``B`` on t in [1/2, 1].

    In s, ``Bd`` deforms its source during [0, 1/2] while ``B`` sits at its
    source; during [1/2, 1] ``Bd`` sits at its target and ``B`` deforms.
    Both halves are reparametrized in t by ``cut`` so the composite is
    smooth across the junction, and the t-domain [0, 2] is rescaled to
    [0, 1].  Default output grid: ``(B.N + Bd.N) x (B.M + Bd.M)`` segments.
    """
    if not same_context(B.context, Bd.context):
        raise ValueError("bigons live over different 2-algebras")
    n = B.N + Bd.N if n is None else n
    m = B.M + Bd.M if m is None else m
    d0, d1 = B.context.dim0, B.context.dim1
    t = np.linspace(0.0, 1.0, n + 1)
    s = np.linspace(0.0, 1.0, m + 1)
    a = np.zeros((n + 1, m + 1, d0))
    b = np.zeros((n + 1, m + 1, d0))
    z = np.zeros((n + 1, m + 1, d1))
    left = t <= 0.5
    low = s <= 0.5
    for tsel, src, ut, active in ((left, Bd, 2.0 * t[left], low), (~left, B, 2.0 * t[~left] - 1.0, ~low)):
        T = cut(ut)
        ft = 2.0 * cut.derivative(ut)[:, None, None]  # t-reparametrization and rescale
        ti = np.flatnonzero(tsel)
        # the moving part
        us = 2.0 * s[active] - (0.0 if src is Bd else 1.0)
        S = cut(us)
        fs = 2.0 * cut.derivative(us)[None, :, None]
        si = np.flatnonzero(active)
        a[np.ix_(ti, si)] = ft * _resample_grid(src.a, T, S)
        b[np.ix_(ti, si)] = fs * _resample_grid(src.b, T, S)
        z[np.ix_(ti, si)] = ft * fs * _resample_grid(src.z, T, S)
        # the resting part: Bd at its target, B at its source
        rest = np.flatnonzero(~active)
        edge = src.a[:, -1] if src is Bd else src.a[:, 0]
        a[np.ix_(ti, rest)] = (ft[:, :, 0] * resample(edge, T, axis=0))[:, None, :]
    b, z = zero_faces(b, z)
    return BigonData(B.context, a, b, z)


def same_context(A1: StrictLie2Algebra, A2: StrictLie2Algebra) -> bool:
    return A1 is A2 or (
        A1.dM.shape == A2.dM.shape
        and all(np.allclose(x, y, rtol=0.0, atol=1e-12)
                for x, y in ((A1.dM, A2.dM), (A1.l2_00, A2.l2_00), (A1.l2_01, A2.l2_01)))
    )
