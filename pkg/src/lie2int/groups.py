"""Matrix realizations, path development and the integrated crossed module.

Group elements are matrices obtained by developing algebra paths, i.e. by
solving ``g' = rho(a(t)) g`` with ``g(0) = I``.  Each element remembers the
path it came from, because the action of H0 on H1 is defined path-wise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._ode import rk4_linear
from .algebra import (
    LieAlgCrossedModule,
    LieAlgebra,
    StrictLie2Algebra,
    _max,
    crossed_module_to_2algebra,
    same_algebra,
)
from .paths import SMOOTHSTEP, Cutoff, SampledPath, concat, random_path_generator

REALIZATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MatrixRealization:
    """Generator matrices ``rho(e_i)`` of a representation of ``algebra``.

    ``simply_connected`` records whether the matrix group generated is the
    simply connected group of the algebra; only then does equality of
    developed endpoints decide homotopy of paths.
    """

    algebra: LieAlgebra
    matrices: np.ndarray
    faithful: bool = True
    simply_connected: bool = False
    label: str = ""

    def __post_init__(self):
        mats = np.array(self.matrices, dtype=float)
        d = self.algebra.dim
        if mats.ndim != 3 or mats.shape[0] != d or mats.shape[1] != mats.shape[2]:
            raise ValueError(f"expected {d} square generator matrices, got shape {mats.shape}")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)
        res = self.residual()
        if res > REALIZATION_TOL * (1.0 + _max(mats)) ** 2:
            raise ValueError(f"generators do not satisfy the algebra relations (residual {res:.3e})")

    @property
    def rep_dim(self) -> int:
        return self.matrices.shape[1]

    def rho(self, x) -> np.ndarray:
        return np.einsum("...i,imn->...mn", np.asarray(x, dtype=float), self.matrices)

    def residual(self) -> float:
        """``max |rho[e_i, e_j] - [rho e_i, rho e_j]|`` over basis pairs."""
        R = self.matrices
        comm = np.einsum("imn,jnk->ijmk", R, R)
        comm = comm - comm.transpose(1, 0, 2, 3)
        return _max(np.einsum("ijk,kmn->ijmn", self.algebra.c, R) - comm)

    def identity(self) -> GroupElement:
        return GroupElement(np.eye(self.rep_dim), self, SampledPath.zero(self.algebra))


def adjoint_realization(L: LieAlgebra) -> MatrixRealization:
    """``e_i -> ad(e_i)``; faithful only for centreless algebras."""
    mats = L.ad(np.eye(L.dim))
    centre = L.dim - np.linalg.matrix_rank(mats.reshape(L.dim, -1)) if L.dim else 0
    return MatrixRealization(L, mats, faithful=centre == 0, simply_connected=False,
                             label=f"ad({L.label})")


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A matrix in the group generated by ``realization``, with its source path."""

    matrix: np.ndarray
    realization: MatrixRealization
    path: SampledPath | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (self.realization.rep_dim,) * 2:
            raise ValueError(f"matrix of shape {m.shape} does not fit the realization")
        if not np.all(np.isfinite(m)):
            raise ValueError("group element has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        if other.realization is not self.realization:
            raise ValueError("cannot multiply elements of different realizations")
        path = None
        if self.path is not None and other.path is not None:
            path = concat(self.path, other.path, require_based=False)
        return GroupElement(self.matrix @ other.matrix, self.realization, path)

    def inverse(self) -> GroupElement:
        path = None if self.path is None else self.path.reversed_inverse()
        return GroupElement(np.linalg.inv(self.matrix), self.realization, path)

    def distance(self, other: GroupElement) -> float:
        return _max(self.matrix - other.matrix)


def develop(a: SampledPath, R: MatrixRealization):
    """Solve ``g' = rho(a(t)) g``, ``g(0) = I`` with RK4 on the sample grid.

    Returns the trajectory ``g[0..N]`` and the endpoint (carrying ``a``).
    """
    if not same_algebra(a.algebra, R.algebra):
        raise ValueError(f"path lives in {a.algebra!r}, realization is of {R.algebra!r}")
    g = rk4_linear(R.rho(a.samples), np.eye(R.rep_dim), a.h)
    return g, GroupElement(g[-1], R, a)


def endpoint(a: SampledPath, R: MatrixRealization) -> GroupElement:
    return develop(a, R)[1]


@dataclass(frozen=True)
class ClassComparison:
    """Verdict of an endpoint comparison; truthy iff ``equal``.

    ``sound`` is False when the realization is not simply connected, in which
    case a positive verdict is only a necessary condition for homotopy.
    """

    equal: bool
    discrepancy: float
    sound: bool

    def __bool__(self):
        return self.equal


def path_class_equal(p: SampledPath, q: SampledPath, R: MatrixRealization,
                     tol: float = 1e-6) -> ClassComparison:
    gap = endpoint(p, R).distance(endpoint(q, R))
    equal = gap <= tol
    return ClassComparison(equal, gap, sound=R.simply_connected or not equal)


def action_propagator(a: SampledPath, action_matrices) -> np.ndarray:
    """Endpoint ``W(1)`` of ``W' = A(t) W``, ``W(0) = I``."""
    A = np.asarray(action_matrices)
    return rk4_linear(A, np.eye(A.shape[-1]), a.h)[-1]


def act_element(a: SampledPath, v, cm: LieAlgCrossedModule) -> np.ndarray:
    """``w(1)`` for ``w' = phi_{a(t)} w``, ``w(0) = v``."""
    v = np.asarray(getattr(v, "coords", v), dtype=float)
    w = rk4_linear(cm.action_matrix(a.samples), v, a.h, vector=True)
    return w[-1]


def act_path(a: SampledPath, v: SampledPath, cm: LieAlgCrossedModule) -> SampledPath:
    """``s -> w(1, s)`` where each ``w(., s)`` solves ``w' = phi_{a(t)} w`` from ``v(s)``.

    The equation is linear in the initial value, so one propagator serves
    every ``s``.
    """
    W = action_propagator(a, cm.action_matrix(a.samples))
    return SampledPath(cm.h1, v.samples @ W.T, based=v.based)


def Phi_action(a: SampledPath, v: SampledPath, gcm: GrpCrossedModule) -> GroupElement:
    """``Phi_[a]([v])``: the development in H1 of the transported path."""
    return endpoint(act_path(a, v, gcm.cm), gcm.R1)


@dataclass(frozen=True, eq=False)
class GrpCrossedModule:
    """Integrated crossed module ``(H1, H0, t, Phi)`` on matrix realizations."""

    cm: LieAlgCrossedModule
    R0: MatrixRealization
    R1: MatrixRealization
    label: str = ""
    two_algebra: StrictLie2Algebra = field(init=False, repr=False)

    def __post_init__(self):
        if not same_algebra(self.R0.algebra, self.cm.h0):
            raise ValueError("R0 does not realize h0 of the crossed module")
        if not same_algebra(self.R1.algebra, self.cm.h1):
            raise ValueError("R1 does not realize h1 of the crossed module")
        object.__setattr__(self, "two_algebra", crossed_module_to_2algebra(self.cm, tol=np.inf))

    def t(self, h: GroupElement) -> GroupElement:
        """Group-level boundary: develop ``dt`` applied to the path of ``h``."""
        return endpoint(_path_of(h).map(self.cm.dt, self.cm.h0), self.R0)

    def Phi(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return Phi_action(_path_of(g), _path_of(h), self)

    def identity(self) -> TwoGroupElt:
        return TwoGroupElt(self.R0.identity(), self.R1.identity(), self)

    @property
    def sound(self) -> bool:
        return self.R0.simply_connected and self.R1.simply_connected


def _path_of(x: GroupElement) -> SampledPath:
    if x.path is None:
        raise ValueError("group element carries no representing path")
    return x.path


@dataclass(frozen=True, eq=False)
class TwoGroupElt:
    """An arrow ``(g, h)`` of the strict 2-group ``H0 x| H1``."""

    g: GroupElement
    h: GroupElement
    parent: GrpCrossedModule

    def __post_init__(self):
        if self.g.realization is not self.parent.R0 or self.h.realization is not self.parent.R1:
            raise ValueError("arrow components use realizations foreign to the crossed module")

    def distance(self, other: TwoGroupElt) -> float:
        return max(self.g.distance(other.g), self.h.distance(other.h))


def source_target(x: TwoGroupElt, gcm: GrpCrossedModule | None = None):
    """``(g, t(h) g)``."""
    gcm = x.parent if gcm is None else gcm
    return x.g, gcm.t(x.h) @ x.g


def two_group_vertical(x: TwoGroupElt, y: TwoGroupElt, tol: float = 1e-8) -> TwoGroupElt:
    """``(g', h') . (g, h) = (g, h' h)``; needs ``g' = t(h) g``."""
    if x.parent is not y.parent:
        raise ValueError("arrows belong to different 2-groups")
    _, target = source_target(y)
    gap = target.distance(x.g)
    if gap > tol:
        raise ValueError(f"arrows are not composable: |t(h) g - g'| = {gap:.3e}")
    return TwoGroupElt(y.g, x.h @ y.h, x.parent)


def two_group_horizontal(x: TwoGroupElt, y: TwoGroupElt) -> TwoGroupElt:
    """``(g, h) . (g', h') = (g g', h Phi_g(h'))``."""
    if x.parent is not y.parent:
        raise ValueError("arrows belong to different 2-groups")
    return TwoGroupElt(x.g @ y.g, x.h @ x.parent.Phi(x.g, y.h), x.parent)


def check_grp_crossed_module(gcm: GrpCrossedModule, sample_count: int = 8, seed: int = 0,
                             n: int = 256, scale: float = 0.5) -> dict[str, float]:
    """Both sides of equivariance and Peiffer at group level on random elements.

    ``equivariance``: ``t(Phi_g(h)) = g t(h) g^-1``;
    ``peiffer``: ``Phi_{t(h)}(h') = h h' h^-1``.
    """
    rng = np.random.default_rng(seed)
    cm = gcm.cm
    eq = pf = 0.0
    for _ in range(sample_count):
        g = endpoint(random_path_generator(cm.h0.dim, rng, scale).sample(cm.h0, n), gcm.R0)
        h = endpoint(random_path_generator(cm.h1.dim, rng, scale).sample(cm.h1, n), gcm.R1)
        h2 = endpoint(random_path_generator(cm.h1.dim, rng, scale).sample(cm.h1, n), gcm.R1)
        lhs = gcm.t(gcm.Phi(g, h)).matrix
        rhs = g.matrix @ gcm.t(h).matrix @ np.linalg.inv(g.matrix)
        eq = max(eq, _max(lhs - rhs))
        lhs = gcm.Phi(gcm.t(h), h2).matrix
        rhs = h.matrix @ h2.matrix @ np.linalg.inv(h.matrix)
        pf = max(pf, _max(lhs - rhs))
    return {"equivariance": eq, "peiffer": pf}


def transported_family(L: LieAlgebra, c: SampledPath, a0: SampledPath, M: int,
                       sigma: Cutoff = SMOOTHSTEP):
    """Flat pair ``(a, b)`` of the family ``g(t, s) = k(s sigma(t)) g0(t)``.

    ``k`` develops ``c`` and ``g0`` develops ``a0``; then

        a = s sigma'(t) c(s sigma(t)) + Ad_{k(s sigma(t))} a0(t),
        b = sigma(t) c(s sigma(t)),

    which satisfy ``d_t b - d_s a = [a, b]`` identically.  ``Ad`` is obtained
    in the algebra by integrating ``K' = sigma(t) ad(c(s sigma(t))) K`` in s.
    """
    N = a0.n
    t = np.linspace(0.0, 1.0, N + 1)
    s = np.linspace(0.0, 1.0, M + 1)
    sig, dsig = sigma(t), sigma.derivative(t)
    R = s[:, None] * sig[None, :]  # (M+1, N+1)
    c_nodes = c(R)
    R_mid = (s[:-1, None] + 0.5 / M) * sig[None, :]
    K_coef = sig[None, :, None, None] * L.ad(c_nodes)
    K_mid = sig[None, :, None, None] * L.ad(c(R_mid))
    K = rk4_linear(K_coef, np.eye(L.dim), 1.0 / M, A_mid=K_mid)  # (M+1, N+1, d, d)
    ad_a0 = np.einsum("sthk,tk->sth", K, a0.samples)
    a = s[:, None, None] * dsig[None, :, None] * c_nodes + ad_a0
    b = sig[None, :, None] * c_nodes
    return a.transpose(1, 0, 2).copy(), b.transpose(1, 0, 2).copy()


__all__ = [
    "MatrixRealization",
    "GroupElement",
    "GrpCrossedModule",
    "TwoGroupElt",
    "ClassComparison",
    "adjoint_realization",
    "develop",
    "endpoint",
    "path_class_equal",
    "act_element",
    "act_path",
    "Phi_action",
    "source_target",
    "two_group_vertical",
    "two_group_horizontal",
    "check_grp_crossed_module",
    "transported_family",
]
