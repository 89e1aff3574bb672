"""Finite-dimensional Lie algebras, crossed modules and strict Lie 2-algebras.

Everything is stored in a fixed basis.  A Lie algebra is its structure
constants ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``; maps
are plain matrices (target dim x source dim); actions are 3-index arrays
``phi[u, m, n]`` with ``phi_{e_u}(f_m) = sum_n phi[u, m, n] f_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

NULLSPACE_THRESHOLD = 1e-9


def _max(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A Lie algebra given by structure constants in a fixed basis."""

    c: np.ndarray
    label: str = ""

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim == 1 and c.size == 0:
            c = c.reshape(0, 0, 0)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ValueError(f"structure constants must have shape (n, n, n), got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of coordinate arrays; leading axes broadcast."""
        return np.einsum("...i,...j,ijk->...k", x, y, self.c)

    def ad(self, x) -> np.ndarray:
        """Matrix of ``[x, .]`` acting on column coordinates."""
        return np.einsum("...i,ijk->...kj", x, self.c)

    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(np.asarray(coords, dtype=float), self)

    def basis(self, i: int) -> AlgebraElement:
        return self.element(np.eye(self.dim)[i])

    def __repr__(self):
        return f"LieAlgebra({self.label or 'unnamed'}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    coords: np.ndarray
    algebra: LieAlgebra

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (self.algebra.dim,):
            raise ValueError(
                f"coordinate vector of length {coords.shape} does not match "
                f"algebra dimension {self.algebra.dim}"
            )
        object.__setattr__(self, "coords", coords)

    def __add__(self, other):
        _same_algebra(self.algebra, other.algebra)
        return AlgebraElement(self.coords + other.coords, self.algebra)

    def __sub__(self, other):
        _same_algebra(self.algebra, other.algebra)
        return AlgebraElement(self.coords - other.coords, self.algebra)

    def __mul__(self, scalar):
        return AlgebraElement(scalar * self.coords, self.algebra)

    __rmul__ = __mul__


def same_algebra(a: LieAlgebra, b: LieAlgebra, atol: float = 1e-12) -> bool:
    """Identical objects, or structure constants equal up to ``atol``."""
    return a is b or (a.dim == b.dim and np.allclose(a.c, b.c, rtol=0.0, atol=atol))


def _same_algebra(a: LieAlgebra, b: LieAlgebra):
    if not same_algebra(a, b):
        raise ValueError(f"elements belong to different algebras: {a!r} vs {b!r}")


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _same_algebra(x.algebra, y.algebra)
    return AlgebraElement(x.algebra.bracket(x.coords, y.coords), x.algebra)


def antisymmetry_residual(c) -> float:
    c = np.asarray(c)
    return _max(c + c.transpose(1, 0, 2))


def jacobi_tensor(c) -> np.ndarray:
    """``J[i, j, k, l]``: coefficient of e_l in the cyclic Jacobi sum on (e_i, e_j, e_k)."""
    c = np.asarray(c)
    t = np.einsum("ijm,mkl->ijkl", c, c)
    return t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)


def jacobi_residual(L) -> float:
    """Max-norm of the Jacobi expression over all basis triples."""
    c = L.c if isinstance(L, LieAlgebra) else np.asarray(L)
    return _max(jacobi_tensor(c))


def nullspace(A, threshold: float = NULLSPACE_THRESHOLD):
    """Orthonormal basis (rows) of the kernel of ``A`` plus SVD diagnostics.

    Singular values at or below ``threshold * max(1, s_max)`` count as zero.
    The diagnostics record the smallest kept and largest dropped singular
    value so that an ambiguous gap is visible to the caller.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        return np.eye(n), {"rank": 0, "smallest_kept": None, "largest_dropped": None}
    _, s, vh = np.linalg.svd(A)
    cut = threshold * max(1.0, float(s[0]) if s.size else 0.0)
    rank = int(np.sum(s > cut))
    info = {
        "rank": rank,
        "smallest_kept": float(s[rank - 1]) if rank > 0 else None,
        "largest_dropped": float(s[rank]) if rank < s.size else 0.0,
        "threshold": cut,
    }
    return vh[rank:].copy(), info


@dataclass(frozen=True, eq=False)
class LieAlgCrossedModule:
    """A crossed module ``(h1, h0, dt, phi)`` of Lie algebras."""

    h1: LieAlgebra
    h0: LieAlgebra
    dt: np.ndarray
    phi: np.ndarray
    label: str = ""
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        d0, d1 = self.h0.dim, self.h1.dim
        dt = np.array(self.dt, dtype=float).reshape(d0, d1)
        phi = np.array(self.phi, dtype=float).reshape(d0, d1, d1)
        dt.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "phi", phi)

    def action(self, u, m) -> np.ndarray:
        """``phi_u(m)`` on coordinate arrays."""
        return np.einsum("...u,...m,umn->...n", u, m, self.phi)

    def action_matrix(self, u) -> np.ndarray:
        """Matrix of ``phi_u`` acting on column coordinates of h1."""
        return np.einsum("...u,umn->...nm", u, self.phi)


def check_alg_crossed_module(cm: LieAlgCrossedModule) -> dict[str, float]:
    """Max residuals of the four crossed-module axioms on basis tuples."""
    c0, c1, dt, phi = cm.h0.c, cm.h1.c, cm.dt, cm.phi
    # phi_u[m, n] = [phi_u m, n] + [m, phi_u n]
    lhs = np.einsum("mnk,ukl->umnl", c1, phi)
    rhs = np.einsum("umk,knl->umnl", phi, c1) + np.einsum("unk,mkl->umnl", phi, c1)
    derivation = _max(lhs - rhs)
    # phi_[u,v] = phi_u phi_v - phi_v phi_u  (composition read on the m index)
    lhs = np.einsum("uvw,wmn->uvmn", c0, phi)
    comp = np.einsum("vmk,ukn->uvmn", phi, phi)
    morphism = _max(lhs - (comp - comp.transpose(1, 0, 2, 3)))
    # dt(phi_u m) = [u, dt m]
    lhs = np.einsum("umn,wn->umw", phi, dt)
    rhs = np.einsum("wm,uwk->umk", dt, c0)
    equivariance = _max(lhs - rhs)
    # phi_{dt m}(n) = [m, n]
    peiffer = _max(np.einsum("um,unk->mnk", dt, phi) - c1)
    return {
        "derivation": derivation,
        "morphism": morphism,
        "equivariance": equivariance,
        "peiffer": peiffer,
    }


@dataclass(frozen=True, eq=False)
class StrictLie2Algebra:
    """A 2-term L-infinity algebra with vanishing ternary bracket.

    ``dM`` maps h1 -> h0, ``l2_00`` is the bracket on h0 and ``l2_01[u, m, n]``
    the action of h0 on h1.  ``l2`` vanishes on h1 x h1.
    """

    dM: np.ndarray
    l2_00: np.ndarray
    l2_01: np.ndarray
    label: str = ""
    origin: LieAlgCrossedModule | None = field(default=None, repr=False)

    def __post_init__(self):
        l2_00 = np.array(self.l2_00, dtype=float)
        d0 = l2_00.shape[0]
        dM = np.array(self.dM, dtype=float)
        d1 = dM.shape[1] if dM.ndim == 2 else 0
        dM = dM.reshape(d0, d1)
        l2_01 = np.array(self.l2_01, dtype=float).reshape(d0, d1, d1)
        for arr in (dM, l2_00, l2_01):
            arr.setflags(write=False)
        object.__setattr__(self, "dM", dM)
        object.__setattr__(self, "l2_00", l2_00.reshape(d0, d0, d0))
        object.__setattr__(self, "l2_01", l2_01)

    @property
    def dim0(self) -> int:
        return self.dM.shape[0]

    @property
    def dim1(self) -> int:
        return self.dM.shape[1]

    @cached_property
    def h0(self) -> LieAlgebra:
        return LieAlgebra(self.l2_00, label=f"{self.label}.h0" if self.label else "h0")

    @cached_property
    def h1(self) -> LieAlgebra:
        """h1 with its induced bracket ``[m, n] = l2(dM m, n)``."""
        c1 = np.einsum("um,unk->mnk", self.dM, self.l2_01)
        return LieAlgebra(c1, label=f"{self.label}.h1" if self.label else "h1")

    def l2(self, u, v) -> np.ndarray:
        """``l2`` on h0 x h0 (coordinate arrays, leading axes broadcast)."""
        return np.einsum("...u,...v,uvw->...w", u, v, self.l2_00)

    def act(self, u, m) -> np.ndarray:
        """``l2(u, m)`` for u in h0, m in h1."""
        return np.einsum("...u,...m,umn->...n", u, m, self.l2_01)

    def act_matrix(self, u) -> np.ndarray:
        return np.einsum("...u,umn->...nm", u, self.l2_01)

    def d(self, m) -> np.ndarray:
        """Apply ``dM`` to h1 coordinate arrays."""
        return np.einsum("...m,um->...u", m, self.dM)

    def scale(self) -> float:
        """Largest structure-constant magnitude (used for default tolerances)."""
        return max(_max(self.dM), _max(self.l2_00), _max(self.l2_01))


def check_strict_2algebra(A: StrictLie2Algebra) -> dict[str, float]:
    """Residuals of the strict Lie 2-algebra axioms on basis tuples.

    ``h0_antisymmetry``/``h0_jacobi`` concern l2 on h0; ``graded_jacobi`` is
    ``l2(u, l2(v, m)) - l2(v, l2(u, m)) - l2(l2(u, v), m)``; ``dM_equivariance``
    is ``dM l2(u, m) - l2(u, dM m)``; ``h1_antisymmetry`` is the symmetric part
    of ``l2(dM m, n)`` (forced by the degree-2 L-infinity relation).
    """
    c0, dM, l2 = A.l2_00, A.dM, A.l2_01
    lhs = np.einsum("uvw,wmn->uvmn", c0, l2)
    comp = np.einsum("vmk,ukn->uvmn", l2, l2)
    graded = _max(comp - comp.transpose(1, 0, 2, 3) - lhs)
    equiv = _max(np.einsum("umn,wn->umw", l2, dM) - np.einsum("wm,uwk->umk", dM, c0))
    c1 = np.einsum("um,unk->mnk", dM, l2)
    return {
        "h0_antisymmetry": antisymmetry_residual(c0),
        "h0_jacobi": jacobi_residual(c0),
        "graded_jacobi": graded,
        "dM_equivariance": equiv,
        "h1_antisymmetry": antisymmetry_residual(c1),
    }


def crossed_module_to_2algebra(cm: LieAlgCrossedModule, tol: float = 1e-10) -> StrictLie2Algebra:
    res = check_alg_crossed_module(cm)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise ValueError(f"not a crossed module of Lie algebras: {bad}")
    return StrictLie2Algebra(dM=cm.dt, l2_00=cm.h0.c, l2_01=cm.phi, label=cm.label, origin=cm)


def twoalgebra_to_crossed_module(A: StrictLie2Algebra, tol: float = 1e-10) -> LieAlgCrossedModule:
    """Crossed module with ``dt = dM``, ``phi = l2`` and ``[m, n] := l2(dM m, n)``."""
    h1 = A.h1
    residual = max(jacobi_residual(h1), antisymmetry_residual(h1.c))
    if residual > tol:
        raise ValueError(f"reconstructed h1 bracket is not a Lie bracket (residual {residual:.3e})")
    cm = A.origin
    if cm is not None and same_algebra(cm.h1, h1, atol=tol):
        # hand back the original algebras so the round trip is exact on data
        return LieAlgCrossedModule(h1=cm.h1, h0=cm.h0, dt=A.dM, phi=A.l2_01, label=A.label,
                                   diagnostics=cm.diagnostics)
    return LieAlgCrossedModule(h1=h1, h0=A.h0, dt=A.dM, phi=A.l2_01, label=A.label)


def semidirect(A: StrictLie2Algebra) -> LieAlgebra:
    """h0 (+) h1 with ``[u+m, v+n] = l2(u,v) + l2(u,n) - l2(v,m) + l2(dM m, n)``."""
    d0, d1 = A.dim0, A.dim1
    c = np.zeros((d0 + d1,) * 3)
    c[:d0, :d0, :d0] = A.l2_00
    c[:d0, d0:, d0:] = A.l2_01
    c[d0:, :d0, d0:] = -A.l2_01.transpose(1, 0, 2)
    c[d0:, d0:, d0:] = A.h1.c
    return LieAlgebra(c, label=f"{A.label}.semidirect" if A.label else "semidirect")


def _project(vectors, basis) -> np.ndarray:
    """Coordinates of flattened ``vectors`` in an orthonormal row ``basis``."""
    vectors = np.asarray(vectors)
    flat = vectors.reshape(vectors.shape[0], -1) if vectors.ndim > 1 else vectors[None]
    return flat @ basis.T


def derivation_basis(k: LieAlgebra, threshold: float = NULLSPACE_THRESHOLD):
    """Orthonormal basis of Der(k) as matrices acting on column coordinates.

    Solves ``D[e_i, e_j] = [D e_i, e_j] + [e_i, D e_j]`` for ``D`` (a
    dim^3 x dim^2 linear system) by singular-value nullspace extraction.
    """
    n = k.dim
    c = k.c
    eye = np.eye(n)
    # unknown D[p, q] flattened as p * n + q; equation index (i, j, l)
    sys = (
        np.einsum("ijq,lp->ijlpq", c, eye)
        - np.einsum("qi,pjl->ijlpq", eye, c)
        - np.einsum("qj,ipl->ijlpq", eye, c)
    ).reshape(n**3, n * n)
    basis, info = nullspace(sys, threshold)
    return basis.reshape(-1, n, n), info


def derivation_crossed_module(k: LieAlgebra, threshold: float = NULLSPACE_THRESHOLD) -> LieAlgCrossedModule:
    """The crossed module ``(k, Der(k), ad, Id)``.

    ``Der(k)`` gets the orthonormal nullspace basis of :func:`derivation_basis`;
    its structure constants come from projecting commutators back onto that
    basis.  ``diagnostics`` carries the SVD gap and the projection defect.
    """
    D, info = derivation_basis(k, threshold)
    n, r = k.dim, D.shape[0]
    flat = D.reshape(r, n * n)
    comm = np.einsum("apq,bqr->abpr", D, D)
    comm = comm - comm.transpose(1, 0, 2, 3)
    cder = (comm.reshape(r * r, n * n) @ flat.T).reshape(r, r, r)
    ad = k.ad(np.eye(n))  # ad[m] is the matrix of [e_m, .]
    dt = (ad.reshape(n, n * n) @ flat.T).T
    closure = max(
        _max(np.einsum("abc,cpq->abpq", cder, D) - comm),
        _max(np.einsum("am,apq->mpq", dt, D) - ad),
    )
    der = LieAlgebra(cder, label=f"der({k.label})" if k.label else "der")
    diagnostics = dict(info, projection_defect=closure, basis=D)
    return LieAlgCrossedModule(
        h1=k, h0=der, dt=dt, phi=D.transpose(0, 2, 1), label=f"{k.label}->der({k.label})",
        diagnostics=diagnostics,
    )


@dataclass(frozen=True, eq=False)
class TwoTermComplex:
    """``V1 --dM--> V0``; ``dM`` has shape (dim V0, dim V1)."""

    dM: np.ndarray

    def __post_init__(self):
        dM = np.array(self.dM, dtype=float)
        if dM.ndim != 2:
            raise ValueError(f"dM must be a matrix, got shape {dM.shape}")
        object.__setattr__(self, "dM", dM)

    @classmethod
    def zero(cls, dim0: int, dim1: int) -> TwoTermComplex:
        return cls(np.zeros((dim0, dim1)))

    @property
    def dim0(self) -> int:
        return self.dM.shape[0]

    @property
    def dim1(self) -> int:
        return self.dM.shape[1]


@dataclass(frozen=True, eq=False)
class EndAlgebra(StrictLie2Algebra):
    """End(V) with the concrete bases it was built from.

    ``basis0`` holds pairs ``(A0, A1)`` spanning End^0 (orthonormal in the
    Frobenius sense); End^1 = Hom(V0, V1) uses matrix units ``E[i, j]``
    flattened row-major.
    """

    complex: TwoTermComplex | None = None
    basis0_A0: np.ndarray | None = None
    basis0_A1: np.ndarray | None = None

    def end0_coords(self, A0, A1) -> tuple[np.ndarray, float]:
        """Coordinates of ``(A0, A1)`` in End^0 and the distance to End^0."""
        p, q = self.complex.dim0, self.complex.dim1
        A0 = np.asarray(A0, dtype=float)
        A1 = np.asarray(A1, dtype=float)
        count = A0.shape[0] if A0.ndim == 3 else A1.shape[0]
        A0 = A0.reshape(count, p * p)
        A1 = A1.reshape(count, q * q)
        flat = np.concatenate([A0, A1], axis=1)
        basis = self._flat_basis0()
        coords = flat @ basis.T
        return coords, _max(coords @ basis - flat)

    def _flat_basis0(self) -> np.ndarray:
        k = self.basis0_A0.shape[0]
        p, q = self.complex.dim0, self.complex.dim1
        return np.concatenate(
            [self.basis0_A0.reshape(k, p * p), self.basis0_A1.reshape(k, q * q)], axis=1
        )


def end_complex(V: TwoTermComplex, threshold: float = NULLSPACE_THRESHOLD) -> EndAlgebra:
    """The strict Lie 2-algebra End(V) of a 2-term complex.

    End^0 = {(A0, A1) : A0 dM = dM A1} (nullspace basis), End^1 = Hom(V0, V1);
    brackets are commutators, and ``m`` maps to ``(dM m, m dM)``.
    """
    p, q = V.dim0, V.dim1
    dM = V.dM
    # unknowns: A0 (p*p, row-major) then A1 (q*q); equations A0 dM - dM A1 (p*q)
    sys0 = np.einsum("ia,bj->ijab", np.eye(p), dM).reshape(p * q, p * p)
    sys1 = -np.einsum("ia,jb->ijab", dM, np.eye(q)).reshape(p * q, q * q)
    basis, _ = nullspace(np.concatenate([sys0, sys1], axis=1), threshold)
    k = basis.shape[0]
    B0 = basis[:, : p * p].reshape(k, p, p)
    B1 = basis[:, p * p :].reshape(k, q, q)

    def coords(A0, A1):
        count = A0.shape[0]
        flat = np.concatenate([A0.reshape(count, p * p), A1.reshape(count, q * q)], axis=1)
        return flat @ basis.T

    c0 = np.einsum("apq,bqr->abpr", B0, B0)
    c1 = np.einsum("apq,bqr->abpr", B1, B1)
    c0 = (c0 - c0.transpose(1, 0, 2, 3)).reshape(k * k, p, p)
    c1 = (c1 - c1.transpose(1, 0, 2, 3)).reshape(k * k, q, q)
    l2_00 = coords(c0, c1).reshape(k, k, k)

    E = np.eye(q * p).reshape(q * p, q, p)  # matrix units of Hom(V0, V1)
    act = np.einsum("aij,rjk->arik", B1, E) - np.einsum("rij,ajk->arik", E, B0)
    l2_01 = act.reshape(k, q * p, q * p)
    dE0 = np.einsum("ij,rjk->rik", dM, E)  # dM o m : V0 -> V0
    dE1 = np.einsum("rij,jk->rik", E, dM)  # m o dM : V1 -> V1
    dM_end = coords(dE0, dE1).T
    return EndAlgebra(
        dM=dM_end, l2_00=l2_00, l2_01=l2_01, label="End(V)",
        complex=V, basis0_A0=B0, basis0_A1=B1,
    )
