"""Built-in Lie algebras, matrix realizations and crossed modules."""

from __future__ import annotations

import numpy as np

from .algebra import (
    LieAlgCrossedModule,
    LieAlgebra,
    TwoTermComplex,
    derivation_crossed_module,
)
from .groups import GrpCrossedModule, MatrixRealization, adjoint_realization


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(np.zeros((n, n, n)), label=f"abelian{n}")


def so3() -> LieAlgebra:
    """``[e_i, e_j] = eps_ijk e_k``."""
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    return LieAlgebra(c, label="so3")


def sl2() -> LieAlgebra:
    """Basis (H, E, F): ``[H, E] = 2E``, ``[H, F] = -2F``, ``[E, F] = H``."""
    c = np.zeros((3, 3, 3))
    c[0, 1, 1], c[1, 0, 1] = 2.0, -2.0
    c[0, 2, 2], c[2, 0, 2] = -2.0, 2.0
    c[1, 2, 0], c[2, 1, 0] = 1.0, -1.0
    return LieAlgebra(c, label="sl2")


def heisenberg() -> LieAlgebra:
    """Basis (X, Y, Z): ``[X, Y] = Z``, Z central."""
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    return LieAlgebra(c, label="heisenberg")


def builtin_algebra(name: str) -> LieAlgebra:
    """``so3``, ``sl2``, ``heisenberg`` or ``abelian<n>``."""
    if name.startswith("abelian"):
        return abelian(int(name[len("abelian"):] or 1))
    try:
        return {"so3": so3, "sl2": sl2, "heisenberg": heisenberg}[name]()
    except KeyError:
        raise ValueError(f"unknown built-in algebra {name!r}") from None


BUILTIN_ALGEBRAS = ("abelian2", "so3", "sl2", "heisenberg")


# -- realizations -------------------------------------------------------------------


def so3_vector(L: LieAlgebra | None = None) -> MatrixRealization:
    """Rotation generators ``(L_i)_jk = -eps_ijk``; the group SO(3)."""
    L = so3() if L is None else L
    return MatrixRealization(L, -L.c, faithful=True, simply_connected=False, label="so3-vector")


def so3_spin(L: LieAlgebra | None = None) -> MatrixRealization:
    """Half of left multiplication by i, j, k on quaternions ``(w, x, y, z)``.

    The generated group is the unit quaternions, i.e. SU(2), which is simply
    connected; a full turn about any axis develops to ``-I``.
    """
    L = so3() if L is None else L
    qi = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    qj = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
    qk = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
    # left multiplication satisfies [i, j] = 2k, so halve to match so(3)
    return MatrixRealization(L, 0.5 * np.stack([qi, qj, qk]), faithful=True,
                             simply_connected=True, label="so3-spin")


def sl2_defining(L: LieAlgebra | None = None) -> MatrixRealization:
    L = sl2() if L is None else L
    H = np.diag([1.0, -1.0])
    E = np.array([[0.0, 1.0], [0.0, 0.0]])
    F = np.array([[0.0, 0.0], [1.0, 0.0]])
    return MatrixRealization(L, np.stack([H, E, F]), faithful=True, simply_connected=False,
                             label="sl2-defining")


def heisenberg_upper(L: LieAlgebra | None = None) -> MatrixRealization:
    """Strictly upper-triangular 3x3 matrices; the group is simply connected."""
    L = heisenberg() if L is None else L
    mats = np.zeros((3, 3, 3))
    mats[0, 0, 1] = mats[1, 1, 2] = mats[2, 0, 2] = 1.0
    return MatrixRealization(L, mats, faithful=True, simply_connected=True,
                             label="heisenberg-upper")


def abelian_unipotent(L: LieAlgebra) -> MatrixRealization:
    """``e_i -> E_{i, n}`` in (n+1)x(n+1): translations of R^n, simply connected."""
    n = L.dim
    mats = np.zeros((n, n + 1, n + 1))
    for i in range(n):
        mats[i, i, n] = 1.0
    return MatrixRealization(L, mats, faithful=True, simply_connected=True,
                             label=f"abelian{n}-unipotent")


def default_realization(L: LieAlgebra) -> MatrixRealization:
    """A faithful realization, simply connected where one is shipped."""
    if not np.any(L.c):
        return abelian_unipotent(L)
    for make, ref in ((so3_spin, so3), (sl2_defining, sl2), (heisenberg_upper, heisenberg)):
        if L.dim == 3 and np.allclose(L.c, ref().c, rtol=0.0, atol=1e-12):
            return make(L)
    return adjoint_realization(L)


def tautological_realization(cm: LieAlgCrossedModule) -> MatrixRealization:
    """Der(k) acting on k by its own matrices (the group generated lies in GL(k))."""
    D = cm.diagnostics.get("basis")
    if D is None:
        D = cm.phi.transpose(0, 2, 1)
    n = cm.h1.dim
    mats = np.asarray(D).reshape(cm.h0.dim, n, n)
    return MatrixRealization(cm.h0, mats, faithful=True, simply_connected=False,
                             label=f"taut({cm.h0.label})")


def derivation_group_crossed_module(k: LieAlgebra) -> GrpCrossedModule:
    """Integrated derivation crossed module of ``k``."""
    cm = derivation_crossed_module(k)
    return GrpCrossedModule(cm, tautological_realization(cm), default_realization(cm.h1),
                            label=cm.label)


def builtin_crossed_module(name: str) -> GrpCrossedModule:
    return derivation_group_crossed_module(builtin_algebra(name))


def small_complexes() -> dict[str, TwoTermComplex]:
    """Three small 2-term complexes ``V1 -> V0`` (``dM`` is dim0 x dim1)."""
    return {
        "identity2": TwoTermComplex(np.eye(2)),
        "zero_2_1": TwoTermComplex(np.zeros((2, 1))),
        "projection_1_2": TwoTermComplex(np.array([[1.0, 0.0]])),
    }
