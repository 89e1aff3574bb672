"""Non-strict morphisms from a Lie algebra into a strict Lie 2-algebra.

A morphism is a pair ``(mu, nu)``: a linear map ``mu: g -> h0`` and an
antisymmetric bilinear ``nu: g x g -> h1`` measuring how far ``mu`` is
from preserving brackets.  Non-abelian extensions of ``g`` by ``k`` and
2-term representations up to homotopy are both special cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    EndAlgebra,
    LieAlgCrossedModule,
    LieAlgebra,
    StrictLie2Algebra,
    TwoTermComplex,
    _max,
    _project,
    crossed_module_to_2algebra,
    derivation_crossed_module,
    end_complex,
    jacobi_residual,
)
from .groups import GrpCrossedModule, TwoGroupElt
from .morita import psi
from .paths import BigonData, SampledPath, g_homotopy_residual, same_context

COHERENCE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LinfMorphism:
    """``mu`` is (dim h0) x (dim g); ``nu[i, j]`` is ``nu(e_i, e_j)`` in h1.

    ``nu`` must be antisymmetric; it is stored exactly antisymmetrized.
    ``meta`` carries optional provenance (e.g. the derivation crossed module
    of an extension).
    """

    source: LieAlgebra
    target: StrictLie2Algebra
    mu: np.ndarray
    nu: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        dg, d0, d1 = self.source.dim, self.target.dim0, self.target.dim1
        mu = np.array(self.mu, dtype=float).reshape(d0, dg)
        nu = np.array(self.nu, dtype=float).reshape(dg, dg, d1)
        sym = _max(nu + nu.transpose(1, 0, 2))
        if sym > 1e-12 * (1.0 + _max(nu)):
            raise ValueError(f"nu is not antisymmetric (defect {sym:.3e})")
        nu = 0.5 * (nu - nu.transpose(1, 0, 2))
        for arr in (mu, nu):
            arr.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    def apply_mu(self, x) -> np.ndarray:
        return np.einsum("...i,ui->...u", x, self.mu)

    def apply_nu(self, x, y) -> np.ndarray:
        return np.einsum("...i,...j,ijm->...m", x, y, self.nu)


def morphism_residual_tensors(f: LinfMorphism):
    """Both coherence defects on basis pairs ``[i, j]`` and triples ``[i, j, k]``."""
    A, c = f.target, f.source.c
    mu, nu = f.mu, f.nu
    r1 = (
        np.einsum("ijk,uk->iju", c, mu)
        - np.einsum("ui,vj,uvw->ijw", mu, mu, A.l2_00)
        - np.einsum("ijm,um->iju", nu, A.dM)
    )
    acting = np.einsum("ui,jkm,umn->ijkn", mu, nu, A.l2_01)
    nested = np.einsum("ijl,lkm->ijkm", c, nu)
    t = acting - nested
    r2 = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return r1, r2


def morphism_residuals(f: LinfMorphism) -> tuple[float, float]:
    """``(r1, r2)``: max-norms of the bracket and cocycle coherence defects."""
    r1, r2 = morphism_residual_tensors(f)
    return _max(r1), _max(r2)


def require_coherent(f: LinfMorphism, tol: float = COHERENCE_TOL):
    r1, r2 = morphism_residuals(f)
    if max(r1, r2) > tol:
        raise ValueError(f"(mu, nu) is not a morphism: residuals ({r1:.3e}, {r2:.3e})")


def pushforward_path(f: LinfMorphism, a: SampledPath) -> SampledPath:
    """Node-wise ``mu o a``."""
    if a.algebra.dim != f.source.dim:
        raise ValueError("path dimension does not match the morphism source")
    return SampledPath(f.target.h0, f.apply_mu(a.samples), based=a.based)


def pushforward_homotopy(f: LinfMorphism, a, b, tol: float | None = None) -> BigonData:
    """The bigon ``(mu a, mu b, nu(a, b))`` of a g-homotopy ``(a, b)``.

    ``tol`` bounds the input's g-homotopy residual (default
    ``10 (1 + |c|) (1 + |a, b|)^2 (ht^2 + hs^2)``).
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if _max(b[[0, -1]]) != 0.0:
        raise ValueError("b must vanish at t = 0 and t = 1")
    res = g_homotopy_residual(a, b, f.source)
    if tol is None:
        ht, hs = 1.0 / (a.shape[0] - 1), 1.0 / (a.shape[1] - 1)
        scale = 1.0 + _max(f.source.c)
        tol = 10.0 * scale * (1.0 + max(_max(a), _max(b))) ** 2 * (ht**2 + hs**2)
    if not res <= tol:
        raise ValueError(f"input g-homotopy residual {res:.3e} exceeds {tol:.3e}")
    return BigonData(f.target, f.apply_mu(a), f.apply_mu(b), f.apply_nu(a, b))


def integrate_morphism(f: LinfMorphism, a, b, gcm: GrpCrossedModule,
                       coherence_tol: float = COHERENCE_TOL) -> TwoGroupElt:
    """Psi of the pushforward bigon: the integrated morphism on a representative."""
    require_coherent(f, coherence_tol)
    if not same_context(f.target, gcm.two_algebra):
        raise ValueError("morphism target differs from the crossed module's 2-algebra")
    B = pushforward_homotopy(f, a, b)
    return psi(B, gcm).element


# -- extensions --------------------------------------------------------------------


def change_basis(c, P) -> np.ndarray:
    """Structure constants in the basis formed by the columns of ``P``."""
    P = np.asarray(P, dtype=float)
    Pinv = np.linalg.inv(P)
    return np.einsum("ia,jb,ijk,lk->abl", P, P, np.asarray(c), Pinv)


@dataclass(frozen=True, eq=False)
class NonAbelianExtension:
    """``g + k`` with bracket ``[X1, X2]_g + mu(X1) k2 - mu(X2) k1 + [k1, k2] + nu(X1, X2)``.

    ``mu[i]`` is the matrix (on k's column coordinates) of the derivation
    ``mu(e_i)``; basis order of the total space is g first, then k.
    """

    g: LieAlgebra
    k: LieAlgebra
    mu: np.ndarray
    nu: np.ndarray

    @property
    def algebra(self) -> LieAlgebra:
        dg, n = self.g.dim, self.k.dim
        c = np.zeros((dg + n,) * 3)
        c[:dg, :dg, :dg] = self.g.c
        c[:dg, :dg, dg:] = self.nu
        c[:dg, dg:, dg:] = self.mu.transpose(0, 2, 1)  # [e_i, k_a] = mu_i k_a
        c[dg:, :dg, dg:] = -self.mu.transpose(2, 0, 1)
        c[dg:, dg:, dg:] = self.k.c
        return LieAlgebra(c, label=f"{self.g.label}+{self.k.label}")

    def jacobi_residual(self) -> float:
        return jacobi_residual(self.algebra)


@dataclass(frozen=True)
class Splitting:
    """Ideal basis indices of the total algebra and a section ``g -> hat g``.

    ``section`` is (dim hat g) x (dim g); its rows at the complement indices
    must form the identity, so that the quotient map is coordinate projection.
    """

    ideal: tuple
    section: np.ndarray

    def complement(self, total: int) -> list[int]:
        return [i for i in range(total) if i not in set(self.ideal)]

    def basis_matrix(self, total: int) -> np.ndarray:
        """Columns: section images, then the ideal basis vectors."""
        eye = np.eye(total)
        return np.concatenate([np.asarray(self.section, dtype=float), eye[:, list(self.ideal)]], axis=1)


def extension_to_morphism(hat_g: LieAlgebra, splitting: Splitting, tol: float = 1e-10,
                          cm: LieAlgCrossedModule | None = None) -> LinfMorphism:
    """``(mu, nu)`` of an extension into the derivation crossed module of the ideal.

    ``mu(X) = [sigma X, .]`` restricted to k and ``nu(X, Y) = [sigma X, sigma Y] -
    sigma [X, Y]_g``.
    """
    c = hat_g.c
    total = hat_g.dim
    ideal = list(splitting.ideal)
    comp = splitting.complement(total)
    sigma = np.asarray(splitting.section, dtype=float)
    if sigma.shape != (total, len(comp)):
        raise ValueError(f"section must have shape {(total, len(comp))}, got {sigma.shape}")
    if _max(sigma[comp] - np.eye(len(comp))) > tol:
        raise ValueError("section is not a right inverse of the quotient projection")
    leak = _max(c[:, ideal][:, :, comp])
    if leak > tol:
        raise ValueError(f"supplied subspace is not an ideal (leak {leak:.3e})")

    k = LieAlgebra(c[np.ix_(ideal, ideal, ideal)], label="k")
    br = np.einsum("ia,jb,ijl->abl", sigma, sigma, c)  # [sigma X, sigma Y] in hat g
    g = LieAlgebra(br[:, :, comp], label="g")
    nu = br[:, :, ideal] - np.einsum("abc,lc->abl", g.c, sigma)[:, :, ideal]
    mu_mats = np.einsum("ia,ijl->alj", sigma, c[:, ideal][:, :, ideal])  # column j = [sigma X, k_j]
    cm = derivation_crossed_module(k) if cm is None else cm
    D = cm.diagnostics["basis"]
    mu_coords = _project(mu_mats, D.reshape(D.shape[0], -1))  # (dim g, dim Der)
    defect = _max(np.einsum("ar,rpq->apq", mu_coords, D) - mu_mats)
    if defect > 1e-8:
        raise ValueError(f"mu does not land in Der(k) (defect {defect:.3e})")
    target = crossed_module_to_2algebra(cm, tol=np.inf)
    return LinfMorphism(g, target, mu_coords.T, nu,
                        meta={"cm": cm, "k": k, "g": g, "splitting": splitting})


def morphism_to_extension(f: LinfMorphism, cm: LieAlgCrossedModule | None = None,
                          tol: float = COHERENCE_TOL) -> NonAbelianExtension:
    """Assemble the extension bracket from a morphism into a derivation crossed module."""
    require_coherent(f, tol)
    cm = f.meta.get("cm") if cm is None else cm
    if cm is None or "basis" not in cm.diagnostics:
        raise ValueError("need the derivation crossed module (with its basis) of the target")
    D = cm.diagnostics["basis"]
    mu_mats = np.einsum("ri,rpq->ipq", f.mu, D)
    return NonAbelianExtension(f.source, cm.h1, mu_mats, f.nu)


# -- representations up to homotopy -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class RepUpToHomotopy:
    """``mu0[i]``, ``mu1[i]``: action of ``e_i`` on V0 and V1; ``nu[i, j]``: V0 -> V1."""

    complex: TwoTermComplex
    g: LieAlgebra
    mu0: np.ndarray
    mu1: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        dg, p, q = self.g.dim, self.complex.dim0, self.complex.dim1
        for name, shape in (("mu0", (dg, p, p)), ("mu1", (dg, q, q)), ("nu", (dg, dg, q, p))):
            arr = np.array(getattr(self, name), dtype=float).reshape(shape)
            object.__setattr__(self, name, arr)


def rep_to_morphism(r: RepUpToHomotopy, end: EndAlgebra | None = None,
                    tol: float = 1e-10) -> LinfMorphism:
    """The morphism ``g -> End(V)``; raises if some ``mu(e_i)`` leaves End^0."""
    E = end_complex(r.complex) if end is None else end
    coords, dist = E.end0_coords(r.mu0, r.mu1)
    if dist > tol:
        raise ValueError(f"mu does not commute with the differential (distance {dist:.3e})")
    dg, p, q = r.g.dim, r.complex.dim0, r.complex.dim1
    nu = r.nu.reshape(dg, dg, q * p)
    return LinfMorphism(r.g, E, coords.T, nu, meta={"end": E})


# -- demo data ---------------------------------------------------------------------------


def so3_semidirect_r3() -> LieAlgebra:
    """so(3) x| R^3 in the basis (L1, L2, L3, P1, P2, P3)."""
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[j, i, k] = 1.0, -1.0
    c = np.zeros((6, 6, 6))
    c[:3, :3, :3] = eps
    c[:3, 3:, 3:] = eps
    c[3:, :3, 3:] = -eps.transpose(1, 0, 2)
    return LieAlgebra(c, label="so3xR3")


def tilted_splitting(tilt=None) -> Splitting:
    """Section ``L_i -> L_i + sum_j tilt[j, i] P_j``; the default tilt makes nu nonzero."""
    tilt = np.array([[0.3, -0.2, 0.1], [0.5, 0.2, -0.4], [0.0, 0.25, 0.6]]) if tilt is None else tilt
    section = np.concatenate([np.eye(3), np.asarray(tilt, dtype=float)], axis=0)
    return Splitting(ideal=(3, 4, 5), section=section)
