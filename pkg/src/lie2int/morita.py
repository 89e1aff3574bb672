"""The map from bigons to the integrated 2-group and its inverse.

``psi`` sends a bigon ``(a, b, z)`` to ``([a(., 0)], [Delta b(1, .)])`` where
``Delta b`` solves the linear correction ODE in t.  ``zeta`` goes back: from
group data and representing paths it builds a bigon whose image is the
given data.  ``roundtrip`` checks both directions and the
extension-independence cube.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._ode import rk4_linear
from .algebra import _max
from .groups import (
    ClassComparison,
    GroupElement,
    GrpCrossedModule,
    TwoGroupElt,
    act_path,
    endpoint,
    transported_family,
    two_group_horizontal,
    two_group_vertical,
)
from .paths import (
    IDENTITY,
    SMOOTHSTEP,
    BigonData,
    CubeData,
    Cutoff,
    SampledPath,
    bigon_residual,
    bigon_tolerance,
    concat,
    cube_residuals,
    g_homotopy_residual,
    horizontal_concat,
    reparametrize_bigon,
    same_context,
    vertical_concat,
    zero_faces,
)

OBSTRUCTION_TOL = 1e-5


class InvalidBigonError(ValueError):
    """Raised when a bigon fails its boundary conditions or defining equation."""


def _d4(f, h):
    """Fourth-order first derivative along axis 0 (one-sided near the ends)."""
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[:2] = (-25.0 * f[0:2] + 48.0 * f[1:3] - 36.0 * f[2:4] + 16.0 * f[3:5] - 3.0 * f[4:6]) / (12.0 * h)
    d[-2:] = (25.0 * f[-2:] - 48.0 * f[-3:-1] + 36.0 * f[-4:-2] - 16.0 * f[-5:-3] + 3.0 * f[-6:-4]) / (12.0 * h)
    return d


@dataclass(frozen=True, eq=False)
class DeltaBGrid:
    """Solution ``Delta b[i, j]`` of ``d_t Delta b = l2(a, Delta b) - z``, ``Delta b(0, s) = 0``."""

    values: np.ndarray
    bigon: BigonData

    def at_end(self) -> SampledPath:
        """``s -> Delta b(1, s)`` as an h1 path."""
        return SampledPath(self.bigon.context.h1, self.values[-1])

    def rhs(self) -> np.ndarray:
        B = self.bigon
        return B.context.act(B.a, self.values) - B.z

    def ode_residual(self) -> float:
        """Max defect of the ODE with a fourth-order difference in t."""
        return _max(_d4(self.values, self.bigon.ht) - self.rhs())


def solve_delta_b(B: BigonData) -> DeltaBGrid:
    """Integrate the correction ODE in t for every s node at once (RK4)."""
    A = B.context.act_matrix(B.a)  # (N+1, M+1, d1, d1)
    y0 = np.zeros((B.M + 1, B.context.dim1))
    values = rk4_linear(A, y0, B.ht, forcing=-B.z, vector=True)
    return DeltaBGrid(values, B)


def corrected_b(D: DeltaBGrid) -> np.ndarray:
    return D.bigon.b + D.bigon.context.d(D.values)


def corrected_residual(B: BigonData, D: DeltaBGrid | None = None) -> float:
    """Residual of ``d_t bt - d_s a = [a, bt]`` with ``bt = b + dM Delta b``."""
    D = solve_delta_b(B) if D is None else D
    return g_homotopy_residual(B.a, corrected_b(D), B.context.h0)


@dataclass(frozen=True)
class ObstructionResult:
    """Endpoint comparison of ``dM Delta b(1, .) (.) a(., 0)`` with ``a(., 1)``."""

    passed: bool
    discrepancy: float
    sound: bool

    def __bool__(self):
        return self.passed


@dataclass(frozen=True, eq=False)
class MoritaImage:
    element: TwoGroupElt
    residual: float
    obstruction: ObstructionResult
    delta_b: DeltaBGrid


def _check_context(B: BigonData, gcm: GrpCrossedModule):
    if not same_context(B.context, gcm.two_algebra):
        raise ValueError("bigon context differs from the crossed module's 2-algebra")


def validate_bigon(B: BigonData, tol: float | None = None, C: float | None = None) -> float:
    """Return the bigon residual, raising :class:`InvalidBigonError` if B is invalid."""
    if B.boundary_defect() != 0.0:
        raise InvalidBigonError(f"b or z is nonzero on a t-face ({B.boundary_defect():.3e})")
    res = bigon_residual(B)
    tol = bigon_tolerance(B, C) if tol is None else tol
    if not res <= tol:
        raise InvalidBigonError(f"bigon residual {res:.3e} exceeds tolerance {tol:.3e}")
    return res


def _obstruction(B: BigonData, D: DeltaBGrid, gcm: GrpCrossedModule,
                 tol: float = OBSTRUCTION_TOL) -> ObstructionResult:
    shifted = D.at_end().map(gcm.cm.dt, gcm.cm.h0)
    composite = concat(shifted, B.source(), require_based=False)
    gap = endpoint(composite, gcm.R0).distance(endpoint(B.target(), gcm.R0))
    return ObstructionResult(gap <= tol, gap, sound=gcm.R0.simply_connected or gap > tol)


def obstruction_check(B: BigonData, gcm: GrpCrossedModule,
                      tol: float = OBSTRUCTION_TOL) -> ObstructionResult:
    """Check that ``a(., 0)`` then ``dM Delta b(1, .)`` is class-equal to ``a(., 1)``."""
    _check_context(B, gcm)
    return _obstruction(B, solve_delta_b(B), gcm, tol)


def psi(B: BigonData, gcm: GrpCrossedModule, tol: float | None = None,
        C: float | None = None) -> MoritaImage:
    """``([a(., 0)] in H0, [Delta b(1, .)] in H1)`` with diagnostics.

    Refuses (``InvalidBigonError``) bigons with nonzero t-faces or with a
    defining-equation residual above ``tol`` (default ``C (ht^2 + hs^2)``).
    """
    _check_context(B, gcm)
    validate_bigon(B, tol, C)
    D = solve_delta_b(B)
    g = endpoint(B.source(), gcm.R0)
    h = endpoint(D.at_end(), gcm.R1)
    return MoritaImage(
        element=TwoGroupElt(g, h, gcm),
        residual=corrected_residual(B, D),
        obstruction=_obstruction(B, D, gcm),
        delta_b=D,
    )


def horizontal_delta_identity(B: BigonData, Bd: BigonData, gcm: GrpCrossedModule,
                              cut: Cutoff = SMOOTHSTEP) -> float:
    """Compare ``Delta b`` of the horizontal composite with its predicted form.

    On the composite, ``Delta b(1, .)`` should equal ``Delta b_B(1, .)``
    preceded by ``w(1, .)``, where ``w`` transports ``Delta b_Bd(1, .)`` along
    the source path of ``B``.
    """
    _check_context(B, gcm)
    _check_context(Bd, gcm)
    H = horizontal_concat(B, Bd, cut)
    lhs = solve_delta_b(H).values[-1]
    db = solve_delta_b(B).at_end()
    w = act_path(B.source(), solve_delta_b(Bd).at_end(), gcm.cm)
    rhs = concat(db, w, cut, n=H.M, require_based=False).samples
    return _max(lhs - rhs)


def psi_functoriality(B1: BigonData, B2: BigonData, mode: str, gcm: GrpCrossedModule,
                      cut: Cutoff = SMOOTHSTEP, composable_tol: float = OBSTRUCTION_TOL) -> float:
    """Distance between Psi of a composite bigon and the 2-group product.

    ``vertical``: B1 then B2 in s, compared with ``Psi(B2) .v Psi(B1)``.
    ``horizontal``: B2 then B1 in t, compared with ``Psi(B1) .h Psi(B2)``.
    """
    x1, x2 = psi(B1, gcm).element, psi(B2, gcm).element
    if mode == "vertical":
        composite = vertical_concat(B1, B2, cut)
        product = two_group_vertical(x2, x1, tol=composable_tol)
    elif mode == "horizontal":
        composite = horizontal_concat(B1, B2, cut)
        product = two_group_horizontal(x1, x2)
    else:
        raise ValueError(f"mode must be 'vertical' or 'horizontal', got {mode!r}")
    return psi(composite, gcm).element.distance(product)


# -- the inverse map -----------------------------------------------------------------


class VarpiImage(NamedTuple):
    g: GroupElement
    h: GroupElement
    source: SampledPath
    target: SampledPath


def varpi(B: BigonData, gcm: GrpCrossedModule) -> VarpiImage:
    """``([a(., 0)], [Delta b(1, .)], a(., 0), a(., 1))``."""
    _check_context(B, gcm)
    D = solve_delta_b(B)
    return VarpiImage(endpoint(B.source(), gcm.R0), endpoint(D.at_end(), gcm.R1),
                      B.source(), B.target())


@dataclass(frozen=True, eq=False)
class ZetaInput:
    """Group data in the fiber product, given by representing paths.

    The fiber condition is ``[dM db (.) a0] = [a1]`` in H0.
    """

    a0: SampledPath
    a1: SampledPath
    db: SampledPath
    gcm: GrpCrossedModule
    tol: float = OBSTRUCTION_TOL

    def __post_init__(self):
        gap = self.fiber_gap()
        if gap > self.tol:
            raise ValueError(f"fiber condition violated: endpoint mismatch {gap:.3e}")

    def fiber_gap(self) -> float:
        R0, cm = self.gcm.R0, self.gcm.cm
        lhs = endpoint(self.db.map(cm.dt, cm.h0), R0).matrix @ endpoint(self.a0, R0).matrix
        return _max(lhs - endpoint(self.a1, R0).matrix)


class Extension(NamedTuple):
    """Polynomials ``alpha, beta`` and derivatives for extending ``db`` in t."""

    alpha: callable
    dalpha: callable
    beta: callable
    dbeta: callable


EXTENSIONS = {
    "cubic": Extension(
        lambda t: t**3 - t**2,
        lambda t: 3 * t**2 - 2 * t,
        lambda t: 3 * t**2 - 2 * t**3,
        lambda t: 6 * t - 6 * t**2,
    ),
    # same end data, different interior
    "quartic": Extension(
        lambda t: (t**3 - t**2) * (3 - 2 * t),
        lambda t: (3 * t**2 - 2 * t) * (3 - 2 * t) - 2 * (t**3 - t**2),
        lambda t: 3 * t**2 - 2 * t**3,
        lambda t: 6 * t - 6 * t**2,
    ),
}


def extension_constraints(ext: Extension) -> dict[str, float]:
    """Values that must be 0 (first six) or 1 (last two) at the ends."""
    return {
        "alpha(0)": ext.alpha(0.0), "alpha(1)": ext.alpha(1.0), "beta(0)": ext.beta(0.0),
        "alpha'(0)": ext.dalpha(0.0), "beta'(0)": ext.dbeta(0.0), "beta'(1)": ext.dbeta(1.0),
        "alpha'(1)": ext.dalpha(1.0), "beta(1)": ext.beta(1.0),
    }


def extend_delta_b(context, a_end, db, N: int, extension: str = "cubic"):
    """``Delta b(t, s) = alpha(t) l2(a(1, s), db(s)) + beta(t) db(s)`` and its t-derivative."""
    ext = EXTENSIONS[extension]
    t = np.linspace(0.0, 1.0, N + 1)[:, None, None]
    turned = context.act(a_end, db)[None]
    db = np.asarray(db)[None]
    value = ext.alpha(t) * turned + ext.beta(t) * db
    value[0] = 0.0
    value[-1] = db[0]
    return value, ext.dalpha(t) * turned + ext.dbeta(t) * db


def bigon_from_extension(context, a, b_tilde, delta_b, dt_delta_b) -> BigonData:
    """``z = l2(a, Delta b) - d_t Delta b``, ``b = bt - dM Delta b`` (t-faces zeroed)."""
    z = context.act(a, delta_b) - dt_delta_b
    b = b_tilde - context.d(delta_b)
    b, z = zero_faces(b, z)
    return BigonData(context, a, b, z)


def connecting_homotopy(x: ZetaInput, sigma: Cutoff = IDENTITY):
    """Flat ``(a, bt)`` from ``a0`` to a path class-equal to ``a1`` with
    ``bt(0, s) = 0`` and ``bt(1, s) = dM db(s)``."""
    cm = x.gcm.cm
    c = x.db.map(cm.dt, cm.h0)
    return transported_family(cm.h0, c, x.a0, x.db.n, sigma)


def zeta(x: ZetaInput, extension: str = "cubic") -> BigonData:
    """A bigon with source ``a0``, target class ``[a1]`` and ``Delta b(1, .) = db``."""
    A = x.gcm.two_algebra
    a, b_tilde = connecting_homotopy(x)
    delta_b, dt_delta_b = extend_delta_b(A, a[-1], x.db.samples, x.a0.n, extension)
    return bigon_from_extension(A, a, b_tilde, delta_b, dt_delta_b)


# -- round trip ----------------------------------------------------------------------


def flatten_s_ends(B: BigonData) -> BigonData:
    """Reparametrize in s so that z vanishes at s = 0 and s = 1."""
    Bs = reparametrize_bigon(B, IDENTITY, SMOOTHSTEP)
    z = np.array(Bs.z)
    z[:, [0, -1]] = 0.0
    return BigonData(Bs.context, Bs.a, Bs.b, z)


def interpolation_cube(context, a, b_tilde, ext1, ext0, K: int) -> CubeData:
    """Cube from ``Delta b^0`` (u = 0) to ``Delta b^1`` (u = 1) over fixed ``(a, bt)``.

    ``ext*`` are pairs ``(Delta b, d_t Delta b)``; ``Delta b^u`` is linear in u,
    ``c = y = 0`` and ``x = d_u Delta b^u``.
    """
    u = np.linspace(0.0, 1.0, K + 1)[None, None, :, None]
    (d1, dt1), (d0, dt0) = ext1, ext0
    delta = u * d1[:, :, None] + (1.0 - u) * d0[:, :, None]
    dt_delta = u * dt1[:, :, None] + (1.0 - u) * dt0[:, :, None]
    a3 = np.repeat(a[:, :, None], K + 1, axis=2)
    b3 = b_tilde[:, :, None] - context.d(delta)
    z3 = context.act(a3, delta) - dt_delta
    x3 = np.repeat((d1 - d0)[:, :, None], K + 1, axis=2)
    b3[[0, -1]] = 0.0
    z3[[0, -1]] = 0.0
    x3[[0, -1]] = 0.0
    x3[:, [0, -1]] = 0.0
    zeros0 = np.zeros_like(a3)
    return CubeData(context, a3, b3, zeros0, x3, np.zeros_like(x3), z3)


@dataclass
class RoundtripReport:
    g_gap: float
    h_gap: float
    source_gap: float
    target_class: ClassComparison
    reparam_gap: float
    cube_solution_vs_cubic: dict
    cube_cubic_vs_quartic: dict
    zeta_boundary_defect: float
    zeta_residual: float
    fiber_gap: float
    steps: tuple

    def endpoint_discrepancy(self) -> float:
        return max(self.g_gap, self.h_gap, self.source_gap, self.target_class.discrepancy)

    def cube_residual(self) -> float:
        return max(max(self.cube_solution_vs_cubic.values()),
                   max(self.cube_cubic_vs_quartic.values()))


def roundtrip(B: BigonData, gcm: GrpCrossedModule, K: int = 8) -> RoundtripReport:
    """``varpi(zeta(varpi(B)))`` against ``varpi(B)`` plus two extension cubes."""
    _check_context(B, gcm)
    A = gcm.two_algebra
    Bf = flatten_s_ends(B)
    first = varpi(Bf, gcm)
    original = varpi(B, gcm)
    reparam_gap = max(first.g.distance(original.g), first.h.distance(original.h))

    D = solve_delta_b(Bf)
    # the fiber condition holds analytically here; its discrete gap is reported
    x = ZetaInput(first.source, first.target, D.at_end(), gcm, tol=np.inf)
    Bz = zeta(x)
    second = varpi(Bz, gcm)
    target_gap = endpoint(second.target, gcm.R0).distance(endpoint(x.a1, gcm.R0))
    target_class = ClassComparison(target_gap <= OBSTRUCTION_TOL, target_gap,
                                   sound=gcm.R0.simply_connected or target_gap > OBSTRUCTION_TOL)

    # the solved Delta b and the cubic extension of its end values, over Bf's (a, bt)
    solved = (D.values, D.rhs())
    cubic = extend_delta_b(A, Bf.a[-1], D.values[-1], Bf.N, "cubic")
    cube1 = interpolation_cube(A, Bf.a, corrected_b(D), solved, cubic, K)

    # two explicit extensions over zeta's connecting homotopy
    a, b_tilde = connecting_homotopy(x)
    quartic = extend_delta_b(A, a[-1], x.db.samples, x.a0.n, "quartic")
    cubic_z = extend_delta_b(A, a[-1], x.db.samples, x.a0.n, "cubic")
    cube2 = interpolation_cube(A, a, b_tilde, cubic_z, quartic, K)

    return RoundtripReport(
        g_gap=second.g.distance(first.g),
        h_gap=second.h.distance(first.h),
        source_gap=_max(second.source.samples - first.source.samples),
        target_class=target_class,
        reparam_gap=reparam_gap,
        cube_solution_vs_cubic=cube_residuals(cube1),
        cube_cubic_vs_quartic=cube_residuals(cube2),
        zeta_boundary_defect=Bz.boundary_defect(),
        zeta_residual=bigon_residual(Bz),
        fiber_gap=x.fiber_gap(),
        steps=(Bf.ht, Bf.hs, 1.0 / K),
    )
