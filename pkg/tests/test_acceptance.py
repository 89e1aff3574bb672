"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one ``[criterion k] PASS|FAIL`` line with the measured
quantities, then asserts.
"""

import numpy as np
import pytest

from lie2int.algebra import (
    antisymmetry_residual,
    check_alg_crossed_module,
    check_strict_2algebra,
    crossed_module_to_2algebra,
    end_complex,
    jacobi_residual,
)
from lie2int.catalog import (
    BUILTIN_ALGEBRAS,
    builtin_algebra,
    heisenberg,
    heisenberg_upper,
    sl2,
    sl2_defining,
    small_complexes,
    so3,
    so3_vector,
)
from lie2int.groups import check_grp_crossed_module, endpoint
from lie2int.io import Loader
from lie2int.morita import (
    corrected_residual,
    horizontal_delta_identity,
    obstruction_check,
    psi,
    psi_functoriality,
    roundtrip,
)
from lie2int.morphisms import (
    Splitting,
    change_basis,
    extension_to_morphism,
    integrate_morphism,
    morphism_residuals,
    morphism_to_extension,
    pushforward_homotopy,
    so3_semidirect_r3,
    tilted_splitting,
)
from lie2int.paths import (
    Cutoff,
    SampledPath,
    bigon_residual,
    flow_homotopy,
    random_bigon,
    random_path_generator,
    random_surface,
    reparametrize_bigon,
)

pytestmark = pytest.mark.acceptance

N_FINE = 256
SEEDS = range(8)
# amplitude of random data; criteria 3 and 7 compare against 10 h^2 with unit-size data
SMALL = 0.1
LARGE = 0.5


def h2(*steps):
    return sum(h * h for h in steps)


def order(errors):
    e = np.asarray(errors, dtype=float)
    return np.log2(e[:-1] / e[1:])


@pytest.fixture
def report(capsys):
    def emit(k, passed, detail):
        with capsys.disabled():
            print(f"\n[criterion {k}] {'PASS' if passed else 'FAIL'}: {detail}")
        return passed

    return emit


@pytest.fixture(scope="module")
def seeded(crossed_modules):
    """Eight seeded valid bigons per built-in crossed module at N = M = 256."""
    return {
        name: [random_bigon(g.two_algebra, N_FINE, N_FINE, np.random.default_rng(seed), scale=LARGE)
               for seed in SEEDS]
        for name, g in crossed_modules.items()
    }


def test_criterion_01_algebraic_exactness(report, crossed_modules):
    worst = {}
    for name in BUILTIN_ALGEBRAS:
        L = builtin_algebra(name)
        worst[name] = max(jacobi_residual(L), antisymmetry_residual(L.c))
    for name, g in crossed_modules.items():
        worst[f"Der({name})"] = max(
            max(check_alg_crossed_module(g.cm).values()),
            max(check_strict_2algebra(crossed_module_to_2algebra(g.cm)).values()),
            jacobi_residual(g.cm.h0),
        )
    for key, V in small_complexes().items():
        worst[f"End({key})"] = max(check_strict_2algebra(end_complex(V)).values())
    top = max(worst.values())
    ok = report(1, top <= 1e-10, f"max residual {top:.2e} over {len(worst)} structures (tol 1e-10)")
    assert ok, worst


def _rodrigues(theta):
    K = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return np.eye(3) + np.sin(theta) * K + (1 - np.cos(theta)) * K @ K


def test_criterion_02_development_order(report):
    from scipy.linalg import expm

    theta = lambda t: 2.0 * np.sin(np.pi * t / 2) + t**3
    dtheta = lambda t: np.pi * np.cos(np.pi * t / 2) + 3 * t**2
    x = np.array([1.2, -0.8, 0.9])
    cases = {
        "so3 rotation": lambda n: np.abs(endpoint(
            SampledPath(so3(), dtheta(np.linspace(0, 1, n + 1))[:, None] * np.array([0, 0, 1.0])),
            so3_vector()).matrix - _rodrigues(theta(1.0))).max(),
        "sl2 constant": lambda n: np.abs(endpoint(SampledPath(sl2(), np.tile(x, (n + 1, 1))),
                                                  sl2_defining()).matrix
                                         - expm(sl2_defining().rho(x))).max(),
        "heisenberg constant": lambda n: np.abs(endpoint(
            SampledPath(heisenberg(), np.tile(x, (n + 1, 1))), heisenberg_upper()).matrix
            - expm(heisenberg_upper().rho(x))).max(),
    }
    orders = {}
    for name, err in cases.items():
        errors = [err(n) for n in (64, 128, 256)]
        # nilpotent constant paths develop exactly; only check order when the error is visible
        orders[name] = order(errors).min() if min(errors) > 1e-13 else np.inf
    finite = {k: v for k, v in orders.items() if np.isfinite(v)}
    low = min(finite.values())
    detail = ", ".join(f"{k} {v:.2f}" for k, v in orders.items())
    ok = report(2, low >= 3.5 and "so3 rotation" in finite, f"observed orders {detail} (need >= 3.5)")
    assert ok


def test_criterion_03_corrected_residual(report, crossed_modules):
    worst_ratio, worst_order = 0.0, np.inf
    for name, g in crossed_modules.items():
        for seed in (0, 1):
            errs = []
            for N in (32, 64, 128):
                B = random_bigon(g.two_algebra, N, N, np.random.default_rng(seed), scale=SMALL)
                r = corrected_residual(B)
                worst_ratio = max(worst_ratio, r / h2(B.ht, B.hs))
                errs.append(r)
            worst_order = min(worst_order, order(errs).min())
    ok = report(3, worst_ratio <= 10.0 and worst_order >= 1.8,
                f"residual <= {worst_ratio:.2f} h^2 (need <= 10), order >= {worst_order:.2f} (need >= 1.8)")
    assert ok


def test_criterion_04_obstruction(report, crossed_modules, seeded):
    worst = max(obstruction_check(B, crossed_modules[name]).discrepancy
                for name, bigons in seeded.items() for B in bigons)
    count = sum(len(v) for v in seeded.values())
    ok = report(4, worst <= 1e-5, f"max endpoint discrepancy {worst:.2e} on {count} bigons (tol 1e-5)")
    assert ok


def test_criterion_05_horizontal_delta(report, crossed_modules, seeded):
    worst = 0.0
    for name, bigons in seeded.items():
        for i in range(len(bigons)):
            B, Bd = bigons[i], bigons[(i + 1) % len(bigons)]
            worst = max(worst, horizontal_delta_identity(B, Bd, crossed_modules[name]))
    ok = report(5, worst <= 1e-5, f"max identity defect {worst:.2e} (tol 1e-5)")
    assert ok


def test_criterion_06_functoriality(report, crossed_modules, seeded):
    vert = horiz = reparam = 0.0
    for name, bigons in seeded.items():
        g = crossed_modules[name]
        for i in (0, 2):
            horiz = max(horiz, psi_functoriality(bigons[i], bigons[i + 1], "horizontal", g))
            upper = random_bigon(g.two_algebra, N_FINE, N_FINE, np.random.default_rng(100 + i),
                                 scale=LARGE, a0=bigons[i].target())
            vert = max(vert, psi_functoriality(bigons[i], upper, "vertical", g))
        for B in bigons:
            R = reparametrize_bigon(B, Cutoff("blend", 0.5), Cutoff("blend", 0.7))
            reparam = max(reparam, psi(B, g).element.distance(psi(R, g).element))
    ok = report(6, max(vert, horiz) <= 1e-5 and reparam <= 1e-6,
                f"vertical {vert:.2e}, horizontal {horiz:.2e} (tol 1e-5); "
                f"reparametrization {reparam:.2e} (tol 1e-6)")
    assert ok


def test_criterion_07_roundtrip(report, crossed_modules):
    disc = cube_ratio = boundary = 0.0
    for name, g in crossed_modules.items():
        for seed in (0, 1):
            B = random_bigon(g.two_algebra, 64, 64, np.random.default_rng(seed), scale=SMALL)
            R = roundtrip(B, g, K=8)
            disc = max(disc, R.endpoint_discrepancy())
            cube_ratio = max(cube_ratio, R.cube_residual() / h2(*R.steps))
            boundary = max(boundary, R.zeta_boundary_defect)
    ok = report(7, disc <= 1e-5 and cube_ratio <= 10.0 and boundary == 0.0,
                f"endpoint discrepancy {disc:.2e} (tol 1e-5), cube residual {cube_ratio:.2f} h^2 "
                f"(need <= 10), zeta boundary defect {boundary:.1e} (need 0)")
    assert ok


def test_criterion_08_group_crossed_module(report, crossed_modules):
    worst = {name: max(check_grp_crossed_module(g, sample_count=8, seed=0, n=N_FINE).values())
             for name, g in crossed_modules.items()}
    top = max(worst.values())
    ok = report(8, top <= 1e-5, f"max equivariance/Peiffer residual {top:.2e} (tol 1e-5)")
    assert ok


def test_criterion_09_morphism_coherence(report):
    heis_split = Splitting((2,), np.array([[1.0, 0.0], [0.0, 1.0], [0.3, -0.2]]))
    inputs = [
        (so3_semidirect_r3(), Splitting((3, 4, 5), np.concatenate([np.eye(3), np.zeros((3, 3))]))),
        (so3_semidirect_r3(), tilted_splitting()),
        (heisenberg(), heis_split),
    ]
    coherence = roundtrip_gap = push_ratio = 0.0
    for hat_g, split in inputs:
        f = extension_to_morphism(hat_g, split)
        coherence = max(coherence, *morphism_residuals(f))
        rebuilt = morphism_to_extension(f).algebra.c
        roundtrip_gap = max(roundtrip_gap,
                            np.abs(rebuilt - change_basis(hat_g.c, split.basis_matrix(hat_g.dim))).max())
        rng = np.random.default_rng(0)
        for N in (32, 64):
            a0 = random_path_generator(f.source.dim, rng, scale=SMALL).sample(f.source, N)
            a, b = flow_homotopy(f.source, a0, random_surface(f.source.dim, rng, SMALL), N)
            B = pushforward_homotopy(f, a, b)
            push_ratio = max(push_ratio, bigon_residual(B) / h2(B.ht, B.hs))
    ok = report(9, coherence <= 1e-10 and roundtrip_gap <= 1e-12 and push_ratio <= 10.0,
                f"morphism residuals {coherence:.1e} (tol 1e-10), structure constants {roundtrip_gap:.1e} "
                f"(tol 1e-12), pushforward residual {push_ratio:.2f} h^2 (need <= 10)")
    assert ok


def test_criterion_10_pipeline_refinement(report):
    def integrate(N):
        f, gcm, a, b = Loader().morphism("demo:so3xr3_extension", N, N)
        return integrate_morphism(f, a, b, gcm)

    coarse, fine = integrate(64), integrate(256)
    gap = max(np.abs(coarse.g.matrix - fine.g.matrix).max(), np.abs(coarse.h.matrix - fine.h.matrix).max())
    ok = report(10, gap <= 1e-6, f"N=64 vs N=256 discrepancy {gap:.2e} (tol 1e-6)")
    assert ok
