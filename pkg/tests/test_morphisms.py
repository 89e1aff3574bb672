import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from lie2int.algebra import LieAlgebra, TwoTermComplex, derivation_crossed_module, jacobi_residual
from lie2int.catalog import abelian, heisenberg, so3
from lie2int.groups import GrpCrossedModule
from lie2int.catalog import default_realization, tautological_realization
from lie2int.morphisms import (
    LinfMorphism,
    NonAbelianExtension,
    RepUpToHomotopy,
    Splitting,
    change_basis,
    extension_to_morphism,
    integrate_morphism,
    morphism_residuals,
    morphism_to_extension,
    pushforward_homotopy,
    rep_to_morphism,
    require_coherent,
    so3_semidirect_r3,
    tilted_splitting,
)
from lie2int.paths import SampledPath, bigon_residual, flow_homotopy, random_path_generator, random_surface

STANDARD = Splitting((3, 4, 5), np.concatenate([np.eye(3), np.zeros((3, 3))]))


def heisenberg_splitting(shift=(0.3, -0.2)):
    return Splitting((2,), np.array([[1.0, 0.0], [0.0, 1.0], list(shift)]))


def total_constants(hat_g, split):
    return change_basis(hat_g.c, split.basis_matrix(hat_g.dim))


def test_standard_splitting_has_no_curvature():
    f = extension_to_morphism(so3_semidirect_r3(), STANDARD)
    assert morphism_residuals(f) == (0.0, 0.0)
    assert np.abs(f.nu).max() == 0.0


def test_tilted_splitting_is_coherent():
    f = extension_to_morphism(so3_semidirect_r3(), tilted_splitting())
    assert np.abs(f.nu).max() > 0.1
    assert max(morphism_residuals(f)) <= 1e-12


def test_central_extension_cocycle():
    f = extension_to_morphism(heisenberg(), heisenberg_splitting())
    assert np.abs(f.mu).max() == 0.0
    assert f.nu[0, 1, 0] == pytest.approx(1.0)
    assert max(morphism_residuals(f)) <= 1e-14


@pytest.mark.parametrize("hat_g,split", [(so3_semidirect_r3(), STANDARD),
                                         (so3_semidirect_r3(), tilted_splitting()),
                                         (heisenberg(), heisenberg_splitting())])
def test_extension_round_trip(hat_g, split):
    f = extension_to_morphism(hat_g, split)
    ext = morphism_to_extension(f)
    assert np.abs(ext.algebra.c - total_constants(hat_g, split)).max() <= 1e-12
    assert ext.jacobi_residual() <= 1e-12


@settings(max_examples=20, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-2, 2)))
def test_any_tilt_is_coherent(tilt):
    f = extension_to_morphism(so3_semidirect_r3(), tilted_splitting(tilt))
    assert max(morphism_residuals(f)) <= 1e-10


def test_non_ideal_rejected():
    with pytest.raises(ValueError):
        extension_to_morphism(so3_semidirect_r3(), Splitting((0, 1, 2), np.eye(6)[:, 3:]))


def test_bad_section_rejected():
    section = np.concatenate([2 * np.eye(3), np.zeros((3, 3))])
    with pytest.raises(ValueError):
        extension_to_morphism(so3_semidirect_r3(), Splitting((3, 4, 5), section))


def test_nu_must_be_antisymmetric():
    A = extension_to_morphism(heisenberg(), heisenberg_splitting()).target
    with pytest.raises(ValueError):
        LinfMorphism(abelian(2), A, np.zeros((A.dim0, 2)), np.ones((2, 2, A.dim1)))


def test_corrupted_mu_is_detected():
    f = extension_to_morphism(so3_semidirect_r3(), tilted_splitting())
    g = LinfMorphism(f.source, f.target, f.mu * 1.1, f.nu)
    assert max(morphism_residuals(g)) > 1e-2
    with pytest.raises(ValueError):
        require_coherent(g)


def test_change_basis_identity():
    c = so3().c
    np.testing.assert_array_equal(change_basis(c, np.eye(3)), c)


def test_semidirect_extension_jacobi():
    ext = NonAbelianExtension(so3(), abelian(3), -so3().c, np.zeros((3, 3, 3)))
    assert ext.jacobi_residual() == 0.0
    assert jacobi_residual(ext.algebra) == 0.0


def test_adjoint_rep_up_to_homotopy():
    L = so3()
    ad = L.ad(np.eye(3))
    r = RepUpToHomotopy(TwoTermComplex(np.eye(3)), L, ad, ad, np.zeros((3, 3, 3, 3)))
    f = rep_to_morphism(r)
    assert morphism_residuals(f) == pytest.approx((0.0, 0.0), abs=1e-14)


def test_rep_must_commute_with_differential():
    L = abelian(1)
    mu1 = np.array([[[0.0, 1.0], [0.0, 0.0]]])
    r = RepUpToHomotopy(TwoTermComplex(np.array([[1.0, 0.0]])), L, np.zeros((1, 1, 1)), mu1,
                        np.zeros((1, 1, 2, 1)))
    with pytest.raises(ValueError):
        rep_to_morphism(r)


@pytest.fixture(scope="module")
def extension_setup():
    f = extension_to_morphism(so3_semidirect_r3(), tilted_splitting())
    cm = f.meta["cm"]
    gcm = GrpCrossedModule(cm, tautological_realization(cm), default_realization(cm.h1))
    return f, gcm


def homotopy(f, N, seed=0):
    rng = np.random.default_rng(seed)
    a0 = random_path_generator(3, rng, scale=0.4).sample(f.source, N)
    return flow_homotopy(f.source, a0, random_surface(3, rng, 0.4), N)


def test_pushforward_is_a_bigon(extension_setup):
    f, _ = extension_setup
    a, b = homotopy(f, 64)
    B = pushforward_homotopy(f, a, b)
    assert B.boundary_defect() == 0.0
    assert bigon_residual(B) <= 10 * (B.ht**2 + B.hs**2)
    bad = np.array(b)
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        pushforward_homotopy(f, a, bad)


def test_integrate_zero_homotopy(extension_setup):
    f, gcm = extension_setup
    zero = np.zeros((17, 17, 3))
    x = integrate_morphism(f, zero, zero, gcm)
    assert x.distance(gcm.identity()) == 0.0


def test_integrate_requires_coherence(extension_setup):
    f, gcm = extension_setup
    a, b = homotopy(f, 16)
    with pytest.raises(ValueError):
        integrate_morphism(LinfMorphism(f.source, f.target, 2 * f.mu, f.nu), a, b, gcm)
