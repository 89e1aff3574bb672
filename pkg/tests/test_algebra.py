import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from lie2int.algebra import (
    LieAlgCrossedModule,
    LieAlgebra,
    TwoTermComplex,
    antisymmetry_residual,
    check_alg_crossed_module,
    check_strict_2algebra,
    crossed_module_to_2algebra,
    derivation_basis,
    derivation_crossed_module,
    end_complex,
    jacobi_residual,
    nullspace,
    semidirect,
    twoalgebra_to_crossed_module,
)
from lie2int.catalog import BUILTIN_ALGEBRAS, builtin_algebra, small_complexes, so3

coords = arrays(np.float64, 3, elements=st.floats(-3, 3))


def test_so3_bracket_is_cross_product():
    L = so3()
    e = np.eye(3)
    np.testing.assert_array_equal(L.bracket(e[0], e[1]), e[2])


@given(coords, coords)
def test_so3_bracket_matches_cross(x, y):
    np.testing.assert_allclose(so3().bracket(x, y), np.cross(x, y), atol=1e-12)


@pytest.mark.parametrize("name", BUILTIN_ALGEBRAS)
def test_builtin_algebras_are_lie(name):
    L = builtin_algebra(name)
    assert antisymmetry_residual(L.c) == 0.0
    assert jacobi_residual(L) <= 1e-12


def test_perturbed_jacobi_is_detected():
    # [e1, e2] gains 0.1 e3 without its antisymmetric partner
    c = np.array(so3().c)
    c[0, 1, 2] += 0.1
    L = LieAlgebra(c)
    assert jacobi_residual(L) > 0.05
    assert antisymmetry_residual(L.c) == pytest.approx(0.1)


def test_bad_shape_rejected():
    with pytest.raises(ValueError):
        LieAlgebra(np.zeros((2, 2, 3)))


def test_nullspace_reports_rank():
    A = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    basis, info = nullspace(A)
    assert basis.shape == (1, 3)
    np.testing.assert_allclose(A @ basis.T, 0.0, atol=1e-15)
    assert info["rank"] == 2


@pytest.mark.parametrize("name,dim", [("so3", 3), ("abelian2", 4), ("heisenberg", 6), ("sl2", 3)])
def test_derivation_dimensions(name, dim):
    D, _ = derivation_basis(builtin_algebra(name))
    assert D.shape[0] == dim


@pytest.mark.parametrize("name", BUILTIN_ALGEBRAS)
def test_derivation_crossed_module_axioms(name):
    cm = derivation_crossed_module(builtin_algebra(name))
    assert max(check_alg_crossed_module(cm).values()) <= 1e-10
    A = crossed_module_to_2algebra(cm)
    assert max(check_strict_2algebra(A).values()) <= 1e-10


@pytest.mark.parametrize("name", BUILTIN_ALGEBRAS)
def test_crossed_module_round_trip(name):
    cm = derivation_crossed_module(builtin_algebra(name))
    back = twoalgebra_to_crossed_module(crossed_module_to_2algebra(cm))
    np.testing.assert_array_equal(back.h1.c, cm.h1.c)
    np.testing.assert_array_equal(back.phi, cm.phi)
    np.testing.assert_array_equal(back.dt, cm.dt)


def test_zeroed_action_breaks_peiffer():
    cm = derivation_crossed_module(so3())
    broken = LieAlgCrossedModule(cm.h1, cm.h0, cm.dt, np.zeros_like(cm.phi))
    assert check_alg_crossed_module(broken)["peiffer"] > 0.5
    with pytest.raises(ValueError):
        crossed_module_to_2algebra(broken)


def test_corrupted_action_breaks_peiffer():
    cm = derivation_crossed_module(so3())
    phi = np.array(cm.phi)
    phi[0, 1, 2] += 0.1
    broken = LieAlgCrossedModule(cm.h1, cm.h0, cm.dt, phi)
    assert check_alg_crossed_module(broken)["peiffer"] > 1e-2


@pytest.mark.parametrize("key", ["identity2", "zero_2_1", "projection_1_2"])
def test_end_complex_is_strict(key):
    E = end_complex(small_complexes()[key])
    assert max(check_strict_2algebra(E).values()) <= 1e-10


@pytest.mark.parametrize(
    "dM,dims",
    [(np.eye(2), (4, 4)), (np.zeros((2, 1)), (5, 2)), (np.array([[1.0, 0.0]]), (3, 2))],
)
def test_end_complex_dimensions(dM, dims):
    E = end_complex(TwoTermComplex(dM))
    assert (E.dim0, E.dim1) == dims


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (2, 2), elements=st.floats(-2, 2)))
def test_end_complex_random_differential(dM):
    E = end_complex(TwoTermComplex(dM))
    assert max(check_strict_2algebra(E).values()) <= 1e-9


def test_semidirect_is_lie():
    cm = derivation_crossed_module(so3())
    assert jacobi_residual(semidirect(crossed_module_to_2algebra(cm))) <= 1e-12
