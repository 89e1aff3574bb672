import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lie2int.catalog import builtin_crossed_module, heisenberg, so3
from lie2int.paths import (
    IDENTITY,
    SMOOTHSTEP,
    BigonData,
    CubeData,
    Cutoff,
    GridSpec,
    PathGenerator,
    SampledPath,
    SurfaceGenerator,
    bigon_residual,
    bigon_tolerance,
    bump,
    concat,
    cube_residuals,
    flow_homotopy,
    g_homotopy_residual,
    horizontal_concat,
    random_bigon,
    random_surface,
    reparametrize_bigon,
    vertical_concat,
)


@pytest.fixture(scope="module")
def context():
    return builtin_crossed_module("so3").two_algebra


def test_grid_spec_defaults_and_minimum():
    assert GridSpec(16).sizes == (16, 16, 16)
    assert GridSpec(16, 32).sizes == (16, 32, 32)
    with pytest.raises(ValueError):
        GridSpec(4)


def test_cutoffs_fix_endpoints():
    for cut in (SMOOTHSTEP, IDENTITY, Cutoff("blend", 0.3)):
        assert cut(0.0) == 0.0 and cut(1.0) == 1.0
    assert SMOOTHSTEP.derivative(0.0) == 0.0 == SMOOTHSTEP.derivative(1.0)
    assert SMOOTHSTEP.flat and not IDENTITY.flat


def test_invalid_cutoffs_rejected():
    with pytest.raises(ValueError):
        Cutoff("blend", 1.5)
    with pytest.raises(ValueError):
        Cutoff("cosine")


@given(st.floats(0.0, 1.0))
def test_blend_is_monotone(w):
    cut = Cutoff("blend", w)
    assert np.all(np.diff(cut.sample(200)) >= 0.0)


def test_cutoff_derivative_matches_finite_difference():
    t = np.linspace(0.1, 0.9, 9)
    h = 1e-6
    for cut in (SMOOTHSTEP, Cutoff("blend", 0.4)):
        fd = (cut(t + h) - cut(t - h)) / (2 * h)
        np.testing.assert_allclose(cut.derivative(t), fd, atol=1e-8)


def test_bump_has_unit_integral():
    t = np.linspace(0.0, 1.0, 2001)
    assert np.trapezoid(bump(t), t) == pytest.approx(1.0, abs=1e-6)


def test_based_path_flag():
    L = so3()
    p = PathGenerator("polynomial", np.ones((3, 2)), envelope="bump").sample(L, 64)
    assert p.based
    with pytest.raises(ValueError):
        SampledPath(L, np.ones((10, 3)), based=True)
    with pytest.raises(ValueError):
        SampledPath(L, np.zeros((10, 2)))


def test_reversed_inverse_and_map():
    L = so3()
    p = SampledPath(L, np.arange(30.0).reshape(10, 3))
    np.testing.assert_array_equal(p.reversed_inverse().samples[0], -p.samples[-1])
    np.testing.assert_array_equal(p.map(2 * np.eye(3), L).samples, 2 * p.samples)


def test_concat_layout():
    L = so3()
    p = PathGenerator("polynomial", np.ones((3, 1)), envelope="bump").sample(L, 32)
    q = SampledPath.zero(L, 32)
    r = concat(p, q)
    assert r.n == 64 and r.based
    np.testing.assert_allclose(r.samples[:33], 0.0, atol=1e-15)
    assert np.abs(r.samples[33:]).max() > 0.1
    with pytest.raises(ValueError):
        concat(SampledPath(L, np.ones((9, 3))), q)


def test_zero_bigon_is_exact(context):
    B = BigonData.zero(context, 16)
    assert bigon_residual(B) == 0.0 and B.boundary_defect() == 0.0


def test_bigon_shape_checks(context):
    with pytest.raises(ValueError):
        BigonData(context, np.zeros((9, 9, 3)), np.zeros((9, 8, 3)), np.zeros((9, 9, 3)))
    with pytest.raises(ValueError):
        BigonData(context, np.zeros((3, 9, 3)), np.zeros((3, 9, 3)), np.zeros((3, 9, 3)))


def test_random_bigon_valid_and_second_order(context):
    errs = []
    for N in (16, 32, 64):
        B = random_bigon(context, N, N, np.random.default_rng(3), scale=0.3)
        assert B.boundary_defect() == 0.0
        assert bigon_residual(B) <= bigon_tolerance(B)
        errs.append(bigon_residual(B))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.8)


def test_g_homotopy_flow_residual():
    L = heisenberg()
    rng = np.random.default_rng(0)
    a0 = PathGenerator("fourier", rng.standard_normal((3, 3)) * 0.3).sample(L, 64)
    a, b = flow_homotopy(L, a0, random_surface(3, rng, 0.3), 64)
    assert g_homotopy_residual(a, b, L) <= 10 * 2 / 64**2
    np.testing.assert_array_equal(b[[0, -1]], 0.0)


def test_constant_cube_matches_bigon(context):
    B = random_bigon(context, 24, 24, np.random.default_rng(1), scale=0.3)
    res = cube_residuals(CubeData.constant(B, 6))
    assert res["abz"] == pytest.approx(bigon_residual(B), rel=1e-12)
    assert res["cay"] == res["cbx"] == res["xyz"] == 0.0


def test_reparametrization_keeps_validity(context):
    B = random_bigon(context, 64, 64, np.random.default_rng(2), scale=0.3)
    R = reparametrize_bigon(B, Cutoff("blend", 0.5), SMOOTHSTEP)
    assert R.boundary_defect() == 0.0
    assert bigon_residual(R) <= bigon_tolerance(R)
    np.testing.assert_allclose(reparametrize_bigon(B).a, B.a, atol=1e-14)


def test_vertical_concat_requires_matching_slices(context):
    rng = np.random.default_rng(4)
    B1 = random_bigon(context, 32, 32, rng, scale=0.3)
    B2 = random_bigon(context, 32, 32, rng, scale=0.3, a0=B1.target())
    V = vertical_concat(B1, B2)
    assert V.M == 64 and V.boundary_defect() == 0.0
    np.testing.assert_allclose(V.source().samples, B1.source().samples, atol=1e-14)
    np.testing.assert_allclose(V.target().samples, B2.target().samples, atol=1e-14)
    assert bigon_residual(V) <= bigon_tolerance(V)
    with pytest.raises(ValueError):
        vertical_concat(B1, random_bigon(context, 32, 32, rng, scale=0.3))


def test_horizontal_concat_valid(context):
    rng = np.random.default_rng(5)
    B = random_bigon(context, 32, 32, rng, scale=0.3)
    Bd = random_bigon(context, 32, 32, rng, scale=0.3)
    H = horizontal_concat(B, Bd)
    assert (H.N, H.M) == (64, 64) and H.boundary_defect() == 0.0
    assert bigon_residual(H) <= bigon_tolerance(H)
    np.testing.assert_allclose(H.source().samples, concat(B.source(), Bd.source(), require_based=False).samples,
                               atol=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_surface_generator_vanishes_on_t_faces(seed):
    gen = SurfaceGenerator("polynomial", np.random.default_rng(seed).standard_normal((2, 2, 2)))
    s = np.linspace(0, 1, 5)
    np.testing.assert_allclose(gen.value(np.zeros(5), s), 0.0, atol=1e-15)
    np.testing.assert_allclose(gen.value(np.ones(5), s), 0.0, atol=1e-15)
