import numpy as np
import pytest

from gbcmass import models
from gbcmass.graph_geometry import (
    DomainError,
    curvature_frame,
    finite_difference_riemann,
    frames_batch,
    point_frame,
)
from gbcmass.tensor_algebra import lovelock_scalar
from conftest import sample_exterior_points


def test_flat_map_frames():
    gmap = models.flat(4, 2)
    pf = point_frame(gmap, np.array([1.0, 0.5, -0.3, 2.0]))
    np.testing.assert_allclose(pf.g, np.eye(4))
    assert pf.det_g == pytest.approx(1.0)
    assert np.all(pf.christoffel == 0.0)
    assert np.all(pf.dg == 0.0)
    assert np.all(pf.tangent_lifts == 0.0)
    cf = curvature_frame(gmap, pf)
    assert np.all(cf.riemann == 0.0)
    assert np.all(cf.commutators == 0.0)


def test_quadratic_graph_hand_algebra():
    # f(x) = x1^2 in codimension one: g11 = 1 + 4 x1^2 and
    # Gamma^1_11 = 4 x1 / (1 + 4 x1^2)
    n = 3

    def evaluate(pts, order):
        x1 = pts[:, 0]
        f = (x1**2)[:, None]
        df = np.zeros((len(pts), 1, n))
        df[:, 0, 0] = 2 * x1
        out = [f, df]
        if order >= 2:
            d2 = np.zeros((len(pts), 1, n, n))
            d2[:, 0, 0, 0] = 2.0
            out.append(d2)
        if order >= 3:
            out.append(np.zeros((len(pts), 1, n, n, n)))
        return tuple(out)

    gmap = models.GraphMap(
        name="quadratic", n=n, m=1, tau=0.0,
        domain=models.DomainDescriptor(kind="full"),
        flat_normal_bundle=True, evaluate=evaluate,
    )
    x = np.array([0.7, -0.2, 0.4])
    pf = point_frame(gmap, x)
    assert pf.g[0, 0] == pytest.approx(1 + 4 * 0.7**2)
    assert pf.christoffel[0, 0, 0] == pytest.approx(4 * 0.7 / (1 + 4 * 0.7**2))
    assert pf.dg[0, 0, 0] == pytest.approx(8 * 0.7)


def test_tangent_lift_identity_and_dets(rng):
    gmap = models.build_model("schwarzschild-n3")
    for x in sample_exterior_points(gmap, 12, 3):
        pf = point_frame(gmap, x)
        lift_res = np.abs(
            np.einsum("ij,aj->ai", pf.g_inv, pf.f1)
            - np.einsum("ab,bi->ai", pf.u_inv, pf.f1)
        ).max()
        assert lift_res < 1e-12
        assert pf.det_g == pytest.approx(np.linalg.det(pf.u), rel=1e-12)
        np.linalg.cholesky(pf.g)  # positive definiteness


def test_domain_errors():
    gmap = models.build_model("schwarzschild-n3")
    inside = np.array([0.5, 0.5, 0.5])
    with pytest.raises(DomainError):
        point_frame(gmap, inside)
    with pytest.raises(DomainError):
        finite_difference_riemann(gmap, inside, 1e-3)


@pytest.mark.parametrize("name,r", [("radial-multigraph-n4", 1.7), ("skew-n4", 1.4)])
def test_fd_riemann_second_order_convergence(name, r, rng):
    gmap = models.build_model(name)
    x = rng.normal(size=gmap.n)
    x *= r / np.linalg.norm(x)
    cf = curvature_frame(gmap, point_frame(gmap, x))
    errors = []
    for h in (1e-2, 5e-3, 2.5e-3):
        errors.append(np.abs(finite_difference_riemann(gmap, x, h) - cf.riemann).max())
    slope = np.polyfit(np.log([1e-2, 5e-3, 2.5e-3]), np.log(errors), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)
    assert errors[-1] < 1e-5


def test_fd_riemann_flat():
    gmap = models.flat(3, 1)
    r_fd = finite_difference_riemann(gmap, np.array([1.0, 2.0, 0.5]), 1e-3)
    assert np.abs(r_fd).max() < 1e-12


def test_schwarzschild_scalar_flat_slice():
    gmap = models.build_model("schwarzschild-n3")
    for r in (3.0, 4.0, 8.0):
        x = np.array([r, 0.0, 0.0])
        cf = curvature_frame(gmap, point_frame(gmap, x))
        assert abs(lovelock_scalar(cf.riemann, 1)) < 1e-9
        # and the finite-difference route agrees with the Gauss equation
        if r == 4.0:
            r_fd = finite_difference_riemann(gmap, x, 1e-3)
            assert np.abs(r_fd - cf.riemann).max() < 1e-6


def test_riemann_symmetries(rng):
    gmap = models.build_model("skew-n4")
    x = rng.normal(size=4)
    x *= 1.5 / np.linalg.norm(x)
    pf = point_frame(gmap, x)
    cf = curvature_frame(gmap, pf)
    low = cf.riemann_low
    assert np.abs(low + low.transpose(1, 0, 2, 3)).max() < 1e-14
    assert np.abs(low + low.transpose(0, 1, 3, 2)).max() < 1e-14
    assert np.abs(low - low.transpose(2, 3, 0, 1)).max() < 1e-14


def test_commutators_flat_and_nonflat(rng):
    gmap = models.build_model("radial-multigraph-n4")
    for x in sample_exterior_points(gmap, 8, 5):
        cf = curvature_frame(gmap, point_frame(gmap, x))
        assert np.abs(cf.commutators).max() < 1e-10
    skew = models.build_model("skew-n4")
    cf = curvature_frame(skew, point_frame(skew, np.array([1.0, 1.0, 1.0, 0.3])))
    assert np.abs(cf.commutators).max() > 1e-3


def test_frames_batch_matches_pointwise(rng):
    for name in ("schwarzschild-n5-q2", "skew-n4"):
        gmap = models.build_model(name)
        pts = sample_exterior_points(gmap, 6, 11)
        fr = frames_batch(gmap, pts, need_dg=True)
        for idx, x in enumerate(pts):
            pf = point_frame(gmap, x)
            cf = curvature_frame(gmap, pf)
            np.testing.assert_allclose(fr["g"][idx], pf.g, atol=1e-13)
            np.testing.assert_allclose(fr["g_inv"][idx], pf.g_inv, atol=1e-13)
            np.testing.assert_allclose(fr["u_inv"][idx], pf.u_inv, atol=1e-13)
            np.testing.assert_allclose(fr["dg"][idx], pf.dg, atol=1e-13)
            np.testing.assert_allclose(fr["e_top"][idx], pf.tangent_lifts, atol=1e-13)
            np.testing.assert_allclose(fr["a"][idx], cf.a, atol=1e-13)
            np.testing.assert_allclose(fr["a_hat"][idx], cf.a_hat, atol=1e-12)
