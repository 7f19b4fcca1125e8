import numpy as np
import pytest

from gbcmass import models
from gbcmass.graph_geometry import curvature_frame, point_frame
from gbcmass.tensor_algebra import lovelock_scalar
from conftest import sample_exterior_points


def fd_derivative_residual(gmap, x, h=1e-5):
    n = gmap.n
    _, df, d2f, d3f = gmap.eval(x, order=3)
    worst = 0.0
    for i in range(n):
        step = np.zeros(n)
        step[i] = h
        up = gmap.eval(x + step, order=2)
        dn = gmap.eval(x - step, order=2)
        worst = max(worst, np.abs((up[0] - dn[0]) / (2 * h) - df[:, i]).max())
        worst = max(worst, np.abs((up[1] - dn[1]) / (2 * h) - d2f[:, :, i]).max())
        worst = max(worst, np.abs((up[2] - dn[2]) / (2 * h) - d3f[:, :, :, i]).max())
    return worst


@pytest.mark.parametrize("name", sorted(models.catalog()))
def test_analytic_derivatives_match_finite_differences(name, rng):
    gmap = models.build_model(name)
    pts = sample_exterior_points(gmap, 5, 23)
    for x in pts:
        assert fd_derivative_residual(gmap, x) < 5e-7


def test_capped_profile_inside_transition():
    gmap = models.schwarzschild_capped(3, 1, 1.0)
    x = np.array([5.0, 0.0, 0.0])  # inside the cap window [4, 6]
    assert fd_derivative_residual(gmap, x) < 5e-7
    _, df = gmap.eval(x, order=1)
    assert 0.0 < np.linalg.norm(df) < 1.0


@pytest.mark.parametrize("name", sorted(models.catalog()))
def test_declared_decay_order(name):
    gmap = models.build_model(name)
    gen = np.random.default_rng(5)
    r0 = gmap.domain.circumscribed_radius() + 2.0
    radii = r0 * np.array([8.0, 16.0, 32.0, 64.0])
    vals = []
    for r in radii:
        theta = gen.normal(size=gmap.n)
        theta /= np.linalg.norm(theta)
        _, f1 = gmap.eval(r * theta, order=1)
        vals.append(np.linalg.norm(f1))
    vals = np.asarray(vals)
    if vals.max() < 1e-14:
        return  # identically flat
    tau_est = -2.0 * np.polyfit(np.log(radii), np.log(vals), 1)[0]
    assert tau_est == pytest.approx(gmap.tau, abs=0.3)


def test_schwarzschild_reference_values():
    gmap = models.schwarzschild_graph(3, 1, 1.0)
    assert models.horizon_radius(3, 1, 1.0) == pytest.approx(2.0)
    assert gmap.reference["horizon_radius"] == pytest.approx(2.0)
    gmap5 = models.schwarzschild_graph(5, 2, 1.0)
    assert models.horizon_radius(5, 2, 1.0) == pytest.approx(4.0)
    assert gmap5.reference["mass"] == pytest.approx(1.0)


def test_schwarzschild_radial_metric_coefficient():
    # 1 + f'(s)^2 must equal (1 - phi)^{-1} with phi = 2 m s^{-(n-2q)/q}
    for n, q in ((3, 1), (5, 2)):
        gmap = models.schwarzschild_graph(n, q, 1.0)
        s = 3.0 * models.horizon_radius(n, q, 1.0)
        x = np.zeros(n)
        x[0] = s
        _, df = gmap.eval(x, order=1)
        phi = 2.0 * s ** (-(n - 2 * q) / q)
        assert 1.0 + float(df[0, 0] ** 2) == pytest.approx(1.0 / (1.0 - phi), rel=1e-12)


def test_schwarzschild_lovelock_sign_sampled():
    gmap = models.schwarzschild_graph(5, 2, 1.0)
    for x in sample_exterior_points(gmap, 10, 2):
        cf = curvature_frame(gmap, point_frame(gmap, x))
        assert lovelock_scalar(cf.riemann, 2) > -1e-10


def test_domain_error_below_horizon():
    gmap = models.schwarzschild_graph(3, 1, 1.0)
    with pytest.raises(Exception):
        gmap.eval(np.array([1.0, 0.0, 0.0]), order=1)


def test_multigraph_single_profile_matches_codim1(rng):
    profile = models.bounded_mass_profile(4, 0.5)
    multi = models.radial_multigraph(4, [profile])
    single = models.GraphMap(
        name="single", n=4, m=1, tau=2.0,
        domain=models.DomainDescriptor(kind="full"),
        flat_normal_bundle=True,
        evaluate=models._radial_eval([models.bounded_mass_profile(4, 0.5)], 4),
    )
    x = rng.normal(size=4) * 2.0
    out_m = multi.eval(x, order=3)
    out_s = single.eval(x, order=3)
    for a, b in zip(out_m, out_s):
        np.testing.assert_array_equal(a, b)


def test_aligned_multigraph_profiles_commute(rng):
    gmap = models.build_model("radial-multigraph-n4")
    x = rng.normal(size=4) * 3.0
    cf = curvature_frame(gmap, point_frame(gmap, x))
    assert np.abs(cf.commutators).max() < 1e-12


def test_skew_commutator_magnitude():
    gmap = models.build_model("skew-n4")
    cf = curvature_frame(gmap, point_frame(gmap, np.array([1.0, 1.0, 1.0, 0.2])))
    assert np.abs(cf.commutators).max() > 1e-3


def test_perturbed_eps_zero_identical_to_base(rng):
    base = models.schwarzschild_graph(3, 1, 1.0)
    pert = models.perturbed_schwarzschild(3, 1, 1.0, eps=0.0)
    for x in sample_exterior_points(base, 4, 9):
        out_b = base.eval(x, order=3)
        out_p = pert.eval(x, order=3)
        for a, b in zip(out_b, out_p):
            np.testing.assert_array_equal(a, b)


def test_capped_matches_schwarzschild_outside_cap():
    capped = models.schwarzschild_capped(3, 1, 1.0, cap=(2.0, 3.0))
    base = models.schwarzschild_graph(3, 1, 1.0)
    x = np.array([0.0, 7.5, 0.0])  # outside the cap window [4, 6]
    out_c = capped.eval(x, order=2)
    out_b = base.eval(x, order=2)
    np.testing.assert_allclose(out_c[1], out_b[1], atol=1e-13)
    np.testing.assert_allclose(out_c[2], out_b[2], atol=1e-13)


def test_corrupted_variant_changes_only_requested_order(rng):
    base = models.build_model("schwarzschild-n3")
    bad = models.corrupted_variant(base, which="d2f", scale=1.01)
    x = np.array([3.0, 1.0, 0.5])
    out_b = base.eval(x, order=3)
    out_c = bad.eval(x, order=3)
    np.testing.assert_array_equal(out_b[1], out_c[1])
    assert np.abs(out_b[2] - out_c[2]).max() > 0.0


def test_rotated_variant_preserves_frames(rng):
    gmap = models.build_model("skew-n4")
    q_mat, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    rot = models.rotated_variant(gmap, q_mat)
    x = rng.normal(size=4) * 2.0
    assert fd_derivative_residual(rot, x) < 5e-7
    # scalar invariants agree between x (rotated model) and Qx (base model)
    cf_rot = curvature_frame(rot, point_frame(rot, x))
    cf_base = curvature_frame(gmap, point_frame(gmap, q_mat @ x))
    assert lovelock_scalar(cf_rot.riemann, 1) == pytest.approx(
        lovelock_scalar(cf_base.riemann, 1), rel=1e-10, abs=1e-12
    )
