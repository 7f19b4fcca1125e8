import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbcmass.tensor_algebra import (
    gen_kronecker_delta,
    lovelock_scalar,
    mean_curvature_r,
    newton_tensor,
    p_tensor_contract_flux,
)
from oracles import (
    classical_newton_codim1,
    delta_det,
    elementary_symmetric,
    naive_lovelock,
    naive_newton,
    random_gauss_data,
)


class TestGenKroneckerDelta:
    def test_identity_permutation(self):
        assert gen_kronecker_delta((1, 2), (1, 2)) == 1

    def test_transposition(self):
        assert gen_kronecker_delta((1, 2), (2, 1)) == -1

    def test_repeated_lower(self):
        assert gen_kronecker_delta((1, 2), (1, 1)) == 0

    def test_disjoint_sets(self):
        assert gen_kronecker_delta((0, 1), (2, 3)) == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            gen_kronecker_delta((1, 2, 3), (1, 2))

    def test_random_length4_against_determinant(self, rng):
        for _ in range(300):
            up = tuple(rng.integers(0, 6, size=4))
            lo = tuple(rng.integers(0, 6, size=4))
            assert gen_kronecker_delta(up, lo) == round(delta_det(up, lo))

    @settings(max_examples=150, deadline=None)
    @given(
        up=st.lists(st.integers(0, 7), min_size=2, max_size=5),
        swap=st.data(),
    )
    def test_antisymmetry_under_swaps(self, up, swap):
        lo = swap.draw(st.permutations(up))
        base = gen_kronecker_delta(up, lo)
        i, j = swap.draw(
            st.tuples(st.integers(0, len(up) - 1), st.integers(0, len(up) - 1))
        )
        swapped = list(up)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        flipped = gen_kronecker_delta(swapped, lo)
        if i == j or up[i] == up[j]:
            assert flipped == base
        else:
            assert flipped == -base


class TestLovelockScalar:
    def test_flat_space(self):
        assert lovelock_scalar(np.zeros((4, 4, 4, 4)), 1) == 0.0
        assert lovelock_scalar(np.zeros((4, 4, 4, 4)), 2) == 0.0

    def test_q1_is_scalar_curvature(self, rng):
        for n in (3, 4, 5):
            data = random_gauss_data(n, 2, rng)
            riem = data["riemann"]
            double_loop = 2.0 * sum(
                riem[a, b, a, b] for a in range(n) for b in range(a + 1, n)
            )
            assert lovelock_scalar(riem, 1) == pytest.approx(double_loop, rel=1e-13)

    def test_round_four_sphere(self):
        n, rho = 4, 1.3
        eye = np.eye(n)
        riem = (np.einsum("ac,bd->abcd", eye, eye) - np.einsum("ad,bc->abcd", eye, eye)) / rho**2
        value = lovelock_scalar(riem, 2)
        assert value == pytest.approx(24.0 / rho**4, rel=1e-13)
        assert value == pytest.approx(naive_lovelock(riem, 2), rel=1e-13)

    @pytest.mark.parametrize("n,m,q", [(4, 1, 1), (5, 2, 1), (4, 2, 2), (5, 1, 2), (6, 2, 2), (6, 1, 3)])
    def test_pruned_matches_naive_permutation_sum(self, n, m, q, rng):
        data = random_gauss_data(n, m, rng)
        ours = lovelock_scalar(data["riemann"], q)
        naive = naive_lovelock(data["riemann"], q)
        assert ours == pytest.approx(naive, rel=1e-12, abs=1e-12)

    def test_basis_relabeling_invariance(self, rng):
        n = 5
        data = random_gauss_data(n, 2, rng)
        riem = data["riemann"]
        perm = rng.permutation(n)
        relabeled = riem[np.ix_(perm, perm, perm, perm)]
        for q in (1, 2):
            assert lovelock_scalar(relabeled, q) == pytest.approx(
                lovelock_scalar(riem, q), rel=1e-12
            )

    def test_q_out_of_range(self):
        with pytest.raises(ValueError):
            lovelock_scalar(np.zeros((4, 4, 4, 4)), 3)


class TestNewtonTensor:
    def test_zero_input(self):
        n = 5
        assert np.all(newton_tensor(np.zeros((n, n, n, n)), np.zeros((n, n)), 2) == 0.0)

    def test_codim1_first_newton(self, rng):
        data = random_gauss_data(5, 1, rng)
        t1 = newton_tensor(data["inner"], data["a"][0], 1)
        a_op = data["a"][0]
        classical = np.trace(a_op) * np.eye(5) - a_op
        np.testing.assert_allclose(t1, classical, atol=1e-13)

    @pytest.mark.parametrize("q", [1, 2])
    def test_codim1_reilly_recursion(self, q, rng):
        data = random_gauss_data(5, 1, rng)
        a_op = data["a"][0]
        df2 = float(data["jac"][0] @ data["jac"][0])
        ours = newton_tensor(data["inner"], a_op, q)
        oracle = classical_newton_codim1(a_op, 2 * q - 1) * (1.0 + df2) ** (1 - q)
        np.testing.assert_allclose(ours, oracle, atol=1e-12)

    @pytest.mark.parametrize("n,m,q", [(4, 2, 1), (5, 2, 2), (6, 1, 2)])
    def test_matches_dense_delta_einsum(self, n, m, q, rng):
        data = random_gauss_data(n, m, rng)
        ours = newton_tensor(data["inner"], data["a"][0], q)
        oracle = naive_newton(data["inner"], data["a"][0], q)
        np.testing.assert_allclose(ours, oracle, rtol=1e-12, atol=1e-12)

    def test_symmetric_after_lowering_when_operators_commute(self, rng):
        # aligned radial-style hessians commute; T with the index lowered by
        # g must come out symmetric
        n, m = 4, 2
        jac = np.stack([0.3 * np.arange(1.0, n + 1), 0.1 * np.arange(1.0, n + 1)])
        base = rng.normal(size=(n, n))
        base = base + base.T
        hess = np.stack([0.7 * base, 0.2 * base])
        g = np.eye(n) + jac.T @ jac
        u = np.eye(m) + jac @ jac.T
        g_inv, u_inv = np.linalg.inv(g), np.linalg.inv(u)
        a_ops = np.einsum("aik,kj->aij", hess, g_inv)
        comm = a_ops[0] @ a_ops[1] - a_ops[1] @ a_ops[0]
        assert np.abs(comm).max() < 1e-12
        inner = np.einsum("aij,ab,bkl->ijkl", a_ops, u_inv, a_ops)
        t_op = newton_tensor(inner, a_ops[0], 1)
        lowered = t_op @ g  # T_i^j g_jk
        np.testing.assert_allclose(lowered, lowered.T, atol=1e-11)

    def test_q_out_of_range(self):
        n = 4
        with pytest.raises(ValueError):
            newton_tensor(np.zeros((n, n, n, n)), np.zeros((n, n)), 2)


class TestFluxContraction:
    def test_zero_metric_derivative(self, rng):
        data = random_gauss_data(5, 2, rng)
        x = p_tensor_contract_flux(data["riemann"], np.zeros((5, 5, 5)), data["g_inv"], 2)
        assert np.all(x == 0.0)

    def test_q1_direct_four_loop(self, rng):
        n = 4
        data = random_gauss_data(n, 2, rng)
        dg = rng.normal(size=(n, n, n))
        dg = (dg + dg.transpose(1, 0, 2)) / 2
        ours = p_tensor_contract_flux(data["riemann"], dg, data["g_inv"], 1)
        gi = data["g_inv"]
        direct = np.zeros(n)
        for i, j, k, l in itertools.product(range(n), repeat=4):
            direct[i] += 0.5 * (gi[i, k] * gi[j, l] - gi[j, k] * gi[i, l]) * dg[j, k, l]
        np.testing.assert_allclose(ours, direct, atol=1e-13)

    def test_q_out_of_range(self):
        n = 4
        with pytest.raises(ValueError):
            p_tensor_contract_flux(np.zeros((n,) * 4), np.zeros((n,) * 3), np.eye(n), 2)


class TestMeanCurvature:
    def test_round_sphere_binomials(self):
        for dim, rho in ((2, 1.0), (4, 2.0)):
            shape_op = np.eye(dim) / rho
            for r in range(1, dim + 1):
                expected = math.comb(dim, r) * rho ** (-r)
                assert mean_curvature_r(shape_op, r) == pytest.approx(expected, rel=1e-13)

    def test_zero_operator(self):
        for r in (1, 2, 3):
            assert mean_curvature_r(np.zeros((4, 4)), r) == 0.0

    def test_eigenvalue_oracle(self, rng):
        shape_op = rng.normal(size=(4, 4))
        shape_op = (shape_op + shape_op.T) / 2
        lam = np.linalg.eigvalsh(shape_op)
        assert mean_curvature_r(shape_op, 2) == pytest.approx(
            elementary_symmetric(lam, 2), rel=1e-12
        )

    def test_range_errors(self):
        with pytest.raises(ValueError):
            mean_curvature_r(np.eye(3), 0)
        with pytest.raises(ValueError):
            mean_curvature_r(np.eye(3), 4)
