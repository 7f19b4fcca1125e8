"""Independent brute-force oracles used to freeze expected values.

Nothing here shares code paths with the package kernels: deltas come from
numpy determinants, contraction sums enumerate full permutation lists, and
symmetric functions go through eigenvalues.
"""

import itertools
import math

import numpy as np


def delta_det(upper, lower) -> float:
    """Generalized Kronecker delta as a literal determinant."""
    k = len(upper)
    mat = np.array([[1.0 if u == l else 0.0 for l in lower] for u in upper])
    if k == 0:
        return 1.0
    return float(np.linalg.det(mat))


def naive_lovelock(riemann: np.ndarray, q: int) -> float:
    """Full permutation sum over subsets for the order-2q scalar."""
    n = riemann.shape[0]
    total = 0.0
    for subset in itertools.combinations(range(n), 2 * q):
        for up in itertools.permutations(subset):
            for lo in itertools.permutations(subset):
                d = round(delta_det(up, lo))
                if d == 0:
                    continue
                prod = float(d)
                for s in range(q):
                    prod *= riemann[up[2 * s], up[2 * s + 1], lo[2 * s], lo[2 * s + 1]]
                total += prod
    return total / 2**q


def dense_delta(n: int, k: int) -> np.ndarray:
    """Materialized generalized delta with k upper and k lower slots."""
    out = np.zeros((n,) * (2 * k))
    for subset in itertools.combinations(range(n), k):
        for up in itertools.permutations(subset):
            for lo in itertools.permutations(subset):
                out[up + lo] = round(delta_det(up, lo))
    return out


def naive_newton(inner: np.ndarray, last: np.ndarray, q: int) -> np.ndarray:
    """Newton transformation via a dense-delta einsum."""
    n = last.shape[0]
    k = 2 * q
    delta = dense_delta(n, k)
    labels = "abcdefgh"[: k - 1]
    lowers = "mnopqrst"[: k - 1]
    spec_in = labels + "j" + lowers + "i"
    blocks = []
    operands = []
    for s in range(q - 1):
        blocks.append(labels[2 * s] + lowers[2 * s] + labels[2 * s + 1] + lowers[2 * s + 1])
        operands.append(inner)
    blocks.append(labels[k - 2] + lowers[k - 2])
    operands.append(last)
    return (
        np.einsum(",".join([spec_in] + blocks) + "->ij", delta, *operands)
        / math.factorial(k - 1)
    )


def classical_newton_codim1(a_op: np.ndarray, r: int) -> np.ndarray:
    """Reilly recursion P_r = sigma_r I - A P_{r-1} for a single shape operator."""
    lam = np.linalg.eigvals(a_op)
    n = a_op.shape[0]
    out = np.eye(n)
    for k in range(1, r + 1):
        sigma = 0.0
        for subset in itertools.combinations(range(n), k):
            sigma += float(np.prod([lam[i] for i in subset]).real)
        out = sigma * np.eye(n) - a_op @ out
    return out


def elementary_symmetric(eigvals, r: int) -> float:
    total = 0.0
    for subset in itertools.combinations(range(len(eigvals)), r):
        total += float(np.prod([eigvals[i] for i in subset]))
    return total


def random_gauss_data(n: int, m: int, rng, scale: float = 0.6) -> dict:
    """Random graph-like pointwise data satisfying all curvature symmetries."""
    hess = rng.normal(size=(m, n, n))
    hess = (hess + hess.transpose(0, 2, 1)) / 2
    jac = rng.normal(size=(m, n)) * scale
    g = np.eye(n) + jac.T @ jac
    u = np.eye(m) + jac @ jac.T
    g_inv = np.linalg.inv(g)
    u_inv = np.linalg.inv(u)
    a_ops = np.einsum("aik,kj->aij", hess, g_inv)
    inner = np.einsum("aij,ab,bkl->ijkl", a_ops, u_inv, a_ops)
    ip = np.einsum("aik,ab,bjl->ijkl", hess, u_inv, hess)
    r_low = ip - ip.transpose(0, 1, 3, 2)
    riemann = np.einsum("ijkl,kc,ld->ijcd", r_low, g_inv, g_inv)
    w, v = np.linalg.eigh(u)
    a_hat = np.einsum("ab,bij->aij", (v / np.sqrt(w)) @ v.T, a_ops)
    return dict(
        hess=hess, jac=jac, g=g, u=u, g_inv=g_inv, u_inv=u_inv,
        a=a_ops, a_hat=a_hat, inner=inner, riemann=riemann, r_low=r_low,
    )
