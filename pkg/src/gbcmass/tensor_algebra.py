"""Antisymmetrized contraction kernels.

Generalized Kronecker deltas and the delta-weighted products built from
them: Lovelock-type curvature scalars, generalized Newton transformations,
the flux contraction of metric derivatives, and elementary symmetric
curvature functions of a shape operator.

Index conventions used throughout the package:

* matrices M[a, b] hold the mixed components M_a^b, first index is the
  input (lower) slot, second the output (upper) slot, so a linear map
  acts as ``w = v @ M``;
* rank-4 curvature arrays R[a, b, c, d] hold R_{ab}^{cd}, lower pair
  (a, b), upper pair (c, d).

The permutation sums are pruned: sorted index subsets are enumerated once
and the multiplicity of the folded orderings (2^q q! for the pair-symmetric
curvature blocks, another 2^q for the upper pairs) is applied analytically.
All reductions accumulate in a fixed order, so results are deterministic
run to run.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "gen_kronecker_delta",
    "lovelock_scalar",
    "newton_tensor",
    "p_tensor_contract_flux",
    "mean_curvature_r",
    "permutation_parity",
]


def permutation_parity(perm) -> int:
    """Sign of a permutation given as a sequence of distinct comparables."""
    perm = list(perm)
    k = len(perm)
    order = sorted(range(k), key=perm.__getitem__)
    seen = [False] * k
    sign = 1
    for start in range(k):
        if seen[start]:
            continue
        length = 0
        node = start
        while not seen[node]:
            seen[node] = True
            node = order[node]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def gen_kronecker_delta(upper, lower) -> int:
    """Generalized Kronecker delta of two equal-length index lists.

    Equals the determinant of the matrix (delta^{upper_i}_{lower_j}); it is
    0 when either list repeats an entry or the index sets differ, otherwise
    +-1 with the parity of the permutation taking `lower` to `upper`.
    """
    upper = tuple(upper)
    lower = tuple(lower)
    if len(upper) != len(lower):
        raise ValueError(
            f"index lists must have equal length, got {len(upper)} and {len(lower)}"
        )
    if len(set(upper)) != len(upper) or len(set(lower)) != len(lower):
        return 0
    if set(upper) != set(lower):
        return 0
    pos = {v: i for i, v in enumerate(lower)}
    return permutation_parity([pos[v] for v in upper])


@lru_cache(maxsize=None)
def _pair_matchings(k: int):
    """Perfect matchings of range(k) as flat slot orderings, k even."""
    if k == 0:
        return ((),)
    out = []

    def rec(remaining, acc):
        if not remaining:
            out.append(tuple(acc))
            return
        first = remaining[0]
        for j in range(1, len(remaining)):
            rec(
                remaining[1:j] + remaining[j + 1 :],
                acc + [first, remaining[j]],
            )

    rec(tuple(range(k)), [])
    return tuple(out)


@lru_cache(maxsize=None)
def _pair_sorted_perms(k: int):
    """Permutations of range(k) with each slot pair ascending, with signs."""
    out = []
    for perm in itertools.permutations(range(k)):
        if all(perm[2 * s] < perm[2 * s + 1] for s in range(k // 2)):
            out.append((perm, permutation_parity(perm)))
    return tuple(out)


def _check_riemann(riemann: np.ndarray) -> int:
    riemann = np.asarray(riemann)
    if riemann.ndim != 4 or len(set(riemann.shape)) != 1:
        raise ValueError("riemann must be an (n, n, n, n) array")
    return riemann.shape[0]


def lovelock_scalar(riemann: np.ndarray, q: int) -> float:
    """Lovelock curvature scalar of order 2q from a mixed Riemann array.

    Evaluates (1/2^q) delta^{a1..a2q}_{b1..b2q} prod_s R_{a a}^{b b} by
    enumerating sorted 2q-subsets, the pair matchings of each subset for the
    lower slots, and pair-ascending permutations for the upper slots; the
    folded multiplicity is 2^q q! per ordering class and 2^q for the upper
    pairs, which cancels the 1/2^q prefactor into an overall 2^q q!.
    """
    n = _check_riemann(riemann)
    if not 1 <= q <= n // 2:
        raise ValueError(f"q={q} out of range for dimension n={n}")
    k = 2 * q
    matchings = _pair_matchings(k)
    perms = _pair_sorted_perms(k)
    pieces = []
    for subset in itertools.combinations(range(n), k):
        acc = 0.0
        for rho in matchings:
            low = [subset[r] for r in rho]
            for perm, sign in perms:
                prod = 1.0
                for s in range(q):
                    prod *= riemann[
                        low[2 * s],
                        low[2 * s + 1],
                        subset[rho[perm[2 * s]]],
                        subset[rho[perm[2 * s + 1]]],
                    ]
                acc += sign * prod
        pieces.append(acc)
    return (2**q) * math.factorial(q) * _pairwise_sum(pieces)


def _pairwise_sum(values) -> float:
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return float(vals[0])


def newton_tensor(inner: np.ndarray, last: np.ndarray, q: int) -> np.ndarray:
    """Generalized Newton transformation of degree 2q-1.

    `inner` is the rank-4 array of normal-bundle inner products
    <B_a^b, B_c^d> and `last` the mixed shape-operator factor occupying the
    final contracted slot.  Entry (i, j) is

        (1/(2q-1)!) delta^{a1..a_{2q-1} j}_{b1..b_{2q-1} i}
            inner[a1,b1,a2,b2] ... inner[.., ..] last[a_{2q-1}, b_{2q-1}]
    """
    inner = np.asarray(inner, dtype=float)
    last = np.asarray(last, dtype=float)
    n = last.shape[0]
    if not 1 <= q < n / 2:
        raise ValueError(f"q={q} out of range for dimension n={n}")
    k = 2 * q
    norm = 1.0 / math.factorial(k - 1)
    result = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            need = {i, j}
            pieces = []
            for extra in itertools.combinations(
                [v for v in range(n) if v not in need], k - len(need)
            ):
                subset = tuple(sorted(need | set(extra)))
                rest_upper = [v for v in subset if v != j]
                rest_lower = [v for v in subset if v != i]
                acc = 0.0
                for a_list in itertools.permutations(rest_upper):
                    uppers = a_list + (j,)
                    for b_list in itertools.permutations(rest_lower):
                        sign = gen_kronecker_delta(uppers, b_list + (i,))
                        prod = float(sign)
                        for s in range(q - 1):
                            prod *= inner[
                                a_list[2 * s],
                                b_list[2 * s],
                                a_list[2 * s + 1],
                                b_list[2 * s + 1],
                            ]
                        prod *= last[a_list[k - 2], b_list[k - 2]]
                        acc += prod
                pieces.append(acc)
            result[i, j] = norm * _pairwise_sum(pieces)
    return result


def p_tensor_contract_flux(
    riemann: np.ndarray,
    dg: np.ndarray,
    inverse_metric: np.ndarray,
    q: int,
) -> np.ndarray:
    """Flux vector X^i = P^{ijkl} g_{jk,l} without materializing P.

    The two trailing inverse-metric factors of the P tensor are absorbed
    into V^{cd}_j = g^{ck} g^{dl} g_{jk,l} before the delta contraction.
    """
    riemann = np.asarray(riemann, dtype=float)
    dg = np.asarray(dg, dtype=float)
    g_inv = np.asarray(inverse_metric, dtype=float)
    n = g_inv.shape[0]
    if not 1 <= q < n / 2:
        raise ValueError(f"q={q} out of range for dimension n={n}")
    k = 2 * q
    v = np.einsum("ck,dl,jkl->cdj", g_inv, g_inv, dg)
    x = np.zeros(n)
    for i in range(n):
        pieces = []
        for extra in itertools.combinations(
            [t for t in range(n) if t != i], k - 1
        ):
            subset = tuple(sorted((i,) + extra))
            acc = 0.0
            for j in extra:
                rest = [t for t in subset if t != i and t != j]
                for a_list in itertools.permutations(rest):
                    uppers = a_list + (i, j)
                    for lowers in itertools.permutations(subset):
                        sign = gen_kronecker_delta(uppers, lowers)
                        if sign == 0:
                            continue
                        prod = float(sign)
                        for s in range(q - 1):
                            prod *= riemann[
                                a_list[2 * s],
                                a_list[2 * s + 1],
                                lowers[2 * s],
                                lowers[2 * s + 1],
                            ]
                        prod *= v[lowers[k - 2], lowers[k - 1], j]
                        acc += prod
            pieces.append(acc)
        x[i] = _pairwise_sum(pieces) / 2**q
    return x


def mean_curvature_r(shape_operator: np.ndarray, r: int) -> float:
    """r-th mean curvature (1/r!) delta^{a..}_{b..} prod K_a^b.

    Folding the delta reduces this to the sum of principal r x r minors of
    the mixed shape operator, so the unit sphere of dimension d has value
    binomial(d, r).
    """
    shape_op = np.asarray(shape_operator, dtype=float)
    d = shape_op.shape[0]
    if not 1 <= r <= d:
        raise ValueError(f"r={r} out of range for hypersurface dimension {d}")
    pieces = []
    for subset in itertools.combinations(range(d), r):
        sub = shape_op[np.ix_(subset, subset)]
        pieces.append(float(np.linalg.det(sub)))
    return _pairwise_sum(pieces)
