"""Pointwise differential geometry of Euclidean graphs.

A graph map f: R^n \\ Omega -> R^m induces on its graph the metric
g_ij = delta_ij + f^a_i f^a_j.  This module assembles, at a point, the
first-order data (metric, inverse, normal metric, Christoffels, metric
derivatives, tangent lifts) and the curvature data (second fundamental
forms, shape operators, Gauss-equation Riemann tensor, normal-bundle
commutators), all from a single evaluation of the map's analytic
derivatives.  A finite-difference curvature builder from the metric alone
is included as an independent oracle for tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .surfaces import DomainDescriptor

__all__ = [
    "GraphMap",
    "PointFrame",
    "CurvatureFrame",
    "DomainError",
    "point_frame",
    "curvature_frame",
    "finite_difference_riemann",
    "frames_batch",
]


class DomainError(ValueError):
    """Evaluation requested outside the interior of the base domain."""


@dataclass(frozen=True)
class GraphMap:
    """Evaluatable graph function with analytic derivatives to 3rd order.

    `evaluate` maps a batch of base points (N, n) to the tuple
    (f, Df, D2f, D3f) with shapes (N, m), (N, m, n), (N, m, n, n),
    (N, m, n, n, n); trailing entries may be omitted when a lower `order`
    is requested.  Evaluators must be reentrant: frames are values and
    concurrent pointwise evaluation across quadrature nodes is the
    intended usage.
    """

    name: str
    n: int
    m: int
    tau: float
    domain: DomainDescriptor
    flat_normal_bundle: bool
    evaluate: Callable = field(repr=False)
    supported_q: tuple = ()
    reference: dict = field(default_factory=dict)

    def eval(self, x: np.ndarray, order: int = 3):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        if pts.shape[1] != self.n:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {self.n}")
        out = self.evaluate(pts, order)
        if single:
            out = tuple(a[0] if a is not None else None for a in out)
        return out

    def require_interior(self, x: np.ndarray, margin: float = 0.0):
        if not self.domain.strictly_exterior(x, margin=margin):
            raise DomainError(f"point {np.asarray(x)} is not interior to the domain of {self.name}")


@dataclass(frozen=True)
class PointFrame:
    """All first-order pointwise data of the graph at x.

    christoffel is indexed [k, i, j] = Gamma^k_ij and dg is indexed
    [j, k, l] = g_jk,l.
    """

    x: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    det_g: float
    u: np.ndarray
    u_inv: np.ndarray
    christoffel: np.ndarray
    dg: np.ndarray
    tangent_lifts: np.ndarray


@dataclass(frozen=True)
class CurvatureFrame:
    """Second-order data: fundamental forms, curvature, normal commutators.

    riemann holds the mixed components R_ab^cd obtained from the Gauss
    equation; commutators[alpha, beta] holds the matrix of
    A_alpha A_beta - A_beta A_alpha, which by the Ricci equation is the
    normal curvature paired against the frame.
    """

    b: np.ndarray
    a: np.ndarray
    a_hat: np.ndarray
    inner: np.ndarray
    riemann: np.ndarray
    riemann_low: np.ndarray
    commutators: np.ndarray


def point_frame(gmap: GraphMap, x: np.ndarray) -> PointFrame:
    """Assemble the PointFrame at an interior point from one evaluation."""
    gmap.require_interior(x)
    _, f1, f2 = gmap.eval(x, order=2)
    n = gmap.n
    g = np.eye(n) + f1.T @ f1
    u = np.eye(gmap.m) + f1 @ f1.T
    g_inv = np.linalg.inv(g)
    u_inv = np.linalg.inv(u)
    det_g = float(np.linalg.det(g))
    dg = np.einsum("ajl,ak->jkl", f2, f1) + np.einsum("aj,akl->jkl", f1, f2)
    christoffel = np.einsum("kl,al,aij->kij", g_inv, f1, f2)
    lifts = np.einsum("ij,aj->ai", g_inv, f1)
    return PointFrame(
        x=np.asarray(x, dtype=float),
        f1=f1,
        f2=f2,
        g=g,
        g_inv=g_inv,
        det_g=det_g,
        u=u,
        u_inv=u_inv,
        christoffel=christoffel,
        dg=dg,
        tangent_lifts=lifts,
    )


def _inv_sqrt_spd(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    return (v / np.sqrt(w)) @ v.T


def curvature_frame(gmap: GraphMap, pf: PointFrame) -> CurvatureFrame:
    """Curvature data at the point of `pf` via the Gauss and Ricci equations."""
    f2 = pf.f2
    a_ops = np.einsum("aik,kj->aij", f2, pf.g_inv)
    a_hat = np.einsum("ab,bij->aij", _inv_sqrt_spd(pf.u), a_ops)
    inner = np.einsum("aij,ab,bkl->ijkl", a_ops, pf.u_inv, a_ops)
    # ip[i,j,k,l] = <B_ik, B_jl>; Gauss equation R_ijkl = ip - (k <-> l)
    ip = np.einsum("aik,ab,bjl->ijkl", f2, pf.u_inv, f2)
    riemann_low = ip - ip.transpose(0, 1, 3, 2)
    riemann = np.einsum("ijkl,kc,ld->ijcd", riemann_low, pf.g_inv, pf.g_inv)
    m = gmap.m
    comm = np.empty((m, m, gmap.n, gmap.n))
    for alpha in range(m):
        for beta in range(m):
            comm[alpha, beta] = a_ops[alpha] @ a_ops[beta] - a_ops[beta] @ a_ops[alpha]
    return CurvatureFrame(
        b=f2,
        a=a_ops,
        a_hat=a_hat,
        inner=inner,
        riemann=riemann,
        riemann_low=riemann_low,
        commutators=comm,
    )


def _metric_at(gmap: GraphMap, x: np.ndarray) -> np.ndarray:
    _, f1 = gmap.eval(x, order=1)
    return np.eye(gmap.n) + f1.T @ f1


def _christoffel_fd(gmap: GraphMap, x: np.ndarray, h: float) -> np.ndarray:
    """Gamma^k_ij from central differences of the metric, indexed [k, i, j]."""
    n = gmap.n
    dg = np.empty((n, n, n))  # dg[l, i, j] = g_ij,l
    for l in range(n):
        step = np.zeros(n)
        step[l] = h
        dg[l] = (_metric_at(gmap, x + step) - _metric_at(gmap, x - step)) / (2 * h)
    g_inv = np.linalg.inv(_metric_at(gmap, x))
    # Gamma^k_ij = (1/2) g^kl (g_li,j + g_lj,i - g_ij,l)
    sym = np.einsum("jli->ijl", dg) + np.einsum("ilj->ijl", dg) - np.einsum("lij->ijl", dg)
    return 0.5 * np.einsum("kl,ijl->kij", g_inv, sym)


def finite_difference_riemann(gmap: GraphMap, x: np.ndarray, h: float) -> np.ndarray:
    """Mixed Riemann tensor from the metric alone, by nested central differences.

    Independent of the Gauss-equation route (uses only first derivatives of
    the map, through the metric); accuracy is O(h^2).  The returned array
    follows the same sign and index convention as CurvatureFrame.riemann,
    namely R_ij^kl with R_ijij > 0 on convex graphs.
    """
    x = np.asarray(x, dtype=float)
    gmap.require_interior(x, margin=0.0)
    n = gmap.n
    gamma0 = _christoffel_fd(gmap, x, h)
    dgamma = np.empty((n, n, n, n))  # dgamma[d, k, i, j] = d_d Gamma^k_ij
    for d in range(n):
        step = np.zeros(n)
        step[d] = h
        dgamma[d] = (
            _christoffel_fd(gmap, x + step, h) - _christoffel_fd(gmap, x - step, h)
        ) / (2 * h)
    # Curvature of the Levi-Civita connection in coordinates:
    # Rop[i,j,k,p] = d_i Gamma^p_jk - d_j Gamma^p_ik
    #               + Gamma^q_jk Gamma^p_iq - Gamma^q_ik Gamma^p_jq
    rop = (
        np.einsum("ipjk->ijkp", dgamma)
        - np.einsum("jpik->ijkp", dgamma)
        + np.einsum("qjk,piq->ijkp", gamma0, gamma0)
        - np.einsum("qik,pjq->ijkp", gamma0, gamma0)
    )
    g = _metric_at(gmap, x)
    low = np.einsum("ijkp,pl->ijkl", rop, g)
    # Map to the Gauss-equation convention: R_ijkl = low[k,l,j,i] (fixed by
    # the convex-graph sign and validated by the h-refinement tests).
    low_conv = low.transpose(2, 3, 1, 0)
    g_inv = np.linalg.inv(g)
    return np.einsum("ijkl,kc,ld->ijcd", low_conv, g_inv, g_inv)


def frames_batch(gmap: GraphMap, x: np.ndarray, need_dg: bool = False) -> dict:
    """Vectorized frame data over a batch of points, for quadrature loops.

    Returns a dict of arrays keyed like the pointwise frames; cross-checked
    against point_frame/curvature_frame in the test suite.
    """
    x = np.asarray(x, dtype=float)
    _, f1, f2 = gmap.evaluate(x, 2)
    batch, n = x.shape
    m = gmap.m
    g = np.eye(n)[None] + np.einsum("bai,baj->bij", f1, f1)
    u = np.eye(m)[None] + np.einsum("bai,bci->bac", f1, f1)
    g_inv = np.linalg.inv(g)
    u_inv = np.linalg.inv(u)
    det_g = np.linalg.det(g)
    a_ops = np.einsum("baik,bkj->baij", f2, g_inv)
    w, v = np.linalg.eigh(u)
    u_inv_sqrt = np.einsum("bac,bc,bdc->bad", v, 1.0 / np.sqrt(w), v)
    a_hat = np.einsum("bac,bcij->baij", u_inv_sqrt, a_ops)
    e_top = np.einsum("bij,baj->bai", g_inv, f1)
    out = dict(
        f1=f1, f2=f2, g=g, g_inv=g_inv, det_g=det_g, u=u, u_inv=u_inv,
        a=a_ops, a_hat=a_hat, e_top=e_top,
    )
    if need_dg:
        out["dg"] = np.einsum("bajl,bak->bjkl", f2, f1) + np.einsum(
            "baj,bakl->bjkl", f1, f2
        )
    return out
