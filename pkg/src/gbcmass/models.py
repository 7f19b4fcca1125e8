"""Model catalog: analytic graph maps with derivatives to third order.

Radial models are built from scalar slope profiles w(s) = psi'(s) supplied
with two further derivatives in closed form; the height psi itself is only
needed for reporting and is accumulated by cached Gauss-Legendre panels.
The q-Schwarzschild graph is constructed in areal coordinates by matching
the radial metric coefficient 1 + w^2 = (1 - phi)^{-1} with
phi(s) = 2 m s^{-(n-2q)/q}, defined for s above the horizon radius
r0 = (2m)^{q/(n-2q)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import roots_legendre

from .graph_geometry import DomainError, GraphMap
from .surfaces import DomainDescriptor, EllipsoidBoundary, SphereBoundary

__all__ = [
    "flat",
    "schwarzschild_graph",
    "schwarzschild_capped",
    "radial_multigraph",
    "bounded_mass_multigraph",
    "bounded_mass_exterior",
    "bounded_mass_profile",
    "skew_graph",
    "perturbed_schwarzschild",
    "ellipsoid_level_graph",
    "catalog",
    "build_model",
    "corrupted_variant",
    "horizon_radius",
]


# ---------------------------------------------------------------------------
# scalar profile machinery


def _poly_ratio_derivs(p_coeffs, q_coeffs, s):
    """Value and first three derivatives of P(s)/Q(s) for polynomials P, Q."""
    pd = [npoly.polyval(s, npoly.polyder(p_coeffs, k) if k else p_coeffs) for k in range(4)]
    qd = [npoly.polyval(s, npoly.polyder(q_coeffs, k) if k else q_coeffs) for k in range(4)]
    c0 = pd[0] / qd[0]
    c1 = (pd[1] - c0 * qd[1]) / qd[0]
    c2 = (pd[2] - 2 * c1 * qd[1] - c0 * qd[2]) / qd[0]
    c3 = (pd[3] - 3 * c2 * qd[1] - 3 * c1 * qd[2] - c0 * qd[3]) / qd[0]
    return c0, c1, c2, c3


def _sqrt_ratio_chain(c0, c1, c2, c3):
    """Derivatives of w = sqrt(c/(1-c)) from derivatives of c, for 0 < c < 1."""
    om = 1.0 - c0
    y0 = c0 / om
    y1 = c1 / om**2
    y2 = (c2 * om + 2 * c1**2) / om**3
    y3 = (c3 * om**2 + 6 * c2 * c1 * om + 6 * c1**3) / om**4
    w0 = np.sqrt(y0)
    w1 = y1 / (2 * w0)
    w2 = (y2 - 2 * w1**2) / (2 * w0)
    w3 = (y3 - 6 * w1 * w2) / (2 * w0)
    return w0, w1, w2, w3


class _CumulativeIntegral:
    """Cached antiderivative of a slope function, anchored at s0.

    Panels of 24-point Gauss-Legendre are laid down lazily between the
    anchor and the largest requested abscissa; per-panel prefix sums give
    the value at arbitrary points with one extra partial panel.  Panel
    edges never cross a declared breakpoint, so piecewise-analytic slopes
    keep full quadrature accuracy.
    """

    def __init__(self, slope, s0: float, breakpoints=()):
        self.slope = slope
        self.s0 = float(s0)
        self.breaks = sorted(b for b in breakpoints if b > self.s0)
        self.nodes, self.weights = roots_legendre(24)
        self.edges = [self.s0]
        self.prefix = [0.0]

    def _panel(self, a: float, b: float) -> float:
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        return float(half * np.sum(self.weights * self.slope(mid + half * self.nodes)))

    def _extend(self, s_max: float):
        while self.edges[-1] < s_max:
            a = self.edges[-1]
            b = max(a * 1.5, a + 1.0)
            for brk in self.breaks:
                if a < brk < b:
                    b = brk
                    break
            self.prefix.append(self.prefix[-1] + self._panel(a, b))
            self.edges.append(b)

    def __call__(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        self._extend(float(s.max(initial=self.s0)))
        edges = np.asarray(self.edges)
        prefix = np.asarray(self.prefix)
        idx = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(edges) - 2)
        a = edges[idx]
        # partial panel [a, s] for every point at once
        half = 0.5 * np.maximum(s - a, 0.0)
        mids = (a + half)[:, None] + half[:, None] * self.nodes[None, :]
        vals = self.slope(mids.ravel()).reshape(mids.shape)
        return prefix[idx] + half * (vals @ self.weights)


@dataclass
class SlopeProfile:
    """Radial slope w = psi' with derivatives; psi accumulated lazily."""

    slope_derivs: callable  # s -> slope and its first three derivatives
    anchor: float = 0.0
    breakpoints: tuple = ()

    def __post_init__(self):
        self._height = _CumulativeIntegral(
            lambda s: self.slope_derivs(s)[0], self.anchor, self.breakpoints
        )

    def __call__(self, s: np.ndarray):
        w0, w1, w2, w3 = self.slope_derivs(s)
        return self._height(s), w0, w1, w2, w3


def zero_profile():
    def derivs(s):
        z = np.zeros_like(np.asarray(s, dtype=float))
        return z, z, z, z

    return SlopeProfile(derivs, anchor=0.0)


def horizon_radius(n: int, q: int, mass: float) -> float:
    return (2.0 * mass) ** (q / (n - 2 * q))


def schwarzschild_profile(n: int, q: int, mass: float) -> SlopeProfile:
    """Slope of the q-Schwarzschild graph: w^2 = phi/(1 - phi)."""
    kappa = (n - 2 * q) / q
    r0 = horizon_radius(n, q, mass)

    def derivs(s):
        s = np.asarray(s, dtype=float)
        phi = 2.0 * mass * s ** (-kappa)
        c0 = phi
        c1 = -kappa * phi / s
        c2 = kappa * (kappa + 1) * phi / s**2
        c3 = -kappa * (kappa + 1) * (kappa + 2) * phi / s**3
        return _sqrt_ratio_chain(c0, c1, c2, c3)

    return SlopeProfile(derivs, anchor=r0 * (1 + 1e-9))


def bounded_mass_profile(n: int, mass: float) -> SlopeProfile:
    """Radial slope with strictly positive scalar curvature and total mass m.

    Built from c(s) = 2 m s^2 / (1 + s^n), which makes s^{n-2} c increasing,
    and w = sqrt(c/(1-c)); smooth through the origin, decay exponent tau = 2.
    Requires 2 m < (n/2) (2/(n-2))^{(n-2)/n} so that c stays below 1.
    """
    p = np.zeros(3)
    p[2] = 2.0 * mass
    qq = np.zeros(n + 1)
    qq[0] = 1.0
    qq[n] = 1.0

    def derivs(s):
        s = np.asarray(s, dtype=float)
        c0, c1, c2, c3 = _poly_ratio_derivs(p, qq, s)
        return _sqrt_ratio_chain(c0, c1, c2, c3)

    return SlopeProfile(derivs, anchor=1e-9)


def power_tail_profile(amplitude: float, exponent: float) -> SlopeProfile:
    """Slope a * s / (1 + s^2)^{(p+1)/2}: smooth at 0, decays like s^{-p}."""

    def derivs(s):
        s = np.asarray(s, dtype=float)
        u = 1.0 + s**2
        e = -(exponent + 1) / 2.0
        f = u**e
        f1 = e * u ** (e - 1) * 2 * s
        f2 = e * (e - 1) * u ** (e - 2) * 4 * s**2 + e * u ** (e - 1) * 2
        f3 = (
            e * (e - 1) * (e - 2) * u ** (e - 3) * 8 * s**3
            + e * (e - 1) * u ** (e - 2) * 12 * s
        )
        w0 = amplitude * s * f
        w1 = amplitude * (f + s * f1)
        w2 = amplitude * (2 * f1 + s * f2)
        w3 = amplitude * (3 * f2 + s * f3)
        return w0, w1, w2, w3

    return SlopeProfile(derivs, anchor=1e-9)


_SMOOTHSTEP7 = np.array([0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0])


def _smoothstep_c3(t):
    """C^3 step: 0 below 0, 1 above 1, 35 t^4 - 84 t^5 + 70 t^6 - 20 t^7 between."""
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, 0.0, 1.0)
    inside = (t > 0) & (t < 1)
    v = np.where(inside, npoly.polyval(tc, _SMOOTHSTEP7), np.where(t <= 0, 0.0, 1.0))
    d1, d2, d3 = (
        np.where(inside, npoly.polyval(tc, npoly.polyder(_SMOOTHSTEP7, k)), 0.0)
        for k in (1, 2, 3)
    )
    return v, d1, d2, d3


def _bump_c3(u):
    """C^3 bump (1 - u^2)^4 on [-1, 1], zero outside, with 3 derivatives."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    w = np.where(inside, 1.0 - u**2, 0.0)
    v = w**4
    d1 = np.where(inside, -8 * u * w**3, 0.0)
    d2 = np.where(inside, -8 * w**3 + 48 * u**2 * w**2, 0.0)
    d3 = np.where(inside, 144 * u * w**2 - 192 * u**3 * w, 0.0)
    return v, d1, d2, d3


def capped_profile(base: SlopeProfile, s_lo: float, s_hi: float) -> SlopeProfile:
    """Slope chi(s) * w(s) with a C^3 step chi vanishing below s_lo."""
    width = s_hi - s_lo

    def derivs(s):
        s = np.asarray(s, dtype=float)
        t = (s - s_lo) / width
        c0, c1, c2, c3 = _smoothstep_c3(t)
        c1, c2, c3 = c1 / width, c2 / width**2, c3 / width**3
        # base slope is only evaluated where chi > 0; clamp below to keep
        # the composite defined on the full half-line
        safe = np.maximum(s, s_lo * (1 + 1e-12))
        w0, w1, w2, w3 = base.slope_derivs(safe)
        w0, w1, w2, w3 = (np.where(c0 > 0, a, 0.0) for a in (w0, w1, w2, w3))
        v0 = c0 * w0
        v1 = c1 * w0 + c0 * w1
        v2 = c2 * w0 + 2 * c1 * w1 + c0 * w2
        v3 = c3 * w0 + 3 * c2 * w1 + 3 * c1 * w2 + c0 * w3
        return v0, v1, v2, v3

    return SlopeProfile(derivs, anchor=0.0, breakpoints=(s_lo, s_hi))


def bump_profile(amplitude: float, center: float, halfwidth: float) -> SlopeProfile:
    def derivs(s):
        s = np.asarray(s, dtype=float)
        u = (s - center) / halfwidth
        v, d1, d2, d3 = _bump_c3(u)
        return (
            amplitude * v,
            amplitude * d1 / halfwidth,
            amplitude * d2 / halfwidth**2,
            amplitude * d3 / halfwidth**3,
        )

    return SlopeProfile(derivs, anchor=max(center - halfwidth, 0.0))


def sum_profile(*profiles) -> SlopeProfile:
    # anchor at the most restrictive component so heights never sample a
    # slope below its own domain
    def derivs(s):
        parts = [p.slope_derivs(s) for p in profiles]
        return tuple(sum(pt[k] for pt in parts) for k in range(4))

    return SlopeProfile(derivs, anchor=max(p.anchor for p in profiles))


# ---------------------------------------------------------------------------
# radial calculus: assemble (f, Df, D2f, D3f) from profiles


def _radial_eval(profiles, n, min_radius=0.0):
    m = len(profiles)

    def evaluate(pts, order):
        s = np.linalg.norm(pts, axis=1)
        if np.any(s <= min_radius):
            raise DomainError("evaluation at or inside the minimal radius")
        theta = pts / s[:, None]
        vals = [p(s) for p in profiles]
        f = np.stack([v[0] for v in vals], axis=1)
        d1 = np.stack([v[1] for v in vals], axis=1)
        out = [f]
        tt = np.einsum("bi,bj->bij", theta, theta)
        df = d1[:, :, None] * theta[:, None, :]
        out.append(df)
        if order >= 2:
            d2 = np.stack([v[2] for v in vals], axis=1)
            rad = d1 / s[:, None]
            proj = np.eye(n)[None] - tt
            d2f = d2[..., None, None] * tt[:, None] + rad[..., None, None] * proj[:, None]
            out.append(d2f)
        if order >= 3:
            d3 = np.stack([v[3] for v in vals], axis=1)
            ttt = np.einsum("bi,bj,bk->bijk", theta, theta, theta)
            sym = (
                np.einsum("ij,bk->bijk", np.eye(n), theta)
                + np.einsum("ik,bj->bijk", np.eye(n), theta)
                + np.einsum("jk,bi->bijk", np.eye(n), theta)
            )
            coef = (d2 - d1 / s[:, None]) / s[:, None]
            d3f = d3[..., None, None, None] * ttt[:, None] + coef[..., None, None, None] * (
                sym[:, None] - 3.0 * ttt[:, None]
            )
            out.append(d3f)
        return tuple(out[: order + 1])

    return evaluate


# ---------------------------------------------------------------------------
# model constructors


def flat(n: int = 4, m: int = 2) -> GraphMap:
    """Zero map: identity metric, vanishing curvature, zero masses."""
    profiles = [zero_profile() for _ in range(m)]
    return GraphMap(
        name="flat",
        n=n,
        m=m,
        tau=8.0,
        domain=DomainDescriptor(kind="full"),
        flat_normal_bundle=True,
        evaluate=_radial_eval(profiles, n),
        supported_q=tuple(q for q in range(1, (n + 1) // 2) if 2 * q < n),
        reference={"mass": 0.0},
    )


def schwarzschild_graph(n: int, q: int, mass: float, truncation: float = 1e-3) -> GraphMap:
    """Rotationally symmetric graph with GBC mass mass**q, cut at r0(1+truncation)."""
    if n < 3 or not 1 <= q < n / 2 or mass <= 0:
        raise ValueError("need n >= 3, 1 <= q < n/2, mass > 0")
    r0 = horizon_radius(n, q, mass)
    boundary = SphereBoundary(radius=r0 * (1.0 + truncation))
    behavior = "gradient-blowup" if truncation <= 0.05 else "smooth-extension"
    profile = schwarzschild_profile(n, q, mass)
    return GraphMap(
        name=f"schwarzschild(n={n},q={q},m={mass},trunc={truncation})",
        n=n,
        m=1,
        tau=(n - 2 * q) / q,
        domain=DomainDescriptor(kind="exterior", components=(boundary,), behavior=behavior),
        flat_normal_bundle=True,
        evaluate=_radial_eval([profile], n, min_radius=r0),
        supported_q=(q,),
        reference={
            "mass": mass**q,
            "horizon_radius": r0,
            "horizon_area": None,  # filled by mass_integrals helpers
            "mass_parameter": mass,
        },
    )


def schwarzschild_capped(n: int, q: int, mass: float, cap=(2.0, 3.0)) -> GraphMap:
    """Schwarzschild slope smoothly switched off inside cap[0]*r0: full space."""
    r0 = horizon_radius(n, q, mass)
    profile = capped_profile(schwarzschild_profile(n, q, mass), cap[0] * r0, cap[1] * r0)
    return GraphMap(
        name=f"schwarzschild-capped(n={n},q={q},m={mass})",
        n=n,
        m=1,
        tau=(n - 2 * q) / q,
        domain=DomainDescriptor(kind="full"),
        flat_normal_bundle=True,
        evaluate=_radial_eval([profile], n),
        supported_q=(q,),
        reference={
            "mass": mass**q,
            "mass_parameter": mass,
            "radial_breakpoints": (cap[0] * r0, cap[1] * r0),
        },
    )


def radial_multigraph(n: int, profiles, tau: float = 2.0) -> GraphMap:
    """Graph with several radial components: flat normal bundle by construction."""
    return GraphMap(
        name=f"radial-multigraph(n={n},m={len(profiles)})",
        n=n,
        m=len(profiles),
        tau=tau,
        domain=DomainDescriptor(kind="full"),
        flat_normal_bundle=True,
        evaluate=_radial_eval(list(profiles), n),
        supported_q=tuple(q for q in range(1, (n + 1) // 2) if 2 * q < n),
        reference={},
    )


def bounded_mass_exterior(n: int = 3, mass: float = 0.3, boundary_radius: float = 1.0) -> GraphMap:
    """Positive-curvature radial graph over the exterior of a round sphere.

    The slope extends smoothly across the boundary and is constant on it,
    so all three mass routes are simultaneously meaningful, with a
    genuinely nonzero bulk term.
    """
    profile = bounded_mass_profile(n, mass)
    return GraphMap(
        name=f"bounded-exterior(n={n},m={mass})",
        n=n,
        m=1,
        tau=float(n - 2),
        domain=DomainDescriptor(
            kind="exterior",
            components=(SphereBoundary(radius=boundary_radius),),
            behavior="smooth-extension",
        ),
        flat_normal_bundle=True,
        evaluate=_radial_eval([profile], n),
        supported_q=(1,),
        reference={"mass": mass},
    )


def bounded_mass_multigraph(n: int = 4, mass: float = 0.5, split=(0.6, 0.8)) -> GraphMap:
    """Two aligned copies of the positive-curvature radial slope.

    The split coefficients have unit square sum so the induced metric equals
    the single-profile one; scalar curvature is strictly positive and the
    total mass is `mass`.
    """
    base = bounded_mass_profile(n, mass)
    lam1, lam2 = split

    def scaled(lam):
        def derivs(s):
            return tuple(lam * a for a in base.slope_derivs(s))

        return SlopeProfile(derivs, anchor=base.anchor)

    gm = radial_multigraph(n, [scaled(lam1), scaled(lam2)], tau=float(n - 2))
    gm.reference.update({"mass": mass, "positive_curvature": True})
    return gm


def skew_graph(n: int = 4, amplitude: float = 0.3, falloff: int = 2) -> GraphMap:
    """Non-flat normal bundle witness: f = chi(|x|) (x1 x2, x1 x3)."""
    if n < 3:
        raise ValueError("skew graph needs n >= 3")
    q_coeffs = npoly.polypow([1.0, 0.0, 1.0], falloff)  # (1 + s^2)^falloff
    p_coeffs = np.array([amplitude])

    def chi_derivs(s):
        return _poly_ratio_derivs(p_coeffs, q_coeffs, np.asarray(s, dtype=float))

    mono = np.zeros((2, n, n))
    mono[0, 0, 1] = mono[0, 1, 0] = 0.5
    mono[1, 0, 2] = mono[1, 2, 0] = 0.5

    def evaluate(pts, order):
        s = np.linalg.norm(pts, axis=1)
        if np.any(s <= 0):
            raise DomainError("skew graph evaluated at the origin")
        theta = pts / s[:, None]
        c0, c1, c2, c3 = chi_derivs(s)
        pvals = np.einsum("bi,aij,bj->ba", pts, mono, pts)
        pgrad = 2.0 * np.einsum("aij,bj->bai", mono, pts)
        phess = 2.0 * mono[None]
        f = c0[:, None] * pvals
        df = c1[:, None, None] * theta[:, None, :] * pvals[..., None] + c0[:, None, None] * pgrad
        out = [f, df]
        if order >= 2:
            tt = np.einsum("bi,bj->bij", theta, theta)
            proj = np.eye(n)[None] - tt
            chi_hess = c2[:, None, None] * tt + (c1 / s)[:, None, None] * proj
            d2f = (
                chi_hess[:, None] * pvals[..., None, None]
                + c1[:, None, None, None] * np.einsum("bi,baj->baij", theta, pgrad)
                + c1[:, None, None, None] * np.einsum("bj,bai->baij", theta, pgrad)
                + c0[:, None, None, None] * np.broadcast_to(phess, (len(s), 2, n, n))
            )
            out.append(d2f)
        if order >= 3:
            tt = np.einsum("bi,bj->bij", theta, theta)
            proj = np.eye(n)[None] - tt
            ttt = np.einsum("bi,bj,bk->bijk", theta, theta, theta)
            sym = (
                np.einsum("ij,bk->bijk", np.eye(n), theta)
                + np.einsum("ik,bj->bijk", np.eye(n), theta)
                + np.einsum("jk,bi->bijk", np.eye(n), theta)
            )
            coef = (c2 - c1 / s) / s
            chi3 = c3[:, None, None, None] * ttt + coef[:, None, None, None] * (sym - 3.0 * ttt)
            chi_hess = c2[:, None, None] * tt + (c1 / s)[:, None, None] * proj
            d3f = (
                chi3[:, None] * pvals[..., None, None, None]
                + np.einsum("bij,bak->baijk", chi_hess, pgrad)
                + np.einsum("bik,baj->baijk", chi_hess, pgrad)
                + np.einsum("bjk,bai->baijk", chi_hess, pgrad)
                + c1[:, None, None, None, None]
                * (
                    np.einsum("bi,ajk->baijk", theta, 2.0 * mono)
                    + np.einsum("bj,aik->baijk", theta, 2.0 * mono)
                    + np.einsum("bk,aij->baijk", theta, 2.0 * mono)
                )
            )
            out.append(d3f)
        while len(out) < order + 1:
            out.append(None)
        return tuple(out)

    return GraphMap(
        name=f"skew(n={n})",
        n=n,
        m=2,
        tau=2.0 * (2 * falloff - 1),
        domain=DomainDescriptor(kind="full"),
        flat_normal_bundle=False,
        evaluate=evaluate,
        supported_q=tuple(q for q in range(1, (n + 1) // 2) if 2 * q < n),
        reference={},
    )


def perturbed_schwarzschild(
    n: int,
    q: int,
    mass: float,
    eps: float,
    bump_center: float = 6.0,
    bump_halfwidth: float = 1.0,
    truncation: float = 1e-3,
    tail_exponent: float | None = None,
) -> GraphMap:
    """Schwarzschild plus a decaying slope perturbation.

    With the default compact bump the extrapolated mass is unchanged; with
    `tail_exponent` set, a noncompact tail eps * s^{-p} is added instead,
    which for small p violates the decay threshold and must be flagged by
    the integrability check.
    """
    base = schwarzschild_graph(n, q, mass, truncation=truncation)
    reference = {"mass_parameter": mass, "unperturbed_mass": mass**q}
    if tail_exponent is None:
        pert = bump_profile(eps, bump_center, bump_halfwidth)
        tau = base.tau
        reference["radial_breakpoints"] = (
            bump_center - bump_halfwidth,
            bump_center + bump_halfwidth,
        )
    else:
        pert = power_tail_profile(eps, tail_exponent)
        tau = min(base.tau, 2.0 * tail_exponent)
    profile = sum_profile(schwarzschild_profile(n, q, mass), pert)
    r0 = horizon_radius(n, q, mass)
    return GraphMap(
        name=f"perturbed-schwarzschild(n={n},q={q},eps={eps})",
        n=n,
        m=1,
        tau=tau,
        domain=base.domain,
        flat_normal_bundle=True,
        evaluate=_radial_eval([profile], n, min_radius=r0),
        supported_q=(q,),
        reference=reference,
    )


def ellipsoid_level_graph(axes=(1.0, 1.0, 1.5), eps: float = 0.4, falloff: int = 2) -> GraphMap:
    """Codimension-one graph constant on the level sets of an ellipsoid quadric."""
    n = len(axes)
    minv = 1.0 / np.asarray(axes, dtype=float) ** 2
    q_coeffs = npoly.polypow([1.0, 1.0], falloff)  # (1 + u)^falloff
    p_coeffs = np.array([eps])

    def evaluate(pts, order):
        u = np.einsum("bi,i,bi->b", pts, minv, pts)
        e0, e1, e2, e3 = _poly_ratio_derivs(p_coeffs, q_coeffs, u)
        du = 2.0 * pts * minv
        d2u = 2.0 * np.diag(minv)
        f = e0[:, None]
        df = (e1[:, None] * du)[:, None, :]
        out = [f, df]
        if order >= 2:
            d2f = (
                np.einsum("b,bi,bj->bij", e2, du, du) + e1[:, None, None] * d2u[None]
            )[:, None]
            out.append(d2f)
        if order >= 3:
            d3f = (
                np.einsum("b,bi,bj,bk->bijk", e3, du, du, du)
                + np.einsum("b,ij,bk->bijk", e2, d2u, du)
                + np.einsum("b,ik,bj->bijk", e2, d2u, du)
                + np.einsum("b,jk,bi->bijk", e2, d2u, du)
            )[:, None]
            out.append(d3f)
        while len(out) < order + 1:
            out.append(None)
        return tuple(out)

    boundary = EllipsoidBoundary(semi_axes=tuple(axes))
    return GraphMap(
        name=f"ellipsoid-level(axes={tuple(axes)})",
        n=n,
        m=1,
        tau=4.0 * falloff + 2.0,
        domain=DomainDescriptor(kind="exterior", components=(boundary,), behavior="smooth-extension"),
        flat_normal_bundle=True,
        evaluate=evaluate,
        supported_q=tuple(q for q in range(1, (n + 1) // 2) if 2 * q < n),
        reference={},
    )


def rotated_variant(gmap: GraphMap, rotation: np.ndarray) -> GraphMap:
    """Model with rotated base coordinates, f~(x) = f(Q x).

    Only valid when the domain is rotation invariant (full space or round
    sphere components); masses and identity residuals must be unchanged.
    """
    q_mat = np.asarray(rotation, dtype=float)
    if not np.allclose(q_mat @ q_mat.T, np.eye(gmap.n), atol=1e-12):
        raise ValueError("rotation must be orthogonal")

    def evaluate(pts, order):
        out = list(gmap.evaluate(pts @ q_mat.T, order))
        if order >= 1:
            out[1] = np.einsum("baj,ji->bai", out[1], q_mat)
        if order >= 2 and out[2] is not None:
            out[2] = np.einsum("bakl,ki,lj->baij", out[2], q_mat, q_mat)
        if order >= 3 and out[3] is not None:
            out[3] = np.einsum("balmn,li,mj,nk->baijk", out[3], q_mat, q_mat, q_mat)
        return tuple(out)

    return GraphMap(
        name=gmap.name + "+rotated",
        n=gmap.n,
        m=gmap.m,
        tau=gmap.tau,
        domain=gmap.domain,
        flat_normal_bundle=gmap.flat_normal_bundle,
        evaluate=evaluate,
        supported_q=gmap.supported_q,
        reference=dict(gmap.reference),
    )


def corrupted_variant(gmap: GraphMap, which: str = "d2f", scale: float = 1.001) -> GraphMap:
    """Fault-injection wrapper scaling one derivative order (test hook)."""
    slot = {"f": 0, "df": 1, "d2f": 2, "d3f": 3}[which]

    def evaluate(pts, order):
        out = list(gmap.evaluate(pts, order))
        if slot < len(out) and out[slot] is not None:
            out[slot] = out[slot] * scale
        return tuple(out)

    return GraphMap(
        name=gmap.name + f"+fault({which})",
        n=gmap.n,
        m=gmap.m,
        tau=gmap.tau,
        domain=gmap.domain,
        flat_normal_bundle=gmap.flat_normal_bundle,
        evaluate=evaluate,
        supported_q=gmap.supported_q,
        reference=dict(gmap.reference),
    )


# ---------------------------------------------------------------------------
# catalog


def catalog() -> dict:
    """Named model builders with their default parameters."""
    return {
        "flat": lambda **kw: flat(**{"n": 4, "m": 2, **kw}),
        "schwarzschild-n3": lambda **kw: schwarzschild_graph(
            **{"n": 3, "q": 1, "mass": 1.0, **kw}
        ),
        "schwarzschild-n5-q2": lambda **kw: schwarzschild_graph(
            **{"n": 5, "q": 2, "mass": 1.0, **kw}
        ),
        "schwarzschild-exterior-n3": lambda **kw: schwarzschild_graph(
            **{"n": 3, "q": 1, "mass": 1.0, "truncation": 1.0, **kw}
        ),
        "schwarzschild-capped-n3": lambda **kw: schwarzschild_capped(
            **{"n": 3, "q": 1, "mass": 1.0, **kw}
        ),
        "radial-multigraph-n4": lambda **kw: bounded_mass_multigraph(
            **{"n": 4, "mass": 0.5, **kw}
        ),
        "bounded-exterior-n3": lambda **kw: bounded_mass_exterior(
            **{"n": 3, "mass": 0.3, **kw}
        ),
        "skew-n4": lambda **kw: skew_graph(**{"n": 4, **kw}),
        "perturbed-schwarzschild-n3": lambda **kw: perturbed_schwarzschild(
            **{"n": 3, "q": 1, "mass": 1.0, "eps": 0.1, **kw}
        ),
        "ellipsoid-level-n3": lambda **kw: ellipsoid_level_graph(**kw),
    }


def build_model(name: str, **params) -> GraphMap:
    builders = catalog()
    if name not in builders:
        raise KeyError(f"unknown model {name!r}; available: {sorted(builders)}")
    return builders[name](**params)
