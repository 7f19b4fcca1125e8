"""Quadrature and limits: the three mass routes and the inequality checks.

The mass at infinity is a flux integral over growing coordinate spheres,
realized by a power-law fit over geometrically spaced radii; the bulk route
integrates the Lovelock-plus-commutator density over the Euclidean base
(the 1/sqrt(G) density against the graph measure cancels to the plain
Euclidean volume form); the boundary route integrates odd mean curvatures
over the star-shaped boundary components.  Sphere quadrature is a tensor
product of Gauss-Jacobi rules in the polar angles and Gauss-Legendre in
the azimuth.

All node evaluations go through the batched kernels; reductions are plain
numpy sums over fixed-shape arrays, so reports are reproducible bit for
bit for a given configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gamma, roots_jacobi, roots_legendre

from . import kernels
from .graph_geometry import DomainError, GraphMap, frames_batch
from .surfaces import shape_operator
from .tensor_algebra import mean_curvature_r

__all__ = [
    "omega_sphere",
    "mass_constant",
    "QuadratureRule",
    "sphere_rule",
    "default_order",
    "surface_mass",
    "surface_mass_series",
    "adm_mass_series",
    "extrapolate_mass",
    "ExtrapolationResult",
    "bulk_mass",
    "BulkResult",
    "NonIntegrableError",
    "boundary_mass",
    "boundary_area",
    "guan_li_check",
    "GuanLiResult",
    "penrose_check",
    "PenroseVerdict",
    "superadditivity_margin",
    "clip_study",
    "mass_report",
    "MassReport",
]

_CHUNK = 4096


def omega_sphere(n: int) -> float:
    """Volume of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)


def mass_constant(q: int, n: int) -> float:
    """Normalization c_q(n) = (n-2q)! / (2^{q-1} (n-1)! omega_{n-1})."""
    return math.factorial(n - 2 * q) / (
        2.0 ** (q - 1) * math.factorial(n - 1) * omega_sphere(n)
    )


class NonIntegrableError(RuntimeError):
    """Bulk density decays too slowly for a convergent integral."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes on the unit sphere with weights summing to omega_{n-1}."""

    n: int
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


def sphere_rule(n: int, order: int) -> QuadratureRule:
    """Tensor-product rule on S^{n-1}.

    Gauss-Jacobi with weight sin^{n-1-k} in the k-th polar angle and
    Gauss-Legendre with 2*order points in the azimuth; exact (to roundoff)
    on low-degree polynomials restricted to the sphere.
    """
    if n < 2:
        raise ValueError("sphere rule needs n >= 2")
    if order < 1:
        raise ValueError("order must be >= 1")
    phi_t, phi_w = roots_legendre(2 * order)
    phi = math.pi * (phi_t + 1.0)
    phi_w = math.pi * phi_w
    angle_cos = [phi]  # placeholder; azimuth handled separately
    polar = []
    for k in range(1, n - 1):
        p = n - 1 - k
        t, w = roots_jacobi(order, (p - 1) / 2.0, (p - 1) / 2.0)
        polar.append((t, w))
    # assemble nodes: iterate over the tensor grid
    grids = [t for t, _ in polar] + [phi]
    wgrids = [w for _, w in polar] + [phi_w]
    mesh = np.meshgrid(*grids, indexing="ij")
    wmesh = np.meshgrid(*wgrids, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    weights = np.ones(pts.shape[0])
    for wm in wmesh:
        weights = weights * wm.ravel()
    nodes = np.empty((pts.shape[0], n))
    sin_prod = np.ones(pts.shape[0])
    for k in range(n - 2):
        t = pts[:, k]
        nodes[:, k] = sin_prod * t
        sin_prod = sin_prod * np.sqrt(np.maximum(1.0 - t * t, 0.0))
    az = pts[:, -1]
    nodes[:, n - 2] = sin_prod * np.cos(az)
    nodes[:, n - 1] = sin_prod * np.sin(az)
    return QuadratureRule(n=n, order=order, nodes=nodes, weights=weights)


def default_order(n: int) -> int:
    return {2: 48, 3: 24, 4: 20, 5: 16}.get(n, 12)


def _flux_dot_normal(gmap: GraphMap, x: np.ndarray, theta: np.ndarray, q: int) -> np.ndarray:
    fr = frames_batch(gmap, x)
    flux = kernels.flux_route_t_batch(fr["a_hat"], fr["a"], fr["e_top"], q)
    return np.einsum("bi,bi->b", flux, theta)


def surface_mass(gmap: GraphMap, q: int, r: float, rule: QuadratureRule) -> float:
    """c_q(n) times the flux of the order-q field through the sphere S_r."""
    if r <= gmap.domain.circumscribed_radius():
        raise DomainError(f"sphere radius {r} does not clear the boundary")
    n = gmap.n
    total = 0.0
    for lo in range(0, rule.nodes.shape[0], _CHUNK):
        theta = rule.nodes[lo : lo + _CHUNK]
        w = rule.weights[lo : lo + _CHUNK]
        vals = _flux_dot_normal(gmap, r * theta, theta, q)
        total += float(np.sum(w * vals))
    return mass_constant(q, n) * r ** (n - 1) * total


def surface_mass_series(gmap: GraphMap, q: int, radii, rule: QuadratureRule):
    return [(float(r), surface_mass(gmap, q, r, rule)) for r in radii]


def adm_mass_series(gmap: GraphMap, radii, rule: QuadratureRule):
    """Classical linearized mass integrand over the same radius ladder."""
    n = gmap.n
    out = []
    for r in radii:
        total = 0.0
        for lo in range(0, rule.nodes.shape[0], _CHUNK):
            theta = rule.nodes[lo : lo + _CHUNK]
            w = rule.weights[lo : lo + _CHUNK]
            fr = frames_batch(gmap, r * theta, need_dg=True)
            dg = fr["dg"]
            wvec = np.einsum("biji->bj", dg) - np.einsum("biij->bj", dg)
            total += float(np.sum(w * np.einsum("bj,bj->b", wvec, theta)))
        out.append((float(r), r ** (n - 1) * total / (2.0 * (n - 1) * omega_sphere(n))))
    return out


@dataclass(frozen=True)
class ExtrapolationResult:
    value: float
    exponent: float | None
    error: float
    degenerate: bool = False


def _aitken_limit(vals: np.ndarray, noise: float):
    """Iterated Aitken acceleration; returns (estimate, previous estimate)."""
    v = vals.copy()
    last = float(v[-1])
    prev = None
    while len(v) >= 3:
        d2 = v[2:] - 2.0 * v[1:-1] + v[:-2]
        if np.any(np.abs(d2) < noise):
            break
        v = v[2:] - (v[2:] - v[1:-1]) ** 2 / d2
        prev = last
        last = float(v[-1])
    return last, prev


def extrapolate_mass(samples) -> ExtrapolationResult:
    """Limit of a radius series by a power-law fit value ~ m + b r^{-s}.

    Needs at least three increasing radii.  On a geometric ladder the fit
    is refined by iterated Aitken acceleration, which knocks out the
    subleading power corrections as well.  Constant or non-monotone series
    fall back to the tail value with a conservative spread-based error.
    """
    samples = sorted((float(r), float(v)) for r, v in samples)
    if len(samples) < 3:
        raise ValueError("extrapolation needs at least three radii")
    radii = np.array([r for r, _ in samples])
    vals = np.array([v for _, v in samples])
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be strictly increasing")
    tail = vals[-1]
    scale = 1.0 + abs(tail)
    spread = float(np.max(np.abs(vals - tail)))
    if spread <= 1e-11 * scale:
        return ExtrapolationResult(float(tail), None, spread + 1e-15 * scale, degenerate=True)
    diffs = np.diff(vals)
    big = np.abs(diffs) > 1e-12 * scale
    signs = np.sign(diffs[big])
    if signs.size == 0 or not (np.all(signs > 0) or np.all(signs < 0)):
        return ExtrapolationResult(float(tail), None, spread, degenerate=True)

    def fit(rs, ys):
        def sse(log_s):
            basis = np.stack([np.ones_like(rs), rs ** (-math.exp(log_s))], axis=1)
            coef, *_ = np.linalg.lstsq(basis, ys, rcond=None)
            resid = ys - basis @ coef
            return float(resid @ resid)

        opt = minimize_scalar(
            sse, bounds=(math.log(0.05), math.log(12.0)), method="bounded",
            options={"xatol": 1e-12},
        )
        s = math.exp(opt.x)
        basis = np.stack([np.ones_like(rs), rs ** (-s)], axis=1)
        coef, *_ = np.linalg.lstsq(basis, ys, rcond=None)
        resid = ys - basis @ coef
        rms = math.sqrt(float(resid @ resid) / len(ys))
        return coef[0], s, rms

    m_full, s_full, rms = fit(radii, vals)
    if len(samples) >= 4:
        m_tail, _, _ = fit(radii[-3:], vals[-3:])
        err = abs(m_full - m_tail) + rms
    else:
        err = rms + abs(m_full - tail) * 0.1
    ratios = radii[1:] / radii[:-1]
    if len(samples) >= 4 and np.allclose(ratios, ratios[0], rtol=1e-9):
        est, prev = _aitken_limit(vals, noise=1e-12 * scale)
        if prev is not None and abs(est - m_full) <= max(4.0 * err, spread):
            return ExtrapolationResult(
                float(est), float(s_full), float(abs(est - prev) + 1e-14 * scale)
            )
    return ExtrapolationResult(float(m_full), float(s_full), float(err + 1e-14 * scale))


# ---------------------------------------------------------------------------
# bulk route


def _radial_edges(s_min: float, s_max: float, gmap: GraphMap, panels: int) -> np.ndarray:
    """Geometric panel edges graded toward the inner radius, with model
    breakpoints inserted so piecewise-analytic profiles stay spectrally
    accurate."""
    if s_min <= 0.0:
        inner = s_max * 1e-4
        edges = [0.0, inner]
    else:
        grade = 1e-4 if gmap.domain.behavior == "gradient-blowup" else 2e-2
        inner = s_min * (1.0 + grade)
        edges = [s_min, inner]
    ratio = (s_max / inner) ** (1.0 / max(panels - 1, 1))
    ratio = max(ratio, 1.0 + 1e-9)
    e = inner
    while e * ratio < s_max:
        e *= ratio
        edges.append(e)
    edges.append(s_max)
    breaks = [
        b
        for b in gmap.reference.get("radial_breakpoints", ())
        if edges[0] < b < s_max
    ]
    edges = np.unique(np.concatenate([np.asarray(edges), np.asarray(breaks)]))
    return edges


def _shell_integrals(gmap: GraphMap, q: int, s_values, rule: QuadratureRule):
    """Sphere averages of the bulk density L_q + commutator at given radii."""
    out = np.empty(len(s_values))
    for idx, s in enumerate(s_values):
        acc = 0.0
        for lo in range(0, rule.nodes.shape[0], _CHUNK):
            theta = rule.nodes[lo : lo + _CHUNK]
            w = rule.weights[lo : lo + _CHUNK]
            fr = frames_batch(gmap, s * theta)
            dens = kernels.lovelock_batch(fr["a_hat"], q)
            dens = dens + kernels.commutator_scalar_batch(
                fr["a_hat"], fr["a"], fr["e_top"], fr["g"], q
            )
            acc += float(np.sum(w * dens))
        out[idx] = acc
    return out


@dataclass(frozen=True)
class BulkResult:
    value: float
    tail_bound: float
    quad_error: float
    decay_exponent: float | None


def bulk_mass(
    gmap: GraphMap,
    q: int,
    r_max: float,
    sphere_order: int = 8,
    gl_nodes: int = 16,
    panels: int = 30,
    check_integrability: bool = True,
) -> BulkResult:
    """(1/2) c_q(n) integral of (L_q + commutator) over the Euclidean base.

    Composite Gauss-Legendre panels in the radius times a sphere rule; the
    tail beyond r_max is bounded by the fitted decay of the shell values,
    and a decay exponent incompatible with integrability raises
    NonIntegrableError with the fit in the message.
    """
    n = gmap.n
    s_min = gmap.domain.circumscribed_radius() if gmap.domain.has_boundary() else 0.0
    rule = sphere_rule(n, sphere_order)
    edges = _radial_edges(s_min, r_max, gmap, panels)
    gl_t, gl_w = roots_legendre(gl_nodes)

    def integrate(edges, gl_t, gl_w, rule):
        total = 0.0
        shells_s, shells_v = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (a + b)
            half = 0.5 * (b - a)
            s_nodes = mid + half * gl_t
            sphere_vals = _shell_integrals(gmap, q, s_nodes, rule)
            shell = sphere_vals * s_nodes ** (n - 1)
            total += float(np.sum(gl_w * half * shell))
            shells_s.extend(s_nodes.tolist())
            shells_v.extend(shell.tolist())
        return total, np.array(shells_s), np.array(shells_v)

    raw, shells_s, shells_v = integrate(edges, gl_t, gl_w, rule)
    value = 0.5 * mass_constant(q, n) * raw

    # coarse re-run for a quadrature error estimate
    coarse_rule = sphere_rule(n, max(sphere_order // 2, 3))
    gl_ct, gl_cw = roots_legendre(max(gl_nodes // 2, 6))
    raw_c, _, _ = integrate(edges, gl_ct, gl_cw, coarse_rule)
    quad_error = abs(value - 0.5 * mass_constant(q, n) * raw_c) + 1e-13 * (1 + abs(value))

    # tail bound and integrability from the outer shell decay
    floor = 1e-13 * (1.0 + np.max(np.abs(shells_v), initial=0.0))
    outer = shells_s > 0.35 * r_max
    tail_bound = 0.0
    slope = None
    if np.any(outer) and np.max(np.abs(shells_v[outer])) > floor:
        s_out = shells_s[outer]
        v_out = np.abs(shells_v[outer]) + 1e-300
        slope = float(np.polyfit(np.log(s_out), np.log(v_out), 1)[0])
        if check_integrability and slope >= -1.05:
            raise NonIntegrableError(
                f"shell density decays like s^{slope:.2f} (s^(n-1) included); "
                "the bulk integral does not converge"
            )
        if slope < -1.0:
            tail_bound = abs(shells_v[outer][-1]) * r_max / (-slope - 1.0)
            tail_bound *= 0.5 * mass_constant(q, n)
    return BulkResult(value=value, tail_bound=tail_bound, quad_error=quad_error, decay_exponent=slope)


# ---------------------------------------------------------------------------
# boundary route


def _component_nodes(component, rule: QuadratureRule):
    theta = rule.nodes
    rr = component.radial_profile(theta)
    pts = rr[:, None] * theta
    jac = component.area_element(theta)
    return pts, jac


def boundary_area(component, rule: QuadratureRule) -> float:
    _, jac = _component_nodes(component, rule)
    return float(np.sum(rule.weights * jac))


def _mean_curvature_values(component, pts: np.ndarray, r: int) -> np.ndarray:
    vals = np.empty(pts.shape[0])
    for idx in range(pts.shape[0]):
        _, _, shape = shape_operator(component, pts[idx])
        vals[idx] = mean_curvature_r(shape, r)
    return vals


def boundary_mass(gmap: GraphMap, q: int, weighted: bool, rule: QuadratureRule) -> float:
    """(1/2)(2q-1)! c_q(n) integral of w H_{2q-1} over the boundary.

    w = (|Df|^2/(1+|Df|^2))^q when weighted (f evaluated on Sigma, which
    requires a smooth extension), w = 1 otherwise.
    """
    if not gmap.domain.has_boundary():
        raise DomainError("model has no boundary component")
    n = gmap.n
    total = 0.0
    for comp in gmap.domain.components:
        pts, jac = _component_nodes(comp, rule)
        h_vals = _mean_curvature_values(comp, pts, 2 * q - 1)
        if weighted:
            _, f1 = gmap.evaluate(pts, 1)
            df2 = np.einsum("bai,bai->b", f1, f1)
            w = (df2 / (1.0 + df2)) ** q
        else:
            w = np.ones(pts.shape[0])
        total += float(np.sum(rule.weights * jac * w * h_vals))
    return 0.5 * math.factorial(2 * q - 1) * mass_constant(q, n) * total


# ---------------------------------------------------------------------------
# inequality checks


@dataclass(frozen=True)
class GuanLiResult:
    lhs: float
    rhs: float
    margin: float
    area: float
    convex: bool


def guan_li_check(component, n: int, q: int, rule: QuadratureRule) -> GuanLiResult:
    """Sharp mean-curvature integral bound for one star-shaped component."""
    if not 1 <= q < n / 2:
        raise ValueError(f"q={q} out of range for n={n}")
    pts, jac = _component_nodes(component, rule)
    h_vals = _mean_curvature_values(component, pts, 2 * q - 1)
    convex = True
    for r in range(1, 2 * q):
        if np.min(_mean_curvature_values(component, pts, r)) <= 0:
            convex = False
    lhs = (
        0.5
        * math.factorial(2 * q - 1)
        * mass_constant(q, n)
        * float(np.sum(rule.weights * jac * h_vals))
    )
    area = float(np.sum(rule.weights * jac))
    rhs = (area / omega_sphere(n)) ** ((n - 2 * q) / (n - 1)) / 2**q
    return GuanLiResult(lhs=lhs, rhs=rhs, margin=lhs - rhs, area=area, convex=convex)


def superadditivity_margin(areas, s: float) -> float:
    """sum A_i^s - (sum A_i)^s, nonnegative for 0 <= s < 1."""
    areas = np.asarray(areas, dtype=float)
    return float(np.sum(areas**s) - np.sum(areas) ** s)


@dataclass(frozen=True)
class PenroseVerdict:
    status: str  # "ok" or "hypotheses-not-met"
    mass: float | None = None
    mass_error: float | None = None
    area: float | None = None
    rhs: float | None = None
    margin: float | None = None
    superadditivity: float | None = None
    failing: str | None = None


def _sample_points(gmap: GraphMap, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    r_lo = gmap.domain.circumscribed_radius() * 1.05 + 0.5
    r_hi = r_lo + 20.0
    radii = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), size=count))
    dirs = rng.normal(size=(count, gmap.n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return radii[:, None] * dirs


def penrose_check(
    gmap: GraphMap,
    q: int,
    rule: QuadratureRule,
    radii,
    boundary_rule: QuadratureRule | None = None,
    samples: int = 32,
    seed: int = 0,
    tol: float = 1e-8,
) -> PenroseVerdict:
    """Horizon-area lower bound on the mass, with hypothesis sampling.

    Checks flat normal bundle and sign of the Lovelock density at seeded
    sample points and strict (2q-1)-mean convexity of every boundary
    component before comparing the surface-route mass against
    (1/2^q) (A / omega_{n-1})^{(n-2q)/(n-1)}.
    """
    if not gmap.domain.has_boundary():
        return PenroseVerdict(status="hypotheses-not-met", failing="no boundary")
    n = gmap.n
    pts = _sample_points(gmap, samples, seed)
    fr = frames_batch(gmap, pts)
    comm_norm = 0.0
    m = gmap.m
    for a in range(m):
        for b in range(m):
            comm = fr["a"][:, a] @ fr["a"][:, b] - fr["a"][:, b] @ fr["a"][:, a]
            comm_norm = max(comm_norm, float(np.abs(comm).max()))
    if comm_norm > tol:
        return PenroseVerdict(status="hypotheses-not-met", failing=f"normal bundle not flat (|[A,A]| = {comm_norm:.2e})")
    dens = kernels.lovelock_batch(fr["a_hat"], q)
    if float(dens.min()) < -tol:
        return PenroseVerdict(status="hypotheses-not-met", failing=f"L_q negative at a sample ({dens.min():.2e})")
    brule = boundary_rule or rule
    areas = []
    for comp in gmap.domain.components:
        cpts, _ = _component_nodes(comp, brule)
        for r in range(1, 2 * q):
            if np.min(_mean_curvature_values(comp, cpts, r)) <= 0:
                return PenroseVerdict(
                    status="hypotheses-not-met",
                    failing=f"H_{r} not strictly positive on a component",
                )
        areas.append(boundary_area(comp, brule))
    series = surface_mass_series(gmap, q, radii, rule)
    ext = extrapolate_mass(series)
    area = float(np.sum(areas))
    s_exp = (n - 2 * q) / (n - 1)
    rhs = (area / omega_sphere(n)) ** s_exp / 2**q
    sup = superadditivity_margin(areas, s_exp) if len(areas) > 1 else None
    return PenroseVerdict(
        status="ok",
        mass=ext.value,
        mass_error=ext.error,
        area=area,
        rhs=rhs,
        margin=ext.value - rhs,
        superadditivity=sup,
    )


# ---------------------------------------------------------------------------
# gradient-blowup clip study


def _clip_radius(gmap: GraphMap, threshold: float) -> float:
    """Radius where |Df| = threshold along a coordinate ray (radial models)."""
    direction = np.zeros(gmap.n)
    direction[0] = 1.0
    s_min = gmap.domain.circumscribed_radius()

    def grad_norm(s):
        _, f1 = gmap.eval(s * direction, order=1)
        return float(np.linalg.norm(f1))

    lo, hi = s_min * (1 + 1e-12), s_min * 4.0
    while grad_norm(hi) > threshold:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if grad_norm(mid) > threshold:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clip_study(gmap: GraphMap, q: int, deltas, r_max: float, sphere_order: int = 6):
    """Bulk plus weighted boundary over shrinking clips |Df| <= 1/delta.

    Returns rows (delta, clip_radius, bulk, weighted_boundary, total); the
    totals approach the unclipped bulk plus unweighted boundary value.
    """
    from .surfaces import SphereBoundary
    from .graph_geometry import GraphMap as _GM

    rows = []
    rule = sphere_rule(gmap.n, sphere_order)
    for delta in deltas:
        s_clip = _clip_radius(gmap, 1.0 / delta)
        clipped = _GM(
            name=gmap.name + f"+clip({delta})",
            n=gmap.n,
            m=gmap.m,
            tau=gmap.tau,
            domain=type(gmap.domain)(
                kind="exterior",
                components=(SphereBoundary(radius=s_clip),),
                behavior="smooth-extension",
            ),
            flat_normal_bundle=gmap.flat_normal_bundle,
            evaluate=gmap.evaluate,
            supported_q=gmap.supported_q,
            reference=dict(gmap.reference),
        )
        bulk = bulk_mass(clipped, q, r_max, sphere_order=sphere_order, check_integrability=False)
        wb = boundary_mass(clipped, q, weighted=True, rule=rule)
        rows.append((float(delta), s_clip, bulk.value, wb, bulk.value + wb))
    return rows


# ---------------------------------------------------------------------------
# report assembly


@dataclass
class MassReport:
    model: str
    q: int
    radii: list
    surface_series: list
    mass: float
    mass_exponent: float | None
    mass_error: float
    bulk: float
    bulk_tail: float
    bulk_error: float
    bulk_decay: float | None
    boundary_weighted: float | None
    boundary_unweighted: float | None
    boundary_error: float | None
    residual_theorem: float | None
    combined_error: float | None
    adm_series: list | None
    adm_mass: float | None
    adm_error: float | None

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "q": self.q,
            "surface": {
                "series": [{"r": r, "value": v} for r, v in self.surface_series],
                "mass": {"value": self.mass, "error": self.mass_error},
                "fit_exponent": self.mass_exponent,
            },
            "bulk": {
                "value": self.bulk,
                "tail_bound": self.bulk_tail,
                "quad_error": self.bulk_error,
                "decay_exponent": self.bulk_decay,
            },
            "boundary": {
                "weighted": self.boundary_weighted,
                "unweighted": self.boundary_unweighted,
                "quad_error": self.boundary_error,
            },
            "theorem_residual": {
                "value": self.residual_theorem,
                "combined_error": self.combined_error,
            },
            "adm": None
            if self.adm_mass is None
            else {
                "series": [{"r": r, "value": v} for r, v in self.adm_series],
                "mass": {"value": self.adm_mass, "error": self.adm_error},
            },
        }


def mass_report(
    gmap: GraphMap,
    q: int,
    radii,
    order: int | None = None,
    bulk_sphere_order: int = 8,
    boundary_order: int | None = None,
) -> MassReport:
    """All three mass routes with error estimates for one (model, q)."""
    n = gmap.n
    order = order or default_order(n)
    rule = sphere_rule(n, order)
    series = surface_mass_series(gmap, q, radii, rule)
    ext = extrapolate_mass(series)
    # quadrature stability estimate at the largest radius
    half_rule = sphere_rule(n, max(order // 2, 3))
    r_big = series[-1][0]
    quad_diff = abs(surface_mass(gmap, q, r_big, half_rule) - series[-1][1])
    surface_error = ext.error + quad_diff

    bulk = bulk_mass(gmap, q, r_max=max(radii), sphere_order=bulk_sphere_order)

    boundary_weighted = boundary_unweighted = boundary_error = None
    residual = combined = None
    if gmap.domain.has_boundary():
        brule = sphere_rule(n, boundary_order or order)
        brule_half = sphere_rule(n, max((boundary_order or order) // 2, 3))
        boundary_unweighted = boundary_mass(gmap, q, weighted=False, rule=brule)
        berr = abs(
            boundary_unweighted - boundary_mass(gmap, q, weighted=False, rule=brule_half)
        )
        if gmap.domain.behavior == "smooth-extension":
            boundary_weighted = boundary_mass(gmap, q, weighted=True, rule=brule)
            berr = max(
                berr,
                abs(boundary_weighted - boundary_mass(gmap, q, weighted=True, rule=brule_half)),
            )
            boundary_term = boundary_weighted
        else:
            boundary_term = boundary_unweighted
        boundary_error = berr + 1e-13 * (1.0 + abs(boundary_term))
        residual = ext.value - bulk.value - boundary_term
        combined = surface_error + bulk.quad_error + bulk.tail_bound + boundary_error
    else:
        residual = ext.value - bulk.value
        combined = surface_error + bulk.quad_error + bulk.tail_bound

    adm_series = adm_val = adm_err = None
    if q == 1:
        adm_series = adm_mass_series(gmap, radii, rule)
        adm_ext = extrapolate_mass(adm_series)
        adm_val, adm_err = adm_ext.value, adm_ext.error

    return MassReport(
        model=gmap.name,
        q=q,
        radii=[float(r) for r in radii],
        surface_series=series,
        mass=ext.value,
        mass_exponent=ext.exponent,
        mass_error=surface_error,
        bulk=bulk.value,
        bulk_tail=bulk.tail_bound,
        bulk_error=bulk.quad_error,
        bulk_decay=bulk.decay_exponent,
        boundary_weighted=boundary_weighted,
        boundary_unweighted=boundary_unweighted,
        boundary_error=boundary_error,
        residual_theorem=residual,
        combined_error=combined,
        adm_series=adm_series,
        adm_mass=adm_val,
        adm_error=adm_err,
    )
