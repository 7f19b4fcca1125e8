"""Batch command-line interface.

Subcommands: mass (three-route mass report), verify (pointwise identity
suite), penrose (horizon inequality verdicts), convergence (order, step and
clip refinement studies), catalog (model listing).  Configuration is a JSON
document; everything is dimensionless (geometric units).  Reports are
byte-stable for a fixed config and seed: node sets and reduction orders are
deterministic.

Exit codes: 0 success, 1 identity failure, 2 configuration error,
3 numerical-hypothesis failure, 4 theorem hypotheses not met.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gbc_quantities as gq
from . import mass_integrals as mi
from . import models
from .graph_geometry import (
    DomainError,
    curvature_frame,
    finite_difference_riemann,
    point_frame,
)
from .tensor_algebra import lovelock_scalar

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_HYPOTHESES = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    model_name: str
    model_params: dict = field(default_factory=dict)
    qs: list = field(default_factory=list)
    order: int | None = None
    radii: list = field(default_factory=lambda: [20.0, 40.0, 80.0, 160.0])
    clips: list = field(default_factory=lambda: [0.5, 0.2, 0.1])
    fd_steps: list = field(default_factory=lambda: [1e-2, 5e-3, 2.5e-3])
    fd_residual_step: float = 1e-3
    samples: int = 64
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    bulk_sphere_order: int = 8
    out_dir: Path = Path(".")
    quiet: bool = False

    @classmethod
    def load(cls, args) -> "RunConfig":
        data = {}
        if args.config is not None:
            path = Path(args.config)
            if not path.exists():
                raise ConfigError(f"config file {path} does not exist")
            try:
                data = json.loads(path.read_text())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
        model = data.get("model", {})
        if getattr(args, "model", None):
            model = {"name": args.model, "params": model.get("params", {})}
        name = model.get("name")
        if not name:
            raise ConfigError("no model name given (config key model.name or --model)")
        cfg = cls(
            model_name=name,
            model_params=dict(model.get("params", {})),
            qs=list(data.get("q", [])),
            order=data.get("order"),
            radii=[float(r) for r in data.get("radii", [20.0, 40.0, 80.0, 160.0])],
            clips=[float(c) for c in data.get("clips", [0.5, 0.2, 0.1])],
            fd_steps=[float(h) for h in data.get("fd_steps", [1e-2, 5e-3, 2.5e-3])],
            fd_residual_step=float(data.get("fd_residual_step", 1e-3)),
            samples=int(data.get("samples", 64)),
            seed=int(data.get("seed", 0)),
            tolerances=dict(data.get("tolerances", {})),
            bulk_sphere_order=int(data.get("bulk", {}).get("sphere_order", 8)),
        )
        if args.seed is not None:
            cfg.seed = args.seed
        if args.order is not None:
            cfg.order = args.order
        cfg.out_dir = Path(args.out)
        cfg.quiet = args.quiet
        return cfg

    def build(self):
        params = dict(self.model_params)
        fault = params.pop("fault", None)
        try:
            gmap = models.build_model(self.model_name, **params)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad model parameters: {exc}") from exc
        if fault:
            gmap = models.corrupted_variant(gmap, **fault)
        if not self.qs:
            self.qs = list(gmap.supported_q) or [1]
        for q in self.qs:
            if not 1 <= q < gmap.n / 2:
                raise ConfigError(f"q={q} out of range for n={gmap.n}")
        if sorted(self.radii) != self.radii or len(self.radii) < 3:
            raise ConfigError("radii must be at least three increasing values")
        rmin = gmap.domain.circumscribed_radius()
        if self.radii[0] <= rmin:
            raise ConfigError(f"smallest radius {self.radii[0]} does not clear the boundary ({rmin})")
        return gmap

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2, default=float) + "\n")


def _say(cfg: RunConfig, msg: str) -> None:
    if not cfg.quiet:
        print(msg)


# ---------------------------------------------------------------------------
# mass


def cmd_mass(cfg: RunConfig) -> int:
    gmap = cfg.build()
    reports = {}
    flagged = None
    for q in cfg.qs:
        try:
            rep = mi.mass_report(
                gmap,
                q,
                cfg.radii,
                order=cfg.order,
                bulk_sphere_order=cfg.bulk_sphere_order,
            )
        except mi.NonIntegrableError as exc:
            flagged = f"q={q}: {exc}"
            reports[str(q)] = {"flag": str(exc)}
            continue
        reports[str(q)] = rep.as_dict()
        _say(cfg, f"q={q}: mass={rep.mass:.10g} (+-{rep.mass_error:.2g}) "
                  f"bulk={rep.bulk:.10g} residual={rep.residual_theorem:.3g}")
    payload = {
        "model": {"name": cfg.model_name, "params": cfg.model_params},
        "seed": cfg.seed,
        "reports": reports,
    }
    _write_json(cfg.out_dir / "mass_report.json", payload)
    series_path = cfg.out_dir / "mass_series.csv"
    series_path.parent.mkdir(parents=True, exist_ok=True)
    with series_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "r", "surface_mass"])
        for q, rep in reports.items():
            for row in rep.get("surface", {}).get("series", []):
                writer.writerow([q, repr(row["r"]), repr(row["value"])])
    if flagged:
        _say(cfg, f"numerical hypothesis failure: {flagged}")
        return EXIT_NUMERICAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _sample_points(gmap, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    r_lo = gmap.domain.circumscribed_radius() * 1.05 + 0.5
    r_hi = r_lo + 20.0
    radii = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), size=count))
    dirs = rng.normal(size=(count, gmap.n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return radii[:, None] * dirs


def _fd_metric_derivative(gmap, x, h=1e-5):
    n = gmap.n
    out = np.empty((n, n, n))
    for l in range(n):
        step = np.zeros(n)
        step[l] = h
        _, f1p = gmap.eval(x + step, order=1)
        _, f1m = gmap.eval(x - step, order=1)
        gp = np.eye(n) + f1p.T @ f1p
        gm = np.eye(n) + f1m.T @ f1m
        out[:, :, l] = (gp - gm) / (2 * h)
    return out


def cmd_verify(cfg: RunConfig) -> int:
    gmap = cfg.build()
    pts = _sample_points(gmap, cfg.samples, cfg.seed)
    tol_id = cfg.tol("identity_abs", 1e-10)
    tol_fd = cfg.tol("fd_identity", 1e-4)
    tol_route = cfg.tol("route_rel", 1e-11)
    tol_div = cfg.tol("divergence_abs", 1e-5)
    checks: dict[str, dict] = {}

    def record(name, residual, tolerance, where=None):
        entry = checks.setdefault(
            name, {"max_residual": 0.0, "tolerance": tolerance, "worst_point": None}
        )
        if residual >= entry["max_residual"]:
            entry["max_residual"] = float(residual)
            entry["worst_point"] = None if where is None else [float(v) for v in where]

    qs = cfg.qs
    for x in pts:
        pf = point_frame(gmap, x)
        cf = curvature_frame(gmap, pf)
        dg_fd = _fd_metric_derivative(gmap, x)
        record("dg-product-rule", np.abs(pf.dg - dg_fd).max(), tol_fd, x)
        # product-rule Christoffels against the standard metric formula
        sym = (
            np.einsum("lij->ijl", pf.dg)
            + np.einsum("lji->ijl", pf.dg)
            - pf.dg
        )
        gamma_std = 0.5 * np.einsum("kl,ijl->kij", pf.g_inv, sym)
        record("christoffel-gradient-form", np.abs(pf.christoffel - gamma_std).max(), tol_id, x)
        lift_res = np.abs(
            np.einsum("ij,aj->ai", pf.g_inv, pf.f1)
            - np.einsum("ab,bi->ai", pf.u_inv, pf.f1)
        ).max()
        record("tangent-lift-two-forms", lift_res, tol_id, x)
        record(
            "determinant-consistency",
            abs(pf.det_g - float(np.linalg.det(pf.u))) / (1.0 + pf.det_g),
            tol_id,
            x,
        )
        try:
            np.linalg.cholesky(pf.g)
            np.linalg.cholesky(pf.u)
        except np.linalg.LinAlgError:
            record("metric-positive-definite", 1.0, 0.0, x)
        else:
            record("metric-positive-definite", 0.0, tol_id, x)
        if gmap.flat_normal_bundle:
            record("normal-commutators-flat", np.abs(cf.commutators).max(), cfg.tol("commutator", 1e-10), x)
        for q in qs:
            xp = gq.flux_field_route_p(pf, cf, q)
            xt = gq.flux_field_route_t(pf, cf, q)
            record(
                f"flux-route-equality-q{q}",
                np.abs(xp - xt).max() / (1.0 + np.abs(xt).max()),
                tol_route,
                x,
            )
            direct, via_t = gq.gbc_scalar_two_routes(pf, cf, q)
            record(
                f"curvature-scalar-two-routes-q{q}",
                abs(direct - via_t) / (1.0 + abs(direct)),
                tol_route,
                x,
            )

    # expensive finite-difference checks on a small subset
    for x in pts[: min(8, len(pts))]:
        pf = point_frame(gmap, x)
        cf = curvature_frame(gmap, pf)
        r_fd = finite_difference_riemann(gmap, x, 1e-3)
        record("gauss-vs-fd-curvature", np.abs(r_fd - cf.riemann).max(), tol_fd, x)
        for q in qs:
            lhs, rhs, res = gq.divergence_identity(gmap, x, q, cfg.fd_residual_step)
            record(f"divergence-identity-q{q}", res, tol_div, x)

    # boundary identities
    if gmap.domain.has_boundary():
        rng = np.random.default_rng(cfg.seed + 1)
        for comp in gmap.domain.components:
            for _ in range(8):
                theta = rng.normal(size=gmap.n)
                theta /= np.linalg.norm(theta)
                xb = comp.radial_profile(theta[None])[0] * theta
                for q in qs:
                    try:
                        lhs, rhs = gq.boundary_flux(gmap, comp, xb, q)
                    except gq.PreconditionError:
                        record(f"boundary-flux-q{q}", 1.0, 0.0, xb)
                        continue
                    record(f"boundary-flux-q{q}", abs(lhs - rhs), cfg.tol("boundary_abs", 1e-9), xb)
                res_shape, res_curv = gq.restricted_curvature_checks(gmap, comp, xb)
                record("restricted-shape-operator", res_shape, cfg.tol("boundary_abs", 1e-9), xb)
                record("restricted-curvature", res_curv, cfg.tol("boundary_abs", 1e-9), xb)

    # decay sampling against the declared order
    decay = _decay_slope(gmap)
    if decay is not None:
        record("declared-decay-order", abs(decay - gmap.tau) if decay < 1e8 else 0.0, 0.35)

    failures = sorted(
        name for name, entry in checks.items() if entry["max_residual"] > entry["tolerance"]
    )
    payload = {
        "model": {"name": cfg.model_name, "params": cfg.model_params},
        "seed": cfg.seed,
        "samples": cfg.samples,
        "checks": checks,
        "failures": failures,
    }
    _write_json(cfg.out_dir / "verify_report.json", payload)
    for name in sorted(checks):
        entry = checks[name]
        status = "FAIL" if name in failures else "ok"
        _say(cfg, f"{status:4s}  {name:34s} max residual {entry['max_residual']:.3e} (tol {entry['tolerance']:.1e})")
    if failures:
        worst = checks[failures[0]]
        _say(cfg, f"identity failure: {failures[0]} at point {worst['worst_point']}")
        return EXIT_IDENTITY
    return EXIT_OK


def _decay_slope(gmap) -> float | None:
    """Sampled decay exponent of |Df|, as a tau estimate (slope * -2)."""
    rng = np.random.default_rng(12345)
    r0 = gmap.domain.circumscribed_radius() + 2.0
    radii = r0 * np.array([8.0, 16.0, 32.0, 64.0])
    vals = []
    for r in radii:
        theta = rng.normal(size=gmap.n)
        theta /= np.linalg.norm(theta)
        _, f1 = gmap.eval(r * theta, order=1)
        vals.append(np.linalg.norm(f1))
    vals = np.asarray(vals)
    if np.max(vals) < 1e-14:
        return None
    slope = np.polyfit(np.log(radii), np.log(vals), 1)[0]
    return float(-2.0 * slope)


# ---------------------------------------------------------------------------
# penrose


def cmd_penrose(cfg: RunConfig) -> int:
    gmap = cfg.build()
    order = cfg.order or mi.default_order(gmap.n)
    rule = mi.sphere_rule(gmap.n, order)
    verdicts = {}
    guan_li = {}
    status = EXIT_OK
    for q in cfg.qs:
        verdict = mi.penrose_check(
            gmap, q, rule, cfg.radii, samples=cfg.samples, seed=cfg.seed
        )
        verdicts[str(q)] = verdict.__dict__
        if verdict.status != "ok":
            status = EXIT_HYPOTHESES
            _say(cfg, f"q={q}: hypotheses not met ({verdict.failing})")
            continue
        _say(cfg, f"q={q}: mass={verdict.mass:.8g} area={verdict.area:.8g} margin={verdict.margin:.3e}")
        rows = []
        for idx, comp in enumerate(gmap.domain.components):
            res = mi.guan_li_check(comp, gmap.n, q, rule)
            rows.append(
                {"component": idx, "lhs": res.lhs, "rhs": res.rhs,
                 "margin": res.margin, "area": res.area, "convex": res.convex}
            )
        guan_li[str(q)] = rows
    payload = {
        "model": {"name": cfg.model_name, "params": cfg.model_params},
        "seed": cfg.seed,
        "penrose": verdicts,
        "guan_li": guan_li,
    }
    _write_json(cfg.out_dir / "penrose_report.json", payload)
    return status


# ---------------------------------------------------------------------------
# convergence


def cmd_convergence(cfg: RunConfig) -> int:
    gmap = cfg.build()
    base_order = cfg.order or mi.default_order(gmap.n)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    q = cfg.qs[0] if cfg.qs else (gmap.supported_q[0] if gmap.supported_q else 1)
    cfg.qs = [q]

    orders = sorted({max(base_order // 4, 2), max(base_order // 2, 3), base_order})
    r_big = cfg.radii[-1]
    with (out / "convergence_orders.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["order", "r", "surface_mass"])
        for order in orders:
            rule = mi.sphere_rule(gmap.n, order)
            writer.writerow([order, repr(float(r_big)), repr(mi.surface_mass(gmap, q, r_big, rule))])

    rng = np.random.default_rng(cfg.seed)
    theta = rng.normal(size=gmap.n)
    theta /= np.linalg.norm(theta)
    x = (gmap.domain.circumscribed_radius() + 2.5) * theta
    rows, slope = gq.divergence_identity_study(gmap, x, q, cfg.fd_steps)
    with (out / "convergence_divergence.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["h", "lhs", "rhs", "residual"])
        for h, lhs, rhs, res in rows:
            writer.writerow([repr(float(h)), repr(lhs), repr(rhs), repr(res)])

    clip_rows = None
    if gmap.domain.behavior == "gradient-blowup":
        clip_rows = mi.clip_study(gmap, q, cfg.clips, r_max=cfg.radii[-1])
        with (out / "convergence_clips.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta", "clip_radius", "bulk", "weighted_boundary", "total"])
            for row in clip_rows:
                writer.writerow([repr(float(v)) for v in row])

    payload = {
        "model": {"name": cfg.model_name, "params": cfg.model_params},
        "q": q,
        "orders": orders,
        "divergence_slope": slope,
        "clips": clip_rows,
    }
    _write_json(out / "convergence_report.json", payload)
    _say(cfg, f"divergence residual slope: {slope:.2f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# catalog


def cmd_catalog(args) -> int:
    entries = {}
    for name, builder in sorted(models.catalog().items()):
        gmap = builder()
        entries[name] = {
            "n": gmap.n,
            "m": gmap.m,
            "tau": gmap.tau,
            "boundary": gmap.domain.kind == "exterior",
            "behavior": gmap.domain.behavior,
            "flat_normal_bundle": gmap.flat_normal_bundle,
            "supported_q": list(gmap.supported_q),
            "reference": {
                k: v for k, v in gmap.reference.items() if not isinstance(v, tuple)
            },
        }
    text = json.dumps(entries, sort_keys=True, indent=2, default=float)
    if args.out != ".":
        path = Path(args.out) / "catalog.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
    if not args.quiet:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbcmass",
        description="Mass and identity computations for asymptotically flat graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("mass", "compute the three mass routes and write a report"),
        ("verify", "run the pointwise identity suite"),
        ("penrose", "check the horizon inequality and Guan-Li bounds"),
        ("convergence", "order, step and clip refinement studies"),
        ("catalog", "list available models"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None, help="JSON config path")
        p.add_argument("--model", type=str, default=None, help="model name override")
        p.add_argument("--out", type=str, default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="sampler seed")
        p.add_argument("--order", type=int, default=None, help="quadrature order")
        p.add_argument("--quiet", action="store_true", help="suppress stdout chatter")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "catalog":
        return cmd_catalog(args)
    try:
        cfg = RunConfig.load(args)
        handler = {
            "mass": cmd_mass,
            "verify": cmd_verify,
            "penrose": cmd_penrose,
            "convergence": cmd_convergence,
        }[args.command]
        return handler(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except mi.NonIntegrableError as exc:
        print(f"numerical hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
