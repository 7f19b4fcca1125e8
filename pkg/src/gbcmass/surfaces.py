"""Star-shaped boundary hypersurfaces and their level-set geometry.

Each boundary component is star-shaped about the origin: it is the image of
the unit sphere under theta -> R(theta) theta and also carries a smooth
defining function u with u < 0 inside, u > 0 outside, so the outward unit
normal is Du/|Du| and the shape operator (positive on round spheres, the
mean-convexity convention) is the tangentially projected Hessian of u
divided by |Du|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SphereBoundary",
    "EllipsoidBoundary",
    "DomainDescriptor",
    "tangent_frame",
]


def tangent_frame(xi: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane perpendicular to unit vector xi.

    Deterministic Householder completion; returns an (n, n-1) matrix whose
    columns span xi-perp.
    """
    n = xi.shape[0]
    e0 = np.zeros(n)
    e0[0] = 1.0
    v = xi - e0
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        return np.eye(n)[:, 1:]
    v = v / nv
    house = np.eye(n) - 2.0 * np.outer(v, v)
    return house[:, 1:]


@dataclass(frozen=True)
class SphereBoundary:
    """Round sphere of given radius, centered at the origin."""

    radius: float

    def dimension(self) -> int | None:
        return None  # works in any ambient dimension

    def circumscribed_radius(self) -> float:
        return self.radius

    def radial_profile(self, theta: np.ndarray) -> np.ndarray:
        return np.full(theta.shape[0], self.radius)

    def area_element(self, theta: np.ndarray) -> np.ndarray:
        n = theta.shape[1]
        return np.full(theta.shape[0], self.radius ** (n - 1))

    def defining_function(self, x: np.ndarray):
        r = np.linalg.norm(x)
        u = r - self.radius
        du = x / r
        d2u = (np.eye(x.shape[0]) - np.outer(du, du)) / r
        return u, du, d2u

    def signed_exterior(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.linalg.norm(x, axis=1) - self.radius


@dataclass(frozen=True)
class EllipsoidBoundary:
    """Axis-aligned ellipsoid sum_k x_k^2 / a_k^2 = 1."""

    semi_axes: tuple

    def circumscribed_radius(self) -> float:
        return float(max(self.semi_axes))

    def _quadric(self) -> np.ndarray:
        return np.diag(1.0 / np.asarray(self.semi_axes, dtype=float) ** 2)

    def radial_profile(self, theta: np.ndarray) -> np.ndarray:
        m = 1.0 / np.asarray(self.semi_axes, dtype=float) ** 2
        return 1.0 / np.sqrt(np.einsum("bi,i,bi->b", theta, m, theta))

    def area_element(self, theta: np.ndarray) -> np.ndarray:
        n = theta.shape[1]
        m = 1.0 / np.asarray(self.semi_axes, dtype=float) ** 2
        rr = self.radial_profile(theta)
        mtheta = theta * m
        quad = np.einsum("bi,bi->b", theta, mtheta)
        tang = mtheta - quad[:, None] * theta
        grad = -(rr**3)[:, None] * tang
        return rr ** (n - 2) * np.sqrt(rr**2 + np.einsum("bi,bi->b", grad, grad))

    def defining_function(self, x: np.ndarray):
        m = self._quadric()
        u = float(x @ m @ x) - 1.0
        du = 2.0 * m @ x
        d2u = 2.0 * m
        return u, du, d2u

    def signed_exterior(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        m = 1.0 / np.asarray(self.semi_axes, dtype=float) ** 2
        return np.einsum("bi,i,bi->b", x, m, x) - 1.0


def shape_operator(component, x: np.ndarray):
    """Outward normal, tangent frame, and frame shape operator at x on Sigma.

    Returns (xi, frame, shape) with shape the (n-1) x (n-1) matrix of the
    second fundamental form with respect to the outward normal; spheres give
    +Id/radius.
    """
    u, du, d2u = component.defining_function(x)
    grad_norm = np.linalg.norm(du)
    xi = du / grad_norm
    frame = tangent_frame(xi)
    shape = frame.T @ d2u @ frame / grad_norm
    return xi, frame, shape


@dataclass(frozen=True)
class DomainDescriptor:
    """Base domain of a graph map: full space or the exterior of boundaries."""

    kind: str = "full"  # "full" or "exterior"
    components: tuple = ()
    behavior: str = "none"  # "smooth-extension" or "gradient-blowup"

    def __post_init__(self):
        if self.kind not in ("full", "exterior"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "exterior" and not self.components:
            raise ValueError("exterior domain needs at least one component")

    def has_boundary(self) -> bool:
        return self.kind == "exterior"

    def circumscribed_radius(self) -> float:
        if not self.components:
            return 0.0
        return max(c.circumscribed_radius() for c in self.components)

    def strictly_exterior(self, x: np.ndarray, margin: float = 0.0) -> bool:
        x = np.atleast_2d(x)
        for comp in self.components:
            if np.any(comp.signed_exterior(x) <= margin):
                return False
        return True
