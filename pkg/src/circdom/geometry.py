"""Circular domains, their boundary circles and quadrature contours.

A circular domain is an open disk ``D(a0, r0)`` with finitely many closed,
pairwise disjoint disks ``closure(D(aj, rj))`` removed.  Component index 0
always refers to the outer circle, indices ``1..n-1`` to the holes in the
order given.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainValidationError,
    HoleOutsideOuter,
    HoleOverlap,
    HoleTouchesOuter,
    InvalidInput,
)

#: Boundary tolerance for ``OnBoundary`` classification, relative to r0.
TAU_BOUNDARY = 1e-12

INTERIOR = "Interior"
IN_HOLE = "InHole"
OUTSIDE_OUTER = "OutsideOuter"
ON_BOUNDARY = "OnBoundary"


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not np.isfinite(self.center.real) or not np.isfinite(self.center.imag):
            raise InvalidInput("disk center must be finite")
        if not self.radius > 0 or not np.isfinite(self.radius):
            raise InvalidInput("disk radius must be positive and finite")

    def conjugate(self):
        return Disk(self.center.conjugate(), self.radius)


@dataclass(frozen=True)
class CircularDomain:
    """Validated circular domain; build through :func:`validate_domain`."""

    outer: Disk
    holes: tuple = ()

    @property
    def connectivity(self):
        return 1 + len(self.holes)

    @property
    def disks(self):
        """All boundary disks, outer first."""
        return (self.outer,) + tuple(self.holes)

    @property
    def diameter(self):
        return 2.0 * self.outer.radius

    def component(self, j):
        return SimpleRegion(self.disks[j], exterior=j != 0)

    def conjugate(self):
        return CircularDomain(self.outer.conjugate(), tuple(h.conjugate() for h in self.holes))

    def contains(self, z):
        """Vectorised membership test for the open domain."""
        z = np.asarray(z, dtype=complex)
        inside = np.abs(z - self.outer.center) < self.outer.radius
        for h in self.holes:
            inside &= np.abs(z - h.center) > h.radius
        return inside

    def boundary_distance(self, z):
        z = np.asarray(z, dtype=complex)
        return np.min(
            [np.abs(np.abs(z - d.center) - d.radius) for d in self.disks], axis=0
        )

    def project(self, z):
        """Nearest point of the closed domain (radial projection)."""
        z = complex(z)
        a, r = self.outer.center, self.outer.radius
        if abs(z - a) > r:
            z = a + r * (z - a) / abs(z - a)
        for h in self.holes:
            d = abs(z - h.center)
            if d < h.radius:
                u = (z - h.center) / d if d > 0 else 1.0
                z = h.center + h.radius * u
        return z

    def contours(self, samples=256, mu=0.0):
        """Null-homologous cycle: outer circle ccw, hole circles cw."""
        out = [Contour(self.outer, mu=mu, orientation=1, samples=samples)]
        out += [Contour(h, mu=mu, orientation=-1, samples=samples) for h in self.holes]
        return out

    def grid(self, res=32, boundary_samples=None):
        """Polar grid around the outer centre restricted to the closed domain.

        Boundary circles are appended with ``boundary_samples`` points each
        (default ``4 * res``).
        """
        a, r = self.outer.center, self.outer.radius
        rho = r * (np.arange(1, res + 1) / (res + 1))
        theta = 2 * np.pi * (np.arange(2 * res) + 0.5) / (2 * res)
        pts = (a + rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
        pts = pts[self.contains(pts)]
        m = boundary_samples or 4 * res
        ring = np.exp(2j * np.pi * np.arange(m) / m)
        bnd = [d.center + d.radius * ring for d in self.disks]
        return np.concatenate([pts] + bnd)

    def to_dict(self):
        return {"outer": _disk_to_dict(self.outer), "holes": [_disk_to_dict(h) for h in self.holes]}

    @classmethod
    def from_dict(cls, data):
        try:
            outer = _disk_from_dict(data["outer"])
            holes = [_disk_from_dict(h) for h in data.get("holes", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed domain: {exc}") from None
        return validate_domain(outer, holes)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SimpleRegion:
    """Simply connected piece: the open disk (``exterior=False``) or the
    complement of its closure in the extended plane (``exterior=True``)."""

    disk: Disk
    exterior: bool = False

    def to_unit(self, z):
        z = np.asarray(z, dtype=complex)
        a, r = self.disk.center, self.disk.radius
        if self.exterior:
            with np.errstate(divide="ignore", invalid="ignore"):
                return r / (z - a)
        return (z - a) / r

    def from_unit(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        a, r = self.disk.center, self.disk.radius
        if self.exterior:
            with np.errstate(divide="ignore", invalid="ignore"):
                return a + r / zeta
        return a + r * zeta

    def contains(self, z):
        d = np.abs(np.asarray(z, dtype=complex) - self.disk.center)
        return d > self.disk.radius if self.exterior else d < self.disk.radius

    def project(self, z):
        z = complex(z)
        a, r = self.disk.center, self.disk.radius
        d = abs(z - a)
        if (self.exterior and d < r) or (not self.exterior and d > r):
            u = (z - a) / d if d > 0 else 1.0
            return a + r * u
        return z

    def boundary(self, samples=256):
        t = 2 * np.pi * np.arange(samples) / samples
        return self.disk.center + self.disk.radius * np.exp(1j * t)

    def grid(self, res=32):
        """Image of a unit-disk polar grid (the point at infinity excluded)."""
        rho = np.arange(1, res + 1) / res
        theta = 2 * np.pi * (np.arange(2 * res) + 0.5) / (2 * res)
        zeta = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
        return self.from_unit(zeta)


@dataclass(frozen=True)
class Contour:
    """Quadrature circle near the boundary circle ``disk``.

    The sampled radius is ``r * (1 - orientation * mu)``: outer contours
    (orientation +1) move inward, hole contours (orientation -1) outward,
    so both stay inside the domain.
    """

    disk: Disk
    mu: float = 0.0
    orientation: int = 1
    samples: int = 256

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise InvalidInput("orientation must be +1 or -1")
        if self.samples < 16 or self.samples & (self.samples - 1):
            raise InvalidInput("contour sample count must be a power of two >= 16")
        if not 0 <= self.mu < 1:
            raise InvalidInput("contour offset must lie in [0, 1)")

    @property
    def radius(self):
        return self.disk.radius * (1.0 - self.orientation * self.mu)

    def angles(self, samples=None):
        m = samples or self.samples
        return 2 * np.pi * np.arange(m) / m

    def points(self, samples=None):
        return self.disk.center + self.radius * np.exp(1j * self.angles(samples))

    def with_samples(self, samples):
        return Contour(self.disk, self.mu, self.orientation, samples)


@dataclass(frozen=True)
class Location:
    tag: str
    index: int | None
    distance: float = field(default=0.0)


def validate_domain(outer, holes=()):
    """Check the containment and disjointness invariants.

    Raises the exception class of the first violation, carrying the full
    list of violations.
    """
    holes = tuple(holes)
    violations = []
    a0, r0 = outer.center, outer.radius
    for j, h in enumerate(holes, start=1):
        d = abs(h.center - a0)
        if d + h.radius < r0:
            continue
        if d >= r0 + h.radius:
            violations.append(("HoleOutsideOuter", (j,)))
        else:
            violations.append(("HoleTouchesOuter", (j,)))
    for j in range(len(holes)):
        for k in range(j + 1, len(holes)):
            if not abs(holes[j].center - holes[k].center) > holes[j].radius + holes[k].radius:
                violations.append(("HoleOverlap", (j + 1, k + 1)))
    if violations:
        cls = {
            "HoleOutsideOuter": HoleOutsideOuter,
            "HoleTouchesOuter": HoleTouchesOuter,
            "HoleOverlap": HoleOverlap,
        }[violations[0][0]]
        raise cls(violations)
    return CircularDomain(outer, holes)


def annulus(r1, r2, center=0j):
    return validate_domain(Disk(center, r2), [Disk(center, r1)])


def locate(domain, z):
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise InvalidInput("locate requires a finite point")
    signed = [abs(z - d.center) - d.radius for d in domain.disks]
    dist = [abs(s) for s in signed]
    j = int(np.argmin(dist))
    tol = TAU_BOUNDARY * domain.outer.radius
    if dist[j] <= tol:
        return Location(ON_BOUNDARY, j, dist[j])
    if signed[0] > 0:
        return Location(OUTSIDE_OUTER, 0, dist[j])
    for k in range(1, len(signed)):
        if signed[k] < 0:
            return Location(IN_HOLE, k, dist[j])
    return Location(INTERIOR, None, dist[j])


def conjugate_partners(domain, tol=None):
    """Map each component index to the index of its mirror image.

    Returns ``None`` when the domain is not symmetric about the real axis.
    """
    tol = TAU_BOUNDARY * domain.outer.radius if tol is None else tol
    if abs(domain.outer.center.imag) > tol:
        return None
    partners = [0]
    holes = domain.holes
    used = set()
    for j, h in enumerate(holes, start=1):
        target = h.center.conjugate()
        match = None
        for k, g in enumerate(holes, start=1):
            if abs(g.center - target) <= tol and abs(g.radius - h.radius) <= tol:
                if k == j or k not in used:
                    match = k
                    break
        if match is None:
            return None
        used.add(match)
        partners.append(match)
    if sorted(partners) != list(range(len(partners))):
        return None
    return partners


def is_real_symmetric(domain):
    return conjugate_partners(domain) is not None


def _disk_to_dict(d):
    return {"center": [d.center.real, d.center.imag], "radius": d.radius}


def _disk_from_dict(data):
    re, im = data["center"]
    return Disk(complex(float(re), float(im)), float(data["radius"]))
