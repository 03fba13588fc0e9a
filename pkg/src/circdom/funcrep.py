"""Function representations.

``ComplexRational``
    Zeros/poles/scale form of a rational function; the concrete test class
    on which the whole pipeline runs.
``ComponentSeries`` / ``CauchyParts``
    Truncated series attached to one boundary circle, and the tuple of such
    series that sums to a function on the domain.
``BoundarySamples``
    Values on the quadrature contours.

Anything that is a vectorised callable ``f(z_array) -> array`` can be used
wherever only sampling is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

from .errors import DegreeOverflow, EvalAtPole, InvalidInput, PoleOnBoundary
from .geometry import INTERIOR, ON_BOUNDARY, CircularDomain, SimpleRegion, locate

#: Cancellation / pole-proximity tolerance (relative to max(1, |z|)).
TAU_CANCEL = 1e-12
#: Looser tolerance for cancelling roots produced by root finding.
TAU_ROOT_CANCEL = 1e-8
#: Relative convergence tolerance for :func:`sup_norm`.
TAU_NORM = 1e-10
MAX_DEGREE = 64
DEFAULT_SAMPLES = 256


def _cancel(zeros, poles, tol):
    zeros = list(zeros)
    kept_poles = []
    for p in poles:
        hit = None
        for i, z in enumerate(zeros):
            if abs(z - p) <= tol * max(1.0, abs(p)):
                hit = i
                break
        if hit is None:
            kept_poles.append(p)
        else:
            zeros.pop(hit)
    return tuple(zeros), tuple(kept_poles)


@dataclass(frozen=True, init=False)
class ComplexRational:
    """``scale * prod(z - zeros) / prod(z - poles)``.

    Multiplicities are expressed by repetition.  A zero ``scale`` denotes the
    zero function (with empty zero and pole lists).
    """

    zeros: tuple
    poles: tuple
    scale: complex

    def __init__(self, zeros=(), poles=(), scale=1.0, *, cancel_tol=TAU_CANCEL):
        scale = complex(scale)
        zs = tuple(complex(z) for z in zeros)
        ps = tuple(complex(p) for p in poles)
        if scale == 0:
            zs, ps = (), ()
        else:
            zs, ps = _cancel(zs, ps, cancel_tol)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "poles", ps)
        object.__setattr__(self, "scale", scale)

    @classmethod
    def constant(cls, c):
        return cls((), (), c)

    @classmethod
    def from_multiplicities(cls, zeros=(), poles=(), scale=1.0):
        """Build from ``[(point, multiplicity), ...]`` lists."""
        zs = [complex(z) for z, m in zeros for _ in range(int(m))]
        ps = [complex(p) for p, m in poles for _ in range(int(m))]
        return cls(zs, ps, scale)

    @classmethod
    def from_coefficients(cls, num, den=(1.0,), cancel_tol=TAU_ROOT_CANCEL):
        """Factor ``num(z) / den(z)`` (ascending coefficients) by root finding."""
        num = np.trim_zeros(np.asarray(num, dtype=complex), "b")
        den = np.trim_zeros(np.asarray(den, dtype=complex), "b")
        if den.size == 0:
            raise InvalidInput("zero denominator")
        if num.size == 0:
            return cls.constant(0.0)
        if max(num.size, den.size) - 1 > MAX_DEGREE:
            raise DegreeOverflow(f"degree exceeds {MAX_DEGREE}")
        zeros = P.polyroots(num) if num.size > 1 else []
        poles = P.polyroots(den) if den.size > 1 else []
        return cls(zeros, poles, num[-1] / den[-1], cancel_tol=cancel_tol)

    @property
    def is_zero(self):
        return self.scale == 0

    @property
    def degree(self):
        return max(len(self.zeros), len(self.poles))

    def numerator(self):
        return self.scale * P.polyfromroots(self.zeros) if self.zeros else np.array([self.scale])

    def denominator(self):
        return P.polyfromroots(self.poles) if self.poles else np.array([1.0 + 0j])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        out = np.full(z.shape, self.scale, dtype=complex)
        for p in self.poles:
            if np.any(np.abs(z - p) <= TAU_CANCEL * max(1.0, abs(p))):
                raise EvalAtPole(f"evaluation at pole {p}")
        for w in self.zeros:
            out = out * (z - w)
        for p in self.poles:
            out = out / (z - p)
        return out

    def log_derivative(self, z):
        """``f'(z) / f(z)`` from the zero/pole lists."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for w in self.zeros:
            out = out + 1.0 / (z - w)
        for p in self.poles:
            out = out - 1.0 / (z - p)
        return out

    def conj_reflect(self):
        """The function ``z -> conj(f(conj(z)))``."""
        return ComplexRational(
            [w.conjugate() for w in self.zeros],
            [p.conjugate() for p in self.poles],
            self.scale.conjugate(),
        )

    def __mul__(self, other):
        if isinstance(other, ComplexRational):
            if self.is_zero or other.is_zero:
                return ComplexRational.constant(0.0)
            return ComplexRational(
                self.zeros + other.zeros, self.poles + other.poles, self.scale * other.scale
            )
        return ComplexRational(self.zeros, self.poles, self.scale * complex(other))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.is_zero:
            raise EvalAtPole("reciprocal of the zero function")
        return ComplexRational(self.poles, self.zeros, 1.0 / self.scale)

    def __truediv__(self, other):
        if isinstance(other, ComplexRational):
            return self * other.reciprocal()
        return self * (1.0 / complex(other))

    def __neg__(self):
        return self * -1.0

    def __add__(self, other):
        if not isinstance(other, ComplexRational):
            other = ComplexRational.constant(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if len(self.poles) + len(other.poles) > MAX_DEGREE:
            raise DegreeOverflow(f"degree exceeds {MAX_DEGREE}")
        n1, d1 = self.numerator(), self.denominator()
        n2, d2 = other.numerator(), other.denominator()
        num = P.polyadd(P.polymul(n1, d2), P.polymul(n2, d1))
        if num.size - 1 > MAX_DEGREE:
            raise DegreeOverflow(f"degree exceeds {MAX_DEGREE}")
        num = np.trim_zeros(num, "b")
        scale_ref = max(np.max(np.abs(P.polymul(n1, d2))), np.max(np.abs(P.polymul(n2, d1))))
        if num.size == 0 or np.max(np.abs(num)) <= 1e-14 * scale_ref:
            return ComplexRational.constant(0.0)
        zeros = P.polyroots(num) if num.size > 1 else []
        return ComplexRational(
            zeros, self.poles + other.poles, num[-1], cancel_tol=TAU_ROOT_CANCEL
        )

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ComplexRational):
            other = ComplexRational.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def in_hinf(self, domain):
        """Poles must avoid the closed domain."""
        for p in self.poles:
            tag = locate(domain, p).tag
            if tag in (INTERIOR, ON_BOUNDARY):
                return False
        return True

    def to_dict(self):
        return {
            "zeros": _multiset_to_list(self.zeros),
            "poles": _multiset_to_list(self.poles),
            "scale": [self.scale.real, self.scale.imag],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            zeros = [(complex(float(re), float(im)), int(m)) for re, im, m in data.get("zeros", [])]
            poles = [(complex(float(re), float(im)), int(m)) for re, im, m in data.get("poles", [])]
            sre, sim = data.get("scale", [1.0, 0.0])
            return cls.from_multiplicities(zeros, poles, complex(float(sre), float(sim)))
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed function: {exc}") from None


def _multiset_to_list(points):
    rows = []
    for p in points:
        for row in rows:
            if complex(row[0], row[1]) == p:
                row[2] += 1
                break
        else:
            rows.append([p.real, p.imag, 1])
    return rows


def evaluate(f, z):
    """Evaluate any supported representation."""
    if isinstance(f, (ComplexRational, ComponentSeries, CauchyParts)):
        return f(z)
    return np.asarray(f(np.asarray(z, dtype=complex)), dtype=complex)


@dataclass(frozen=True)
class ComponentSeries:
    """Series in ``((z-a)/r)**k`` (outer, ``index == 0``) or ``(r/(z-a))**k``
    (hole ``index >= 1``).  Hole series carry a zero constant term."""

    index: int
    center: complex
    radius: float
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if self.index >= 1:
            c[0] = 0.0
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def exterior(self):
        return self.index >= 1

    @property
    def basis(self):
        return "hole_inverse" if self.exterior else "outer_taylor"

    @property
    def order(self):
        return self.coefficients.size - 1

    def variable(self, z):
        z = np.asarray(z, dtype=complex)
        if self.exterior:
            return self.radius / (z - self.center)
        return (z - self.center) / self.radius

    def __call__(self, z):
        u = self.variable(z)
        c = self.coefficients
        if u.size * c.size <= 1 << 16:
            # few points (local descent): one matrix product beats Horner's Python loop
            with np.errstate(over="ignore", invalid="ignore"):
                v = np.vander(u.ravel(), c.size, increasing=True) @ c
            return v.reshape(u.shape)
        return P.polyval(u, c)

    def padded(self, n):
        c = np.zeros(max(n, self.coefficients.size), dtype=complex)
        c[: self.coefficients.size] = self.coefficients
        return c

    def with_coefficients(self, c):
        return ComponentSeries(self.index, self.center, self.radius, c)

    def to_dict(self):
        return {
            "component": self.index,
            "basis": self.basis,
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            basis = data["basis"]
            index = int(data["component"])
            if (basis == "hole_inverse") != (index >= 1):
                raise InvalidInput("basis tag does not match component index")
            re, im = data["center"]
            coeffs = [complex(float(a), float(b)) for a, b in data["coefficients"]]
            return cls(index, complex(float(re), float(im)), float(data["radius"]), coeffs)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed series: {exc}") from None


@dataclass(frozen=True)
class CauchyParts:
    domain: CircularDomain
    parts: tuple

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for s in self.parts:
            out = out + s(z)
        return out

    def _combine(self, other, alpha, beta):
        parts = []
        for s, t in zip(self.parts, other.parts):
            n = max(s.coefficients.size, t.coefficients.size)
            parts.append(s.with_coefficients(alpha * s.padded(n) + beta * t.padded(n)))
        return CauchyParts(self.domain, tuple(parts))

    def __add__(self, other):
        return self._combine(other, 1.0, 1.0)

    def __sub__(self, other):
        return self._combine(other, 1.0, -1.0)

    def __mul__(self, c):
        c = complex(c)
        return CauchyParts(
            self.domain, tuple(s.with_coefficients(c * s.coefficients) for s in self.parts)
        )

    __rmul__ = __mul__

    def to_dict(self):
        return {"domain": self.domain.to_dict(), "parts": [s.to_dict() for s in self.parts]}


@dataclass(frozen=True)
class BoundarySamples:
    contours: tuple
    values: tuple

    def __post_init__(self):
        sizes = {len(v) for v in self.values}
        if len(sizes) > 1:
            raise InvalidInput("all contours must carry the same number of samples")

    @property
    def samples(self):
        return len(self.values[0])


def sample_boundary(f, domain, samples=DEFAULT_SAMPLES, mu=0.0):
    contours = tuple(domain.contours(samples, mu))
    values = tuple(evaluate(f, c.points()) for c in contours)
    return BoundarySamples(contours, values)


def _circle_max(f, center, radius, samples):
    theta = 2 * np.pi * np.arange(samples) / samples
    vals = np.abs(evaluate(f, center + radius * np.exp(1j * theta)))
    best = float(np.max(vals))
    # refine the few largest local maxima
    peaks = np.where((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))[0]
    peaks = peaks[np.argsort(vals[peaks])[::-1][:4]]
    h = 2 * np.pi / samples

    def neg(t):
        return -float(np.abs(evaluate(f, np.array([center + radius * np.exp(1j * t)]))[0]))

    for k in peaks:
        res = minimize_scalar(
            neg, bounds=(theta[k] - h, theta[k] + h), method="bounded",
            options={"xatol": 1e-13},
        )
        best = max(best, -res.fun)
    return best


def _check_poles_off(f, disks):
    if isinstance(f, ComplexRational):
        for p in f.poles:
            for d in disks:
                if abs(abs(p - d.center) - d.radius) <= TAU_CANCEL * max(1.0, d.radius):
                    raise PoleOnBoundary(f"pole {p} on boundary circle")


def sup_norm(f, domain, samples=DEFAULT_SAMPLES, max_samples=1 << 15):
    """Boundary supremum of ``|f|`` (equal to the sup over the domain by the
    maximum principle).  ``domain`` may also be a :class:`SimpleRegion`."""
    if isinstance(f, ComplexRational) and f.is_zero:
        return 0.0
    disks = (domain.disk,) if isinstance(domain, SimpleRegion) else domain.disks
    _check_poles_off(f, disks)
    prev = None
    m = samples
    while True:
        cur = max(_circle_max(f, d.center, d.radius, m) for d in disks)
        if prev is not None and abs(cur - prev) <= TAU_NORM * max(1.0, cur):
            return cur
        if m >= max_samples:
            return cur
        prev = cur
        m *= 2
