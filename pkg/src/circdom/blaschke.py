"""Generalized Blaschke products, winding numbers and zero tools."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidInput,
    MomentRecoveryFailure,
    NonIntegerWinding,
    ZeroNearContour,
    ZeroOutsideDomain,
)
from .funcrep import ComplexRational, evaluate
from .geometry import INTERIOR, TAU_BOUNDARY, Contour, Disk, locate

#: Relative threshold (times the sampled sup on the contour) below which
#: a function counts as vanishing near the contour.
TAU_W = 1e-6
MAX_WINDING_SAMPLES = 1 << 16
MAX_BLACKBOX_ZEROS = 12


@dataclass(frozen=True)
class GeneralizedBlaschke:
    """Finite Blaschke product transplanted to ``D(a, r)``.

    Interior (``exterior=False``): ``B(z) = b((z - a) / r)``.
    Exterior: ``B(z) = b(r / (z - a))``.  ``b`` uses the factors
    ``(|w|/w) (w - zeta) / (1 - conj(w) zeta)`` and ``zeta`` for ``w = 0``.
    """

    disk: Disk
    exterior: bool
    zeros: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))
        w = self.parameters
        if np.any(np.abs(w) >= 1):
            raise InvalidInput("Blaschke zeros must lie in the open region")

    @property
    def parameters(self):
        a, r = self.disk.center, self.disk.radius
        z = np.asarray(self.zeros, dtype=complex)
        if self.exterior:
            return r / (z - a)
        return (z - a) / r

    def variable(self, z):
        a, r = self.disk.center, self.disk.radius
        z = np.asarray(z, dtype=complex)
        if self.exterior:
            return r / (z - a)
        return (z - a) / r

    def __call__(self, z):
        zeta = self.variable(z)
        out = np.ones(zeta.shape, dtype=complex)
        for w in self.parameters:
            if w == 0:
                out = out * zeta
            else:
                out = out * (abs(w) / w) * (w - zeta) / (1 - w.conjugate() * zeta)
        return out

    def to_rational(self):
        """The same function as a :class:`ComplexRational` in ``z``."""
        a, r = self.disk.center, self.disk.radius
        zeros, poles, scale = [], [], 1.0 + 0j
        for z, w in zip(self.zeros, self.parameters):
            if w == 0:
                zeros.append(a)
                scale /= r
            elif self.exterior:
                zeros.append(z)
                poles.append(a + r * w.conjugate())
                scale *= abs(w)
            else:
                zeros.append(z)
                poles.append(a + r / w.conjugate())
                scale /= abs(w)
        return ComplexRational(zeros, poles, scale)

    def conj_reflect(self):
        return GeneralizedBlaschke(
            self.disk.conjugate(), self.exterior, [z.conjugate() for z in self.zeros]
        )

    def to_dict(self):
        return {
            "disk": {"center": [self.disk.center.real, self.disk.center.imag],
                     "radius": self.disk.radius},
            "exterior": self.exterior,
            "zeros": [[z.real, z.imag] for z in self.zeros],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            re, im = data["disk"]["center"]
            disk = Disk(complex(float(re), float(im)), float(data["disk"]["radius"]))
            zeros = [complex(float(a), float(b)) for a, b in data.get("zeros", [])]
            return cls(disk, bool(data.get("exterior", False)), zeros)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed Blaschke product: {exc}") from None


def component_blaschke(domain, j, zeros):
    return GeneralizedBlaschke(domain.disks[j], exterior=j != 0, zeros=zeros)


def blaschke_eval(b, z):
    return b(z)


@dataclass(frozen=True)
class BlaschkeSum:
    total: float
    per_component: tuple
    partial_sums: np.ndarray
    trend: str


def blaschke_condition(zeros, domain):
    """Partial sums of ``dist(z_k, boundary)`` with a convergence trend.

    The trend is read from the log-log slope of the terms over the second
    half of the sequence: slope at or above -1.05 is flagged "diverging".
    """
    zeros = [complex(z) for z in zeros]
    for z in zeros:
        if locate(domain, z).tag != INTERIOR:
            raise ZeroOutsideDomain(f"zero {z} is not interior to the domain")
    if not zeros:
        return BlaschkeSum(0.0, (0.0,) * domain.connectivity, np.zeros(0), "undetermined")
    d = domain.boundary_distance(np.array(zeros))
    comps = split_zeros(zeros, domain)
    per = tuple(float(np.sum(domain.boundary_distance(np.array(c)))) if c else 0.0 for c in comps)
    partial = np.cumsum(d)
    n = len(d)
    trend = "undetermined"
    if n >= 8:
        k = np.arange(n // 2, n) + 1.0
        slope = np.polyfit(np.log(k), np.log(d[n // 2:]), 1)[0]
        trend = "diverging" if slope >= -1.05 else "converging"
    return BlaschkeSum(float(partial[-1]), per, partial, trend)


def circle(center, radius, samples=256, orientation=1):
    return Contour(Disk(center, radius), mu=0.0, orientation=orientation, samples=samples)


def _winding_raw(f, contour, m):
    pts = contour.points(m)
    vals = evaluate(f, pts)
    mags = np.abs(vals)
    if np.min(mags) <= TAU_W * np.max(mags):
        raise ZeroNearContour("function nearly vanishes on the contour")
    if isinstance(f, ComplexRational):
        raw = np.mean(f.log_derivative(pts) * (pts - contour.disk.center))
        return raw.real, True
    steps = np.angle(np.roll(vals, -1) / vals)
    smooth = np.max(np.abs(steps)) < np.pi / 2
    return float(np.sum(steps) / (2 * np.pi)), smooth


def winding_number(f, contour, samples=None):
    """Winding of ``f`` around ``contour`` (times its orientation).

    Rational input uses the exact logarithmic derivative in a trapezoid
    sum; other callables sum sampled argument increments.
    """
    m = samples or contour.samples
    while True:
        raw, smooth = _winding_raw(f, contour, m)
        k = round(raw)
        if smooth and abs(raw - k) < 0.1:
            return int(k) * contour.orientation
        if m >= MAX_WINDING_SAMPLES:
            raise NonIntegerWinding(f"winding estimate {raw} is not near an integer")
        m *= 2


def locate_zeros(f, domain, samples=512, max_zeros=MAX_BLACKBOX_ZEROS):
    """Zeros of ``f`` in the domain as ``[(zero, multiplicity), ...]``."""
    if isinstance(f, ComplexRational):
        inside = [z for z in f.zeros if locate(domain, z).tag == INTERIOR]
        return _group(inside, 0.0)
    return _moment_zeros(f, domain, samples, max_zeros)


def _group(points, tol):
    out = []
    for z in points:
        for i, (w, m) in enumerate(out):
            if abs(z - w) <= tol:
                out[i] = (w, m + 1)
                break
        else:
            out.append((z, 1))
    return out


def _moment_zeros(f, domain, samples, max_zeros):
    a0, r0 = domain.outer.center, domain.outer.radius
    m = samples
    for _ in range(6):
        moments = np.zeros(max_zeros + 2, dtype=complex)
        for c in domain.contours(m, 0.0):
            t = c.angles(m)
            z = c.points(m)
            vals = evaluate(f, z)
            mags = np.abs(vals)
            if np.min(mags) <= TAU_W * np.max(mags):
                raise ZeroNearContour("function nearly vanishes on a boundary circle")
            k = np.fft.fftfreq(m, 1.0 / m)
            dvals = np.fft.ifft(1j * k * np.fft.fft(vals))
            dvals[np.isclose(np.abs(k), m / 2)] = 0.0
            ratio = dvals / vals
            u = (z - a0) / r0
            for p in range(max_zeros + 2):
                # (1/2 pi i) * integral of u^p f'/f dz = (1/2 pi) sum u^p (df/dt)/f dt
                moments[p] += c.orientation * np.mean(u ** p * ratio) / 1j
        count = moments[0].real
        if abs(count - round(count)) < 0.05:
            break
        m *= 2
    else:
        raise MomentRecoveryFailure("zero count did not converge")
    n = int(round(count))
    if n < 0 or n > max_zeros:
        raise MomentRecoveryFailure(f"zero count {n} outside [0, {max_zeros}]")
    if n == 0:
        return []
    # Newton identities: power sums -> elementary symmetric polynomials
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, n + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * moments[i] for i in range(1, k + 1))
        e[k] = s / k
    poly = [(-1) ** k * e[k] for k in range(n + 1)]  # descending powers of u
    roots = a0 + r0 * np.roots(poly)
    roots = [_polish(f, z, r0) for z in roots]
    grouped = _group(roots, 1e-5 * r0)
    return [(w, mult) for w, mult in grouped]


def _polish(f, z, scale, steps=20):
    h = 1e-6 * scale
    for _ in range(steps):
        fz = evaluate(f, np.array([z]))[0]
        df = (evaluate(f, np.array([z + h]))[0] - evaluate(f, np.array([z - h]))[0]) / (2 * h)
        if df == 0:
            break
        dz = fz / df
        z = z - dz
        if abs(dz) < 1e-15 * scale:
            break
    return complex(z)


def split_zeros(zeros, domain):
    """Assign each zero to the nearest boundary circle (ties: lowest index)."""
    tol = TAU_BOUNDARY * domain.outer.radius
    out = [[] for _ in domain.disks]
    for z in zeros:
        z = complex(z)
        if locate(domain, z).tag != INTERIOR:
            raise ZeroOutsideDomain(f"zero {z} is not interior to the domain")
        d = [abs(abs(z - c.center) - c.radius) for c in domain.disks]
        best = min(d)
        j = next(i for i, v in enumerate(d) if v <= best + tol)
        out[j].append(z)
    return out
