"""Multiplicative factorization ``f = f_0 * f_1 * ... * f_{n-1} * r``.

Each ``f_j = B_j * exp(h_j)`` lives on the simply connected piece carrying
component j: ``B_j`` is the generalized Blaschke product of the zeros
assigned to circle j and ``h_j`` the j-th Cauchy part of a logarithm of the
zero-free quotient.  ``r = sign * prod (z - a_j)**k_j`` collects the winding
of that quotient around each hole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import TAU_W, circle, component_blaschke, split_zeros, winding_number
from .cauchy import cauchy_decompose, symmetrize_parts
from .errors import (
    AmbiguousSign,
    IdenticallyZero,
    InvalidInput,
    NotSymmetric,
    PhaseUnwrapInconsistent,
    ZeroNearContour,
    ZeroOnBoundary,
)
from .funcrep import CauchyParts, ComplexRational, evaluate, sup_norm
from .geometry import INTERIOR, ON_BOUNDARY, Contour, conjugate_partners, locate

TAU_FAC = 1e-8
TAU_SYM = 1e-9
#: Pairing tolerance for conjugate zeros produced by root finding.
TAU_PAIR_CONJ = 1e-8
MAX_UNWRAP_REFINE = 6


@dataclass(frozen=True)
class MonomialProduct:
    centers: tuple
    exponents: tuple
    sign: int = 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, float(self.sign), dtype=complex)
        for a, k in zip(self.centers, self.exponents):
            if k:
                out = out * (z - a) ** k
        return out

    def to_rational(self):
        zeros, poles = [], []
        for a, k in zip(self.centers, self.exponents):
            (zeros if k > 0 else poles).extend([a] * abs(k))
        return ComplexRational(zeros, poles, float(self.sign))

    def negated(self):
        return MonomialProduct(self.centers, self.exponents, -self.sign)

    def to_dict(self):
        return {
            "centers": [[a.real, a.imag] for a in self.centers],
            "exponents": list(self.exponents),
            "sign": self.sign,
        }


@dataclass(frozen=True)
class AnalyticFactor:
    blaschke: object
    series: object

    @property
    def index(self):
        return self.series.index

    def __call__(self, z):
        return self.blaschke(z) * np.exp(self.series(z))

    def to_dict(self):
        return {"blaschke": self.blaschke.to_dict(), "exponent_series": self.series.to_dict()}


@dataclass(frozen=True)
class Factorization:
    function: ComplexRational
    domain: object
    factors: tuple
    rational: MonomialProduct
    residual: float

    def __call__(self, z):
        out = self.rational(z)
        for fac in self.factors:
            out = out * fac(z)
        return out

    @property
    def exponents(self):
        return self.rational.exponents

    @property
    def sign(self):
        return self.rational.sign

    def zero_lists(self):
        return [list(f.blaschke.zeros) for f in self.factors]

    def purity(self):
        """``W[j][m]`` = winding of factor j around hole m (m >= 1, m != j)."""
        holes = self.domain.holes
        out = []
        for j, fac in enumerate(self.factors):
            row = {}
            for m, h in enumerate(holes, start=1):
                if m != j:
                    row[m] = winding_number(fac, circle(h.center, h.radius, 512))
            out.append(row)
        return out

    def to_dict(self):
        return {
            "factors": [f.to_dict() for f in self.factors],
            "rational": self.rational.to_dict(),
            "exponents": list(self.rational.exponents),
            "sign": self.rational.sign,
            "residual": self.residual,
        }


class _LogSampler:
    """Continuous logarithm of a zero-free function on each contour.

    Phase is continued sample to sample; sampling is refined internally
    while any step exceeds pi/2.  The outer contour starts on the principal
    branch at its first sample; hole contours only contribute non-constant
    modes, so their additive constant is immaterial.
    """

    def __init__(self, q):
        self.q = q

    def sample_contour(self, contour, samples):
        m = samples
        for level in range(MAX_UNWRAP_REFINE + 1):
            pts = contour.points(m)
            vals = evaluate(self.q, pts)
            mags = np.abs(vals)
            if np.min(mags) <= TAU_W * np.max(mags):
                raise ZeroNearContour("quotient nearly vanishes on a contour")
            steps = np.angle(np.roll(vals, -1) / vals)
            if np.max(np.abs(steps)) < np.pi / 2:
                break
            m *= 2
        else:
            raise PhaseUnwrapInconsistent("phase steps stay above pi/2 after refinement")
        if abs(np.sum(steps) / (2 * np.pi)) > 0.1:
            raise PhaseUnwrapInconsistent("net phase change around a contour is not zero")
        phase = np.angle(vals[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
        logv = np.log(mags) + 1j * phase
        return logv[:: m // samples]


def log_nonvanishing(g, domain, samples=256, mu=None):
    """Return ``(k, h)`` with ``g = prod (z - a_j)**k_j * exp(h)`` on the domain."""
    if mu is None:
        mu = 0.0 if isinstance(g, ComplexRational) else 1e-3
    k = tuple(
        winding_number(g, Contour(hole, mu=mu, orientation=-1, samples=samples)) * -1
        for hole in domain.holes
    )
    mono = MonomialProduct(tuple(h.center for h in domain.holes), k)
    if isinstance(g, ComplexRational):
        q = g / mono.to_rational()
    else:
        def q(z):
            return evaluate(g, z) / mono(z)
    h = cauchy_decompose(_LogSampler(q), domain, samples, mu)
    return k, h


def _check_input(f, domain):
    if not isinstance(f, ComplexRational):
        raise InvalidInput("factorization requires a rational-class function")
    if f.is_zero:
        raise IdenticallyZero("cannot factor the zero function")
    for p in f.poles:
        if locate(domain, p).tag in (INTERIOR, ON_BOUNDARY):
            raise InvalidInput(f"pole {p} lies in the closed domain")
    for z in f.zeros:
        if locate(domain, z).tag == ON_BOUNDARY:
            raise ZeroOnBoundary(f"zero {z} lies on a boundary circle")


def interior_zeros(f, domain):
    return [z for z in f.zeros if locate(domain, z).tag == INTERIOR]


def _residual(f, approx, domain):
    pts = domain.grid(32)
    return float(np.max(np.abs(approx(pts) - f(pts))))


def _factorize_with_split(f, domain, split, samples):
    blaschkes = [component_blaschke(domain, j, zs) for j, zs in enumerate(split)]
    g = f
    for b in blaschkes:
        g = g / b.to_rational()
    k, h = log_nonvanishing(g, domain, samples)
    factors = tuple(AnalyticFactor(b, s) for b, s in zip(blaschkes, h.parts))
    mono = MonomialProduct(tuple(d.center for d in domain.holes), k)
    fac = Factorization(f, domain, factors, mono, 0.0)
    return _with_residual(fac)


def _with_residual(fac):
    res = _residual(fac.function, fac, fac.domain)
    return Factorization(fac.function, fac.domain, fac.factors, fac.rational, res)


def multiplicative_factorize(f, domain, samples=256):
    _check_input(f, domain)
    split = split_zeros(interior_zeros(f, domain), domain)
    return _factorize_with_split(f, domain, split, samples)


def symmetry_defect(h, domain):
    """``max |conj(h(conj z)) - h(z)|`` over the closed-domain grid."""
    pts = domain.grid(32)
    return float(np.max(np.abs(np.conj(evaluate(h, np.conj(pts))) - evaluate(h, pts))))


def symmetric_snap(f, tol=TAU_PAIR_CONJ):
    """Return ``f`` with exactly conjugation-closed zeros/poles and real
    scale, or raise :class:`NotSymmetric`."""

    def snap(points):
        pts = list(points)
        out = []
        used = [False] * len(pts)
        for i, z in enumerate(pts):
            if used[i]:
                continue
            used[i] = True
            t = tol * max(1.0, abs(z))
            if abs(z.imag) <= t:
                out.append(complex(z.real, 0.0))
                continue
            best = None
            for k in range(len(pts)):
                if not used[k] and abs(pts[k] - z.conjugate()) <= t:
                    if best is None or abs(pts[k] - z.conjugate()) < abs(pts[best] - z.conjugate()):
                        best = k
            if best is None:
                raise NotSymmetric(f"no conjugate partner for {z}")
            used[best] = True
            w = complex(z.real, abs(z.imag))
            out.extend([w, w.conjugate()])
        return out

    if f.is_zero:
        return f
    if abs(f.scale.imag) > tol * abs(f.scale):
        raise NotSymmetric("scale is not real")
    return ComplexRational(snap(f.zeros), snap(f.poles), f.scale.real)


def symmetric_split(zeros, domain, partners):
    """Conjugation-compatible zero split.

    Real zeros go to the nearest self-mirrored circle; for a conjugate pair
    the upper zero follows the usual nearest-circle rule and its mirror goes
    to the mirrored circle.
    """
    out = [[] for _ in domain.disks]
    selfconj = [j for j, p in enumerate(partners) if p == j]
    for z in zeros:
        if z.imag == 0:
            d = [abs(abs(z - domain.disks[j].center) - domain.disks[j].radius) for j in selfconj]
            out[selfconj[int(np.argmin(d))]].append(z)
        elif z.imag > 0:
            j = next(i for i, lst in enumerate(split_zeros([z], domain)) if lst)
            out[j].append(z)
            out[partners[j]].append(z.conjugate())
    return out


def symmetrize_factorization(fact, domain, samples=256):
    partners = conjugate_partners(domain)
    if partners is None:
        raise NotSymmetric("domain is not symmetric about the real axis")
    f = fact.function
    scale = 1.0 + sup_norm(f, domain)
    if symmetry_defect(f, domain) > TAU_SYM * scale:
        raise NotSymmetric("function is not real symmetric")
    fs = symmetric_snap(f)
    _check_input(fs, domain)
    split = symmetric_split(interior_zeros(fs, domain), domain, partners)
    base = _factorize_with_split(fs, domain, split, samples)
    h = CauchyParts(domain, tuple(fc.series for fc in base.factors))
    sym = symmetrize_parts(h, partners)
    factors = tuple(AnalyticFactor(fc.blaschke, s) for fc, s in zip(base.factors, sym.parts))
    candidates = []
    for mono in (base.rational, base.rational.negated()):
        cand = _with_residual(Factorization(fs, domain, factors, mono, 0.0))
        candidates.append(cand)
    best = min(candidates, key=lambda c: c.residual)
    if best.residual > TAU_FAC * scale:
        raise AmbiguousSign(
            f"neither sign reconstructs f (residuals {[c.residual for c in candidates]})"
        )
    return best
