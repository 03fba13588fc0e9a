"""Additive Cauchy decomposition ``f = f_0 + ... + f_{n-1}``.

``f_0`` is the Taylor part read off the outer circle, ``f_j`` (j >= 1) the
principal part read off hole circle j.  Coefficients are discrete Fourier
modes of boundary samples (trapezoid rule on each circle), rescaled to the
component basis.  Constants always go to ``f_0`` so that ``f_j(inf) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvalAtPole, PoleOnContour, TruncationFailure
from .funcrep import CauchyParts, ComplexRational, ComponentSeries, evaluate
from .parallel import pmap

TAU_TAIL = 1e-12
MAX_ORDER = 2048
DEFAULT_MU = 1e-3


def _default_mu(f, mu):
    if mu is not None:
        return mu
    return 0.0 if isinstance(f, ComplexRational) else DEFAULT_MU


def _sample(f, contour, samples):
    if hasattr(f, "sample_contour"):
        return np.asarray(f.sample_contour(contour, samples), dtype=complex)
    try:
        return evaluate(f, contour.points(samples))
    except EvalAtPole as exc:
        raise PoleOnContour(str(exc)) from None


def _modes(f, contour, samples):
    vals = _sample(f, contour, samples)
    if not np.all(np.isfinite(vals)):
        raise PoleOnContour("non-finite samples on contour")
    modes = np.fft.fft(vals) / samples
    half = samples // 2
    k = np.arange(half)
    ratio = contour.radius / contour.disk.radius
    if contour.orientation == 1:
        return modes[:half] * ratio ** (-k.astype(float))
    neg = np.concatenate([[0.0], modes[::-1][: half - 1]])
    return neg * ratio ** k.astype(float)


def _truncate(c, threshold):
    big = np.nonzero(np.abs(c) > threshold)[0]
    last = int(big[-1]) if big.size else 0
    n = 1
    while n <= last:
        n *= 2
    return c[: n + 1] if n + 1 <= c.size else c


def cauchy_decompose(f, domain, samples=256, mu=None):
    """Split ``f`` into per-component series.

    ``f`` may be a :class:`ComplexRational`, a vectorised callable, or an
    object with ``sample_contour(contour, samples)``.  ``samples`` doubles
    until every component's coefficient tail is below ``TAU_TAIL`` times the
    largest coefficient overall.
    """
    mu = _default_mu(f, mu)
    m = samples
    while True:
        contours = domain.contours(m, mu)
        modes = pmap(lambda c: _modes(f, c, m), contours)
        scale = max(float(np.max(np.abs(c))) for c in modes)
        threshold = TAU_TAIL * scale
        tail_ok = all(np.max(np.abs(c[m // 4:])) <= threshold for c in modes)
        if tail_ok or scale == 0.0:
            break
        if m // 4 >= MAX_ORDER:
            raise TruncationFailure(f"coefficient tail did not decay within order {MAX_ORDER}")
        m *= 2
    parts = []
    for j, (disk, c) in enumerate(zip(domain.disks, modes)):
        c = _truncate(c, threshold) if scale > 0 else c[:2]
        parts.append(ComponentSeries(j, disk.center, disk.radius, c))
    return CauchyParts(domain, tuple(parts))


def reassemble(parts, z):
    return parts(z)


@dataclass(frozen=True)
class BoundedAboveReport:
    parts: CauchyParts
    max_real: tuple


def decompose_bounded_above(h, domain, samples=256, mu=None):
    """Decompose ``h`` and report ``max Re h_j`` sampled on circle j.

    By the maximum principle on the simply connected piece carrying
    ``h_j``, the sampled value on its own circle witnesses the upper bound
    of ``Re h_j`` there.
    """
    parts = cauchy_decompose(h, domain, samples, mu)
    m = 4 * max(p.coefficients.size for p in parts.parts)
    m = max(m, 256)
    t = np.exp(2j * np.pi * np.arange(m) / m)
    report = []
    for p, d in zip(parts.parts, domain.disks):
        report.append(float(np.max(p(d.center + d.radius * t).real)))
    return BoundedAboveReport(parts, tuple(report))


def symmetrize_parts(parts, partners):
    """Replace each ``h_j`` by ``(h_j(z) + conj(h_j'(conj z))) / 2``.

    ``partners[j]`` is the mirror component of j.  The result sums to
    ``(h(z) + conj(h(conj z))) / 2``.
    """
    out = []
    for j, s in enumerate(parts.parts):
        t = parts.parts[partners[j]]
        n = max(s.coefficients.size, t.coefficients.size)
        out.append(s.with_coefficients(0.5 * (s.padded(n) + np.conj(t.padded(n)))))
    return CauchyParts(parts.domain, tuple(out))
