"""Corona bounds, Bezout certificates and the unimodular approximation pipeline.

The pipeline realises density of unimodular pairs for the rational class:
factor ``f`` and ``g`` per boundary component, separate near-common zeros
inside each component pair by small zero shifts, repeat for the cross pairs
``(F_j, G_k)``, reassemble and certify the result with a numerical Bezout
solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lstsq
from scipy.optimize import minimize

from .blaschke import GeneralizedBlaschke
from .cauchy import symmetrize_parts
from .errors import (
    BudgetExceeded,
    IdenticallyZero,
    IllConditioned,
    InvalidInput,
    NotSymmetric,
    NotUnimodular,
)
from .factorization import (
    TAU_FAC,
    TAU_SYM,
    AnalyticFactor,
    multiplicative_factorize,
    symmetric_snap,
    symmetrize_factorization,
    symmetry_defect,
)
from .funcrep import CauchyParts, ComplexRational, ComponentSeries, evaluate, sup_norm
from .geometry import CircularDomain, SimpleRegion, conjugate_partners
from .parallel import pmap

DELTA_MIN = 1e-6
TAU_BEZ = 1e-6
RIDGE = 1e-12
MAX_SERIES = 512
MAX_RETRIES = 8
TAU_COMMON = 1e-10


# --------------------------------------------------------------------------
# lower bounds


def _candidates(funcs, region):
    pts = []
    for f in funcs:
        zs = ()
        if isinstance(f, ComplexRational):
            zs = f.zeros
        elif isinstance(f, AnalyticFactor):
            zs = f.blaschke.zeros
        for z in zs:
            if region.contains(region.project(z)):
                pts.append(z)
            else:
                pts.append(region.project(z))
    return np.array(pts, dtype=complex)


def _modsum(funcs, z):
    out = np.zeros(np.shape(z))
    for f in funcs:
        out = out + np.abs(evaluate(f, z))
    return out


@dataclass(frozen=True)
class LowerBound:
    delta: float
    point: complex
    grid_resolution: int


def _descend(obj, z0, h, size):
    x0 = np.array([z0.real, z0.imag])
    simplex = np.array([x0, x0 + [h, 0.0], x0 + [0.0, h]])
    return minimize(
        obj, x0, method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": 1e-10 * size, "fatol": 1e-14,
                 "maxiter": 400},
    )


def lower_bound_detail(fs, domain, res=32, starts=8):
    """Minimum of ``sum |f_i|`` over the closure of a domain or region.

    Grid scan (plus the stored zeros of rational or Blaschke inputs), then
    Nelder-Mead from the ``starts`` lowest points with iterates projected
    back onto the closure.  Being a sampled minimum, the value estimates the
    infimum from above.
    """
    fs = list(fs)
    pts = domain.grid(res)
    pts = pts[np.isfinite(pts)]
    cand = _candidates(fs, domain)
    if cand.size:
        pts = np.concatenate([pts, np.array([domain.project(z) for z in cand])])
    vals = _modsum(fs, pts)
    order = np.argsort(vals)
    best_v, best_z = float(vals[order[0]]), complex(pts[order[0]])
    if isinstance(domain, SimpleRegion):
        size = 2 * domain.disk.radius
        if domain.exterior:
            far = domain.disk.center + 1e8 * domain.disk.radius
            v = float(_modsum(fs, np.array([far]))[0])
            if v < best_v:
                best_v, best_z = v, far
    else:
        size = domain.diameter
    h = 0.5 * size / res

    def obj(x):
        z = domain.project(complex(x[0], x[1]))
        return float(_modsum(fs, np.array([z]))[0])

    seen = []
    for i in order:
        if len(seen) >= starts or best_v == 0.0:
            break
        z0 = complex(pts[i])
        if any(abs(z0 - s) < 1e-3 * h for s in seen):
            continue
        seen.append(z0)
        r = _descend(obj, z0, h, size)
        if r.fun < best_v:
            best_v = float(r.fun)
            best_z = domain.project(complex(r.x[0], r.x[1]))
    return LowerBound(best_v, best_z, res)


def lower_bound(fs, domain, res=32, starts=8):
    return lower_bound_detail(fs, domain, res, starts).delta


# --------------------------------------------------------------------------
# Bezout certificates


@dataclass(frozen=True)
class UnimodularCertificate:
    delta: float
    bezout: tuple
    residual: float
    basis_size: int
    grid_resolution: int
    norms: tuple = ()

    @property
    def valid(self):
        return self.delta > DELTA_MIN and self.residual < TAU_BEZ

    def to_dict(self):
        return {
            "delta": self.delta,
            "residual": self.residual,
            "basis_size": self.basis_size,
            "grid_resolution": self.grid_resolution,
            "norms": list(self.norms),
            "valid": self.valid,
            "bezout": [x.to_dict()["parts"] for x in self.bezout],
        }


def _basis_values(domain, n, z):
    """Columns ``((z-a0)/r0)**k, k=0..n`` then ``(rj/(z-aj))**k, k=1..n``."""
    cols = []
    u = (z - domain.outer.center) / domain.outer.radius
    cols.append(u[:, None] ** np.arange(n + 1)[None, :])
    for h in domain.holes:
        v = h.radius / (z - h.center)
        cols.append(v[:, None] ** np.arange(1, n + 1)[None, :])
    return np.hstack(cols)


def _unpack(domain, n, coef):
    parts = [ComponentSeries(0, domain.outer.center, domain.outer.radius, coef[: n + 1])]
    off = n + 1
    for j, h in enumerate(domain.holes, start=1):
        c = np.concatenate([[0.0], coef[off: off + n]])
        parts.append(ComponentSeries(j, h.center, h.radius, c))
        off += n
    return CauchyParts(domain, tuple(parts))


def _boundary_points(domain, m):
    t = np.exp(2j * np.pi * np.arange(m) / m)
    return np.concatenate([d.center + d.radius * t for d in domain.disks])


def bezout_residual(fs, xs, domain, m=1024, res=24):
    pts = np.concatenate([_boundary_points(domain, m), domain.grid(res)])
    total = np.zeros(pts.shape, dtype=complex)
    for f, x in zip(fs, xs):
        total = total + evaluate(x, pts) * evaluate(f, pts)
    return float(np.max(np.abs(total - 1.0)))


def _solve(fs, domain, n, ridge):
    m = max(64, 4 * n)
    z = _boundary_points(domain, m)
    basis = _basis_values(domain, n, z)
    blocks = [evaluate(f, z)[:, None] * basis for f in fs]
    a = np.hstack(blocks)
    b = np.ones(a.shape[0], dtype=complex)
    if ridge > 0:
        a = np.vstack([a, np.sqrt(ridge) * np.eye(a.shape[1])])
        b = np.concatenate([b, np.zeros(a.shape[1])])
    coef = lstsq(a, b, lapack_driver="gelsy", check_finite=False)[0]
    k = basis.shape[1]
    return [_unpack(domain, n, coef[i * k: (i + 1) * k]) for i in range(len(fs))], m


def bezout_solve(fs, domain, n=None, ridge=RIDGE, max_n=MAX_SERIES, delta=None):
    """Collocation least squares for ``sum x_i f_i = 1`` on the boundary.

    The series order starts at ``n`` (default 0, constants only) and
    doubles until the residual is comfortably below ``TAU_BEZ``, so simple
    certificates are found in their simplest form.
    """
    fs = list(fs)
    if delta is None:
        delta = lower_bound(fs, domain)
    if delta <= DELTA_MIN:
        raise NotUnimodular(f"corona bound {delta:.3e} does not exceed {DELTA_MIN:g}")
    n = 0 if n is None else int(n)
    best = None
    while True:
        previous = best[1] if best else np.inf
        tries = [ridge] if ridge == 0 else [ridge, 0.0]
        for lam in tries:
            # the ridge biases large-norm solutions (small delta); plain least
            # squares is tried when it misses, both verified on the same grid
            xs, m = _solve(fs, domain, n, lam)
            resid = bezout_residual(fs, xs, domain, m=2 * m)
            if best is None or resid < best[1]:
                best = (xs, resid, n, m)
            if resid <= TAU_BEZ / 10:
                break
        if best[1] <= TAU_BEZ / 10 or n >= max_n:
            break
        if best[1] <= TAU_BEZ and best[1] > 0.5 * previous:
            break  # certified and no longer improving
        n = min(max_n, 2 * n if n else 1)
    xs, resid, n, m = best
    if resid > TAU_BEZ:
        raise IllConditioned(f"Bezout residual {resid:.3e} above {TAU_BEZ:g} at series order {n}")
    norms = tuple(sup_norm(x, domain) for x in xs)
    return UnimodularCertificate(delta, tuple(xs), resid, n, m, norms)


def symmetrize_bezout(fs, xs, domain):
    """Average each ``x_i`` with its reflection ``conj(x_i(conj z))``."""
    partners = conjugate_partners(domain)
    if partners is None:
        raise NotSymmetric("domain is not symmetric about the real axis")
    for f in fs:
        if symmetry_defect(f, domain) > TAU_SYM * (1.0 + sup_norm(f, domain)):
            raise NotSymmetric("inputs are not real symmetric")
    if isinstance(xs, UnimodularCertificate):
        cert = xs
        xs = cert.bezout
    else:
        cert = None
    out = tuple(symmetrize_parts(x, partners) for x in xs)
    if cert is None:
        return list(out)
    resid = bezout_residual(fs, out, domain)
    norms = tuple(sup_norm(x, domain) for x in out)
    return UnimodularCertificate(cert.delta, out, resid, cert.basis_size, cert.grid_resolution, norms)


# --------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class FiberIntersection:
    z1: tuple
    z2: tuple
    z3: tuple

    @property
    def empty(self):
        return not (self.z1 or self.z2 or self.z3)


def _removed_disjoint(r1, r2):
    a1, a2 = r1.disk.center, r2.disk.center
    s1, s2 = r1.disk.radius, r2.disk.radius
    d = abs(a1 - a2)
    if r1.exterior and r2.exterior:
        return d > s1 + s2
    if r1.exterior and not r2.exterior:
        return d + s1 < s2
    if r2.exterior and not r1.exterior:
        return d + s2 < s1
    return False


def _zeros_of(f):
    if isinstance(f, AnalyticFactor):
        return f.blaschke.zeros
    return f.zeros


def _is_zero(f):
    return isinstance(f, ComplexRational) and f.is_zero


def fiber_intersection(f1, region1, f2, region2, tol=TAU_COMMON):
    """Points where the zero sets of ``f1`` (on region1) and ``f2`` meet."""
    if _is_zero(f1) or _is_zero(f2):
        raise IdenticallyZero("fiber analysis needs nonzero functions")
    if not _removed_disjoint(region1, region2):
        raise InvalidInput("the removed disks must have disjoint closures")

    def near(a, b):
        return abs(a - b) <= tol * max(1.0, abs(a))

    def on_circle(z, region):
        d = region.disk
        return abs(abs(z - d.center) - d.radius) <= tol * max(1.0, d.radius)

    z1s, z2s, z3s = [], [], []
    zs1, zs2 = _zeros_of(f1), _zeros_of(f2)
    for z in zs1:
        if region1.contains(z) and region2.contains(z) and any(near(z, w) for w in zs2):
            if not any(near(z, p) for p in z3s):
                z3s.append(z)
    # Z1: zeros of f2 on the circle bounding region1 where f1 also vanishes
    for w in zs2:
        if on_circle(w, region1) and any(near(w, z) for z in zs1) and w not in z1s:
            z1s.append(w)
    for z in zs1:
        if on_circle(z, region2) and any(near(z, w) for w in zs2) and z not in z2s:
            z2s.append(z)
    return FiberIntersection(tuple(z1s), tuple(z2s), tuple(z3s))


# --------------------------------------------------------------------------
# zero shifts


def shift_zero(f, old, new):
    """Move one zero of ``f`` from ``old`` to ``new``."""
    if isinstance(f, AnalyticFactor):
        zs = list(f.blaschke.zeros)
        i = min(range(len(zs)), key=lambda k: abs(zs[k] - old))
        zs[i] = new
        b = f.blaschke
        return AnalyticFactor(GeneralizedBlaschke(b.disk, b.exterior, zs), f.series)
    zs = list(f.zeros)
    i = min(range(len(zs)), key=lambda k: abs(zs[k] - old))
    zs[i] = new
    return ComplexRational(zs, f.poles, f.scale)


def _self_mirror_shift(f, old, new):
    """Shift ``old -> new`` and, for non-real ``old``, the conjugate zero too."""
    f = shift_zero(f, old, new)
    if old.imag != 0:
        f = shift_zero(f, old.conjugate(), new.conjugate())
    return f


def _near_pairs(fz, gz, tau):
    out = []
    for w in gz:
        dists = [abs(w - z) for z in fz]
        if dists and min(dists) < tau:
            out.append((w, fz[int(np.argmin(dists))]))
    return out


def _direction(w, z, rng, real_only):
    if abs(w - z) > 0:
        u = (w - z) / abs(w - z)
        if real_only:
            u = 1.0 if u.real >= 0 else -1.0
        return complex(u)
    if real_only:
        return complex(1.0 if rng.random() < 0.5 else -1.0)
    return complex(np.exp(2j * np.pi * rng.random()))


def _region_change(g_old, g_new, region):
    return sup_norm(lambda z: evaluate(g_old, z) - evaluate(g_new, z), region,
                    samples=256, max_samples=1024)


def _allowed(region, domain, w):
    if not region.contains(w):
        return False
    return domain is None or bool(domain.contains(w))


def _find_shift(g, w, z, budget, rng, *, real_only, allowed, eta0, apply, measure, avoid=()):
    """Choose ``w' = w + eta * u`` whose induced change is at most ``budget``.

    ``u`` points away from the co-zero ``z`` (random when they coincide).
    Starting from ``eta0``, the step is rescaled by the measured change
    (which is close to linear in ``eta`` for small steps) until it fits.
    Candidates closer than ``eta / 2`` to a zero in ``avoid`` are rejected
    so that the shift cannot create a new near-common zero.
    """
    u = _direction(w, z, rng, real_only)
    flippable = abs(w - z) == 0 or real_only
    avoid = np.asarray(list(avoid), dtype=complex)

    def ok(c, eta):
        if not allowed(c):
            return False
        return not avoid.size or float(np.min(np.abs(avoid - c))) >= 0.5 * eta

    eta = eta0
    for _ in range(80):
        cand = w + eta * u
        if not ok(cand, eta) and flippable:
            cand = w - eta * u
        if not ok(cand, eta):
            eta *= 0.5
            continue
        new_g = apply(g, w, cand)
        change = measure(g, new_g)
        if change <= budget:
            return cand, eta, change, new_g
        eta *= min(0.5, 0.9 * budget / change)
    raise BudgetExceeded(f"cannot move zero {w} within budget {budget:.3e}")


def _start_step(w, region, domain):
    """Largest step worth trying: half the distance to the nearest boundary."""
    d = abs(abs(w - region.disk.center) - region.disk.radius)
    if domain is not None:
        d = min(d, float(domain.boundary_distance(w)))
    return 0.5 * d


def perturb_pair_simply_connected(fj, gj, region, eps, *, tau_pair=None, rng=None,
                                  symmetric=False, domain=None, measure=None):
    """Separate near-common zeros of ``fj`` and ``gj`` on a simply connected region.

    Zeros of ``gj`` closer than ``tau_pair`` to a zero of ``fj`` are pushed
    away from it; each shift changes ``gj`` by at most ``eps / (4 * #shifts)``
    (region sup norm unless ``measure`` says otherwise).  With ``symmetric``
    (real-centred region) shifts come in conjugate pairs and real zeros stay
    real.  Returns ``(fj, new_gj, log)``.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if tau_pair is None:
        tau_pair = 1e-3 * 2 * region.disk.radius
    if measure is None:
        def measure(a, b):
            return _region_change(a, b, region)
    fz = [z for z in _zeros_of(fj) if region.contains(z)]
    gz = [w for w in _zeros_of(gj) if region.contains(w)]
    pairs = _near_pairs(fz, gz, tau_pair)
    if symmetric:
        pairs = [(w, z) for w, z in pairs if w.imag >= 0]
    log = []
    if not pairs:
        return fj, gj, log
    budget = eps / (4 * len(pairs))
    apply = _self_mirror_shift if symmetric else shift_zero

    def allowed(c):
        return _allowed(region, domain, c)

    for w, z in pairs:
        real_only = symmetric and w.imag == 0
        new, eta, change, gj = _find_shift(
            gj, w, z, budget, rng, real_only=real_only, allowed=allowed,
            eta0=_start_step(w, region, domain), apply=apply, measure=measure, avoid=fz,
        )
        log.append({"step": "component", "old": w, "new": new, "eta": eta, "change": change,
                    "co_zero": z})
    if not lower_bound_region([fj, gj], region) > 0:
        raise BudgetExceeded("separated pair is still not unimodular on the region")
    return fj, gj, log


def lower_bound_region(fs, region, res=24, starts=4):
    """Sampled minimum of ``sum |f_i|`` over a simply connected region."""
    return lower_bound_detail(fs, region, res, starts).delta


def pair_minima(fs, gs, domain, pairs=None, res=16):
    """``{(j, k): sampled min over the closed domain of |F_j| + |G_k|}``."""
    if pairs is None:
        pairs = [(j, k) for j in range(len(fs)) for k in range(len(gs))]
    vals = pmap(lambda jk: lower_bound([fs[jk[0]], gs[jk[1]]], domain, res=res, starts=3), pairs)
    return dict(zip(pairs, vals))


def cross_perturb(fs, gs, domain, eps, *, rng=None, symmetric=False, tau_pair=None,
                  skip=(), measure=None):
    """Remove near-common zeros between ``F_j`` and ``G_k`` for ``j != k``.

    Returns ``(fs, gs, log)``.  A shift is accepted only if every pairwise
    minimum certified so far stays above half its recorded value; otherwise
    it is halved and retried.  Zeros listed in ``skip`` (already moved) are
    left alone.  ``measure(k, old, new)`` overrides the default size of a
    shift (sup over the component region).
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    tau_pair = 1e-3 * domain.diameter if tau_pair is None else tau_pair
    partners = conjugate_partners(domain) if symmetric else None
    if symmetric and partners is None:
        raise NotSymmetric("domain is not symmetric about the real axis")
    n = len(fs)
    gs = list(gs)
    moved = set(skip)
    conflicts = []
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            gz = [w for w in _zeros_of(gs[k]) if w not in moved]
            for w, z in _near_pairs(list(_zeros_of(fs[j])), gz, tau_pair):
                conflicts.append((j, k, w, z))
    log = []
    if not conflicts:
        return list(fs), gs, log
    minima = pair_minima(fs, gs, domain)
    recorded = {p: v for p, v in minima.items() if v > DELTA_MIN}
    budget = eps / (4 * len(conflicts))
    for j, k, w, z in conflicts:
        if w in moved or w not in _zeros_of(gs[k]):
            continue
        if symmetric and w.imag < 0:
            continue
        region = domain.component(k)
        real_only = symmetric and partners[k] == k and w.imag == 0
        apply = _self_mirror_shift if (symmetric and partners[k] == k) else shift_zero
        if measure is None:
            def meas(a, b, region=region):
                return _region_change(a, b, region)
        else:
            def meas(a, b, k=k):
                return measure(k, a, b)
        local = budget
        eta0 = _start_step(w, region, domain)
        avoid = [a for fj in fs for a in _zeros_of(fj)]
        for _ in range(MAX_RETRIES + 1):
            new, eta, change, new_g = _find_shift(
                gs[k], w, z, local, rng, real_only=real_only,
                allowed=lambda c, region=region: _allowed(region, domain, c),
                eta0=eta0, apply=apply, measure=meas, avoid=avoid,
            )
            trial = list(gs)
            trial[k] = new_g
            touched = {k}
            if partners is not None and partners[k] != k:
                kk = partners[k]
                trial[kk] = shift_zero(trial[kk], w.conjugate(), new.conjugate())
                touched.add(kk)
            pairs = [(jj, kk) for jj in range(n) for kk in sorted(touched)]
            after = dict(minima)
            after.update(pair_minima(fs, trial, domain, pairs))
            if after[(j, k)] > 0 and all(after[p] >= 0.5 * v for p, v in recorded.items()):
                break
            eta0 = 0.5 * eta
            local = 0.5 * local
        else:
            raise BudgetExceeded(f"shift of {w} in G_{k} erodes certified margins")
        log.append({"step": "cross", "pair": [j, k], "old": w, "new": new, "eta": eta,
                    "change": change,
                    "minima_before": {f"{a},{b}": v for (a, b), v in minima.items()},
                    "minima_after": {f"{a},{b}": v for (a, b), v in after.items()}})
        gs = trial
        minima = after
        moved.add(new)
        if partners is not None:
            moved.add(new.conjugate())
        for p, v in after.items():
            if p not in recorded and v > DELTA_MIN:
                recorded[p] = v
    return list(fs), gs, log


# --------------------------------------------------------------------------
# pipeline


@dataclass(frozen=True)
class PerturbationResult:
    F: ComplexRational
    G: ComplexRational
    distance: float
    delta_out: float
    log: list = field(default_factory=list)
    certificate: UnimodularCertificate | None = None
    seed: int = 0
    epsilon: float = 0.0
    symmetric: bool = False

    def to_dict(self):
        return {
            "F": self.F.to_dict(),
            "G": self.G.to_dict(),
            "distance": self.distance,
            "delta_out": self.delta_out,
            "epsilon": self.epsilon,
            "symmetric": self.symmetric,
            "seed": self.seed,
            "log": [_jsonable(e) for e in self.log],
            "certificate": self.certificate.to_dict() if self.certificate else None,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _assemble(func, old_factors, new_factors):
    """``func * prod B_new / B_old`` over the components whose zeros moved."""
    out = func
    for a, b in zip(old_factors, new_factors):
        if a.blaschke.zeros != b.blaschke.zeros:
            out = out * b.blaschke.to_rational() / a.blaschke.to_rational()
    return out


def _distance(a, b, domain):
    if a == b:
        return 0.0
    return sup_norm(lambda z: evaluate(a, z) - evaluate(b, z), domain)


def _mirror_factor(fac, domain, target):
    d = domain.disks[target]
    zeros = [z.conjugate() for z in fac.blaschke.zeros]
    series = ComponentSeries(target, d.center, d.radius, np.conj(fac.series.coefficients))
    return AnalyticFactor(GeneralizedBlaschke(d, fac.blaschke.exterior, zeros), series)


def approximate_by_unimodular(f, g, domain, eps, symmetric=False, seed=0, certify=True):
    """Find a unimodular pair ``(F, G)`` with ``|f - F| + |g - G| <= eps``.

    Only ``g`` is moved.  Component shifts get half of ``eps`` (split over
    the components), cross shifts a quarter; every shift is measured by its
    actual effect on the reassembled ``g`` over the domain.  The whole pass
    is retried with halved budgets (at most ``MAX_RETRIES`` times) when the
    final distance check fails.
    """
    if not isinstance(f, ComplexRational) or not isinstance(g, ComplexRational):
        raise InvalidInput("the pipeline works on rational-class inputs")
    if not eps > 0:
        raise InvalidInput("epsilon must be positive")
    if f.is_zero:
        f = ComplexRational.constant(eps / 4)
    if g.is_zero:
        g = ComplexRational.constant(eps / 4)
    partners = None
    if symmetric:
        partners = conjugate_partners(domain)
        if partners is None:
            raise NotSymmetric("domain is not symmetric about the real axis")
        for h in (f, g):
            if symmetry_defect(h, domain) > TAU_SYM * (1.0 + sup_norm(h, domain)):
                raise NotSymmetric("inputs are not real symmetric")
        f, g = symmetric_snap(f), symmetric_snap(g)
    for h in (f, g):
        if not h.in_hinf(domain):
            raise InvalidInput("inputs must have their poles off the closed domain")

    delta0 = lower_bound([f, g], domain)
    if delta0 > DELTA_MIN:
        cert = _certify([f, g], domain, delta0, partners) if certify else None
        return PerturbationResult(f, g, 0.0, delta0, [], cert, seed, eps, symmetric)

    if symmetric:
        ff = symmetrize_factorization(multiplicative_factorize(f, domain), domain)
        gf = symmetrize_factorization(multiplicative_factorize(g, domain), domain)
        f, g = ff.function, gf.function
    else:
        ff = multiplicative_factorize(f, domain)
        gf = multiplicative_factorize(g, domain)
    n = domain.connectivity
    orig = list(gf.factors)
    tau_pair = 1e-3 * domain.diameter

    counts = []
    for j in range(n):
        region = domain.component(j)
        fz = [z for z in _zeros_of(ff.factors[j]) if region.contains(z)]
        gz = [w for w in _zeros_of(gf.factors[j]) if region.contains(w)]
        pairs = _near_pairs(fz, gz, tau_pair)
        if partners is not None and partners[j] == j:
            pairs = [p for p in pairs if p[0].imag >= 0]
        counts.append(0 if partners is not None and partners[j] < j else len(pairs))
    total = max(1, sum(counts))

    last_error = None
    scale, draw = 1.0, 0
    for attempt in range(MAX_RETRIES + 1):
        rng = np.random.default_rng([seed, draw]) if draw else np.random.default_rng(seed)
        log = [{"step": "attempt", "index": attempt, "scale": scale, "draw": draw}]
        state = list(orig)

        def global_change(k, old, new):
            before = list(state)
            before[k] = old
            after = list(before)
            after[k] = new
            return _distance(_assemble(g, orig, before), _assemble(g, orig, after), domain)

        try:
            fs = list(ff.factors)
            moved = []
            for j in range(n):
                if partners is not None and partners[j] < j:
                    continue
                _, new_g, plog = perturb_pair_simply_connected(
                    fs[j], state[j], domain.component(j), 2.0 * eps * scale * counts[j] / total,
                    tau_pair=tau_pair, rng=rng, domain=domain,
                    symmetric=partners is not None and partners[j] == j,
                    measure=lambda a, b, j=j: global_change(j, a, b),
                )
                for e in plog:
                    e["component"] = j
                    moved.append(e["new"])
                    if partners is not None:
                        moved.append(e["new"].conjugate())
                state[j] = new_g
                if partners is not None and partners[j] != j:
                    state[partners[j]] = _mirror_factor(new_g, domain, partners[j])
                log.extend(plog)
            fs, gs, clog = cross_perturb(
                fs, state, domain, eps * scale, rng=rng, symmetric=symmetric,
                tau_pair=tau_pair, skip=moved,
                measure=global_change,
            )
            state[:] = gs
            log.extend(clog)
        except BudgetExceeded as exc:
            last_error = exc
            scale *= 0.5
            continue
        F = f
        G = _assemble(g, orig, state)
        if symmetric:
            G = symmetric_snap(G)
        distance = _distance(f, F, domain) + _distance(g, G, domain)
        if distance > eps:
            last_error = BudgetExceeded(f"distance {distance:.3e} exceeds epsilon {eps:g}")
            scale *= 0.5
            continue
        delta_out = lower_bound([F, G], domain)
        if not delta_out > DELTA_MIN:
            # shifts too small, or an unlucky direction: grow while there is room
            last_error = BudgetExceeded(f"perturbed pair has corona bound {delta_out:.3e}")
            if 2 * distance <= eps:
                scale *= 2.0
            else:
                draw += 1
            continue
        log.append({"step": "assembly", "residual": _assembly_residual(G, state, gf.rational, domain)})
        cert = _certify([F, G], domain, delta_out, partners) if certify else None
        return PerturbationResult(F, G, distance, delta_out, log, cert, seed, eps, symmetric)
    raise last_error if last_error else BudgetExceeded("perturbation failed")


def _assembly_residual(G, factors, mono, domain):
    """Agreement of the factor product with the assembled rational."""
    pts = domain.grid(16)
    prod = mono(pts)
    for fac in factors:
        prod = prod * fac(pts)
    return float(np.max(np.abs(prod - G(pts))))


def _certify(fs, domain, delta, partners):
    cert = bezout_solve(fs, domain, delta=delta)
    if partners is not None:
        cert = symmetrize_bezout(fs, cert, domain)
    return cert
