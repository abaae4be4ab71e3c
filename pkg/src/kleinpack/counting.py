"""Circle counting, power-law fits and curvature arithmetic.

``N_T(P, E)`` counts circles of the packing with ``0 < curv < T`` whose curve
meets the region ``E``.  For a convex region that means
``mindist(center, E) <= radius <= maxdist(center, E)``.  Circles of curvature
<= 0 (bounding circle, lines) are never counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import isprime

from .apollonian import Packing, is_integral, tangent_pairs
from .inversive import descartes_form
from .spherical import planar_spherical_curvature, to_sphere

DEFAULT_WINDOW = (1e2, 1e4)


# ----------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Disk:
    center: tuple
    radius: float
    tol: float = 1e-12

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("region disk needs a positive radius")

    def distances(self, centers):
        d = np.hypot(centers[:, 0] - self.center[0], centers[:, 1] - self.center[1])
        return np.maximum(d - self.radius, 0.0), d + self.radius

    def contains(self, other) -> bool:
        if isinstance(other, Disk):
            d = math.dist(self.center, other.center)
            return d + other.radius <= self.radius
        if isinstance(other, Rectangle):
            corners = np.array(other.corners)
            return bool(np.all(np.hypot(corners[:, 0] - self.center[0],
                                        corners[:, 1] - self.center[1]) <= self.radius))
        return False


@dataclass(frozen=True)
class Rectangle:
    x0: float
    y0: float
    x1: float
    y1: float
    tol: float = 1e-12

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("rectangle corners must satisfy x0 < x1 and y0 < y1")

    @property
    def corners(self):
        return [(self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1)]

    def distances(self, centers):
        x, y = centers[:, 0], centers[:, 1]
        dx = np.maximum(np.maximum(self.x0 - x, 0.0), x - self.x1)
        dy = np.maximum(np.maximum(self.y0 - y, 0.0), y - self.y1)
        far_x = np.maximum(np.abs(x - self.x0), np.abs(x - self.x1))
        far_y = np.maximum(np.abs(y - self.y0), np.abs(y - self.y1))
        return np.hypot(dx, dy), np.hypot(far_x, far_y)

    def contains(self, other) -> bool:
        if isinstance(other, Rectangle):
            return (self.x0 <= other.x0 and other.x1 <= self.x1
                    and self.y0 <= other.y0 and other.y1 <= self.y1)
        if isinstance(other, Disk):
            (cx, cy), r = other.center, other.radius
            return (self.x0 <= cx - r and cx + r <= self.x1
                    and self.y0 <= cy - r and cy + r <= self.y1)
        return False


@dataclass(frozen=True)
class PeriodWindow:
    """One full period of a strip packing: every translation class counts once."""


@dataclass(frozen=True)
class SphericalCap:
    """Closed cap ``{p : angle(p, normal) <= angle}`` on the unit sphere."""

    normal: tuple
    angle: float
    tol: float = 1e-12

    def __post_init__(self):
        if not 0 < self.angle <= math.pi:
            raise ValueError("cap angle must lie in (0, pi]")


def _meets(p: Packing, e, mask):
    """Boolean array: circle curve (or one of its translates) meets ``e``."""
    if isinstance(e, PeriodWindow):
        if not p.is_periodic:
            raise ValueError("period-window regions need a strip packing")
        return mask
    if isinstance(e, SphericalCap):
        return mask & _meets_cap(p, e)
    centers, radii = p.centers, p.radii
    if not p.is_periodic:
        lo, hi = e.distances(centers)
        return mask & (lo <= radii + e.tol) & (radii <= hi + e.tol)
    tx, ty = (float(v) for v in p.period)
    hit = np.zeros(len(p), dtype=bool)
    # translates of representatives within one period of the region suffice
    reach = 2 * float(np.max(radii, initial=0.0)) + _region_extent(e)
    n_max = int(math.ceil(reach / math.hypot(tx, ty))) + 1
    for n in range(-n_max, n_max + 1):
        shifted = centers + np.array([n * tx, n * ty])
        lo, hi = e.distances(shifted)
        hit |= (lo <= radii + e.tol) & (radii <= hi + e.tol)
    return mask & hit


def _region_extent(e):
    if isinstance(e, Disk):
        return math.hypot(*e.center) + e.radius
    return max(math.hypot(x, y) for x, y in e.corners)


def _meets_cap(p: Packing, cap: SphericalCap):
    n0 = np.asarray(cap.normal, dtype=float)
    n0 = n0 / np.linalg.norm(n0)
    out = np.zeros(len(p), dtype=bool)
    for i, c in enumerate(p.circles):
        s = to_sphere(c)
        # closest point of the circle to the cap center is |ang - theta| away
        ang = math.acos(max(-1.0, min(1.0, float(np.dot(n0, s.normal)))))
        out[i] = abs(ang - s.theta) <= cap.angle + cap.tol
    return out


def _check_T(p: Packing, T):
    if T > p.cutoff:
        raise ValueError(
            f"T = {T} exceeds the generation cutoff {p.cutoff}; counts would be incomplete"
        )


def count(p: Packing, e, T) -> int:
    """``N_T(P, E)``: circles with ``0 < curv < T`` meeting ``e``."""
    _check_T(p, T)
    k = p.curvatures
    return int(np.count_nonzero(_meets(p, e, (k > 0) & (k < T))))


def count_spherical(p: Packing, e, T) -> int:
    """Circles whose spherical image has ``cot theta < T`` and meets ``e``.

    ``e`` is a :class:`SphericalCap`, or ``None`` for the whole sphere.
    Spherical curvature is computed from the planar coordinates.  Since
    ``cocurv >= -1/curv``, a circle of planar curvature ``k >= 1`` has spherical
    curvature at least ``(k - 1/k) / 2``; counts are complete only below that
    bound at the generation cutoff.
    """
    if p.is_periodic:
        raise ValueError("spherical counts need a bounded packing (strip translates are not stored)")
    bound = (p.cutoff - 1 / p.cutoff) / 2 if p.cutoff >= 1 else 0.0
    if T > bound:
        raise ValueError(
            f"T = {T} exceeds {bound:g}, the largest complete spherical threshold "
            f"for cutoff {p.cutoff}"
        )
    ks = np.array([planar_spherical_curvature(c) for c in p.circles])
    mask = ks < T
    if e is not None:
        mask &= _meets_cap(p, e)
    return int(np.count_nonzero(mask))


@dataclass
class CountSeries:
    Ts: np.ndarray
    counts: np.ndarray
    region: object = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.Ts = np.asarray(self.Ts, dtype=float)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if np.any(np.diff(self.Ts) <= 0):
            raise ValueError("T grid must be strictly increasing")

    def rows(self):
        return [(float(t), int(n)) for t, n in zip(self.Ts, self.counts)]


def log_grid(lo: float, hi: float, n: int = 41) -> np.ndarray:
    g = np.logspace(math.log10(lo), math.log10(hi), n)
    g[0], g[-1] = lo, hi  # logspace may overshoot the cutoff by an ulp
    return g


def count_series(p: Packing, e, Ts) -> CountSeries:
    Ts = np.asarray(Ts, dtype=float)
    if Ts.size and Ts[-1] > p.cutoff:
        _check_T(p, Ts[-1])
    k = p.curvatures
    hit = _meets(p, e, k > 0)
    ks = np.sort(k[hit])
    counts = np.searchsorted(ks, Ts, side="left")
    meta = {"root": p.root, "cutoff": p.cutoff, "source": p.source}
    return CountSeries(Ts, counts, e, meta)


@dataclass
class FitResult:
    exponent: float
    intercept: float
    window: tuple
    residuals: np.ndarray
    n_points: int = 0

    @property
    def rms_residual(self) -> float:
        return float(np.sqrt(np.mean(self.residuals**2)))


def fit_exponent(s: CountSeries, window=DEFAULT_WINDOW) -> FitResult:
    """Least-squares slope of ``log N_T`` against ``log T`` over ``window``."""
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"degenerate window {window}")
    sel = (s.Ts >= lo * (1 - 1e-12)) & (s.Ts <= hi * (1 + 1e-12))
    if np.count_nonzero(sel) < 5:
        raise ValueError(f"need at least 5 grid points in {window}, got {np.count_nonzero(sel)}")
    Ts, Ns = s.Ts[sel], s.counts[sel]
    if np.any(Ns <= 0):
        raise ValueError("zero counts inside the fit window")
    x, y = np.log(Ts), np.log(Ns.astype(float))
    slope, intercept = np.polyfit(x, y, 1)
    return FitResult(float(slope), float(intercept), (float(Ts[0]), float(Ts[-1])),
                     y - (slope * x + intercept), int(sel.sum()))


def ratio_stability(p: Packing, e1, e2, Ts) -> list:
    """``N_T(e1) / N_T(e2)`` along ``Ts``; ``nan`` where the denominator is 0."""
    a = count_series(p, e1, Ts).counts
    b = count_series(p, e2, Ts).counts
    return [float(x) / float(y) if y else math.nan for x, y in zip(a, b)]


def ratio_spread(ratios) -> float:
    """max/min of the finite ratios."""
    r = np.asarray([x for x in ratios if np.isfinite(x)])
    if r.size == 0 or r.min() <= 0:
        return math.inf
    return float(r.max() / r.min())


# ----------------------------------------------------------------------------
# integral packings


def _integral_curvatures(p: Packing, T):
    if p.root is not None and not is_integral(p):
        raise ValueError("packing is not integral")
    _check_T(p, T)
    ks = []
    for c in p.circles:
        k = c.curv
        if 0 < k < T:
            if not float(k).is_integer():
                raise ValueError(f"non-integral curvature {k}")
            ks.append(int(k))
    return ks


@lru_cache(maxsize=None)
def _is_prime(n: int) -> bool:
    return bool(isprime(n))


def prime_pi(p: Packing, T) -> int:
    """Circles of prime curvature below ``T`` (one period for strip packings)."""
    return sum(1 for k in _integral_curvatures(p, T) if _is_prime(k))


def twin_prime_pi(p: Packing, T) -> int:
    """Tangent pairs with both curvatures prime and below ``T``."""
    _integral_curvatures(p, T)
    n = 0
    for i, j, _ in tangent_pairs(p, T, verify=False):
        if _is_prime(int(p.circles[i].curv)) and _is_prime(int(p.circles[j].curv)):
            n += 1
    return n


def distinct_curvatures(p: Packing, T) -> int:
    return len(set(_integral_curvatures(p, T)))


@dataclass
class ResidueReport:
    modulus: int
    solutions: int  # tuples with Q = 0 mod m, all-even tuples excluded
    excluded_all_even: int
    parity_histogram: dict  # number of odd entries -> count of surviving solutions
    violations: list  # sample of solutions without exactly two odd entries

    @property
    def two_even_two_odd(self) -> bool:
        return not self.violations and self.solutions > 0

    def __str__(self):
        verdict = "holds" if self.two_even_two_odd else "fails"
        hist = ", ".join(f"{k} odd: {v}" for k, v in sorted(self.parity_histogram.items()))
        lines = [
            f"modulus {self.modulus}: {self.solutions} solutions of Q = 0 "
            f"(excluding {self.excluded_all_even} all-even tuples)",
            f"parity of solutions: {hist}",
            f"two even and two odd entries in every solution: {verdict}",
        ]
        if self.violations:
            lines.append("first exceptions: " + " ".join(map(str, self.violations[:5])))
        return "\n".join(lines)


def residue_scan(m: int) -> ResidueReport:
    """Exhaustive scan of all ``m**4`` residue tuples for ``Q = 0 mod m``."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    r = np.arange(m, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    q = descartes_form(a, b, c, d) % m
    odd = (a % 2) + (b % 2) + (c % 2) + (d % 2)
    zero = q == 0
    all_even = zero & (odd == 0)
    keep = zero & (odd > 0)
    hist = {int(k): int(np.count_nonzero(keep & (odd == k))) for k in range(1, 5)}
    hist = {k: v for k, v in hist.items() if v}
    bad = keep & (odd != 2)
    idx = np.argwhere(bad)[:10]
    return ResidueReport(
        modulus=m,
        solutions=int(np.count_nonzero(keep)),
        excluded_all_even=int(np.count_nonzero(all_even)),
        parity_histogram=hist,
        violations=[tuple(int(v) for v in row) for row in idx],
    )
