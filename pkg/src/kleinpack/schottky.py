"""Schottky groups from disk pairs: validation, orbit packings and the
critical exponent via Poincare-series shell sums.

Letters are indexed ``0 .. 2k-1``: letter ``i < k`` is the generator
``gamma_i`` and letter ``i + k`` its inverse.  ``gamma_i`` maps the outside of
``D_i`` onto the inside of ``D_i'``, so every letter ``x`` has a target disk
(``D_i'`` for ``gamma_i``, ``D_i`` for its inverse) that it maps the outside of
its inverse's target into.  Orbit circles are indexed by a reduced prefix ``w``
and a final letter ``x``: the circle ``w(boundary of target(x))`` bounding the
disk ``w(target(x))``.  Appending a letter shrinks the disk strictly, which is
what makes radius pruning exact.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .apollonian import DEFAULT_MAX_CIRCLES, Packing, ResourceLimitError
from .inversive import MobiusMap, apply_mobius, center_radius, invert, make_circle

BOUNDARY_TOL = 1e-9


class BracketError(ValueError):
    """The shell-ratio curve does not cross 1 inside the search bracket."""


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    def circle(self):
        return make_circle(self.center, self.radius)


def standard_pairing(D: Disk, Dp: Disk, twist: float = 0.0) -> MobiusMap:
    """``z -> c' + exp(i twist) r r' / (z - c)``.

    Sends the boundary of ``D`` onto the boundary of ``Dp`` and the inside of
    ``D`` onto the outside of ``Dp`` (the center goes to infinity).
    """
    if D.center == Dp.center:
        raise ValueError("paired disks have coincident centers")
    k = cmath.exp(1j * twist) * D.radius * Dp.radius
    c, cp = D.center, Dp.center
    return MobiusMap(cp, k - c * cp, 1, -c)


@dataclass(frozen=True)
class SchottkyGroup:
    pairs: tuple
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(self.pairs) != len(self.generators):
            raise ValueError("need one generator per disk pair")
        if not self.pairs:
            raise ValueError("genus must be at least 1")

    @classmethod
    def from_disks(cls, pairs, twists=None) -> "SchottkyGroup":
        twists = [0.0] * len(pairs) if twists is None else list(twists)
        gens = [standard_pairing(D, Dp, t) for (D, Dp), t in zip(pairs, twists)]
        return cls(tuple(pairs), tuple(gens))

    @property
    def genus(self) -> int:
        return len(self.pairs)

    @cached_property
    def letters(self) -> tuple:
        """Maps for letters ``0 .. 2k-1``."""
        return self.generators + tuple(invert(g) for g in self.generators)

    def inverse_letter(self, x: int) -> int:
        k = self.genus
        return x + k if x < k else x - k

    def target(self, x: int) -> Disk:
        k = self.genus
        return self.pairs[x][1] if x < k else self.pairs[x - k][0]

    def letter_name(self, x: int) -> str:
        k = self.genus
        base = "abcdefghijklmnopqrstuvwxyz"
        return base[x] if x < k else base[x - k].upper()

    @property
    def disks(self) -> tuple:
        return tuple(self.target(x) for x in range(2 * self.genus))


def sample_group() -> SchottkyGroup:
    """Genus 2: unit disks at -3 and 3 paired, at -3i and 3i paired, no twist."""
    return SchottkyGroup.from_disks(
        [(Disk(-3, 1), Disk(3, 1)), (Disk(-3j, 1), Disk(3j, 1))]
    )


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid Schottky group"
        return "\n".join(self.violations)


def validate(g: SchottkyGroup, n_samples: int = 64) -> ValidationReport:
    """Check disjointness of the closed disks and the pairing properties."""
    report = ValidationReport()
    disks = [(f"D{i + 1}", D) for i, pair in enumerate(g.pairs) for D in pair]
    disks = [(name + ("'" if j % 2 else ""), D) for j, (name, D) in enumerate(disks)]
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            (ni, Di), (nj, Dj) = disks[i], disks[j]
            dist = abs(Di.center - Dj.center)
            if dist <= Di.radius + Dj.radius:
                report.violations.append(
                    f"disks {ni} and {nj} are not disjoint: center distance "
                    f"{dist:.6g} <= radius sum {Di.radius + Dj.radius:.6g}"
                )
    angles = np.linspace(0, 2 * np.pi, n_samples, endpoint=False)
    for i, ((D, Dp), gam) in enumerate(zip(g.pairs, g.generators)):
        pts = D.center + D.radius * np.exp(1j * angles)
        worst = 0.0
        for z in pts:
            w = gam(z)
            err = math.inf if w == math.inf else abs(abs(w - Dp.center) - Dp.radius)
            worst = max(worst, err / max(1.0, Dp.radius))
        if worst > BOUNDARY_TOL:
            report.violations.append(
                f"generator {i + 1} does not map the boundary of D{i + 1} onto "
                f"D{i + 1}': max deviation {worst:.3g}"
            )
        inner = [D.center] + list(D.center + 0.5 * D.radius * np.exp(1j * angles[::8]))
        for z in inner:
            w = gam(z)
            if w != math.inf and abs(w - Dp.center) <= Dp.radius:
                report.violations.append(
                    f"generator {i + 1} maps the interior point {z:.6g} of D{i + 1} "
                    f"into D{i + 1}' (distance {abs(w - Dp.center):.6g})"
                )
                break
    return report


def _require_valid(g):
    rep = validate(g)
    if not rep.ok:
        raise ValueError(f"invalid Schottky group:\n{rep}")


def orbit_disk(g: SchottkyGroup, word) -> tuple:
    """Center and radius of the nested disk for a nonempty reduced word of letters."""
    word = list(word)
    m = MobiusMap.identity()
    for x in word[:-1]:
        m = m @ g.letters[x]
    img = apply_mobius(m, g.target(word[-1]).circle())
    return center_radius(img)


def is_reduced(g: SchottkyGroup, word) -> bool:
    return all(g.inverse_letter(a) != b for a, b in zip(word, word[1:]))


def _orbit_walk(args):
    g, letters, min_radius, max_circles, max_depth = args
    mats = [x.matrix for x in g.letters]
    found = []
    queue = deque((np.eye(2, dtype=complex), x, "") for x in letters)
    while queue:
        M, x, prefix = queue.popleft()
        circ = apply_mobius(MobiusMap.from_matrix(M), g.target(x).circle())
        if circ.curv <= 0 or 1.0 / circ.curv < min_radius:
            continue
        word = prefix + g.letter_name(x)
        found.append((circ, word))
        if len(found) > max_circles:
            raise ResourceLimitError(f"more than {max_circles} orbit circles")
        if max_depth is not None and len(prefix) >= max_depth:
            continue
        M2 = M @ mats[x]
        for y in range(2 * g.genus):
            if y != g.inverse_letter(x):
                queue.append((M2, y, word))
    return found


def generate_orbit(g: SchottkyGroup, min_radius: float, *, workers: int = 1,
                   max_circles: int = DEFAULT_MAX_CIRCLES, max_depth=None) -> Packing:
    """Orbit circles of the 2k boundary circles with radius >= ``min_radius``.

    Each circle's word is its reduced prefix followed by the letter whose
    target disk it bounds, so the 2k initial circles carry one-letter words.
    ``max_depth`` optionally caps the prefix length.  With ``workers > 1`` the
    subtrees below the initial circles are walked in separate processes.
    """
    if not min_radius > 0:
        raise ValueError("min_radius must be positive")
    _require_valid(g)
    k2 = 2 * g.genus
    if workers > 1:
        jobs = [(g, list(range(k2))[w::workers], min_radius, max_circles, max_depth)
                for w in range(min(workers, k2))]
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            found = [cw for part in pool.map(_orbit_walk, jobs) for cw in part]
        if len(found) > max_circles:
            raise ResourceLimitError(f"more than {max_circles} orbit circles")
    else:
        found = _orbit_walk((g, range(k2), min_radius, max_circles, max_depth))
    found.sort(key=lambda cw: (cw[0].curv, cw[0].mx / cw[0].curv,
                               cw[0].my / cw[0].curv, cw[1]))
    return Packing(
        circles=tuple(c for c, _ in found),
        words=tuple(w for _, w in found),
        adjacency=(),
        cutoff=1.0 / min_radius,
        backing="float",
        source="schottky",
    )


def hyperbolic_displacement(m) -> float:
    """``d(o, m o)`` for ``o = (0, 0, 1)`` in upper half-space: ``cosh d = |m|_F^2 / 2``."""
    m = m.matrix if isinstance(m, MobiusMap) else np.asarray(m)
    fro = float(np.sum(np.abs(m) ** 2))
    return math.acosh(max(fro / 2, 1.0))


def shell_displacements(g: SchottkyGroup, max_len: int) -> list:
    """Displacements ``d(o, w o)`` of all reduced words, grouped by length 1..max_len."""
    k2 = 2 * g.genus
    gens = np.array([x.matrix for x in g.letters])
    inv = np.array([g.inverse_letter(x) for x in range(k2)])
    mats, last = gens.copy(), np.arange(k2)
    shells = []
    for length in range(1, max_len + 1):
        fro = np.sum(np.abs(mats) ** 2, axis=(1, 2))
        shells.append(np.arccosh(np.maximum(fro / 2, 1.0)))
        if length == max_len:
            break
        new_m, new_l = [], []
        for y in range(k2):
            keep = last != inv[y]
            new_m.append(mats[keep] @ gens[y])
            new_l.append(np.full(int(keep.sum()), y))
        mats, last = np.concatenate(new_m), np.concatenate(new_l)
    return shells


def poincare_shell_sums(g: SchottkyGroup, s: float, max_len: int) -> list:
    """``sum over reduced words w of length l of exp(-s d(o, w o))`` for l = 1..max_len."""
    if s < 0 or max_len < 1:
        raise ValueError("need s >= 0 and max_len >= 1")
    return [float(np.exp(-s * d).sum()) for d in shell_displacements(g, max_len)]


@dataclass
class DeltaEstimate:
    delta: float
    max_len: int
    ratio_curve: list  # (s, averaged shell ratio) pairs visited by the bisection


def _shell_ratio(shells, s) -> float:
    sums = [np.exp(-s * d).sum() for d in shells[-4:]]
    return float(np.mean([sums[i + 1] / sums[i] for i in range(3)]))


def estimate_delta(g: SchottkyGroup, max_len: int = 12, tol: float = 1e-3,
                   bracket=(0.0, 2.0)) -> DeltaEstimate:
    """Critical exponent as the ``s`` where consecutive shell sums stop growing.

    The growth ratio is the mean of the last three ratios
    ``S_{l+1}(s) / S_l(s)``; it decreases in ``s`` and the root is found by
    bisection on ``bracket``.
    """
    if max_len < 4:
        raise ValueError("max_len must be at least 4")
    shells = shell_displacements(g, max_len)
    lo, hi = bracket
    curve = [(lo, _shell_ratio(shells, lo)), (hi, _shell_ratio(shells, hi))]
    if curve[1][1] > 1:
        raise BracketError(
            f"shell ratio {curve[1][1]:.4g} > 1 at s = {hi}; the group is too thick "
            f"for word length {max_len}"
        )
    if curve[0][1] < 1:
        raise BracketError(f"shell ratio {curve[0][1]:.4g} < 1 at s = {lo}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        r = _shell_ratio(shells, mid)
        curve.append((mid, r))
        if r > 1:
            lo = mid
        else:
            hi = mid
    return DeltaEstimate(0.5 * (lo + hi), max_len, sorted(curve))
