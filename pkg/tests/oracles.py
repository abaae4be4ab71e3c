"""Independent brute-force references used by the tests.

None of these share code paths with the generators they check: the Apollonian
oracle walks quadruples with all four swaps and a global visited set, the
tangency oracle compares centers and radii, and the Schottky oracle pushes
circles through the generators one letter at a time.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from itertools import product

import numpy as np


def _swap_circle(quad, i):
    """Replace circle i of a quadruple of (k, kx, ky) triples by the other tangent circle.

    Works on curvature-center coordinates (k, k*x, k*y), which transform
    linearly under the swap, so it is independent of the package's encoding.
    """
    others = [c for j, c in enumerate(quad) if j != i]
    return tuple(2 * sum(c[t] for c in others) - quad[i][t] for t in range(3))


def _seed_triples(seed):
    out = []
    for c in seed:
        if c.curv == 0:
            out.append(None)  # lines are handled separately
        else:
            out.append((Fraction(c.curv), Fraction(c.mx), Fraction(c.my)))
    return out


def bounded_circle_set(seed, T, slack=4):
    """Set of ``(curv, x, y)`` with ``0 < curv <= T`` in a bounded packing.

    Explores every quadruple whose largest curvature is at most ``slack * T``
    using all four swaps and a global visited set of unordered quadruples.
    """
    start = tuple(_seed_triples(seed))
    assert None not in start
    limit = slack * T
    key = lambda q: tuple(sorted(q))
    seen = {key(start)}
    queue = deque([start])
    circles = set()
    while queue:
        q = queue.popleft()
        for c in q:
            if 0 < c[0] <= T:
                circles.add((c[0], c[1] / c[0], c[2] / c[0]))
        for i in range(4):
            new = _swap_circle(q, i)
            if new[0] > limit:
                continue
            child = tuple(new if j == i else c for j, c in enumerate(q))
            k = key(child)
            if k not in seen:
                seen.add(k)
                queue.append(child)
    return circles


def strip_circle_set(seed, T, period, slack=4):
    """Circles of a strip packing with ``0 < curv <= T``, x reduced mod ``period``.

    Uses the full inversive 4-vectors because the lines cannot be written in
    curvature-center form.  Quadruples are identified up to translation by a
    multiple of the period (the leftmost finite circle is moved into
    ``[0, period)``).
    """
    P = Fraction(period)

    def vec(c):
        return (Fraction(c.cocurv), Fraction(c.curv), Fraction(c.mx), Fraction(c.my))

    def shift(v, t):
        b, k, mx, my = v
        # translation by (t, 0): moment += k*t, cocurv += 2*mx*t + k*t^2
        return (b + 2 * mx * t + k * t * t, k, mx + k * t, my)

    def canon(q):
        xs = [v[2] / v[1] for v in q if v[1] != 0]
        t = -P * math.floor(min(xs) / P)
        return tuple(sorted(shift(v, t) for v in q))

    start = canon(tuple(vec(c) for c in seed))
    seen = {start}
    queue = deque([start])
    limit = slack * T
    circles = set()
    while queue:
        q = queue.popleft()
        for v in q:
            if 0 < v[1] <= T:
                x = (v[2] / v[1]) % P
                circles.add((v[1], x, v[3] / v[1]))
        for i in range(4):
            others = [w for j, w in enumerate(q) if j != i]
            new = tuple(2 * sum(w[t] for w in others) - q[i][t] for t in range(4))
            if new[1] > limit:
                continue
            child = canon(tuple(new if j == i else w for j, w in enumerate(q)))
            if child not in seen:
                seen.add(child)
                queue.append(child)
    return circles


def packing_circle_set(p):
    """``(curv, x, y)`` for each stored circle, exact when the packing is exact."""
    out = set()
    for c in p.circles:
        x, y = c.center_xy()
        if p.period is not None:
            x = Fraction(x) % Fraction(p.period[0])
        out.add((Fraction(c.curv), Fraction(x), Fraction(y)))
    return out


def tangent_pairs_scan(centers, radii, tol=1e-9):
    """All-pairs external tangency: ``|c_i - c_j| = r_i + r_j`` (relative tolerance)."""
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    n = len(radii)
    pairs = set()
    for i in range(n):
        d = np.hypot(*(centers[i + 1:] - centers[i]).T)
        s = radii[i + 1:] + radii[i]
        hit = np.nonzero(np.abs(d - s) <= tol * s)[0]
        pairs.update((i, i + 1 + int(j)) for j in hit)
    return pairs


def schottky_orbit_bruteforce(g, depth, min_radius):
    """Orbit circles for every reduced word of prefix length <= depth, no pruning.

    Returns ``{word: (center, radius)}`` with radius >= ``min_radius``; the word
    is the prefix letters followed by the target letter, as names.  Each circle
    is pushed through the generators one at a time, innermost letter first.
    """
    k2 = 2 * g.genus
    mats = [np.array(x.matrix, dtype=complex) for x in g.letters]
    out = {}
    for n in range(depth + 1):
        for prefix in product(range(k2), repeat=n):
            if not all(g.inverse_letter(a) != b for a, b in zip(prefix, prefix[1:])):
                continue
            for last in range(k2):
                if prefix and g.inverse_letter(prefix[-1]) == last:
                    continue
                D = g.target(last)
                c, r = D.center, D.radius
                for x in reversed(prefix):
                    c, r = image_circle(mats[x], c, r)
                if r >= min_radius:
                    word = "".join(g.letter_name(x) for x in (*prefix, last))
                    out[word] = (c, r)
    return out


def image_circle(M, c0, r):
    """Image of the circle ``|z - c0| = r`` under a determinant-1 matrix ``M``.

    The pole ``p = -d/c`` must lie outside the circle.  Radius
    ``r / | |c c0 + d|^2 - |c|^2 r^2 |``; center is the image of the
    reflection of ``p`` in the circle.
    """
    (a, b), (c, d) = M
    if c == 0:
        return (a * c0 + b) / d, r * abs(a / d)
    radius = r / abs(abs(c * c0 + d) ** 2 - abs(c) ** 2 * r * r)
    p = -d / c
    z = c0 + r * r / (p - c0).conjugate()
    return (a * z + b) / (c * z + d), radius
