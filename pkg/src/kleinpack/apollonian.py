"""Apollonian circle packings generated from Descartes quadruples.

Generation is a breadth-first walk over quadruples.  Each step applies the
three swaps that do not undo the swap that produced the current quadruple, so
the walk is the Cayley tree of the Apollonian group and every circle is
produced once.  Away from the root quadruple a swap never decreases
curvature, which makes pruning at the cutoff lossless.

Integral (and more generally rational) packings are generated exactly: all
coordinates of the seed are put over a common denominator and the walk runs on
Python integers.  Strip packings (two parallel lines) are reduced modulo their
translation symmetry, so one period is stored.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations

import numpy as np

from .inversive import (
    DescartesQuadruple,
    InversiveCircle,
    descartes_form,
    exact_sqrt,
    is_exact,
    is_tangent,
    make_circle,
    make_line,
)

DEFAULT_MAX_CIRCLES = 10**8
FLOAT_QUANTUM = 1e-9


class ResourceLimitError(RuntimeError):
    """Generation would exceed the configured circle cap."""


@dataclass(frozen=True)
class Packing:
    """A finite, deduplicated piece of a circle packing.

    ``circles`` holds the circles of positive curvature in canonical order
    (curvature, center x, center y).  Circles of curvature <= 0 (the bounding
    circle or lines) live in ``generators``.  ``adjacency`` lists tangent pairs
    ``(i, j, shift)`` with ``i <= j``: circle ``i`` touches circle ``j``
    translated by ``shift`` periods (``shift`` is always 0 without a period).
    """

    circles: tuple
    words: tuple
    adjacency: tuple
    generators: tuple = ()
    root: tuple | None = None
    cutoff: object = math.inf
    period: tuple | None = None
    backing: str = "float"
    source: str = "apollonian"

    def __len__(self):
        return len(self.circles)

    @cached_property
    def curvatures(self) -> np.ndarray:
        return np.array([float(c.curv) for c in self.circles], dtype=float)

    @cached_property
    def centers(self) -> np.ndarray:
        return np.array([c.center_xy() for c in self.circles], dtype=float).reshape(-1, 2)

    @cached_property
    def radii(self) -> np.ndarray:
        return 1.0 / self.curvatures

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def curvature_multiset(self, T=None) -> list:
        ks = [c.curv for c in self.circles]
        return ks if T is None else [k for k in ks if k <= T]


# ----------------------------------------------------------------------------
# curvature-level reduction theory


def _swap_value(q, i):
    return 2 * (sum(q) - q[i]) - q[i]


def reduce_to_root(q, tol: float = 1e-9, max_steps: int = 100_000):
    """Walk a curvature quadruple down to the root of its packing.

    Repeatedly applies the swap that lowers the coordinate sum the most.  The
    result is sorted ascending, so it reads ``(a, b, c, d)`` with
    ``a <= 0 <= b <= c <= d`` and ``a + b + c >= d``.
    """
    q = list(q)
    if len(q) != 4:
        raise ValueError("expected four curvatures")
    exact = is_exact(*q)
    if exact:
        q = [Fraction(x) for x in q]
        bad = descartes_form(*q) != 0
    else:
        q = [float(x) for x in q]
        bad = abs(descartes_form(*q)) > tol * max(1.0, max(abs(x) for x in q)) ** 2
    if bad:
        raise ValueError(f"{tuple(q)} does not satisfy the Descartes relation")
    for _ in range(max_steps):
        drops = [q[i] - _swap_value(q, i) for i in range(4)]
        i = max(range(4), key=lambda j: (drops[j], -j))
        if drops[i] <= (0 if exact else tol * max(1.0, abs(q[i]))):
            break
        q[i] = _swap_value(q, i)
    else:
        raise RuntimeError("reduction did not terminate; is this an Apollonian quadruple?")
    q.sort()
    if exact:
        q = [x.numerator if x.denominator == 1 else x for x in q]
    return tuple(q)


def is_root(q) -> bool:
    a, b, c, d = q
    return a <= 0 <= b <= c <= d and a + b + c >= d and descartes_form(*q) == 0


# ----------------------------------------------------------------------------
# canonical realization


def realize_root(r) -> DescartesQuadruple:
    """Place a root quadruple in the plane.

    * ``a < 0``: bounding circle of radius ``-1/a`` centered at the origin
      (oriented inward), the ``b`` circle on the positive x-axis, the ``c``
      circle in the closed upper half, the ``d`` circle tangent to all three.
    * ``a == b == 0``: lines ``y = 0`` and ``y = 2/c``, the ``c`` circle
      centered on the y-axis and the ``d`` circle one diameter to its right.

    Rational curvatures give an exact placement whenever the required square
    roots are rational, which is the case for every integral root tried so
    far; otherwise the quadruple is returned in floating point.
    """
    a, b, c, d = sorted(r)
    exact = is_exact(a, b, c, d)
    F = Fraction if exact else float
    q = descartes_form(a, b, c, d)
    if (q != 0) if exact else abs(q) > 1e-9 * max(1.0, d * d):
        raise ValueError(f"{tuple(r)} does not satisfy the Descartes relation")
    if not a + b + c >= d * (1 - (0 if exact else 1e-12)):
        raise ValueError(f"{tuple(r)} is not a root quadruple; reduce_to_root gives "
                         f"{reduce_to_root(r)}")
    if a == 0:
        if b != 0 or c != d or c <= 0:
            raise ValueError(f"{tuple(r)} is not a valid strip root")
        rc = 1 / F(c)
        lines = (make_line((0, -1), 0), make_line((0, 1), 2 * rc))
        return DescartesQuadruple(
            lines + (make_circle((0, rc), rc), make_circle((2 * rc, rc), rc))
        )
    if a > 0:
        raise ValueError("a root quadruple has a non-positive smallest curvature")

    R = -1 / F(a)
    rb, rc, rd = 1 / F(b), 1 / F(c), 1 / F(d)
    xb = R - rb

    def place(rr):
        dist0, dist_b = R - rr, rb + rr
        x = (dist0 * dist0 - dist_b * dist_b + xb * xb) / (2 * xb)
        return x, dist0 * dist0 - x * x

    def root_of(y2):
        if exact:
            s = exact_sqrt(y2)
            return s if s is not None else None
        return math.sqrt(max(y2, 0.0))

    xc, yc2 = place(rc)
    xd, yd2 = place(rd)
    yc = root_of(yc2)
    if yc is None:
        return realize_root(tuple(float(x) for x in (a, b, c, d)))
    if yc != 0:
        yd = (
            (R - rd) ** 2 + (R - rc) ** 2 - 2 * xd * xc - (rc + rd) ** 2
        ) / (2 * yc)
    else:
        yd = root_of(yd2)
        if yd is None:
            return realize_root(tuple(float(x) for x in (a, b, c, d)))
    return DescartesQuadruple(
        (
            make_circle((0, 0), R, orientation=-1),
            make_circle((xb, 0), rb),
            make_circle((xc, yc), rc),
            make_circle((xd, yd), rd),
        )
    )


# ----------------------------------------------------------------------------
# generation


@dataclass
class _WalkContext:
    exact: bool
    scale: int  # common denominator of the exact coordinates
    threshold: object  # scaled curvature cutoff
    period: tuple | None  # scaled translation vector (exact) or float pair
    window_start: object = 0
    max_circles: int = DEFAULT_MAX_CIRCLES


def _swap_vec(q, i):
    a, b, c = (q[j] for j in range(4) if j != i)
    v = q[i]
    return (
        2 * (a[0] + b[0] + c[0]) - v[0],
        2 * (a[1] + b[1] + c[1]) - v[1],
        2 * (a[2] + b[2] + c[2]) - v[2],
        2 * (a[3] + b[3] + c[3]) - v[3],
    )


def _translate_vec(v, n, ctx: _WalkContext):
    """Translate a scaled coordinate vector by ``n`` periods."""
    if n == 0:
        return v
    bc, k, mx, my = v
    tx, ty = ctx.period
    tx, ty = n * tx, n * ty
    if ctx.exact:
        L = ctx.scale
        # unscaled: cocurv' = cocurv + 2 m.t + k |t|^2 with t = (tx, ty) / L
        num = bc * L * L + 2 * (mx * tx + my * ty) * L + k * (tx * tx + ty * ty)
        new_bc, rem = divmod(num, L * L)
        if rem:
            raise ArithmeticError("translated circle left the exact lattice")
        mxn, rem1 = divmod(mx * L + k * tx, L)
        myn, rem2 = divmod(my * L + k * ty, L)
        if rem1 or rem2:
            raise ArithmeticError("translated circle left the exact lattice")
        return (new_bc, k, mxn, myn)
    return (
        bc + 2 * (mx * tx + my * ty) + k * (tx * tx + ty * ty),
        k,
        mx + k * tx,
        my + k * ty,
    )


def _normalize(v, ctx: _WalkContext):
    """Return ``(representative, n)`` with ``v`` = representative shifted by ``n`` periods."""
    if ctx.period is None or v[1] <= 0:
        return v, 0
    bc, k, mx, my = v
    tx, ty = ctx.period
    if ctx.exact:
        # center.t / |t|^2 with center = m/k, all in scaled units
        pos = Fraction(mx * tx + my * ty, k) * ctx.scale / (tx * tx + ty * ty)
        n = math.floor(pos - ctx.window_start)
    else:
        pos = (mx * tx + my * ty) / k / (tx * tx + ty * ty)
        n = math.floor(pos - ctx.window_start + 1e-12)
    return _translate_vec(v, -n, ctx), n


def _key(v, ctx: _WalkContext):
    if ctx.exact:
        return v
    return tuple(round(x / FLOAT_QUANTUM) for x in v)


def _walk(nodes, seen, ctx: _WalkContext, max_depth=None):
    """Breadth-first expansion from ``nodes``.

    ``nodes`` are ``(quad, last_swap, word)`` triples; ``seen`` maps dedup keys
    to ``[vector, word]`` and is updated in place.  Returns the list of new
    tangency edges ``(key_a, key_b, shift)`` and, when ``max_depth`` is set, the
    unexpanded frontier.
    """
    edges = []
    queue = deque(nodes)
    frontier = []
    while queue:
        quad, last, word = queue.popleft()
        if max_depth is not None and len(word) >= max_depth:
            frontier.append((quad, last, word))
            continue
        for i in range(4):
            if i == last:
                continue
            new = _swap_vec(quad, i)
            if new[1] > ctx.threshold:
                continue
            rep, n = _normalize(new, ctx)
            key = _key(rep, ctx)
            w = word + str(i)
            fresh = key not in seen
            if fresh:
                seen[key] = [rep, w]
                if len(seen) > ctx.max_circles:
                    raise ResourceLimitError(
                        f"more than {ctx.max_circles} circles; raise max_circles to continue"
                    )
            if new[1] > 0:
                for j in range(4):
                    if j == i or quad[j][1] <= 0:
                        continue
                    prep, pn = _normalize(quad[j], ctx)
                    edges.append((key, _key(prep, ctx), pn - n))
            if fresh:
                child = list(quad)
                child[i] = new
                queue.append((tuple(child), i, w))
    return edges, frontier


def _walk_chunk(args):
    nodes, seen_keys, ctx = args
    seen = {k: None for k in seen_keys}
    edges, _ = _walk(nodes, seen, ctx)
    new = {k: v for k, v in seen.items() if v is not None}
    return new, edges


def _scaled_seed(seed: DescartesQuadruple):
    if seed.exact:
        vals = [Fraction(x) for c in seed for x in c.as_tuple()]
        L = reduce(math.lcm, (v.denominator for v in vals), 1)
        vecs = [tuple(int(x * L) for x in c.as_tuple()) for c in seed]
        return tuple(vecs), L
    return tuple(tuple(float(x) for x in c.as_tuple()) for c in seed), 1


def _seed_period(seed: DescartesQuadruple):
    lines = [c for c in seed if c.curv == 0]
    if len(lines) < 2:
        return None
    if len(lines) > 2:
        raise ValueError("a Descartes quadruple has at most two lines")
    round_ = [c for c in seed if c.curv != 0]
    (x0, y0), (x1, y1) = (c.center_xy() for c in round_)
    return (x1 - x0, y1 - y0), round_[0]


def generate(seed: DescartesQuadruple, cutoff, *, workers: int = 1,
             max_circles: int = DEFAULT_MAX_CIRCLES) -> Packing:
    """All circles of the packing through ``seed`` with curvature at most ``cutoff``.

    ``workers > 1`` fans the walk out over processes for bounded packings; the
    canonically ordered result does not depend on the worker count.
    """
    if not seed.is_valid():
        raise ValueError("seed is not a Descartes quadruple")
    positive = [c.curv for c in seed if c.curv > 0]
    if any(k > cutoff for k in positive):
        raise ValueError(
            f"cutoff {cutoff} is below the seed curvature {max(positive)}"
        )
    vecs, L = _scaled_seed(seed)
    exact = seed.exact
    threshold = math.floor(Fraction(cutoff) * L) if exact else float(cutoff)
    ctx = _WalkContext(exact, L, threshold, None, max_circles=max_circles)

    per = _seed_period(seed)
    period_unscaled = None
    if per is not None:
        (tx, ty), anchor = per
        period_unscaled = (tx, ty)
        ctx.period = (int(tx * L), int(ty * L)) if exact else (float(tx), float(ty))
        ax, ay = anchor.center_xy()
        ctx.window_start = (ax * tx + ay * ty) / (tx * tx + ty * ty)
        if not exact:
            ctx.window_start = float(ctx.window_start)

    seen = {}
    gens = {}
    seed_keys = []
    for v in vecs:
        rep, n = _normalize(v, ctx)
        key = _key(rep, ctx)
        if v[1] > 0:
            seen.setdefault(key, [rep, ""])
            seed_keys.append((key, n))
        else:
            gens.setdefault(key, v)
    edges = [
        (ka, kb, nb - na) for (ka, na), (kb, nb) in combinations(seed_keys, 2)
    ]

    root_node = [(vecs, -1, "")]
    if workers > 1 and per is None:
        more, frontier = _walk(root_node, seen, ctx, max_depth=3)
        edges += more
        chunks = [frontier[w::workers] for w in range(workers)]
        keys = list(seen)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_walk_chunk, [(c, keys, ctx) for c in chunks]))
        for new, more in results:
            for key, (rep, w) in new.items():
                old = seen.get(key)
                if old is None or (len(w), w) < (len(old[1]), old[1]):
                    seen[key] = [rep, w]
            edges += more
            if len(seen) > max_circles:
                raise ResourceLimitError(f"more than {max_circles} circles")
    else:
        more, _ = _walk(root_node, seen, ctx)
        edges += more

    for key in [k for k, (rep, _) in seen.items() if rep[1] <= 0]:
        gens.setdefault(key, seen.pop(key)[0])
    return _assemble(seen, edges, gens, ctx, seed, cutoff, period_unscaled)


def _unscale(v, ctx):
    if not ctx.exact:
        return InversiveCircle(*v)
    L = ctx.scale
    if L == 1:
        return InversiveCircle(*v)
    out = []
    for x in v:
        f = Fraction(x, L)
        out.append(f.numerator if f.denominator == 1 else f)
    return InversiveCircle(*out)


def _order_key(v, exact):
    _, k, mx, my = v
    if exact:
        return (Fraction(k), Fraction(mx, k), Fraction(my, k))
    return (k, mx / k, my / k)


def _assemble(seen, edges, gens, ctx, seed, cutoff, period):
    keys = sorted(seen, key=lambda k: _order_key(seen[k][0], ctx.exact))
    index = {k: i for i, k in enumerate(keys)}
    adj = set()
    for ka, kb, s in edges:
        i, j = index.get(ka), index.get(kb)
        if i is None or j is None:
            continue
        if i > j or (i == j and s < 0):
            i, j, s = j, i, -s
        adj.add((i, j, s))
    generators = sorted(
        (_unscale(v, ctx) for v in gens.values()),
        key=lambda c: tuple(float(x) for x in c.as_tuple()),
    )
    curv = tuple(c.curv for c in seed)
    try:
        root = reduce_to_root(curv)
    except (ValueError, RuntimeError):
        root = None
    return Packing(
        circles=tuple(_unscale(seen[k][0], ctx) for k in keys),
        words=tuple(seen[k][1] for k in keys),
        adjacency=tuple(sorted(adj)),
        generators=tuple(generators),
        root=root,
        cutoff=cutoff,
        period=period,
        backing="exact" if ctx.exact else "float",
    )


def generate_root(root, cutoff, **kwargs) -> Packing:
    """Convenience wrapper: :func:`realize_root` then :func:`generate`."""
    return generate(realize_root(root), cutoff, **kwargs)


def iter_quadruples(seed: DescartesQuadruple, cutoff):
    """Yield every Descartes quadruple of the packing whose circles all have
    curvature at most ``cutoff``, starting with ``seed``.

    For strip packings the walk is not reduced modulo the period, so only the
    bounded case is supported.
    """
    if _seed_period(seed) is not None:
        raise ValueError("quadruple enumeration needs a bounded packing")
    yield seed
    queue = deque([(seed, -1)])
    while queue:
        q, last = queue.popleft()
        for i in range(4):
            if i == last:
                continue
            others = [c for j, c in enumerate(q.circles) if j != i]
            new = (others[0] + others[1] + others[2]).scale(2) - q.circles[i]
            if new.curv > cutoff:
                continue
            circles = list(q.circles)
            circles[i] = new
            child = DescartesQuadruple(tuple(circles))
            yield child
            queue.append((child, i))


# ----------------------------------------------------------------------------
# queries


def _root_of(p):
    root = p.root if isinstance(p, Packing) else tuple(p)
    if root is None:
        raise ValueError("packing has no root quadruple")
    return root


def is_integral(p) -> bool:
    """Integral iff the root curvatures are integers (the swap action keeps them so)."""
    return all(Fraction(x).denominator == 1 for x in _root_of(p))


def is_primitive(p) -> bool:
    root = _root_of(p)
    if not is_integral(root):
        return False
    return reduce(math.gcd, (int(x) for x in root), 0) == 1


def tangent_pairs(p: Packing, T, verify: bool = True):
    """Unordered tangent pairs ``(i, j, shift)`` with both curvatures in ``(0, T)``."""
    if T > p.cutoff:
        raise ValueError(f"T = {T} exceeds the generation cutoff {p.cutoff}")
    for i, j, s in p.adjacency:
        ci, cj = p.circles[i], p.circles[j]
        if not (0 < ci.curv < T and 0 < cj.curv < T):
            continue
        if verify:
            other = cj if s == 0 else cj.translated(
                (s * p.period[0], s * p.period[1])
            )
            if not is_tangent(ci, other, None if p.backing == "exact" else 1e-6):
                raise RuntimeError(f"recorded pair {(i, j, s)} is not tangent")
        yield (i, j, s)
