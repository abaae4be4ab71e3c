import random
from collections import Counter
from fractions import Fraction

import pytest

import oracles
from conftest import packing
from kleinpack import apollonian as A
from kleinpack import formats
from kleinpack.inversive import center_radius, descartes_form, is_tangent, swap

ROOTS = [(-1, 2, 2, 3), (0, 0, 1, 1), (-2, 3, 6, 7)]


def _swap_value(q, i):
    return 2 * (sum(q) - q[i]) - q[i]


# --- reduce_to_root -------------------------------------------------------------

def test_reduce_examples():
    assert A.reduce_to_root((2, 2, 3, 15)) == (-1, 2, 2, 3)
    assert A.reduce_to_root((0, 0, 1, 1)) == (0, 0, 1, 1)
    assert A.is_root((-1, 2, 2, 3))


def test_reduce_rejects_non_descartes():
    with pytest.raises(ValueError):
        A.reduce_to_root((1, 1, 1, 1))


def test_reduce_inverts_random_words():
    rng = random.Random(42)
    for root in [(-1, 2, 2, 3), (-2, 3, 6, 7), (0, 0, 1, 1)]:
        for _ in range(10_000 // 3 + 1):
            q = list(root)
            for _ in range(rng.randint(0, 20)):
                i = rng.randrange(4)
                q[i] = _swap_value(q, i)
            assert A.reduce_to_root(q) == root


def test_reduce_member_found_by_forward_search():
    # (-1, 6, 10, 15) is not in the orbit: Q is nonzero, so it is rejected
    assert descartes_form(-1, 6, 10, 15) != 0
    with pytest.raises(ValueError):
        A.reduce_to_root((-1, 6, 10, 15))


# --- realize_root -----------------------------------------------------------------

def test_realize_bounded():
    q = A.realize_root((-1, 2, 2, 3))
    xy = [c.center_xy() for c in q]
    assert xy[0] == (0, 0) and q[0].curv == -1
    assert {xy[1], xy[2]} == {(Fraction(1, 2), 0), (Fraction(-1, 2), 0)}
    assert xy[3] in ((0, Fraction(2, 3)), (0, Fraction(-2, 3)))
    assert [abs(Fraction(1, c.curv)) for c in q] == [1, Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)]
    assert q.is_valid(tol=0)


def test_realize_strip():
    q = A.realize_root((0, 0, 1, 1))
    lines = [c for c in q if c.is_line]
    ys = sorted(c.cocurv / 2 * c.my for c in lines)  # offset along the normal
    assert ys == [0, 2]
    circles = sorted(center_radius(c)[0].real for c in q if not c.is_line)
    assert circles == [0, 2]
    assert all(center_radius(c)[0].imag == 1 for c in q if not c.is_line)
    assert q.is_valid(tol=0)


@pytest.mark.parametrize("root", ROOTS + [(-3, 5, 8, 8), (-6, 11, 14, 15), (-4, 8, 9, 9)])
def test_realize_curvatures_read_back(root):
    q = A.realize_root(root)
    assert tuple(q.curvatures) == root
    assert q.exact and q.is_valid(tol=0)


# --- generate -------------------------------------------------------------------------

def test_generate_small_multisets():
    assert A.generate_root((-1, 2, 2, 3), 3.5).curvature_multiset() == [2, 2, 3, 3]
    p = A.generate_root((-1, 2, 2, 3), 10)
    oracle = sorted(k for k, _, _ in oracles.bounded_circle_set(A.realize_root((-1, 2, 2, 3)), 10))
    assert p.curvature_multiset() == oracle == [2, 2, 3, 3, 6, 6, 6, 6]
    nxt = sorted(set(A.generate_root((-1, 2, 2, 3), 15).curvature_multiset()) - {2, 3, 6})
    assert nxt == [11, 14, 15]


@pytest.mark.parametrize("root", ROOTS)
@pytest.mark.parametrize("T", [7, 30, 100])
def test_oracle_equivalence(root, T):
    seed = A.realize_root(root)
    p = A.generate(seed, T)
    if p.period:
        want = oracles.strip_circle_set(seed, T, p.period[0])
    else:
        want = oracles.bounded_circle_set(seed, T)
    assert oracles.packing_circle_set(p) == want
    assert len(want) == len(p)  # no duplicates among stored circles


def test_curvature_counts_by_value(bounded_small):
    seed = A.realize_root((-1, 2, 2, 3))
    want = Counter(k for k, _, _ in oracles.bounded_circle_set(seed, 10))
    got = Counter(bounded_small.curvature_multiset(10))
    assert {c: got[c] for c in (2, 3, 6)} == {c: want[c] for c in (2, 3, 6)} == {2: 2, 3: 2, 6: 4}


def test_canonical_order_and_bounds(bounded_small):
    keys = [(c.curv, *c.center_xy()) for c in bounded_small.circles]
    assert keys == sorted(keys)
    assert all(0 < c.curv <= 100 for c in bounded_small.circles)
    assert [g.curv for g in bounded_small.generators] == [-1]


def test_adjacency_is_tangent(bounded_small, strip_small):
    for p in (bounded_small, strip_small):
        for i, j, s in p.adjacency:
            other = p.circles[j].translated((s * p.period[0], s * p.period[1])) if s else p.circles[j]
            assert is_tangent(p.circles[i], other, tol=0)


def test_words_replay_to_circles(bounded_small):
    seed = A.realize_root((-1, 2, 2, 3))
    for c, w in zip(bounded_small.circles, bounded_small.words):
        q = seed
        for ch in w:
            q = swap(q, int(ch))
        assert c in q.circles


def test_monotone_pruning():
    seed = A.realize_root((-1, 2, 2, 3))
    stack = [(seed, -1, 0)]
    while stack:
        q, last, depth = stack.pop()
        if depth == 7:
            continue
        for i in range(4):
            if i == last:
                continue
            child = swap(q, i)
            if last != -1:
                assert child[i].curv >= max(c.curv for j, c in enumerate(q) if j != i)
            stack.append((child, i, depth + 1))


def test_stored_quadruples_exact():
    seed = A.realize_root((-1, 2, 2, 3))
    n = 0
    for q in A.iter_quadruples(seed, 1000):
        assert descartes_form(*q.curvatures) == 0
        n += 1
    assert n > 1000


def test_determinism_across_workers():
    a = A.generate_root((-1, 2, 2, 3), 300, workers=1)
    b = A.generate_root((-1, 2, 2, 3), 300, workers=2)
    assert formats.dumps_packing(a) == formats.dumps_packing(b)
    c = A.generate_root((-1, 2, 2, 3), 300, workers=1)
    assert formats.dumps_packing(a) == formats.dumps_packing(c)


def test_float_backing_matches_exact():
    exact = A.generate_root((-1, 2, 2, 3), 200)
    flt = A.generate(A.realize_root((-1, 2, 2, 3)).to_float(), 200)
    assert flt.backing == "float" and len(flt) == len(exact)
    assert abs(flt.curvatures - exact.curvatures).max() < 1e-9
    assert abs(flt.centers - exact.centers).max() < 1e-9


def test_generate_errors():
    seed = A.realize_root((-1, 2, 2, 3))
    with pytest.raises(ValueError):
        A.generate(seed, 2.5)
    with pytest.raises(A.ResourceLimitError):
        A.generate(seed, 1000, max_circles=50)


def test_strip_period_recorded(strip_small):
    assert strip_small.period == (2, 0)
    assert strip_small.is_periodic
    xs = [c.center_xy()[0] for c in strip_small.circles]
    assert all(0 <= x < 2 for x in xs)


# --- integrality -------------------------------------------------------------------------

def test_integral_primitive():
    assert A.is_integral((-1, 2, 2, 3)) and A.is_primitive((-1, 2, 2, 3))
    assert A.is_integral((-2, 4, 4, 6)) and not A.is_primitive((-2, 4, 4, 6))
    assert A.is_integral((0, 0, 1, 1)) and A.is_primitive((0, 0, 1, 1))
    assert A.is_primitive(packing((-1, 2, 2, 3), 100))


# --- tangent_pairs -----------------------------------------------------------------------

def test_tangent_pairs_small(bounded_small):
    p = bounded_small
    pairs = list(A.tangent_pairs(p, 4))
    kinds = Counter(tuple(sorted((p.circles[i].curv, p.circles[j].curv))) for i, j, _ in pairs)
    assert kinds == {(2, 2): 1, (2, 3): 4}
    threes = [i for i, c in enumerate(p.circles) if c.curv == 3]
    assert not is_tangent(p.circles[threes[0]], p.circles[threes[1]])


@pytest.mark.parametrize("T", [10, 100])
def test_tangent_pairs_match_scan(bounded_small, T):
    p = bounded_small
    idx = [i for i, c in enumerate(p.circles) if c.curv < T]
    scan = oracles.tangent_pairs_scan(p.centers[idx], p.radii[idx])
    want = {(idx[a], idx[b]) for a, b in scan}
    got = {(i, j) for i, j, _ in A.tangent_pairs(p, T)}
    assert got == want


def test_tangent_pairs_strip_match_scan(strip_small):
    p = strip_small
    P = p.period
    scan = set()
    small = [i for i, c in enumerate(p.circles) if c.curv < 100]
    for i in small:
        for j in small:
            if j < i:
                continue
            for s in (-1, 0, 1):
                if i == j and s <= 0:
                    continue
                if is_tangent(p.circles[i], p.circles[j].translated((s * P[0], s * P[1])), 0):
                    scan.add((i, j, s))
    got = {(i, j, abs(s) if i == j else s) for i, j, s in A.tangent_pairs(p, 100)}
    assert got == scan


def test_tangent_pairs_cutoff_error(bounded_small):
    with pytest.raises(ValueError):
        list(A.tangent_pairs(bounded_small, 1000))


def test_realize_rejects_bad_input():
    with pytest.raises(ValueError, match="Descartes"):
        A.realize_root((1, 1, 1, 1))
    with pytest.raises(ValueError, match="reduce_to_root gives"):
        A.realize_root((2, 2, 3, 15))
