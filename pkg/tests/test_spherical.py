import math

import numpy as np
import pytest

from kleinpack import apollonian as A
from kleinpack.counting import SphericalCap, count_spherical
from kleinpack.inversive import inversive_product, make_circle, make_line
from kleinpack.spherical import (
    SphericalCircle,
    from_sphere,
    hyperbolic_depth,
    planar_spherical_curvature,
    read_spherical,
    same_circle,
    soddy_gossett_residual,
    spherical_curvature,
    spherical_tangent,
    stereo_to_sphere,
    to_sphere,
    write_spherical,
)


def random_spherical(rng, n):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    t = rng.uniform(0, 0.999, n)
    return [SphericalCircle(tuple(a), float(b)) for a, b in zip(v, t)]


def random_planar(rng, n):
    out = []
    for _ in range(n):
        c = rng.uniform(-3, 3, 2)
        r = rng.uniform(0.05, 2)
        if abs(np.hypot(*c) - r) < 1e-3:
            continue  # nearly through the origin, whose image is the south pole
        out.append(make_circle(tuple(c), float(r)))
    return out


# --- type --------------------------------------------------------------------

def test_validation():
    with pytest.raises(ValueError):
        SphericalCircle((1, 1, 0), 0.2)
    with pytest.raises(ValueError):
        SphericalCircle((0, 0, 1), 1.0)


def test_normalization_flip_and_idempotence():
    c = SphericalCircle((0, 0, 1), -0.3)
    assert c.normal == (0, 0, -1) and c.offset == 0.3
    assert c.normalized() == c
    assert spherical_curvature(c) == spherical_curvature(SphericalCircle((0, 0, -1), 0.3))
    assert 0 < c.theta <= math.pi / 2


def test_great_circle_normals_identified():
    assert same_circle(SphericalCircle((0, 0, 1), 0.0), SphericalCircle((0, 0, -1), 0.0))
    assert not same_circle(SphericalCircle((0, 0, 1), 0.2), SphericalCircle((0, 0, -1), 0.2))


# --- curvature ------------------------------------------------------------------

def test_curvature_cot():
    c = SphericalCircle((0, 0, 1), math.cos(math.pi / 3))
    assert spherical_curvature(c) == pytest.approx(1 / math.tan(math.pi / 3), rel=1e-14)
    assert spherical_curvature(SphericalCircle((1, 0, 0), 0)) == 0


def test_soddy_gossett_examples():
    a = 1 / math.sqrt(2)
    assert abs(soddy_gossett_residual(a, a, a, a)) < 1e-12
    assert soddy_gossett_residual(0, 0, 0, 0) == 4


def test_regular_tetrahedral_packing_on_sphere():
    # four caps centered at tetrahedron vertices, pairwise tangent
    verts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3)
    theta = math.acos(-1 / 3) / 2
    cs = [SphericalCircle(tuple(v), math.cos(theta)) for v in verts]
    for i in range(4):
        for j in range(i + 1, 4):
            assert spherical_tangent(cs[i], cs[j])
    ks = [spherical_curvature(c) for c in cs]
    assert ks[0] == pytest.approx(1 / math.sqrt(2))
    assert abs(soddy_gossett_residual(*ks)) < 1e-12


# --- transfer -------------------------------------------------------------------------

def test_points_map_onto_image():
    rng = np.random.default_rng(0)
    for c in random_planar(rng, 2000):
        s = to_sphere(c)
        x, y = (float(v) for v in c.center_xy())
        r = 1 / float(c.curv)
        for phi in rng.uniform(0, 2 * math.pi, 3):
            p = stereo_to_sphere(complex(x + r * math.cos(phi), y + r * math.sin(phi)))
            assert abs(np.dot(p, s.normal) - s.offset) < 1e-10


def test_lines_map_through_north_pole():
    s = to_sphere(make_line((0, 1), 0.5))
    assert abs(s.normal[2] - s.offset) < 1e-15  # <(0,0,1), n> = t


def test_round_trip():
    rng = np.random.default_rng(1)
    for c in random_planar(rng, 10_000):
        back = from_sphere(to_sphere(c))
        ref = c if float(c.curv + c.cocurv) >= 0 else c.reversed()
        assert np.allclose(back.as_tuple(), [float(v) for v in ref.as_tuple()],
                           rtol=0, atol=1e-10 * max(1.0, abs(float(ref.cocurv))))


def test_planar_formula_matches_transfer():
    rng = np.random.default_rng(2)
    for c in random_planar(rng, 500):
        assert planar_spherical_curvature(c) == pytest.approx(
            spherical_curvature(to_sphere(c)), rel=1e-9)


def test_tangency_preserved():
    p = A.generate_root((-1, 2, 2, 3), 200)
    for i, j, _ in p.adjacency:
        assert spherical_tangent(to_sphere(p.circles[i]), to_sphere(p.circles[j]), 1e-9)
    outer = to_sphere(p.generators[0])
    assert spherical_tangent(outer, to_sphere(p.circles[0]), 1e-9)


def test_transfer_not_tangent_stays_not_tangent():
    a, b = make_circle((0, 0), 1), make_circle((3, 0), 1)
    assert inversive_product(a, b) < -1
    assert not spherical_tangent(to_sphere(a), to_sphere(b))


def test_soddy_gossett_on_packing_quadruples():
    seed = A.realize_root((-1, 2, 2, 3))
    worst = 0
    for q in A.iter_quadruples(seed, 300):
        worst = max(worst, abs(soddy_gossett_residual(*(planar_spherical_curvature(c) for c in q))))
    assert worst == 0  # exact arithmetic


# --- hyperbolic depth ---------------------------------------------------------------

def test_depth_examples():
    assert hyperbolic_depth(SphericalCircle((0, 0, 1), 0)) == 0
    c = SphericalCircle((0, 0, 1), math.cos(math.pi / 4))
    assert hyperbolic_depth(c) == pytest.approx(math.acosh(math.sqrt(2)), rel=1e-14)


def test_depth_identity_and_ball_equivalence():
    rng = np.random.default_rng(3)
    for c in random_spherical(rng, 10_000):
        d = hyperbolic_depth(c)
        assert abs(math.cosh(d) * math.sin(c.theta) - 1) <= 1e-12
        T = float(rng.uniform(0.1, 10))
        if abs(spherical_curvature(c) - T) > 1e-9:
            assert (spherical_curvature(c) < T) == (d < math.asinh(T))


# --- counting on the sphere ----------------------------------------------------------

def test_spherical_count_consistency():
    p = A.generate_root((-1, 2, 2, 3), 400)
    for T in (3, 20, 150):
        want = sum(1 for c in p.circles if spherical_curvature(to_sphere(c)) < T)
        assert count_spherical(p, None, T) == want
        assert count_spherical(p, SphericalCap((0, 0, 1), math.pi), T) == want
    with pytest.raises(ValueError):
        count_spherical(p, None, 300)


def test_cap_count_monotone():
    p = A.generate_root((-1, 2, 2, 3), 400)
    small = count_spherical(p, SphericalCap((0, 0, -1), 0.5), 150)
    big = count_spherical(p, SphericalCap((0, 0, -1), 1.0), 150)
    assert 0 < small <= big


# --- file format ------------------------------------------------------------------------

def test_file_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    cs = random_spherical(rng, 50)
    path = tmp_path / "s.txt"
    write_spherical(cs, path, {"root": "-1 2 2 3"})
    header, back = read_spherical(path)
    assert header["root"] == "-1 2 2 3" and back == cs


def test_file_truncated(tmp_path):
    rng = np.random.default_rng(5)
    path = tmp_path / "s.txt"
    write_spherical(random_spherical(rng, 5), path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError, match="line"):
        read_spherical(path)
