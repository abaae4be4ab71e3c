"""Circles on the unit sphere, transferred from the plane by stereographic
projection from the north pole onto the equatorial plane.

A spherical circle is ``{p in S^2 : <p, normal> = t}``; the stored form has
``t >= 0`` so the spherical radius ``theta = arccos(t)`` is at most pi/2.
For a planar circle ``(cocurv, curv, mx, my)`` the image lies in the plane

    2 mx p1 + 2 my p2 + (cocurv - curv) p3 = curv + cocurv,

whose normal has length ``sqrt((curv + cocurv)^2 + 4)``.  Hence the spherical
curvature ``cot theta`` is ``|curv + cocurv| / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .inversive import InversiveCircle, descartes_form


@dataclass(frozen=True)
class SphericalCircle:
    normal: tuple
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = float(np.linalg.norm(n))
        if not abs(norm - 1) <= 1e-12:
            raise ValueError(f"normal must be a unit vector, |n| = {norm}")
        t = float(self.offset)
        if not -1 < t < 1:
            raise ValueError(f"offset must lie in (-1, 1), got {t}")
        if t < 0:
            n, t = -n, -t
        object.__setattr__(self, "normal", tuple(float(x) for x in n))
        object.__setattr__(self, "offset", t)

    @property
    def theta(self) -> float:
        return math.acos(self.offset)

    def normalized(self) -> "SphericalCircle":
        return SphericalCircle(self.normal, self.offset)


def spherical_curvature(c: SphericalCircle) -> float:
    """``cot theta = t / sqrt(1 - t^2)``."""
    t = c.offset
    return t / math.sqrt(1 - t * t)


def to_sphere(c: InversiveCircle) -> SphericalCircle:
    k, bc = float(c.curv), float(c.cocurv)
    mx, my = float(c.mx), float(c.my)
    nvec = np.array([2 * mx, 2 * my, bc - k])
    lam = float(np.linalg.norm(nvec))
    return SphericalCircle(tuple(nvec / lam), (k + bc) / lam)


def from_sphere(c: SphericalCircle) -> InversiveCircle:
    """Planar circle (oriented with ``curv + cocurv >= 0``) projecting to ``c``."""
    n1, n2, n3 = c.normal
    t = c.offset
    lam = 2 / math.sqrt(1 - t * t)
    s, diff = lam * t, lam * n3  # curv + cocurv, cocurv - curv
    return InversiveCircle((s + diff) / 2, (s - diff) / 2, lam * n1 / 2, lam * n2 / 2)


def stereo_to_sphere(z: complex):
    """Inverse stereographic projection of a point of the plane."""
    r2 = abs(z) ** 2
    return np.array([2 * z.real, 2 * z.imag, r2 - 1]) / (r2 + 1)


def planar_spherical_curvature(c: InversiveCircle) -> float:
    """Spherical curvature of the image of a planar circle, without building it.

    Exact for rational circles; for floats it avoids the cancellation in
    ``t / sqrt(1 - t^2)`` when the image is a small cap.
    """
    s = c.curv + c.cocurv
    return abs(s) / 2 if c.exact else abs(float(s)) / 2


def soddy_gossett_residual(a, b, c, d) -> float:
    """Descartes form plus 4; vanishes for spherical curvatures of four mutually
    tangent circles on the sphere."""
    return descartes_form(a, b, c, d) + 4


def hyperbolic_depth(c: SphericalCircle) -> float:
    """Distance in the ball model from the origin to the hemisphere spanned by ``c``.

    ``sin theta = 1 / cosh d``.
    """
    t = c.offset
    return math.acosh(1 / math.sqrt(1 - t * t))


def spherical_tangent(c1: SphericalCircle, c2: SphericalCircle, tol: float = 1e-9) -> bool:
    """Tangency: the angle between centers is ``theta1 + theta2`` or ``|theta1 - theta2|``."""
    t1, t2 = c1.offset, c2.offset
    s1, s2 = math.sqrt(1 - t1 * t1), math.sqrt(1 - t2 * t2)
    dot = float(np.dot(c1.normal, c2.normal))
    return abs(dot - (t1 * t2 - s1 * s2)) <= tol or abs(dot - (t1 * t2 + s1 * s2)) <= tol


def same_circle(c1: SphericalCircle, c2: SphericalCircle, tol: float = 1e-10) -> bool:
    """Equality as point sets; great circles match with either normal."""
    if abs(c1.offset - c2.offset) > tol:
        return False
    n1, n2 = np.asarray(c1.normal), np.asarray(c2.normal)
    if np.max(np.abs(n1 - n2)) <= tol:
        return True
    return c1.offset <= tol and np.max(np.abs(n1 + n2)) <= tol


def write_spherical(circles, path, header=None) -> None:
    """One ``nx ny nz t`` record per line after a ``key value`` header."""
    with open(path, "w") as fh:
        fh.write("#kleinpack-sphere 1\n")
        for key, value in (header or {}).items():
            fh.write(f"{key} {value}\n")
        fh.write(f"count {len(circles)}\nend\n")
        for c in circles:
            fh.write(" ".join(repr(x) for x in (*c.normal, c.offset)) + "\n")


def read_spherical(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].split() != ["#kleinpack-sphere", "1"]:
        raise ValueError(f"{path}: line 1: not a version-1 spherical packing file")
    header, i = {}, 1
    while i < len(lines) and lines[i].strip() != "end":
        parts = lines[i].split(None, 1)
        if parts:
            header[parts[0]] = parts[1] if len(parts) > 1 else ""
        i += 1
    n = int(header.get("count", -1))
    out = []
    for lineno in range(i + 2, i + 2 + n):
        if lineno > len(lines):
            raise ValueError(f"{path}: line {lineno}: missing record")
        fields = lines[lineno - 1].split()
        if len(fields) != 4:
            raise ValueError(f"{path}: line {lineno}: expected 4 fields")
        nx, ny, nz, t = map(float, fields)
        out.append(SphericalCircle((nx, ny, nz), t))
    return header, out
