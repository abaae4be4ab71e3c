"""Circles and lines as points of the Lorentz quadric, Descartes quadruples and
Mobius maps.

A circle (or line) is the 4-vector ``(cocurv, curv, mx, my)``:

* ``curv``   signed curvature ``orientation / radius`` (0 for lines),
* ``cocurv`` curvature of the image under inversion in the unit circle,
* ``(mx, my)`` curvature times center (the unit normal for lines).

Every vector satisfies ``mx**2 + my**2 - curv*cocurv == 1``.  The bilinear form
of that quadric is :func:`inversive_product`; it equals ``-1`` for circles that
are tangent with disjoint interiors.  The interior of an oriented circle is the
set ``curv*|z|**2 - 2*Re(conj(m)*z) + cocurv < 0``; for a line it is the half
plane into which the normal points.

Coordinates are either exact (``int``/``Fraction``) or ``float``.  Exact inputs
give exact outputs wherever the operation is rational; conversion to floats is
explicit via :meth:`InversiveCircle.to_float`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

QUADRIC_TOL = 1e-9
TANGENCY_TOL = 1e-9


class LineError(ValueError):
    """Raised when a center/radius is requested for a line."""


def is_exact(*values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _half(x):
    return Fraction(x) / 2 if isinstance(x, Rational) else x / 2


def exact_sqrt(q):
    """Return the rational square root of ``q`` or ``None`` if it is irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _simplify(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class InversiveCircle:
    cocurv: object
    curv: object
    mx: object
    my: object

    @property
    def moment(self):
        return (self.mx, self.my)

    @property
    def is_line(self) -> bool:
        return self.curv == 0

    @property
    def exact(self) -> bool:
        return is_exact(self.cocurv, self.curv, self.mx, self.my)

    def as_tuple(self):
        return (self.cocurv, self.curv, self.mx, self.my)

    def to_float(self) -> "InversiveCircle":
        return InversiveCircle(*(float(v) for v in self.as_tuple()))

    def quadric_residual(self):
        return self.mx * self.mx + self.my * self.my - self.curv * self.cocurv - 1

    def is_normalized(self, tol: float = QUADRIC_TOL) -> bool:
        r = self.quadric_residual()
        return r == 0 if self.exact else abs(r) <= tol

    def center_xy(self):
        """Exact center as an ``(x, y)`` pair (``Fraction`` for exact circles)."""
        if self.is_line:
            raise LineError("circle is a line; it has no center")
        if self.exact:
            k = Fraction(self.curv)
            return (_simplify(self.mx / k), _simplify(self.my / k))
        return (self.mx / self.curv, self.my / self.curv)

    def reversed(self) -> "InversiveCircle":
        """Same point set with the opposite orientation."""
        return InversiveCircle(-self.cocurv, -self.curv, -self.mx, -self.my)

    def translated(self, t) -> "InversiveCircle":
        """Image under ``z -> z + t``; ``t`` is a complex number or an ``(x, y)`` pair."""
        tx, ty = (t.real, t.imag) if isinstance(t, complex) else t
        k = self.curv
        cocurv = self.cocurv + 2 * (self.mx * tx + self.my * ty) + k * (tx * tx + ty * ty)
        return InversiveCircle(cocurv, k, self.mx + k * tx, self.my + k * ty)

    def __add__(self, other):
        return InversiveCircle(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __sub__(self, other):
        return InversiveCircle(*(a - b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def scale(self, s) -> "InversiveCircle":
        return InversiveCircle(*(s * a for a in self.as_tuple()))


def make_circle(center, radius, orientation: int = 1) -> InversiveCircle:
    """Circle from center and radius.

    ``center`` may be a complex number or an ``(x, y)`` pair; with rational
    center and radius the result is exact.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    cx, cy = (center.real, center.imag) if isinstance(center, complex) else center
    if is_exact(cx, cy, radius):
        cx, cy, radius = Fraction(cx), Fraction(cy), Fraction(radius)
    k = orientation / radius
    cocurv = k * (cx * cx + cy * cy) - orientation * radius
    return InversiveCircle(*(_simplify(v) for v in (cocurv, k, k * cx, k * cy)))


def make_line(unit_normal, offset) -> InversiveCircle:
    """The line ``{p : normal . p == offset}``, interior on the normal side."""
    nx, ny = unit_normal
    norm2 = nx * nx + ny * ny
    if (norm2 != 1) if is_exact(nx, ny) else abs(norm2 - 1) > 1e-12:
        raise ValueError(f"line normal must have unit length, got |n|^2 = {norm2}")
    return InversiveCircle(_simplify(2 * offset), 0, nx, ny)


def center_radius(c: InversiveCircle):
    """Center (complex) and radius of a circle; raises :class:`LineError` for lines."""
    x, y = c.center_xy()
    return complex(float(x), float(y)), 1.0 / abs(float(c.curv))


def inversive_product(u: InversiveCircle, v: InversiveCircle):
    return u.mx * v.mx + u.my * v.my - _half(u.curv * v.cocurv + v.curv * u.cocurv)


def is_tangent(u: InversiveCircle, v: InversiveCircle, tol: float | None = None) -> bool:
    """Tangency with disjoint interiors (inversive product ``-1``).

    The default tolerance is 0 for two exact circles and ``TANGENCY_TOL`` otherwise.
    """
    p = inversive_product(u, v)
    if tol is None:
        tol = 0 if (u.exact and v.exact) else TANGENCY_TOL
    if tol == 0 and is_exact(p):
        return p == -1
    return abs(p + 1) <= tol


def descartes_form(a, b, c, d):
    """``2(a^2+b^2+c^2+d^2) - (a+b+c+d)^2``."""
    s = a + b + c + d
    return 2 * (a * a + b * b + c * c + d * d) - s * s


@dataclass(frozen=True)
class DescartesQuadruple:
    circles: tuple

    def __post_init__(self):
        if len(self.circles) != 4:
            raise ValueError("a Descartes quadruple has exactly four circles")
        object.__setattr__(self, "circles", tuple(self.circles))

    def __getitem__(self, i):
        return self.circles[i]

    def __iter__(self):
        return iter(self.circles)

    @property
    def curvatures(self):
        return tuple(c.curv for c in self.circles)

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.circles)

    def is_valid(self, tol: float = TANGENCY_TOL) -> bool:
        t = 0 if self.exact else tol
        for i in range(4):
            if not self.circles[i].is_normalized(max(t, QUADRIC_TOL) if t else 0):
                return False
            for j in range(i + 1, 4):
                if not is_tangent(self.circles[i], self.circles[j], t):
                    return False
        return True

    def to_float(self) -> "DescartesQuadruple":
        return DescartesQuadruple(tuple(c.to_float() for c in self.circles))


def swap(q: DescartesQuadruple, i: int) -> DescartesQuadruple:
    """Replace circle ``i`` (0-based) by the other circle tangent to the remaining three.

    Uses the vector identity ``v_i' = 2(v_j + v_k + v_l) - v_i``.
    """
    if not 0 <= i < 4:
        raise IndexError(f"swap index must be in 0..3, got {i}")
    others = [c for j, c in enumerate(q.circles) if j != i]
    new = (others[0] + others[1] + others[2]).scale(2) - q.circles[i]
    circles = list(q.circles)
    circles[i] = new
    return DescartesQuadruple(tuple(circles))


# Gram matrix of the quadric form on (cocurv, curv, mx, my).
_GRAM = np.array(
    [[0, -0.5, 0, 0], [-0.5, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float
)


def _dual_row(c: InversiveCircle):
    # w -> inversive_product(w, c) as a linear functional on (cocurv, curv, mx, my)
    return (-_half(c.curv), -_half(c.cocurv), c.mx, c.my)


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _null_vector(rows):
    """Generalized cross product: a vector orthogonal to three rows of length 4."""
    out = []
    for col in range(4):
        minor = [[r[j] for j in range(4) if j != col] for r in rows]
        out.append((-1) ** col * _det3(minor))
    return InversiveCircle(*out)


def apollonius_pair(c1: InversiveCircle, c2: InversiveCircle, c3: InversiveCircle,
                    tol: float = TANGENCY_TOL):
    """The two circles tangent to three mutually tangent circles.

    Both solutions have the form ``s +/- 2w`` with ``s = c1 + c2 + c3`` and ``w``
    the unit vector orthogonal (in the quadric form) to all three inputs, so the
    pair sums to ``2(c1 + c2 + c3)``.  Exact inputs give exact outputs whenever
    the normalization of ``w`` is rational; otherwise the result is float.
    """
    trio = (c1, c2, c3)
    exact = all(c.exact for c in trio)
    for i in range(3):
        for j in range(i + 1, 3):
            if not is_tangent(trio[i], trio[j], 0 if exact else tol):
                raise ValueError(f"circles {i} and {j} are not tangent")
    s = c1 + c2 + c3
    w = _null_vector([_dual_row(c) for c in trio])
    q = inversive_product(w, w)
    if (q == 0) if exact else abs(q) < tol:
        return s, s
    if exact:
        root = exact_sqrt(q)
        if root is None:
            s, w, root = s.to_float(), w.to_float(), math.sqrt(float(q))
    else:
        root = math.sqrt(q)
    w = w.scale(2 / root if not isinstance(root, Fraction) else Fraction(2) / root)
    a, b = s + w, s - w
    if exact and a.exact:
        a = InversiveCircle(*(_simplify(Fraction(v)) for v in a.as_tuple()))
        b = InversiveCircle(*(_simplify(Fraction(v)) for v in b.as_tuple()))
    return tuple(sorted((a, b), key=_circle_sort_key))


def _circle_sort_key(c: InversiveCircle):
    if c.is_line:
        return (0, float(c.cocurv), float(c.mx), float(c.my))
    x, y = c.center_xy()
    return (float(c.curv), float(x), float(y))


@dataclass(frozen=True)
class MobiusMap:
    """``z -> (a z + b) / (c z + d)``, renormalized to determinant 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det == 0:
            raise ValueError("singular Mobius matrix")
        r = cmath.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)) / r)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "MobiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __call__(self, z):
        """Image of a point; ``math.inf`` stands for the point at infinity."""
        if z == math.inf or (isinstance(z, complex) and cmath.isinf(z)):
            return self.a / self.c if self.c != 0 else math.inf
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)


def compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """``m1 o m2`` (apply ``m2`` first)."""
    return MobiusMap.from_matrix(m1.matrix @ m2.matrix)


def invert(m: MobiusMap) -> MobiusMap:
    return MobiusMap(m.d, -m.b, -m.c, m.a)


def hermitian(c: InversiveCircle) -> np.ndarray:
    """Hermitian form ``H`` with ``(conj z, 1) H (z, 1)^T = curv|z|^2 - 2 Re(conj(m) z) + cocurv``."""
    m = complex(float(c.mx), float(c.my))
    return np.array(
        [[float(c.curv), -m], [-m.conjugate(), float(c.cocurv)]], dtype=complex
    )


def from_hermitian(h: np.ndarray) -> InversiveCircle:
    m = -complex(h[0, 1])
    return InversiveCircle(float(h[1, 1].real), float(h[0, 0].real), m.real, m.imag)


def apply_mobius(m: MobiusMap, c: InversiveCircle) -> InversiveCircle:
    """Image of an oriented circle; interiors map to interiors.

    Lines appear whenever the image passes through infinity (``curv == 0``).
    """
    g_inv = invert(m).matrix
    h = g_inv.conj().T @ hermitian(c) @ g_inv
    out = from_hermitian(h)
    if abs(out.curv) < 1e-13 * max(1.0, abs(out.cocurv), abs(out.mx), abs(out.my)):
        n = math.hypot(out.mx, out.my)
        out = InversiveCircle(out.cocurv / n, 0.0, out.mx / n, out.my / n)
    return out
