"""Exact rational geometric kernel: scalars, points, hyperplanes, orientation.

Every quantity in this package is an arbitrary-precision rational and every
predicate is decided exactly; there is no floating-point path anywhere, so
search results double as certificates even on adversarially degenerate
configurations.

Conventions:

* A point is a tuple of rationals; a point set keeps its input order, which
  is semantically meaningful (polygonal-path order, alternating partitions).
* Indices reported to callers (facets, partitions, witnesses) are 1-based.
* ``orientation`` is the sign of the determinant of the homogeneous matrix
  whose rows are the points, each row carrying a leading 1.  With the
  leading-1 layout, points on the moment curve with strictly increasing
  parameters orient +1 in every dimension (Vandermonde positivity).
* A hyperplane ``normal . x = offset`` has positive side
  ``normal . x > offset``.

All operations are pure functions on immutable values and safe for
unrestricted concurrent use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .errors import DegenerateInputError, InputError

try:  # gmpy2 rationals are drop-in and roughly 10x faster
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rational

#: Convenience alias used throughout: points are plain tuples of rationals.
Point = Tuple[Rational, ...]

ZERO = Rational(0)
ONE = Rational(1)


def to_rational(value) -> Rational:
    """Coerce ints, strings like ``-3/4``, Fractions or rationals exactly."""
    if isinstance(value, float):
        raise InputError(f"refusing to coerce float {value!r}; pass a rational")
    try:
        return Rational(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a rational: {value!r}") from exc


def as_point(coords: Iterable) -> Point:
    return tuple(to_rational(c) for c in coords)


def sign(value) -> int:
    """Sign of an exact scalar as -1, 0 or +1."""
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def dot(u: Sequence, v: Sequence) -> Rational:
    if len(u) != len(v):
        raise InputError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = ZERO
    for a, b in zip(u, v):
        total += a * b
    return total


@dataclass(frozen=True)
class PointSet:
    """An ordered set of d-dimensional rational points.

    The order is preserved exactly as given.  ``distinct=True`` asserts a
    weak general-position claim (no two points equal) at construction time.
    """

    dim: int
    points: Tuple[Point, ...]
    labels: Optional[Tuple[str, ...]] = None

    def __init__(self, dim, points, labels=None, distinct=False):
        if dim < 1:
            raise InputError(f"dimension must be >= 1, got {dim}")
        pts = tuple(as_point(p) for p in points)
        for i, p in enumerate(pts):
            if len(p) != dim:
                raise InputError(
                    f"point {i + 1} has {len(p)} coordinates, expected {dim}"
                )
        if distinct and len(set(pts)) != len(pts):
            raise InputError("point set declared distinct but contains repeats")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(pts):
                raise InputError("labels length does not match point count")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def subset(self, indices: Sequence[int]) -> "PointSet":
        """Sub-pointset at the given 1-based indices, inherited order."""
        n = len(self.points)
        for i in indices:
            if not 1 <= i <= n:
                raise InputError(f"index {i} out of range 1..{n}")
        return PointSet(self.dim, [self.points[i - 1] for i in indices])

    def translated(self, vector: Sequence) -> "PointSet":
        vec = as_point(vector)
        if len(vec) != self.dim:
            raise InputError("translation vector has wrong dimension")
        return PointSet(
            self.dim,
            [tuple(c + v for c, v in zip(p, vec)) for p in self.points],
            labels=self.labels,
        )


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{x : normal . x = offset}``; positive side is ``> offset``."""

    normal: Tuple[Rational, ...]
    offset: Rational

    def __init__(self, normal, offset):
        norm = as_point(normal)
        if not any(norm):
            raise InputError("hyperplane normal must not be all zero")
        object.__setattr__(self, "normal", norm)
        object.__setattr__(self, "offset", to_rational(offset))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def side_of(self, point: Sequence) -> int:
        """Sign of ``normal . p - offset``, exact."""
        p = as_point(point)
        if len(p) != self.dim:
            raise InputError(
                f"point has {len(p)} coordinates, hyperplane lives in R^{self.dim}"
            )
        return sign(dot(self.normal, p) - self.offset)

    def evaluate(self, point: Sequence) -> Rational:
        p = as_point(point)
        if len(p) != self.dim:
            raise InputError("dimension mismatch in hyperplane evaluation")
        return dot(self.normal, p) - self.offset


def side_of(h: Hyperplane, p: Sequence) -> int:
    return h.side_of(p)


def det(matrix: Sequence[Sequence]) -> Rational:
    """Exact determinant by straightforward fraction Gaussian elimination."""
    n = len(matrix)
    m = [[to_rational(x) for x in row] for row in matrix]
    for row in m:
        if len(row) != n:
            raise InputError("determinant needs a square matrix")
    result = ONE
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if m[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            return ZERO
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            result = -result
        pivot = m[col][col]
        result *= pivot
        for r in range(col + 1, n):
            factor = m[r][col]
            if factor:
                factor /= pivot
                row_r = m[r]
                row_c = m[col]
                for c in range(col + 1, n):
                    row_r[c] -= factor * row_c[c]
    return result


def orientation(points: Sequence[Sequence], dim: int) -> int:
    """Orientation sign of ``dim + 1`` ordered points in R^dim.

    Sign of the determinant whose rows are the points in homogeneous
    coordinates (leading 1), taken in the given order.
    """
    pts = [as_point(p) for p in points]
    if len(pts) != dim + 1:
        raise InputError(f"orientation in R^{dim} needs {dim + 1} points, got {len(pts)}")
    for p in pts:
        if len(p) != dim:
            raise InputError(f"point {p} does not have dimension {dim}")
    return sign(det([(ONE,) + p for p in pts]))


def affinely_independent(points: Sequence[Point]) -> bool:
    """True iff the points span a flat of dimension ``len(points) - 1``."""
    pts = [as_point(p) for p in points]
    if not pts:
        return True
    k = len(pts) - 1
    if k == 0:
        return True
    dim = len(pts[0])
    if k > dim:
        return False
    base = pts[0]
    vectors = [tuple(c - b for c, b in zip(p, base)) for p in pts[1:]]
    # rank check via elimination on a k x dim matrix
    m = [list(v) for v in vectors]
    rank = 0
    for col in range(dim):
        pivot_row = None
        for r in range(rank, k):
            if m[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, k):
            factor = m[r][col]
            if factor:
                factor /= pivot
                for c in range(col, dim):
                    m[r][c] -= factor * m[rank][c]
        rank += 1
        if rank == k:
            break
    return rank == k


def hyperplane_through(points: Sequence[Sequence], dim: int) -> Hyperplane:
    """The unique hyperplane through ``dim`` affinely independent points.

    Built from the affine form ``f(x) = det of rows (1, p_1) .. (1, p_d), (1, x)``,
    which vanishes exactly on the affine hull of the points.
    """
    pts = [as_point(p) for p in points]
    if len(pts) != dim:
        raise InputError(f"a hyperplane in R^{dim} is spanned by {dim} points")

    def f(x: Point) -> Rational:
        return det([(ONE,) + p for p in pts] + [(ONE,) + x])

    origin = tuple(ZERO for _ in range(dim))
    constant = f(origin)
    normal = []
    for j in range(dim):
        e = tuple(ONE if c == j else ZERO for c in range(dim))
        normal.append(f(e) - constant)
    if not any(normal):
        raise DegenerateInputError(
            "points are affinely dependent; they do not span a hyperplane"
        )
    return Hyperplane(normal, -constant)


def in_general_position(X: PointSet, extra: Optional[Sequence] = None) -> bool:
    """No ``dim + 1`` of the given points lie on a common hyperplane.

    ``extra`` appends one more point (deduplicated exactly) to the check.
    """
    pts = list(X.points)
    if extra is not None:
        p = as_point(extra)
        if len(p) != X.dim:
            raise InputError("extra point has wrong dimension")
        if p not in pts:
            pts.append(p)
    if len(pts) < X.dim + 1:
        # with so few points only exact repeats can degenerate
        return len(set(pts)) == len(pts)
    for combo in itertools.combinations(pts, X.dim + 1):
        if orientation(combo, X.dim) == 0:
            return False
    return True
