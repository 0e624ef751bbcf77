"""Moment-curve point sets, order-type homogeneity, and cyclic-polytope facets.

An ordered point set is *order-type homogeneous* when every ordered
(d+1)-subset has the same nonzero orientation sign.  The canonical examples
live on the moment curve ``a -> (a, a^2, ..., a^d)``: for strictly increasing
parameters every orientation determinant is a Vandermonde product and hence
positive, and the convex hull is the cyclic polytope, whose facets are
described combinatorially by Gale's evenness criterion.

Homogeneity of a subset is always evaluated in the inherited input order;
there is no reordering search.  At d=1 this makes homogeneous subsets exactly
the strictly monotone subsequences.  A zero orientation counts as a
homogeneity violation (general position is part of the notion).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from .errors import DegenerateInputError, InputError, ResourceGuardError
from .kernel import (
    Hyperplane,
    PointSet,
    Rational,
    orientation,
    to_rational,
)

#: Exhaustive-search guard for subset extraction in dimension >= 2.
SUBSET_SEARCH_CAP = 20


@dataclass(frozen=True)
class MomentSpec:
    """Parameters on the moment curve in R^dim, in the given order.

    With ``distinct=True`` (the default) the parameters must be strictly
    increasing, which guarantees an order-type homogeneous point set.
    """

    dim: int
    alphas: Tuple[Rational, ...]
    distinct: bool = True

    def __init__(self, dim, alphas, distinct=True):
        if dim < 1:
            raise InputError(f"dimension must be >= 1, got {dim}")
        vals = tuple(to_rational(a) for a in alphas)
        if distinct:
            for a, b in zip(vals, vals[1:]):
                if not a < b:
                    raise InputError(
                        "moment parameters must be strictly increasing "
                        f"(found {a} before {b})"
                    )
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "alphas", vals)
        object.__setattr__(self, "distinct", distinct)


def moment_points(spec: MomentSpec) -> PointSet:
    """Evaluate the moment curve at each parameter, exactly."""
    pts = [tuple(a ** k for k in range(1, spec.dim + 1)) for a in spec.alphas]
    return PointSet(spec.dim, pts)


@dataclass(frozen=True)
class FacetSet:
    """Facets of a cyclic polytope as 1-based d-element index subsets."""

    n: int
    dim: int
    facets: frozenset

    def __len__(self) -> int:
        return len(self.facets)

    def sorted(self):
        return sorted(self.facets)


def gale_facets(n: int, dim: int) -> FacetSet:
    """Facets of the cyclic polytope on n ordered vertices in R^dim.

    A d-subset F is a facet iff any two indices outside F have an even
    number of F-indices strictly between them; it suffices to check
    consecutive outside indices.
    """
    if n < dim + 1:
        raise InputError(f"need n >= dim + 1, got n={n}, dim={dim}")
    facets = []
    for combo in itertools.combinations(range(1, n + 1), dim):
        members = set(combo)
        outside = [i for i in range(1, n + 1) if i not in members]
        ok = True
        for a, b in zip(outside, outside[1:]):
            between = sum(1 for f in combo if a < f < b)
            if between % 2:
                ok = False
                break
        if ok:
            facets.append(combo)
    return FacetSet(n=n, dim=dim, facets=frozenset(facets))


def is_neighborly(n: int, dim: int) -> bool:
    """True iff every floor(dim/2)-element index subset lies in some facet."""
    if n < dim + 1:
        raise InputError(f"need n >= dim + 1, got n={n}, dim={dim}")
    k = dim // 2
    if k == 0:
        return True
    facet_sets = [set(f) for f in gale_facets(n, dim).facets]
    for combo in itertools.combinations(range(1, n + 1), k):
        subset = set(combo)
        if not any(subset <= f for f in facet_sets):
            return False
    return True


@dataclass(frozen=True)
class HomogeneityResult:
    """Outcome of an order-type homogeneity check.

    ``witness`` is None when homogeneous; otherwise it holds one entry
    ``(indices, 0)`` for a degenerate subset, or two entries with opposite
    signs.  ``trivial`` marks sets with fewer than dim+1 points, which are
    homogeneous with undefined sign.
    """

    homogeneous: bool
    sign: Optional[int]
    witness: Optional[Tuple[Tuple[Tuple[int, ...], int], ...]] = None
    trivial: bool = False


def is_order_homogeneous(X: PointSet) -> HomogeneityResult:
    """Check that every ordered (dim+1)-subset has one nonzero orientation."""
    n = len(X)
    d = X.dim
    if n < d + 1:
        return HomogeneityResult(homogeneous=True, sign=None, trivial=True)
    first: Optional[Tuple[Tuple[int, ...], int]] = None
    for combo in itertools.combinations(range(n), d + 1):
        s = orientation([X.points[i] for i in combo], d)
        indices = tuple(i + 1 for i in combo)
        if s == 0:
            return HomogeneityResult(False, None, witness=((indices, 0),))
        if first is None:
            first = (indices, s)
        elif s != first[1]:
            return HomogeneityResult(False, None, witness=(first, (indices, s)))
    assert first is not None
    return HomogeneityResult(True, first[1])


@dataclass(frozen=True)
class CrossingReport:
    """Count and 1-based edge indices where a path crosses a hyperplane."""

    count: int
    edges: Tuple[int, ...]


def path_crossings(X: PointSet, h: Hyperplane) -> CrossingReport:
    """Edges of the polygonal path on X whose endpoints strictly straddle h.

    A vertex on h is rejected (degenerate input); callers perturb h if they
    need a generic cut.
    """
    if h.dim != X.dim:
        raise InputError("hyperplane and point set dimensions differ")
    sides = []
    for i, p in enumerate(X.points):
        s = h.side_of(p)
        if s == 0:
            raise DegenerateInputError(
                f"vertex {i + 1} lies on the hyperplane; perturb the hyperplane"
            )
        sides.append(s)
    edges = tuple(
        i + 1 for i, (a, b) in enumerate(zip(sides, sides[1:])) if a != b
    )
    return CrossingReport(count=len(edges), edges=edges)


def _monotone_subsequence_1d(values: Sequence[Rational]) -> Tuple[int, ...]:
    """Lexicographically least maximum strictly monotone subsequence (0-based)."""
    n = len(values)
    if n == 0:
        return ()
    inc = [1] * n  # longest strictly increasing run starting at i
    dec = [1] * n
    for i in range(n - 2, -1, -1):
        for j in range(i + 1, n):
            if values[j] > values[i] and inc[j] + 1 > inc[i]:
                inc[i] = inc[j] + 1
            if values[j] < values[i] and dec[j] + 1 > dec[i]:
                dec[i] = dec[j] + 1
    best = max(max(inc), max(dec))

    def build(table, increasing):
        seq = []
        need = best
        last: Optional[int] = None
        for i in range(n):
            if table[i] < need:
                continue
            if last is not None:
                if increasing and not values[i] > values[last]:
                    continue
                if not increasing and not values[i] < values[last]:
                    continue
            seq.append(i)
            last = i
            need -= 1
            if need == 0:
                break
        return tuple(seq)

    candidates = []
    if max(inc) == best:
        candidates.append(build(inc, True))
    if max(dec) == best:
        candidates.append(build(dec, False))
    return min(candidates)


def largest_homogeneous_subset(X: PointSet, cap: int = SUBSET_SEARCH_CAP) -> Tuple[int, ...]:
    """Maximum-cardinality index subsequence that is order-type homogeneous.

    Ties break lexicographically on the (1-based) index sequence.  Dimension
    one runs a strictly-monotone-subsequence dynamic program and accepts any
    n; higher dimensions search subsets exhaustively from the top and are
    guarded by ``cap``.
    """
    n = len(X)
    d = X.dim
    if d == 1:
        seq = _monotone_subsequence_1d([p[0] for p in X.points])
        return tuple(i + 1 for i in seq)
    if n > cap:
        raise ResourceGuardError(
            f"exhaustive subset search needs n <= {cap} for dim >= 2, got n={n}"
        )
    signs: Dict[Tuple[int, ...], int] = {}
    for combo in itertools.combinations(range(n), d + 1):
        signs[combo] = orientation([X.points[i] for i in combo], d)
    for size in range(n, d, -1):
        for combo in itertools.combinations(range(n), size):
            uniform = None
            ok = True
            for sub in itertools.combinations(combo, d + 1):
                s = signs[sub]
                if s == 0:
                    ok = False
                    break
                if uniform is None:
                    uniform = s
                elif s != uniform:
                    ok = False
                    break
            if ok:
                return tuple(i + 1 for i in combo)
    return tuple(range(1, min(n, d) + 1))
