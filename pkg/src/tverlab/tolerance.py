"""Partition tolerance: how many removals an r-partition's common point survives.

The *tolerance* of a partition A_1..A_r of a point set X is the largest t
such that the hulls of the depleted blocks still share a common point after
removing ANY set Y of at most t points.  ``conv(emptyset) = emptyset``, so a
removal that swallows a whole block always breaks the partition; hence the
tolerance is always at most (smallest block size) - 1, and a partition whose
base intersection is already empty has tolerance -1.

``set_tolerance`` maximizes over all partitions of the index set into r
nonempty unordered blocks (block labels carry no meaning).  Both searches
are exhaustive and exact:

* removal sets are enumerated by increasing size, lexicographically within a
  size, and the first breaking set is reported, so reports are reproducible;
* breaking sets are upward closed (hulls only shrink when more points are
  removed), which justifies testing a single size when only a threshold
  ("tolerance >= t?") is needed;
* on order-type homogeneous sets every block left with at most floor(d/2)
  points spans a proper face of the cyclic polytope, disjoint from the other
  hulls, which gives the sharper cap
  ``tolerance <= min block - floor(d/2) - 1`` used to prune the partition
  scan (validity is checked, not assumed: the pruning is enabled only after
  an explicit homogeneity test).

Dimension one additionally has a closed-form tolerance per partition: hulls
are intervals, intervals intersect iff they pairwise intersect, and the
cheapest way to separate blocks i and j is to delete a bottom segment of one
and a top segment of the other.  The fast path computes that directly and is
tested exhaustively against the generic enumeration.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError, ResourceGuardError
from .feasibility import hulls_common_point, intervals_common_point
from .kernel import PointSet
from .ordertype import is_order_homogeneous

#: Exhaustive partition enumeration guard (desk scale).
PARTITION_GUARD = 12


@dataclass(frozen=True)
class Partition:
    """Assignment of 1-based point indices to r labeled nonempty blocks."""

    n: int
    r: int
    labels: Tuple[int, ...]  # labels[i] is the block (1..r) of index i+1

    def __init__(self, n, r, labels):
        labels = tuple(labels)
        if len(labels) != n:
            raise InputError(f"need {n} labels, got {len(labels)}")
        if n < r or r < 1:
            raise InputError(f"need n >= r >= 1, got n={n}, r={r}")
        seen = set(labels)
        if seen != set(range(1, r + 1)):
            raise InputError("blocks must be nonempty and labeled 1..r")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> "Partition":
        labels = [0] * n
        for k, block in enumerate(blocks, start=1):
            for i in block:
                if not 1 <= i <= n:
                    raise InputError(f"index {i} out of range 1..{n}")
                if labels[i - 1]:
                    raise InputError(f"index {i} assigned to two blocks")
                labels[i - 1] = k
        if any(v == 0 for v in labels):
            raise InputError("blocks do not cover all indices")
        return cls(n, len(blocks), labels)

    def blocks(self) -> Tuple[Tuple[int, ...], ...]:
        out: List[List[int]] = [[] for _ in range(self.r)]
        for i, lab in enumerate(self.labels, start=1):
            out[lab - 1].append(i)
        return tuple(tuple(b) for b in out)

    def canonical_key(self) -> Tuple[int, ...]:
        """Label string with blocks renamed by first appearance.

        This is the lexicographic block encoding used for deterministic
        tie-breaking: unordered partitions compare equal iff their keys do.
        """
        rename: Dict[int, int] = {}
        key = []
        for lab in self.labels:
            if lab not in rename:
                rename[lab] = len(rename)
            key.append(rename[lab])
        return tuple(key)


def alternating_partition(n: int, r: int) -> Partition:
    """Blocks are residue classes of the 1-based index modulo r."""
    if n < r:
        raise InputError(f"alternating partition needs n >= r, got n={n}, r={r}")
    return Partition(n, r, [((j - 1) % r) + 1 for j in range(1, n + 1)])


@dataclass(frozen=True)
class ToleranceReport:
    """Tolerance value with the minimal breaking removal set.

    ``value`` is -1 when even the full partition has no common point.  When
    ``exhausted`` is False the search was cut by a budget and ``value`` is a
    verified lower bound (every removal of that size still keeps a common
    point); otherwise ``breaking_set`` is the lexicographically first removal
    of size ``value + 1`` that breaks the partition.
    """

    value: int
    breaking_set: Optional[Tuple[int, ...]]
    exhausted: bool


# ---------------------------------------------------------------------------
# feasibility of depleted blocks


def _block_points(X: PointSet, partition: Partition):
    pts = X.points
    return [[pts[i - 1] for i in block] for block in partition.blocks()]


def _depleted_feasible(block_indices, X: PointSet, removed) -> bool:
    pts = X.points
    blocks = [
        [pts[i - 1] for i in block if i not in removed] for block in block_indices
    ]
    if any(not b for b in blocks):
        return False
    if X.dim == 1:
        return intervals_common_point([[p[0] for p in b] for b in blocks]) is not None
    return hulls_common_point(blocks, X.dim).feasible


def _face_cap(block_indices, removed, face_size) -> bool:
    """True when some depleted block is forced onto a proper face.

    Valid only for order-type homogeneous X with r >= 2: a block left with
    1..face_size points spans a face of the cyclic polytope that the other
    (nonempty) blocks' hulls miss, and an emptied block breaks outright.
    """
    survivors = [sum(1 for i in block if i not in removed) for block in block_indices]
    if any(s == 0 for s in survivors):
        return True
    if len(block_indices) < 2 or face_size == 0:
        return False
    return any(s <= face_size for s in survivors)


# ---------------------------------------------------------------------------
# closed-form tolerance at d = 1


def _pair_separation_cost(sorted_hi: Sequence, sorted_lo: Sequence) -> int:
    """Fewest removals putting block `hi` strictly right of block `lo`.

    Remove the k smallest of `hi` and everything in `lo` at or above the
    surviving minimum; middles never help for interval separation.
    """
    best = len(sorted_hi) + len(sorted_lo)  # fallback: empty both (never minimal)
    for k, cut in enumerate(sorted_hi):
        drop = len(sorted_lo) - bisect_left(sorted_lo, cut)
        if drop < len(sorted_lo):
            best = min(best, k + drop)
    return best


def _tolerance_value_1d(block_values) -> int:
    """Exact tolerance of a 1-d partition via pairwise interval separation."""
    sorted_blocks = [sorted(vals) for vals in block_values]
    breaking = min(len(b) for b in sorted_blocks)  # empty a block
    for bi, bj in itertools.permutations(sorted_blocks, 2):
        breaking = min(breaking, _pair_separation_cost(bi, bj))
    return breaking - 1


# ---------------------------------------------------------------------------
# per-partition tolerance


def partition_tolerance(
    X: PointSet, partition: Partition, budget: Optional[int] = None
) -> ToleranceReport:
    """Exact tolerance of one partition by increasing-size removal search."""
    n = len(X)
    if partition.n != n:
        raise InputError("partition size does not match point set")
    block_indices = partition.blocks()
    cap = n if budget is None else min(budget, n)

    if X.dim == 1:
        values = [
            [X.points[i - 1][0] for i in block] for block in block_indices
        ]
        value = _tolerance_value_1d(values)
        if value >= cap:
            return ToleranceReport(value=cap, breaking_set=None, exhausted=False)
        breaking = _first_breaking_set(block_indices, X, value + 1)
        assert breaking is not None
        return ToleranceReport(value=value, breaking_set=breaking, exhausted=True)

    for size in range(cap + 1):
        breaking = _first_breaking_set(block_indices, X, size)
        if breaking is not None:
            return ToleranceReport(
                value=size - 1, breaking_set=breaking, exhausted=True
            )
    return ToleranceReport(value=cap, breaking_set=None, exhausted=False)


def _first_breaking_set(block_indices, X, size, face_size=None):
    """Lexicographically first removal of the given size that breaks."""
    for combo in itertools.combinations(range(1, len(X) + 1), size):
        removed = set(combo)
        if face_size is not None and _face_cap(block_indices, removed, face_size):
            return combo
        if not _depleted_feasible(block_indices, X, removed):
            return combo
    return None


def _breaks_at_size(block_indices, X, size, face_size) -> bool:
    """Does some removal of exactly this size break?  (early exit allowed)"""
    if size == 0:
        return not _depleted_feasible(block_indices, X, frozenset())
    sizes = [len(b) for b in block_indices]
    if face_size is not None and len(block_indices) >= 2:
        if min(sizes) <= size + face_size:
            return True  # squash the smallest block onto a face
    elif min(sizes) <= size:
        return True  # empty the smallest block
    for combo in itertools.combinations(range(1, len(X) + 1), size):
        removed = set(combo)
        if face_size is not None and _face_cap(block_indices, removed, face_size):
            return True
        if not _depleted_feasible(block_indices, X, removed):
            return True
    return False


def _tolerance_at_least(block_indices, X, t, face_size) -> bool:
    """Threshold test: no removal of size t breaks (so none smaller does)."""
    if t <= 0:
        return t < 0 or _depleted_feasible(block_indices, X, frozenset())
    if X.dim == 1:
        values = [[X.points[i - 1][0] for i in block] for block in block_indices]
        return _tolerance_value_1d(values) >= t
    return not _breaks_at_size(block_indices, X, t, face_size)


def _exact_tolerance(block_indices, X, lower, face_size) -> int:
    """Exact tolerance, entered knowing it is at least ``lower``."""
    if X.dim == 1:
        values = [[X.points[i - 1][0] for i in block] for block in block_indices]
        return _tolerance_value_1d(values)
    if lower < 0 and not _depleted_feasible(block_indices, X, frozenset()):
        return -1
    t = max(lower, 0)
    while not _breaks_at_size(block_indices, X, t + 1, face_size):
        t += 1
    return t


# ---------------------------------------------------------------------------
# partition enumeration (restricted growth strings, lexicographic)


def iter_partitions(n: int, r: int, min_block: int = 1) -> Iterator[Partition]:
    """All partitions of 1..n into exactly r nonempty unordered blocks.

    Yields in lexicographic order of the canonical label string (blocks
    named by first appearance).  ``min_block`` prunes branches that cannot
    reach the requested smallest block size.
    """
    if n < r * max(min_block, 1):
        return
    labels = [0] * n
    counts = [0] * r

    def extend(i: int, used: int) -> Iterator[Partition]:
        if i == n:
            if used == r and all(c >= min_block for c in counts[:used]):
                yield Partition(n, r, [lab + 1 for lab in labels])
            return
        remaining = n - i
        # prune: every block must still be fillable to min_block, and all
        # r blocks must get opened
        deficit = sum(max(0, min_block - counts[b]) for b in range(used))
        deficit += (r - used) * min_block
        if remaining < deficit:
            return
        top = min(used + 1, r)
        for lab in range(top):
            labels[i] = lab
            counts[lab] += 1
            yield from extend(i + 1, max(used, lab + 1))
            counts[lab] -= 1
        labels[i] = 0

    # index 1 always sits in block 1: labels fixed at 0 for i=0 by the loop
    yield from extend(0, 0)


def set_tolerance(
    X: PointSet,
    r: int,
    budget: Optional[int] = None,
    guard: int = PARTITION_GUARD,
) -> Tuple[ToleranceReport, Partition]:
    """Best tolerance over all r-partitions of X, with an argmax partition.

    Exhaustive over unordered partitions; ties resolve to the partition with
    the lexicographically least canonical label string.  ``guard`` bounds n
    (the enumeration is exponential); ``budget`` caps the per-partition
    removal search, in which case the result is a verified lower bound.
    """
    n = len(X)
    if n < r:
        raise InputError(f"set tolerance needs |X| >= r, got {n} < {r}")
    if n > guard:
        raise ResourceGuardError(
            f"partition enumeration needs n <= {guard}, got n={n}"
        )
    face_size = None
    if r >= 2 and X.dim >= 2 and is_order_homogeneous(X).homogeneous:
        face_size = X.dim // 2

    cap = n if budget is None else min(budget, n)
    slack = 0 if face_size is None else face_size

    # phase 0/1: find the maximum tolerance M, seeded with the alternating
    # partition and pruned by the block-size caps
    seed = alternating_partition(n, r)
    best = _exact_tolerance(_block_points_idx(seed), X, -1, face_size)
    best = min(best, cap)
    if best < cap:
        for partition in iter_partitions(n, r, min_block=best + 2 + slack):
            blocks = _block_points_idx(partition)
            if not _tolerance_at_least(blocks, X, best + 1, face_size):
                continue
            value = _exact_tolerance(blocks, X, best + 1, face_size)
            best = min(value, cap)
            if best >= cap:
                break

    # phase 2: lexicographically first achiever of the maximum
    chosen = None
    for partition in iter_partitions(n, r, min_block=max(1, best + 1 + slack)):
        if _tolerance_at_least(_block_points_idx(partition), X, best, face_size):
            chosen = partition
            break
    assert chosen is not None, "some partition must achieve the maximum"
    report = partition_tolerance(X, chosen, budget=budget)
    assert report.value == best or not report.exhausted
    return report, chosen


def _block_points_idx(partition: Partition):
    return partition.blocks()


# ---------------------------------------------------------------------------
# bound formulas


def alternating_bound(d: int, r: int) -> int:
    """Upper bound on the alternating threshold c(d,r):
    ``(d+1) (floor(d/2)+1) (r-1) + 1`` points always give the alternating
    partition of an order-type homogeneous set a common point."""
    if d < 1 or r < 1:
        raise InputError("need d >= 1 and r >= 1")
    return (d + 1) * (d // 2 + 1) * (r - 1) + 1


def alternating_bound_even(d: int, r: int) -> int:
    """Sharper even-dimension bound on c(d,r).

    ``min_i d(d+1)/2 (r-1) + i(d+1) + s_i`` over i in 0..r-1, where s_i is
    the smallest positive integer congruent to ``d(d+1)/2 - i d`` mod r.
    """
    if d < 1 or d % 2:
        raise InputError(f"even-dimension bound needs even d, got {d}")
    if r < 1:
        raise InputError("need r >= 1")
    base = d * (d + 1) // 2
    best = None
    for i in range(r):
        rem = (base - i * d) % r
        s_i = rem if rem > 0 else r
        value = base * (r - 1) + i * (d + 1) + s_i
        best = value if best is None or value < best else best
    return best


def tolerance_upper_bound(n: int, d: int, r: int) -> int:
    """``floor(n/r) - floor(d/2)``: no n-point set in R^d has a more tolerant
    r-partition.  May be negative (no tolerant partition can exist)."""
    if n < 1 or d < 1 or r < 1:
        raise InputError("need positive n, d, r")
    return n // r - d // 2


@dataclass(frozen=True)
class SandwichReport:
    """Both sides of the homogeneous-set tolerance sandwich, evaluated."""

    n: int
    r: int
    t_value: int
    lower_bound: int
    upper_bound: int
    lower_ok: bool
    upper_ok: bool


def check_tolerance_sandwich(X: PointSet, r: int, guard: int = PARTITION_GUARD) -> SandwichReport:
    """Evaluate ``floor(n/r) - c_bound <= t(X,r) <= floor(n/r) - floor(d/2)``
    on an order-type homogeneous set, with c replaced by
    :func:`alternating_bound` (a valid weakening of the lower bound)."""
    n = len(X)
    if n < r:
        raise InputError("sandwich check needs |X| >= r")
    result = is_order_homogeneous(X)
    if not result.homogeneous:
        raise InputError("sandwich check requires an order-type homogeneous set")
    report, _ = set_tolerance(X, r, guard=guard)
    lower = n // r - alternating_bound(X.dim, r)
    upper = n // r - X.dim // 2
    return SandwichReport(
        n=n,
        r=r,
        t_value=report.value,
        lower_bound=lower,
        upper_bound=upper,
        lower_ok=lower <= report.value,
        upper_ok=report.value <= upper,
    )
