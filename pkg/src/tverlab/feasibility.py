"""Exact LP feasibility with checkable certificates, plus Tukey depth.

Feasibility of ``A x = b, x >= 0`` is decided by a phase-1 simplex over
rationals with Bland's anti-cycling pivot rule: termination is guaranteed and
both outcomes carry evidence that an independent verifier can replay with
nothing but exact arithmetic.

* feasible: a witness vector (here: a common point plus per-block convex
  coefficients) whose defining equalities are recomputed exactly;
* infeasible: a Farkas multiplier vector u with ``u . column <= 0`` for every
  column and ``u . b > 0``, or a strict separating hyperplane for hull
  membership queries, or an empty-block marker (``conv(emptyset) = emptyset``
  by convention, so removing a whole block makes an intersection infeasible).

Certificates are normalized to coprime integer entries (positive scaling
only; a separator may also be sign-flipped, with the side of the query point
recorded) so reports are reproducible across runs.

Performance is secondary to exactness: systems here are desk scale (tens of
rows).  Everything is pure; callers may run many solves concurrently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DegenerateInputError, InputError
from .kernel import (
    Hyperplane,
    ONE,
    Point,
    PointSet,
    Rational,
    ZERO,
    as_point,
    dot,
    hyperplane_through,
    in_general_position,
)

# ---------------------------------------------------------------------------
# phase-1 simplex over rationals


def solve_equality_feasibility(rows, rhs):
    """Decide ``A x = b, x >= 0`` exactly.

    Returns ``("feasible", x)`` or ``("infeasible", u)`` where u satisfies
    ``u . A_j <= 0`` for every column j and ``u . b > 0``.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    for row in rows:
        if len(row) != n:
            raise InputError("ragged constraint matrix")
    if m == 0:
        return "feasible", []

    flips = []
    tableau: List[List[Rational]] = []
    for i in range(m):
        b = Rational(rhs[i])
        row = [Rational(v) for v in rows[i]]
        if b < 0:
            b = -b
            row = [-v for v in row]
            flips.append(-1)
        else:
            flips.append(1)
        # columns: n structural, m artificial, then rhs
        art = [ZERO] * m
        art[i] = ONE
        tableau.append(row + art + [b])

    # objective row holds reduced costs for `minimize sum of artificials`;
    # its rhs entry is minus the current objective value.
    width = n + m + 1
    obj = [ZERO] * width
    for j in range(width):
        col_sum = ZERO
        for i in range(m):
            col_sum += tableau[i][j]
        obj[j] = -col_sum
    for k in range(m):
        obj[n + k] += ONE

    basis = list(range(n, n + m))

    while True:
        entering = -1
        for j in range(n):  # artificials never re-enter
            if obj[j] < 0:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        assert leaving >= 0, "phase-1 objective is bounded; no ratio row means a bug"
        _pivot(tableau, obj, leaving, entering)
        basis[leaving] = entering

    value = -obj[-1]
    if value == 0:
        x = [ZERO] * n
        for i, var in enumerate(basis):
            if var < n:
                x[var] = tableau[i][-1]
        return "feasible", x
    multipliers = [flips[i] * (ONE - obj[n + i]) for i in range(m)]
    return "infeasible", multipliers


def _pivot(tableau, obj, row, col):
    pivot_row = tableau[row]
    pivot = pivot_row[col]
    if pivot != 1:
        inv = ONE / pivot
        tableau[row] = pivot_row = [v * inv for v in pivot_row]
    for other in tableau:
        if other is pivot_row:
            continue
        factor = other[col]
        if factor:
            for c, v in enumerate(pivot_row):
                if v:
                    other[c] -= factor * v
    factor = obj[col]
    if factor:
        for c, v in enumerate(pivot_row):
            if v:
                obj[c] -= factor * v


def _normalize_multipliers(values: Sequence[Rational]) -> Tuple[Rational, ...]:
    """Scale by the unique positive rational giving coprime integer entries."""
    if not values or all(v == 0 for v in values):
        return tuple(values)
    denom_lcm = 1
    for v in values:
        denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, int(v.denominator))
    ints = [int(v * denom_lcm) for v in values]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    return tuple(Rational(v // g) for v in ints)


# ---------------------------------------------------------------------------
# outcome and certificate types


@dataclass(frozen=True)
class Witness:
    """A common point plus per-block convex coefficients, exactly checkable."""

    point: Point
    coefficients: Tuple[Tuple[Rational, ...], ...]


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers proving the intersection system ``A x = b, x >= 0`` empty.

    The system layout is fixed by :func:`intersection_system`; multipliers are
    normalized to coprime integers (positive scaling only).
    """

    multipliers: Tuple[Rational, ...]


@dataclass(frozen=True)
class SeparationCertificate:
    """A hyperplane strictly separating the query point from a hull.

    ``point_side`` records which side the query point is on; every hull point
    lies strictly on the other side.
    """

    hyperplane: Hyperplane
    point_side: int


@dataclass(frozen=True)
class EmptyBlockCertificate:
    """Infeasibility because a block is empty (conv(emptyset) = emptyset)."""

    block_index: int


@dataclass(frozen=True)
class FeasibilityOutcome:
    status: str  # "feasible" | "infeasible"
    witness: Optional[Witness] = None
    certificate: Optional[object] = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


# ---------------------------------------------------------------------------
# hull intersection


def intersection_system(blocks: Sequence[Sequence[Point]], dim: int):
    """Canonical equality system for a common point of the blocks' hulls.

    One column per point (blocks in order, points in block order).  Rows:
    one convexity row per block (coefficients sum to 1), then for each pair
    of consecutive blocks ``dim`` chain rows equating their combinations.
    Verifiers rebuild this exact layout when replaying Farkas certificates.
    """
    r = len(blocks)
    sizes = [len(b) for b in blocks]
    total = sum(sizes)
    offsets = [sum(sizes[:k]) for k in range(r)]
    rows = []
    rhs = []
    for k in range(r):
        row = [ZERO] * total
        for j in range(sizes[k]):
            row[offsets[k] + j] = ONE
        rows.append(row)
        rhs.append(ONE)
    for k in range(r - 1):
        for c in range(dim):
            row = [ZERO] * total
            for j, p in enumerate(blocks[k]):
                row[offsets[k] + j] = p[c]
            for j, p in enumerate(blocks[k + 1]):
                row[offsets[k + 1] + j] = -p[c]
            rows.append(row)
            rhs.append(ZERO)
    return rows, rhs


def _coerce_blocks(blocks, dim=None):
    coerced = []
    for block in blocks:
        coerced.append([as_point(p) for p in block])
    if dim is None:
        for block in coerced:
            if block:
                dim = len(block[0])
                break
    if dim is None:
        raise InputError("cannot infer dimension from empty blocks")
    for block in coerced:
        for p in block:
            if len(p) != dim:
                raise InputError("blocks contain points of mixed dimension")
    return coerced, dim


def hulls_common_point(blocks, dim=None) -> FeasibilityOutcome:
    """Decide exactly whether the convex hulls of the blocks intersect.

    Feasible outcomes carry a witness point with per-block convex
    coefficients; infeasible outcomes carry a replayable certificate.
    """
    blocks, dim = _coerce_blocks(blocks, dim)
    if not blocks:
        raise InputError("need at least one block")
    for k, block in enumerate(blocks):
        if not block:
            return FeasibilityOutcome(
                "infeasible", certificate=EmptyBlockCertificate(block_index=k + 1)
            )
    rows, rhs = intersection_system(blocks, dim)
    status, payload = solve_equality_feasibility(rows, rhs)
    if status == "feasible":
        coeffs = []
        pos = 0
        for block in blocks:
            coeffs.append(tuple(payload[pos : pos + len(block)]))
            pos += len(block)
        point = _combination(blocks[0], coeffs[0], dim)
        return FeasibilityOutcome(
            "feasible", witness=Witness(point=point, coefficients=tuple(coeffs))
        )
    return FeasibilityOutcome(
        "infeasible",
        certificate=FarkasCertificate(multipliers=_normalize_multipliers(payload)),
    )


def _combination(block, coeffs, dim) -> Point:
    acc = [ZERO] * dim
    for p, lam in zip(block, coeffs):
        if lam:
            for c in range(dim):
                acc[c] += lam * p[c]
    return tuple(acc)


def hull_membership(p, S, dim=None) -> FeasibilityOutcome:
    """Decide ``p in conv(S)`` exactly.

    Feasible: convex coefficients over S reproducing p.  Infeasible: a
    hyperplane strictly separating p from every point of S.
    """
    point = as_point(p)
    if dim is None:
        dim = len(point)
    if len(point) != dim:
        raise InputError("query point has wrong dimension")
    hull = [as_point(s) for s in S]
    for s in hull:
        if len(s) != dim:
            raise InputError("hull points have mixed dimension")
    if not hull:
        return FeasibilityOutcome(
            "infeasible", certificate=EmptyBlockCertificate(block_index=1)
        )
    outcome = hulls_common_point([hull, [point]], dim)
    if outcome.feasible:
        coeffs = outcome.witness.coefficients[0]
        return FeasibilityOutcome(
            "feasible", witness=Witness(point=point, coefficients=(coeffs,))
        )
    u = outcome.certificate.multipliers
    # layout of intersection_system([S, [p]]): u = (u_S, u_p, w_1..w_d) with
    # w.s <= -u_S for all s in S and w.p >= u_p, while u_S + u_p > 0.
    u_S, u_p = u[0], u[1]
    w = tuple(u[2:])
    offset = (-u_S + u_p) / 2
    normal, offset, flipped = _normalize_separator(w, offset)
    point_side = -1 if flipped else 1
    return FeasibilityOutcome(
        "infeasible",
        certificate=SeparationCertificate(
            hyperplane=Hyperplane(normal, offset), point_side=point_side
        ),
    )


def _normalize_separator(normal, offset):
    values = list(normal) + [offset]
    scaled = _normalize_multipliers(values)
    normal, offset = scaled[:-1], scaled[-1]
    first = next((v for v in normal if v), ZERO)
    if first < 0:
        return tuple(-v for v in normal), -offset, True
    return tuple(normal), offset, False


# ---------------------------------------------------------------------------
# certificate replay


def verify_witness(blocks, witness: Witness, dim=None) -> bool:
    """Recompute every defining equality of a feasible witness, exactly."""
    blocks, dim = _coerce_blocks(blocks, dim)
    if len(witness.coefficients) != len(blocks):
        return False
    for block, coeffs in zip(blocks, witness.coefficients):
        if len(coeffs) != len(block):
            return False
        if any(c < 0 for c in coeffs):
            return False
        if sum(coeffs, ZERO) != 1:
            return False
        if _combination(block, coeffs, dim) != tuple(witness.point):
            return False
    return True


def verify_farkas(blocks, certificate: FarkasCertificate, dim=None) -> bool:
    """Replay Farkas multipliers against the canonical intersection system."""
    blocks, dim = _coerce_blocks(blocks, dim)
    rows, rhs = intersection_system(blocks, dim)
    u = certificate.multipliers
    if len(u) != len(rows):
        return False
    total = len(rows[0]) if rows else 0
    for j in range(total):
        col = sum((u[i] * rows[i][j] for i in range(len(rows))), ZERO)
        if col > 0:
            return False
    return sum((u[i] * rhs[i] for i in range(len(rows))), ZERO) > 0


def verify_separation(p, S, certificate: SeparationCertificate) -> bool:
    h = certificate.hyperplane
    side = certificate.point_side
    if side not in (-1, 1):
        return False
    if h.side_of(p) != side:
        return False
    return all(h.side_of(s) == -side for s in S)


def verify_outcome(blocks, outcome: FeasibilityOutcome, dim=None) -> bool:
    """Replay whichever evidence an outcome carries."""
    if outcome.feasible:
        return outcome.witness is not None and verify_witness(
            blocks, outcome.witness, dim
        )
    cert = outcome.certificate
    if isinstance(cert, EmptyBlockCertificate):
        k = cert.block_index
        return 1 <= k <= len(blocks) and len(blocks[k - 1]) == 0
    if isinstance(cert, FarkasCertificate):
        return verify_farkas(blocks, cert, dim)
    if isinstance(cert, SeparationCertificate):
        # only produced by hull_membership: blocks = [S, [p]]
        if len(blocks) != 2 or len(blocks[1]) != 1:
            return False
        return verify_separation(blocks[1][0], blocks[0], cert)
    return False


# ---------------------------------------------------------------------------
# d = 1 interval logic (shared fast path; equivalence with the LP is tested)


def intervals_common_point(blocks) -> Optional[Rational]:
    """Common point of 1-d hulls, or None; blocks are value sequences."""
    lo = None
    hi = None
    for block in blocks:
        if not block:
            return None
        bmin = min(block)
        bmax = max(block)
        lo = bmin if lo is None or bmin > lo else lo
        hi = bmax if hi is None or bmax < hi else hi
    return lo if lo <= hi else None


# ---------------------------------------------------------------------------
# Tukey depth and centerpoint verification


@dataclass(frozen=True)
class DepthReport:
    """Tukey depth of a point with a minimizing closed halfspace.

    The witness halfspace is ``{x : normal . x >= offset}`` (the closed
    positive side of ``witness_halfspace``); it contains the query point and
    exactly ``depth`` points of the set.
    """

    point: Point
    depth: int
    witness_halfspace: Hyperplane


def tukey_depth(p, X: PointSet) -> DepthReport:
    """Minimum over closed halfspaces containing p of ``|X ∩ halfspace|``.

    Requires general position: no dim+1 points of X (nor of X with p
    adjoined, apart from an exact copy of p inside X) on a common
    hyperplane.  Degenerate inputs are refused, never perturbed.

    In general position the minimum is realized by perturbing a hyperplane
    through p spanned by p and dim-1 points of X; the finite scan below
    walks exactly those spanned hyperplanes and counts strict sides, adding
    the exact copies of p which no halfspace through p can avoid.
    """
    d = X.dim
    point = as_point(p)
    if len(point) != d:
        raise InputError("query point has wrong dimension")
    if not in_general_position(X):
        raise DegenerateInputError("point set is not in general position")
    if not in_general_position(X, extra=point):
        raise DegenerateInputError(
            "query point is affinely degenerate with the point set"
        )
    copies = sum(1 for q in X.points if q == point)
    others = [q for q in X.points if q != point]

    if len(others) <= d - 1:
        # all remaining points can be pushed strictly off any halfspace
        # through p (they are affinely independent with p here)
        w = _pushing_direction(point, others, d)
        witness = Hyperplane(tuple(-v for v in w), -dot(w, point))
        return DepthReport(point=point, depth=copies, witness_halfspace=witness)

    best = None  # (count, spanning subset, side)
    for combo in itertools.combinations(range(len(others)), d - 1):
        spanning = [others[i] for i in combo]
        boundary = hyperplane_through([point] + spanning, d) if d > 1 else None
        if d == 1:
            neg = sum(1 for q in others if q[0] < point[0])
            pos = sum(1 for q in others if q[0] > point[0])
        else:
            values = [boundary.evaluate(q) for q in others]
            neg = sum(1 for v in values if v < 0)
            pos = sum(1 for v in values if v > 0)
        for count, side in ((neg, -1), (pos, 1)):
            if best is None or count < best[0]:
                best = (count, combo, side)
    count, combo, side = best
    spanning = [others[i] for i in combo]
    witness = _depth_witness(point, spanning, others, side, d)
    return DepthReport(point=point, depth=copies + count, witness_halfspace=witness)


def _pushing_direction(point, targets, d):
    """A direction w with ``w . (q - point) = 1`` for every target q."""
    if not targets:
        return tuple([ONE] + [ZERO] * (d - 1))
    rows = [[q[c] - point[c] for c in range(d)] for q in targets]
    return _solve_underdetermined(rows, [ONE] * len(targets), d)


def _solve_underdetermined(rows, rhs, d):
    """One exact solution of a full-row-rank system (free variables at 0)."""
    m = len(rows)
    aug = [list(rows[i]) + [rhs[i]] for i in range(m)]
    pivot_cols = []
    rank = 0
    for col in range(d):
        pivot_row = None
        for r in range(rank, m):
            if aug[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        aug[rank], aug[pivot_row] = aug[pivot_row], aug[rank]
        piv = aug[rank][col]
        aug[rank] = [v / piv for v in aug[rank]]
        for r in range(m):
            if r != rank and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[rank])]
        pivot_cols.append(col)
        rank += 1
    if rank < m:
        raise DegenerateInputError("pushing system is rank deficient")
    x = [ZERO] * d
    for r, col in enumerate(pivot_cols):
        x[col] = aug[r][-1]
    return tuple(x)


def _depth_witness(point, spanning, others, side, d):
    """Perturb the spanned hyperplane so its closed negative side realizes
    the strict count: spanning points move strictly out, no strict side
    changes."""
    if d == 1:
        w0 = (ONE,) if side == -1 else (-ONE,)
        # no spanning points at d=1; w0 already generic for others != point
        w = w0
    else:
        base = hyperplane_through([point] + spanning, d)
        w0 = base.normal if side == -1 else tuple(-v for v in base.normal)
        u = _pushing_direction(point, spanning, d)
        eps = None
        for q in others:
            g = dot(w0, q) - dot(w0, point)
            if g == 0:
                continue
            h = dot(u, q) - dot(u, point)
            if h:
                bound = abs(g) / (2 * abs(h))
                eps = bound if eps is None or bound < eps else eps
        if eps is None:
            eps = ONE
        w = tuple(a + eps * b for a, b in zip(w0, u))
    # closed halfspace {w . x <= w . point}; report its positive-side form
    return Hyperplane(tuple(-v for v in w), -dot(w, point))


def verify_centerpoint(p, X: PointSet) -> bool:
    """True iff the point's Tukey depth reaches ``ceil(n / (dim + 1))``."""
    report = tukey_depth(p, X)
    n = len(X)
    return report.depth >= -(-n // (X.dim + 1))
