"""Certified counterexample search for the alternating threshold c(d,r).

c(d,r) is the least n such that the alternating partition of EVERY
order-type homogeneous n-point set in R^d has a common point.  A single
moment-curve configuration whose alternating partition is infeasible is
therefore a certified witness that c(d,r) exceeds its size; the search below
streams candidate parameter lists, decides each one with the exact
feasibility engine, and returns the infeasibility certificate together with
the configuration.

Two facts shape the design:

* ``none-found`` is only evidence, never proof, for d >= 2: whether the
  hulls meet depends on the parameter values, not just the order type, so
  sampling cannot establish universal statements.  Dimension one is the
  exception: there the alternating partition of n increasing values has a
  common point iff n >= 2r - 1 regardless of the values, so d=1 results are
  computed directly and labeled exact.
* the one known nontrivial counterexample shape is "a few tight clusters
  plus a spread tail"; the clustered strategy generalizes it.  Repeated
  parameters a, a, a are perturbed to a, a+eps, a+2eps, and eps is halved
  until the infeasibility actually verifies, since emptiness is only
  preserved for small enough perturbations.

Every candidate stream is fully deterministic given (kind, params, seed),
and candidates are evaluated in stream order, so identical invocations
yield identical results.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Optional, Sequence, Tuple

from .errors import InputError, ResourceGuardError
from .feasibility import (
    FeasibilityOutcome,
    hulls_common_point,
    verify_outcome,
)
from .kernel import PointSet, Rational, to_rational
from .ordertype import MomentSpec, is_order_homogeneous, moment_points
from .tolerance import set_tolerance

#: Known 16-parameter configuration whose alternating 4-partition in R^3 has
#: no common point once the repeats are split; witnesses c(3,4) >= 17.
SIXTEEN_POINT_PARAMS = (-4, -3, -2, -2, -2, -1, -1, -1, 0, 1, 2, 6, 6, 7, 8, 9)

#: Starting perturbation step for splitting repeated parameters.
DEFAULT_EPSILON = Rational(1, 1000)

#: Guard for exhaustive d=1 tolerance tables.
T_LINE_GUARD = 14


@dataclass(frozen=True)
class SearchStrategy:
    """Deterministic candidate stream specification.

    kind:
      * ``clustered``: a few tight clusters plus a spread tail (seeded);
      * ``grid``: strictly increasing integer-grid tuples, enumerated in a
        fixed order with no randomness;
      * ``random-rational``: seeded rationals with bounded denominator.
    """

    kind: str
    seed: int = 0
    cluster_count: Optional[int] = None  # clustered; defaults to r - 1
    spread: int = 4  # clustered: range multiplier for centers and tail
    epsilon: Rational = DEFAULT_EPSILON  # clustered: repeat-splitting step
    grid_step: Rational = Rational(1)  # grid spacing
    denominator_bound: int = 6  # random-rational
    value_bound: int = 12  # random-rational numerator range

    def __post_init__(self):
        if self.kind not in ("clustered", "grid", "random-rational"):
            raise InputError(f"unknown strategy kind: {self.kind!r}")


def split_repeats(values: Sequence, epsilon) -> Tuple[Rational, ...]:
    """Replace each run of equal values a, a, ... by a, a+eps, a+2eps."""
    eps = to_rational(epsilon)
    vals = [to_rational(v) for v in values]
    out = []
    run_start = 0
    for i, v in enumerate(vals):
        if i and v != vals[i - 1]:
            run_start = i
        out.append(v + (i - run_start) * eps)
    return tuple(out)


def alpha_candidates(strategy: SearchStrategy, n: int, r: int) -> Iterator[Tuple[Rational, ...]]:
    """Infinite stream of strictly increasing parameter tuples of length n."""
    if strategy.kind == "grid":
        yield from _grid_candidates(strategy, n)
    elif strategy.kind == "clustered":
        yield from _clustered_candidates(strategy, n, r)
    else:
        yield from _random_rational_candidates(strategy, n)


def _grid_candidates(strategy: SearchStrategy, n: int) -> Iterator[Tuple[Rational, ...]]:
    step = to_rational(strategy.grid_step)
    width = n
    while True:
        lo = -(width // 2)
        for combo in itertools.combinations(range(width), n):
            # only tuples that use both ends are new at this width
            if width > n and (combo[0] != 0 or combo[-1] != width - 1):
                continue
            yield tuple((lo + c) * step for c in combo)
        width += 1


def _clustered_candidates(strategy: SearchStrategy, n: int, r: int) -> Iterator[Tuple[Rational, ...]]:
    rng = random.Random(strategy.seed)
    clusters = strategy.cluster_count if strategy.cluster_count is not None else max(1, r - 1)
    eps = to_rational(strategy.epsilon)
    span = max(2 * n, strategy.spread * n)
    while True:
        k = min(clusters, n)
        # sizes: clusters get 2..d+1-ish points, the tail takes the rest
        sizes = []
        remaining = n
        for i in range(k):
            hi = max(1, min(remaining - (k - 1 - i), n // k + 2))
            s = rng.randint(1, hi)
            sizes.append(s)
            remaining -= s
        tail = remaining
        centers = sorted(rng.sample(range(-span, span + 1), k + tail))
        values = []
        for c, s in zip(centers[:k], sizes):
            values.extend([c] * s)
        values.extend(centers[k:])
        values.sort()
        yield split_repeats(values, eps)


def _random_rational_candidates(strategy: SearchStrategy, n: int) -> Iterator[Tuple[Rational, ...]]:
    rng = random.Random(strategy.seed)
    bound = strategy.value_bound
    dbound = strategy.denominator_bound
    while True:
        seen = set()
        while len(seen) < n:
            num = rng.randint(-bound, bound)
            den = rng.randint(1, dbound)
            seen.add(Rational(num, den))
        yield tuple(sorted(seen))


@dataclass(frozen=True)
class Counterexample:
    """A certified configuration whose alternating partition has no common point."""

    dim: int
    r: int
    alphas: Tuple[Rational, ...]
    outcome: FeasibilityOutcome

    @property
    def n(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class NoneFound:
    """Search exhausted its budget; exact=True only at d=1 (direct computation)."""

    dim: int
    r: int
    n: int
    tried: int
    exact: bool


def alternating_blocks(X: PointSet, r: int):
    pts = X.points
    blocks = [[] for _ in range(r)]
    for j, p in enumerate(pts):
        blocks[j % r].append(p)
    return blocks


def evaluate_alternating(alphas: Sequence, dim: int, r: int) -> FeasibilityOutcome:
    """Feasibility of the alternating r-partition of the moment configuration."""
    spec = MomentSpec(dim, alphas)
    X = moment_points(spec)
    return hulls_common_point(alternating_blocks(X, r), dim)


def _certify(dim, r, alphas, outcome) -> Counterexample:
    X = moment_points(MomentSpec(dim, alphas))
    homog = is_order_homogeneous(X)
    if not (homog.homogeneous and (homog.sign == 1 or homog.trivial)):
        raise AssertionError("candidate configuration is not order-type homogeneous")
    if not verify_outcome(alternating_blocks(X, r), outcome, dim):
        raise AssertionError("counterexample certificate failed to replay")
    return Counterexample(dim=dim, r=r, alphas=tuple(alphas), outcome=outcome)


def find_counterexample(
    d: int,
    r: int,
    n: int,
    strategy: Optional[SearchStrategy] = None,
    budget: int = 1000,
):
    """Search for an n-point moment configuration breaking the alternating
    partition; returns a :class:`Counterexample` or :class:`NoneFound`.

    With n < r the alternating blocks cannot all be inhabited, so any
    configuration is trivially a counterexample (conv(emptyset) = emptyset).
    At d=1 feasibility of the alternating partition does not depend on the
    parameter values, so one canonical evaluation decides exactly.
    """
    if n < 1:
        raise InputError(f"need n >= 1, got n={n}")
    if n < r:
        outcome = evaluate_alternating(range(1, n + 1), d, r)
        assert not outcome.feasible
        return _certify(d, r, [Rational(i) for i in range(1, n + 1)], outcome)
    if d == 1:
        outcome = evaluate_alternating(range(1, n + 1), 1, r)
        if outcome.feasible:
            return NoneFound(dim=1, r=r, n=n, tried=1, exact=True)
        return _certify(1, r, [Rational(i) for i in range(1, n + 1)], outcome)
    if strategy is None:
        strategy = SearchStrategy(kind="clustered", seed=0)
    tried = 0
    for alphas in alpha_candidates(strategy, n, r):
        if tried >= budget:
            break
        tried += 1
        outcome = evaluate_alternating(alphas, d, r)
        if not outcome.feasible:
            return _certify(d, r, alphas, outcome)
    return NoneFound(dim=d, r=r, n=n, tried=tried, exact=False)


@dataclass(frozen=True)
class ScanResult:
    """Per-n search results; ``lower_bound`` is (max found n) + 1 <= c(d,r)."""

    dim: int
    r: int
    results: Dict[int, object]  # n -> Counterexample | NoneFound

    @property
    def lower_bound(self) -> Optional[int]:
        found = [n for n, res in self.results.items() if isinstance(res, Counterexample)]
        return max(found) + 1 if found else None


def scan_c_lower(
    d: int,
    r: int,
    n_range: Sequence[int],
    strategy: Optional[SearchStrategy] = None,
    budget: int = 1000,
    resume: Optional[Dict[int, object]] = None,
    on_result: Optional[Callable[[int, object], None]] = None,
) -> ScanResult:
    """Run :func:`find_counterexample` for each n, independently.

    ``resume`` maps n values to previously computed results (from a
    checkpoint file) which are reused verbatim; ``on_result`` is invoked
    after each newly computed n so callers can append checkpoint records.
    No monotonicity in n is assumed: each n is reported on its own.
    """
    results: Dict[int, object] = {}
    for n in n_range:
        if resume and n in resume:
            results[n] = resume[n]
            continue
        outcome = find_counterexample(d, r, n, strategy=strategy, budget=budget)
        results[n] = outcome
        if on_result is not None:
            on_result(n, outcome)
    return ScanResult(dim=d, r=r, results=results)


# ---------------------------------------------------------------------------
# the sixteen-point witness for c(3,4) > 16


def sixteen_point_alphas(epsilon=DEFAULT_EPSILON) -> Tuple[Rational, ...]:
    """The 16 moment-curve parameters with repeats split by ``epsilon``."""
    return split_repeats(SIXTEEN_POINT_PARAMS, epsilon)


def verified_sixteen_point_example(
    epsilon=DEFAULT_EPSILON, max_halvings: int = 40
) -> Tuple[Counterexample, Rational]:
    """Perturb the 16-point configuration until infeasibility verifies.

    Starts at ``epsilon`` and halves until the alternating 4-partition in
    R^3 is certified infeasible; returns the counterexample and the working
    epsilon.  Emptiness is an open condition, so some small epsilon works;
    failing every halving would signal a broken engine.
    """
    eps = to_rational(epsilon)
    for _ in range(max_halvings):
        alphas = sixteen_point_alphas(eps)
        outcome = evaluate_alternating(alphas, 3, 4)
        if not outcome.feasible:
            return _certify(3, 4, alphas, outcome), eps
        eps = eps / 2
    raise AssertionError(
        "sixteen-point configuration stayed feasible down to epsilon "
        f"{eps}; feasibility engine is suspect"
    )


# ---------------------------------------------------------------------------
# exact d = 1 tables


def t_line(n: int, r: int, guard: int = T_LINE_GUARD) -> int:
    """Exact best tolerance of n points on a line, t(n, 1, r).

    All generic n-point line sets are order-isomorphic to 1..n, so the
    exhaustive maximum on 1..n is the universal value.
    """
    if n < r:
        raise InputError(f"need n >= r, got n={n}, r={r}")
    if n > guard:
        raise ResourceGuardError(f"t_line guard is n <= {guard}, got {n}")
    X = PointSet(1, [(i,) for i in range(1, n + 1)])
    report, _ = set_tolerance(X, r, guard=guard)
    return report.value


def n_line_formula(t: int, r: int) -> int:
    """Tight d=1 count ``r (t + 2) - 1``, the exact oracle for n_line."""
    return r * (t + 2) - 1


def n_line(t: int, r: int, guard: int = T_LINE_GUARD) -> int:
    """Least n with ``t_line(n, r) >= t``; always equals r(t+2)-1.

    The closed form is re-derived from the exhaustive table on every call;
    a mismatch would mean the tolerance engine is broken.
    """
    if t < 0 or r < 1:
        raise InputError("need t >= 0 and r >= 1")
    for n in range(r, guard + 1):
        if t_line(n, r, guard=guard) >= t:
            if n != n_line_formula(t, r):
                raise AssertionError(
                    f"n_line({t},{r}) computed {n}, closed form gives "
                    f"{n_line_formula(t, r)}"
                )
            return n
    raise ResourceGuardError(
        f"n_line({t},{r}) exceeds the exhaustive guard n <= {guard}"
    )


def check_growth_inequality(d: int, r: int, t: int, n: int) -> bool:
    """Finite lower inequality ``n >= r t + r (d - 2) / 2``, checked exactly."""
    return Rational(n) >= Rational(r) * t + Rational(r * (d - 2), 2)
