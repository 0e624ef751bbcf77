import itertools
import random

import pytest

from oracles import seeded_int_points
from tverlab.errors import InputError, ResourceGuardError
from tverlab.feasibility import hulls_common_point
from tverlab.kernel import PointSet
from tverlab.ordertype import MomentSpec, moment_points
from tverlab.tolerance import (
    Partition,
    alternating_bound,
    alternating_bound_even,
    alternating_partition,
    check_tolerance_sandwich,
    iter_partitions,
    partition_tolerance,
    set_tolerance,
    tolerance_upper_bound,
)

ONE_TO = lambda n: PointSet(1, [(i,) for i in range(1, n + 1)])


def depleted_feasible(X, partition, removed):
    blocks = [
        [X.points[i - 1] for i in block if i not in removed]
        for block in partition.blocks()
    ]
    if any(not b for b in blocks):
        return False
    return hulls_common_point(blocks, X.dim).feasible


def brute_tolerance(X, partition):
    """Independent reference: plain increasing-size removal enumeration."""
    n = len(X)
    for size in range(n + 1):
        for combo in itertools.combinations(range(1, n + 1), size):
            if not depleted_feasible(X, partition, set(combo)):
                return size - 1, combo
    raise AssertionError("removing everything must break")


class TestPartition:
    def test_alternating_examples(self):
        assert alternating_partition(5, 2).blocks() == ((1, 3, 5), (2, 4))
        assert alternating_partition(16, 4).blocks() == (
            (1, 5, 9, 13),
            (2, 6, 10, 14),
            (3, 7, 11, 15),
            (4, 8, 12, 16),
        )
        assert alternating_partition(3, 3).blocks() == ((1,), (2,), (3,))

    def test_alternating_rejects_empty_blocks(self):
        with pytest.raises(InputError):
            alternating_partition(2, 3)

    def test_from_blocks_validation(self):
        with pytest.raises(InputError):
            Partition.from_blocks(3, [[1, 2]])
        with pytest.raises(InputError):
            Partition.from_blocks(3, [[1, 2], [2, 3]])
        part = Partition.from_blocks(4, [[2, 4], [1, 3]])
        assert part.blocks() == ((2, 4), (1, 3))

    def test_canonical_key(self):
        a = Partition.from_blocks(4, [[1, 3], [2, 4]])
        b = Partition.from_blocks(4, [[2, 4], [1, 3]])
        assert a.canonical_key() == b.canonical_key() == (0, 1, 0, 1)

    def test_iter_partitions_counts(self):
        # Stirling numbers of the second kind
        assert sum(1 for _ in iter_partitions(5, 2)) == 15
        assert sum(1 for _ in iter_partitions(6, 3)) == 90
        keys = [p.canonical_key() for p in iter_partitions(5, 2)]
        assert keys == sorted(keys)  # lexicographic enumeration
        assert len(set(keys)) == len(keys)

    def test_iter_partitions_min_block(self):
        got = list(iter_partitions(6, 2, min_block=3))
        assert all(min(map(len, p.blocks())) >= 3 for p in got)
        assert len(got) == 10  # C(6,3)/2 * 2 ... = 10 ways into two triples


class TestPartitionTolerance:
    def test_line_alternating_example(self):
        rep = partition_tolerance(ONE_TO(5), alternating_partition(5, 2))
        assert rep.value == 1 and rep.exhausted
        assert len(rep.breaking_set) == 2
        assert not depleted_feasible(
            ONE_TO(5), alternating_partition(5, 2), set(rep.breaking_set)
        )

    def test_square_diagonals(self):
        X = PointSet(2, [(0, 0), (1, 0), (1, 1), (0, 1)])
        part = Partition.from_blocks(4, [[1, 3], [2, 4]])
        rep = partition_tolerance(X, part)
        assert rep.value == 0 and rep.breaking_set == (1,)

    def test_base_infeasible(self):
        X = PointSet(1, [(1,), (2,), (3,), (4,)])
        part = Partition.from_blocks(4, [[1, 2], [3, 4]])
        rep = partition_tolerance(X, part)
        assert rep.value == -1 and rep.breaking_set == ()

    def test_budget_cut_reports_lower_bound(self):
        rep = partition_tolerance(ONE_TO(7), alternating_partition(7, 2), budget=1)
        assert rep.value == 1 and not rep.exhausted and rep.breaking_set is None

    def test_value_below_budget_is_exact(self):
        rep = partition_tolerance(ONE_TO(7), alternating_partition(7, 2), budget=4)
        assert rep.value == 2 and rep.exhausted

    def test_fast_path_matches_enumeration_d1(self):
        # the interval closed form must agree with brute enumeration exactly,
        # including the lexicographically-first breaking set
        rng = random.Random(9)
        for n in range(2, 8):
            for r in range(1, min(3, n) + 1):
                for _ in range(6):
                    vals = [rng.randint(0, 9) for _ in range(n)]
                    X = PointSet(1, [(v,) for v in vals])
                    labels = _random_partition_labels(rng, n, r)
                    part = Partition(n, r, labels)
                    value, combo = brute_tolerance(X, part)
                    rep = partition_tolerance(X, part)
                    assert rep.value == value
                    assert rep.breaking_set == combo

    def test_d2_matches_brute(self):
        rng = random.Random(13)
        for trial in range(10):
            X = seeded_int_points(trial, 6, 2, box=7)
            labels = _random_partition_labels(rng, 6, 2)
            part = Partition(6, 2, labels)
            value, combo = brute_tolerance(X, part)
            rep = partition_tolerance(X, part)
            assert (rep.value, rep.breaking_set) == (value, combo)

    def test_tolerance_at_most_smallest_block(self):
        rng = random.Random(17)
        for trial in range(10):
            n = rng.randint(3, 7)
            r = rng.randint(1, min(3, n))
            X = seeded_int_points(100 + trial, n, 2, box=9)
            part = Partition(n, r, _random_partition_labels(rng, n, r))
            rep = partition_tolerance(X, part)
            assert rep.value <= min(len(b) for b in part.blocks()) - 1

    def test_removal_monotonicity_exhaustive(self):
        # if Y breaks, every superset of Y breaks (exhaustive up to n = 8)
        cases = [
            (seeded_int_points(4, 6, 2, box=6), [[1, 4], [2, 5], [3, 6]]),
            (seeded_int_points(8, 8, 2, box=9), [[1, 3, 5, 7], [2, 4, 6, 8]]),
            (seeded_int_points(12, 8, 3, box=9), [[1, 4, 7], [2, 5, 8], [3, 6]]),
        ]
        for X, blocks in cases:
            n = len(X)
            part = Partition.from_blocks(n, blocks)
            breaking = {
                combo
                for size in range(n + 1)
                for combo in itertools.combinations(range(1, n + 1), size)
                if not depleted_feasible(X, part, set(combo))
            }
            for combo in breaking:
                for extra in range(1, n + 1):
                    if extra not in combo:
                        assert tuple(sorted(combo + (extra,))) in breaking


def _random_partition_labels(rng, n, r):
    while True:
        labels = [rng.randint(1, r) for _ in range(n)]
        if set(labels) == set(range(1, r + 1)):
            return labels


class TestSetTolerance:
    def test_line_examples(self):
        for n, want in ((4, 0), (5, 1), (7, 2)):
            rep, part = set_tolerance(ONE_TO(n), 2)
            assert rep.value == want

    def test_argmax_partition_achieves_value(self):
        rep, part = set_tolerance(ONE_TO(6), 2)
        direct = partition_tolerance(ONE_TO(6), part)
        assert direct.value == rep.value

    def test_matches_brute_maximum_small(self):
        for n, r, d, seed in ((5, 2, 1, 0), (6, 2, 2, 1), (6, 3, 2, 2), (5, 2, 3, 3)):
            X = (
                ONE_TO(n)
                if d == 1
                else seeded_int_points(seed, n, d, box=8)
            )
            best = max(
                brute_tolerance(X, part)[0] for part in iter_partitions(n, r)
            )
            rep, _ = set_tolerance(X, r)
            assert rep.value == best, (n, r, d)

    def test_lex_first_achiever(self):
        X = ONE_TO(5)
        rep, part = set_tolerance(X, 2)
        for candidate in iter_partitions(5, 2):
            value, _ = brute_tolerance(X, candidate)
            if value >= rep.value:
                assert candidate.canonical_key() == part.canonical_key()
                break

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            set_tolerance(ONE_TO(13), 2)
        with pytest.raises(InputError):
            set_tolerance(ONE_TO(2), 3)

    def test_moment_curve_homogeneous_prune_consistent(self):
        # the neighborliness prune must not change results (d=2, n=7)
        X = moment_points(MomentSpec(2, range(1, 8)))
        best = max(brute_tolerance(X, part)[0] for part in iter_partitions(7, 2))
        rep, _ = set_tolerance(X, 2)
        assert rep.value == best


class TestBounds:
    def test_alternating_bound_values(self):
        assert alternating_bound(3, 4) == 25
        assert alternating_bound(2, 2) == 7
        for r in range(1, 8):
            assert alternating_bound(1, r) == 2 * r - 1

    def test_even_bound_values(self):
        assert alternating_bound_even(2, 3) == 9
        assert alternating_bound_even(2, 5) == 15
        with pytest.raises(InputError):
            alternating_bound_even(3, 2)

    def test_even_bound_large_r(self):
        # for r large relative to d (above d(d+1)/2) the minimum settles at
        # d(d+1)/2 * r; below that threshold the i=0 term undercuts it
        for d in (2, 4):
            base = d * (d + 1) // 2
            for r in range(base, 13):
                assert alternating_bound_even(d, r) == base * r
        assert alternating_bound_even(4, 6) == 54  # 10*5 + s_0 with s_0 = 4

    def test_tolerance_upper_bound(self):
        assert tolerance_upper_bound(5, 1, 2) == 2
        assert tolerance_upper_bound(16, 3, 4) == 3
        assert tolerance_upper_bound(4, 6, 2) == -1


class TestSandwich:
    def test_line_seven_points(self):
        rep = check_tolerance_sandwich(ONE_TO(7), 2)
        assert rep.t_value == 2
        assert rep.lower_bound == 0 and rep.upper_bound == 3
        assert rep.lower_ok and rep.upper_ok

    def test_moment_d2_upper(self):
        X = moment_points(MomentSpec(2, range(1, 9)))
        rep = check_tolerance_sandwich(X, 2)
        assert rep.upper_bound == 3
        assert rep.upper_ok and rep.lower_ok

    def test_requires_homogeneous(self):
        X = PointSet(2, [(0, 0), (2, 0), (1, 3), (1, 1)])
        with pytest.raises(InputError):
            check_tolerance_sandwich(X, 2)

    def test_requires_enough_points(self):
        with pytest.raises(InputError):
            check_tolerance_sandwich(ONE_TO(2), 3)


class TestSuperadditivity:
    def test_separated_sets_small(self):
        # t(X1 u X2, r) >= t(X1, r) + t(X2, r) for hyperplane-separated sets
        rng = random.Random(23)
        for trial in range(6):
            n1, n2 = rng.randint(2, 4), rng.randint(2, 4)
            left = sorted(rng.sample(range(-20, -1), n1))
            right = sorted(rng.sample(range(1, 20), n2))
            X1 = PointSet(1, [(v,) for v in left])
            X2 = PointSet(1, [(v,) for v in right])
            U = PointSet(1, [(v,) for v in left + right])
            tu = set_tolerance(U, 2)[0].value
            t1 = set_tolerance(X1, 2)[0].value
            t2 = set_tolerance(X2, 2)[0].value
            assert tu >= t1 + t2
