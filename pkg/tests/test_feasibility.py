import random

import pytest

from oracles import (
    hulls_intersect_2d,
    interval_common_point,
    seeded_general_position_points,
    tukey_depth_1d,
    tukey_depth_2d,
)
from tverlab.errors import DegenerateInputError
from tverlab.feasibility import (
    EmptyBlockCertificate,
    FarkasCertificate,
    SeparationCertificate,
    hull_membership,
    hulls_common_point,
    intervals_common_point,
    solve_equality_feasibility,
    tukey_depth,
    verify_centerpoint,
    verify_outcome,
    verify_separation,
    verify_witness,
)
from tverlab.kernel import Hyperplane, PointSet, Rational


def blocks_1d(*groups):
    return [[(Rational(v),) for v in g] for g in groups]


class TestSimplexCore:
    def test_trivially_feasible(self):
        status, x = solve_equality_feasibility([[1, 1]], [1])
        assert status == "feasible"
        assert x[0] + x[1] == 1 and all(v >= 0 for v in x)

    def test_infeasible_with_farkas(self):
        # x1 + x2 = 1 and x1 + x2 = 2 cannot both hold
        rows = [[1, 1], [1, 1]]
        rhs = [1, 2]
        status, u = solve_equality_feasibility(rows, rhs)
        assert status == "infeasible"
        for j in range(2):
            assert sum(u[i] * rows[i][j] for i in range(2)) <= 0
        assert sum(u[i] * rhs[i] for i in range(2)) > 0

    def test_negative_rhs_flip(self):
        status, x = solve_equality_feasibility([[-1]], [-3])
        assert status == "feasible" and x[0] == 3

    def test_degenerate_cycling_guard(self):
        # Klee-Minty-ish degenerate system still terminates under Bland
        rows = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]
        rhs = [0, 0, 0]
        status, x = solve_equality_feasibility(rows, rhs)
        assert status == "feasible"


class TestHullMembership:
    def test_simplex_centroid_uniform(self):
        for d in (1, 2, 3):
            verts = []
            for i in range(d + 1):
                v = [0] * d
                if i:
                    v[i - 1] = 1
                verts.append(tuple(v))
            centroid = tuple(Rational(1, d + 1) * sum(v[c] for v in verts) for c in range(d))
            out = hull_membership(centroid, verts)
            assert out.feasible
            assert all(c == Rational(1, d + 1) for c in out.witness.coefficients[0])

    def test_outside_point_separator(self):
        out = hull_membership((2, 0), [(0, 0), (1, 0), (0, 1)])
        assert not out.feasible
        cert = out.certificate
        assert isinstance(cert, SeparationCertificate)
        assert verify_separation((2, 0), [(0, 0), (1, 0), (0, 1)], cert)
        # the x = 3/2 separator is itself valid for this instance
        pinned = SeparationCertificate(
            hyperplane=Hyperplane([1, 0], Rational(3, 2)), point_side=1
        )
        assert verify_separation((2, 0), [(0, 0), (1, 0), (0, 1)], pinned)

    def test_vertex_membership_unit_coefficient(self):
        verts = [(0, 0), (1, 0), (0, 1)]
        out = hull_membership((0, 1), verts)
        assert out.feasible
        assert sorted(out.witness.coefficients[0]) == [0, 0, 1]

    def test_empty_hull(self):
        out = hull_membership((1,), [])
        assert not out.feasible
        assert isinstance(out.certificate, EmptyBlockCertificate)

    def test_separator_normal_sign_canonical(self):
        out = hull_membership((-2, 0), [(0, 0), (1, 0), (0, 1)])
        cert = out.certificate
        first = next(v for v in cert.hyperplane.normal if v)
        assert first > 0  # flips recorded in point_side instead


class TestHullsCommonPoint:
    def test_crossing_diagonals(self):
        out = hulls_common_point([[(0, 0), (1, 1)], [(1, 0), (0, 1)]])
        assert out.feasible
        assert out.witness.point == (Rational(1, 2), Rational(1, 2))

    def test_disjoint_intervals(self):
        blocks = blocks_1d([0, 1], [2, 3])
        out = hulls_common_point(blocks)
        assert not out.feasible
        assert isinstance(out.certificate, FarkasCertificate)
        assert verify_outcome(blocks, out)

    def test_d1_alternating_three_blocks(self):
        blocks = blocks_1d([1, 4], [2, 5], [3])
        out = hulls_common_point(blocks)
        assert out.feasible and out.witness.point == (3,)

    def test_empty_block_convention(self):
        out = hulls_common_point([[(0, 0)], []], dim=2)
        assert not out.feasible
        assert out.certificate.block_index == 2

    def test_witness_replays(self):
        blocks = [[(0, 0), (2, 0), (1, 2)], [(1, 0), (0, 2), (2, 2)]]
        out = hulls_common_point(blocks)
        assert out.feasible and verify_witness(blocks, out.witness)

    def test_farkas_multipliers_are_coprime_integers(self):
        out = hulls_common_point(blocks_1d([0, 1], [5, 6]))
        u = out.certificate.multipliers
        import math

        assert all(v.denominator == 1 for v in u)
        g = 0
        for v in u:
            g = math.gcd(g, abs(int(v)))
        assert g == 1


class TestOracleEquivalence:
    def test_d1_alternating_exhaustive(self):
        # all alternating partitions, n <= 12, r <= 4, against interval logic
        for r in range(1, 5):
            for n in range(r, 13):
                values = list(range(1, n + 1))
                groups = [[Rational(v) for v in values[i::r]] for i in range(r)]
                blocks = [[(v,) for v in g] for g in groups]
                expect = interval_common_point(groups) is not None
                out = hulls_common_point(blocks, dim=1)
                assert out.feasible == expect, (n, r)
                assert verify_outcome(blocks, out, 1)
                fast = intervals_common_point(groups)
                assert (fast is not None) == expect

    def test_d2_r2_radon_style_oracle(self):
        rng = random.Random(3)
        for trial in range(60):
            na, nb = rng.randint(1, 4), rng.randint(1, 4)
            A = [(rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(na)]
            B = [(rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(nb)]
            blocks = [[tuple(map(Rational, p)) for p in A], [tuple(map(Rational, p)) for p in B]]
            out = hulls_common_point(blocks, dim=2)
            assert out.feasible == hulls_intersect_2d(blocks[0], blocks[1]), (A, B)
            assert verify_outcome(blocks, out, 2)

    def test_monotone_under_block_growth(self):
        # adding a point to a block never turns feasible into infeasible
        rng = random.Random(5)
        for trial in range(30):
            blocks = [
                [(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))]
                for _ in range(rng.randint(2, 3))
            ]
            out = hulls_common_point(blocks, dim=2)
            if not out.feasible:
                continue
            grown = [list(b) for b in blocks]
            grown[rng.randrange(len(grown))].append(
                (rng.randint(-5, 5), rng.randint(-5, 5))
            )
            assert hulls_common_point(grown, dim=2).feasible


class TestTukeyDepth:
    def test_d1_examples(self):
        X = PointSet(1, [(i,) for i in range(1, 6)])
        rep = tukey_depth((3,), X)
        assert rep.depth == 3
        assert rep.witness_halfspace.side_of((3,)) >= 0
        assert sum(1 for q in X.points if rep.witness_halfspace.side_of(q) >= 0) == 3
        assert tukey_depth((1,), X).depth == 1

    def test_far_outside(self):
        X = PointSet(2, [(0, 0), (1, 0), (0, 1)])
        assert tukey_depth((10, 10), X).depth == 0

    def test_triangle_centroid(self):
        X = PointSet(2, [(0, 0), (1, 0), (0, 1)])
        rep = tukey_depth((Rational(1, 3), Rational(1, 3)), X)
        assert rep.depth == 1
        h = rep.witness_halfspace
        assert h.side_of((Rational(1, 3), Rational(1, 3))) >= 0
        assert sum(1 for q in X.points if h.side_of(q) >= 0) == 1

    def test_witness_invariant_random(self):
        for seed in range(10):
            X = seeded_general_position_points(seed, 7, 2)
            p = X.points[seed % 7]
            rep = tukey_depth(p, X)
            h = rep.witness_halfspace
            assert h.side_of(p) >= 0
            assert sum(1 for q in X.points if h.side_of(q) >= 0) == rep.depth

    def test_matches_direction_scan_oracle_d2(self):
        for seed in range(12):
            X = seeded_general_position_points(seed, 6, 2)
            # interior-ish query: one of the points, and a midpoint-free spot
            p = X.points[0]
            assert tukey_depth(p, X).depth == tukey_depth_2d(p, X.points)

    def test_matches_cut_scan_oracle_d1(self):
        rng = random.Random(2)
        for _ in range(20):
            vals = rng.sample(range(-20, 20), 7)
            X = PointSet(1, [(v,) for v in vals])
            p = Rational(rng.randint(-22, 22))
            assert tukey_depth((p,), X).depth == tukey_depth_1d(p, vals)

    def test_degenerate_rejected(self):
        X = PointSet(2, [(0, 0), (1, 1), (2, 2), (5, 0)])
        with pytest.raises(DegenerateInputError):
            tukey_depth((0, 1), X)
        # p on a segment of X at d=2 is degenerate with the set
        Y = PointSet(2, [(0, 0), (2, 0), (1, 5)])
        with pytest.raises(DegenerateInputError):
            tukey_depth((1, 0), Y)


class TestCenterpoint:
    def test_d1_examples(self):
        X = PointSet(1, [(i,) for i in range(1, 6)])
        assert verify_centerpoint((3,), X)
        assert not verify_centerpoint((1,), X)

    def test_triangle_vertex_boundary_case(self):
        # ceil(3/3) = 1 and a vertex has depth exactly 1
        X = PointSet(2, [(0, 0), (1, 0), (0, 1)])
        assert verify_centerpoint((0, 0), X)

    def test_moment_curve_centerpoint_exists_somewhere(self):
        from tverlab.ordertype import MomentSpec, moment_points

        X = moment_points(MomentSpec(2, range(1, 8)))
        depths = [tukey_depth(p, X).depth for p in X.points]
        assert max(depths) >= 1
