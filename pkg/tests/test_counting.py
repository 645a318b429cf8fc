import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fqdilate.counting import (count_tuple_family,
                               dilated_count_lower_bound, offset_counts,
                               offset_power_sum, verify_chain)
from fqdilate.errors import GuardExceededError
from fqdilate.field import field_make, squares_nonzero
from fqdilate.geometry import Point, PointSet, full_space
from fqdilate.orthogonal import enumerate_orthogonal, group_order
from fqdilate.search import EdgeSet, count_dilated_tuples, edges_path
from fqdilate.experiment import sample_subset, trial_rng


F5 = field_make(5)
F3 = field_make(3)


def seeded_set(spec, d, size, seed):
    return sample_subset(spec, d, size, trial_rng(seed, size, 0))


class TestOffsetCounts:
    def test_singleton(self):
        E = PointSet.from_ranks(F5, 2, [0])
        theta = enumerate_orthogonal(F5, 2)[0]
        table = offset_counts(E, F5(4), theta)
        assert table.count_at(Point.from_rank(F5, 2, 0)) == 1
        assert table.total() == 1
        assert table.nonzero_values() == [1]

    def test_total_is_size_squared(self):
        E = seeded_set(F5, 2, 7, 1)
        for theta in enumerate_orthogonal(F5, 2):
            assert offset_counts(E, F5(1), theta).total() == 49

    def test_full_plane_is_flat(self):
        E = full_space(F3, 2)
        theta = enumerate_orthogonal(F3, 2)[2]
        table = offset_counts(E, F3(1), theta)
        values = table.nonzero_values()
        assert len(values) == 9 and set(values) == {9}

    def test_rejects_zero_and_nonsquare_ratio(self):
        E = seeded_set(F5, 2, 4, 0)
        theta = enumerate_orthogonal(F5, 2)[0]
        with pytest.raises(ValueError):
            offset_counts(E, F5(0), theta)
        with pytest.raises(ValueError):
            offset_counts(E, F5(2), theta)  # 2 is not a square mod 5

    @given(st.integers(2, 10), st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_value_bound(self, size, seed):
        E = seeded_set(F5, 2, size, seed)
        theta = enumerate_orthogonal(F5, 2)[1]
        table = offset_counts(E, F5(4), theta)
        assert all(1 <= v <= len(E) for v in table.nonzero_values())
        assert table.total() == len(E) ** 2


class TestPowerSums:
    def test_exponent_one_identity(self):
        E = seeded_set(F5, 2, 6, 3)
        assert offset_power_sum(E, F5(4), 1) == group_order(F5, 2) * 36

    def test_singleton(self):
        E = PointSet.from_ranks(F5, 2, [7])
        for p in (1, 2, 3):
            assert offset_power_sum(E, F5(1), p) == group_order(F5, 2)

    def test_matches_aligned_family(self):
        E = seeded_set(F5, 2, 6, 0)
        r = F5(4)
        for k in (1, 2):
            total = sum(
                count_tuple_family(E, r, theta, k, "aligned")
                for theta in enumerate_orthogonal(F5, 2)
            )
            assert offset_power_sum(E, r, k + 1) == total


class TestTupleFamilies:
    @pytest.mark.parametrize("k", [1, 2])
    def test_closed_matches_direct(self, k):
        E = seeded_set(F5, 2, 5, 11)
        r = F5(1)
        theta = enumerate_orthogonal(F5, 2)[5]
        for family in ("aligned", "aligned-distinct"):
            closed = count_tuple_family(E, r, theta, k, family)
            direct = count_tuple_family(E, r, theta, k, family, method="direct")
            assert closed == direct

    def test_collapsed_independent_of_pair(self):
        E = seeded_set(F5, 2, 6, 2)
        r = F5(4)
        theta = enumerate_orthogonal(F5, 2)[3]
        k = 2
        values = {
            count_tuple_family(E, r, theta, k, "pair-collapsed", pair=(a, b))
            for a, b in itertools.combinations(range(1, k + 2), 2)
        }
        table = offset_counts(E, r, theta)
        assert values == {table.power_sum(k)}

    def test_collapsed_matches_direct(self):
        E = seeded_set(F5, 2, 5, 4)
        theta = enumerate_orthogonal(F5, 2)[1]
        closed = count_tuple_family(E, F5(4), theta, 1, "pair-collapsed", pair=(1, 2))
        direct = count_tuple_family(E, F5(4), theta, 1, "pair-collapsed",
                                    pair=(1, 2), method="direct")
        assert closed == direct

    @pytest.mark.parametrize("edges", [
        EdgeSet(2, [(1, 2)]),
        EdgeSet(2, [(1, 2), (2, 3)]),
        EdgeSet(2, [(1, 2), (1, 3), (2, 3)]),
    ])
    def test_edge_aligned_matches_direct(self, edges):
        E = seeded_set(F3, 2, 5, 9)
        r = F3(1)
        theta = enumerate_orthogonal(F3, 2)[4]
        closed = count_tuple_family(E, r, theta, edges.k, "edge-aligned", edges=edges)
        direct = count_tuple_family(E, r, theta, edges.k, "edge-aligned",
                                    edges=edges, method="direct")
        assert closed == direct

    def test_singleton_counts(self):
        E = PointSet.from_ranks(F5, 2, [3])
        theta = enumerate_orthogonal(F5, 2)[0]
        assert count_tuple_family(E, F5(1), theta, 1, "aligned") == 1
        assert count_tuple_family(E, F5(1), theta, 1, "aligned-distinct") == 0

    def test_set_difference_identity(self):
        # distinct-v tuples = aligned tuples minus the union of collapsed
        # pair families, verified by classifying every tuple directly
        E = seeded_set(F5, 2, 4, 8)
        r = F5(4)
        theta = enumerate_orthogonal(F5, 2)[2]
        k = 1
        n = len(E)
        aligned = []
        from fqdilate import _ranks
        from fqdilate.counting import _offset_vector_ranks
        calc = _ranks.point_calc(F5, 2)
        ranks = E.ranks()
        w = _offset_vector_ranks(E, r, theta)
        du = calc.sub(ranks[:, None], ranks[None, :])
        dw = calc.sub(w[:, None], w[None, :])
        for us in itertools.product(range(n), repeat=k + 1):
            for vs in itertools.product(range(n), repeat=k + 1):
                if all(du[us[i], us[j]] == dw[vs[i], vs[j]]
                       for i in range(k + 1) for j in range(i + 1, k + 1)):
                    aligned.append((us, vs))
        collapsed = [t for t in aligned
                     if any(t[1][i] == t[1][j]
                            for i in range(k + 1) for j in range(i + 1, k + 1))]
        assert (count_tuple_family(E, r, theta, k, "aligned-distinct")
                == len(aligned) - len(collapsed))

    def test_direct_guard(self):
        E = seeded_set(F5, 2, 25, 0)
        theta = enumerate_orthogonal(F5, 2)[0]
        with pytest.raises(GuardExceededError):
            count_tuple_family(E, F5(1), theta, 3, "aligned", method="direct")

    def test_bad_arguments(self):
        E = seeded_set(F5, 2, 4, 0)
        theta = enumerate_orthogonal(F5, 2)[0]
        with pytest.raises(ValueError):
            count_tuple_family(E, F5(1), theta, 1, "nonsense")
        with pytest.raises(ValueError):
            count_tuple_family(E, F5(1), theta, 1, "edge-aligned")
        with pytest.raises(ValueError):
            count_tuple_family(E, F5(1), theta, 1, "pair-collapsed", pair=(2, 2))


class TestLowerBound:
    def test_frozen_examples(self):
        assert dilated_count_lower_bound(18, 9, 2, 1) == Fraction(486)
        assert dilated_count_lower_bound(9, 9, 2, 1) == Fraction(-243, 2)

    def test_monotone_in_size(self):
        values = [dilated_count_lower_bound(n, 7, 2, 2) for n in range(2, 60)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_positive_at_threshold(self):
        import math
        for k in (1, 2, 3):
            for d in (2, 3):
                for q in (3, 5, 7, 9):
                    size = math.isqrt(4 * k * k * q**d)
                    if size * size < 4 * k * k * q**d:
                        size += 1  # ceil of 2k q^(d/2)
                    assert dilated_count_lower_bound(size, q, d, k) > 0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            dilated_count_lower_bound(0, 5, 2, 1)


class TestVerifyChain:
    def test_spec_instance_passes(self):
        E = seeded_set(F5, 2, 6, 0)
        report = verify_chain(E, F5(4), edges_path(1))
        assert report.passed
        assert report.group_order == 8
        assert report.power_sum_top == report.aligned_total

    def test_singleton_vacuous(self):
        E = PointSet.from_ranks(F5, 2, [11])
        report = verify_chain(E, F5(1), edges_path(1))
        assert report.passed
        assert report.dilated_count == 0
        assert report.theorem_bound < 0

    def test_full_tiny_plane(self):
        E = full_space(F3, 2)
        report = verify_chain(E, F3(1), edges_path(1))
        assert report.passed
        assert report.dilated_count > 0

    def test_extension_field_instance(self):
        F9 = field_make(3, 2)
        E = seeded_set(F9, 2, 7, 5)
        r = sorted(squares_nonzero(F9), key=lambda e: e.rank)[2]
        report = verify_chain(E, r, EdgeSet(2, [(1, 2), (1, 3), (2, 3)]))
        assert report.passed

    def test_report_consistency(self):
        E = seeded_set(F5, 2, 5, 7)
        report = verify_chain(E, F5(1), edges_path(2))
        # the two split halves reassemble the full inequality
        binom = report.k * (report.k + 1) // 2
        assert (report.split_high + report.split_low
                == report.power_sum_top - binom * report.power_sum_low)
        assert report.dilated_count == count_dilated_tuples(E, F5(1), edges_path(2))
        d = report.to_dict()
        assert d["passed"] is True
