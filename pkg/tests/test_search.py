import pytest
from hypothesis import given, settings, strategies as st

from fqdilate.errors import GuardExceededError
from fqdilate.field import field_make, sqrt, squares_nonzero
from fqdilate.geometry import Point, PointSet, full_space, norm
from fqdilate.search import (EdgeSet, count_dilated_tuples, DilatedWitness,
                             edges_all_pairs, edges_cycle, edges_path,
                             edges_star, find_congruent_tuple_translation,
                             find_dilated_pair_bruteforce,
                             find_dilated_tuple_scaling, find_witness_auto,
                             parse_edge_spec, scaling_guaranteed,
                             theorem_guaranteed, translation_guaranteed,
                             verify_witness)
from fqdilate.experiment import sample_subset, trial_rng

F5 = field_make(5)
F7 = field_make(7)


def pt(spec, *ints):
    return Point(tuple(spec(i) for i in ints))


def seeded_set(spec, d, size, seed):
    return sample_subset(spec, d, size, trial_rng(seed, size, 0))


class TestEdgeSets:
    def test_path(self):
        assert edges_path(2).edges == frozenset({(1, 2), (2, 3)})
        assert edges_path(2).k == 2

    def test_star(self):
        assert edges_star(5).edges == frozenset({(1, i) for i in range(2, 7)})

    def test_cycle_normalizes_wraparound(self):
        c = edges_cycle(3)
        assert c.edges == frozenset({(1, 2), (2, 3), (1, 3)})
        assert c.k == 2  # 3 vertices

    def test_cycle_too_short(self):
        with pytest.raises(ValueError):
            edges_cycle(2)

    def test_validation(self):
        with pytest.raises(ValueError):
            EdgeSet(1, [])
        with pytest.raises(ValueError):
            EdgeSet(1, [(1, 3)])
        with pytest.raises(ValueError):
            EdgeSet(1, [(2, 2)])

    def test_normalizes_order(self):
        e = EdgeSet(2, [(3, 1)])
        assert e.edges == frozenset({(1, 3)})

    def test_components(self):
        e = EdgeSet(3, [(1, 2)])
        assert e.components() == [(1, 2), (3,), (4,)]
        assert edges_path(3).components() == [(1, 2, 3, 4)]

    def test_parse(self):
        assert parse_edge_spec("path", 2) == edges_path(2)
        assert parse_edge_spec("cycle", 4) == edges_cycle(4)
        assert parse_edge_spec("edges:1-2,2-3", None) == edges_path(2)
        with pytest.raises(ValueError):
            parse_edge_spec("path", None)
        with pytest.raises(ValueError):
            parse_edge_spec("blob", 2)


class TestBruteForce:
    def test_full_plane_has_witness(self):
        F3 = field_make(3)
        E = full_space(F3, 2)
        w = find_dilated_pair_bruteforce(E, F3(1), edges_path(1))
        assert w is not None and w.method == "bruteforce"
        assert verify_witness(w, edges_path(1), F3(1))

    def test_too_few_points(self):
        E = PointSet.from_ranks(F5, 2, [0])
        assert find_dilated_pair_bruteforce(E, F5(1), edges_path(1)) is None

    def test_guard_is_distinct_from_absence(self):
        E = seeded_set(F5, 2, 8, 0)
        with pytest.raises(GuardExceededError):
            find_dilated_pair_bruteforce(E, F5(1), edges_path(1), max_nodes=10)

    def test_deterministic_first_witness(self):
        E = seeded_set(F7, 2, 10, 3)
        a = find_dilated_pair_bruteforce(E, F7(2), edges_path(1))
        b = find_dilated_pair_bruteforce(E, F7(2), edges_path(1))
        assert a == b

    @given(st.integers(2, 6), st.integers(0, 500))
    @settings(max_examples=25, deadline=None)
    def test_absence_iff_zero_count(self, size, seed):
        E = seeded_set(F5, 2, size, seed)
        for r in sorted(squares_nonzero(F5), key=lambda e: e.rank):
            w = find_dilated_pair_bruteforce(E, r, edges_path(1))
            cnt = count_dilated_tuples(E, r, edges_path(1))
            assert (w is None) == (cnt == 0)
            if w is not None:
                assert verify_witness(w, edges_path(1), r)

    def test_rejects_bad_ratio(self):
        E = seeded_set(F5, 2, 4, 0)
        with pytest.raises(ValueError):
            find_dilated_pair_bruteforce(E, F5(0), edges_path(1))
        with pytest.raises(ValueError):
            find_dilated_pair_bruteforce(E, F5(3), edges_path(1))


class TestTranslation:
    def test_arithmetic_progression_example(self):
        E = PointSet(F7, 2, [pt(F7, i, 0) for i in range(4)])
        w = find_congruent_tuple_translation(E, 1)
        assert w is not None and w.method == "translation"
        assert w.xs[0] - w.ys[0] == pt(F7, 1, 0)
        assert verify_witness(w, edges_all_pairs(1), F7.one)
        assert all(x != y for x, y in zip(w.xs, w.ys))

    def test_singleton_absent(self):
        E = PointSet.from_ranks(F7, 2, [5])
        assert find_congruent_tuple_translation(E, 1) is None

    @pytest.mark.parametrize("q", [7, 11])
    def test_guarantee_at_threshold(self, q):
        spec = field_make(q)
        k = 1
        size = (k + 3) * q
        for seed in range(25):
            E = seeded_set(spec, 2, size, seed)
            assert translation_guaranteed(E, k)
            w = find_congruent_tuple_translation(E, k)
            assert w is not None
            assert verify_witness(w, edges_all_pairs(k), spec.one)

    def test_all_pairs_certified(self):
        E = seeded_set(F7, 2, 28, 9)
        w = find_congruent_tuple_translation(E, 2)
        assert w is not None
        assert verify_witness(w, edges_all_pairs(2), F7.one)


class TestScaling:
    def test_full_plane(self):
        E = full_space(F7, 2)
        w = find_dilated_tuple_scaling(E, F7(2), 1)
        assert w is not None and w.method == "scaling"
        assert verify_witness(w, edges_all_pairs(1), F7(2))

    def test_rejects_ratio_one(self):
        E = seeded_set(F7, 2, 10, 0)
        with pytest.raises(ValueError):
            find_dilated_tuple_scaling(E, F7.one, 1)

    def test_cross_pairs_distinct(self):
        # the selection keeps only overlap indices with y != z
        E = seeded_set(F7, 2, 20, 4)
        w = find_dilated_tuple_scaling(E, F7(2), 1)
        assert w is not None
        assert all(x != y for x, y in zip(w.xs, w.ys))

    @pytest.mark.parametrize("q", [7, 11])
    def test_guarantee_at_threshold(self, q):
        import math
        spec = field_make(q)
        k = 1
        size = math.isqrt((k + 2) * q * q)
        if size * size < (k + 2) * q * q:
            size += 1
        ratios = [r for r in sorted(squares_nonzero(spec), key=lambda e: e.rank)
                  if r != spec.one]
        for seed in range(10):
            E = seeded_set(spec, 2, size, seed)
            assert scaling_guaranteed(E, k)
            for r in ratios:
                w = find_dilated_tuple_scaling(E, r, k)
                assert w is not None
                assert verify_witness(w, edges_all_pairs(k), r)

    def test_root_choice_does_not_matter(self):
        # rerun the overlap scan with the non-canonical root: the witness
        # differs but certifies the same ratio
        from collections import Counter

        from fqdilate.geometry import dilate

        E = seeded_set(F7, 2, 20, 1)
        r = F7(2)
        k = 1
        w_canonical = find_dilated_tuple_scaling(E, r, k)
        assert verify_witness(w_canonical, edges_all_pairs(k), r)

        t = -sqrt(r)
        assert t * t == r
        tE = dilate(E, t)
        counts = Counter()
        for x in tE:
            for y in E:
                counts[(x - y).rank] += 1
        a_rank = min(c for c, n in counts.items() if n == max(counts.values()))
        a = Point.from_rank(F7, 2, a_rank)
        overlap = sorted((x for x in tE if (x - a) in E), key=lambda p: p.rank)
        assert len(overlap) >= k + 2
        t_inv = t.inverse()
        pairs = [(x.scale(t_inv), x - a) for x in overlap]
        pairs = [(z, y) for z, y in pairs if z != y][: k + 1]
        w_other = DilatedWitness(xs=tuple(z for z, _ in pairs),
                                 ys=tuple(y for _, y in pairs),
                                 ratio=r, method="scaling")
        assert verify_witness(w_other, edges_all_pairs(k), r)


class TestVerifyWitness:
    def test_duplicate_point_fails(self):
        p0, p1 = pt(F5, 0, 0), pt(F5, 1, 0)
        w = DilatedWitness(xs=(p0, p0), ys=(p0, p1), ratio=F5.one, method="bruteforce")
        assert not verify_witness(w, edges_path(1), F5.one)

    def test_perturbed_edge_fails(self):
        E = full_space(field_make(3), 2)
        F3 = field_make(3)
        w = find_dilated_pair_bruteforce(E, F3(1), edges_path(1))
        bad = DilatedWitness(xs=w.xs, ys=(w.ys[0], w.ys[1] + pt(F3, 1, 0)),
                             ratio=w.ratio, method=w.method)
        # the perturbation either collides with ys[0] or breaks the edge
        assert (bad.ys[0] == bad.ys[1]
                or norm(bad.ys[0] - bad.ys[1]) != w.ratio * norm(w.xs[0] - w.xs[1]))
        assert not verify_witness(bad, edges_path(1), F3(1))

    def test_arity_mismatch_raises(self):
        p0, p1 = pt(F5, 0, 0), pt(F5, 1, 0)
        w = DilatedWitness(xs=(p0, p1), ys=(p0, p1), ratio=F5.one, method="bruteforce")
        with pytest.raises(ValueError):
            verify_witness(w, edges_path(2), F5.one)


class TestAuto:
    def test_methods_agree_when_both_succeed(self):
        E = seeded_set(F7, 2, 28, 2)
        edges = edges_path(1)
        w_auto = find_witness_auto(E, F7.one, edges)
        w_brute = find_dilated_pair_bruteforce(E, F7.one, edges)
        assert verify_witness(w_auto, edges, F7.one)
        assert verify_witness(w_brute, edges, F7.one)

    def test_falls_back_to_bruteforce(self):
        # below both constructive thresholds on the full tiny plane
        F3 = field_make(3)
        E = full_space(F3, 2)
        w = find_witness_auto(E, F3(1), edges_path(1))
        assert w is not None
        assert verify_witness(w, edges_path(1), F3(1))

    @pytest.mark.parametrize("q,k", [(7, 1), (7, 2), (11, 1)])
    def test_theorem_threshold_always_succeeds(self, q, k):
        spec = field_make(q)
        size = 2 * k * q
        edges = edges_path(k)
        for seed in range(10):
            E = seeded_set(spec, 2, size, seed)
            assert theorem_guaranteed(E, k)
            for r in sorted(squares_nonzero(spec), key=lambda e: e.rank):
                w = find_witness_auto(E, r, edges)
                assert w is not None and verify_witness(w, edges, r)
