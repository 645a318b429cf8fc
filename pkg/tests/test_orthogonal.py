import itertools

import pytest

from fqdilate.errors import GuardExceededError
from fqdilate.field import field_make
from fqdilate.geometry import Point, full_space, norm, sphere
from fqdilate.orthogonal import (OrthMatrix, apply, brute_force_orthogonal,
                                 enumerate_orthogonal, group_order, identity)


def pt(spec, *ints):
    return Point(tuple(spec(i) for i in ints))


class TestEnumerate:
    def test_d1(self):
        mats = enumerate_orthogonal(field_make(7), 1)
        assert len(mats) == 2
        assert {m.entries[0][0].rank for m in mats} == {1, 6}

    @pytest.mark.parametrize("pq", [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1)])
    def test_d2_matches_brute_force(self, pq):
        spec = field_make(*pq)
        fast = {m.key() for m in enumerate_orthogonal(spec, 2)}
        slow = {m.key() for m in brute_force_orthogonal(spec, 2)}
        assert fast == slow

    def test_known_small_orders(self):
        assert group_order(field_make(3), 2) == 8
        assert group_order(field_make(5), 2) == 8

    def test_no_duplicates(self):
        mats = enumerate_orthogonal(field_make(3, 2), 2)
        assert len({m.key() for m in mats}) == len(mats)

    @pytest.mark.parametrize("pq", [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1)])
    def test_order_equals_twice_unit_circle(self, pq):
        # |O_2| = 2 * #solutions of a^2 + b^2 = 1; the sphere count is an
        # independent computation through the geometry module
        spec = field_make(*pq)
        circle = sphere(spec, 2, pt(spec, 0, 0), spec.one)
        assert group_order(spec, 2) == 2 * len(circle)

    def test_guard_for_large_d3(self):
        with pytest.raises(GuardExceededError):
            enumerate_orthogonal(field_make(7), 3)

    def test_d3_matches_column_assembly_oracle(self):
        # oracle: build orthonormal column triples directly
        spec = field_make(3)
        unit = [p for p in full_space(spec, 3) if norm(p) == spec.one]

        def dot(a, b):
            acc = spec.zero
            for x, y in zip(a.coords, b.coords):
                acc = acc + x * y
            return acc

        count = 0
        for c1 in unit:
            for c2 in unit:
                if not dot(c1, c2).is_zero():
                    continue
                for c3 in unit:
                    if dot(c1, c3).is_zero() and dot(c2, c3).is_zero():
                        count += 1
        mats = enumerate_orthogonal(spec, 3)
        assert len(mats) == count == 48


class TestApply:
    def test_identity(self):
        F5 = field_make(5)
        v = pt(F5, 2, 3)
        assert apply(identity(F5, 2), v) == v

    def test_quarter_turn(self):
        F5 = field_make(5)
        theta = OrthMatrix(((F5(0), -F5(1)), (F5(1), F5(0))))
        assert apply(theta, pt(F5, 1, 0)) == pt(F5, 0, 1)

    def test_dimension_mismatch(self):
        F5 = field_make(5)
        with pytest.raises(ValueError):
            apply(identity(F5, 2), pt(F5, 1, 2, 3))

    @pytest.mark.parametrize("pq", [(5, 1), (7, 1), (11, 1)])
    def test_norm_invariance_exhaustive(self, pq):
        spec = field_make(*pq)
        mats = enumerate_orthogonal(spec, 2)
        for v in full_space(spec, 2):
            nv = norm(v)
            for theta in mats:
                assert norm(apply(theta, v)) == nv


class TestGroupStructure:
    def test_construction_rejects_non_orthogonal(self):
        F5 = field_make(5)
        with pytest.raises(ValueError):
            OrthMatrix(((F5(1), F5(1)), (F5(0), F5(1))))

    @pytest.mark.parametrize("pq", [(3, 1), (5, 1), (7, 1), (3, 2)])
    def test_closure_and_inverse(self, pq):
        spec = field_make(*pq)
        mats = enumerate_orthogonal(spec, 2)
        keys = {m.key() for m in mats}
        for a, b in itertools.product(mats, repeat=2):
            assert a.matmul(b).key() in keys
        for a in mats:
            assert a.transpose().key() in keys  # inverse of orthogonal = transpose

    def test_enumeration_deterministic(self):
        spec = field_make(7)
        first = [m.key() for m in enumerate_orthogonal(spec, 2)]
        second = [m.key() for m in enumerate_orthogonal(spec, 2)]
        assert first == second
