import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fqdilate.field import (FieldSpec, enumerate_field, field_make, is_square,
                            sqrt, squares_nonzero, subfield_embed)


def brute_irreducible_deg2(low0, low1, p):
    # degree-2 monic f = x^2 + low1*x + low0 is irreducible iff it has no root
    return all((x * x + low1 * x + low0) % p != 0 for x in range(p))


class TestFieldMake:
    def test_prime_field_modulus_is_x(self):
        spec = field_make(7)
        assert (spec.p, spec.ell, spec.q) == (7, 1, 7)
        assert spec.modulus == (0, 1)

    def test_f9_modulus_is_first_irreducible(self):
        # oracle: scan monic degree-2 polynomials over F_3 in rank order of
        # the low coefficients and take the first irreducible one
        expected = None
        for rank in range(9):
            low0, low1 = rank % 3, rank // 3
            if brute_irreducible_deg2(low0, low1, 3):
                expected = (low0, low1, 1)
                break
        spec = field_make(3, 2)
        assert spec.modulus == expected == (1, 0, 1)

    def test_rejects_non_prime(self):
        with pytest.raises(ValueError):
            FieldSpec(4, 1)

    def test_rejects_characteristic_two(self):
        with pytest.raises(ValueError):
            FieldSpec(2, 3)

    def test_rejects_bad_degree(self):
        with pytest.raises(ValueError):
            FieldSpec(5, 0)

    def test_guard(self):
        with pytest.raises(ValueError):
            FieldSpec(65537, 1, max_q=1 << 16)

    def test_cached_identity(self):
        assert field_make(5, 2) is field_make(5, 2)


class TestArithmetic:
    def test_prime_field_mul(self):
        F7 = field_make(7)
        assert F7(3) * F7(5) == F7(1)

    def test_extension_reduction(self):
        F9 = field_make(3, 2)
        x = F9.element((0, 1))
        assert x * x == F9(2)  # x^2 = -1 = 2 under modulus x^2 + 1

    def test_zero_inverse_raises(self):
        F7 = field_make(7)
        with pytest.raises(ZeroDivisionError):
            F7(0).inverse()
        with pytest.raises(ZeroDivisionError):
            F7(3) / F7(0)

    def test_mixed_field_operands_raise(self):
        with pytest.raises(ValueError):
            field_make(7)(1) + field_make(5)(1)

    def test_int_coercion(self):
        F7 = field_make(7)
        assert F7(3) + 4 == F7(0)
        assert 2 * F7(4) == F7(1)

    @pytest.mark.parametrize("p,ell", [(7, 1), (3, 2), (5, 2), (3, 3)])
    def test_field_axioms_exhaustive(self, p, ell):
        spec = field_make(p, ell)
        elems = enumerate_field(spec)
        one, zero = spec.one, spec.zero
        for a in elems:
            assert a + (-a) == zero
            if not a.is_zero():
                assert a * a.inverse() == one

    @given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
    @settings(max_examples=60)
    def test_ring_laws_f49(self, ra, rb, rc):
        spec = field_make(7, 2)
        a, b, c = spec.from_rank(ra), spec.from_rank(rb), spec.from_rank(rc)
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a

    def test_pow_matches_repeated_mul(self):
        F9 = field_make(3, 2)
        x = F9.element((0, 1))
        acc = F9.one
        for n in range(10):
            assert x**n == acc
            acc = acc * x


class TestSquares:
    def test_examples_f7(self):
        F7 = field_make(7)
        # oracle: the square image of F_7 is {0, 1, 2, 4}
        image = {(x * x).rank for x in enumerate_field(F7)}
        assert image == {0, 1, 2, 4}
        assert is_square(F7(2))
        assert not is_square(F7(3))
        assert is_square(F7(0))

    def test_squares_nonzero_frozen_values(self):
        F7, F5 = field_make(7), field_make(5)
        assert {e.rank for e in squares_nonzero(F7)} == {1, 2, 4}
        assert {e.rank for e in squares_nonzero(F5)} == {1, 4}

    @pytest.mark.parametrize("p,ell", [(3, 1), (5, 1), (7, 1), (11, 1),
                                       (3, 2), (5, 2), (7, 2), (3, 3)])
    def test_square_count(self, p, ell):
        spec = field_make(p, ell)
        assert len(squares_nonzero(spec)) == (spec.q - 1) // 2

    @pytest.mark.parametrize("p,ell", [(3, 1), (7, 1), (3, 2), (5, 2), (7, 2)])
    def test_character_multiplicative(self, p, ell):
        # is_square(ab) == (is_square(a) == is_square(b)) on nonzero elements
        spec = field_make(p, ell)
        nonzero = [e for e in enumerate_field(spec) if not e.is_zero()]
        for a, b in itertools.product(nonzero, repeat=2):
            assert is_square(a * b) == (is_square(a) == is_square(b))


class TestSqrt:
    def test_canonical_choice_f7(self):
        F7 = field_make(7)
        assert sqrt(F7(2)) == F7(3)  # 3 < 4 in rank order

    def test_zero(self):
        assert sqrt(field_make(11)(0)).is_zero()

    def test_non_residue_raises(self):
        with pytest.raises(ValueError):
            sqrt(field_make(7)(3))

    @pytest.mark.parametrize("p,ell", [(3, 1), (5, 1), (7, 1), (13, 1),
                                       (3, 2), (5, 2), (7, 2), (3, 3)])
    def test_roundtrip_all_squares(self, p, ell):
        # exercises both the q = 3 (mod 4) shortcut and Tonelli-Shanks
        spec = field_make(p, ell)
        for a in enumerate_field(spec):
            s = a * a
            root = sqrt(s)
            assert root * root == s
            assert root.rank <= (-root).rank


class TestEnumerate:
    def test_f3(self):
        assert [e.rank for e in enumerate_field(field_make(3))] == [0, 1, 2]

    def test_f9_constants_first(self):
        elems = enumerate_field(field_make(3, 2))
        assert [e.coeffs for e in elems[:3]] == [(0, 0), (1, 0), (2, 0)]

    @pytest.mark.parametrize("p,ell", [(5, 1), (3, 2), (7, 2), (3, 4)])
    def test_exactly_q_distinct(self, p, ell):
        spec = field_make(p, ell)
        elems = enumerate_field(spec)
        assert len(elems) == spec.q
        assert len(set(elems)) == spec.q


class TestSubfieldEmbed:
    def test_constants(self):
        F3, F9 = field_make(3), field_make(3, 2)
        assert subfield_embed(F3, F9, F3(0)).is_zero()
        assert subfield_embed(F3, F9, F3(1)) == F9.one
        assert subfield_embed(F3, F9, F3(2)) == F9(2)

    def test_image_is_frobenius_fixed_set(self):
        F3, F9 = field_make(3), field_make(3, 2)
        image = {subfield_embed(F3, F9, a) for a in enumerate_field(F3)}
        fixed = {z for z in enumerate_field(F9) if z**3 == z}
        assert image == fixed
        assert len(fixed) == 3

    @pytest.mark.parametrize("p,ell", [(3, 1), (5, 1), (3, 2)])
    def test_ring_homomorphism_exhaustive(self, p, ell):
        small = field_make(p, ell)
        big = field_make(p, 2 * ell)
        emb = {a: subfield_embed(small, big, a) for a in enumerate_field(small)}
        for a, b in itertools.product(enumerate_field(small), repeat=2):
            assert emb[a] + emb[b] == emb[a + b]
            assert emb[a] * emb[b] == emb[a * b]
        image = set(emb.values())
        assert len(image) == small.q
        assert big.one in image and big.zero in image

    def test_incompatible_specs(self):
        with pytest.raises(ValueError):
            subfield_embed(field_make(3), field_make(5, 2), field_make(3)(1))
        with pytest.raises(ValueError):
            subfield_embed(field_make(3), field_make(3, 3), field_make(3)(1))
