from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdeform.dgla.matrix import GradedMatrixAlgebra
from hdeform.exact.graded import (DualSpace, GradedSpace, TensorWord, koszul_sign, permutation_sign, rotation_sign,
                                  suspension_sign)
from hdeform.exact.linalg import LinearMapMatrix, Subspace, quotient_dimension, rank_kernel_image, solve_in_span
from hdeform.exact.scalars import (ArtinRingSpec, FieldSpec, factorial_inverse, koszul_twist, nilpotency_index, ring_mul,
                                   require_series_characteristic)

coefficients = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=4, max_size=4)
degree_lists = st.lists(st.integers(min_value=-3, max_value=3), min_size=1, max_size=6)


def _element(ring, values):
    t = ring.generator(0)
    out = ring.zero
    for j, c in enumerate(values):
        out = out + (t ** j) * c
    return out


class TestFieldSpec:
    def test_rationals(self, field):
        x = field.parse('3/2')
        assert field.format(x) == '3/2'
        assert field.format(field.parse('-4')) == '-4'
        assert field.to_config() == 'QQ'

    def test_prime_field(self):
        field = FieldSpec.from_config({'prime': 5})
        assert field.p == 5
        assert field.format(field.parse('1/2')) == '3'
        assert field.to_config() == {'prime': 5}
        with pytest.raises(ValueError):
            field.parse('1/5')

    def test_rejected_characteristics(self):
        with pytest.raises(ValueError):
            FieldSpec('prime', 2)
        with pytest.raises(ValueError):
            FieldSpec('prime', 9)

    def test_parse_garbage(self, field):
        with pytest.raises(ValueError):
            field.parse('sqrt(2)')

    def test_factorial_inverse(self, field):
        assert factorial_inverse(field, 4) == field.coerce(Fraction(1, 24))
        assert factorial_inverse(field, 0) == field.one
        assert nilpotency_index(field) == 1

    def test_factorial_in_small_characteristic(self):
        gf3 = FieldSpec('prime', 3)
        assert factorial_inverse(gf3, 2) == gf3.coerce(Fraction(1, 2))
        with pytest.raises(ValueError):
            factorial_inverse(gf3, 3)
        ring = ArtinRingSpec('t_adic', gf3, order=3)
        with pytest.raises(ValueError):
            factorial_inverse(ring, 5)
        require_series_characteristic(ArtinRingSpec('t_adic', gf3, order=2), 2)
        with pytest.raises(ValueError):
            require_series_characteristic(ring, ring.nilpotency_index - 1)


class TestArtinRing:
    def test_truncation(self, field):
        ring = ArtinRingSpec('t_adic', field, order=2)
        t = ring.generator(0)
        assert t ** 2 != 0
        assert t ** 3 == 0
        assert nilpotency_index(ring) == 3

    def test_parse_format(self, field):
        ring = ArtinRingSpec('t_adic', field, order=2)
        x = ring.parse('1 + 2t + 5t^3')
        assert ring.parse(ring.format(x)) == x
        assert ring.residue(x) == field.one
        assert not ring.in_maximal_ideal(x)
        assert ring.in_maximal_ideal(ring.parse('t/3'))

    def test_parse_rejects_unknown_symbols(self, field):
        ring = ArtinRingSpec('t_adic', field, order=2)
        with pytest.raises(ValueError):
            ring.parse('s + 1')

    def test_flags(self, field):
        ring = ArtinRingSpec.from_flag('t_adic:2', field)
        assert ring.kind == 't_adic' and ring.order == 2
        square = ArtinRingSpec.from_flag('square_zero:0,2', field)
        assert square.degrees == (0, 2)
        t0, t1 = square.generator(0), square.generator(1)
        assert ring_mul(t0, t1) == 0
        assert t0 * t0 == 0
        with pytest.raises(ValueError):
            ArtinRingSpec.from_flag('power_series:3', field)

    def test_config_round_trip(self, field):
        ring = ArtinRingSpec('square_zero', field, generators=[('u', 0), ('v', -2)])
        assert ArtinRingSpec.from_config(ring.to_config(), field) == ring

    def test_odd_generators(self, field):
        with pytest.raises(ValueError):
            ArtinRingSpec('t_adic', field, order=2, generators=[('t', 1)])
        odd = ArtinRingSpec('square_zero', field, generators=[('s', 1), ('u', 0)])
        s, u = odd.generator(0), odd.generator(1)
        assert odd.has_odd_generators
        assert koszul_twist(s + u + 1, 1) == -s + u + 1
        assert koszul_twist(s + u + 1, 2) == s + u + 1
        assert koszul_twist(Fraction(1, 2), 1) == Fraction(1, 2)
        with pytest.raises(ValueError):
            GradedMatrixAlgebra([0, 1], odd)

    def test_mismatched_rings(self, field):
        a = ArtinRingSpec('t_adic', field, order=1).generator(0)
        b = ArtinRingSpec('t_adic', field, order=2).generator(0)
        with pytest.raises(ValueError):
            ring_mul(a, b)

    @settings(max_examples=30, deadline=None)
    @given(coefficients, coefficients, coefficients)
    def test_ring_axioms(self, a, b, c):
        ring = ArtinRingSpec('t_adic', FieldSpec(), order=3)
        x, y, z = _element(ring, a), _element(ring, b), _element(ring, c)
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z

    @settings(max_examples=30, deadline=None)
    @given(coefficients)
    def test_maximal_ideal_is_nilpotent(self, a):
        ring = ArtinRingSpec('t_adic', FieldSpec(), order=3)
        x = _element(ring, [Fraction(0)] + a[1:])
        assert ring.in_maximal_ideal(x)
        assert x ** ring.nilpotency_index == 0


class TestSigns:
    def test_suspension_sign(self):
        assert suspension_sign([0, 0]) == 1
        assert suspension_sign([1, 0]) == -1
        assert suspension_sign([0, 1]) == 1
        assert suspension_sign([1, 1, 1]) == -1
        assert suspension_sign([-1, 0]) == -1

    def test_permutation_sign(self):
        assert permutation_sign([1, 1], [1, 0]) == -1
        assert permutation_sign([2, 1], [1, 0]) == 1
        assert permutation_sign([1, 1, 1], [2, 0, 1]) == 1
        with pytest.raises(ValueError):
            permutation_sign([1, 1], [0, 0])

    def test_rotation_sign(self):
        assert rotation_sign([1, 1], 1) == -1
        assert rotation_sign([1, 1, 1], 1) == 1
        assert rotation_sign([1, 2], 1) == 1

    @given(degree_lists, degree_lists)
    def test_koszul_symmetric(self, a, b):
        assert koszul_sign(a, b) == koszul_sign(b, a)

    @given(degree_lists)
    def test_identity_permutation(self, degrees):
        assert permutation_sign(degrees, list(range(len(degrees)))) == 1

    @given(degree_lists, st.data())
    def test_adjacent_transposition(self, degrees, data):
        if len(degrees) < 2:
            return
        i = data.draw(st.integers(min_value=0, max_value=len(degrees) - 2))
        permutation = list(range(len(degrees)))
        permutation[i], permutation[i + 1] = permutation[i + 1], permutation[i]
        expected = -1 if (degrees[i] * degrees[i + 1]) % 2 else 1
        assert permutation_sign(degrees, permutation) == expected


class TestGradedSpace:
    def test_basis(self, graded_space):
        assert graded_space.dim == 3
        assert graded_space.index('b') == 1
        assert graded_space.suspended == (1, 2, 0)
        assert graded_space.graded_piece(1) == [1]
        with pytest.raises(ValueError):
            graded_space.index('z')

    def test_invalid_basis(self, field):
        with pytest.raises(ValueError):
            GradedSpace([('a', 0), ('a', 1)], field)
        with pytest.raises(ValueError):
            GradedSpace([], field)

    def test_words_of_degree(self, graded_space):
        words = graded_space.words_of_degree(2, 2)
        assert all(graded_space.word_degree(w) == 2 for w in words)
        assert (0, 0) in words and (1, 2) in words and (2, 1) in words

    def test_dual(self, graded_space):
        dual = graded_space.dual()
        assert isinstance(dual, DualSpace)
        assert dual.names == ('a*', 'b*', 'c*')
        assert dual.degrees == (0, -1, 1)
        assert dual.dual() == graded_space
        assert dual != graded_space

    def test_tensor_word(self, graded_space):
        word = TensorWord(graded_space, (0, 1))
        assert repr(word) == 'a⊗b'
        assert word.degree == 3
        assert len(word) == 2


class TestLinearAlgebra:
    def test_rank_kernel_image(self, field):
        matrix = LinearMapMatrix(['u', 'v'], ['p', 'q'], [[1, 2], [2, 4]], field)
        rank, kernel, image = rank_kernel_image(matrix)
        assert rank == 1
        assert kernel.dim == 1 and image.dim == 1
        v = kernel.vectors[0]
        assert all(sum(row[j] * v[j] for j in range(2)) == 0 for row in matrix.rows)

    def test_quotient_dimension(self, field):
        one, zero = field.one, field.zero
        kernel = Subspace(field, 3, [[one, zero, zero], [zero, one, zero]])
        image = Subspace(field, 3, [[one, zero, zero]])
        assert quotient_dimension(kernel, image) == 1
        with pytest.raises(RuntimeError):
            quotient_dimension(image, Subspace(field, 3, [[zero, one, zero]]))

    def test_composition(self, field):
        a = LinearMapMatrix(['u'], ['p', 'q'], [[1], [1]], field)
        b = LinearMapMatrix(['p', 'q'], ['r'], [[1, -1]], field)
        assert (b @ a).is_zero()
        with pytest.raises(ValueError):
            a @ a

    def test_homogeneous(self, field):
        raising = LinearMapMatrix(['u', 'v'], ['p'], [[1, 0]], field, shift=1, domain_degrees=[0, 3],
                                  codomain_degrees=[1])
        assert raising.check_homogeneous()
        flat = LinearMapMatrix(['u'], ['p'], [[1]], field, shift=1, domain_degrees=[0], codomain_degrees=[0])
        assert not flat.check_homogeneous()
        assert LinearMapMatrix(['u'], ['p'], [[1]], field, shift=1).check_homogeneous()

    def test_solve_in_span(self, field):
        vectors = [[field.one, field.zero], [field.one, field.one]]
        assert solve_in_span(vectors[:1], [field.coerce(3), field.zero], field)
        assert not solve_in_span(vectors[:1], [field.zero, field.one], field)
        assert solve_in_span(vectors, [field.zero, field.one], field)
