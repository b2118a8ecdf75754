import pytest

from hdeform.bar.calculus import (InducedCoderAction, coder_bracket, comap_differential, delta_f,
                                  enumerate_insertion_terms)
from hdeform.bar.components import AInfMorphismComponents, CoderComponents, ComapComponents, ModuleStructure
from hdeform.bar.morphisms import (bar_lambda, check_morphism, coder_exponential, coder_logarithm,
                                   compose_bimodule_maps, compose_morphisms, induce_comap_along, induce_structure_along,
                                   morphism_inverse, partition_action, tilde_lambda)
from hdeform.oracle.bruteforce import (TruncatedBicomodule, assemble_coderivation, assemble_comap,
                                       assemble_induced_maps, check_coleibniz, compose_delta_oracle)
from hdeform.oracle.sampling import random_comap, random_coder


def _sign(parity):
    return -1 if parity % 2 else 1


def _column(matrix, bicomodule, word):
    j = bicomodule.index[word]
    return {w: matrix.rows[i][j] for i, w in enumerate(bicomodule.words) if matrix.rows[i][j]}


class TestInsertionTerms:
    @pytest.mark.parametrize('k, l, count', [(0, 0, 2), (1, 0, 5), (0, 1, 5), (2, 0, 9), (0, 2, 9), (1, 1, 10)])
    def test_counts(self, k, l, count):
        assert len(enumerate_insertion_terms(k, l)) == count

    def test_specials_never_share_a_block(self):
        for term in enumerate_insertion_terms(2, 0):
            block = {(term.position - 1 + j) % 4 for j in range(term.n)}
            assert not {2, 3} <= block

    def test_weight_filter(self):
        terms = enumerate_insertion_terms(1, 1, weight=2)
        assert len(terms) == 8
        assert all(t.n <= 2 for t in terms)

    def test_single_letter_blocks_keep_the_shape(self):
        terms = enumerate_insertion_terms(0, 0)
        assert [str(t) for t in terms] == ['f_1 @ position 1 (nowrap) -> (0,0)',
                                           'f_1 @ position 2 (nowrap) -> (0,0)']

    def test_negative_shape(self):
        with pytest.raises(ValueError):
            enumerate_insertion_terms(-1, 0)


class TestComponents:
    def test_store_cancels(self, exterior):
        space = exterior.space
        f = CoderComponents(space, 0, 3, {1: {(0,): {0: 1}}})
        assert (f - f).is_zero()
        assert f.scale(2) == f + f

    def test_truncation_drops_components(self, dual_numbers):
        structure = dual_numbers.polarization.D
        assert structure.truncated(1).is_zero()
        assert structure.truncated(2).tables == structure.tables
        assert structure.truncated(2) != structure

    def test_curved_components_rejected(self, exterior):
        with pytest.raises(ValueError):
            CoderComponents(exterior.space, -1, 3, {0: {(): {0: 1}}})

    def test_mismatched_weights(self, exterior):
        space = exterior.space
        with pytest.raises(ValueError):
            CoderComponents(space, -1, 3) + CoderComponents(space, -1, 2)

    def test_module_from_coderivation(self, dual_numbers):
        module = ModuleStructure.from_coderivation(dual_numbers.polarization.D)
        assert module.component((0, 1)) == module.component((1, 0))
        assert module.slots() == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]

    def test_comap_dual_valued(self, dual_numbers):
        inner = dual_numbers.polarization.I
        again = ComapComponents.from_dual_valued(inner.space, inner.degree, inner.weight, inner.as_dual_valued())
        assert again == inner

    def test_extend_and_residue(self, dual_numbers, dual_ring):
        structure = dual_numbers.polarization.D
        extended = structure.extend(dual_ring)
        assert extended.algebra == dual_ring
        assert extended.residue() == structure


class TestCoderBracket:
    def test_antisymmetry(self, exterior, field, rng):
        space = exterior.space
        for degrees in [(-1, -1), (-1, 0), (0, 0)]:
            f = random_coder(space, degrees[0], 3, field, rng, density=0.5)
            g = random_coder(space, degrees[1], 3, field, rng, density=0.5)
            assert coder_bracket(f, g) == coder_bracket(g, f).scale(-_sign(f.degree * g.degree))

    def test_jacobi(self, exterior, field, rng):
        space = exterior.space
        for _ in range(3):
            f = random_coder(space, -1, 3, field, rng, density=0.5)
            g = random_coder(space, 0, 3, field, rng, density=0.5)
            h = random_coder(space, -1, 3, field, rng, density=0.5)
            left = coder_bracket(f, coder_bracket(g, h))
            right = (coder_bracket(coder_bracket(f, g), h) +
                     coder_bracket(g, coder_bracket(f, h)).scale(_sign(f.degree * g.degree)))
            assert left == right

    def test_associative_structure_squares_to_zero(self, dual_numbers, matrices):
        for fixture in (dual_numbers, matrices):
            structure = fixture.polarization.D
            assert coder_bracket(structure, structure).is_zero()


class TestDelta:
    @pytest.mark.parametrize('name, count, weight', [('dual_numbers', 20, 4), ('exterior', 8, 3)])
    def test_matches_matrix_oracle(self, name, count, weight, request, field, rng):
        space = request.getfixturevalue(name).space
        # the last pairs reach the forms on four letters
        degrees = [(-1, 0), (0, 0), (-1, -1), (-2, 0)]
        for j in range(count):
            f_degree, i_degree = degrees[j % len(degrees)]
            f = random_coder(space, f_degree, weight, field, rng, density=0.5)
            i = random_comap(space, i_degree, weight, field, rng, density=0.5)
            assert delta_f(f, i) == compose_delta_oracle(f, i)

    def test_matches_matrix_oracle_over_ring(self, exterior, quartic_ring, rng):
        space = exterior.space
        for degrees in [(-1, 0), (0, 1)]:
            f = random_coder(space, degrees[0], 3, quartic_ring, rng, density=0.5)
            i = random_comap(space, degrees[1], 3, quartic_ring, rng, density=0.5)
            assert delta_f(f, i) == compose_delta_oracle(f, i, n_threads=2)

    def test_is_an_action(self, exterior, field, rng):
        space = exterior.space
        for _ in range(3):
            f = random_coder(space, -1, 3, field, rng, density=0.5)
            g = random_coder(space, 0, 3, field, rng, density=0.5)
            i = random_comap(space, 0, 3, field, rng, density=0.5)
            left = delta_f(coder_bracket(f, g), i)
            right = delta_f(f, delta_f(g, i)) - delta_f(g, delta_f(f, i)).scale(_sign(f.degree * g.degree))
            assert left == right

    def test_comap_differential(self, dual_numbers):
        p = dual_numbers.polarization
        dm, dn = InducedCoderAction(p.D, 'A'), InducedCoderAction(p.D, 'A*')
        assert comap_differential(dm, dn, p.I) == delta_f(p.D, p.I)
        with pytest.raises(ValueError):
            comap_differential(dn, dm, p.I)


class TestInducedActions:
    @pytest.mark.parametrize('which', ['A', 'A*'])
    def test_matches_assembled_matrix(self, which, exterior, field, rng):
        f = random_coder(exterior.space, -1, 3, field, rng, density=0.5)
        action = InducedCoderAction(f, which)
        matrix, bicomodule = assemble_coderivation(f, which)
        for word in bicomodule.words:
            assert action(*word) == _column(matrix, bicomodule, word)

    @pytest.mark.parametrize('which', ['A', 'A*'])
    def test_coleibniz(self, which, exterior, field, rng):
        f = random_coder(exterior.space, -1, 3, field, rng, density=0.5)
        assert check_coleibniz(f, which)

    def test_bicomodule_size(self, matrices):
        bicomodule = TruncatedBicomodule(matrices.space, 'A*', 2)
        assert len(bicomodule) == bicomodule.expected_size() == 4 + 2 * 16

    def test_unknown_module(self, dual_numbers):
        with pytest.raises(ValueError):
            InducedCoderAction(dual_numbers.polarization.D, 'M')

    def test_induced_maps(self, dual_numbers):
        p = dual_numbers.polarization
        maps = assemble_induced_maps(p.D)
        assert set(maps) == {'A', 'A*'}
        assert maps['A*'].rows == assemble_coderivation(p.D, 'A*')[0].rows
        assert assemble_induced_maps(p.I)['comap'].rows == assemble_comap(p.I)[0].rows
        with pytest.raises(ValueError):
            assemble_induced_maps(p)


class TestExponential:
    def test_logarithm_inverts_exponential(self, exterior, quartic_ring, rng):
        for _ in range(3):
            f = random_coder(exterior.space, 0, 3, quartic_ring, rng, density=0.5)
            assert coder_logarithm(coder_exponential(f)) == f

    def test_inverse_morphism(self, exterior, quartic_ring, rng):
        f = random_coder(exterior.space, 0, 3, quartic_ring, rng, density=0.5)
        lam = coder_exponential(f)
        identity = AInfMorphismComponents.identity(exterior.space, 3, quartic_ring)
        assert compose_morphisms(lam, morphism_inverse(lam)) == identity
        assert compose_morphisms(morphism_inverse(lam), lam) == identity

    def test_rejects_non_nilpotent_generators(self, exterior):
        f = CoderComponents(exterior.space, 0, 3, {1: {(0,): {0: 1}}})
        with pytest.raises(ValueError):
            coder_exponential(f)

    def test_rejects_odd_generators(self, exterior, dual_ring):
        with pytest.raises(ValueError):
            coder_exponential(CoderComponents(exterior.space, -1, 3, None, dual_ring))


class TestInducedAlongMorphisms:
    def test_identity_morphism(self, exterior):
        space, structure, inner = exterior.space, exterior.polarization.D, exterior.polarization.I
        identity = AInfMorphismComponents.identity(space, 3, exterior.field)
        module = ModuleStructure.from_coderivation(structure)
        assert induce_structure_along(identity, module) == module
        assert induce_comap_along(identity, inner) == inner
        assert compose_bimodule_maps(identity, inner) == inner
        assert bar_lambda(identity).tables == {(0, 0): {(i,): {i: 1} for i in range(space.dim)}}

    def test_check_morphism(self, dual_numbers):
        structure = dual_numbers.polarization.D
        identity = AInfMorphismComponents.identity(dual_numbers.space, 3, dual_numbers.field)
        assert check_morphism(identity, structure, structure)['ok']
        report = check_morphism(identity, structure.scale(2), structure)
        assert not report['ok']
        assert report['arity'] == 2

    def test_scaled_identity(self, dual_numbers, field, rng):
        space = dual_numbers.space
        lam = AInfMorphismComponents.identity(space, 3, field).scale(2)
        module = ModuleStructure.from_coderivation(dual_numbers.polarization.D)
        assert induce_structure_along(lam, module) == module.scale(2)

        # degree 0 lives on (0, 0), degree -1 on (1, 0) and (0, 1)
        for degree in (0, -1):
            comap = random_comap(space, degree, 3, field, rng, density=0.8)
            expected = comap.new(tables={slot: {w: c * 2 ** sum(slot) for w, c in comap.component(slot).items()}
                                         for slot in comap.slots()})
            assert induce_comap_along(lam, comap) == expected

    def test_quadratic_morphism(self, exterior):
        space, field = exterior.space, exterior.field
        # λ_2(e, 1) = 3·1
        lam = AInfMorphismComponents(space, 0, 3, {1: {(0,): {0: 1}, (1,): {1: 1}}, 2: {(1, 0): {0: 3}}}, field)
        module = ModuleStructure.from_coderivation(exterior.polarization.D)
        induced = induce_structure_along(lam, module)
        for slot in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            assert induced.component(slot) == module.component(slot)
        assert not module.component((2, 0))
        assert set(induced.component((2, 0))) == {(1, 0, 0), (1, 0, 1)}
        assert set(induced.component((0, 2))) == {(0, 1, 0), (1, 1, 0)}

    def test_tilde_lambda(self, exterior):
        space, field = exterior.space, exterior.field
        identity = AInfMorphismComponents.identity(space, 3, field)
        assert tilde_lambda(identity.scale(2)) == ModuleStructure(space, 0, 3, {(0, 0): {(0,): {0: 2}, (1,): {1: 2}}})

        lam = identity + AInfMorphismComponents(space, 0, 3, {2: {(1, 0): {0: 3}}}, field)
        # one component per rotation of λ_2(e, 1) = 3·1
        expected = ModuleStructure(space, 0, 3, {(0, 0): {(0,): {0: 1}, (1,): {1: 1}},
                                                 (1, 0): {(0, 0): {1: -3}},
                                                 (0, 1): {(0, 1): {0: 3}}})
        assert tilde_lambda(lam) == expected

    @pytest.mark.parametrize('name', ['dual_numbers', 'exterior'])
    def test_bimodule_composition_matches_partitions(self, name, request, quartic_ring, rng):
        space = request.getfixturevalue(name).space
        for _ in range(4):
            lam = coder_exponential(random_coder(space, 0, 3, quartic_ring, rng, density=0.5))
            comap = random_comap(space, 0, 3, quartic_ring, rng, density=0.5)
            assert compose_bimodule_maps(lam, comap) == partition_action(lam, comap)
