import json

import pytest

from hdeform.io.fixture import (BUILTIN_FIXTURES, builtin_fixture_path, dumps_fixture, element_lines, load_fixture,
                                parse_fixture, read_fixture_file, save_fixture, serialize_fixture)


class TestReadFixtures:
    @pytest.mark.parametrize('name', BUILTIN_FIXTURES)
    def test_builtin_normal_form(self, name):
        path = builtin_fixture_path(name)
        with open(path) as f:
            raw = json.load(f)
        assert serialize_fixture(load_fixture(path)) == raw

    def test_internal_signs(self, exterior, resource_path):
        # (e, 1) -> e is stored with the suspension sign of (1, e)
        structure = exterior.polarization.D
        table = structure.component(2)
        assert table[(0, 1)][1] == -table[(1, 0)][1]
        with open(resource_path('exterior.json')) as f:
            assert serialize_fixture(exterior) == json.load(f)

    def test_builtin_names(self):
        assert read_fixture_file('one_dim')['name'] == 'one_dim'

    def test_save_and_load(self, fix_def, tmp_path):
        path = str(tmp_path / 'fix_def.json')
        save_fixture(fix_def, path)
        assert serialize_fixture(load_fixture(path)) == serialize_fixture(fix_def)
        assert json.loads(dumps_fixture(fix_def))['ring']['order'] == 1

    def test_yaml_fixture(self, tmp_path, one_dim):
        path = tmp_path / 'one_dim.yaml'
        path.write_text('name: one_dim\n'
                        'field: QQ\n'
                        'basis: [["1", 0]]\n'
                        'weight: 2\n'
                        'structure:\n'
                        '  coder: [{inputs: ["1", "1"], output: {"1": "1"}}]\n'
                        '  comap: [{inputs: ["1", "1"], split: [0, 0], value: "1"}]\n')
        assert serialize_fixture(load_fixture(str(path))) == serialize_fixture(one_dim)

    def test_defaults(self, one_dim):
        raw = read_fixture_file('one_dim')
        del raw['weight']
        del raw['field']
        fixture = parse_fixture(raw)
        assert fixture.weight == 3
        assert fixture.field == one_dim.field


class TestFixtureErrors:
    def test_syntax_error_position(self, resource_path):
        with pytest.raises(RuntimeError, match='line'):
            load_fixture(resource_path('broken.json'))

    def test_missing_file(self, resource_path):
        with pytest.raises(RuntimeError):
            load_fixture(resource_path('does_not_exist.json'))

    def test_unknown_key(self, resource_path):
        with pytest.raises(RuntimeError, match='product'):
            load_fixture(resource_path('unknown_key.json'))

    def test_unknown_basis_name(self, resource_path):
        with pytest.raises(RuntimeError, match="'y'"):
            load_fixture(resource_path('unknown_name.json'))

    def test_wrong_degree(self, resource_path):
        with pytest.raises(RuntimeError, match='degree'):
            load_fixture(resource_path('wrong_degree.json'))

    def test_missing_basis(self):
        raw = read_fixture_file('one_dim')
        del raw['basis']
        with pytest.raises(RuntimeError):
            parse_fixture(raw)

    def test_perturbation_needs_a_ring(self):
        raw = read_fixture_file('fix_def')
        del raw['ring']
        with pytest.raises(RuntimeError, match='ring'):
            parse_fixture(raw)

    def test_split_mismatch(self):
        raw = read_fixture_file('one_dim')
        raw['structure']['comap'][0]['split'] = [1, 0]
        with pytest.raises(RuntimeError, match='split'):
            parse_fixture(raw)


class TestFixtureTransforms:
    def test_with_weight(self, dual_numbers):
        fixture = dual_numbers.with_weight(2)
        assert fixture.weight == 2
        assert fixture.polarization.D.weight == 2
        assert fixture.polarization.report.ok

    def test_with_ring(self, dual_numbers, dual_ring, fix_def):
        assert dual_numbers.with_ring(dual_ring).ring == dual_ring
        with pytest.raises(RuntimeError):
            fix_def.with_ring(dual_ring)

    def test_require(self, dual_numbers):
        with pytest.raises(RuntimeError, match='generator'):
            dual_numbers.require('generator')

    def test_element_lines(self, fix_def, dual_numbers):
        assert element_lines(fix_def.perturbation, 'perturbation') == ['perturbation f_2(x,x) = (t) 1']
        zero = fix_def.perturbation - fix_def.perturbation
        assert element_lines(zero, 'residual') == ['residual: 0']
        lines = element_lines(dual_numbers.polarization, 'D')
        assert 'D f_2(1,x) = (1) x' in lines
        assert 'D i_0,0(x,1) = 1' in lines
