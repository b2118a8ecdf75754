import json

import pytest

from hdeform.__version__ import __version__
from hdeform.io.fixture import load_fixture, serialize_fixture
from hdeform.pipeline.steps import COMMANDS, TermsStep, parse_degrees
from hdeform.run_hdeform import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out.strip()


class TestCheck:
    def test_polarization(self, capsys):
        code, out = _run(capsys, 'check', 'dual_numbers')
        assert code == EXIT_OK
        assert out == 'A∞: ok; inner product: ok'

    def test_non_associative(self, capsys, resource_path):
        code, out = _run(capsys, 'check', resource_path('corrupted_product.json'))
        assert code == EXIT_CHECK_FAILED
        assert out.startswith('A∞: fails at arity 3')
        assert 'first failing inputs:' in out

    def test_non_invariant(self, capsys, resource_path):
        code, out = _run(capsys, 'check', resource_path('corrupted_pairing.json'))
        assert code == EXIT_CHECK_FAILED
        assert out.startswith('A∞: ok; inner product: fails at slot (')

    def test_missing_inner_product(self, capsys, resource_path):
        code, out = _run(capsys, 'check', resource_path('no_inner.json'))
        assert code == EXIT_OK
        assert out == 'A∞: ok; inner product: absent, skipped'

    def test_structured(self, capsys):
        code, out = _run(capsys, 'check', 'matrices_2x2', '--format', 'structured')
        assert code == EXIT_OK
        report = json.loads(out)
        assert report['name'] == 'matrices_2x2'
        assert report['report']['ainf'] is True
        assert report['report']['inner_product'] == 'ok'

    def test_weight_override(self, capsys):
        assert _run(capsys, 'check', 'dual_numbers', '--weight', '2')[0] == EXIT_OK
        assert _run(capsys, 'check', 'dual_numbers', '--weight', '1')[0] == EXIT_ERROR


class TestTerms:
    def test_count(self, capsys):
        code, out = _run(capsys, 'terms', '1', '1')
        assert code == EXIT_OK
        assert len(out.splitlines()) == 10
        assert len(_run(capsys, 'terms', '0', '0')[1].splitlines()) == 2
        assert len(_run(capsys, 'terms', '2', '0')[1].splitlines()) == 9

    def test_weight(self, capsys):
        code, out = _run(capsys, 'terms', '1', '1', '--weight', '2')
        assert len(out.splitlines()) == 8

    def test_structured(self, capsys):
        code, out = _run(capsys, 'terms', '0', '0', '--format', 'structured')
        assert json.loads(out)['report']['count'] == 2


class TestDeformationCommands:
    def test_mc(self, capsys):
        code, out = _run(capsys, 'mc', 'fix_def')
        assert code == EXIT_OK
        assert out == 'residual: 0 (order 2)'

    def test_mc_second_order(self, capsys, resource_path):
        code, out = _run(capsys, 'mc', resource_path('fix_def_order2.json'))
        assert code == EXIT_OK
        assert out == 'residual: 0 (order 3)'

    def test_mc_fails(self, capsys, resource_path):
        code, out = _run(capsys, 'mc', resource_path('bad_perturbation.json'))
        assert code == EXIT_CHECK_FAILED
        lines = out.splitlines()
        assert lines[0] == 'residual: nonzero (order 2)'
        assert all(line.startswith('residual ') for line in lines[1:])

    def test_mc_needs_a_ring(self, capsys):
        assert _run(capsys, 'mc', 'dual_numbers')[0] == EXIT_ERROR

    def test_ring_override(self, capsys):
        assert _run(capsys, 'mc', 'dual_numbers', '--ring', 't_adic:2')[1] == 'residual: 0 (order 3)'
        assert _run(capsys, 'mc', 'fix_def', '--ring', 't_adic:2')[0] == EXIT_ERROR

    def test_gauge_zero_generator(self, capsys, resource_path):
        path = resource_path('zero_generator.json')
        code, out = _run(capsys, 'gauge', path)
        assert code == EXIT_OK
        assert json.loads(out) == serialize_fixture(load_fixture(path))

    def test_gauge(self, capsys, resource_path):
        code, out = _run(capsys, 'gauge', resource_path('exterior_generator.json'), '--format', 'structured')
        assert code == EXIT_OK
        report = json.loads(out)
        assert 'perturbation' in report
        assert report['report']['equivalence']['morphism'] is True
        assert report['report']['equivalence']['homotopy'] is True

    def test_gauge_needs_a_generator(self, capsys):
        assert _run(capsys, 'gauge', 'fix_def')[0] == EXIT_ERROR

    def test_gauge_in_small_characteristic(self, capsys, resource_path):
        assert _run(capsys, 'gauge', resource_path('gf3_gauge.json'))[0] == EXIT_ERROR

    def test_bracket_and_differential(self, capsys):
        code, out = _run(capsys, 'bracket', 'fix_def', '--right', 'perturbation')
        assert code == EXIT_OK
        assert out == '[structure,perturbation]: 0'
        code, out = _run(capsys, 'differential', 'fix_def')
        assert out == 'd(perturbation): 0'

    def test_structure_bracket(self, capsys, resource_path):
        code, out = _run(capsys, 'bracket', resource_path('corrupted_product.json'))
        assert code == EXIT_OK
        assert out.startswith('[structure,structure] f_3(')


class TestCohomologyCommands:
    def test_tangent(self, capsys):
        code, out = _run(capsys, 'tangent', 'one_dim', '--degree', '0:2')
        assert code == EXIT_OK
        assert out.splitlines() == ['H^0: 0 (cochains 1, cocycles 0, coboundaries 0)',
                                    'H^1: 1 (cochains 2, cocycles 2, coboundaries 1)',
                                    'H^2: 0 (cochains 0, cocycles 0, coboundaries 0)']

    def test_first_order_deformations(self, capsys):
        code, out = _run(capsys, 'tangent', 'one_dim', '--ring', 't_adic:1')
        assert out.splitlines()[-1] == 'first order deformations over QQ[t]/t^2: 1'

    def test_cyclic(self, capsys, resource_path):
        assert _run(capsys, 'cyclic', 'fix_def') == (EXIT_OK, 'cyclic: yes; chain map: ok')
        code, out = _run(capsys, 'cyclic', resource_path('bad_perturbation.json'))
        assert code == EXIT_CHECK_FAILED
        assert out.startswith('cyclic: no')
        assert _run(capsys, 'cyclic', resource_path('no_inner.json'))[0] == EXIT_ERROR

    def test_selftest(self, capsys):
        code, out = _run(capsys, 'selftest')
        assert code == EXIT_OK
        assert out == 'delta oracle: agree (9 components); ad oracle: agree'


class TestCommandLine:
    def test_version(self, capsys):
        assert _run(capsys, '--version') == (EXIT_OK, __version__)

    def test_no_command(self, capsys):
        assert main([]) == EXIT_ERROR

    def test_missing_file(self, capsys, resource_path):
        assert _run(capsys, 'check', resource_path('does_not_exist.json'))[0] == EXIT_ERROR

    def test_malformed_file(self, capsys, resource_path):
        assert _run(capsys, 'check', resource_path('broken.json'))[0] == EXIT_ERROR

    def test_commands(self):
        assert set(COMMANDS) == {'check', 'terms', 'bracket', 'differential', 'mc', 'gauge', 'tangent', 'cyclic',
                                 'selftest'}
        with pytest.raises(ValueError):
            TermsStep(0, 0, out_format='xml')

    @pytest.mark.parametrize('text, degrees', [('1', [1]), ('0,2', [0, 2]), ('-1:1', [-1, 0, 1])])
    def test_degree_ranges(self, text, degrees):
        assert parse_degrees(text) == degrees

    def test_bad_degree_range(self):
        with pytest.raises(ValueError):
            parse_degrees('one')
