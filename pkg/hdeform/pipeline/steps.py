import json
from typing import NamedTuple, Optional

from hdeform.bar.calculus import delta_f, enumerate_insertion_terms
from hdeform.deform.cohomology import (cyclic_check, deformation_tangent_dimension, hochschild_differential,
                                       tangent_space)
from hdeform.deform.deformation import (DeformationDatum, check_trivial_equivalence, gauge_act_h, is_deformation,
                                        mc_check)
from hdeform.deform.h import HElement, h_bracket, h_differential
from hdeform.exact.scalars import ArtinRingSpec
from hdeform.io.fixture import (Fixture, element_lines, load_fixture, serialize_element, serialize_fixture,
                                dumps_fixture)
from hdeform.oracle.bruteforce import compose_delta_oracle, iterate_ad
from hdeform.oracle.sampling import default_rng, random_coder, random_comap, random_h_element
from hdeform.pipeline import hdeform_logger as logger

FIXTURE_BLOCKS = ('structure', 'perturbation', 'generator')
OUTPUT_FORMATS = ('text', 'structured')


class CommandResult(NamedTuple):
    ok: bool
    lines: list
    report: dict
    fixture: Optional[Fixture] = None


class GenericCommandStep:
    """
    Base class for a single hdeform command

    Args:
        fixture_path (str): fixture file (or builtin fixture name) the command runs on
        weight (int): truncation weight overriding the fixture's
        ring (str): ring in the flag form 't_adic:N[:g]' or 'square_zero:g0,g1,...'
        out_format (str): 'text' or 'structured'
        n_threads (int): threads used to assemble matrices
    """
    needs_fixture = True

    def __init__(self, fixture_path: str = None, weight: int = None, ring: str = None, out_format: str = 'text',
                 n_threads: int = 1):
        if out_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format '{out_format}', must be one of {OUTPUT_FORMATS}")
        if self.needs_fixture and fixture_path is None:
            raise ValueError(f"'{self.name}' needs a fixture file")
        if weight is not None and weight < 2:
            raise ValueError(f"The truncation weight must be at least 2, got {weight}")

        self.fixture_path = fixture_path
        self.weight = weight
        self.ring = ring
        self.out_format = out_format
        self.n_threads = n_threads

    @property
    def name(self) -> str:
        return self.__class__.__name__.replace('Step', '').lower()

    def __call__(self) -> CommandResult:
        fixture = self.load() if self.fixture_path is not None else None
        logger.info(f"Executing command '{self.name}'")
        return self.process(fixture)

    def load(self) -> Fixture:
        fixture = load_fixture(self.fixture_path)
        if self.weight is not None and self.weight != fixture.weight:
            fixture = fixture.with_weight(self.weight)
        if self.ring is not None:
            fixture = fixture.with_ring(ArtinRingSpec.from_flag(self.ring, fixture.field))
        return fixture

    def process(self, fixture: Optional[Fixture]) -> CommandResult:
        """
        Abstract method to be implemented by a concrete command

        Args:
            fixture (Fixture): the loaded fixture, None for commands without one

        Returns:
            CommandResult: exit status, report lines and the structured report
        """
        raise NotImplementedError

    def render(self, result: CommandResult) -> str:
        if self.out_format == 'text':
            return '\n'.join(result.lines)
        out = serialize_fixture(result.fixture) if result.fixture is not None else {}
        out['report'] = result.report
        return json.dumps(out, indent=2, ensure_ascii=False)


def _block(fixture: Fixture, name: str) -> HElement:
    if name not in FIXTURE_BLOCKS:
        raise ValueError(f"Unknown fixture block '{name}', must be one of {FIXTURE_BLOCKS}")
    if name == 'structure':
        p = fixture.polarization
        return HElement(p.f, p.i)
    return fixture.require(name)


def _default_block(fixture: Fixture) -> str:
    for name in ('perturbation', 'generator'):
        if getattr(fixture, name) is not None:
            return name
    return 'structure'


def _common_algebra(x: HElement, y: HElement) -> tuple:
    if x.algebra == y.algebra:
        return x, y
    if x.algebra.is_field:
        return x.extend(y.algebra), y
    if y.algebra.is_field:
        return x, y.extend(x.algebra)
    raise ValueError(f"Blocks live over different rings {x.algebra} and {y.algebra}")


def _input_names(fixture: Fixture, inputs) -> Optional[list]:
    return None if inputs is None else [fixture.space.names[a] for a in inputs]


class CheckStep(GenericCommandStep):
    def process(self, fixture: Fixture) -> CommandResult:
        polarization = fixture.polarization
        report = polarization.report

        ainf = 'A∞: ok' if report.is_ainf else f'A∞: fails at arity {report.failing_arity}'
        if not polarization.has_inner:
            inner, status = 'inner product: absent, skipped', 'absent'
        elif report.is_inner:
            inner, status = 'inner product: ok', 'ok'
        else:
            k, l = report.failing_slot
            inner, status = f'inner product: fails at slot ({k},{l})', 'fails'

        lines = [f'{ainf}; {inner}']
        inputs = _input_names(fixture, report.failing_inputs)
        if inputs is not None:
            lines.append(f"first failing inputs: {','.join(inputs)}")
        return CommandResult(report.ok, lines, {
            'ainf': report.is_ainf,
            'inner_product': status,
            'failing_arity': report.failing_arity,
            'failing_slot': list(report.failing_slot) if report.failing_slot is not None else None,
            'failing_inputs': inputs,
        }, fixture)


class TermsStep(GenericCommandStep):
    needs_fixture = False

    def __init__(self, k: int, l: int, **kwargs):
        super().__init__(**kwargs)
        self.k = k
        self.l = l

    def process(self, fixture: Optional[Fixture]) -> CommandResult:
        terms = enumerate_insertion_terms(self.k, self.l, self.weight)
        lines = [str(term) for term in terms]
        return CommandResult(True, lines, {'k': self.k, 'l': self.l, 'weight': self.weight,
                                           'count': len(terms), 'terms': lines})


class BracketStep(GenericCommandStep):
    def __init__(self, fixture_path: str, left: str = 'structure', right: str = 'structure', **kwargs):
        super().__init__(fixture_path, **kwargs)
        self.left = left
        self.right = right

    def process(self, fixture: Fixture) -> CommandResult:
        x, y = _common_algebra(_block(fixture, self.left), _block(fixture, self.right))
        result = h_bracket(x, y)
        lines = element_lines(result, f'[{self.left},{self.right}]')
        return CommandResult(True, lines, {'left': self.left, 'right': self.right,
                                           'result': serialize_element(result)}, fixture)


class DifferentialStep(GenericCommandStep):
    def __init__(self, fixture_path: str, block: str = None, **kwargs):
        super().__init__(fixture_path, **kwargs)
        self.block = block

    def process(self, fixture: Fixture) -> CommandResult:
        name = self.block or _default_block(fixture)
        result = h_differential(fixture.polarization, _block(fixture, name))
        lines = element_lines(result, f'd({name})')
        return CommandResult(True, lines, {'block': name, 'result': serialize_element(result)}, fixture)


class McStep(GenericCommandStep):
    def process(self, fixture: Fixture) -> CommandResult:
        ring = fixture.require('ring')
        polarization = fixture.polarization
        datum = DeformationDatum(polarization, ring, fixture.perturbation)
        residual = mc_check(polarization, datum)
        order = ring.nilpotency_index

        if residual.is_zero():
            lines = [f'residual: 0 (order {order})']
        else:
            lines = [f'residual: nonzero (order {order})'] + element_lines(residual, 'residual')
        deformation = is_deformation(datum)
        if deformation != residual.is_zero():
            raise RuntimeError("Maurer-Cartan residual and the direct deformation check disagree")
        return CommandResult(residual.is_zero(), lines, {'order': order, 'residual': serialize_element(residual),
                                                         'is_deformation': deformation}, fixture)


class GaugeStep(GenericCommandStep):
    def process(self, fixture: Fixture) -> CommandResult:
        generator = fixture.require('generator')
        datum, witness = gauge_act_h(fixture.polarization, generator)
        equivalence = check_trivial_equivalence(datum, witness)
        logger.info(f"Trivialization witness: morphism {'ok' if equivalence.morphism else 'fails'}, "
                    f"homotopy {'ok' if equivalence.homotopy else 'fails'}")

        if fixture.perturbation is not None:
            logger.warning("The gauge action starts from the trivial extension, the fixture perturbation is replaced")
        perturbation = None if datum.perturbation.is_zero() else datum.perturbation
        gauged = Fixture(fixture.name, fixture.space, fixture.weight, fixture.polarization, fixture.ring,
                         perturbation, generator)
        report = {
            'witness': serialize_element(HElement(witness.lam, witness.rho)),
            'equivalence': {'morphism': equivalence.morphism, 'homotopy': equivalence.homotopy,
                            'failing_arity': equivalence.failing_arity,
                            'failing_slot': list(equivalence.failing_slot) if equivalence.failing_slot else None},
        }
        return CommandResult(equivalence.ok, dumps_fixture(gauged).splitlines(), report, gauged)


def parse_degrees(text: str) -> list:
    """
    '1', '0,2' or the inclusive range '0:2'
    """
    try:
        if ':' in text:
            low, high = (int(x) for x in text.split(':'))
            return list(range(low, high + 1))
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise ValueError(f"Can not parse degree range '{text}', use 'n', 'n,m' or 'low:high'")


class TangentStep(GenericCommandStep):
    def __init__(self, fixture_path: str, degrees: str = '1', **kwargs):
        super().__init__(fixture_path, **kwargs)
        self.degrees = parse_degrees(degrees)

    def process(self, fixture: Fixture) -> CommandResult:
        polarization = fixture.polarization
        results = tangent_space(polarization, self.degrees, fixture.weight, self.n_threads)
        lines, report = [], {'weight': fixture.weight, 'cohomology': {}}
        for degree, result in sorted(results.items()):
            lines.append(f'H^{degree}: {result.dimension} (cochains {result.cochains}, '
                         f'cocycles {result.cocycles}, coboundaries {result.coboundaries})')
            report['cohomology'][str(degree)] = {'dimension': result.dimension, 'cochains': result.cochains,
                                                 'cocycles': result.cocycles, 'coboundaries': result.coboundaries}

        if fixture.ring is not None and fixture.ring.order == 1:
            dimension = deformation_tangent_dimension(polarization, fixture.ring, fixture.weight, self.n_threads)
            lines.append(f'first order deformations over {fixture.ring}: {dimension}')
            report['first_order_deformations'] = dimension
        return CommandResult(True, lines, report, fixture)


class CyclicStep(GenericCommandStep):
    def __init__(self, fixture_path: str, block: str = None, **kwargs):
        super().__init__(fixture_path, **kwargs)
        self.block = block

    def process(self, fixture: Fixture) -> CommandResult:
        polarization = fixture.polarization
        if not polarization.has_inner:
            raise RuntimeError(f"Fixture '{fixture.name}' has no inner product, cyclicity is undefined")
        name = self.block or _default_block(fixture)
        f = _block(fixture, name).f
        structure, inner = polarization.D, polarization.I
        if f.algebra != polarization.algebra:
            structure, inner = structure.extend(f.algebra), inner.extend(f.algebra)

        if not cyclic_check(f, inner):
            return CommandResult(False, [f'cyclic: no, δ_f(I) != 0 for the coderivation of {name}'],
                                 {'block': name, 'cyclic': False, 'chain_map': None}, fixture)
        image = h_differential(polarization, HElement.from_coder(f))
        chain_map = image.i.is_zero() and image.f == hochschild_differential(structure, f)
        lines = [f"cyclic: yes; chain map: {'ok' if chain_map else 'fails'}"]
        return CommandResult(chain_map, lines, {'block': name, 'cyclic': True, 'chain_map': chain_map}, fixture)


class SelftestStep(GenericCommandStep):
    """
    Compares the insertion calculus with the assembled matrix oracle and the closed gauge formula
    with iterated brackets on random elements
    """
    needs_fixture = False

    def __init__(self, fixture_path: str = 'dual_numbers', seed: int = 0, trials: int = 3, **kwargs):
        super().__init__(fixture_path, **kwargs)
        self.seed = seed
        self.trials = trials

    def process(self, fixture: Fixture) -> CommandResult:
        rng = default_rng(self.seed)
        space, weight, field = fixture.space, fixture.weight, fixture.field

        compared, delta_agree = 0, True
        for _ in range(self.trials):
            f = random_coder(space, int(rng.integers(-2, 1)), weight, field, rng)
            i = random_comap(space, int(rng.integers(-1, 1)), weight, field, rng)
            if delta_f(f, i) != compose_delta_oracle(f, i, self.n_threads):
                delta_agree = False
            compared += len(i.slots())

        ring = ArtinRingSpec('t_adic', field, order=3 if field.p is None else min(3, field.p - 1))
        ad_agree = True
        for _ in range(self.trials):
            generator = random_h_element(space, 0, weight, ring, rng)
            datum, _ = gauge_act_h(fixture.polarization, generator)
            if datum.deformed() != iterate_ad(fixture.polarization, generator):
                ad_agree = False

        words = {True: 'agree', False: 'disagree'}
        lines = [f'delta oracle: {words[delta_agree]} ({compared} components); ad oracle: {words[ad_agree]}']
        return CommandResult(delta_agree and ad_agree, lines, {'seed': self.seed, 'trials': self.trials,
                                                               'delta_oracle': delta_agree, 'components': compared,
                                                               'ad_oracle': ad_agree})


COMMANDS = {
    'check': CheckStep,
    'terms': TermsStep,
    'bracket': BracketStep,
    'differential': DifferentialStep,
    'mc': McStep,
    'gauge': GaugeStep,
    'tangent': TangentStep,
    'cyclic': CyclicStep,
    'selftest': SelftestStep,
}
