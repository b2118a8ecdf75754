import json
import os
from typing import Optional

import yaml

from hdeform import FIXTURES_DIR
from hdeform.bar.components import CoderComponents, ComapComponents
from hdeform.deform.h import HElement, Polarization
from hdeform.exact.graded import GradedSpace, suspension_sign
from hdeform.exact.scalars import ArtinRingSpec, FieldSpec
from hdeform.pipeline import hdeform_logger as logger
from hdeform.pipeline.config_validation import fixture_validation

FIXTURE_EXTENSIONS = ['.json', '.yaml', '.yml']
BUILTIN_FIXTURES = ['one_dim', 'dual_numbers', 'matrices_2x2', 'fix_def']


class Fixture:
    """
    A parsed fixture file: the polarization (D, I) over k and optional ring, perturbation and gauge
    generator. Coefficients in files describe internal multilinear maps, the suspension sign is
    applied on load and on serialization.
    """

    def __init__(self, name: str, space: GradedSpace, weight: int, polarization: Polarization,
                 ring: Optional[ArtinRingSpec] = None, perturbation: Optional[HElement] = None,
                 generator: Optional[HElement] = None):
        self.name = name
        self.space = space
        self.weight = weight
        self.polarization = polarization
        self.ring = ring
        self.perturbation = perturbation
        self.generator = generator

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    def require(self, block: str):
        value = getattr(self, block)
        if value is None:
            raise RuntimeError(f"Fixture '{self.name}' has no '{block}' section")
        return value

    def with_weight(self, weight: int) -> 'Fixture':
        """
        the same fixture truncated (or padded with zero components) at another weight
        """
        def retruncate(x):
            if x is None:
                return None
            return HElement(x.f.truncated(weight), x.i.truncated(weight))

        p = self.polarization
        polarization = Polarization(p.D.truncated(weight), p.I.truncated(weight) if p.has_inner else None)
        return Fixture(self.name, self.space, weight, polarization, self.ring,
                       retruncate(self.perturbation), retruncate(self.generator))

    def with_ring(self, ring: ArtinRingSpec) -> 'Fixture':
        if self.perturbation is not None or self.generator is not None:
            raise RuntimeError("Can not override the ring of a fixture with ring valued sections")
        return Fixture(self.name, self.space, self.weight, self.polarization, ring)


def builtin_fixture_path(name: str) -> str:
    return os.path.join(FIXTURES_DIR, f'{name}.json')


def read_fixture_file(path: str) -> dict:
    """
    read a json (or yaml) fixture, syntax errors are reported with line and column
    """
    if not os.path.isfile(path) and name_is_builtin(path):
        path = builtin_fixture_path(path)
    _, ext = os.path.splitext(path)
    if ext not in FIXTURE_EXTENSIONS:
        logger.warning(f"Unknown fixture extension {ext}, trying to read it as json")
    try:
        with open(path, 'r') as f:
            return yaml.safe_load(f)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark is not None else ""
        raise RuntimeError(f"Can not parse {path}{where}: {e.problem}")
    except OSError as e:
        raise RuntimeError(f"Can not read fixture {path}: {e}")


def name_is_builtin(path: str) -> bool:
    return path in BUILTIN_FIXTURES


def _index(space: GradedSpace, name, context: str) -> int:
    try:
        return space.index(str(name))
    except ValueError as e:
        raise RuntimeError(f"{context}: {e}")


def _parse_block(block: dict, space: GradedSpace, weight: int, h_degree: int, algebra, context: str) -> tuple:
    """
    coder and comap tables of an h-degree n block in suspended conventions
    """
    coder, comap = {}, {}
    for entry in block.get('coder') or []:
        inputs = tuple(_index(space, n, context) for n in entry['inputs'])
        if not inputs:
            raise RuntimeError(f"{context}: curved components (no inputs) are not supported")
        sign = suspension_sign([space.degrees[a] for a in inputs])
        row = coder.setdefault(len(inputs), {}).setdefault(inputs, {})
        for name, text in entry['output'].items():
            out = _index(space, name, context)
            row[out] = row.get(out, algebra.zero) + _parse_coefficient(algebra, text, context) * sign
    for entry in block.get('comap') or []:
        inputs = tuple(_index(space, n, context) for n in entry['inputs'])
        k, l = (int(x) for x in entry['split'])
        if k + l + 2 != len(inputs):
            raise RuntimeError(f"{context}: comap entry with split ({k}, {l}) needs {k + l + 2} inputs, got {len(inputs)}")
        sign = suspension_sign([space.degrees[a] for a in inputs])
        table = comap.setdefault((k, l), {})
        table[inputs] = table.get(inputs, algebra.zero) + _parse_coefficient(algebra, entry['value'], context) * sign

    f = CoderComponents(space, -h_degree, weight, coder, algebra)
    i = ComapComponents(space, 1 - h_degree, weight, comap, algebra)
    if not (f.check_degrees() and i.check_degrees()):
        raise RuntimeError(f"{context}: entries do not match the declared degrees of an h-degree {h_degree} element")
    return f, i


def _parse_coefficient(algebra, text, context: str):
    try:
        return algebra.parse(text)
    except ValueError as e:
        raise RuntimeError(f"{context}: {e}")


def parse_fixture(config: dict) -> Fixture:
    """
    validate a raw fixture mapping and build the exact objects
    """
    config = fixture_validation(dict(config))
    try:
        field = FieldSpec.from_config(config['field'])
        space = GradedSpace([(name, degree) for name, degree in config['basis']], field)
        ring = ArtinRingSpec.from_config(config['ring'], field) if config['ring'] is not None else None
    except ValueError as e:
        raise RuntimeError(f"Fixture '{config['name']}': {e}")
    weight = config['weight']

    structure = config['structure']
    f, i = _parse_block(structure, space, weight, 1, field, 'structure')
    polarization = Polarization(f, i if 'comap' in structure and structure['comap'] is not None else None)

    blocks = {}
    for key, h_degree in (('perturbation', 1), ('generator', 0)):
        if config[key] is None:
            blocks[key] = None
            continue
        if ring is None:
            raise RuntimeError(f"Fixture section '{key}' needs a 'ring' section")
        blocks[key] = HElement(*_parse_block(config[key], space, weight, h_degree, ring, key))

    logger.info(f"Loaded fixture '{config['name']}': dim A = {space.dim}, weight {weight}")
    return Fixture(config['name'], space, weight, polarization, ring, blocks['perturbation'], blocks['generator'])


def load_fixture(path: str) -> Fixture:
    return parse_fixture(read_fixture_file(path))


def _serialize_block(x: HElement, space: GradedSpace, with_comap: bool = True) -> dict:
    names = space.names
    algebra = x.algebra
    coder = {}
    for arity, inputs, out, c in x.f.entries():
        sign = suspension_sign([space.degrees[a] for a in inputs])
        coder.setdefault(inputs, {})[names[out]] = algebra.format(c * sign)
    block = {'coder': [{'inputs': [names[a] for a in inputs], 'output': output} for inputs, output in coder.items()]}
    if with_comap:
        block['comap'] = [{'inputs': [names[a] for a in inputs], 'split': list(slot),
                           'value': algebra.format(c * suspension_sign([space.degrees[a] for a in inputs]))}
                          for slot, inputs, _, c in x.i.entries()]
    return block


def serialize_element(x: HElement) -> dict:
    return _serialize_block(x, x.space)


def element_lines(x: HElement, label: str) -> list:
    """
    human readable entries of (f, i) in internal conventions
    """
    if x.is_zero():
        return [f'{label}: 0']
    block = serialize_element(x)
    lines = []
    for entry in block['coder']:
        terms = ' + '.join(f'({c}) {out}' for out, c in entry['output'].items())
        lines.append(f"{label} f_{len(entry['inputs'])}({','.join(entry['inputs'])}) = {terms}")
    for entry in block['comap']:
        k, l = entry['split']
        lines.append(f"{label} i_{k},{l}({','.join(entry['inputs'])}) = {entry['value']}")
    return lines


def serialize_fixture(fixture: Fixture) -> dict:
    """
    normal form mapping of a fixture, entries sorted by arity and basis order
    """
    space = fixture.space
    out = {
        'name': fixture.name,
        'field': space.field.to_config(),
        'basis': space.to_config(),
        'weight': fixture.weight,
        'structure': _serialize_block(fixture.polarization, space, fixture.polarization.has_inner),
    }
    if fixture.ring is not None:
        out['ring'] = fixture.ring.to_config()
    if fixture.perturbation is not None:
        out['perturbation'] = _serialize_block(fixture.perturbation, space)
    if fixture.generator is not None:
        out['generator'] = _serialize_block(fixture.generator, space)
    return out


def dumps_fixture(fixture: Fixture) -> str:
    return json.dumps(serialize_fixture(fixture), indent=2, ensure_ascii=False)


def save_fixture(fixture: Fixture, path: str):
    with open(path, 'w') as f:
        f.write(dumps_fixture(fixture))
        f.write('\n')
