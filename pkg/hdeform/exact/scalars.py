from fractions import Fraction
from typing import Union

from sympy import Poly, Symbol, isprime
from sympy.parsing.sympy_parser import (parse_expr, standard_transformations,
                                        implicit_multiplication_application, convert_xor)
from sympy.polys.domains import QQ, GF
from sympy.polys.ring_series import rs_mul, rs_trunc
from sympy.polys.rings import ring

SUPPORTED_FIELDS = ('rationals', 'prime')
SUPPORTED_RINGS = ('t_adic', 'square_zero')

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication_application, convert_xor)


class FieldSpec:
    """
    Exact ground field k: the rationals (arbitrary precision) or a prime field GF(p), p odd.

    Args:
        kind (str): one of SUPPORTED_FIELDS
        p (int): the characteristic when kind is 'prime'
    """

    is_field = True
    nilpotency_index = 1
    has_odd_generators = False

    def __init__(self, kind: str = 'rationals', p: int = None):
        if kind not in SUPPORTED_FIELDS:
            raise ValueError(f"Unknown field kind '{kind}', must be one of {SUPPORTED_FIELDS}")

        if kind == 'prime':
            if p is None or not isprime(p):
                raise ValueError(f"Prime field requires a prime characteristic, got {p}")
            if p == 2:
                raise ValueError("Characteristic 2 is not supported, 2 must be invertible")
            self.domain = GF(p)
        else:
            p = None
            self.domain = QQ

        self.kind = kind
        self.p = p

    @classmethod
    def from_config(cls, value) -> 'FieldSpec':
        """
        parse "QQ", "GF(p)" or {"prime": p}
        """
        if isinstance(value, FieldSpec):
            return value
        if isinstance(value, dict) and 'prime' in value:
            return cls('prime', int(value['prime']))
        if isinstance(value, str):
            text = value.strip()
            if text in ('QQ', 'rationals'):
                return cls('rationals')
            if text.startswith('GF(') and text.endswith(')'):
                return cls('prime', int(text[3:-1]))
        raise ValueError(f"Can not parse field specification: {value}")

    def to_config(self):
        return 'QQ' if self.kind == 'rationals' else {'prime': self.p}

    @property
    def field(self) -> 'FieldSpec':
        return self

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def coerce(self, value):
        if isinstance(value, Fraction):
            return self.domain(value.numerator) / self.domain(value.denominator)
        if isinstance(value, int):
            return self.domain(value)
        if isinstance(value, str):
            return self.parse(value)
        if self.domain.of_type(value):
            return value
        raise ValueError(f"Can not coerce {value!r} into {self}")

    def parse(self, text: Union[str, int]):
        try:
            value = Fraction(str(text).strip())
        except ValueError:
            raise ValueError(f"Coefficient '{text}' is not an exact scalar of {self}")
        if self.p is not None and value.denominator % self.p == 0:
            raise ValueError(f"Coefficient '{text}' has a denominator divisible by {self.p}")
        return self.coerce(value)

    def format(self, x) -> str:
        if self.p is not None:
            return str(self.domain.to_int(x) % self.p)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def residue(self, x):
        return x

    def in_maximal_ideal(self, x) -> bool:
        return not x

    def require_even_generators(self):
        return None

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return 'QQ' if self.p is None else f'GF({self.p})'


class ArtinRingSpec:
    """
    Nilpotent Artin local ring R over a base field, R = k ⊕ m.

    t_adic: k[t]/t^(N+1) with one generator of degree g.
    square_zero: k[t_0, ..., t_r]/(t_i t_j) with graded generators.

    Args:
        kind (str): one of SUPPORTED_RINGS
        base (FieldSpec): residue field
        order (int): N for t_adic rings
        generators (list[tuple[str, int]]): (name, degree) of every generator
    """

    is_field = False

    def __init__(self, kind: str, base: FieldSpec, order: int = None, generators: list = None):
        if kind not in SUPPORTED_RINGS:
            raise ValueError(f"Unknown ring kind '{kind}', must be one of {SUPPORTED_RINGS}")

        if kind == 't_adic':
            generators = generators or [('t', 0)]
            if order is None or order < 1:
                raise ValueError(f"t_adic ring requires order N >= 1, got {order}")
            if len(generators) != 1:
                raise ValueError("t_adic ring has exactly one generator")
            if generators[0][1] % 2 and order >= 2:
                raise ValueError("An odd generator squares to zero, use order 1 or an even degree")
        else:
            order = 1
            if not generators:
                raise ValueError("square_zero ring requires at least one generator")

        names = [str(name) for name, _ in generators]
        if len(set(names)) != len(names):
            raise ValueError(f"Ring generator names must be unique, got {names}")

        self.kind = kind
        self.base = base
        self.order = order
        self.names = tuple(names)
        self.degrees = tuple(int(degree) for _, degree in generators)
        self.poly_ring = ring(','.join(self.names), base.domain)[0]
        self.gens = self.poly_ring.gens

    @classmethod
    def from_config(cls, config: dict, base: FieldSpec) -> 'ArtinRingSpec':
        kind = config.get('kind')
        if kind == 't_adic':
            generator = (config.get('generator', 't'), int(config.get('degree', 0)))
            return cls('t_adic', base, order=int(config['order']), generators=[generator])
        if kind == 'square_zero':
            generators = [(name, int(degree)) for name, degree in config['generators']]
            return cls('square_zero', base, generators=generators)
        raise ValueError(f"Unknown ring kind '{kind}', must be one of {SUPPORTED_RINGS}")

    @classmethod
    def from_flag(cls, text: str, base: FieldSpec) -> 'ArtinRingSpec':
        """
        parse the command line form 't_adic:N[:g]' or 'square_zero:g0,g1,...'
        """
        kind, _, rest = text.partition(':')
        if kind == 't_adic':
            order, _, degree = rest.partition(':')
            return cls('t_adic', base, order=int(order), generators=[('t', int(degree or 0))])
        if kind == 'square_zero':
            degrees = [int(d) for d in rest.split(',') if d.strip()]
            return cls('square_zero', base, generators=[(f't{j}', d) for j, d in enumerate(degrees)])
        raise ValueError(f"Can not parse ring specification: {text}")

    def to_config(self) -> dict:
        if self.kind == 't_adic':
            return {'kind': 't_adic', 'order': self.order, 'generator': self.names[0], 'degree': self.degrees[0]}
        return {'kind': 'square_zero', 'generators': [[n, d] for n, d in zip(self.names, self.degrees)]}

    @property
    def field(self) -> FieldSpec:
        return self.base

    @property
    def nilpotency_index(self) -> int:
        return self.order + 1

    @property
    def zero(self) -> 'RingElement':
        return RingElement(self, self.poly_ring.zero)

    @property
    def one(self) -> 'RingElement':
        return RingElement(self, self.poly_ring.one)

    def generator(self, j: int = 0) -> 'RingElement':
        return RingElement(self, self.gens[j])

    def monomial_degree(self, monomial: tuple) -> int:
        return sum(e * d for e, d in zip(monomial, self.degrees))

    def truncate(self, poly):
        if self.kind == 't_adic':
            return rs_trunc(poly, self.gens[0], self.order + 1)
        return self.poly_ring.from_dict({m: c for m, c in poly.items() if sum(m) <= 1})

    def multiply(self, a, b):
        if self.kind == 't_adic':
            return rs_mul(a, b, self.gens[0], self.order + 1)
        return self.truncate(a * b)

    def coerce(self, value) -> 'RingElement':
        if isinstance(value, RingElement):
            if value.spec != self:
                raise ValueError(f"Ring element over {value.spec} used in {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return RingElement(self, self.poly_ring.ground_new(self.base.coerce(value)))

    def parse(self, text: Union[str, int]) -> 'RingElement':
        symbols = {name: Symbol(name) for name in self.names}
        try:
            expr = parse_expr(str(text), local_dict=symbols, transformations=_TRANSFORMATIONS)
            terms = Poly(expr, *symbols.values()).terms()
        except Exception as e:
            raise ValueError(f"Coefficient '{text}' is not a polynomial in {list(self.names)}: {e}")

        coefficients = {}
        for monomial, c in terms:
            if not c.is_Rational:
                raise ValueError(f"Coefficient '{text}' has a non rational coefficient {c}")
            coefficients[tuple(monomial)] = self.base.coerce(Fraction(int(c.p), int(c.q)))
        return RingElement(self, self.truncate(self.poly_ring.from_dict(coefficients)))

    def format(self, x: 'RingElement') -> str:
        return str(self.coerce(x))

    def residue(self, x: 'RingElement'):
        return x.constant()

    def in_maximal_ideal(self, x: 'RingElement') -> bool:
        return not x.constant()

    @property
    def has_odd_generators(self) -> bool:
        return any(d % 2 for d in self.degrees)

    def involution(self, x: 'RingElement') -> 'RingElement':
        """
        x with its odd degree monomials negated
        """
        poly = self.poly_ring.from_dict({m: -c if self.monomial_degree(m) % 2 else c for m, c in x.poly.items()})
        return RingElement(self, poly)

    def require_even_generators(self):
        odd = [n for n, d in zip(self.names, self.degrees) if d % 2]
        if odd:
            raise ValueError(f"Generators {odd} have odd degree; graded matrices need an even graded ring")

    def __eq__(self, other):
        return (isinstance(other, ArtinRingSpec) and
                (self.kind, self.base, self.order, self.names, self.degrees) ==
                (other.kind, other.base, other.order, other.names, other.degrees))

    def __hash__(self):
        return hash((self.kind, self.base, self.order, self.names, self.degrees))

    def __repr__(self):
        if self.kind == 't_adic':
            return f'{self.base}[{self.names[0]}]/{self.names[0]}^{self.order + 1}'
        return f'{self.base}[{",".join(self.names)}]/m^2'


class RingElement:
    """
    Element of an Artin ring in normal form, a truncated sympy polynomial
    """
    __slots__ = ('spec', 'poly')

    def __init__(self, spec: ArtinRingSpec, poly):
        self.spec = spec
        self.poly = poly

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.spec != self.spec:
                raise ValueError(f"Mismatched rings {self.spec} and {other.spec}")
            return other.poly
        return self.spec.coerce(other).poly

    def __add__(self, other):
        return RingElement(self.spec, self.poly + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElement(self.spec, self.poly - self._other(other))

    def __rsub__(self, other):
        return RingElement(self.spec, self._other(other) - self.poly)

    def __neg__(self):
        return RingElement(self.spec, -self.poly)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return RingElement(self.spec, self.spec.multiply(self.poly, self._other(other)))
        return RingElement(self.spec, self.poly.mul_ground(self.spec.base.coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.spec.one
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.poly)

    def __eq__(self, other):
        if isinstance(other, (RingElement, int, Fraction)):
            return not (self - other)
        return NotImplemented

    __hash__ = None

    def terms(self) -> list:
        return sorted(self.poly.items(), key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0])))

    def constant(self):
        return self.poly.get(self.spec.poly_ring.zero_monom, self.spec.base.zero)

    def degree(self):
        """
        common degree of all stored monomials, None for inhomogeneous elements
        """
        degrees = {self.spec.monomial_degree(m) for m in self.poly}
        return degrees.pop() if len(degrees) == 1 else None

    def __str__(self):
        if not self.poly:
            return '0'
        out = ''
        for monomial, c in self.terms():
            text = self.spec.base.format(c)
            negative = text.startswith('-')
            text = text.lstrip('-')
            factors = [n if e == 1 else f'{n}^{e}' for n, e in zip(self.spec.names, monomial) if e]
            if factors:
                body = '*'.join(factors) if text == '1' else '*'.join([text] + factors)
            else:
                body = text
            if not out:
                out = f'-{body}' if negative else body
            else:
                out += f' - {body}' if negative else f' + {body}'
        return out

    __repr__ = __str__


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    """
    product in normal form, monomials above the truncation dropped
    """
    if not (isinstance(a, RingElement) and isinstance(b, RingElement)):
        raise ValueError("ring_mul expects two ring elements")
    if a.spec != b.spec:
        raise ValueError(f"Mismatched rings {a.spec} and {b.spec}")
    return a * b


def koszul_twist(c, parity: int):
    """
    c moved past an element of the given degree parity: the odd degree part of c changes sign
    """
    if not parity % 2 or not isinstance(c, RingElement) or not c.spec.has_odd_generators:
        return c
    return c.spec.involution(c)


def nilpotency_index(spec: Union[ArtinRingSpec, FieldSpec]) -> int:
    """
    smallest n with m^n = 0
    """
    return spec.nilpotency_index


def factorial_inverse(algebra, n: int):
    """
    1/n! as an element of the coefficient algebra, undefined over GF(p) once n >= p
    """
    p = algebra.field.p
    if p is not None and n >= p:
        raise ValueError(f"1/{n}! does not exist in characteristic {p}")
    value = 1
    for j in range(2, n + 1):
        value *= j
    return algebra.coerce(Fraction(1, value))


def require_series_characteristic(algebra, length: int):
    """
    exponential series with terms up to order `length` need 1/length! in the ground field
    """
    p = algebra.field.p
    if p is not None and length >= p:
        raise ValueError(f"Exponential series over {algebra} can reach order {length}, "
                         f"which needs a characteristic above {length}, got {p}")
