from fractions import Fraction
from typing import Iterator, Union

from hdeform.exact.graded import GradedSpace


class ComponentFamily:
    """
    Base class for families of multilinear components on a graded space, stored as dense
    tables over basis tuples. Map-valued families store `tables[slot][inputs][out] = c`,
    form-valued families store `tables[slot][inputs] = c`. Coefficients live in the
    coefficient algebra (the ground field or an Artin ring).

    Args:
        space (GradedSpace): the underlying space A
        degree (int): homogeneous suspended degree of the family
        weight (int): truncation weight W, components above W are implicitly zero
        tables (dict): component tables
        algebra (FieldSpec | ArtinRingSpec): coefficient algebra, the field of `space` by default
    """

    valued = 'map'

    def __init__(self, space: GradedSpace, degree: int, weight: int, tables: dict = None, algebra=None):
        if weight < 1:
            raise ValueError(f"Truncation weight must be positive, got {weight}")
        self.space = space
        self.degree = degree
        self.weight = weight
        self.algebra = algebra if algebra is not None else space.field
        if self.algebra.field != space.field:
            raise ValueError(f"Coefficient algebra {self.algebra} is not over the field of {space}")
        self.tables = {}
        for slot, entries in (tables or {}).items():
            if self.slot_weight(slot) > weight:
                continue
            self.check_slot(slot)
            for inputs, value in entries.items():
                inputs = tuple(inputs)
                if len(inputs) != self.slot_length(slot):
                    raise ValueError(f"Component {slot} expects {self.slot_length(slot)} inputs, got {inputs}")
                if self.valued == 'map':
                    for out, c in value.items():
                        self._store(slot, inputs, out, c)
                else:
                    self._store(slot, inputs, None, value)

    # slot bookkeeping, overridden by the concrete families
    def slot_weight(self, slot) -> int:
        raise NotImplementedError

    def slot_length(self, slot) -> int:
        raise NotImplementedError

    def check_slot(self, slot):
        return None

    def slots(self) -> list:
        raise NotImplementedError

    def _store(self, slot, inputs, out, c):
        c = self.algebra.coerce(c)
        if not c:
            return
        table = self.tables.setdefault(slot, {})
        if self.valued == 'map':
            row = table.setdefault(inputs, {})
            c = row.get(out, self.algebra.zero) + c
            if c:
                row[out] = c
            else:
                del row[out]
                if not row:
                    del table[inputs]
        else:
            c = table.get(inputs, self.algebra.zero) + c
            if c:
                table[inputs] = c
            else:
                del table[inputs]
        if not table:
            del self.tables[slot]

    def entries(self) -> Iterator[tuple]:
        """
        iterate over (slot, inputs, out, coefficient), out is None for forms
        """
        for slot in sorted(self.tables):
            for inputs in sorted(self.tables[slot]):
                value = self.tables[slot][inputs]
                if self.valued == 'map':
                    for out in sorted(value):
                        yield slot, inputs, out, value[out]
                else:
                    yield slot, inputs, None, value

    def component(self, slot) -> dict:
        return self.tables.get(slot, {})

    def new(self, degree: int = None, tables: dict = None, algebra=None, weight: int = None):
        """
        empty family of the same type and space
        """
        return self.__class__(self.space, self.degree if degree is None else degree,
                              self.weight if weight is None else weight, tables,
                              self.algebra if algebra is None else algebra)

    @classmethod
    def zero(cls, space: GradedSpace, degree: int, weight: int, algebra=None):
        return cls(space, degree, weight, None, algebra)

    def is_zero(self) -> bool:
        return not self.tables

    def check_compatible(self, other: 'ComponentFamily'):
        if type(self) is not type(other):
            raise ValueError(f"Can not combine {type(self).__name__} with {type(other).__name__}")
        if self.space != other.space:
            raise ValueError("Component families live on different spaces")
        if self.weight != other.weight:
            raise ValueError(f"Mismatched truncation weights {self.weight} and {other.weight}")
        if self.algebra != other.algebra:
            raise ValueError(f"Mismatched coefficient algebras {self.algebra} and {other.algebra}")

    def combine(self, other: 'ComponentFamily', factor=1):
        self.check_compatible(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError(f"Can not add families of degrees {self.degree} and {other.degree}")
        degree = other.degree if self.is_zero() else self.degree
        out = self.new(degree=degree)
        factor = self.algebra.coerce(factor)
        for slot, inputs, o, c in self.entries():
            out._store(slot, inputs, o, c)
        for slot, inputs, o, c in other.entries():
            out._store(slot, inputs, o, c * factor)
        return out

    def __add__(self, other):
        return self.combine(other, 1)

    def __sub__(self, other):
        return self.combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor: Union[int, Fraction, object]):
        factor = self.algebra.coerce(factor)
        out = self.new()
        for slot, inputs, o, c in self.entries():
            out._store(slot, inputs, o, c * factor)
        return out

    def __eq__(self, other):
        if not isinstance(other, ComponentFamily):
            return NotImplemented
        if type(self) is not type(other) or self.space != other.space:
            return False
        if self.is_zero() and other.is_zero():
            return True
        try:
            return self.combine(other, -1).is_zero()
        except ValueError:
            return False

    __hash__ = None

    def coefficient_degrees(self, c) -> set:
        if self.algebra.is_field:
            return {0}
        return {self.algebra.monomial_degree(m) for m in c.poly}

    def entry_degree(self, slot, inputs, out) -> int:
        """
        degree of the map part of an entry
        """
        raise NotImplementedError

    def check_degrees(self) -> bool:
        """
        every stored entry respects the declared homogeneous degree; a coefficient of degree g
        lowers the suspended degree by g, so t·φ has h-degree deg t + h(φ)
        """
        for slot, inputs, out, c in self.entries():
            shift = self.entry_degree(slot, inputs, out)
            if any(shift - d != self.degree for d in self.coefficient_degrees(c)):
                return False
        return True

    def in_maximal_ideal(self) -> bool:
        return all(self.algebra.in_maximal_ideal(c) for _, _, _, c in self.entries())

    def extend(self, algebra):
        """
        same components with coefficients moved into a larger coefficient algebra, D ↦ D ⊗ R
        """
        out = self.new(algebra=algebra)
        for slot, inputs, o, c in self.entries():
            out._store(slot, inputs, o, algebra.coerce(c))
        return out

    def times(self, c):
        """
        c·φ for a homogeneous ring element c standing in front of every entry
        """
        degree = c.degree()
        if degree is None:
            raise ValueError(f"Only homogeneous ring elements multiply families, got {c}")
        out = self.new(degree=self.degree - degree, algebra=c.spec)
        for slot, inputs, o, x in self.entries():
            out._store(slot, inputs, o, c * c.spec.coerce(x))
        return out

    def residue(self):
        """
        projection of the coefficients along R → k
        """
        out = self.new(algebra=self.algebra.field)
        for slot, inputs, o, c in self.entries():
            out._store(slot, inputs, o, self.algebra.residue(c))
        return out

    def truncated(self, weight: int):
        return self.__class__(self.space, self.degree, weight,
                              {s: t for s, t in self.tables.items() if self.slot_weight(s) <= weight},
                              self.algebra)

    def __repr__(self):
        lines = [f'{type(self).__name__}(degree={self.degree}, weight={self.weight}, algebra={self.algebra})']
        names = self.space.names
        for slot, inputs, out, c in self.entries():
            target = names[out] if out is not None else ''
            lines.append(f'  {slot} {",".join(names[i] for i in inputs)} -> {self.algebra.format(c)} {target}')
        return '\n'.join(lines)


class CoderComponents(ComponentFamily):
    """
    Coderivation of T(A[1]) given by its components f_k: A^{⊗k} → A, k ≥ 1, with suspended degree
    `degree`: ‖f_k(a_1, ..., a_k)‖ = Σ‖a_i‖ + degree. An A∞ structure has degree -1.
    """

    def slot_weight(self, slot) -> int:
        return slot

    def slot_length(self, slot) -> int:
        return slot

    def check_slot(self, slot):
        if not isinstance(slot, int) or slot < 0:
            raise ValueError(f"Coderivation arity must be a non negative integer, got {slot}")
        if slot == 0:
            raise ValueError("Curved structures (arity 0 components) are not supported")

    def slots(self) -> list:
        return list(range(1, self.weight + 1))

    def entry_degree(self, slot, inputs, out) -> int:
        return self.space.suspended[out] - self.space.word_degree(inputs)

    def arities(self) -> list:
        return sorted(self.tables)


class AInfMorphismComponents(CoderComponents):
    """
    A∞ morphism λ: T(A[1]) → T(A[1]) given by its degree 0 components λ_k: A^{⊗k} → A
    """

    def __init__(self, space: GradedSpace, degree: int = 0, weight: int = 1, tables: dict = None, algebra=None):
        if degree != 0:
            raise ValueError("A∞ morphisms have suspended degree 0")
        super().__init__(space, 0, weight, tables, algebra)

    def new(self, degree: int = None, tables: dict = None, algebra=None, weight: int = None):
        return self.__class__(self.space, 0, self.weight if weight is None else weight, tables,
                              self.algebra if algebra is None else algebra)

    @classmethod
    def identity(cls, space: GradedSpace, weight: int, algebra=None) -> 'AInfMorphismComponents':
        algebra = algebra if algebra is not None else space.field
        return cls(space, 0, weight, {1: {(i,): {i: algebra.one} for i in range(space.dim)}}, algebra)

    def linear_part(self) -> list:
        """
        matrix of λ_1, rows indexed by outputs
        """
        zero = self.algebra.zero
        table = self.component(1)
        return [[table.get((j,), {}).get(i, zero) for j in range(self.space.dim)] for i in range(self.space.dim)]


class ModuleStructure(ComponentFamily):
    """
    A∞ bimodule structure on M = A, components D^M_{k,l}: A^{⊗k} ⊗ M ⊗ A^{⊗l} → M
    """

    def slot_weight(self, slot) -> int:
        return slot[0] + slot[1] + 1

    def slot_length(self, slot) -> int:
        return slot[0] + slot[1] + 1

    def slots(self) -> list:
        return [(k, n - 1 - k) for n in range(1, self.weight + 1) for k in range(n)]

    def entry_degree(self, slot, inputs, out) -> int:
        return self.space.suspended[out] - self.space.word_degree(inputs)

    @classmethod
    def from_coderivation(cls, f: CoderComponents) -> 'ModuleStructure':
        """
        D^A_{k,l} = D_{k+l+1}, A as a bimodule over itself
        """
        tables = {}
        for arity, inputs, out, c in f.entries():
            for k in range(arity):
                tables.setdefault((k, arity - 1 - k), {}).setdefault(inputs, {})[out] = c
        return cls(f.space, f.degree, f.weight, tables, f.algebra)


class ComapComponents(ComponentFamily):
    """
    Comap T^A A → T^{A*} A given by pairing forms ⟨...⟩_{k,l}: A^{⊗k} ⊗ A ⊗ A^{⊗l} ⊗ A → k.
    A form of degree p is supported on inputs with Σ‖a_i‖ + p = 2, the evaluation pairing
    A*[1] ⊗ A[1] → k having degree -2.
    """

    valued = 'form'

    def slot_weight(self, slot) -> int:
        return slot[0] + slot[1] + 2

    def slot_length(self, slot) -> int:
        return slot[0] + slot[1] + 2

    def check_slot(self, slot):
        if len(slot) != 2 or min(slot) < 0:
            raise ValueError(f"Comap slot must be a pair (k, l) of non negative integers, got {slot}")

    def slots(self) -> list:
        return [(k, n - 2 - k) for n in range(2, self.weight + 1) for k in range(n - 1)]

    def entry_degree(self, slot, inputs, out) -> int:
        return 2 - self.space.word_degree(inputs)

    def value(self, slot, inputs):
        return self.tables.get(slot, {}).get(tuple(inputs), self.algebra.zero)

    def as_dual_valued(self) -> dict:
        """
        the same comap with components valued in A*: (k,l) -> inputs without the last -> {dual index: c}
        """
        out = {}
        for slot, inputs, _, c in self.entries():
            out.setdefault(slot, {}).setdefault(inputs[:-1], {})[inputs[-1]] = c
        return out

    @classmethod
    def from_dual_valued(cls, space, degree, weight, tables, algebra=None) -> 'ComapComponents':
        forms = {}
        for slot, entries in tables.items():
            for inputs, values in entries.items():
                for y, c in values.items():
                    forms.setdefault(slot, {})[tuple(inputs) + (y,)] = c
        return cls(space, degree, weight, forms, algebra)
