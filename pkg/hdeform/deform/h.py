from typing import NamedTuple, Optional

from hdeform.bar.calculus import coder_bracket, delta_f
from hdeform.bar.components import CoderComponents, ComapComponents
from hdeform.dgla.core import DgLaInstance
from hdeform.exact.graded import GradedSpace


class HElement:
    """
    Element (f, i) of 𝔥^n = Coder(TA)^{-n} ⊕ Comap(T^A A, T^{A*} A)^{1-n}.

    Args:
        f (CoderComponents): coderivation part, suspended degree -n
        i (ComapComponents): comap part, degree 1 - n
    """

    def __init__(self, f: CoderComponents, i: ComapComponents):
        if f.space != i.space or f.weight != i.weight or f.algebra != i.algebra:
            raise ValueError("Coderivation and comap parts live on different spaces, weights or rings")
        if i.degree != f.degree + 1:
            raise ValueError(f"Inconsistent h-degree: coderivation degree {f.degree}, comap degree {i.degree}")
        self.f = f
        self.i = i

    @classmethod
    def zero(cls, space: GradedSpace, degree: int, weight: int, algebra=None) -> 'HElement':
        return cls(CoderComponents(space, -degree, weight, None, algebra),
                   ComapComponents(space, 1 - degree, weight, None, algebra))

    @classmethod
    def from_coder(cls, f: CoderComponents) -> 'HElement':
        return cls(f, ComapComponents(f.space, f.degree + 1, f.weight, None, f.algebra))

    @classmethod
    def from_comap(cls, i: ComapComponents) -> 'HElement':
        return cls(CoderComponents(i.space, i.degree - 1, i.weight, None, i.algebra), i)

    @property
    def degree(self) -> int:
        return -self.f.degree

    @property
    def space(self) -> GradedSpace:
        return self.f.space

    @property
    def weight(self) -> int:
        return self.f.weight

    @property
    def algebra(self):
        return self.f.algebra

    def is_zero(self) -> bool:
        return self.f.is_zero() and self.i.is_zero()

    def in_maximal_ideal(self) -> bool:
        return self.f.in_maximal_ideal() and self.i.in_maximal_ideal()

    def _lift(self, other: 'HElement') -> tuple:
        if self.is_zero() and not other.is_zero():
            return HElement.zero(self.space, other.degree, self.weight, self.algebra), other
        if other.is_zero() and not self.is_zero():
            return self, HElement.zero(self.space, self.degree, self.weight, self.algebra)
        return self, other

    def __add__(self, other: 'HElement') -> 'HElement':
        x, y = self._lift(other)
        return HElement(x.f + y.f, x.i + y.i)

    def __sub__(self, other: 'HElement') -> 'HElement':
        x, y = self._lift(other)
        return HElement(x.f - y.f, x.i - y.i)

    def __neg__(self) -> 'HElement':
        return HElement(-self.f, -self.i)

    def scale(self, c) -> 'HElement':
        return HElement(self.f.scale(c), self.i.scale(c))

    def extend(self, algebra) -> 'HElement':
        return HElement(self.f.extend(algebra), self.i.extend(algebra))

    def times(self, c) -> 'HElement':
        """
        c·(f, i), of h-degree n + deg c
        """
        return HElement(self.f.times(c), self.i.times(c))

    def residue(self) -> 'HElement':
        return HElement(self.f.residue(), self.i.residue())

    def __eq__(self, other):
        if not isinstance(other, HElement):
            return NotImplemented
        return self.f == other.f and self.i == other.i

    __hash__ = None

    def __repr__(self):
        return f'HElement(degree={self.degree})\n{self.f!r}\n{self.i!r}'


class PolarizationReport(NamedTuple):
    is_ainf: bool
    is_inner: Optional[bool]
    failing_arity: Optional[int]
    failing_slot: Optional[tuple]
    failing_inputs: Optional[tuple]

    @property
    def ok(self) -> bool:
        return self.is_ainf and self.is_inner is not False


class Polarization(HElement):
    """
    (D, I) in 𝔥^1: an A∞ structure with a comap of degree 0. A missing inner product is stored as zero
    and reported as absent.
    """

    def __init__(self, structure: CoderComponents, inner: ComapComponents = None):
        self.has_inner = inner is not None
        if inner is None:
            inner = ComapComponents(structure.space, 0, structure.weight, None, structure.algebra)
        if structure.degree != -1 or inner.degree != 0:
            raise ValueError(f"A polarization needs D of suspended degree -1 and I of degree 0, "
                             f"got {structure.degree} and {inner.degree}")
        super().__init__(structure, inner)
        self._report = None

    @property
    def D(self) -> CoderComponents:
        return self.f

    @property
    def I(self) -> ComapComponents:
        return self.i

    @property
    def report(self) -> PolarizationReport:
        if self._report is None:
            self._report = check_polarization(self.D, self.I if self.has_inner else None)
        return self._report

    def extend(self, algebra) -> 'Polarization':
        out = Polarization(self.D.extend(algebra), self.I.extend(algebra) if self.has_inner else None)
        if self._report is not None and self._report.ok:
            out._report = self._report
        return out

    @classmethod
    def from_h(cls, x: HElement) -> 'Polarization':
        return cls(x.f, x.i)


def h_bracket(x: HElement, y: HElement) -> HElement:
    """
    [(f, i), (g, j)] = ([f, g], δ_f(j) - (-1)^(|f||g|) δ_g(i))
    """
    if x.space != y.space or x.weight != y.weight or x.algebra != y.algebra:
        raise ValueError("Can not bracket elements of different spaces, weights or rings")
    sign = -1 if (x.f.degree * y.f.degree) % 2 else 1
    comap = delta_f(x.f, y.i) - delta_f(y.f, x.i).scale(sign)
    return HElement(coder_bracket(x.f, y.f), comap)


def _first_failure(family) -> tuple:
    for slot, inputs, _, _ in family.entries():
        return slot, inputs
    return None, None


def check_polarization(structure: CoderComponents, inner: ComapComponents = None) -> PolarizationReport:
    """
    is_ainf ⇔ [D, D] = 0 and is_inner ⇔ δ_D(I) = 0 up to the truncation weight, reporting the
    lowest failing arity and (k, l) slot
    """
    if structure.degree != -1:
        raise ValueError(f"An A∞ structure has suspended degree -1, got {structure.degree}")
    if inner is not None and inner.degree != 0:
        raise ValueError(f"An inner product is a comap of degree 0, got {inner.degree}")

    square = coder_bracket(structure, structure)
    failing_arity, inputs = _first_failure(square)
    is_ainf = failing_arity is None

    if inner is None:
        return PolarizationReport(is_ainf, None, failing_arity, None, inputs)
    defect = delta_f(structure, inner)
    failing_slot, slot_inputs = _first_failure(defect)
    return PolarizationReport(is_ainf, failing_slot is None, failing_arity, failing_slot,
                              inputs if inputs is not None else slot_inputs)


def h_differential(polarization: Polarization, x: HElement) -> HElement:
    """
    d(f, i) = [(D, I), (f, i)]
    """
    if not polarization.report.ok:
        raise ValueError("The differential of 𝔥 needs a polarization, [(D, I), (D, I)] != 0")
    if polarization.algebra != x.algebra:
        polarization = polarization.extend(x.algebra)
    return h_bracket(polarization, x)


class HInstance(DgLaInstance):
    """
    (𝔥 ⊗ R, ad(D_R, I_R), [,]) as a generic dgLa
    """

    def __init__(self, polarization: Polarization, algebra=None):
        algebra = algebra if algebra is not None else polarization.algebra
        super().__init__(algebra)
        if not polarization.report.ok:
            raise ValueError("The differential of 𝔥 needs a polarization, [(D, I), (D, I)] != 0")
        self.polarization = polarization if polarization.algebra == algebra else polarization.extend(algebra)
        self.space = polarization.space
        self.weight = polarization.weight

    def bracket(self, x: HElement, y: HElement) -> HElement:
        return h_bracket(x, y)

    def differential(self, x: HElement) -> HElement:
        return h_bracket(self.polarization, x)

    def degree(self, x: HElement) -> int:
        return x.degree

    def zero(self, degree: int) -> HElement:
        return HElement.zero(self.space, degree, self.weight, self.algebra)

    def is_zero(self, x: HElement) -> bool:
        return x.is_zero()

    def in_maximal_ideal(self, x: HElement) -> bool:
        return x.in_maximal_ideal()
