from abc import ABC, abstractmethod
from fractions import Fraction

from hdeform.bar.calculus import coder_bracket
from hdeform.bar.components import CoderComponents
from hdeform.exact.scalars import factorial_inverse, require_series_characteristic
from hdeform.pipeline import hdeform_logger as logger


class DgLaInstance(ABC):
    """
    A differential graded Lie algebra over a coefficient algebra, given by evaluators.
    Elements are opaque to the generic operations below, they only need to support
    `+`, `-` and multiplication by scalars through `scale`.
    """

    def __init__(self, algebra):
        self.algebra = algebra

    @abstractmethod
    def bracket(self, x, y):
        pass

    @abstractmethod
    def differential(self, x):
        pass

    @abstractmethod
    def degree(self, x) -> int:
        pass

    @abstractmethod
    def zero(self, degree: int):
        pass

    @abstractmethod
    def is_zero(self, x) -> bool:
        pass

    @abstractmethod
    def in_maximal_ideal(self, x) -> bool:
        pass

    def scale(self, x, c):
        return x.scale(c)

    def add(self, x, y):
        return x + y

    @property
    def nilpotency_bound(self) -> int:
        """
        number of terms after which ad-series of generators with coefficients in m vanish
        """
        return self.algebra.nilpotency_index

    def ad(self, x, y):
        return self.bracket(x, y)


def mc_residual(g: DgLaInstance, alpha):
    """
    dα + ½[α, α]
    """
    if g.degree(alpha) != 1 and not g.is_zero(alpha):
        raise ValueError(f"Maurer-Cartan elements have degree 1, got {g.degree(alpha)}")
    if not g.in_maximal_ideal(alpha):
        raise ValueError("Maurer-Cartan element has coefficients outside the maximal ideal")
    return g.add(g.differential(alpha), g.scale(g.bracket(alpha, alpha), Fraction(1, 2)))


def gauge_infinitesimal(g: DgLaInstance, beta, alpha):
    """
    β·α = [β, α] - dβ
    """
    if not g.is_zero(beta) and g.degree(beta) != 0:
        raise ValueError(f"Gauge generators have degree 0, got {g.degree(beta)}")
    if not g.is_zero(alpha) and g.degree(alpha) != 1:
        raise ValueError(f"Gauge action is on degree 1 elements, got {g.degree(alpha)}")
    return g.add(g.bracket(beta, alpha), g.scale(g.differential(beta), -1))


def _ad_series(g: DgLaInstance, beta, start, offset: int):
    """
    Σ_n ad_β^n(start) / (n + offset)!, the series ends by nilpotency
    """
    total = start if offset == 0 else g.scale(start, factorial_inverse(g.algebra, offset))
    term = start
    bound = g.nilpotency_bound
    for n in range(1, bound + 1):
        term = g.bracket(beta, term)
        if g.is_zero(term):
            return total
        total = g.add(total, g.scale(term, factorial_inverse(g.algebra, n + offset)))
    term = g.bracket(beta, term)
    if not g.is_zero(term):
        raise ValueError("Gauge series does not terminate, the generator is not nilpotent")
    return total


def gauge_exponential(g: DgLaInstance, beta, alpha):
    """
    e^β·α = Σ_n ad_β^n(α)/n! - Σ_n ad_β^n(dβ)/(n+1)!
    """
    if g.is_zero(beta):
        return alpha
    if g.degree(beta) != 0:
        raise ValueError(f"Gauge generators have degree 0, got {g.degree(beta)}")
    if not g.in_maximal_ideal(beta):
        raise ValueError("Gauge generator has coefficients outside the maximal ideal")
    require_series_characteristic(g.algebra, g.nilpotency_bound - 1)
    logger.debug(f"Gauge exponential with at most {g.nilpotency_bound} terms")
    moved = _ad_series(g, beta, alpha, 0)
    d_beta = g.differential(beta)
    if g.is_zero(d_beta):
        return moved
    return g.add(moved, g.scale(_ad_series(g, beta, d_beta, 1), -1))


class HochschildInstance(DgLaInstance):
    """
    (Coder(TA), [D, ·], [,]) with h-degree n for coderivations of suspended degree -n
    """

    def __init__(self, structure: CoderComponents, algebra=None):
        algebra = algebra if algebra is not None else structure.algebra
        super().__init__(algebra)
        self.structure = structure if structure.algebra == algebra else structure.extend(algebra)
        self.space = structure.space
        self.weight = structure.weight

    def bracket(self, x: CoderComponents, y: CoderComponents) -> CoderComponents:
        return coder_bracket(x, y)

    def differential(self, x: CoderComponents) -> CoderComponents:
        return coder_bracket(self.structure, x)

    def degree(self, x: CoderComponents) -> int:
        return -x.degree

    def zero(self, degree: int) -> CoderComponents:
        return CoderComponents(self.space, -degree, self.weight, None, self.algebra)

    def is_zero(self, x: CoderComponents) -> bool:
        return x.is_zero()

    def in_maximal_ideal(self, x: CoderComponents) -> bool:
        return x.in_maximal_ideal()


def hochschild_instance(structure: CoderComponents, algebra=None) -> HochschildInstance:
    return HochschildInstance(structure, algebra)
