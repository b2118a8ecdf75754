"""
The lower triangular matrix dgLa {[[a, 0], [b, a]] : a, b ∈ S}, S the graded endomorphisms of a
small graded space V with coefficients in an Artin ring. It has the same shape as 𝔥 and serves
as an independent finite dimensional check of the gauge formulas.
"""
from typing import NamedTuple, Sequence

import numpy as np

from hdeform.dgla.core import DgLaInstance
from hdeform.exact.scalars import factorial_inverse


class GradedMatrixAlgebra:
    """
    S = End(V) for V with basis degrees `degrees`, entries in `algebra`. The entry (i, j) of a
    homogeneous element of degree n is nonzero only if degrees[i] - degrees[j] = n.
    """

    def __init__(self, degrees: Sequence[int], algebra):
        algebra.require_even_generators()
        self.degrees = tuple(int(d) for d in degrees)
        self.algebra = algebra
        self.dim = len(self.degrees)

    def zero(self) -> np.ndarray:
        out = np.empty((self.dim, self.dim), dtype=object)
        out.fill(self.algebra.zero)
        return out

    def identity(self) -> np.ndarray:
        out = self.zero()
        for i in range(self.dim):
            out[i, i] = self.algebra.one
        return out

    def unit(self, i: int, j: int, c=None) -> np.ndarray:
        out = self.zero()
        out[i, j] = self.algebra.one if c is None else self.algebra.coerce(c)
        return out

    def from_rows(self, rows) -> np.ndarray:
        out = self.zero()
        for i, row in enumerate(rows):
            for j, c in enumerate(row):
                out[i, j] = self.algebra.coerce(c)
        return out

    def degree(self, a: np.ndarray):
        """
        homogeneous degree of a, None for the zero matrix
        """
        found = {self.degrees[i] - self.degrees[j] for i, j in zip(*np.nonzero(_support(a)))}
        if len(found) > 1:
            raise ValueError(f"Matrix is not homogeneous, it has degrees {sorted(found)}")
        return found.pop() if found else None

    def homogeneous_part(self, a: np.ndarray, degree: int) -> np.ndarray:
        out = self.zero()
        for i in range(self.dim):
            for j in range(self.dim):
                if self.degrees[i] - self.degrees[j] == degree:
                    out[i, j] = a[i, j]
        return out

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.dot(a, b)

    def commutator(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        graded commutator ab - (-1)^(|a||b|) ba
        """
        da, db = self.degree(a), self.degree(b)
        if da is None or db is None:
            return self.zero()
        sign = -1 if (da * db) % 2 else 1
        return np.dot(a, b) - np.dot(b, a) * sign

    def is_zero(self, a: np.ndarray) -> bool:
        return not _support(a).any()

    def in_maximal_ideal(self, a: np.ndarray) -> bool:
        return all(self.algebra.in_maximal_ideal(c) for c in a.flat)

    def exp(self, f: np.ndarray) -> np.ndarray:
        """
        e^f for f with entries in m
        """
        return self._series(f, lambda n: factorial_inverse(self.algebra, n))

    def _series(self, f, coefficient) -> np.ndarray:
        total = self.identity()
        term = self.identity()
        for n in range(1, self.algebra.nilpotency_index * self.dim + 1):
            term = np.dot(term, f)
            if self.is_zero(term):
                return total
            total = total + term * coefficient(n)
        raise ValueError("Matrix exponential does not terminate, the exponent is not nilpotent")

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return self.is_zero(a - b)


def _support(a: np.ndarray) -> np.ndarray:
    return np.vectorize(bool, otypes=[bool])(a)


class TriangularMatrixElement(NamedTuple):
    """
    [[a, 0], [b, a]] with a, b ∈ S
    """
    a: np.ndarray
    b: np.ndarray


class TriangularMatrixInstance(DgLaInstance):
    """
    𝔤^n = {(a, b) : a, b ∈ S^n} with the commutator bracket
    [(a, b), (c, d)] = ([a, c], [b, c] + [a, d]) and differential ad(P) for a polarization P,
    or zero when no polarization is given.
    """

    def __init__(self, matrices: GradedMatrixAlgebra, polarization: TriangularMatrixElement = None):
        super().__init__(matrices.algebra)
        self.matrices = matrices
        if polarization is not None:
            check = self.bracket(polarization, polarization)
            if not self.is_zero(check):
                raise ValueError("[P, P] != 0, the differential ad(P) does not square to zero")
        self.polarization = polarization

    def element(self, a, b) -> TriangularMatrixElement:
        return TriangularMatrixElement(np.asarray(a, dtype=object), np.asarray(b, dtype=object))

    def bracket(self, x: TriangularMatrixElement, y: TriangularMatrixElement) -> TriangularMatrixElement:
        s = self.matrices
        return TriangularMatrixElement(s.commutator(x.a, y.a), s.commutator(x.b, y.a) + s.commutator(x.a, y.b))

    def differential(self, x: TriangularMatrixElement) -> TriangularMatrixElement:
        if self.polarization is None:
            return self.zero(self.degree(x) + 1)
        return self.bracket(self.polarization, x)

    def degree(self, x: TriangularMatrixElement):
        da, db = self.matrices.degree(x.a), self.matrices.degree(x.b)
        if da is not None and db is not None and da != db:
            raise ValueError(f"Entries of a triangular element have different degrees {da} and {db}")
        return da if da is not None else db

    def zero(self, degree: int = 0) -> TriangularMatrixElement:
        return TriangularMatrixElement(self.matrices.zero(), self.matrices.zero())

    def is_zero(self, x: TriangularMatrixElement) -> bool:
        return self.matrices.is_zero(x.a) and self.matrices.is_zero(x.b)

    def in_maximal_ideal(self, x: TriangularMatrixElement) -> bool:
        return self.matrices.in_maximal_ideal(x.a) and self.matrices.in_maximal_ideal(x.b)

    def scale(self, x: TriangularMatrixElement, c) -> TriangularMatrixElement:
        c = self.algebra.coerce(c)
        return TriangularMatrixElement(x.a * c, x.b * c)

    def add(self, x: TriangularMatrixElement, y: TriangularMatrixElement) -> TriangularMatrixElement:
        return TriangularMatrixElement(x.a + y.a, x.b + y.b)

    def product(self, x: TriangularMatrixElement, y: TriangularMatrixElement) -> TriangularMatrixElement:
        """
        block product [[a, 0], [b, a]]·[[c, 0], [d, c]] = [[ac, 0], [bc + ad, ac]]
        """
        s = self.matrices
        return TriangularMatrixElement(s.mul(x.a, y.a), s.mul(x.b, y.a) + s.mul(x.a, y.b))

    def block_matrix(self, x: TriangularMatrixElement) -> np.ndarray:
        """
        the element as an explicit 2n x 2n matrix
        """
        zero = self.matrices.zero()
        return np.block([[x.a, zero], [x.b, x.a]])

    def equal(self, x: TriangularMatrixElement, y: TriangularMatrixElement) -> bool:
        return self.matrices.equal(x.a, y.a) and self.matrices.equal(x.b, y.b)

    def is_polarization(self, x: TriangularMatrixElement) -> bool:
        return (self.is_zero(x) or self.degree(x) == 1) and self.is_zero(self.bracket(x, x))


def matrix_exp_triangular(matrices: GradedMatrixAlgebra, f: np.ndarray, i: np.ndarray) -> TriangularMatrixElement:
    """
    exp [[f, 0], [i, f]] = [[e^f, 0], [x, e^f]] with x = Σ_{n≥1} 1/n! Σ_{k+l=n-1} f^k i f^l
    """
    powers = [matrices.identity()]
    while not matrices.is_zero(powers[-1]):
        if len(powers) > matrices.algebra.nilpotency_index * matrices.dim:
            raise ValueError("Matrix exponential does not terminate, the exponent is not nilpotent")
        powers.append(np.dot(powers[-1], f))
    # f^k = 0 for k >= len(powers) - 1
    top = len(powers) - 1
    x = matrices.zero()
    for n in range(1, 2 * top):
        inner = matrices.zero()
        for k in range(max(0, n - top), min(n, top)):
            inner = inner + np.dot(np.dot(powers[k], i), powers[n - 1 - k])
        if not matrices.is_zero(inner):
            x = x + inner * factorial_inverse(matrices.algebra, n)
    return TriangularMatrixElement(matrices.exp(f), x)


def matrix_gauge_conjugate(instance: TriangularMatrixInstance, polarization: TriangularMatrixElement,
                           generator: TriangularMatrixElement) -> TriangularMatrixElement:
    """
    e^A P e^{-A} for A = (f, i): the upper entry is e^f D e^{-f} and the lower entry is
    e^f I e^{-f} + [x e^{-f}, e^f D e^{-f}] with x from matrix_exp_triangular.
    """
    s = instance.matrices
    if not instance.is_polarization(polarization):
        raise ValueError("The conjugated pair is not a polarization, [P, P] != 0")
    if instance.is_zero(generator):
        return polarization
    exp_a = matrix_exp_triangular(s, generator.a, generator.b)
    inverse = s.exp(-generator.a)
    upper = np.dot(np.dot(exp_a.a, polarization.a), inverse)
    shift = np.dot(exp_a.b, inverse)
    lower = np.dot(np.dot(exp_a.a, polarization.b), inverse) + np.dot(shift, upper) - np.dot(upper, shift)
    return TriangularMatrixElement(upper, lower)
