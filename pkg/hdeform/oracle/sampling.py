"""
Seeded random homogeneous elements for the self test and property checks.
"""
from fractions import Fraction

import numpy as np

from hdeform.bar.components import CoderComponents, ComapComponents
from hdeform.deform.cohomology import element_from_vector, h_basis
from hdeform.deform.h import HElement


def default_rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def ideal_monomials(ring) -> list:
    """
    degree 0 monomials spanning the maximal ideal of an Artin ring
    """
    if ring.is_field:
        return []
    if ring.kind == 't_adic':
        t = ring.generator(0)
        return [t ** j for j in range(1, ring.order + 1) if ring.monomial_degree((j,)) == 0]
    return [ring.generator(j) for j, d in enumerate(ring.degrees) if d == 0]


def graded_monomials(ring) -> list:
    """
    (monomial, degree) for the monomials of nonzero degree spanning the rest of the maximal ideal
    """
    if ring.is_field:
        return []
    if ring.kind == 't_adic':
        t = ring.generator(0)
        return [(t ** j, ring.monomial_degree((j,))) for j in range(1, ring.order + 1)
                if ring.monomial_degree((j,)) != 0]
    return [(ring.generator(j), d) for j, d in enumerate(ring.degrees) if d != 0]


def random_scalar(algebra, rng: np.random.Generator, in_ideal: bool = False, bound: int = 3):
    """
    small exact scalar; with `in_ideal` a random combination of the ideal monomials
    """
    def coefficient():
        return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 3)))

    if algebra.is_field:
        return algebra.coerce(coefficient())
    monomials = ideal_monomials(algebra)
    if in_ideal and not monomials:
        raise ValueError(f"{algebra} has no degree 0 elements in its maximal ideal")
    out = algebra.zero if in_ideal else algebra.coerce(coefficient())
    for m in monomials:
        out = out + m * coefficient()
    return out


def random_h_element(space, degree: int, weight: int, algebra, rng: np.random.Generator,
                     density: float = 0.3, in_ideal: bool = None) -> HElement:
    """
    random element of the weight ≤ W truncation of 𝔥^n ⊗ R, coefficients in m unless `in_ideal` is False.
    A generator t of degree g contributes t·φ with φ of h-degree n - g.
    """
    in_ideal = not algebra.is_field if in_ideal is None else in_ideal
    basis = h_basis(space, degree, weight)
    graded = graded_monomials(algebra)
    if in_ideal and graded and not ideal_monomials(algebra):
        vector = [algebra.zero] * len(basis)
    else:
        vector = [random_scalar(algebra, rng, in_ideal) if rng.random() < density else algebra.zero for _ in basis]
    out = element_from_vector(space, degree, weight, algebra, basis, vector)
    for monomial, g in graded:
        out = out + random_h_element(space, degree - g, weight, algebra.field, rng, density).times(monomial)
    return out


def random_coder(space, degree: int, weight: int, algebra, rng: np.random.Generator,
                 density: float = 0.3) -> CoderComponents:
    return random_h_element(space, -degree, weight, algebra, rng, density).f


def random_comap(space, degree: int, weight: int, algebra, rng: np.random.Generator,
                 density: float = 0.3) -> ComapComponents:
    return random_h_element(space, 1 - degree, weight, algebra, rng, density).i
