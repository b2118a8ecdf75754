"""
Deformations of (A, D, I) over Artin rings as Maurer-Cartan elements of 𝔥 ⊗ m, their gauge
equivalences and trivialization witnesses.
"""
from typing import NamedTuple, Optional

from hdeform.bar.calculus import coder_bracket, delta_f
from hdeform.bar.components import AInfMorphismComponents, ComapComponents
from hdeform.bar.morphisms import coder_exponential, coder_logarithm, check_morphism, partition_action
from hdeform.deform.h import HElement, HInstance, Polarization, check_polarization
from hdeform.dgla.core import mc_residual
from hdeform.exact.linalg import LinearMapMatrix, rank_kernel_image
from hdeform.exact.scalars import factorial_inverse, require_series_characteristic
from hdeform.pipeline import hdeform_logger as logger


class DeformationDatum:
    """
    A candidate deformation (A ⊗ R, D_R + f, I_R + i) of a polarization (D, I) over k.

    Args:
        base (Polarization): the pair (D, I) over the ground field
        ring (ArtinRingSpec): coefficient ring R
        perturbation (HElement): (f, i) ∈ (𝔥 ⊗ m)^1, zero when omitted
    """

    def __init__(self, base: Polarization, ring, perturbation: HElement = None):
        if not base.algebra.is_field:
            raise ValueError("The base polarization must be defined over the ground field")
        if ring.field != base.algebra:
            raise ValueError(f"Ring {ring} is not an algebra over {base.algebra}")
        if perturbation is None:
            perturbation = HElement.zero(base.space, 1, base.weight, ring)
        if perturbation.algebra != ring:
            raise ValueError(f"Perturbation coefficients live in {perturbation.algebra}, expected {ring}")
        if not perturbation.is_zero() and perturbation.degree != 1:
            raise ValueError(f"A perturbation has h-degree 1, got {perturbation.degree}")
        if not perturbation.in_maximal_ideal():
            raise ValueError("Perturbation coefficients must lie in the maximal ideal of the ring")

        self.base = base
        self.ring = ring
        self.perturbation = perturbation
        self.trivial = base.extend(ring)

    @property
    def structure(self):
        """
        D' = D_R + f
        """
        return self.trivial.D + self.perturbation.f

    @property
    def inner(self) -> ComapComponents:
        """
        I' = I_R + i
        """
        return self.trivial.I + self.perturbation.i

    def deformed(self) -> HElement:
        return HElement(self.structure, self.inner)


class TrivializationWitness:
    """
    An automorphism λ of T(A ⊗ R) and a comap homotopy ρ of degree 1
    """

    def __init__(self, lam: AInfMorphismComponents, rho: ComapComponents):
        if lam.space != rho.space or lam.algebra != rho.algebra:
            raise ValueError("Witness parts live on different spaces or rings")
        if rho.degree != 1:
            raise ValueError(f"The homotopy ρ is a comap of degree 1, got {rho.degree}")
        linear = [[lam.algebra.residue(c) for c in row] for row in lam.linear_part()]
        field = lam.algebra.field
        names = list(lam.space.names)
        rank, _, _ = rank_kernel_image(LinearMapMatrix(names, names, linear, field))
        if rank != lam.space.dim:
            raise ValueError("λ_1 is not invertible, λ is not an automorphism")
        self.lam = lam
        self.rho = rho

    @classmethod
    def identity(cls, space, weight: int, algebra) -> 'TrivializationWitness':
        return cls(AInfMorphismComponents.identity(space, weight, algebra),
                   ComapComponents(space, 1, weight, None, algebra))


class EquivalenceReport(NamedTuple):
    morphism: bool
    homotopy: bool
    failing_arity: Optional[int]
    failing_slot: Optional[tuple]

    @property
    def ok(self) -> bool:
        return self.morphism and self.homotopy


def extend_trivially(polarization: Polarization, ring) -> DeformationDatum:
    """
    (D_R, I_R) = (D ⊗ π, I ⊗ π) with zero perturbation
    """
    return DeformationDatum(polarization, ring)


def mc_check(polarization: Polarization, datum: DeformationDatum) -> HElement:
    """
    dα + ½[α, α] for α = (f, i), which equals ½[(D', I'), (D', I')]
    """
    if datum.base is not polarization and datum.base != polarization:
        raise ValueError("The deformation datum is not based at the given polarization")
    instance = HInstance(polarization, datum.ring)
    return mc_residual(instance, datum.perturbation)


def is_deformation(datum: DeformationDatum) -> bool:
    """
    (A ⊗ R, D', I') is an A∞ structure with ∞ inner product projecting to (D, I)
    """
    report = check_polarization(datum.structure, datum.inner)
    if not report.ok:
        return False
    projected = Polarization(datum.structure.residue(), datum.inner.residue())
    return projected.D == datum.base.D and projected.I == datum.base.I


def _delta_powers(f, i, count: int) -> list:
    powers = [i]
    for _ in range(1, count):
        powers.append(delta_f(f, powers[-1]))
    return powers


def _ad_powers(f, structure, count: int) -> list:
    powers = [structure]
    for _ in range(1, count):
        powers.append(coder_bracket(f, powers[-1]))
    return powers


def gauge_act_h(polarization: Polarization, generator: HElement) -> tuple:
    """
    Gauges the trivial extension (D_R, I_R) by e^{ad(f, i)} through the closed formula

        ad(f, i)^n (D_R, I_R) = (ad(f)^n D_R, δ_f^n I_R - Σ_{k+l=n-1} n!/(k!(l+1)!) δ_{ad(f)^k D_R} δ_f^l(i))

    and returns the gauged deformation with its witness λ = e^{-f}, ρ = Σ_l -1/(l+1)! δ_f^l(i).

    Returns:
        tuple(DeformationDatum, TrivializationWitness)
    """
    ring = generator.algebra
    if not generator.is_zero() and generator.degree != 0:
        raise ValueError(f"Gauge generators have h-degree 0, got {generator.degree}")
    if not generator.in_maximal_ideal():
        raise ValueError("Gauge generator coefficients must lie in the maximal ideal of the ring")
    if not polarization.report.ok:
        raise ValueError("Gauge action needs a polarization, [(D, I), (D, I)] != 0")
    require_series_characteristic(ring, ring.nilpotency_index - 1)

    trivial = polarization.extend(ring)
    f, i = generator.f, generator.i
    if generator.is_zero():
        f = f.new(degree=0)
        i = i.new(degree=1)
    count = ring.nilpotency_index
    structures = _ad_powers(f, trivial.D, count)
    moved_inner = _delta_powers(f, trivial.I, count)
    moved_generator = _delta_powers(f, i, count)
    logger.info(f"Gauge action through {count} orders over {ring}")

    structure = trivial.D.new(degree=-1)
    inner = trivial.I.new(degree=0)
    for n in range(count):
        if not structures[n].is_zero():
            structure = structure + structures[n].scale(factorial_inverse(ring, n))
        if not moved_inner[n].is_zero():
            inner = inner + moved_inner[n].scale(factorial_inverse(ring, n))
        for k in range(n):
            l = n - 1 - k
            term = delta_f(structures[k], moved_generator[l])
            if not term.is_zero():
                inner = inner - term.scale(factorial_inverse(ring, k) * factorial_inverse(ring, l + 1))

    rho = i.new(degree=1)
    for l, term in enumerate(moved_generator):
        if not term.is_zero():
            rho = rho - term.scale(factorial_inverse(ring, l + 1))
    witness = TrivializationWitness(coder_exponential(-f), rho)

    perturbation = HElement(structure - trivial.D, inner - trivial.I)
    return DeformationDatum(polarization, ring, perturbation), witness


def check_trivial_equivalence(datum: DeformationDatum, witness: TrivializationWitness) -> EquivalenceReport:
    """
    Checks the two conditions making (D', I') trivial:
    λ∘D' = D_R∘λ and I' - I_R∘λ̂ = δ_{D'}(ρ), up to the truncation weight
    """
    lam, rho = witness.lam, witness.rho
    if lam.algebra != datum.ring:
        raise ValueError(f"Witness coefficients live in {lam.algebra}, expected {datum.ring}")
    structure, inner = datum.structure, datum.inner

    morphism = check_morphism(lam, structure, datum.trivial.D)
    defect = inner - partition_action(lam, datum.trivial.I) - delta_f(structure, rho)
    failing_slot = next((slot for slot, _, _, _ in defect.entries()), None)
    return EquivalenceReport(morphism['ok'], failing_slot is None, morphism['arity'], failing_slot)


def generator_from_witness(polarization: Polarization, witness: TrivializationWitness) -> HElement:
    """
    Inverse of the witness construction: f = -log λ and i solving ρ = -Σ_l δ_f^l(i)/(l+1)!,
    found by the fixed point iteration i = -ρ - Σ_{l≥1} δ_f^l(i)/(l+1)!
    """
    ring = witness.lam.algebra
    f = -coder_logarithm(witness.lam)
    rho = witness.rho
    count = ring.nilpotency_index
    i = -rho
    for _ in range(count + 1):
        update = -rho
        for l, term in enumerate(_delta_powers(f, i, count)[1:], start=1):
            if term.is_zero():
                continue
            update = update - term.scale(factorial_inverse(ring, l + 1))
        if update == i:
            break
        i = update
    else:
        raise RuntimeError("Recovering the comap generator did not converge")
    return HElement(f, i)
