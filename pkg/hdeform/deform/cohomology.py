from concurrent import futures
from typing import NamedTuple

from hdeform.bar.calculus import coder_bracket, delta_f
from hdeform.bar.components import CoderComponents, ComapComponents
from hdeform.deform.h import HElement, Polarization, h_differential
from hdeform.dgla.core import hochschild_instance
from hdeform.exact.linalg import LinearMapMatrix, Subspace, rank_kernel_image, quotient_dimension
from hdeform.pipeline import hdeform_logger as logger


class HBasisElement(NamedTuple):
    kind: str  # 'coder' or 'comap'
    slot: object
    inputs: tuple
    out: object


class CohomologyResult(NamedTuple):
    degree: int
    dimension: int
    cochains: int
    cocycles: int
    coboundaries: int
    representatives: list


def h_basis(space, degree: int, weight: int) -> list:
    """
    basis of the weight ≤ W truncation of 𝔥^n: coderivation entries of suspended degree -n and
    comap entries of degree 1 - n
    """
    basis = []
    for arity in range(1, weight + 1):
        for inputs in space.words(arity):
            shift = space.word_degree(inputs) - degree
            for out in range(space.dim):
                if space.suspended[out] == shift:
                    basis.append(HBasisElement('coder', arity, inputs, out))
    for n in range(2, weight + 1):
        for k in range(n - 1):
            for inputs in space.words(n):
                if space.word_degree(inputs) + 1 - degree == 2:
                    basis.append(HBasisElement('comap', (k, n - 2 - k), inputs, None))
    return basis


def basis_degree(space, element: HBasisElement) -> int:
    """
    h-degree read off the entry itself
    """
    if element.kind == 'coder':
        return space.word_degree(element.inputs) - space.suspended[element.out]
    return space.word_degree(element.inputs) - 1


def element_from_basis(space, degree: int, weight: int, algebra, element: HBasisElement, c=None) -> HElement:
    c = algebra.one if c is None else c
    if element.kind == 'coder':
        f = CoderComponents(space, -degree, weight, {element.slot: {element.inputs: {element.out: c}}}, algebra)
        return HElement.from_coder(f)
    i = ComapComponents(space, 1 - degree, weight, {element.slot: {element.inputs: c}}, algebra)
    return HElement.from_comap(i)


def element_from_vector(space, degree: int, weight: int, algebra, basis: list, vector) -> HElement:
    out = HElement.zero(space, degree, weight, algebra)
    for element, c in zip(basis, vector):
        if c:
            out = out + element_from_basis(space, degree, weight, algebra, element, c)
    return out


def coordinates(x: HElement, basis: list) -> list:
    """
    coordinates of x in a basis of its graded piece, RuntimeError if x leaves the span
    """
    zero = x.algebra.zero
    lookup = {}
    for slot, inputs, out, c in x.f.entries():
        lookup[('coder', slot, inputs, out)] = c
    for slot, inputs, _, c in x.i.entries():
        lookup[('comap', slot, inputs, None)] = c
    vector = [lookup.pop(tuple(b), zero) for b in basis]
    if lookup:
        raise RuntimeError(f"Element has entries outside the basis of its degree: {sorted(lookup)[:3]}")
    return vector


def differential_matrix(polarization: Polarization, degree: int, weight: int = None,
                        n_threads: int = 1) -> LinearMapMatrix:
    """
    matrix of d: 𝔥^n → 𝔥^{n+1} on the weight ≤ W truncation, columns assembled in parallel
    """
    weight = polarization.weight if weight is None else weight
    if weight != polarization.weight:
        polarization = Polarization(polarization.D.truncated(weight),
                                    polarization.I.truncated(weight) if polarization.has_inner else None)
    if not polarization.report.ok:
        raise ValueError("The differential of 𝔥 needs a polarization, [(D, I), (D, I)] != 0")
    space, field = polarization.space, polarization.algebra
    source = h_basis(space, degree, weight)
    target = h_basis(space, degree + 1, weight)

    def column(element):
        image = h_differential(polarization, element_from_basis(space, degree, weight, field, element))
        return coordinates(image, target) if not image.is_zero() else [field.zero] * len(target)

    with futures.ThreadPoolExecutor(max_workers=n_threads) as executor:
        columns = list(executor.map(column, source))
    logger.info(f"Differential 𝔥^{degree} → 𝔥^{degree + 1}: {len(target)}x{len(source)}")
    return LinearMapMatrix.from_columns(source, target, columns, field, shift=1,
                                        domain_degrees=[basis_degree(space, b) for b in source],
                                        codomain_degrees=[basis_degree(space, b) for b in target])


def tangent_space(polarization: Polarization, degrees, weight: int = None, n_threads: int = 1) -> dict:
    """
    dim H^n of the weight ≤ W truncation of (𝔥, d) for every requested degree, with cocycle representatives.
    A polarization over k is required.
    """
    if not polarization.algebra.is_field:
        raise ValueError("Cohomology is computed for polarizations over the ground field")
    if not polarization.report.ok:
        raise ValueError("The differential of 𝔥 needs a polarization, [(D, I), (D, I)] != 0")
    weight = polarization.weight if weight is None else weight
    space, field = polarization.space, polarization.algebra

    results = {}
    for degree in sorted(set(degrees)):
        outgoing = differential_matrix(polarization, degree, weight, n_threads)
        incoming = differential_matrix(polarization, degree - 1, weight, n_threads)
        if not (outgoing.check_homogeneous() and incoming.check_homogeneous()):
            raise RuntimeError(f"The differential around 𝔥^{degree} does not raise the h-degree by one")
        if not (outgoing @ incoming).is_zero():
            raise RuntimeError(f"d² != 0 on 𝔥^{degree - 1} in the weight ≤ {weight} truncation")
        _, kernel, _ = rank_kernel_image(outgoing)
        rank, _, image = rank_kernel_image(incoming)
        dimension = quotient_dimension(kernel, image)

        kept = Subspace(field, kernel.ambient_dim, list(image.vectors))
        representatives = []
        for vector in kernel.vectors:
            extended = Subspace(field, kernel.ambient_dim, kept.vectors + [vector])
            if extended.dim > kept.dim:
                kept = extended
                representatives.append(element_from_vector(space, degree, weight, field, outgoing.domain, vector))
        logger.info(f"H^{degree} (weight ≤ {weight}) has dimension {dimension}")
        results[degree] = CohomologyResult(degree, dimension, len(outgoing.domain), kernel.dim, rank,
                                           representatives)
    return results


def deformation_tangent_dimension(polarization: Polarization, ring, weight: int = None, n_threads: int = 1) -> int:
    """
    dimension of first order deformations over a square zero ring, Σ_j dim H^{1 - deg t_j}
    """
    if ring.order != 1:
        raise ValueError(f"First order deformations need a square zero ring, got {ring}")
    degrees = [1 - d for d in ring.degrees]
    results = tangent_space(polarization, degrees, weight, n_threads)
    return sum(results[d].dimension for d in degrees)


def cyclic_check(f: CoderComponents, inner: ComapComponents) -> bool:
    """
    f is cyclic for I when δ_f(I) = 0 up to the truncation weight
    """
    return delta_f(f, inner).is_zero()


def include_cyclic(f: CoderComponents, inner: ComapComponents) -> HElement:
    """
    f ↦ (f, 0) on the cyclic subcomplex
    """
    if not cyclic_check(f, inner):
        raise ValueError("Coderivation is not cyclic for the inner product, δ_f(I) != 0")
    return HElement.from_coder(f)


def project_coder(x: HElement) -> CoderComponents:
    """
    (f, i) ↦ f
    """
    return x.f


def hochschild_differential(structure: CoderComponents, f: CoderComponents) -> CoderComponents:
    return coder_bracket(structure, f)


def dgla_maps(polarization: Polarization, x: HElement) -> dict:
    """
    images of x under the inclusion of the cyclic subcomplex (None when x.f is not cyclic) and the
    projection onto the Hochschild dgLa (Coder(TA), [D, ·], [,]), returned with that dgLa
    """
    inner = polarization.I
    hochschild = hochschild_instance(polarization.D, x.algebra)
    inclusion = include_cyclic(x.f, inner) if cyclic_check(x.f, inner) else None
    projection = project_coder(x)
    if not projection.is_zero() and hochschild.degree(projection) != x.degree:
        raise RuntimeError(f"Projection of an h-degree {x.degree} element has degree {hochschild.degree(projection)}")
    return {'inclusion': inclusion, 'projection': projection, 'hochschild': hochschild}
