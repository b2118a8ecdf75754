"""
A∞ morphisms of the bar construction and the structures induced along them.
"""
from fractions import Fraction

from hdeform.bar.components import (AInfMorphismComponents, CoderComponents, ComapComponents,
                                    ModuleStructure)
from hdeform.bar.functional.words import (add_to, coderivation_on_word, coderivation_on_combo,
                                          component_on_combo, morphism_on_word, morphism_on_combo,
                                          hat_morphism_on_word, evaluate_form)
from hdeform.exact.scalars import factorial_inverse, koszul_twist


def _series_bound(family) -> int:
    # words shrink or keep their length, coefficients in m die after the nilpotency index
    return family.weight * family.algebra.nilpotency_index + 1


def coder_exponential(f: CoderComponents) -> AInfMorphismComponents:
    """
    e^f = Σ f^n / n! for a degree 0 coderivation f, as an A∞ morphism up to weight W.
    The series must terminate on every word, i.e. f_1 has coefficients in m.
    """
    if f.degree != 0:
        raise ValueError(f"Only degree 0 coderivations exponentiate to A∞ morphisms, got degree {f.degree}")
    if not all(f.algebra.in_maximal_ideal(c) for c in _linear_entries(f)):
        raise ValueError("The linear component of the generator is not nilpotent, e^f does not terminate")
    space, algebra = f.space, f.algebra
    out = AInfMorphismComponents(space, 0, f.weight, None, algebra)
    bound = _series_bound(f)
    for arity in range(1, f.weight + 1):
        for word in space.words(arity):
            combo = {word: algebra.one}
            value = {}
            for n in range(bound + 1):
                projected = _project(combo)
                if projected:
                    scale = factorial_inverse(algebra, n)
                    for b, c in projected.items():
                        add_to(value, b, c * scale)
                combo = coderivation_on_combo(f, combo)
                if not combo:
                    break
            else:
                raise ValueError("Exponential series of the generator does not terminate")
            for b, c in value.items():
                out._store(arity, word, b, c)
    return out


def _linear_entries(f):
    for row in f.component(1).values():
        yield from row.values()


def _project(combo: dict) -> dict:
    return {word[0]: c for word, c in combo.items() if len(word) == 1}


def coder_logarithm(lam: AInfMorphismComponents) -> CoderComponents:
    """
    log λ = Σ_{n≥1} (-1)^(n+1) (λ - id)^n / n, a degree 0 coderivation when λ_1 - id is nilpotent
    """
    space, algebra = lam.space, lam.algebra
    identity = AInfMorphismComponents.identity(space, lam.weight, algebra)
    if not all(algebra.in_maximal_ideal(c) for c in _linear_entries(lam - identity)):
        raise ValueError("λ_1 - id is not nilpotent, log λ does not terminate")
    out = CoderComponents(space, 0, lam.weight, None, algebra)
    bound = _series_bound(lam)

    def shifted(combo):
        # (λ - id) on a combination of words
        result = morphism_on_combo(lam, combo)
        for word, c in combo.items():
            add_to(result, word, -c)
        return result

    for arity in range(1, lam.weight + 1):
        for word in space.words(arity):
            combo = shifted({word: algebra.one})
            value = {}
            for n in range(1, bound + 1):
                if not combo:
                    break
                p = algebra.field.p
                if p is not None and n % p == 0:
                    raise ValueError(f"1/{n} does not exist in characteristic {p}, log λ is undefined")
                scale = algebra.coerce(Fraction(1 if n % 2 else -1, n))
                for b, c in _project(combo).items():
                    add_to(value, b, c * scale)
                combo = shifted(combo)
            else:
                if combo:
                    raise ValueError("Logarithm series of the morphism does not terminate")
            for b, c in value.items():
                out._store(arity, word, b, c)
    return out


def morphism_inverse(lam: AInfMorphismComponents) -> AInfMorphismComponents:
    """
    λ^{-1} = e^{-log λ} for a unipotent morphism
    """
    return coder_exponential(-coder_logarithm(lam))


def compose_morphisms(lam: AInfMorphismComponents, mu: AInfMorphismComponents) -> AInfMorphismComponents:
    """
    components of λ∘μ
    """
    space, algebra = lam.space, lam.algebra
    out = AInfMorphismComponents(space, 0, lam.weight, None, algebra)
    for arity in range(1, lam.weight + 1):
        for word in space.words(arity):
            for b, c in component_on_combo(lam, morphism_on_word(mu, word)).items():
                out._store(arity, word, b, c)
    return out


def check_morphism(lam: AInfMorphismComponents, source: CoderComponents, target: CoderComponents) -> dict:
    """
    Checks λ∘D' = D∘λ up to weight W, λ going from (A, D') to (A, D).

    Returns:
        dict: 'ok' and the first failing arity (None when ok)
    """
    if lam.space != source.space or lam.space != target.space:
        raise ValueError("Morphism and structures live on different spaces")
    space = lam.space
    for arity in range(1, lam.weight + 1):
        for word in space.words(arity):
            left = component_on_combo(lam, coderivation_on_word(source, word))
            right = component_on_combo(target, morphism_on_word(lam, word))
            for b, c in right.items():
                add_to(left, b, -c)
            if left:
                return {'ok': False, 'arity': arity, 'inputs': word}
    return {'ok': True, 'arity': None, 'inputs': None}


def _split_marked(letters: tuple, mark: int) -> tuple:
    return letters[:mark], letters[mark], letters[mark + 1:]


def _transform_sides(lam, left: tuple, m: int, right: tuple) -> list:
    """
    λ applied to the algebra words on both sides of the module letter m, the coefficient of the
    right side moved in front of p ⊗ m
    """
    space = lam.space
    one = lam.algebra.one
    lefts = morphism_on_word(lam, left) if left else {(): one}
    rights = morphism_on_word(lam, right) if right else {(): one}
    return [(p, q, c * koszul_twist(d, space.word_degree(p) + space.suspended[m]))
            for p, c in lefts.items() for q, d in rights.items()]


def induce_structure_along(lam: AInfMorphismComponents, structure: ModuleStructure) -> ModuleStructure:
    """
    (D^M)^λ(a'_1..a'_k, m, b'_1..b'_l) = Σ pr_M D^M(λ(a'..), .., m, .., λ(..b'))
    """
    if lam.space != structure.space:
        raise ValueError("Morphism and module structure live on different spaces")
    space = structure.space
    out = structure.new()
    for k, l in out.slots():
        for letters in space.words(k + l + 1):
            left, m, right = _split_marked(letters, k)
            for p, q, c in _transform_sides(lam, left, m, right):
                row = structure.component((len(p), len(q))).get(p + (m,) + q)
                if not row:
                    continue
                for b, x in row.items():
                    out._store((k, l), letters, b, x * koszul_twist(c, structure.degree))
    return out


def induce_comap_along(lam: AInfMorphismComponents, comap: ComapComponents) -> ComapComponents:
    """
    F^λ(a'_1..a'_k, m, b'_1..b'_l)(x) = Σ pr_{A*} F(λ(a'..), .., m, .., λ(..b'))(x)
    """
    if lam.space != comap.space:
        raise ValueError("Morphism and comap live on different spaces")
    space = comap.space
    out = comap.new()
    for k, l in out.slots():
        for letters in space.words(k + l + 2):
            left, m, right = _split_marked(letters[:-1], k)
            x = letters[-1]
            for p, q, c in _transform_sides(lam, left, m, right):
                value = comap.value((len(p), len(q)), p + (m,) + q + (x,))
                if value:
                    out._store((k, l), letters, None, value * koszul_twist(c, comap.degree))
    return out


def bar_lambda(lam: AInfMorphismComponents) -> ModuleStructure:
    """
    λ̄_{k,l}(a'_1, ..., a'_{k+l+1}) = pr_A λ(a'_1, ..., a'_{k+l+1}), a bimodule map T^{A'}A' → T^A A
    """
    return ModuleStructure.from_coderivation(lam)


def tilde_lambda(lam: AInfMorphismComponents) -> ModuleStructure:
    """
    Bimodule map λ̃: T^{A'} A* → T^{A'} A'* with
    ⟨λ̃(P, φ, Q), y⟩ = (-1)^((‖P‖+‖φ‖)(‖Q‖+‖y‖)+‖φ‖) ⟨φ, λ(Q, y, P)⟩.
    Module letters and outputs of the returned tables are dual basis indices.
    """
    space = lam.space
    suspended = space.suspended
    tables = {}
    for arity, inputs, j, c in lam.entries():
        # inputs = Q + (y,) + P, every rotation gives one component
        for split in range(arity):
            q, y, p = inputs[:split], inputs[split], inputs[split + 1:]
            deg_p = sum(suspended[a] for a in p)
            deg_q = sum(suspended[a] for a in q)
            deg_phi = 2 - suspended[j]
            parity = (deg_p + deg_phi) * (deg_q + suspended[y]) + deg_phi
            value = -c if parity % 2 else c
            slot = (len(p), len(q))
            row = tables.setdefault(slot, {}).setdefault(p + (j,) + q, {})
            row[y] = row.get(y, lam.algebra.zero) + value
    return ModuleStructure(space, 0, lam.weight, tables, lam.algebra)


def _bimodule_map_on_word(structure: ModuleStructure, letters: tuple, mark: int, coeff) -> dict:
    """
    degree 0 bimodule map on a marked word: the component applied to every block around the module letter
    """
    out = {}
    suspended = structure.space.suspended
    coeff = koszul_twist(coeff, structure.degree)
    n = len(letters)
    for start in range(mark + 1):
        for stop in range(mark + 1, n + 1):
            row = structure.component((mark - start, stop - mark - 1)).get(letters[start:stop])
            if not row:
                continue
            for b, c in row.items():
                add_to(out, (letters[:start] + (b,) + letters[stop:], start),
                       koszul_twist(c, sum(suspended[a] for a in letters[:start])) * coeff)
    return out


def _comap_on_word(comap: ComapComponents, letters: tuple, mark: int, coeff) -> dict:
    dual = comap.as_dual_valued()
    out = {}
    suspended = comap.space.suspended
    coeff = koszul_twist(coeff, comap.degree)
    n = len(letters)
    for start in range(mark + 1):
        for stop in range(mark + 1, n + 1):
            row = dual.get((mark - start, stop - mark - 1), {}).get(letters[start:stop])
            if not row:
                continue
            for y, c in row.items():
                add_to(out, (letters[:start] + (y,) + letters[stop:], start),
                       koszul_twist(c, sum(suspended[a] for a in letters[:start])) * coeff)
    return out


def compose_bimodule_maps(lam: AInfMorphismComponents, comap: ComapComponents) -> ComapComponents:
    """
    λ̃∘F^λ∘λ̄ assembled from the three component tables, read back as pairing forms
    """
    space, algebra = comap.space, comap.algebra
    barred, tilde, induced = bar_lambda(lam), tilde_lambda(lam), induce_comap_along(lam, comap)
    out = comap.new()
    for k, l in out.slots():
        for letters in space.words(k + l + 1):
            combo = _bimodule_map_on_word(barred, letters, k, algebra.one)
            stage = {}
            for (word, mark), c in combo.items():
                for key, x in _comap_on_word(induced, word, mark, c).items():
                    add_to(stage, key, x)
            final = {}
            for (word, mark), c in stage.items():
                for key, x in _bimodule_map_on_word(tilde, word, mark, c).items():
                    add_to(final, key, x)
            for (word, mark), c in final.items():
                if len(word) == 1:
                    out._store((k, l), letters + (word[0],), None, c)
    return out


def partition_action(lam: AInfMorphismComponents, comap: ComapComponents) -> ComapComponents:
    """
    ω∘λ̂: λ applied to every cut of the cyclic word into segments with at most one special input
    """
    space = comap.space
    out = comap.new()
    for k, l in out.slots():
        for letters in space.words(k + l + 2):
            value = evaluate_form(comap, hat_morphism_on_word(lam, letters, k))
            if value:
                out._store((k, l), letters, None, value)
    return out
