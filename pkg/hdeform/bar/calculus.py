from typing import NamedTuple

from hdeform.bar.components import CoderComponents, ComapComponents
from hdeform.bar.functional.words import (add_to, coderivation_on_word, component_on_combo, cyclic_blocks,
                                          block_result_shape, hat_on_word, evaluate_form)
from hdeform.exact.scalars import koszul_twist

SUPPORTED_MODULES = ('A', 'A*')


class InsertionTerm(NamedTuple):
    """
    One way of inserting f_n into a (k, l) pairing: the block of n cyclically consecutive inputs
    starting at `position` (1-based, the evaluation input being the last one), whether it wraps
    past the evaluation input, and the shape (k', l') of the outer pairing.
    """
    n: int
    position: int
    wraps: bool
    result: tuple

    def __str__(self):
        return (f"f_{self.n} @ position {self.position} ({'wrap' if self.wraps else 'nowrap'}) "
                f"-> ({self.result[0]},{self.result[1]})")


def enumerate_insertion_terms(k: int, l: int, weight: int = None) -> list:
    """
    All insertions of a component f_n into the (k, l) form, n ≤ weight. The module input and
    the evaluation input are never both inside the block.
    """
    if k < 0 or l < 0:
        raise ValueError(f"(k, l) must be non negative, got ({k}, {l})")
    n_inputs = k + l + 2
    weight = n_inputs if weight is None else weight
    terms = []
    for start, length in cyclic_blocks(n_inputs, k):
        if length > weight:
            continue
        terms.append(InsertionTerm(length, start + 1, start + length > n_inputs,
                                   block_result_shape(n_inputs, k, start, length)))
    return sorted(terms, key=lambda t: (t.position, t.n))


def _check_same_space(*families):
    first = families[0]
    for other in families[1:]:
        if other.space != first.space:
            raise ValueError("Component families live on different spaces")
        if other.weight != first.weight:
            raise ValueError(f"Mismatched truncation weights {first.weight} and {other.weight}")
        if other.algebra != first.algebra:
            raise ValueError(f"Mismatched coefficient algebras {first.algebra} and {other.algebra}")


def _sign(parity: int) -> int:
    return -1 if parity % 2 else 1


def coder_bracket(f: CoderComponents, g: CoderComponents) -> CoderComponents:
    """
    [f, g] = f∘g - (-1)^(|f||g|) g∘f, computed component wise up to the truncation weight
    """
    _check_same_space(f, g)
    space = f.space
    twist = _sign(f.degree * g.degree)
    out = CoderComponents(space, f.degree + g.degree, f.weight, None, f.algebra)
    if f.is_zero() or g.is_zero():
        return out
    for arity in range(1, f.weight + 1):
        for word in space.words(arity):
            value = component_on_combo(f, coderivation_on_word(g, word))
            for b, c in component_on_combo(g, coderivation_on_word(f, word)).items():
                add_to(value, b, -c * twist)
            for b, c in value.items():
                out._store(arity, word, b, c)
    return out


class InducedCoderAction:
    """
    Induced coderivation of f on the bicomodule T^A A (which='A') or T^{A*} A (which='A*').
    Words are pairs (letters, mark): letters[mark] is the module letter, a basis index of A or of
    the dual basis of A*. On T^{A*} A a block around the dual letter φ = e^j acts by the rotated
    transpose ⟨f^{A*}(P, φ, Q), y⟩ = -(-1)^((‖P‖+‖φ‖)(‖Q‖+‖y‖)+‖φ‖) ⟨φ, f(Q, y, P)⟩.
    """

    def __init__(self, f: CoderComponents, which: str = 'A'):
        if which not in SUPPORTED_MODULES:
            raise ValueError(f"Induced module must be one of {SUPPORTED_MODULES}, got {which}")
        self.coder = f
        self.which = which
        self.space = f.space
        self.degree = f.degree
        self.algebra = f.algebra

    def letter_degree(self, letter: int, is_module: bool) -> int:
        if is_module and self.which == 'A*':
            return 2 - self.space.suspended[letter]
        return self.space.suspended[letter]

    def __call__(self, letters: tuple, mark: int, coeff=None) -> dict:
        f = self.coder
        coeff = self.algebra.one if coeff is None else koszul_twist(coeff, f.degree)
        degrees = [self.letter_degree(a, j == mark) for j, a in enumerate(letters)]
        out = {}
        for i in range(len(letters)):
            prefix = sum(degrees[:i])
            sign = _sign(f.degree * prefix)
            for n, table in f.tables.items():
                if i + n > len(letters):
                    continue
                inside = i <= mark < i + n
                if inside and self.which == 'A*':
                    self._dual_block(letters, mark, i, n, coeff * sign, degrees, out)
                    continue
                row = table.get(letters[i:i + n])
                if not row:
                    continue
                new_mark = i if inside else (mark if mark < i else mark - n + 1)
                for b, c in row.items():
                    add_to(out, (letters[:i] + (b,) + letters[i + n:], new_mark),
                           koszul_twist(c, prefix) * coeff * sign)
        return out

    def _dual_block(self, letters, mark, i, n, coeff, degrees, out):
        table = self.coder.tables[n]
        before, after = letters[i:mark], letters[mark + 1:i + n]
        deg_p, deg_q = sum(degrees[i:mark]), sum(degrees[mark + 1:i + n])
        deg_phi = degrees[mark]
        prefix = sum(degrees[:i])
        j = letters[mark]
        for y in range(self.space.dim):
            row = table.get(after + (y,) + before)
            if not row or j not in row:
                continue
            sign = -_sign((deg_p + deg_phi) * (deg_q + self.space.suspended[y]) + deg_phi)
            add_to(out, (letters[:i] + (y,) + letters[i + n:], i), koszul_twist(row[j], prefix) * coeff * sign)

    def on_combo(self, combo: dict) -> dict:
        out = {}
        for (letters, mark), coeff in combo.items():
            for key, c in self(letters, mark, coeff).items():
                add_to(out, key, c)
        return out


def induced_coder_module(f: CoderComponents, which: str = 'A') -> InducedCoderAction:
    """
    evaluator for the induced coderivation f^A or f^{A*}
    """
    return InducedCoderAction(f, which)


def _filter_degree(family) -> bool:
    algebra = family.algebra
    return algebra.is_field or not any(algebra.degrees)


def _insert(f: CoderComponents, i: ComapComponents, dual: CoderComponents = None) -> ComapComponents:
    """
    -(-1)^(|f||i|) i∘f̂, all admissible insertions of f into the forms of i
    """
    _check_same_space(f, i)
    space = f.space
    degree = f.degree + i.degree
    out = ComapComponents(space, degree, i.weight, None, i.algebra)
    if i.is_zero() or (f.is_zero() and (dual is None or dual.is_zero())):
        return out
    overall = -_sign(f.degree * i.degree)
    filtered = _filter_degree(i)
    for slot in out.slots():
        k, l = slot
        for letters in space.words(k + l + 2):
            if filtered and space.word_degree(letters) + degree != 2:
                continue
            value = evaluate_form(i, hat_on_word(f, letters, k, dual=dual))
            if value:
                out._store(slot, letters, None, value * overall)
    return out


def delta_f(f: CoderComponents, i: ComapComponents) -> ComapComponents:
    """
    δ_f(i) = f^{A*}∘i - (-1)^(|f||i|) i∘f^A by inserting f into the pairings of i in all combinations
    """
    return _insert(f, i)


def comap_differential(dm: InducedCoderAction, dn: InducedCoderAction, comap: ComapComponents) -> ComapComponents:
    """
    δ^{M,N}(F) = D^N∘F - (-1)^|F| F∘D^M for D^M on T^A A and D^N on T^{A*} A
    """
    if dm.which != 'A' or dn.which != 'A*':
        raise ValueError("comap_differential expects the actions on T^A A and T^{A*} A")
    if dm.degree != dn.degree:
        raise ValueError(f"Module structures have different degrees {dm.degree} and {dn.degree}")
    if dm.coder == dn.coder:
        return _insert(dm.coder, comap)
    return _insert(dm.coder, comap, dual=dn.coder)
