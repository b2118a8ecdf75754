"""
Word level engines for the bar construction.

Linear words are tuples of basis indices of A[1]. Marked cyclic words are pairs
(letters, mark): the last letter is the evaluation input x of a comap form and
letters[mark] is the module input m, so a marked word of length k + l + 2 with mark k
is read by the (k, l) form. Every sign is a Koszul sign in suspended degrees.

Ring coefficients stand in front of the word. A coefficient passing a map of degree p, or
letters of total degree p, is twisted by koszul_twist(c, p); over rings with even generators
the twist is the identity.
"""
import itertools

from hdeform.exact.graded import rotation_sign
from hdeform.exact.scalars import koszul_twist


def add_to(combo: dict, key, c):
    """
    accumulate c into combo[key], dropping cancelled entries
    """
    if not c:
        return
    if key in combo:
        c = combo[key] + c
        if c:
            combo[key] = c
        else:
            del combo[key]
    else:
        combo[key] = c


def coderivation_on_word(f, word: tuple, coeff=None) -> dict:
    """
    f(w) = Σ ± w[:i] ⊗ f_n(w[i:i+n]) ⊗ w[i+n:], the sign (-1)^(|f| ‖w[:i]‖)
    """
    space = f.space
    coeff = f.algebra.one if coeff is None else koszul_twist(coeff, f.degree)
    out = {}
    prefix_degree = 0
    for i in range(len(word)):
        for n in f.tables:
            if i + n > len(word):
                continue
            row = f.tables[n].get(word[i:i + n])
            if not row:
                continue
            sign = -1 if (f.degree * prefix_degree) % 2 else 1
            for b, c in row.items():
                add_to(out, word[:i] + (b,) + word[i + n:], koszul_twist(c, prefix_degree) * coeff * sign)
        prefix_degree += space.suspended[word[i]]
    return out


def coderivation_on_combo(f, combo: dict) -> dict:
    out = {}
    for word, coeff in combo.items():
        for new, c in coderivation_on_word(f, word, coeff).items():
            add_to(out, new, c)
    return out


def _block_product(space, choice, coeff):
    """
    coefficient of λ(B_1) ⊗ ... ⊗ λ(B_r): every block coefficient moves past the earlier outputs
    """
    c, passed = coeff, 0
    for b, x in choice:
        c = c * koszul_twist(x, passed)
        passed += space.suspended[b]
    return c


def morphism_on_word(lam, word: tuple, coeff=None) -> dict:
    """
    coalgebra map of degree 0: sum over all splittings of w into consecutive blocks, λ on every block
    """
    coeff = lam.algebra.one if coeff is None else coeff
    out = {}
    n = len(word)
    for cuts in _compositions(n):
        pieces = []
        for a, b in zip((0,) + cuts, cuts + (n,)):
            row = lam.tables.get(b - a, {}).get(word[a:b])
            if not row:
                break
            pieces.append(list(row.items()))
        else:
            for choice in itertools.product(*pieces):
                add_to(out, tuple(b for b, _ in choice), _block_product(lam.space, choice, coeff))
    return out


def morphism_on_combo(lam, combo: dict) -> dict:
    out = {}
    for word, coeff in combo.items():
        for new, c in morphism_on_word(lam, word, coeff).items():
            add_to(out, new, c)
    return out


def _compositions(n: int):
    """
    interior cut points of all ways to split n letters into consecutive non empty blocks
    """
    for r in range(n):
        for cuts in itertools.combinations(range(1, n), r):
            yield cuts


def component_on_combo(f, combo: dict) -> dict:
    """
    pr_A ∘ g for a coderivation or morphism g with components f: the full word goes into one component
    """
    out = {}
    for word, coeff in combo.items():
        coeff = koszul_twist(coeff, f.degree)
        for b, c in f.tables.get(len(word), {}).get(word, {}).items():
            add_to(out, b, c * coeff)
    return out


# marked cyclic words

def special_positions(n: int, mark: int) -> tuple:
    return mark, n - 1


def cyclic_blocks(n: int, mark: int):
    """
    (start, length) of every cyclically consecutive block holding at most one of the two special inputs
    """
    specials = special_positions(n, mark)
    for start in range(n):
        for length in range(1, n):
            inside = {(start + j) % n for j in range(length)}
            if sum(1 for s in specials if s in inside) <= 1:
                yield start, length


def _rotate(letters: tuple, degrees: list, start: int) -> tuple:
    return letters[start:] + letters[:start], rotation_sign(degrees, start)


def _normalize(space, letters: tuple, mark: int, x: int) -> tuple:
    """
    rotate so that the evaluation input is the last letter
    """
    n = len(letters)
    start = (x + 1) % n
    rotated, sign = _rotate(letters, [space.suspended[i] for i in letters], start)
    return rotated, (mark - start) % n, sign


def block_result_shape(n: int, mark: int, start: int, length: int) -> tuple:
    """
    (k', l') of the outer form after replacing a block by a single letter
    """
    m_pos, x_pos = ((mark - start) % n), ((n - 1 - start) % n)
    m_new = 0 if m_pos < length else m_pos - length + 1
    x_new = 0 if x_pos < length else x_pos - length + 1
    n_new = n - length + 1
    mark_new = (m_new - (x_new + 1)) % n_new
    return mark_new, n_new - mark_new - 2


def hat_on_word(f, letters: tuple, mark: int, coeff=None, dual=None) -> dict:
    """
    f̂ on a marked cyclic word: every admissible block is rotated to the front, replaced by the
    output of f, and the evaluation input is rotated back to the end. The output inherits the
    special role of a special input inside the block. Blocks around the evaluation input use
    `dual` instead of f when given.
    """
    space = f.space
    coeff = f.algebra.one if coeff is None else koszul_twist(coeff, f.degree)
    degrees = [space.suspended[i] for i in letters]
    n = len(letters)
    out = {}
    for start, length in cyclic_blocks(n, mark):
        m_pos, x_pos = (mark - start) % n, (n - 1 - start) % n
        coder = dual if (dual is not None and x_pos < length) else f
        row_map = coder.tables.get(length)
        if not row_map:
            continue
        rotated, sign = _rotate(letters, degrees, start)
        row = row_map.get(rotated[:length])
        if not row:
            continue
        m_new = 0 if m_pos < length else m_pos - length + 1
        x_new = 0 if x_pos < length else x_pos - length + 1
        for b, c in row.items():
            new, new_mark, sign2 = _normalize(space, (b,) + rotated[length:], m_new, x_new)
            add_to(out, (new, new_mark), c * coeff * (sign * sign2))
    return out


def cyclic_partitions(n: int, mark: int):
    """
    cut sets of the cycle into consecutive segments holding at most one special input each
    """
    specials = special_positions(n, mark)
    for r in range(2, n + 1):
        for cuts in itertools.combinations(range(n), r):
            bounds = cuts + (cuts[0] + n,)
            segments = [set(p % n for p in range(a, b)) for a, b in zip(bounds, bounds[1:])]
            if all(sum(1 for s in specials if s in seg) <= 1 for seg in segments):
                yield cuts


def hat_morphism_on_word(lam, letters: tuple, mark: int, coeff=None) -> dict:
    """
    λ̂ on a marked cyclic word for a degree 0 coalgebra map: sum over all cuts of the cycle into
    segments with at most one special input, λ applied to every segment.
    """
    space = lam.space
    coeff = lam.algebra.one if coeff is None else coeff
    degrees = [space.suspended[i] for i in letters]
    n = len(letters)
    out = {}
    for cuts in cyclic_partitions(n, mark):
        start = cuts[0]
        rotated, sign = _rotate(letters, degrees, start)
        local = [c - start for c in cuts] + [n]
        m_pos, x_pos = (mark - start) % n, (n - 1 - start) % n
        pieces = []
        m_new = x_new = None
        for j, (a, b) in enumerate(zip(local, local[1:])):
            row = lam.tables.get(b - a, {}).get(rotated[a:b])
            if not row:
                break
            pieces.append(list(row.items()))
            if a <= m_pos < b:
                m_new = j
            if a <= x_pos < b:
                x_new = j
        else:
            for choice in itertools.product(*pieces):
                c = _block_product(space, choice, coeff * sign)
                new, new_mark, sign2 = _normalize(space, tuple(b for b, _ in choice), m_new, x_new)
                add_to(out, (new, new_mark), c * sign2)
    return out


def evaluate_form(omega, combo: dict):
    """
    Σ c · ω_{k,l}(word) over a combination of marked words
    """
    total = omega.algebra.zero
    for (letters, mark), c in combo.items():
        slot = (mark, len(letters) - mark - 2)
        value = omega.tables.get(slot, {}).get(letters)
        if value:
            total = total + value * koszul_twist(c, omega.degree)
    return total
