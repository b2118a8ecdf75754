"""
Formula free evaluators used as test oracles. The bar bicomodules are built as explicit based
vector spaces, induced maps are assembled as matrices on the word basis from the coLeibniz and
comap compatibility rules, and compositions are plain matrix products. Only the Koszul sign rule
is shared with the insertion engine.
"""
import itertools
from concurrent import futures

from hdeform.bar.components import CoderComponents, ComapComponents
from hdeform.deform.cohomology import h_basis, element_from_basis, coordinates
from hdeform.deform.h import HElement, HInstance, Polarization, h_bracket
from hdeform.dgla.core import gauge_exponential, mc_residual
from hdeform.exact.linalg import LinearMapMatrix, rank_kernel_image
from hdeform.exact.scalars import ArtinRingSpec, factorial_inverse, koszul_twist
from hdeform.pipeline import hdeform_logger as logger

SUPPORTED_BICOMODULES = ('A', 'A*')


def _sign(parity: int) -> int:
    return -1 if parity % 2 else 1


class TruncatedBicomodule:
    """
    All words a_1..a_k ⊗ m ⊗ b_1..b_l of T^M A with k + l + 1 ≤ W, M = A or A*. A word is a pair
    (letters, mark), letters[mark] being a basis index of M.
    """

    def __init__(self, space, which: str, weight: int):
        if which not in SUPPORTED_BICOMODULES:
            raise ValueError(f"Bicomodule must be one of {SUPPORTED_BICOMODULES}, got {which}")
        self.space = space
        self.which = which
        self.weight = weight
        self.words = [(letters, mark)
                      for n in range(1, weight + 1)
                      for mark in range(n)
                      for letters in itertools.product(range(space.dim), repeat=n)]
        self.index = {w: j for j, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)

    def expected_size(self) -> int:
        dim = self.space.dim
        return sum(dim ** (k + l) * dim for n in range(1, self.weight + 1) for k in range(n) for l in [n - 1 - k])

    def letter_degree(self, letter: int, is_module: bool) -> int:
        suspended = self.space.suspended[letter]
        return 2 - suspended if is_module and self.which == 'A*' else suspended

    def word_degrees(self, word) -> list:
        letters, mark = word
        return [self.letter_degree(a, j == mark) for j, a in enumerate(letters)]

    def label(self, word) -> str:
        letters, mark = word
        names = self.space.names
        module = '{}*' if self.which == 'A*' else '[{}]'
        return '⊗'.join(module.format(names[a]) if j == mark else names[a] for j, a in enumerate(letters))


def dual_module_components(f: CoderComponents) -> dict:
    """
    components of f^{A*} around the dual letter:
    ⟨f^{A*}(P, φ, Q), y⟩ = -(-1)^((‖P‖+‖φ‖)(‖Q‖+‖y‖)+‖φ‖) ⟨φ, f(Q, y, P)⟩, as (k, l) -> word -> {y: c}
    """
    suspended = f.space.suspended
    tables = {}
    for arity, inputs, j, c in f.entries():
        for split in range(arity):
            q, y, p = inputs[:split], inputs[split], inputs[split + 1:]
            deg_p = sum(suspended[a] for a in p)
            deg_q = sum(suspended[a] for a in q)
            deg_phi = 2 - suspended[j]
            value = -c * _sign((deg_p + deg_phi) * (deg_q + suspended[y]) + deg_phi)
            row = tables.setdefault((len(p), len(q)), {}).setdefault(p + (j,) + q, {})
            row[y] = row.get(y, f.algebra.zero) + value
    return tables


def _module_components(f: CoderComponents, which: str) -> dict:
    if which == 'A*':
        return dual_module_components(f)
    tables = {}
    for arity, inputs, out, c in f.entries():
        for k in range(arity):
            tables.setdefault((k, arity - 1 - k), {}).setdefault(inputs, {})[out] = c
    return tables


def _to_matrix(domain: TruncatedBicomodule, codomain: TruncatedBicomodule, columns: list, algebra,
               shift: int = 0) -> LinearMapMatrix:
    zero = algebra.zero
    rows = [[zero] * len(domain) for _ in range(len(codomain))]
    for j, column in enumerate(columns):
        for word, c in column.items():
            if word in codomain.index:
                rows[codomain.index[word]][j] = rows[codomain.index[word]][j] + c
    return LinearMapMatrix([domain.label(w) for w in domain.words], [codomain.label(w) for w in codomain.words],
                           rows, algebra, shift=shift)


def _coder_column(f: CoderComponents, module: dict, bicomodule: TruncatedBicomodule, word) -> dict:
    letters, mark = word
    degrees = bicomodule.word_degrees(word)
    column = {}
    for start in range(len(letters)):
        sign = _sign(f.degree * sum(degrees[:start]))
        for stop in range(start + 1, len(letters) + 1):
            block = letters[start:stop]
            if start <= mark < stop:
                row = module.get((mark - start, stop - mark - 1), {}).get(block, {})
                new_mark = start
            else:
                row = f.component(stop - start).get(block, {})
                new_mark = mark if mark < start else mark - (stop - start) + 1
            for b, c in row.items():
                key = (letters[:start] + (b,) + letters[stop:], new_mark)
                column[key] = column.get(key, f.algebra.zero) + koszul_twist(c, sum(degrees[:start])) * sign
    return column


def assemble_coderivation(f: CoderComponents, which: str = 'A', n_threads: int = 1) -> tuple:
    """
    matrix of the induced coderivation f^A or f^{A*} on the truncated bicomodule

    Returns:
        tuple(LinearMapMatrix, TruncatedBicomodule)
    """
    bicomodule = TruncatedBicomodule(f.space, which, f.weight)
    module = _module_components(f, which)
    with futures.ThreadPoolExecutor(max_workers=n_threads) as executor:
        columns = list(executor.map(lambda w: _coder_column(f, module, bicomodule, w), bicomodule.words))
    return _to_matrix(bicomodule, bicomodule, columns, f.algebra, f.degree), bicomodule


def assemble_comap(comap: ComapComponents, n_threads: int = 1) -> tuple:
    """
    matrix of F: T^A A → T^{A*} A, F(w) = Σ ± a_1..a_i ⊗ F_{k-i, j}(a_{i+1}, .., m, .., b_j) ⊗ b_{j+1}..
    with the sign (-1)^(|F| ‖a_1..a_i‖)
    """
    space = comap.space
    source = TruncatedBicomodule(space, 'A', comap.weight)
    target = TruncatedBicomodule(space, 'A*', comap.weight)
    dual = comap.as_dual_valued()

    def column(word):
        letters, mark = word
        out = {}
        for start in range(mark + 1):
            prefix = space.word_degree(letters[:start])
            sign = _sign(comap.degree * prefix)
            for stop in range(mark + 1, len(letters) + 1):
                row = dual.get((mark - start, stop - mark - 1), {}).get(letters[start:stop], {})
                for y, c in row.items():
                    key = (letters[:start] + (y,) + letters[stop:], start)
                    out[key] = out.get(key, comap.algebra.zero) + koszul_twist(c, prefix) * sign
        return out

    with futures.ThreadPoolExecutor(max_workers=n_threads) as executor:
        columns = list(executor.map(column, source.words))
    return _to_matrix(source, target, columns, comap.algebra, comap.degree), source, target


def assemble_induced_maps(item, n_threads: int = 1) -> dict:
    """
    explicit matrices on the truncated bicomodules: f^A and f^{A*} for a coderivation, F for a comap
    """
    if isinstance(item, CoderComponents):
        return {'A': assemble_coderivation(item, 'A', n_threads)[0],
                'A*': assemble_coderivation(item, 'A*', n_threads)[0]}
    if isinstance(item, ComapComponents):
        return {'comap': assemble_comap(item, n_threads)[0]}
    raise ValueError(f"Can not assemble induced maps of {type(item).__name__}")


def compose_delta_oracle(f: CoderComponents, comap: ComapComponents, n_threads: int = 1) -> ComapComponents:
    """
    δ_f(F) = f^{A*}∘F - (-1)^(|f||F|) F∘f^A as a product of assembled matrices, read back on the
    lowest components pr_{A*}
    """
    if f.space != comap.space or f.weight != comap.weight or f.algebra != comap.algebra:
        raise ValueError("Coderivation and comap live on different spaces, weights or rings")
    on_a, _ = assemble_coderivation(f, 'A', n_threads)
    on_dual, _ = assemble_coderivation(f, 'A*', n_threads)
    matrix, source, target = assemble_comap(comap, n_threads)
    sign = _sign(f.degree * comap.degree)
    left, right = on_dual @ matrix, matrix @ on_a

    out = ComapComponents(f.space, f.degree + comap.degree, comap.weight, None, comap.algebra)
    for j, (letters, mark) in enumerate(source.words):
        slot = (mark, len(letters) - mark - 1)
        if sum(slot) + 2 > comap.weight:
            continue
        for y in range(f.space.dim):
            i = target.index[((y,), 0)]
            value = left.rows[i][j] - right.rows[i][j] * sign
            if value:
                out._store(slot, letters + (y,), None, value)
    logger.debug(f"Delta oracle on {len(source)} words")
    return out


def _tensor_words(space, weight: int) -> list:
    return [w for n in range(1, weight + 1) for w in itertools.product(range(space.dim), repeat=n)]


def _coder_on_tensor_word(f: CoderComponents, word: tuple) -> dict:
    out = {}
    suspended = f.space.suspended
    for start in range(len(word)):
        prefix = sum(suspended[a] for a in word[:start])
        sign = _sign(f.degree * prefix)
        for stop in range(start + 1, len(word) + 1):
            for b, c in f.component(stop - start).get(word[start:stop], {}).items():
                key = word[:start] + (b,) + word[stop:]
                out[key] = out.get(key, f.algebra.zero) + koszul_twist(c, prefix) * sign
    return out


def check_coleibniz(f: CoderComponents, which: str = 'A') -> bool:
    """
    The assembled f^M is compatible with both TA-coactions on every basis word:
    Δ_L f^M = (f ⊗ 1 + 1 ⊗ f^M) Δ_L and Δ_R f^M = (f^M ⊗ 1 + 1 ⊗ f) Δ_R
    """
    matrix, bicomodule = assemble_coderivation(f, which)
    zero = f.algebra.zero

    def apply_module(word) -> dict:
        j = bicomodule.index[word]
        return {w: matrix.rows[i][j] for i, w in enumerate(bicomodule.words) if matrix.rows[i][j]}

    def accumulate(out, key, c):
        value = out.get(key, zero) + c
        if value:
            out[key] = value
        else:
            out.pop(key, None)

    for word in bicomodule.words:
        letters, mark = word
        degrees = bicomodule.word_degrees(word)
        for side in ('left', 'right'):
            lhs, rhs = {}, {}
            for image, c in apply_module(word).items():
                for key in _coaction(image, side):
                    accumulate(lhs, key, c)
            for outer, inner in _coaction(word, side):
                if side == 'left':
                    for a, c in _coder_on_tensor_word(f, outer).items():
                        accumulate(rhs, (a, inner), c)
                    passed = sum(degrees[:len(outer)])
                    sign = _sign(f.degree * passed)
                    for w, c in apply_module(inner).items():
                        accumulate(rhs, (outer, w), koszul_twist(c, passed) * sign)
                else:
                    for w, c in apply_module(inner).items():
                        accumulate(rhs, (outer, w), c)
                    passed = sum(degrees[:len(letters) - len(outer)])
                    sign = _sign(f.degree * passed)
                    for a, c in _coder_on_tensor_word(f, outer).items():
                        accumulate(rhs, (a, inner), koszul_twist(c, passed) * sign)
            if lhs != rhs:
                logger.warning(f"coLeibniz fails on {bicomodule.label(word)} ({side} coaction)")
                return False
    return True


def _coaction(word, side: str) -> list:
    """
    Δ_L w = Σ (a_1..a_i) ⊗ (a_{i+1}..m..), Δ_R w = Σ (..m..b_j) ⊗ (b_{j+1}..), non empty outer parts.
    Returns (outer, inner) pairs.
    """
    letters, mark = word
    out = []
    if side == 'left':
        for i in range(1, mark + 1):
            out.append((letters[:i], (letters[i:], mark - i)))
    else:
        for j in range(mark + 1, len(letters)):
            out.append((letters[j:], (letters[:j], mark)))
    return out


def iterate_ad(polarization: Polarization, generator: HElement, order: int = None) -> HElement:
    """
    Σ_{n ≤ N} ad(β)^n (D_R, I_R) / n! by literal iteration of the bracket of 𝔥
    """
    ring = generator.algebra
    order = ring.nilpotency_index if order is None else order
    term = polarization.extend(ring)
    total = HElement(term.f, term.i)
    term = HElement(term.f, term.i)
    for n in range(1, order + 1):
        term = h_bracket(generator, term)
        if term.is_zero():
            break
        total = total + term.scale(factorial_inverse(ring, n))
    return total


def _first_order_part(x: HElement, field) -> HElement:
    """
    coefficient of t of an element over k[t]/t^2
    """
    def part(family):
        out = family.new(algebra=field)
        for slot, inputs, o, c in family.entries():
            out._store(slot, inputs, o, c.poly.get((1,), field.zero))
        return out
    return HElement(part(x.f), part(x.i))


def brute_force_tangent_dimension(polarization: Polarization, weight: int = None) -> int:
    """
    Maurer-Cartan solutions modulo gauge over the dual numbers k[t]/t^2, by exhaustive linear
    algebra over the ring valued residual and gauge action
    """
    field = polarization.algebra
    weight = polarization.weight if weight is None else weight
    if weight != polarization.weight:
        polarization = Polarization(polarization.D.truncated(weight),
                                    polarization.I.truncated(weight) if polarization.has_inner else None)
    ring = ArtinRingSpec('t_adic', field, order=1)
    instance = HInstance(polarization, ring)
    space, t = polarization.space, ring.generator(0)
    solutions, generators = h_basis(space, 1, weight), h_basis(space, 0, weight)
    targets = h_basis(space, 2, weight)

    residuals = []
    for element in solutions:
        alpha = element_from_basis(space, 1, weight, ring, element, t)
        residual = _first_order_part(mc_residual(instance, alpha), field)
        residuals.append(coordinates(residual, targets) if not residual.is_zero() else [field.zero] * len(targets))
    rank_mc, _, _ = rank_kernel_image(LinearMapMatrix.from_columns(solutions, targets, residuals, field))

    orbits = []
    zero = instance.zero(1)
    for element in generators:
        beta = element_from_basis(space, 0, weight, ring, element, t)
        moved = _first_order_part(gauge_exponential(instance, beta, zero), field)
        orbits.append(coordinates(moved, solutions) if not moved.is_zero() else [field.zero] * len(solutions))
    rank_gauge, _, _ = rank_kernel_image(LinearMapMatrix.from_columns(generators, solutions, orbits, field))
    return len(solutions) - rank_mc - rank_gauge
