import itertools
from typing import Iterable, Sequence

from hdeform.exact.scalars import FieldSpec


def suspended_degree(degree: int) -> int:
    """
    ‖a‖ = |a| + 1, since (V[1])^j = V^(j-1)
    """
    return degree + 1


def koszul_sign(moved_degrees: Sequence[int], passed_degrees: Sequence[int]) -> int:
    """
    Sign of moving a block of homogeneous elements past another block, (-1)^(|α||β|) for every
    elementary transposition of α over β. Degrees are suspended degrees.
    """
    parity = (sum(moved_degrees) * sum(passed_degrees)) % 2
    return -1 if parity else 1


def permutation_sign(degrees: Sequence[int], permutation: Sequence[int]) -> int:
    """
    Koszul sign of reordering elements of the given degrees into
    (x[permutation[0]], x[permutation[1]], ...).
    """
    if sorted(permutation) != list(range(len(degrees))):
        raise ValueError(f"{permutation} is not a permutation of {len(degrees)} elements")
    parity = 0
    for i, j in itertools.combinations(range(len(permutation)), 2):
        if permutation[i] > permutation[j]:
            parity += degrees[permutation[i]] * degrees[permutation[j]]
    return -1 if parity % 2 else 1


def rotation_sign(degrees: Sequence[int], start: int) -> int:
    """
    sign of the cyclic rotation (x_start, ..., x_n, x_1, ..., x_start-1)
    """
    return koszul_sign(degrees[:start], degrees[start:])


def suspension_sign(internal_degrees: Sequence[int]) -> int:
    """
    sign relating an n-input internal multilinear map to its suspended component,
    (-1)^(Σ_j (n-j)|a_j|) for j = 1..n. It is its own inverse.
    """
    n = len(internal_degrees)
    parity = sum((n - 1 - j) * d for j, d in enumerate(internal_degrees))
    return -1 if parity % 2 else 1


class GradedSpace:
    """
    Finite dimensional graded vector space with a named homogeneous basis.

    Args:
        basis (list[tuple[str, int]]): (name, internal degree) of every basis vector
        field (FieldSpec): ground field
    """

    def __init__(self, basis: Sequence[tuple], field: FieldSpec = None):
        names = [str(name) for name, _ in basis]
        if len(set(names)) != len(names):
            raise ValueError(f"Basis names must be unique, got {names}")
        if not names:
            raise ValueError("A graded space needs at least one basis vector")

        self.names = tuple(names)
        self.degrees = tuple(int(degree) for _, degree in basis)
        self.field = field if field is not None else FieldSpec()
        self._index = {name: i for i, name in enumerate(self.names)}
        self.suspended = tuple(suspended_degree(d) for d in self.degrees)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        if name not in self._index:
            raise ValueError(f"Unknown basis element '{name}', basis is {list(self.names)}")
        return self._index[name]

    def word_degree(self, word: Iterable[int]) -> int:
        return sum(self.suspended[i] for i in word)

    def words(self, length: int):
        """
        all basis words of a given length in lexicographic order
        """
        return itertools.product(range(self.dim), repeat=length)

    def words_of_degree(self, length: int, degree: int):
        return [w for w in self.words(length) if self.word_degree(w) == degree]

    def graded_piece(self, degree: int) -> list:
        return [i for i, d in enumerate(self.degrees) if d == degree]

    def dual(self) -> 'DualSpace':
        return DualSpace(self)

    def to_config(self) -> list:
        return [[n, d] for n, d in zip(self.names, self.degrees)]

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and not isinstance(other, DualSpace) and
                (self.names, self.degrees, self.field) == (other.names, other.degrees, other.field))

    def __hash__(self):
        return hash((self.names, self.degrees, self.field))

    def __repr__(self):
        pieces = ', '.join(f'{n}:{d}' for n, d in zip(self.names, self.degrees))
        return f'GradedSpace({pieces} over {self.field})'


class DualSpace(GradedSpace):
    """
    A* with the dual basis, (A*)^(-j) = (A^j)*. The suspended degree of e^j is 2 - ‖e_j‖,
    so the evaluation pairing A*[1] ⊗ A[1] → k has degree -2.
    """

    def __init__(self, space: GradedSpace):
        super().__init__([(f'{n}*', -d) for n, d in zip(space.names, space.degrees)], space.field)
        self.primal = space

    def dual(self) -> GradedSpace:
        return self.primal

    def __eq__(self, other):
        return isinstance(other, DualSpace) and self.primal == other.primal

    def __hash__(self):
        return hash(('dual', self.primal))


class TensorWord:
    """
    Word in the bar construction, a tuple of basis indices of one space with its total
    suspended degree cached
    """
    __slots__ = ('space', 'letters', 'degree')

    def __init__(self, space: GradedSpace, letters: Sequence[int]):
        self.space = space
        self.letters = tuple(letters)
        self.degree = space.word_degree(self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, TensorWord) and (self.space, self.letters) == (other.space, other.letters)

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return '⊗'.join(self.space.names[i] for i in self.letters) or '1'
