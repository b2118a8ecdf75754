from typing import Sequence

from sympy.polys.matrices import DomainMatrix

from hdeform.exact.scalars import FieldSpec, koszul_twist


class LinearMapMatrix:
    """
    Exact matrix of a homogeneous linear map, columns indexed by the domain basis.

    Args:
        domain (list): labels of the domain basis
        codomain (list): labels of the codomain basis
        rows (list[list]): entries, one row per codomain label
        field (FieldSpec): ground field of the entries
        shift (int): homogeneous degree of the map
        domain_degrees (list[int]): degree of every domain label, optional
        codomain_degrees (list[int]): degree of every codomain label, optional
    """

    def __init__(self, domain: Sequence, codomain: Sequence, rows: Sequence[Sequence], field: FieldSpec,
                 shift: int = 0, domain_degrees: Sequence[int] = None, codomain_degrees: Sequence[int] = None):
        self.domain = list(domain)
        self.codomain = list(codomain)
        self.field = field
        self.shift = shift
        self.rows = [[field.coerce(x) for x in row] for row in rows]
        if len(self.rows) != len(self.codomain) or any(len(r) != len(self.domain) for r in self.rows):
            raise ValueError(f"Matrix shape does not match {len(self.codomain)}x{len(self.domain)} labels")
        self.domain_degrees = domain_degrees
        self.codomain_degrees = codomain_degrees

    @classmethod
    def from_columns(cls, domain, codomain, columns, field, **kwargs) -> 'LinearMapMatrix':
        rows = [[columns[j][i] for j in range(len(domain))] for i in range(len(codomain))]
        return cls(domain, codomain, rows, field, **kwargs)

    @property
    def shape(self) -> tuple:
        return len(self.codomain), len(self.domain)

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def check_homogeneous(self) -> bool:
        """
        every nonzero entry maps a domain degree d to codomain degree d + shift
        """
        if self.domain_degrees is None or self.codomain_degrees is None:
            return True
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if x and self.codomain_degrees[i] != self.domain_degrees[j] + self.shift:
                    return False
        return True

    def __matmul__(self, other: 'LinearMapMatrix') -> 'LinearMapMatrix':
        """
        composition self∘other, ring entries of other move past self
        """
        if self.domain != other.codomain:
            raise ValueError("Can not compose maps with mismatched bases")
        zero = self.field.zero
        rows = []
        for row in self.rows:
            out = []
            for j in range(len(other.domain)):
                acc = zero
                for k, x in enumerate(row):
                    if x:
                        acc = acc + x * koszul_twist(other.rows[k][j], self.shift)
                out.append(acc)
            rows.append(out)
        return LinearMapMatrix(other.domain, self.codomain, rows, self.field, shift=self.shift + other.shift,
                               domain_degrees=other.domain_degrees, codomain_degrees=self.codomain_degrees)

    def is_zero(self) -> bool:
        return not any(x for row in self.rows for x in row)


class Subspace:
    """
    Subspace of k^n given by a spanning list of vectors
    """

    def __init__(self, field: FieldSpec, ambient_dim: int, vectors: Sequence[Sequence]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.vectors = [list(v) for v in vectors]

    @property
    def dim(self) -> int:
        return _rank(self.vectors, self.ambient_dim, self.field)

    def __len__(self):
        return len(self.vectors)


def _rref(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> tuple:
    if not rows or ncols == 0:
        return [], ()
    matrix = DomainMatrix([list(r) for r in rows], (len(rows), ncols), field.domain)
    reduced, pivots = matrix.rref()
    return reduced.to_list(), tuple(pivots)


def _rank(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> int:
    return len(_rref(rows, ncols, field)[1])


def rank_kernel_image(matrix: LinearMapMatrix) -> tuple:
    """
    Exact elimination of a matrix over its field

    Returns:
        tuple(int, Subspace, Subspace): rank, kernel basis in the domain, image basis in the codomain
    """
    n_rows, n_cols = matrix.shape
    field = matrix.field
    reduced, pivots = _rref(matrix.rows, n_cols, field)

    kernel = []
    for free in (j for j in range(n_cols) if j not in pivots):
        vector = [field.zero] * n_cols
        vector[free] = field.one
        for r, pivot in enumerate(pivots):
            vector[pivot] = -reduced[r][free]
        kernel.append(vector)

    image = [matrix.column(j) for j in pivots]
    return len(pivots), Subspace(field, n_cols, kernel), Subspace(field, n_rows, image)


def quotient_dimension(kernel: Subspace, image: Subspace) -> int:
    """
    dim kernel - dim image, after checking image ⊆ kernel
    """
    if kernel.ambient_dim != image.ambient_dim:
        raise ValueError("kernel and image live in different spaces")
    dim_kernel = kernel.dim
    dim_image = image.dim
    joint = _rank(kernel.vectors + image.vectors, kernel.ambient_dim, kernel.field)
    if joint != dim_kernel:
        raise RuntimeError("Image is not contained in the kernel, the differential does not square to zero")
    return dim_kernel - dim_image


def solve_in_span(vectors: Sequence[Sequence], target: Sequence, field: FieldSpec) -> bool:
    """
    True if target lies in the span of vectors
    """
    n = len(target)
    return _rank(list(vectors) + [list(target)], n, field) == _rank(list(vectors), n, field)
