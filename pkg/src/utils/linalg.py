"""
Exact linear algebra over the Gaussian rationals.

Thin wrappers around ``DomainMatrix`` over ``QQ_I``. Row reduction is
fraction free (``rref_den``) with the library's deterministic pivoting;
vectors are plain lists of ``QQ_I`` elements and matrices are given by
their columns, the way operator matrices are built from basis images.
"""
import logging
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from ..core.exceptions import NotInvertibleError

logger = logging.getLogger(__name__)

Vector = List
Columns = Sequence[Sequence]

def _rows_from_columns(columns: Columns, nrows: int) -> List[List]:
    return [[col[r] for col in columns] for r in range(nrows)]

def matrix_from_columns(columns: Columns, nrows: int) -> DomainMatrix:
    """Matrix whose j-th column is ``columns[j]``."""
    return DomainMatrix(_rows_from_columns(columns, nrows), (nrows, len(columns)), QQ_I)

def rref(columns: Columns, nrows: int) -> Tuple[List[List], Tuple[int, ...]]:
    """Reduced row echelon form, normalised to unit pivots.

    Returns:
        (rows, pivots)
    """
    if nrows == 0 or not columns:
        return [[QQ_I.zero] * len(columns) for _ in range(nrows)], ()
    reduced, den, pivots = matrix_from_columns(columns, nrows).rref_den()
    rows = reduced.to_list()
    if den != QQ_I.one:
        rows = [[entry / den for entry in row] for row in rows]
    return rows, tuple(pivots)

def rank(columns: Columns, nrows: int) -> int:
    """Rank of the matrix with the given columns."""
    return len(rref(columns, nrows)[1])

def nullspace(columns: Columns, nrows: int) -> List[Vector]:
    """Basis of the kernel, one vector per free column in increasing order."""
    ncols = len(columns)
    rows, pivots = rref(columns, nrows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [QQ_I.zero] * ncols
        v[f] = QQ_I.one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(v)
    return basis

def apply(columns: Columns, nrows: int, vector: Sequence) -> Vector:
    """Matrix-vector product."""
    out = [QQ_I.zero] * nrows
    for coeff, col in zip(vector, columns):
        if not coeff:
            continue
        for r in range(nrows):
            if col[r]:
                out[r] += coeff * col[r]
    return out

def contains(span: Columns, vectors: Columns, nrows: int) -> Tuple[bool, Optional[int]]:
    """Whether every vector lies in the span of ``span``.

    Returns:
        (True, None), or (False, index of the first vector outside)
    """
    base = rank(span, nrows)
    current = list(span)
    for idx, v in enumerate(vectors):
        if rank(current + [v], nrows) > base:
            return False, idx
    return True, None

def solve(columns: Columns, nrows: int, rhs: Sequence, column_order: Optional[Sequence[int]] = None) -> Optional[Vector]:
    """Canonical solution of ``A x = b`` with every free variable set to zero.

    Args:
        columns: Columns of A
        nrows: Number of rows of A
        rhs: Right-hand side b
        column_order: Optional permutation deciding which unknowns are
            eliminated first; the solution is returned in the original order

    Returns:
        Solution vector, or None if the system is inconsistent
    """
    ncols = len(columns)
    order = list(column_order) if column_order is not None else list(range(ncols))
    if sorted(order) != list(range(ncols)):
        raise ValueError("column_order must be a permutation of the columns")
    if nrows == 0:
        return [QQ_I.zero] * ncols
    permuted = [columns[j] for j in order] + [list(rhs)]
    rows, pivots = rref(permuted, nrows)
    if ncols in pivots:
        return None
    x_perm = [QQ_I.zero] * ncols
    for r, pc in enumerate(pivots):
        x_perm[pc] = rows[r][ncols]
    x = [QQ_I.zero] * ncols
    for pos, j in enumerate(order):
        x[j] = x_perm[pos]
    return x

def invert(rows: Sequence[Sequence], name: str = "matrix") -> List[List]:
    """Exact inverse of a square matrix given by rows.

    Raises:
        NotInvertibleError: If the matrix is singular
    """
    size = len(rows)
    if size == 0:
        return []
    try:
        inverse = DomainMatrix([list(r) for r in rows], (size, size), QQ_I).inv()
    except DMNonInvertibleMatrixError as e:
        raise NotInvertibleError(f"{name} is singular") from e
    return inverse.to_list()
