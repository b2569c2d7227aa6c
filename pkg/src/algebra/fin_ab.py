"""
Exact arithmetic for finite abelian groups

Groups are direct sums Z/m_1 + ... + Z/m_k, homomorphisms are integer
matrices (target rank x source rank) and every subgroup or quotient is
computed from integer lattices through the Smith normal form. Matrices are
numpy arrays of dtype object so entries are arbitrary-precision integers.
"""
import logging
import re
from dataclasses import dataclass
from itertools import product
from math import gcd, prod
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from ..utils.config import get_config
from ..utils.errors import CapExceededError, ConsistencyError, GroupSpecError, InvalidInputError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# integer matrices

def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def identity(size: int) -> np.ndarray:
    matrix = zeros(size, size)
    for k in range(size):
        matrix[k, k] = 1
    return matrix


def integer_matrix(rows, shape: Tuple[int, int] = None) -> np.ndarray:
    """Coerce nested lists or arrays to an object-dtype integer matrix"""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        matrix = zeros(*rows.shape)
        for (i, j), value in np.ndenumerate(rows):
            matrix[i, j] = int(value)
        return matrix
    rows = [list(row) for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    matrix = zeros(*shape)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            matrix[i, j] = int(value)
    return matrix


def diagonal_matrix(values: Sequence[int]) -> np.ndarray:
    matrix = zeros(len(values), len(values))
    for k, value in enumerate(values):
        matrix[k, k] = int(value)
    return matrix


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; object-dtype dot is avoided on empty inner dimensions"""
    if a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"Cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def hstack(*blocks: np.ndarray) -> np.ndarray:
    rows = blocks[0].shape[0]
    matrix = zeros(rows, sum(block.shape[1] for block in blocks))
    col = 0
    for block in blocks:
        matrix[:, col:col + block.shape[1]] = block
        col += block.shape[1]
    return matrix


def vstack(blocks: Sequence[np.ndarray], cols: int) -> np.ndarray:
    matrix = zeros(sum(block.shape[0] for block in blocks), cols)
    row = 0
    for block in blocks:
        matrix[row:row + block.shape[0], :] = block
        row += block.shape[0]
    return matrix


def determinant(matrix: np.ndarray) -> int:
    size = matrix.shape[0]
    if size == 0:
        return 1
    rows = [[ZZ(int(v)) for v in row] for row in matrix.tolist()]
    return int(DomainMatrix(rows, (size, size), ZZ).det())


class SmithNormalForm:
    """
    Smith normal form D = U * M * V by unimodular row and column operations.

    The pivot is always an entry of least absolute value, which keeps the
    intermediate entries small. Each transform (U, V) and its inverse is
    tracked only when requested, because the left transform of a tall
    coboundary matrix is much larger than the matrix itself.

    Args:
        matrix: Integer matrix, any shape
        left: Track U
        right: Track V
        inverses: Also track U^-1 and V^-1 for the tracked sides
    """

    def __init__(self, matrix, left: bool = True, right: bool = True, inverses: bool = False):
        if isinstance(matrix, np.ndarray) and matrix.dtype == object:
            self.matrix = matrix.copy()
        else:
            self.matrix = integer_matrix(matrix)
        rows, cols = self.matrix.shape
        self._a = self.matrix.copy()
        self.left = identity(rows) if left else None
        self.left_inv = identity(rows) if left and inverses else None
        self.right = identity(cols) if right else None
        self.right_inv = identity(cols) if right and inverses else None
        self._reduce()
        self.diagonal = [self._a[k, k] for k in range(min(rows, cols))]
        if get_config().CHECK_SNF:
            self.check()

    @property
    def form(self) -> np.ndarray:
        return self._a

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    # row operations act on U (and U^-1 from the right)
    def _swap_rows(self, a, b):
        if a == b:
            return
        self._a[[a, b]] = self._a[[b, a]]
        if self.left is not None:
            self.left[[a, b]] = self.left[[b, a]]
        if self.left_inv is not None:
            self.left_inv[:, [a, b]] = self.left_inv[:, [b, a]]

    def _add_row(self, target, source, k):
        self._a[target] += k * self._a[source]
        if self.left is not None:
            self.left[target] += k * self.left[source]
        if self.left_inv is not None:
            self.left_inv[:, source] -= k * self.left_inv[:, target]

    def _negate_row(self, a):
        self._a[a] *= -1
        if self.left is not None:
            self.left[a] *= -1
        if self.left_inv is not None:
            self.left_inv[:, a] *= -1

    # column operations act on V (and V^-1 from the left)
    def _swap_columns(self, a, b):
        if a == b:
            return
        self._a[:, [a, b]] = self._a[:, [b, a]]
        if self.right is not None:
            self.right[:, [a, b]] = self.right[:, [b, a]]
        if self.right_inv is not None:
            self.right_inv[[a, b]] = self.right_inv[[b, a]]

    def _eliminate(self, s):
        """Clear column s below and row s right of the pivot, leaving remainders"""
        a = self._a
        p = a[s, s]
        ks = -(a[s + 1:, s] // p)
        if np.any(ks != 0):
            a[s + 1:] += ks[:, None] * a[s][None, :]
            if self.left is not None:
                self.left[s + 1:] += ks[:, None] * self.left[s][None, :]
            if self.left_inv is not None:
                self.left_inv[:, s] -= matmul(self.left_inv[:, s + 1:], ks[:, None])[:, 0]
        ks = -(a[s, s + 1:] // p)
        if np.any(ks != 0):
            a[:, s + 1:] += a[:, s][:, None] * ks[None, :]
            if self.right is not None:
                self.right[:, s + 1:] += self.right[:, s][:, None] * ks[None, :]
            if self.right_inv is not None:
                self.right_inv[s] -= matmul(ks[None, :], self.right_inv[s + 1:])[0]

    def _reduce(self):
        a = self._a
        rows, cols = a.shape
        for s in range(min(rows, cols)):
            nonzero = np.argwhere(a[s:, s:] != 0)
            if len(nonzero) == 0:
                return
            values = [abs(a[s + i, s + j]) for i, j in nonzero]
            i, j = nonzero[int(np.argmin(values))]
            self._swap_rows(s, s + int(i))
            self._swap_columns(s, s + int(j))
            while True:
                self._eliminate(s)
                column = np.argwhere(a[s + 1:, s] != 0)
                row = np.argwhere(a[s, s + 1:] != 0)
                if len(column) or len(row):
                    # a remainder is smaller than the pivot: move the smallest one in
                    candidates = [(abs(a[s + 1 + int(r), s]), 'row', s + 1 + int(r)) for (r,) in column]
                    candidates += [(abs(a[s, s + 1 + int(c)]), 'col', s + 1 + int(c)) for (c,) in row]
                    _, kind, index = min(candidates)
                    if kind == 'row':
                        self._swap_rows(s, index)
                    else:
                        self._swap_columns(s, index)
                    continue
                bad = np.argwhere(a[s + 1:, s + 1:] % a[s, s] != 0)
                if len(bad):
                    self._add_row(s, s + 1 + int(bad[0][0]), 1)
                    continue
                break
            if a[s, s] < 0:
                self._negate_row(s)

    def check(self) -> None:
        """Algebraic postcondition: D = U M V, U and V unimodular, divisibility chain"""
        a = self._a
        rows, cols = a.shape
        off = a.copy()
        for k in range(min(rows, cols)):
            off[k, k] = 0
        if np.any(off != 0):
            raise ConsistencyError("Smith form is not diagonal")
        nonzero = [d for d in self.diagonal if d != 0]
        if any(d < 0 for d in self.diagonal):
            raise ConsistencyError("Smith diagonal has negative entries")
        if any(d == 0 for d in self.diagonal[:len(nonzero)]):
            raise ConsistencyError("Smith diagonal has a zero before a non-zero entry")
        for d1, d2 in zip(nonzero, nonzero[1:]):
            if d2 % d1 != 0:
                raise ConsistencyError(f"Smith diagonal breaks divisibility: {d1} does not divide {d2}")
        if self.left is not None and self.right is not None:
            if np.any(matmul(matmul(self.left, self.matrix), self.right) != a):
                raise ConsistencyError("U M V differs from D")
        for name in ('left', 'right'):
            transform = getattr(self, name)
            if transform is not None and abs(determinant(transform)) != 1:
                raise ConsistencyError(f"{name} transform is not unimodular")


def smith_normal_form(matrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Smith normal form of an integer matrix

    Args:
        matrix: Rectangular integer matrix

    Returns:
        (U, D, V) with D = U M V, U and V unimodular, d_1 | d_2 | ... on the diagonal
    """
    snf = SmithNormalForm(matrix)
    return snf.left, snf.form, snf.right


# ---------------------------------------------------------------------------
# groups, elements, homomorphisms

@dataclass(frozen=True)
class FinAbGroup:
    """Direct sum of cyclic groups Z/m_k; the empty sum is the trivial group"""
    moduli: Tuple[int, ...] = ()

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if any(m < 2 for m in moduli):
            raise InvalidInputError(f"Moduli must be at least 2, got {moduli}", witness=moduli)
        object.__setattr__(self, 'moduli', moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def is_trivial(self) -> bool:
        return not self.moduli

    def canonical_form(self) -> 'FinAbGroup':
        """Invariant factors m_1 | m_2 | ... of the same group"""
        if not self.moduli:
            return self
        snf = SmithNormalForm(diagonal_matrix(self.moduli), left=False, right=False)
        return FinAbGroup(tuple(d for d in snf.diagonal if d != 1))

    def is_isomorphic(self, other: 'FinAbGroup') -> bool:
        return self.canonical_form() == other.canonical_form()

    def power(self, copies: int) -> 'FinAbGroup':
        """Direct sum of `copies` copies, coordinate-major"""
        return FinAbGroup(self.moduli * copies)

    def direct_sum(self, other: 'FinAbGroup') -> 'FinAbGroup':
        return FinAbGroup(self.moduli + other.moduli)

    def zero(self) -> 'AbElement':
        return AbElement((0,) * self.rank, self)

    def element(self, coords: Iterable[int]) -> 'AbElement':
        return AbElement(tuple(int(c) % m for c, m in zip(coords, self.moduli)), self)

    def index_of(self, coords: Sequence[int]) -> int:
        """Position of an element in enumerate_elements order (mixed radix, last coordinate fastest)"""
        index = 0
        for c, m in zip(coords, self.moduli):
            index = index * m + int(c) % m
        return index

    def element_at(self, index: int) -> 'AbElement':
        coords = []
        for m in reversed(self.moduli):
            index, c = divmod(index, m)
            coords.append(c)
        return AbElement(tuple(reversed(coords)), self)

    def to_list(self) -> List[int]:
        return list(self.canonical_form().moduli)

    def __str__(self):
        if not self.moduli:
            return '1'
        return ' x '.join(f'Z/{m}' for m in self.moduli)


@dataclass(frozen=True)
class AbElement:
    """Element of a FinAbGroup as reduced residues"""
    coords: Tuple[int, ...]
    parent: FinAbGroup

    def __post_init__(self):
        if len(self.coords) != self.parent.rank:
            raise InvalidInputError(f"Element {self.coords} does not match rank {self.parent.rank}")
        if any(not 0 <= c < m for c, m in zip(self.coords, self.parent.moduli)):
            raise InvalidInputError(f"Element {self.coords} is not reduced", witness=self.coords)

    def __add__(self, other: 'AbElement') -> 'AbElement':
        return self.parent.element(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> 'AbElement':
        return self.parent.element(-a for a in self.coords)

    def __sub__(self, other: 'AbElement') -> 'AbElement':
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        result = 1
        for c, m in zip(self.coords, self.parent.moduli):
            k = m // gcd(c, m)
            result = result * k // gcd(result, k)
        return result


def _column(values: Sequence[int]) -> np.ndarray:
    return integer_matrix([[v] for v in values], shape=(len(values), 1))


class AbHom:
    """
    Homomorphism between finite abelian groups given by an integer matrix

    Rows are reduced modulo the target moduli. Well-definedness requires that
    m_j times column j vanishes in the target for every source modulus m_j.
    """

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix, check: bool = True):
        self.source = source
        self.target = target
        if not isinstance(matrix, np.ndarray) or matrix.dtype != object:
            matrix = integer_matrix(matrix, shape=(target.rank, source.rank))
        if matrix.shape != (target.rank, source.rank):
            raise InvalidInputError(
                f"Matrix shape {matrix.shape} does not match {target.rank} x {source.rank}"
            )
        if target.rank and source.rank:
            matrix = matrix % np.array(target.moduli, dtype=object)[:, None]
        self.matrix = matrix
        if check:
            self._check_well_defined()

    def _check_well_defined(self):
        if not (self.target.rank and self.source.rank):
            return
        scaled = self.matrix * np.array(self.source.moduli, dtype=object)[None, :]
        bad = np.argwhere(scaled % np.array(self.target.moduli, dtype=object)[:, None] != 0)
        if len(bad):
            i, j = (int(x) for x in bad[0])
            raise InvalidInputError(
                f"Matrix entry ({i}, {j}) does not respect orders "
                f"Z/{self.source.moduli[j]} -> Z/{self.target.moduli[i]}",
                witness=(i, j),
            )

    @classmethod
    def zero(cls, source: FinAbGroup, target: FinAbGroup) -> 'AbHom':
        return cls(source, target, zeros(target.rank, source.rank), check=False)

    @classmethod
    def identity(cls, group: FinAbGroup) -> 'AbHom':
        return cls(group, group, identity(group.rank), check=False)

    @classmethod
    def stack(cls, homs: Sequence['AbHom']) -> 'AbHom':
        """(f_1; ...; f_k): common source into the direct sum of the targets"""
        source = homs[0].source
        target = FinAbGroup(tuple(m for f in homs for m in f.target.moduli))
        return cls(source, target, vstack([f.matrix for f in homs], source.rank), check=False)

    def apply(self, x) -> AbElement:
        coords = x.coords if isinstance(x, AbElement) else tuple(x)
        if self.source.rank == 0:
            return self.target.zero()
        image = matmul(self.matrix, _column(coords))[:, 0]
        return self.target.element(image)

    def __call__(self, x) -> AbElement:
        return self.apply(x)

    def compose(self, inner: 'AbHom') -> 'AbHom':
        """self after inner"""
        if inner.target != self.source:
            raise InvalidInputError(f"Cannot compose: {inner.target} is not {self.source}")
        return AbHom(inner.source, self.target, matmul(self.matrix, inner.matrix), check=False)

    def __matmul__(self, inner: 'AbHom') -> 'AbHom':
        return self.compose(inner)

    def _same_shape(self, other: 'AbHom'):
        if self.source != other.source or self.target != other.target:
            raise InvalidInputError("Homomorphisms have different source or target")

    def __add__(self, other: 'AbHom') -> 'AbHom':
        self._same_shape(other)
        return AbHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: 'AbHom') -> 'AbHom':
        self._same_shape(other)
        return AbHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def scaled(self, k: int) -> 'AbHom':
        return AbHom(self.source, self.target, self.matrix * k, check=False)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.matrix != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbHom):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and not np.any(self.matrix != other.matrix))

    def __hash__(self):
        return hash((self.source, self.target, tuple(map(tuple, self.matrix.tolist()))))

    def first_difference(self, other: 'AbHom'):
        """Index of the first source generator on which the maps disagree, or None"""
        diff = np.argwhere(self.matrix != other.matrix)
        if len(diff) == 0:
            return None
        return int(min(diff[:, 1]))

    def __repr__(self):
        return f"AbHom({self.source} -> {self.target}, {self.matrix.tolist()})"


def expand_coordinate_matrix(coords: np.ndarray, group: FinAbGroup,
                             source_count: int, target_count: int) -> AbHom:
    """
    Lift a coordinate matrix acting on tuples of elements of `group` to an AbHom
    between group^source_count and group^target_count (Kronecker product with
    the identity on the rank of `group`).
    """
    rank = group.rank
    source = group.power(source_count)
    target = group.power(target_count)
    matrix = zeros(target.rank, source.rank)
    if rank:
        for (i, j), value in np.ndenumerate(coords):
            if value:
                for k in range(rank):
                    matrix[i * rank + k, j * rank + k] = value
    return AbHom(source, target, matrix, check=False)


# ---------------------------------------------------------------------------
# lattices, kernels, homology

class _Lattice:
    """Full-rank sublattice of Z^s spanned by the columns of frame * diag(scales)"""

    def __init__(self, frame: np.ndarray, frame_inv: np.ndarray, scales: Sequence[int]):
        self.frame = frame
        self.frame_inv = frame_inv
        self.scales = [int(s) for s in scales]

    @property
    def dimension(self) -> int:
        return len(self.scales)

    def basis(self) -> np.ndarray:
        return self.frame * np.array(self.scales, dtype=object)[None, :]

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates in the lattice basis; the vectors must lie in the lattice"""
        raw = matmul(self.frame_inv, vectors)
        scales = np.array(self.scales, dtype=object)[:, None]
        if raw.size and np.any(raw % scales != 0):
            raise ConsistencyError("vector outside the lattice")
        return raw // scales if raw.size else raw


def _kernel_lattice(f: AbHom) -> _Lattice:
    """Lattice of integer vectors x with f(x) = 0 in the target"""
    s, t = f.source.rank, f.target.rank
    if s == 0 or t == 0:
        return _Lattice(identity(s), identity(s), [1] * s)
    moduli = set(f.target.moduli)
    if len(moduli) == 1:
        # one target modulus n: M x = 0 mod n  <=>  D y = 0 mod n with x = V y
        n = moduli.pop()
        snf = SmithNormalForm(f.matrix, left=False, right=True, inverses=True)
        scales = [n // gcd(int(d), n) for d in snf.diagonal] + [1] * (s - len(snf.diagonal))
        return _Lattice(snf.right, snf.right_inv, scales)
    # mixed moduli: integer kernel of [M | diag(n)], projected to the source part
    lifted = SmithNormalForm(hstack(f.matrix, diagonal_matrix(f.target.moduli)), left=False, right=True)
    projected = lifted.right[:s, lifted.rank:]
    spanning = SmithNormalForm(hstack(projected, diagonal_matrix(f.source.moduli)),
                               left=True, right=False, inverses=True)
    return _Lattice(spanning.left_inv, spanning.left, spanning.diagonal[:s])


def _lattice_quotient(lattice: _Lattice, sub: np.ndarray) -> Tuple[List[int], List[np.ndarray]]:
    """Invariant factors of lattice / span(sub), with generator representatives in Z^s"""
    s = lattice.dimension
    if s == 0:
        return [], []
    relations = lattice.coordinates(sub)
    snf = SmithNormalForm(relations, left=True, right=False, inverses=True)
    if len(snf.diagonal) < s:
        raise ConsistencyError("quotient lattice is not of full rank")
    basis = lattice.basis()
    factors, generators = [], []
    for k, d in enumerate(snf.diagonal):
        if d == 0:
            raise ConsistencyError("quotient of finite groups came out infinite")
        if d != 1:
            factors.append(int(d))
            generators.append(matmul(basis, snf.left_inv[:, k:k + 1])[:, 0])
    return factors, generators


def hom_kernel(f: AbHom) -> Tuple[FinAbGroup, AbHom]:
    """
    Kernel of a homomorphism

    Args:
        f: Well-defined homomorphism

    Returns:
        (K, incl) with K in invariant-factor form and incl: K -> source injective, f o incl = 0
    """
    source = f.source
    lattice = _kernel_lattice(f)
    factors, generators = _lattice_quotient(lattice, diagonal_matrix(source.moduli))
    kernel = FinAbGroup(tuple(factors))
    logger.debug("Kernel of %s -> %s is %s", f.source, f.target, kernel)
    matrix = zeros(source.rank, kernel.rank)
    for k, column in enumerate(generators):
        matrix[:, k] = column
    return kernel, AbHom(kernel, source, matrix)


def homology_at(d_in: AbHom, d_out: AbHom) -> FinAbGroup:
    """
    ker(d_out) / im(d_in) in invariant-factor form

    Args:
        d_in: Map arriving at the middle group
        d_out: Map leaving the middle group

    Returns:
        The homology group
    """
    middle = d_out.source
    if d_in.target != middle:
        raise InvalidInputError(f"Middle groups differ: {d_in.target} vs {middle}")
    composite = d_out.compose(d_in)
    column = composite.first_difference(AbHom.zero(composite.source, composite.target))
    if column is not None:
        witness = tuple(1 if k == column else 0 for k in range(d_in.source.rank))
        raise InvalidInputError(
            f"Composite of the differentials is non-zero on generator {column}", witness=witness
        )
    lattice = _kernel_lattice(d_out)
    sub = hstack(d_in.matrix, diagonal_matrix(middle.moduli))
    factors, _ = _lattice_quotient(lattice, sub)
    return FinAbGroup(tuple(factors))


def lift_through(incl: AbHom, f: AbHom) -> AbHom:
    """
    Factor f through an injective inclusion: find g with incl o g = f

    Raises:
        ConsistencyError: when the image of f is not inside the image of incl
    """
    if incl.target != f.target:
        raise InvalidInputError("Maps do not share a target")
    sub, group, source = incl.source, f.target, f.source
    result = zeros(sub.rank, source.rank)
    if group.rank == 0 or source.rank == 0:
        return AbHom(source, sub, result, check=False)
    system = hstack(incl.matrix, diagonal_matrix(group.moduli))
    snf = SmithNormalForm(system, left=True, right=True)
    rhs = matmul(snf.left, f.matrix)
    for j in range(source.rank):
        solution = zeros(system.shape[1], 1)
        for k, d in enumerate(snf.diagonal):
            value = rhs[k, j]
            if d == 0 or value % d != 0:
                raise ConsistencyError(
                    f"Image of generator {j} does not lie in the subgroup"
                )
            solution[k, 0] = value // d
        result[:, j] = matmul(snf.right, solution)[:sub.rank, 0]
    return AbHom(source, sub, result)


class AbChainComplex:
    """
    Chain complex of finite abelian groups

    differentials[q] maps levels[q] to levels[q-1]; differentials[0] maps to
    the trivial group. d_q o d_{q+1} = 0 is checked on construction.
    """

    def __init__(self, levels: List[FinAbGroup], differentials: List[AbHom]):
        if len(levels) != len(differentials):
            raise InvalidInputError("One differential per level is required")
        self.levels = list(levels)
        self.differentials = list(differentials)
        for q in range(1, len(levels)):
            d = self.differentials[q]
            if d.source != levels[q] or d.target != levels[q - 1]:
                raise InvalidInputError(f"Differential {q} has the wrong source or target")
            below = self.differentials[q - 1]
            if not below.compose(d).is_zero:
                raise ConsistencyError(f"d_{q - 1} o d_{q} is not zero")

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def homology(self, q: int) -> FinAbGroup:
        """H_q; requires the level above to be present"""
        if not 0 <= q < self.top:
            raise InvalidInputError(f"H_{q} needs levels up to {q + 1}")
        return homology_at(self.differentials[q + 1], self.differentials[q])

    def homology_groups(self) -> List[FinAbGroup]:
        return [self.homology(q) for q in range(self.top)]


# ---------------------------------------------------------------------------
# text specs and enumeration

_TERM = re.compile(r'^Z/(\d+)$')


def group_from_spec(spec: str) -> FinAbGroup:
    """
    Parse `term ("x" term)*` with term "Z/<int>=2>" or "1"

    Args:
        spec: Group text such as "Z/2 x Z/4"

    Returns:
        The direct sum
    """
    text = spec.strip()
    if not text:
        raise GroupSpecError("Empty group specification", token=spec)
    moduli = []
    for token in re.split(r'\s*x\s*', text):
        token = token.strip()
        if token == '1':
            continue
        match = _TERM.match(token)
        if not match:
            raise GroupSpecError(f"Cannot parse group term '{token}'", token=token)
        modulus = int(match.group(1))
        if modulus < 2:
            raise GroupSpecError(f"Modulus in '{token}' must be at least 2", token=token)
        moduli.append(modulus)
    return FinAbGroup(tuple(moduli))


def enumerate_elements(group: FinAbGroup, cap: int) -> List[AbElement]:
    """
    All elements, lexicographic by coordinates, starting at zero

    Args:
        group: Finite abelian group
        cap: Largest order that may be enumerated

    Returns:
        List of elements
    """
    if group.order > cap:
        raise CapExceededError(
            f"Group {group} has order {group.order}, above the cap {cap}", group.order, cap
        )
    return [AbElement(coords, group) for coords in product(*(range(m) for m in group.moduli))]


def group_from_order_counts(order_counts: dict) -> FinAbGroup:
    """
    Recover an abelian group from how many elements have each order

    The counts |{x : p^k x = 0}| fix the p-primary part for every prime p.
    """
    order = sum(order_counts.values())
    if order == 1:
        return FinAbGroup()
    factors = []
    for p, exponent in factorint(order).items():
        # sizes of the p^k-torsion subgroups
        sizes = []
        for k in range(exponent + 1):
            sizes.append(sum(c for o, c in order_counts.items() if (p ** k) % o == 0))
        # number of cyclic summands of order >= p^k is log_p(size_k / size_{k-1})
        at_least = []
        for k in range(1, exponent + 1):
            ratio = sizes[k] // sizes[k - 1]
            count = 0
            while ratio > 1:
                ratio //= p
                count += 1
            at_least.append(count)
        at_least.append(0)
        for k in range(1, exponent + 1):
            factors.extend([p ** k] * (at_least[k - 1] - at_least[k]))
    return FinAbGroup(tuple(factors)).canonical_form()
