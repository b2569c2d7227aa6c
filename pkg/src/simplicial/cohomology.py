"""
Cohomology of Map(K_*, B) for a simplicial group K

Cochains are all set maps from K_q to B (unnormalized, trivial action),
stored as B-valued vectors indexed by the enumeration of K_q. The
coboundary (delta f)(x) = sum_i (-1)^i f(d_i x) is assembled from face
index maps. Group cohomology uses K(G,1), secondary cohomology K(A,2).
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, List, Optional, Union

import galois
import numpy as np

from .core import SimplicialFamily
from .em_construct import KAn, KG1, KG1Abelian
from ..algebra.fin_ab import AbHom, FinAbGroup, homology_at, identity
from ..algebra.table_group import TableGroup, from_abelian
from ..utils.config import get_config
from ..utils.errors import CapExceededError, ConsistencyError, InvalidInputError
from ..utils.helpers import Stopwatch

logger = logging.getLogger(__name__)


@dataclass
class CochainComplex:
    """C^q = B^|K_q| with coboundaries delta^q: C^q -> C^{q+1}"""
    coefficients: FinAbGroup
    sizes: List[int]
    levels: List[FinAbGroup]
    coboundaries: List[np.ndarray]
    differentials: List[AbHom]

    @property
    def top(self) -> int:
        return len(self.differentials) - 1


@dataclass
class CohomologyResult:
    name: str
    coefficients: FinAbGroup
    groups: List[FinAbGroup]
    dims: List[int]
    timing: float = 0.0
    method: str = 'snf'

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        result = {
            'construction': self.name,
            'coefficients': self.coefficients.to_list(),
            'method': self.method,
            'groups': [g.to_list() for g in self.groups],
            'groups_text': [str(g) for g in self.groups],
            'dims': self.dims,
        }
        if include_timing:
            result['seconds'] = round(self.timing, 6)
        return result


def _check_sizes(family: SimplicialFamily, q_top: int, cap: int) -> List[int]:
    sizes = []
    for q in range(q_top + 2):
        size = family.level_size(q)
        if size > cap:
            raise CapExceededError(
                f"Level {q} of {family.name} has {size} elements, above the cap {cap}", size, cap
            )
        sizes.append(size)
    return sizes


def coboundary_matrix(family: SimplicialFamily, q: int) -> np.ndarray:
    """
    Integer matrix of delta^q: one row per element of K_{q+1}, one column per element of K_q

    Args:
        family: Abelian or table family
        q: Cochain degree

    Returns:
        int64 matrix with the alternating face pattern
    """
    rows = family.level_size(q + 1)
    matrix = np.zeros((rows, family.level_size(q)), dtype=np.int64)
    elements = np.arange(rows)
    for i in range(q + 2):
        np.add.at(matrix, (elements, family.face_index_map(q + 1, i)), (-1) ** i)
    return matrix


def _lift(matrix: np.ndarray, coefficients: FinAbGroup) -> np.ndarray:
    rank = coefficients.rank
    if rank == 1:
        return matrix.astype(object)
    return np.kron(matrix.astype(object), identity(rank))


def cochain_complex(family: SimplicialFamily, coefficients: FinAbGroup, q_top: int,
                    cap: Optional[int] = None) -> CochainComplex:
    """
    Map(K_*, B) up to degree q_top + 1

    Args:
        family: Abelian or table family
        coefficients: B
        q_top: Highest degree whose coboundary is built
        cap: Largest enumerated level; defaults to the configured cap

    Returns:
        CochainComplex with delta o delta = 0 verified
    """
    if family.kind not in ('abelian', 'table'):
        raise InvalidInputError("Cochains need an abelian or table family")
    cap = cap or get_config().ENUMERATION_CAP
    sizes = _check_sizes(family, q_top, cap)
    levels = [coefficients.power(size) for size in sizes]
    coboundaries, differentials = [], []
    for q in range(q_top + 1):
        matrix = coboundary_matrix(family, q)
        if coboundaries and np.any(matrix @ coboundaries[-1] != 0):
            raise ConsistencyError(f"delta^{q} o delta^{q - 1} is not zero on {family.name}")
        coboundaries.append(matrix)
        differentials.append(AbHom(levels[q], levels[q + 1], _lift(matrix, coefficients), check=False))
        logger.info("Cochain level %d of %s: %d elements", q, family.name, sizes[q])
    return CochainComplex(coefficients, sizes, levels, coboundaries, differentials)


def _cohomology(family: SimplicialFamily, coefficients: FinAbGroup, n_max: int,
                cap: Optional[int]) -> CohomologyResult:
    if n_max < 0:
        raise InvalidInputError(f"n_max must be non-negative, got {n_max}")
    with Stopwatch() as watch:
        complex_ = cochain_complex(family, coefficients, n_max, cap)
        groups = []
        for n in range(n_max + 1):
            incoming = (AbHom.zero(FinAbGroup(), complex_.levels[0]) if n == 0
                        else complex_.differentials[n - 1])
            groups.append(homology_at(incoming, complex_.differentials[n]).canonical_form())
    return CohomologyResult(family.name, coefficients, groups, complex_.sizes[:n_max + 1], watch.elapsed)


def coboundary_bits(family: SimplicialFamily, q: int) -> np.ndarray:
    """delta^q mod 2 as a 0/1 uint8 matrix; repeated faces cancel"""
    rows = family.level_size(q + 1)
    bits = np.zeros((rows, family.level_size(q)), dtype=np.uint8)
    elements = np.arange(rows)
    for i in range(q + 2):
        np.bitwise_xor.at(bits, (elements, family.face_index_map(q + 1, i)), 1)
    return bits


def rank_mod_two(bits: np.ndarray) -> int:
    """
    Rank over F_2 by XOR elimination on rows packed with np.packbits

    Args:
        bits: 0/1 matrix

    Returns:
        Rank of the matrix over F_2
    """
    if bits.shape[0] > bits.shape[1]:
        bits = bits.T
    n_rows, n_cols = bits.shape
    if n_rows == 0 or n_cols == 0:
        return 0
    packed = np.packbits(bits, axis=1)
    width = -(-packed.shape[1] // 8) * 8
    packed = np.ascontiguousarray(np.pad(packed, ((0, 0), (0, width - packed.shape[1]))))
    words = packed.view(np.uint64)
    rank = 0
    for col in range(n_cols):
        mask = np.uint8(0x80 >> (col & 7))
        hits = np.flatnonzero(packed[rank:, col >> 3] & mask) + rank
        if hits.size == 0:
            continue
        pivot = hits[0]
        if hits.size > 1:
            words[hits[1:]] ^= words[pivot]
        if pivot != rank:
            words[[rank, pivot]] = words[[pivot, rank]]
        rank += 1
        if rank == n_rows:
            break
    return rank


def _cohomology_mod_two(family: SimplicialFamily, coefficients: FinAbGroup, n_max: int,
                        cap: Optional[int]) -> CohomologyResult:
    if n_max < 0:
        raise InvalidInputError(f"n_max must be non-negative, got {n_max}")
    cap = cap or get_config().ENUMERATION_CAP
    with Stopwatch() as watch:
        sizes = _check_sizes(family, n_max, cap)
        ranks, previous = [], None
        for q in range(n_max + 1):
            bits = coboundary_bits(family, q)
            if previous is not None:
                square = bits.astype(np.float32) @ previous.astype(np.float32)
                if np.any(np.mod(square, 2)):
                    raise ConsistencyError(f"delta^{q} o delta^{q - 1} is not zero mod 2 on {family.name}")
            ranks.append(rank_mod_two(bits))
            logger.info("Cochain level %d of %s: %d elements, rank %d mod 2",
                        q, family.name, sizes[q], ranks[q])
            previous = bits
        groups = []
        for n in range(n_max + 1):
            dim = sizes[n] - ranks[n] - (ranks[n - 1] if n else 0)
            groups.append(FinAbGroup((2,) * (dim * coefficients.rank)))
    return CohomologyResult(family.name, coefficients, groups, sizes[:n_max + 1], watch.elapsed,
                            method='f2-packed')


def _kg1_family(group: Union[TableGroup, FinAbGroup]) -> SimplicialFamily:
    if isinstance(group, TableGroup):
        return KG1(group)
    return KG1Abelian(group)


def group_cohomology(group: Union[TableGroup, FinAbGroup], coefficients: FinAbGroup, n_max: int,
                     cap: Optional[int] = None) -> CohomologyResult:
    """
    H^n(G, B) with trivial action from the cochains on K(G,1)

    Args:
        group: G, abelian or given by a table
        coefficients: B
        n_max: Highest degree
        cap: Enumeration cap

    Returns:
        CohomologyResult with H^0..H^{n_max}
    """
    return _cohomology(_kg1_family(group), coefficients, n_max, cap)


def secondary_cohomology(group: FinAbGroup, coefficients: FinAbGroup, n_max: int,
                         cap: Optional[int] = None, method: str = 'auto') -> CohomologyResult:
    """
    Secondary cohomology from the cochains on K(A,2)

    Args:
        group: A
        coefficients: B
        n_max: Highest degree
        cap: Enumeration cap
        method: 'snf', 'f2-packed' for B = (Z/2)^k, or 'auto' to pick f2-packed whenever it applies

    Returns:
        CohomologyResult with H^0..H^{n_max}
    """
    mod_two = coefficients.rank > 0 and set(coefficients.moduli) == {2}
    if method not in ('auto', 'snf', 'f2-packed'):
        raise InvalidInputError(f"Unknown cohomology method {method!r}")
    if method == 'f2-packed' and not mod_two:
        raise InvalidInputError(f"f2-packed cochains need B = (Z/2)^k, got {coefficients}")
    if method == 'f2-packed' or (method == 'auto' and mod_two):
        return _cohomology_mod_two(KAn(group, 2), coefficients, n_max, cap)
    return _cohomology(KAn(group, 2), coefficients, n_max, cap)


def _prime_of(coefficients: FinAbGroup) -> int:
    moduli = set(coefficients.moduli)
    if len(moduli) != 1:
        raise InvalidInputError(f"{coefficients} is not elementary abelian")
    p = moduli.pop()
    if not galois.is_prime(p):
        raise InvalidInputError(f"{coefficients} is not elementary abelian: {p} is not prime")
    return p


def cohomology_over_prime_field(family: SimplicialFamily, coefficients: FinAbGroup, n_max: int,
                                cap: Optional[int] = None) -> CohomologyResult:
    """
    Same cohomology from ranks of the coboundaries over F_p, for B = (Z/p)^k

    Args:
        family: Abelian or table family
        coefficients: Elementary abelian B
        n_max: Highest degree
        cap: Enumeration cap

    Returns:
        CohomologyResult with method 'prime-field'
    """
    p = _prime_of(coefficients)
    field_ = galois.GF(p)
    cap = cap or get_config().ENUMERATION_CAP
    with Stopwatch() as watch:
        sizes = _check_sizes(family, n_max, cap)
        ranks = []
        for q in range(n_max + 1):
            matrix = coboundary_matrix(family, q) % p
            ranks.append(int(np.linalg.matrix_rank(field_(matrix))) if matrix.size else 0)
        groups = []
        for n in range(n_max + 1):
            dim = sizes[n] - ranks[n] - (ranks[n - 1] if n else 0)
            groups.append(FinAbGroup((p,) * (dim * coefficients.rank)))
    return CohomologyResult(family.name, coefficients, groups, sizes[:n_max + 1], watch.elapsed,
                            method='prime-field')


def bar_complex_cohomology(group: Union[TableGroup, FinAbGroup], coefficients: FinAbGroup,
                           n_max: int, cap: Optional[int] = None) -> CohomologyResult:
    """
    Group cohomology from the inhomogeneous bar complex, coded directly

    (delta f)(g_1..g_{n+1}) = f(g_2..g_{n+1}) + sum_i (-1)^i f(.., g_i g_{i+1}, ..)
                              + (-1)^{n+1} f(g_1..g_n)
    """
    table = group if isinstance(group, TableGroup) else from_abelian(group)
    m = table.order
    cap = cap or get_config().ENUMERATION_CAP
    if m ** (n_max + 1) > cap:
        raise CapExceededError(f"G^{n_max + 1} has {m ** (n_max + 1)} elements", m ** (n_max + 1), cap)

    def index(word) -> int:
        result = 0
        for g in word:
            result = result * m + g
        return result

    with Stopwatch() as watch:
        levels = [coefficients.power(m ** n) for n in range(n_max + 2)]
        differentials = []
        for n in range(n_max + 1):
            matrix = np.zeros((m ** (n + 1), m ** n), dtype=np.int64)
            for row, word in enumerate(product(range(m), repeat=n + 1)):
                matrix[row, index(word[1:])] += 1
                for i in range(1, n + 1):
                    merged = word[:i - 1] + (table.multiply(word[i - 1], word[i]),) + word[i + 1:]
                    matrix[row, index(merged)] += (-1) ** i
                matrix[row, index(word[:n])] += (-1) ** (n + 1)
            differentials.append(AbHom(levels[n], levels[n + 1], _lift(matrix, coefficients), check=False))
        groups = []
        for n in range(n_max + 1):
            incoming = AbHom.zero(FinAbGroup(), levels[0]) if n == 0 else differentials[n - 1]
            groups.append(homology_at(incoming, differentials[n]).canonical_form())
    return CohomologyResult(f'bar({table.name})', coefficients, groups,
                            [m ** n for n in range(n_max + 1)], watch.elapsed, method='bar')
