"""
Explicit Eilenberg-MacLane simplicial groups

K(A,n) has level q equal to A^C(q,n), one coordinate per strictly increasing
n-tuple in lexicographic order. K(G,1) has level q equal to G^q for any
finite group G. The piecewise tables for n = 2 and n = 3 are encoded
separately so the general formula can be cross-checked against them.
"""
import logging
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import AbelianFamily, Failure, Step, TableFamily, VerificationReport, CYCLIC, DEGENERACY, FACE
from ..algebra.fin_ab import AbHom, FinAbGroup, expand_coordinate_matrix, zeros
from ..algebra.simplex_index import (
    binomial, degeneracy_rows, face_rows, level_ranks, level_tuples,
)
from ..algebra.table_group import TableGroup, from_abelian
from ..utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

Rows = List[List[Tuple[int, int]]]


def rows_to_matrix(rows: Rows, source_count: int) -> np.ndarray:
    matrix = zeros(len(rows), source_count)
    for r, row in enumerate(rows):
        for c, sign in row:
            matrix[r, c] += sign
    return matrix


def _check_index(i: int, q: int):
    if not 0 <= i <= q:
        raise InvalidInputError(f"Index {i} outside [0, {q}]", witness=i)


# ---------------------------------------------------------------------------
# K(A,n)

@lru_cache(maxsize=None)
def _kan_face_coords(n: int, q: int, i: int) -> np.ndarray:
    return rows_to_matrix(face_rows(i, q, n), binomial(q, n))


@lru_cache(maxsize=None)
def _kan_degeneracy_coords(n: int, q: int, i: int) -> np.ndarray:
    return rows_to_matrix(degeneracy_rows(i, q, n), binomial(q, n))


def kan_face_matrix(group: FinAbGroup, n: int, q: int, i: int) -> AbHom:
    """
    Face d_i: K(A,n)_q -> K(A,n)_{q-1}

    Args:
        group: Coefficient group A
        n: Degree
        q: Source level
        i: Face index

    Returns:
        AbHom laid out by rank_tuple
    """
    _check_index(i, q)
    coords = _kan_face_coords(n, q, i)
    return expand_coordinate_matrix(coords, group, binomial(q, n), binomial(q - 1, n))


def kan_degeneracy_matrix(group: FinAbGroup, n: int, q: int, i: int) -> AbHom:
    """Degeneracy s_i: K(A,n)_q -> K(A,n)_{q+1}"""
    _check_index(i, q)
    coords = _kan_degeneracy_coords(n, q, i)
    return expand_coordinate_matrix(coords, group, binomial(q, n), binomial(q + 1, n))


def ka2_cyclic_rows(q: int) -> Rows:
    """Rows of tau_q on K(A,2)_q; the identity below level 2"""
    ranks = level_ranks(q, 2)
    rows = []
    for t in level_tuples(q, 2):
        u, v = t.entries
        if u == 0:
            row = [(ranks[(v - 1, w)], 1) for w in range(v, q)]
            row += [(ranks[(v, w)], -1) for w in range(v + 1, q)]
        else:
            row = [(ranks[(u - 1, v - 1)], 1)]
        rows.append(row)
    return rows


def ka2_cyclic_matrix(group: FinAbGroup, q: int) -> AbHom:
    """Cyclic operator tau_q on K(A,2)_q"""
    count = binomial(q, 2)
    return expand_coordinate_matrix(rows_to_matrix(ka2_cyclic_rows(q), count), group, count, count)


class KAn(AbelianFamily):
    """
    K(A,n) with the general face and degeneracy formulas

    Args:
        group: Finite abelian group A
        n: Degree, at least 1
        face_rows_fn: Alternative (i, q, n) -> rows builder for the faces
        degeneracy_rows_fn: Alternative builder for the degeneracies
    """

    def __init__(self, group: FinAbGroup, n: int,
                 face_rows_fn: Optional[Callable[[int, int, int], Rows]] = None,
                 degeneracy_rows_fn: Optional[Callable[[int, int, int], Rows]] = None):
        if n < 1:
            raise InvalidInputError(f"Degree n must be at least 1, got {n}")
        super().__init__(f'K({group},{n})')
        self.group = group
        self.n = n
        self._face_rows_fn = face_rows_fn
        self._degeneracy_rows_fn = degeneracy_rows_fn
        self._cache: Dict[Tuple[str, int, int], AbHom] = {}

    @property
    def has_cyclic(self) -> bool:
        return self.n in (1, 2)

    def level(self, q: int) -> FinAbGroup:
        return self.group.power(binomial(q, self.n))

    def face(self, q: int, i: int) -> AbHom:
        key = (FACE, q, i)
        if key not in self._cache:
            if self._face_rows_fn is None:
                self._cache[key] = kan_face_matrix(self.group, self.n, q, i)
            else:
                _check_index(i, q)
                coords = rows_to_matrix(self._face_rows_fn(i, q, self.n), binomial(q, self.n))
                self._cache[key] = expand_coordinate_matrix(
                    coords, self.group, binomial(q, self.n), binomial(q - 1, self.n))
        return self._cache[key]

    def degeneracy(self, q: int, i: int) -> AbHom:
        key = (DEGENERACY, q, i)
        if key not in self._cache:
            if self._degeneracy_rows_fn is None:
                self._cache[key] = kan_degeneracy_matrix(self.group, self.n, q, i)
            else:
                _check_index(i, q)
                coords = rows_to_matrix(self._degeneracy_rows_fn(i, q, self.n), binomial(q, self.n))
                self._cache[key] = expand_coordinate_matrix(
                    coords, self.group, binomial(q, self.n), binomial(q + 1, self.n))
        return self._cache[key]

    def tau(self, q: int) -> AbHom:
        key = (CYCLIC, q, 0)
        if key not in self._cache:
            if self.n == 2:
                self._cache[key] = ka2_cyclic_matrix(self.group, q)
            elif self.n == 1:
                self._cache[key] = kg1_cyclic_matrix(self.group, q)
            else:
                raise InvalidInputError(f"No cyclic operator on {self.name}")
        return self._cache[key]


# ---------------------------------------------------------------------------
# K(G,1)

def _kg1_face_array(group: TableGroup, q: int, i: int, x: np.ndarray) -> np.ndarray:
    if i == 0:
        return x[:, 1:]
    if i == q:
        return x[:, :-1]
    merged = group.table[x[:, i - 1], x[:, i]][:, None]
    return np.hstack([x[:, :i - 1], merged, x[:, i + 1:]])


def _kg1_degeneracy_array(group: TableGroup, q: int, i: int, x: np.ndarray) -> np.ndarray:
    unit = np.zeros((len(x), 1), dtype=np.int64)
    return np.hstack([x[:, :i], unit, x[:, i:]])


def _kg1_cyclic_array(group: TableGroup, q: int, x: np.ndarray) -> np.ndarray:
    if q == 0:
        return x
    total = x[:, 0]
    for k in range(1, q):
        total = group.table[total, x[:, k]]
    return np.hstack([group.inverses[total][:, None], x[:, :q - 1]])


def _as_row(group: TableGroup, q: int, x: Sequence[int]) -> np.ndarray:
    if len(x) != q:
        raise InvalidInputError(f"Expected a {q}-tuple, got {tuple(x)}", witness=tuple(x))
    if any(not 0 <= g < group.order for g in x):
        raise InvalidInputError(f"Tuple {tuple(x)} has entries outside the group", witness=tuple(x))
    return np.array([list(x)], dtype=np.int64).reshape(1, q)


def kg1_face(group: TableGroup, q: int, i: int, x: Sequence[int]) -> Tuple[int, ...]:
    """d_i on G^q: drop g_0, drop g_{q-1}, or multiply g_{i-1} g_i"""
    _check_index(i, q)
    return tuple(_kg1_face_array(group, q, i, _as_row(group, q, x))[0].tolist())


def kg1_degeneracy(group: TableGroup, q: int, i: int, x: Sequence[int]) -> Tuple[int, ...]:
    """s_i on G^q: insert the identity at slot i"""
    _check_index(i, q)
    return tuple(_kg1_degeneracy_array(group, q, i, _as_row(group, q, x))[0].tolist())


def kg1_cyclic(group: TableGroup, q: int, x: Sequence[int]) -> Tuple[int, ...]:
    """tau_q(g_0, ..., g_{q-1}) = ((g_0 ... g_{q-1})^-1, g_0, ..., g_{q-2})"""
    return tuple(_kg1_cyclic_array(group, q, _as_row(group, q, x))[0].tolist())


class KG1(TableFamily):
    """K(G,1) over a multiplication table; level q holds q-tuples, componentwise product"""
    has_cyclic = True

    def __init__(self, group: Union[TableGroup, FinAbGroup]):
        if isinstance(group, FinAbGroup):
            group = from_abelian(group)
        super().__init__(f'K({group.name},1)')
        self.group = group

    def level_order(self, q: int) -> int:
        return self.group.order ** q

    def level_width(self, q: int) -> int:
        return q

    def radix(self) -> int:
        return self.group.order

    def multiply(self, q: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.group.table[x, y]

    def apply_array(self, step: Step, elements: np.ndarray) -> np.ndarray:
        if step.op == FACE:
            return _kg1_face_array(self.group, step.q, step.index, elements)
        if step.op == DEGENERACY:
            return _kg1_degeneracy_array(self.group, step.q, step.index, elements)
        if step.op == CYCLIC:
            return _kg1_cyclic_array(self.group, step.q, elements)
        raise InvalidInputError(f"{self.name} has no symmetric action")


def kg1_face_matrix(group: FinAbGroup, q: int, i: int) -> AbHom:
    """The K(G,1) face over an abelian G as a matrix on G^q"""
    _check_index(i, q)
    coords = zeros(max(q - 1, 0), q)
    for j in range(q - 1):
        if i == 0:
            coords[j, j + 1] = 1
        elif i == q or j < i - 1:
            coords[j, j] = 1
        elif j == i - 1:
            coords[j, i - 1] = 1
            coords[j, i] = 1
        else:
            coords[j, j + 1] = 1
    return expand_coordinate_matrix(coords, group, q, max(q - 1, 0))


def kg1_degeneracy_matrix(group: FinAbGroup, q: int, i: int) -> AbHom:
    _check_index(i, q)
    coords = zeros(q + 1, q)
    for j in range(q + 1):
        if j < i:
            coords[j, j] = 1
        elif j > i:
            coords[j, j - 1] = 1
    return expand_coordinate_matrix(coords, group, q, q + 1)


def kg1_cyclic_matrix(group: FinAbGroup, q: int) -> AbHom:
    coords = zeros(q, q)
    for j in range(q):
        if j == 0:
            coords[0, :] = -1
        else:
            coords[j, j - 1] = 1
    return expand_coordinate_matrix(coords, group, q, q)


class KG1Abelian(AbelianFamily):
    """K(G,1) over a finite abelian G, written with the K(G,1) formulas as matrices"""
    has_cyclic = True

    def __init__(self, group: FinAbGroup):
        super().__init__(f'K({group},1)')
        self.group = group
        self._cache: Dict[Tuple[str, int, int], AbHom] = {}

    def level(self, q: int) -> FinAbGroup:
        return self.group.power(q)

    def _cached(self, key: Tuple[str, int, int], build: Callable[[], AbHom]) -> AbHom:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def face(self, q: int, i: int) -> AbHom:
        return self._cached((FACE, q, i), lambda: kg1_face_matrix(self.group, q, i))

    def degeneracy(self, q: int, i: int) -> AbHom:
        return self._cached((DEGENERACY, q, i), lambda: kg1_degeneracy_matrix(self.group, q, i))

    def tau(self, q: int) -> AbHom:
        return self._cached((CYCLIC, q, 0), lambda: kg1_cyclic_matrix(self.group, q))


# ---------------------------------------------------------------------------
# piecewise tables for n = 2 and n = 3

def ka2_face_rows(i: int, q: int) -> Rows:
    """d_i on K(A,2)_q, case by case"""
    ranks = level_ranks(q, 2)
    rows = []
    for t in level_tuples(q - 1, 2):
        u, v = t.entries
        if v < i - 1:
            rows.append([(ranks[(u, v)], 1)])
        elif v == i - 1:
            rows.append([(ranks[(u, v)], 1), (ranks[(u, i)], 1), (ranks[(v, i)], -1)])
        elif u <= i - 1:
            rows.append([(ranks[(u, v + 1)], 1)])
        else:
            rows.append([(ranks[(u + 1, v + 1)], 1)])
    return rows


def ka2_degeneracy_rows(i: int, q: int) -> Rows:
    """s_i on K(A,2)_q, case by case"""
    ranks = level_ranks(q, 2)
    rows = []
    for t in level_tuples(q + 1, 2):
        u, v = t.entries
        if v < i:
            rows.append([(ranks[(u, v)], 1)])
        elif v == i:
            rows.append([])
        elif u < i:
            rows.append([(ranks[(u, v - 1)], 1)])
        elif u == i and u < v - 1:
            rows.append([(ranks[(u, v - 1)], 1)])
        elif u == i:
            rows.append([])
        else:
            rows.append([(ranks[(u - 1, v - 1)], 1)])
    return rows


def ka3_face_rows(i: int, q: int) -> Rows:
    """d_i on K(A,3)_q, case by case"""
    ranks = level_ranks(q, 3)
    rows = []
    for t in level_tuples(q - 1, 3):
        u, v, w = t.entries
        if w < i - 1:
            rows.append([(ranks[(u, v, w)], 1)])
        elif w == i - 1:
            rows.append([(ranks[(u, v, w)], 1), (ranks[(u, v, i)], 1),
                         (ranks[(u, w, i)], -1), (ranks[(v, w, i)], 1)])
        elif v <= i - 1:
            rows.append([(ranks[(u, v, w + 1)], 1)])
        elif u <= i - 1:
            rows.append([(ranks[(u, v + 1, w + 1)], 1)])
        else:
            rows.append([(ranks[(u + 1, v + 1, w + 1)], 1)])
    return rows


def ka3_degeneracy_rows(i: int, q: int) -> Rows:
    """s_i on K(A,3)_q, case by case"""
    ranks = level_ranks(q, 3)
    rows = []
    for t in level_tuples(q + 1, 3):
        u, v, w = t.entries
        if w < i:
            row = [(ranks[(u, v, w)], 1)]
        elif w == i:
            row = []
        elif v < i:
            row = [(ranks[(u, v, w - 1)], 1)]
        elif v == i:
            row = [(ranks[(u, v, w - 1)], 1)] if v < w - 1 else []
        elif u < i:
            row = [(ranks[(u, v - 1, w - 1)], 1)]
        elif u == i:
            row = [(ranks[(u, v - 1, w - 1)], 1)] if u < v - 1 else []
        else:
            row = [(ranks[(u - 1, v - 1, w - 1)], 1)]
        rows.append(row)
    return rows


TABLE_FACES = {2: ka2_face_rows, 3: ka3_face_rows}
TABLE_DEGENERACIES = {2: ka2_degeneracy_rows, 3: ka3_degeneracy_rows}


def _expanded(group: FinAbGroup, rows: Rows, n: int, q: int, target_q: int) -> AbHom:
    coords = rows_to_matrix(rows, binomial(q, n))
    return expand_coordinate_matrix(coords, group, binomial(q, n), binomial(target_q, n))


def crosscheck_specializations(group: FinAbGroup, q_max: int,
                               general_face: Callable[[int, int, int], Rows] = face_rows,
                               general_degeneracy: Callable[[int, int, int], Rows] = degeneracy_rows
                               ) -> VerificationReport:
    """
    Compare the general K(A,n) matrices with the piecewise tables (n = 2, 3)
    and with the K(G,1) formulas (n = 1)

    Args:
        group: Coefficient group A
        q_max: Highest source level compared
        general_face: (i, q, n) -> rows builder under test
        general_degeneracy: (i, q, n) -> rows builder under test

    Returns:
        VerificationReport; each failure names (n, q, i) and the first differing coordinate
    """
    failures: List[Failure] = []
    compared = 0
    rank = max(group.rank, 1)
    for n in (1, 2, 3):
        for q in range(q_max + 1):
            for i in range(q + 1):
                pairs = []
                if q >= 1:
                    general = _expanded(group, general_face(i, q, n), n, q, q - 1)
                    if n == 1:
                        table = kg1_face_matrix(group, q, i)
                    else:
                        table = _expanded(group, TABLE_FACES[n](i, q), n, q, q - 1)
                    pairs.append(('d', general, table, q - 1))
                general = _expanded(group, general_degeneracy(i, q, n), n, q, q + 1)
                if n == 1:
                    table = kg1_degeneracy_matrix(group, q, i)
                else:
                    table = _expanded(group, TABLE_DEGENERACIES[n](i, q), n, q, q + 1)
                pairs.append(('s', general, table, q + 1))
                for label, general, table, target_q in pairs:
                    compared += 1
                    bad = np.argwhere(general.matrix != table.matrix)
                    if len(bad) == 0:
                        continue
                    row = int(bad[0][0]) // rank
                    coordinate = list(level_tuples(target_q, n)[row].entries)
                    failures.append(Failure(
                        relation=f'general {label}_{i} = table {label}_{i}', family=f'n={n} {label}',
                        q=q, indices=(n, q, i), witness=coordinate,
                        lhs=general.matrix[int(bad[0][0])].tolist(),
                        rhs=table.matrix[int(bad[0][0])].tolist(), rank=row,
                    ))
    failures.sort(key=Failure.sort_key)
    logger.info("Cross-checked %d matrices over %s: %d mismatches", compared, group, len(failures))
    return VerificationReport(
        suite='crosscheck',
        relations_checked=compared,
        strategy={'kind': 'exact', 'q_max': q_max},
        failures=failures,
        counts={'matrices': compared},
    )
