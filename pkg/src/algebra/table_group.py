"""
Finite groups given by multiplication tables

Elements are the integers 0..m-1 with 0 the identity; row a, column b of
the table holds a*b. Built-in groups come from sympy's permutation groups,
abelian groups from their coordinate enumeration.
"""
import logging
import re
from collections import Counter
from typing import Dict, List, Optional, Sequence

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import DihedralGroup, SymmetricGroup

from .fin_ab import FinAbGroup, enumerate_elements, group_from_spec
from ..utils.errors import GroupSpecError, InvalidInputError

logger = logging.getLogger(__name__)


class TableGroup:
    """
    Finite (possibly non-abelian) group with an explicit multiplication table

    Args:
        table: m x m array, table[a, b] = a*b
        name: Display name
        labels: Optional element labels for reports
    """

    def __init__(self, table, name: str = 'G', labels: Optional[List[str]] = None):
        table = np.asarray(table, dtype=np.int64)
        self.name = name
        self.table = table
        self.labels = labels or [str(k) for k in range(len(table))]
        self._validate()
        self.inverses = np.array([int(np.flatnonzero(row == 0)[0]) for row in table], dtype=np.int64)
        self.table.setflags(write=False)
        self.inverses.setflags(write=False)

    def _validate(self):
        table = self.table
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidInputError(f"Multiplication table must be square, got shape {table.shape}")
        m = table.shape[0]
        if table.min() < 0 or table.max() >= m:
            raise InvalidInputError("Table entries must lie in [0, m)")
        elements = np.arange(m)
        if np.any(table[0] != elements) or np.any(table[:, 0] != elements):
            raise InvalidInputError("Element 0 must be the identity")
        # latin square rows and columns give unique solutions, hence inverses
        for k in range(m):
            if len(set(table[k].tolist())) != m or len(set(table[:, k].tolist())) != m:
                raise InvalidInputError(f"Row or column {k} is not a permutation", witness=k)
        left = table[table]
        right = table[elements[:, None, None], table[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = (int(x) for x in bad[0])
            raise InvalidInputError(f"Table is not associative at ({a}, {b}, {c})", witness=(a, b, c))

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def identity(self) -> int:
        return 0

    def multiply(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def product(self, elements: Sequence[int]) -> int:
        result = 0
        for g in elements:
            result = int(self.table[result, g])
        return result

    @property
    def is_abelian(self) -> bool:
        return bool(np.all(self.table == self.table.T))

    def element_order(self, a: int) -> int:
        k, power = 1, a
        while power != 0:
            power = int(self.table[power, a])
            k += 1
        return k

    def order_histogram(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.element_order(a) for a in range(self.order)).items()))

    def __repr__(self):
        return f"TableGroup({self.name}, order={self.order})"


def cyclic(n: int) -> TableGroup:
    if n < 1:
        raise InvalidInputError(f"Cyclic group order must be positive, got {n}")
    k = np.arange(n)
    return TableGroup((k[:, None] + k[None, :]) % n, name=f'Z/{n}')


def from_permutation_group(group: PermutationGroup, name: str) -> TableGroup:
    """Multiplication table of a permutation group, identity first, then by array form"""
    elements = sorted(group.generate(), key=lambda p: (not p.is_Identity, p.array_form))
    index = {tuple(p.array_form): k for k, p in enumerate(elements)}
    table = [[index[tuple((a * b).array_form)] for b in elements] for a in elements]
    labels = [str(p.cyclic_form) for p in elements]
    return TableGroup(table, name=name, labels=labels)


def symmetric3() -> TableGroup:
    return from_permutation_group(SymmetricGroup(3), 'S3')


def dihedral4() -> TableGroup:
    """Symmetries of the square, order 8"""
    return from_permutation_group(DihedralGroup(4), 'D4')


def quaternion() -> TableGroup:
    """Q8 as its regular representation on 8 points"""
    i = Permutation([[0, 1, 2, 3], [4, 5, 6, 7]])
    j = Permutation([[0, 4, 2, 6], [1, 7, 3, 5]])
    return from_permutation_group(PermutationGroup([i, j]), 'Q8')


def from_abelian(group: FinAbGroup) -> TableGroup:
    """Table of a finite abelian group in enumerate_elements order"""
    elements = enumerate_elements(group, cap=group.order)
    table = [[group.index_of((a + b).coords) for b in elements] for a in elements]
    labels = [','.join(str(c) for c in x.coords) or 'e' for x in elements]
    return TableGroup(table, name=str(group), labels=labels)


BUILTIN_GROUPS = {
    'S3': symmetric3,
    'D4': dihedral4,
    'Q8': quaternion,
}


def table_group_from_spec(spec: str) -> TableGroup:
    """
    Resolve a group name: a built-in (S3, D4, Q8), C<n>, or an abelian group spec

    Args:
        spec: Group text

    Returns:
        The group as a TableGroup
    """
    text = spec.strip()
    if text in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[text]()
    match = re.fullmatch(r'C(\d+)', text)
    if match:
        return cyclic(int(match.group(1)))
    try:
        return from_abelian(group_from_spec(text))
    except GroupSpecError as exc:
        raise GroupSpecError(
            f"Unknown group '{text}'; expected S3, D4, Q8, C<n> or an abelian spec", token=exc.token
        ) from exc


def load_table_group(path: str, name: Optional[str] = None) -> TableGroup:
    """
    Load a multiplication-table file: the order m on the first line, then m rows of m integers

    Args:
        path: File path
        name: Display name; defaults to the path

    Returns:
        Validated TableGroup
    """
    with open(path, 'r', encoding='utf-8') as handle:
        lines = [line.split() for line in handle if line.strip()]
    if not lines or len(lines[0]) != 1:
        raise InvalidInputError(f"{path}: first line must hold the group order")
    try:
        m = int(lines[0][0])
        rows = [[int(v) for v in line] for line in lines[1:]]
    except ValueError as exc:
        raise InvalidInputError(f"{path}: non-integer entry ({exc})") from exc
    if len(rows) != m or any(len(row) != m for row in rows):
        raise InvalidInputError(f"{path}: expected {m} rows of {m} entries")
    group = TableGroup(rows, name=name or path)
    logger.info("Loaded %s", group)
    return group
