"""
Combinatorics of the simplicial category: coface/codegeneracy maps on points,
lexicographic ranking of strictly increasing index tuples, and the
classification of how a face or degeneracy acts on one coordinate index.

Coordinates of K(A,n)_q are indexed by tuples u_1 < ... < u_n in
{0, ..., q-1}. Face and degeneracy actions are stated from the point of view
of the coordinate of the *target* level: each one says which source
coordinates (with which signs) make it up.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import List, Tuple, Union

from scipy.special import comb

from ..utils.errors import InvalidInputError


def binomial(q: int, n: int) -> int:
    """Exact binomial coefficient, zero outside 0 <= n <= q"""
    if n < 0 or q < 0 or n > q:
        return 0
    return int(comb(q, n, exact=True))


@dataclass(frozen=True)
class SimplexTuple:
    """Strictly increasing tuple of indices in {0, ..., ambient-1}"""
    entries: Tuple[int, ...]
    ambient: int

    def __post_init__(self):
        entries = tuple(int(u) for u in self.entries)
        object.__setattr__(self, 'entries', entries)
        if any(b <= a for a, b in zip(entries, entries[1:])):
            raise InvalidInputError(f"Tuple {entries} is not strictly increasing", witness=entries)
        if entries and (entries[0] < 0 or entries[-1] > self.ambient - 1):
            raise InvalidInputError(
                f"Tuple {entries} leaves the range [0, {self.ambient - 1}]", witness=entries
            )

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def last(self) -> int:
        return self.entries[-1]


@dataclass(frozen=True)
class Shifted:
    """The target coordinate equals a single source coordinate"""
    target: SimplexTuple


@dataclass(frozen=True)
class Merged:
    """The target coordinate is a signed sum of source coordinates"""
    terms: Tuple[Tuple[SimplexTuple, int], ...]


@dataclass(frozen=True)
class Trivial:
    """The target coordinate is the identity element"""


FaceAction = Union[Shifted, Merged]
DegeneracyAction = Union[Trivial, Shifted]


def coface_point(i: int, u: int) -> int:
    """d^i: skip the value i"""
    return u if u < i else u + 1


def codegeneracy_point(i: int, u: int) -> int:
    """s^i: hit the value i twice"""
    return u if u <= i else u - 1


def rank_tuple(t: SimplexTuple, q: int, n: int) -> int:
    """
    Position of t in the lexicographic list of strictly increasing n-tuples
    in {0, ..., q-1}, computed through the combinatorial number system.

    Args:
        t: Index tuple
        q: Ambient size
        n: Tuple length

    Returns:
        0-based lexicographic rank
    """
    entries = t.entries if isinstance(t, SimplexTuple) else tuple(t)
    SimplexTuple(entries, q)
    if len(entries) != n:
        raise InvalidInputError(f"Tuple {entries} does not have length {n}", witness=entries)
    # lex rank of c equals C(q,n)-1 minus the colex rank of the reflected tuple
    colex = sum(binomial(q - 1 - entries[n - j], j) for j in range(1, n + 1))
    return binomial(q, n) - 1 - colex


def unrank_tuple(r: int, q: int, n: int) -> SimplexTuple:
    """
    Inverse of rank_tuple

    Args:
        r: Rank in [0, C(q,n))
        q: Ambient size
        n: Tuple length

    Returns:
        The tuple at lexicographic position r
    """
    total = binomial(q, n)
    if not 0 <= r < total:
        raise InvalidInputError(f"Rank {r} outside [0, {total})", witness=r)
    remaining = total - 1 - r
    reflected = [0] * (n + 1)
    for j in range(n, 0, -1):
        c = j - 1
        while binomial(c + 1, j) <= remaining:
            c += 1
        reflected[j] = c
        remaining -= binomial(c, j)
    entries = tuple(q - 1 - reflected[n + 1 - k] for k in range(1, n + 1))
    return SimplexTuple(entries, q)


@lru_cache(maxsize=None)
def level_tuples(q: int, n: int) -> Tuple[SimplexTuple, ...]:
    """All strictly increasing n-tuples in {0, ..., q-1}, lexicographic"""
    return tuple(SimplexTuple(c, q) for c in combinations(range(q), n))


@lru_cache(maxsize=None)
def level_ranks(q: int, n: int) -> dict:
    """Map from entry tuples to lexicographic ranks"""
    return {t.entries: k for k, t in enumerate(level_tuples(q, n))}


def face_branch(i: int, t: SimplexTuple, q: int) -> FaceAction:
    """
    How the face d_i: K_q -> K_{q-1} produces the coordinate t of level q-1.

    Args:
        i: Face index, 0 <= i <= q
        t: Coordinate of the target level (ambient q-1)
        q: Source level

    Returns:
        Shifted when u_n != i-1, otherwise the signed product over the
        tuples obtained by deleting one entry and appending i
    """
    if not 0 <= i <= q:
        raise InvalidInputError(f"Face index {i} outside [0, {q}]", witness=i)
    entries = t.entries
    SimplexTuple(entries, q - 1)
    n = len(entries)
    if entries[-1] != i - 1:
        return Shifted(SimplexTuple(tuple(coface_point(i, u) for u in entries), q))
    # u_n = i-1 <= q-2 here, so appending i stays inside the source ambient
    assert i <= q - 1, "merged face would index a coordinate outside level q"
    terms = [(SimplexTuple(entries, q), 1)]
    for j in range(1, n + 1):
        dropped = entries[:n - j] + entries[n - j + 1:]
        terms.append((SimplexTuple(dropped + (i,), q), (-1) ** (j - 1)))
    return Merged(tuple(terms))


def degeneracy_branch(i: int, t: SimplexTuple, q: int) -> DegeneracyAction:
    """
    How the degeneracy s_i: K_q -> K_{q+1} produces the coordinate t of level q+1.

    Args:
        i: Degeneracy index, 0 <= i <= q
        t: Coordinate of the target level (ambient q+1)
        q: Source level

    Returns:
        Trivial when u_n = i or two consecutive images coincide,
        otherwise the source coordinate (s^i(u_1), ..., s^i(u_n))
    """
    if not 0 <= i <= q:
        raise InvalidInputError(f"Degeneracy index {i} outside [0, {q}]", witness=i)
    entries = t.entries
    SimplexTuple(entries, q + 1)
    if entries[-1] == i:
        return Trivial()
    image = tuple(codegeneracy_point(i, u) for u in entries)
    if any(a == b for a, b in zip(image, image[1:])):
        return Trivial()
    return Shifted(SimplexTuple(image, q))


def face_rows(i: int, q: int, n: int) -> List[List[Tuple[int, int]]]:
    """
    Sparse rows (source rank, sign) of the coordinate matrix of d_i on K(A,n)_q

    Args:
        i: Face index
        q: Source level
        n: Tuple length

    Returns:
        One list of (column, coefficient) pairs per target coordinate
    """
    ranks = level_ranks(q, n)
    rows = []
    for t in level_tuples(q - 1, n):
        action = face_branch(i, t, q)
        if isinstance(action, Shifted):
            rows.append([(ranks[action.target.entries], 1)])
        else:
            rows.append([(ranks[s.entries], sign) for s, sign in action.terms])
    return rows


def degeneracy_rows(i: int, q: int, n: int) -> List[List[Tuple[int, int]]]:
    """Sparse rows of the coordinate matrix of s_i on K(A,n)_q"""
    ranks = level_ranks(q, n)
    rows = []
    for t in level_tuples(q + 1, n):
        action = degeneracy_branch(i, t, q)
        rows.append([] if isinstance(action, Trivial) else [(ranks[action.target.entries], 1)])
    return rows
