"""
Simplicial-group machinery shared by every construction

A family exposes its faces, degeneracies and optional cyclic or symmetric
operators. Relations are words of steps compared by an evaluation context:
abelian families compose homomorphism matrices, table and linear families
evaluate the words on elements (all of them, or seeded samples).
"""
import copy
import logging
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from ..algebra.fin_ab import (
    AbChainComplex, AbHom, FinAbGroup, group_from_order_counts, hom_kernel, lift_through,
)
from ..utils.config import get_config
from ..utils.errors import CapExceededError, ConsistencyError, InvalidInputError
from ..utils.helpers import make_rng

logger = logging.getLogger(__name__)

FACE = 'face'
DEGENERACY = 'degeneracy'
CYCLIC = 'cyclic'
TRANSPOSITION = 'transposition'


@dataclass(frozen=True)
class Step:
    """One generator applied to level q"""
    op: str
    q: int
    index: int = 0

    @property
    def target(self) -> int:
        if self.op == FACE:
            return self.q - 1
        if self.op == DEGENERACY:
            return self.q + 1
        return self.q

    def __str__(self):
        if self.op == FACE:
            return f'd_{self.index}'
        if self.op == DEGENERACY:
            return f's_{self.index}'
        if self.op == CYCLIC:
            return f'tau_{self.q}'
        return f't_{self.index}'


def face(q: int, i: int) -> Step:
    return Step(FACE, q, i)


def degeneracy(q: int, i: int) -> Step:
    return Step(DEGENERACY, q, i)


def cyclic(q: int) -> Step:
    return Step(CYCLIC, q)


def transposition(q: int, i: int) -> Step:
    return Step(TRANSPOSITION, q, i)


def render_word(steps: Sequence[Step]) -> str:
    """Composition notation: the first step applied is written last"""
    return ' '.join(str(s) for s in reversed(steps)) if steps else 'id'


@dataclass(frozen=True)
class Relation:
    """lhs = rhs as maps out of level q; steps are listed in application order"""
    family: str
    q: int
    indices: Tuple[int, ...]
    lhs: Tuple[Step, ...]
    rhs: Tuple[Step, ...]

    @property
    def name(self) -> str:
        return f'{render_word(self.lhs)} = {render_word(self.rhs)}'

    @property
    def top_level(self) -> int:
        levels = [self.q]
        for s in self.lhs + self.rhs:
            levels += [s.q, s.target]
        return max(levels)

    def involves(self, step: Step) -> bool:
        return step in self.lhs or step in self.rhs


def _keep(relations: List[Relation], q_max: int) -> List[Relation]:
    return [r for r in relations if r.top_level <= q_max + 1]


def simplicial_relations(q_max: int) -> List[Relation]:
    """The five simplicial identity families on source levels 0..q_max"""
    relations = []
    for q in range(q_max + 1):
        for j in range(q + 1):
            for i in range(j):
                relations.append(Relation('d_i d_j = d_{j-1} d_i', q, (i, j),
                                          (face(q, j), face(q - 1, i)),
                                          (face(q, i), face(q - 1, j - 1))))
        for j in range(q + 1):
            for i in range(j + 1):
                relations.append(Relation('s_i s_j = s_{j+1} s_i', q, (i, j),
                                          (degeneracy(q, j), degeneracy(q + 1, i)),
                                          (degeneracy(q, i), degeneracy(q + 1, j + 1))))
        for j in range(q + 1):
            for i in range(j):
                relations.append(Relation('d_i s_j = s_{j-1} d_i', q, (i, j),
                                          (degeneracy(q, j), face(q + 1, i)),
                                          (face(q, i), degeneracy(q - 1, j - 1))))
            relations.append(Relation('d_j s_j = id', q, (j, j),
                                      (degeneracy(q, j), face(q + 1, j)), ()))
            relations.append(Relation('d_{j+1} s_j = id', q, (j + 1, j),
                                      (degeneracy(q, j), face(q + 1, j + 1)), ()))
            for i in range(j + 2, q + 2):
                relations.append(Relation('d_i s_j = s_j d_{i-1}', q, (i, j),
                                          (degeneracy(q, j), face(q + 1, i)),
                                          (face(q, i - 1), degeneracy(q - 1, j))))
    return _keep(relations, q_max)


def cyclic_relations(q_max: int) -> List[Relation]:
    """Cyclic-category relations between tau and the faces and degeneracies"""
    relations = []
    for q in range(q_max + 1):
        tau = cyclic(q)
        for i in range(1, q + 1):
            relations.append(Relation('d_i tau_q = tau_{q-1} d_{i-1}', q, (i,),
                                      (tau, face(q, i)), (face(q, i - 1), cyclic(q - 1))))
        if q >= 1:
            relations.append(Relation('d_0 tau_q = d_q', q, (0,), (tau, face(q, 0)), (face(q, q),)))
        for i in range(1, q + 1):
            relations.append(Relation('s_i tau_q = tau_{q+1} s_{i-1}', q, (i,),
                                      (tau, degeneracy(q, i)), (degeneracy(q, i - 1), cyclic(q + 1))))
        relations.append(Relation('s_0 tau_q = tau_{q+1}^2 s_q', q, (0,),
                                  (tau, degeneracy(q, 0)),
                                  (degeneracy(q, q), cyclic(q + 1), cyclic(q + 1))))
        relations.append(Relation('tau_q^{q+1} = id', q, (q,), (tau,) * (q + 1), ()))
    return _keep(relations, q_max)


def symmetric_relations(q_max: int, with_cycle: bool = True) -> List[Relation]:
    """Coxeter relations for the transpositions t_1..t_q, and the cycle composite"""
    relations = []
    for q in range(1, q_max + 1):
        t = [None] + [transposition(q, i) for i in range(1, q + 1)]
        for i in range(1, q + 1):
            relations.append(Relation('t_i^2 = id', q, (i,), (t[i], t[i]), ()))
            for j in range(i + 2, q + 1):
                relations.append(Relation('t_i t_j = t_j t_i', q, (i, j), (t[j], t[i]), (t[i], t[j])))
            if i + 1 <= q:
                relations.append(Relation('t_i t_{i+1} t_i = t_{i+1} t_i t_{i+1}', q, (i, i + 1),
                                          (t[i], t[i + 1], t[i]), (t[i + 1], t[i], t[i + 1])))
        if with_cycle:
            relations.append(Relation('t_1 t_2 ... t_q = tau_q', q, (q,),
                                      tuple(t[i] for i in range(q, 0, -1)), (cyclic(q),)))
    return relations


# ---------------------------------------------------------------------------
# strategies and reports

@dataclass(frozen=True)
class Exhaustive:
    """Every element (table families) or every basis tensor (linear families)"""
    cap: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': 'exhaustive'}


@dataclass(frozen=True)
class Sampled:
    """Seeded random elements; the seed is recorded in every report"""
    samples: int = 200
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': 'sampled', 'samples': self.samples, 'seed': self.seed}


Strategy = Union[Exhaustive, Sampled]


@dataclass(frozen=True)
class Failure:
    relation: str
    family: str
    q: int
    indices: Tuple[int, ...]
    witness: Any
    lhs: Any
    rhs: Any
    rank: int = 0

    def sort_key(self):
        return (self.family, self.relation, self.q, self.indices, self.rank)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'relation': self.relation,
            'family': self.family,
            'q': self.q,
            'indices': list(self.indices),
            'witness': self.witness,
            'lhs': self.lhs,
            'rhs': self.rhs,
        }


@dataclass
class VerificationReport:
    suite: str
    relations_checked: int
    strategy: Dict[str, Any]
    failures: List[Failure] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return 'pass' if self.passed else 'fail'

    def merge(self, other: 'VerificationReport') -> 'VerificationReport':
        counts = dict(self.counts)
        for key, value in other.counts.items():
            counts[key] = counts.get(key, 0) + value
        return VerificationReport(
            suite=f'{self.suite}+{other.suite}',
            relations_checked=self.relations_checked + other.relations_checked,
            strategy=self.strategy,
            failures=sorted(self.failures + other.failures, key=Failure.sort_key),
            counts=dict(sorted(counts.items())),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'verdict': self.verdict,
            'relations_checked': self.relations_checked,
            'strategy': self.strategy,
            'counts': self.counts,
            'failures': [f.to_dict() for f in self.failures],
        }


# ---------------------------------------------------------------------------
# families

class SimplicialFamily(ABC):
    """
    Level-indexed groups with faces and degeneracies

    Subclasses set `kind` and answer map_for(step); cyclic and symmetric
    structure are advertised through has_cyclic and has_symmetric.
    """
    kind = None
    has_cyclic = False
    has_symmetric = False

    def __init__(self, name: str):
        self.name = name
        self.logger = logging.getLogger(__name__)

    @abstractmethod
    def map_for(self, step: Step):
        """The map a step denotes: an AbHom or a callable on elements"""

    @abstractmethod
    def level_size(self, q: int) -> int:
        """Number of elements (or basis tensors) on level q"""

    @abstractmethod
    def context(self, strategy: Strategy, q_max: int):
        """Evaluation context deciding relations for this family"""

    def _require(self, step: Step):
        if step.op == CYCLIC and not self.has_cyclic:
            raise InvalidInputError(f"{self.name} has no cyclic operator")
        if step.op == TRANSPOSITION and not self.has_symmetric:
            raise InvalidInputError(f"{self.name} has no symmetric action")
        if step.op in (FACE, DEGENERACY) and not 0 <= step.index <= step.q:
            raise InvalidInputError(f"Index {step.index} outside [0, {step.q}]", witness=step.index)
        if step.op == TRANSPOSITION and not 1 <= step.index <= step.q:
            raise InvalidInputError(f"Transposition index {step.index} outside [1, {step.q}]")


class AbelianFamily(SimplicialFamily):
    """Levels are FinAbGroups and every structure map is an AbHom"""
    kind = 'abelian'

    def __init__(self, name: str):
        super().__init__(name)
        self._overrides: Dict[Step, AbHom] = {}

    @abstractmethod
    def level(self, q: int) -> FinAbGroup:
        pass

    @abstractmethod
    def face(self, q: int, i: int) -> AbHom:
        pass

    @abstractmethod
    def degeneracy(self, q: int, i: int) -> AbHom:
        pass

    def tau(self, q: int) -> AbHom:
        raise InvalidInputError(f"{self.name} has no cyclic operator")

    def transposition(self, q: int, i: int) -> AbHom:
        raise InvalidInputError(f"{self.name} has no symmetric action")

    def override(self, step: Step, hom: AbHom) -> 'AbelianFamily':
        """Copy of this family with one structure map replaced"""
        clone = copy.copy(self)
        clone._overrides = dict(self._overrides)
        clone._overrides[step] = hom
        return clone

    def map_for(self, step: Step) -> AbHom:
        if step in self._overrides:
            return self._overrides[step]
        self._require(step)
        if step.op == FACE:
            return self.face(step.q, step.index)
        if step.op == DEGENERACY:
            return self.degeneracy(step.q, step.index)
        if step.op == CYCLIC:
            return self.tau(step.q)
        return self.transposition(step.q, step.index)

    def level_size(self, q: int) -> int:
        return self.level(q).order

    def context(self, strategy: Strategy, q_max: int) -> 'MatrixContext':
        return MatrixContext(self)

    # pointwise access used by the brute-force oracle and by cochains
    def elements_array(self, q: int) -> np.ndarray:
        group = self.level(q)
        if group.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        return np.array(list(product(*(range(m) for m in group.moduli))), dtype=np.int64)

    def index_of(self, q: int, elements: np.ndarray) -> np.ndarray:
        index = np.zeros(len(elements), dtype=np.int64)
        for k, m in enumerate(self.level(q).moduli):
            index = index * m + elements[:, k]
        return index

    def multiply(self, q: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        moduli = np.array(self.level(q).moduli, dtype=np.int64)
        return (x + y) % moduli if len(moduli) else x

    def apply_array(self, step: Step, elements: np.ndarray) -> np.ndarray:
        hom = self.map_for(step)
        if hom.target.rank == 0:
            return np.zeros((len(elements), 0), dtype=np.int64)
        if hom.source.rank == 0:
            return np.zeros((len(elements), hom.target.rank), dtype=np.int64)
        matrix = hom.matrix.astype(np.int64)
        return (elements @ matrix.T) % np.array(hom.target.moduli, dtype=np.int64)

    def face_index_map(self, q: int, i: int) -> np.ndarray:
        """index of d_i(x) on level q-1 for every x on level q, in enumeration order"""
        return self.index_of(q - 1, self.apply_array(face(q, i), self.elements_array(q)))


class TableFamily(SimplicialFamily):
    """
    Levels are finite groups listed as integer tuples; maps act on arrays of them

    Subclasses implement level_order, apply_array and multiply.
    """
    kind = 'table'

    @abstractmethod
    def level_order(self, q: int) -> int:
        pass

    @abstractmethod
    def level_width(self, q: int) -> int:
        """Tuple length of level-q elements"""

    @abstractmethod
    def apply_array(self, step: Step, elements: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def multiply(self, q: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def radix(self) -> int:
        """Number of values per tuple slot"""

    def level_size(self, q: int) -> int:
        return self.level_order(q)

    def elements_array(self, q: int) -> np.ndarray:
        width = self.level_width(q)
        if width == 0:
            return np.zeros((1, 0), dtype=np.int64)
        return np.array(list(product(range(self.radix()), repeat=width)), dtype=np.int64)

    def index_of(self, q: int, elements: np.ndarray) -> np.ndarray:
        index = np.zeros(len(elements), dtype=np.int64)
        for k in range(elements.shape[1]):
            index = index * self.radix() + elements[:, k]
        return index

    def map_for(self, step: Step) -> Callable[[np.ndarray], np.ndarray]:
        self._require(step)
        return lambda elements: self.apply_array(step, elements)

    def face_index_map(self, q: int, i: int) -> np.ndarray:
        return self.index_of(q - 1, self.apply_array(face(q, i), self.elements_array(q)))

    def context(self, strategy: Strategy, q_max: int) -> 'PointwiseContext':
        return PointwiseContext(self, strategy, q_max)

    def points(self, q: int, strategy: Strategy) -> Tuple[np.ndarray, np.ndarray]:
        if isinstance(strategy, Exhaustive):
            elements = self.elements_array(q)
        else:
            rng = make_rng(strategy.seed, q)
            elements = rng.integers(0, self.radix(), size=(strategy.samples, self.level_width(q)))
            elements = elements.astype(np.int64)
        return elements, self.index_of(q, elements)


class LinearFamily(SimplicialFamily):
    """
    Levels are tensor powers of an algebra; maps act on tensors

    Subclasses implement the tensor-level evaluation and sampling.
    """
    kind = 'linear'

    @abstractmethod
    def apply(self, step: Step, x):
        pass

    @abstractmethod
    def basis_points(self, q: int) -> List[Any]:
        pass

    @abstractmethod
    def random_points(self, q: int, count: int, seed: int) -> List[Any]:
        pass

    @abstractmethod
    def describe(self, x) -> Any:
        """JSON-ready form of a tensor"""

    def map_for(self, step: Step) -> Callable:
        self._require(step)
        return lambda x: self.apply(step, x)

    def context(self, strategy: Strategy, q_max: int) -> 'PointwiseContext':
        return PointwiseContext(self, strategy, q_max)


# ---------------------------------------------------------------------------
# evaluation contexts

class MatrixContext:
    """Decide relations as equalities of composed homomorphisms"""

    def __init__(self, family: AbelianFamily):
        self.family = family

    def word(self, steps: Sequence[Step], q: int) -> AbHom:
        result = AbHom.identity(self.family.level(q))
        for step in steps:
            result = self.family.map_for(step).compose(result)
        return result

    def check(self, relation: Relation) -> Optional[Failure]:
        lhs = self.word(relation.lhs, relation.q)
        rhs = self.word(relation.rhs, relation.q)
        column = lhs.first_difference(rhs)
        if column is None:
            return None
        source = self.family.level(relation.q)
        witness = tuple(1 if k == column else 0 for k in range(source.rank))
        return Failure(
            relation=relation.name, family=relation.family, q=relation.q,
            indices=relation.indices, witness=list(witness),
            lhs=list(lhs.apply(witness).coords), rhs=list(rhs.apply(witness).coords),
            rank=source.index_of(witness),
        )


class PointwiseContext:
    """Decide relations by evaluating both sides on every point of a level"""

    def __init__(self, family: SimplicialFamily, strategy: Strategy, q_max: int):
        self.family = family
        self.strategy = strategy
        cap = getattr(strategy, 'cap', None) or get_config().ENUMERATION_CAP
        self._points = {}
        if family.kind == 'table':
            if isinstance(strategy, Exhaustive):
                for q in range(q_max + 2):
                    size = family.level_size(q)
                    if size > cap:
                        raise CapExceededError(
                            f"Level {q} of {family.name} has {size} elements, above the cap {cap}; "
                            f"use a sampled strategy", size, cap,
                        )
            for q in range(q_max + 1):
                self._points[q] = family.points(q, strategy)
        else:
            limit = get_config().EXHAUSTIVE_BASIS_LIMIT
            for q in range(q_max + 1):
                size = family.level_size(q)
                points = []
                if size <= limit:
                    points += family.basis_points(q)
                elif isinstance(strategy, Exhaustive):
                    raise CapExceededError(
                        f"Level {q} of {family.name} has {size} basis tensors, above {limit}; "
                        f"use a sampled strategy", size, limit,
                    )
                if isinstance(strategy, Sampled):
                    points += family.random_points(q, strategy.samples, strategy.seed)
                self._points[q] = points

    def check(self, relation: Relation) -> Optional[Failure]:
        if self.family.kind == 'table':
            return self._check_table(relation)
        return self._check_linear(relation)

    def _check_table(self, relation: Relation) -> Optional[Failure]:
        elements, ranks = self._points[relation.q]
        lhs, rhs = elements, elements
        for step in relation.lhs:
            lhs = self.family.apply_array(step, lhs)
        for step in relation.rhs:
            rhs = self.family.apply_array(step, rhs)
        bad = np.flatnonzero(np.any(lhs != rhs, axis=1)) if lhs.shape[1] else []
        if len(bad) == 0:
            return None
        k = int(min(bad, key=lambda j: ranks[j]))
        return Failure(
            relation=relation.name, family=relation.family, q=relation.q, indices=relation.indices,
            witness=elements[k].tolist(), lhs=lhs[k].tolist(), rhs=rhs[k].tolist(), rank=int(ranks[k]),
        )

    def _check_linear(self, relation: Relation) -> Optional[Failure]:
        for rank, x in enumerate(self._points[relation.q]):
            lhs, rhs = x, x
            for step in relation.lhs:
                lhs = self.family.apply(step, lhs)
            for step in relation.rhs:
                rhs = self.family.apply(step, rhs)
            if lhs != rhs:
                return Failure(
                    relation=relation.name, family=relation.family, q=relation.q,
                    indices=relation.indices, witness=self.family.describe(x),
                    lhs=self.family.describe(lhs), rhs=self.family.describe(rhs), rank=rank,
                )
        return None


def _run_suite(family: SimplicialFamily, suite: str, relations: List[Relation],
               q_max: int, strategy: Optional[Strategy]) -> VerificationReport:
    strategy = strategy or Exhaustive()
    context = family.context(strategy, q_max)
    settings = get_config()
    logger.info("Checking %d %s relations on %s up to level %d", len(relations), suite, family.name, q_max)
    results = Parallel(n_jobs=settings.N_JOBS, prefer='threads')(
        delayed(context.check)(relation) for relation in relations
    )
    failures = sorted((f for f in results if f is not None), key=Failure.sort_key)
    for failure in failures:
        logger.debug("Failed %s at q=%d: witness %s", failure.relation, failure.q, failure.witness)
    description = dict(strategy.to_dict(), q_max=q_max)
    if family.kind == 'abelian':
        description['evaluation'] = 'matrix'
    return VerificationReport(
        suite=suite,
        relations_checked=len(relations),
        strategy=description,
        failures=failures,
        counts=dict(sorted(Counter(r.family for r in relations).items())),
    )


def verify_simplicial(family: SimplicialFamily, q_max: int,
                      strategy: Optional[Strategy] = None) -> VerificationReport:
    """
    Check the five simplicial identity families on source levels up to q_max

    Args:
        family: Any simplicial family
        q_max: Highest source level (maps may reach q_max + 1)
        strategy: Exhaustive (default) or Sampled; abelian families always compare matrices

    Returns:
        VerificationReport
    """
    if q_max < 1:
        raise InvalidInputError(f"q_max must be at least 1, got {q_max}")
    return _run_suite(family, 'simplicial', simplicial_relations(q_max), q_max, strategy)


def verify_cyclic(family: SimplicialFamily, q_max: int,
                  strategy: Optional[Strategy] = None) -> VerificationReport:
    """Check the cyclic-category relations, including tau_q^{q+1} = id"""
    if not family.has_cyclic:
        raise InvalidInputError(f"{family.name} has no cyclic operator")
    if q_max < 1:
        raise InvalidInputError(f"q_max must be at least 1, got {q_max}")
    return _run_suite(family, 'cyclic', cyclic_relations(q_max), q_max, strategy)


def verify_symmetric(family: SimplicialFamily, q_max: int, strategy: Optional[Strategy] = None,
                     with_cycle: Optional[bool] = None) -> VerificationReport:
    """Check the Coxeter relations and, when a cyclic operator exists, cycle composite = tau_q"""
    if not family.has_symmetric:
        raise InvalidInputError(f"{family.name} has no symmetric action")
    if q_max < 1:
        raise InvalidInputError(f"q_max must be at least 1, got {q_max}")
    with_cycle = family.has_cyclic if with_cycle is None else with_cycle
    return _run_suite(family, 'symmetric', symmetric_relations(q_max, with_cycle), q_max, strategy)


# ---------------------------------------------------------------------------
# Moore complex and homotopy

class MooreComplex(AbChainComplex):
    """Normalized chain complex together with the inclusions of its levels"""

    def __init__(self, levels: List[FinAbGroup], differentials: List[AbHom], inclusions: List[AbHom]):
        super().__init__(levels, differentials)
        self.inclusions = inclusions


def moore_complex(family: AbelianFamily, q_max: int) -> MooreComplex:
    """
    Levels K_q ∩ ker d_0 ∩ ... ∩ ker d_{q-1}, differential the last face

    Args:
        family: Abelian simplicial family
        q_max: Top level

    Returns:
        MooreComplex with levels 0..q_max
    """
    if family.kind != 'abelian':
        raise InvalidInputError("The Moore complex is computed for abelian families")
    levels, inclusions, differentials = [], [], []
    for q in range(q_max + 1):
        group = family.level(q)
        if q == 0:
            kernel, incl = group, AbHom.identity(group)
        else:
            kernel, incl = hom_kernel(AbHom.stack([family.face(q, i) for i in range(q)]))
        levels.append(kernel)
        inclusions.append(incl)
        if q == 0:
            differentials.append(AbHom.zero(kernel, FinAbGroup()))
            continue
        restricted = family.face(q, q).compose(incl)
        try:
            differentials.append(lift_through(inclusions[q - 1], restricted))
        except ConsistencyError as exc:
            raise ConsistencyError(
                f"d_{q} does not map the normalized level {q} into the normalized level {q - 1}"
            ) from exc
        family.logger.info("Normalized level %d of %s: %s", q, family.name, kernel)
    return MooreComplex(levels, differentials, inclusions)


def homotopy_groups(family: AbelianFamily, q_max: int) -> List[FinAbGroup]:
    """
    Homotopy groups pi_0..pi_{q_max} as homology of the Moore complex

    Args:
        family: Abelian simplicial family
        q_max: Highest homotopy degree

    Returns:
        Groups in invariant-factor form
    """
    if q_max < 0:
        raise InvalidInputError(f"q_max must be non-negative, got {q_max}")
    complex_ = moore_complex(family, q_max + 1)
    return [complex_.homology(q).canonical_form() for q in range(q_max + 1)]


@dataclass(frozen=True)
class GroupDescription:
    """Isomorphism data recovered by enumeration"""
    order: int
    order_histogram: Tuple[Tuple[int, int], ...]
    structure: Optional[FinAbGroup] = None

    def to_dict(self) -> Dict[str, Any]:
        result = {'order': self.order, 'order_histogram': {str(k): v for k, v in self.order_histogram}}
        if self.structure is not None:
            result['structure'] = self.structure.to_list()
        return result


def _quotient_orders(family, q: int, cycles: np.ndarray, boundaries: set) -> Counter:
    """Order of each cycle modulo the boundary subgroup"""
    orders = np.ones(len(cycles), dtype=np.int64)
    power = cycles.copy()
    pending = np.array([i not in boundaries for i in family.index_of(q, power).tolist()])
    k = 1
    while pending.any():
        k += 1
        power = family.multiply(q, power, cycles)
        inside = np.array([i in boundaries for i in family.index_of(q, power).tolist()])
        orders[pending & inside] = k
        pending &= ~inside
    return Counter(orders.tolist())


def brute_force_homotopy(family: SimplicialFamily, q_max: int, cap: int) -> List[GroupDescription]:
    """
    Homotopy groups by listing normalized elements and counting cosets

    Args:
        family: Abelian or table family
        q_max: Highest homotopy degree
        cap: Largest level order that may be enumerated

    Returns:
        One GroupDescription per degree 0..q_max
    """
    if family.kind not in ('abelian', 'table'):
        raise InvalidInputError("Brute-force homotopy needs an abelian or table family")
    for q in range(q_max + 2):
        size = family.level_size(q)
        if size > cap:
            raise CapExceededError(f"Level {q} has {size} elements, above the cap {cap}", size, cap)
    normalized = {}
    for q in range(q_max + 2):
        elements = family.elements_array(q)
        mask = np.ones(len(elements), dtype=bool)
        if q > 0:
            identity = family.index_of(q - 1, family.elements_array(q - 1)[:1])[0]
            for i in range(q):
                mask &= family.face_index_map(q, i) == identity
        normalized[q] = elements[mask]
    results = []
    for q in range(q_max + 1):
        members = normalized[q]
        if q > 0:
            identity = family.index_of(q - 1, family.elements_array(q - 1)[:1])[0]
            last = family.index_of(q - 1, family.apply_array(face(q, q), members))
            members = members[last == identity]
        above = normalized[q + 1]
        boundaries = set(family.index_of(q, family.apply_array(face(q + 1, q + 1), above)).tolist())
        histogram = _quotient_orders(family, q, members, boundaries)
        histogram = {k: v // len(boundaries) for k, v in histogram.items()}
        order = len(members) // len(boundaries)
        structure = group_from_order_counts(histogram) if family.kind == 'abelian' else None
        results.append(GroupDescription(order, tuple(sorted(histogram.items())), structure))
    return results


def unnormalized_chain_complex(family: AbelianFamily, q_max: int) -> AbChainComplex:
    """Levels K_q with d_q the alternating sum of all faces"""
    levels = [family.level(q) for q in range(q_max + 1)]
    differentials = [AbHom.zero(levels[0], FinAbGroup())]
    for q in range(1, q_max + 1):
        total = AbHom.zero(levels[q], levels[q - 1])
        for i in range(q + 1):
            total = total + family.face(q, i).scaled((-1) ** i)
        differentials.append(total)
    return AbChainComplex(levels, differentials)


# ---------------------------------------------------------------------------
# mutation harness

@dataclass(frozen=True)
class MutationOutcome:
    step: str
    q: int
    entry: Tuple[int, int]
    delta: int
    killed: bool
    caught_by: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {'step': self.step, 'q': self.q, 'entry': list(self.entry), 'delta': self.delta,
                'killed': self.killed, 'caught_by': self.caught_by}


@dataclass
class MutationReport:
    outcomes: List[MutationOutcome]

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def killed(self) -> int:
        return sum(1 for o in self.outcomes if o.killed)

    @property
    def kill_rate(self) -> float:
        return self.killed / self.trials if self.trials else 1.0

    @property
    def passed(self) -> bool:
        return self.killed == self.trials

    def to_dict(self) -> Dict[str, Any]:
        return {'trials': self.trials, 'killed': self.killed, 'kill_rate': self.kill_rate,
                'outcomes': [o.to_dict() for o in self.outcomes]}


def _mutable_entries(hom: AbHom) -> List[Tuple[int, int, int]]:
    entries = []
    for r, n in enumerate(hom.target.moduli):
        for c, m in enumerate(hom.source.moduli):
            g = gcd(n, m)
            if g > 1:
                entries.append((r, c, n // g))
    return entries


def run_mutation_harness(family: AbelianFamily, q_max: int, mutations: int = 50,
                         seed: int = 0) -> MutationReport:
    """
    Corrupt one matrix entry per trial and check that the simplicial identities notice

    Args:
        family: Abelian family whose identities hold
        q_max: Verification depth
        mutations: Number of trials
        seed: Seed of the trial sequence

    Returns:
        MutationReport with the kill rate
    """
    steps = [face(q, i) for q in range(1, q_max + 1) for i in range(q + 1)]
    steps += [degeneracy(q, i) for q in range(q_max + 1) for i in range(q + 1)]
    candidates = [(s, _mutable_entries(family.map_for(s))) for s in steps]
    candidates = [(s, entries) for s, entries in candidates if entries]
    if not candidates:
        raise InvalidInputError(f"{family.name} has no entries that can be mutated up to level {q_max}")
    relations = simplicial_relations(q_max)
    rng = make_rng(seed, 0)
    outcomes = []
    for _ in range(mutations):
        step, entries = candidates[int(rng.integers(len(candidates)))]
        r, c, delta = entries[int(rng.integers(len(entries)))]
        original = family.map_for(step)
        matrix = original.matrix.copy()
        matrix[r, c] += delta
        mutant = family.override(step, AbHom(original.source, original.target, matrix))
        context = MatrixContext(mutant)
        caught = None
        for relation in relations:
            if relation.involves(step) and context.check(relation) is not None:
                caught = relation.name
                break
        outcomes.append(MutationOutcome(str(step), step.q, (r, c), delta, caught is not None, caught))
    report = MutationReport(outcomes)
    logger.info("Mutation harness on %s: %d of %d killed", family.name, report.killed, report.trials)
    return report
