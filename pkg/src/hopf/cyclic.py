"""
Cyclic modules over Hopf algebras

Both modules act on tensor powers of H through leg plans: every source leg
lists where its Sweedler copies go, and every target leg multiplies the
plain factors it received (in source order), then the antipode of the
product of its antipode factors. H^(delta,sigma) places h_1..h_q on q legs;
the secondary module 2K(H) places the coordinates h_{u,v} of K(A,2) on
C(q,2) legs ordered block by block: v = 1..q-1, and in block v the legs
h_{0,v}, ..., h_{v-1,v}.
"""
import logging
from abc import abstractmethod
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ

from .algebra import (
    HopfAlgebraStructure, ModularPair, Tensor, TensorVector, _accumulate, _clean, enumerate_basis_tuples,
    group_algebra,
)
from ..algebra.fin_ab import AbElement, FinAbGroup
from ..algebra.simplex_index import binomial, degeneracy_rows, face_rows, level_ranks, level_tuples
from ..algebra.table_group import TableGroup
from ..simplicial.core import (
    CYCLIC, DEGENERACY, FACE, TRANSPOSITION, Failure, LinearFamily, Step, VerificationReport,
    cyclic, degeneracy, face, transposition,
)
from ..simplicial.em_construct import KAn, KG1, ka2_cyclic_rows
from ..utils.config import get_config
from ..utils.errors import HopfAlgebraError, InvalidInputError
from ..utils.helpers import make_rng

logger = logging.getLogger(__name__)

# slot meaning "evaluate the character delta on this copy"
CHARACTER = -1


@dataclass(frozen=True)
class LegPlan:
    """
    How one structure map moves Sweedler copies between legs

    uses[l] lists (target slot, antipode) for the copies of source leg l, copy
    <1> first; an empty entry applies the counit. constants[t] is a vector
    (as sorted items) multiplied in front of target leg t.
    """
    target_degree: int
    uses: Tuple[Tuple[Tuple[int, bool], ...], ...]
    constants: Tuple[Tuple[Tuple[int, Any], ...], ...] = ()


def evaluate_plan(algebra: HopfAlgebraStructure, plan: LegPlan, character: Sequence[Any],
                  key: Tuple[int, ...]) -> Tensor:
    """
    Image of one basis tensor under a leg plan

    Args:
        algebra: Hopf algebra
        plan: Leg plan of the map
        character: Values of delta per basis index
        key: Basis indices of the source tensor

    Returns:
        Sparse tensor of degree plan.target_degree
    """
    H = algebra
    scale = H.one
    expansions = []
    for leg, b in enumerate(key):
        uses = plan.uses[leg]
        if not uses:
            scale = scale * H.counit[b]
            if not scale:
                return {}
            continue
        expansions.append((uses, list(H.iterated_comult_basis(b, len(uses)).items())))

    result = {}
    for choice in product(*(terms for _, terms in expansions)):
        coefficient = scale
        plain = [[] for _ in range(plan.target_degree)]
        inverted = [[] for _ in range(plan.target_degree)]
        for (uses, _), (copies, c) in zip(expansions, choice):
            coefficient = coefficient * c
            for (slot, antipode), label in zip(uses, copies):
                if slot == CHARACTER:
                    coefficient = coefficient * character[label]
                elif antipode:
                    inverted[slot].append(label)
                else:
                    plain[slot].append(label)
        if not coefficient:
            continue
        legs = []
        for slot in range(plan.target_degree):
            value = dict(plan.constants[slot]) if plan.constants and plan.constants[slot] else H.unit
            for label in plain[slot]:
                value = H.multiply_vectors(value, {label: H.one})
            if inverted[slot]:
                factor = H.unit
                for label in inverted[slot]:
                    factor = H.multiply_vectors(factor, {label: H.one})
                value = H.multiply_vectors(value, H.antipode_vector(factor))
            legs.append(list(value.items()))
        for terms in product(*legs):
            c = coefficient
            for _, d in terms:
                c = c * d
            _accumulate(result, tuple(k for k, _ in terms), c)
    return _clean(result)


class PlanModule(LinearFamily):
    """
    Linear family whose maps are leg plans, evaluated once per basis tensor

    Subclasses give the tensor degree of each level and the plan of each step.
    """
    has_cyclic = True

    def __init__(self, algebra: HopfAlgebraStructure, name: str, character: Sequence[Any]):
        super().__init__(name)
        self.algebra = algebra
        self.character = list(character)
        self._plans: Dict[Step, LegPlan] = {}
        self._images: Dict[Tuple[Step, Tuple[int, ...]], Tensor] = {}

    @abstractmethod
    def degree(self, q: int) -> int:
        """Number of tensor legs on level q"""

    @abstractmethod
    def build_plan(self, step: Step) -> LegPlan:
        pass

    def plan(self, step: Step) -> LegPlan:
        if step not in self._plans:
            self._require(step)
            self._plans[step] = self.build_plan(step)
        return self._plans[step]

    def level_size(self, q: int) -> int:
        return self.algebra.dim ** self.degree(q)

    def apply(self, step: Step, x: TensorVector) -> TensorVector:
        expected = self.degree(step.q)
        if x.degree != expected:
            raise InvalidInputError(
                f"{step} on level {step.q} of {self.name} takes degree {expected}, got {x.degree}"
            )
        plan = self.plan(step)
        result = {}
        for key, c in x.items():
            image = self._images.get((step, key))
            if image is None:
                image = evaluate_plan(self.algebra, plan, self.character, key)
                self._images[(step, key)] = image
            for target, d in image.items():
                _accumulate(result, target, c * d)
        return TensorVector(plan.target_degree, result)

    def face(self, q: int, i: int, x: TensorVector) -> TensorVector:
        return self.apply(face(q, i), x)

    def degeneracy(self, q: int, i: int, x: TensorVector) -> TensorVector:
        return self.apply(degeneracy(q, i), x)

    def cyclic(self, q: int, x: TensorVector) -> TensorVector:
        return self.apply(cyclic(q), x)

    def basis_points(self, q: int) -> List[TensorVector]:
        one = self.algebra.one
        return [TensorVector.basis(key, one)
                for key in enumerate_basis_tuples(self.algebra, self.degree(q))]

    def random_points(self, q: int, count: int, seed: int) -> List[TensorVector]:
        """Seeded combinations of a few basis tensors with small rational coefficients"""
        settings = get_config()
        bound = settings.SAMPLE_COEFFICIENT_BOUND
        domain = self.algebra.domain
        rational = domain.characteristic() == 0
        rng = make_rng(seed, q)
        points = []
        for _ in range(count):
            terms = {}
            for _ in range(settings.SAMPLE_TENSOR_TERMS):
                key = tuple(int(k) for k in rng.integers(self.algebra.dim, size=self.degree(q)))
                numerator = int(rng.integers(1, bound + 1)) * (1 if rng.integers(2) else -1)
                denominator = int(rng.integers(1, bound + 1)) if rational else 1
                _accumulate(terms, key, domain.convert(numerator) / domain.convert(denominator))
            points.append(TensorVector(self.degree(q), terms))
        return points

    def describe(self, x: TensorVector) -> Any:
        return self.algebra.describe_tensor(x)


class ConnesMoscoviciModule(PlanModule):
    """
    H^(delta,sigma): level q is H^{(x) q}

    d_0 applies the counit to h_1, d_i multiplies h_i h_{i+1}, d_q applies
    delta to h_q; s_i inserts 1 after leg i; tau_q is
    delta(h_q<2>) sigma S(h_1<1> ... h_q<1>) (x) h_1<2> (x) ... (x) h_{q-1}<2>.

    Args:
        algebra: Hopf algebra
        pair: Modular pair in involution; (epsilon, 1) when omitted
    """

    def __init__(self, algebra: HopfAlgebraStructure, pair: Optional[ModularPair] = None):
        pair = pair or ModularPair.trivial(algebra)
        pair.validate()
        name = algebra.name + ('^(eps,1)' if pair.is_trivial else '^(delta,sigma)')
        super().__init__(algebra, name, pair.delta)
        self.pair = pair
        self.has_symmetric = algebra.cocommutative and pair.is_trivial

    def degree(self, q: int) -> int:
        return q

    def _require(self, step: Step):
        if step.op == TRANSPOSITION and not self.algebra.cocommutative:
            raise InvalidInputError(f"{self.algebra.name} is not cocommutative; no symmetric action")
        super()._require(step)

    def build_plan(self, step: Step) -> LegPlan:
        q, i = step.q, step.index
        if step.op == FACE:
            uses = []
            for leg in range(q):
                slot = leg if leg < i else leg - 1
                if slot < 0:
                    uses.append(())
                elif slot == q - 1:
                    uses.append(((CHARACTER, False),))
                else:
                    uses.append(((slot, False),))
            return LegPlan(q - 1, tuple(uses))
        if step.op == DEGENERACY:
            return LegPlan(q + 1, tuple(((leg if leg < i else leg + 1, False),) for leg in range(q)))
        if step.op == CYCLIC:
            if q == 0:
                return LegPlan(0, ())
            uses = [((0, True), (leg + 1, False)) for leg in range(q - 1)]
            uses.append(((0, True), (CHARACTER, False)))
            constants = (tuple(sorted(self.pair.sigma.items())),) + ((),) * (q - 1)
            return LegPlan(q, tuple(uses), constants)
        uses = [((leg, False),) for leg in range(q)]
        moved = []
        if i > 1:
            moved.append((i - 2, False))
        moved.append((i - 1, True))
        if i < q:
            moved.append((i, False))
        uses[i - 1] = tuple(moved)
        return LegPlan(q, tuple(uses))

    def symmetric_action(self, q: int, i: int, x: TensorVector) -> TensorVector:
        """
        Transposition (i, i+1) acting on H^{(x) q} for cocommutative H

        h_{i-1} h_i<1> (x) S(h_i<2>) (x) h_i<3> h_{i+1}, truncated at the ends

        Args:
            q: Level
            i: Transposition index, 1 <= i <= q
            x: Degree-q tensor

        Returns:
            Degree-q tensor
        """
        return self.apply(transposition(q, i), x)


def block_legs(q: int) -> List[Tuple[int, int]]:
    """(u, v) per leg of 2K(H)_q in block order"""
    return [(u, v) for v in range(1, q) for u in range(v)]


def plan_from_rows(rows: List[List[Tuple[int, int]]], source_q: int, target_q: int) -> LegPlan:
    """
    Leg plan of a K(A,2) coordinate map given by (source rank, sign) rows

    Rows are indexed by lexicographic rank; legs follow block order. Each
    source leg hands out copies in the order its target legs appear.
    """
    source_block = {pair: k for k, pair in enumerate(block_legs(source_q))}
    lex_to_block = [source_block[t.entries] for t in level_tuples(source_q, 2)]
    target_ranks = level_ranks(target_q, 2)
    uses = [[] for _ in range(binomial(source_q, 2))]
    for slot, pair in enumerate(block_legs(target_q)):
        for source_rank, sign in rows[target_ranks[pair]]:
            uses[lex_to_block[source_rank]].append((slot, sign < 0))
    return LegPlan(binomial(target_q, 2), tuple(tuple(u) for u in uses))


class SecondaryModule(PlanModule):
    """
    2K(H) for commutative H: level q is H^{(x) C(q,2)}

    Faces, degeneracies and tau_q follow the K(A,2) coordinate rows; a plus
    sign contributes a plain Sweedler copy, a minus sign an antipode copy.
    """

    def __init__(self, algebra: HopfAlgebraStructure):
        if not algebra.commutative:
            raise HopfAlgebraError(f"{algebra.name} is not commutative")
        super().__init__(algebra, f'2K({algebra.name})', algebra.counit)

    def degree(self, q: int) -> int:
        return binomial(q, 2)

    def build_plan(self, step: Step) -> LegPlan:
        q = step.q
        if step.op == FACE:
            rows = face_rows(step.index, q, 2)
        elif step.op == DEGENERACY:
            rows = degeneracy_rows(step.index, q, 2)
        else:
            rows = ka2_cyclic_rows(q)
        return plan_from_rows(rows, q, step.target)


def linearization_map(group: FinAbGroup, q: int, x: Union[AbElement, Sequence[int]],
                      algebra: Optional[HopfAlgebraStructure] = None) -> TensorVector:
    """
    Basis tensor of k[A]^{(x) C(q,2)} whose (u,v) leg is the coordinate a_{u,v}

    Args:
        group: A
        q: Level of K(A,2)
        x: Level-q element (or its flat coordinates, lexicographic tuple order)
        algebra: Group algebra supplying the scalars; QQ when omitted

    Returns:
        Degree-C(q,2) basis tensor, legs in block order
    """
    coords = list(x.coords if isinstance(x, AbElement) else x)
    rank, count = group.rank, binomial(q, 2)
    if len(coords) != rank * count:
        raise InvalidInputError(f"Level {q} of K({group},2) has {rank * count} coordinates, got {len(coords)}")
    lex = [group.index_of(coords[r * rank:(r + 1) * rank]) for r in range(count)]
    ranks = level_ranks(q, 2)
    one = algebra.one if algebra else QQ.one
    return TensorVector.basis([lex[ranks[pair]] for pair in block_legs(q)], one)


def _linearization_steps(q: int, with_cyclic: bool = True) -> List[Step]:
    steps = [face(q, i) for i in range(q + 1)] if q >= 1 else []
    steps += [degeneracy(q, i) for i in range(q + 1)]
    if with_cyclic:
        steps.append(cyclic(q))
    return steps


def _square_report(suite: str, q_max: int, checks: int, counts: Dict[str, int],
                   failures: List[Failure]) -> VerificationReport:
    failures.sort(key=Failure.sort_key)
    return VerificationReport(
        suite=suite, relations_checked=checks,
        strategy={'kind': 'exhaustive', 'q_max': q_max},
        failures=failures, counts=dict(sorted(counts.items())),
    )


def verify_linearization(group: FinAbGroup, q_max: int,
                         algebra: Optional[HopfAlgebraStructure] = None) -> VerificationReport:
    """
    Commuting squares linearize o f = f o linearize between K(A,2) and 2K(k[A])

    Every face, degeneracy and tau on every element of levels 0..q_max.

    Args:
        group: A
        q_max: Highest source level
        algebra: k[A] over the chosen field; QQ when omitted

    Returns:
        VerificationReport of suite 'linearization'
    """
    algebra = algebra or group_algebra(group)
    family = KAn(group, 2)
    module = SecondaryModule(algebra)
    failures, counts, checks = [], {}, 0
    for q in range(q_max + 1):
        elements = family.elements_array(q)
        for step in _linearization_steps(q):
            checks += 1
            counts[step.op] = counts.get(step.op, 0) + 1
            images = family.apply_array(step, elements)
            for k, (x, y) in enumerate(zip(elements, images)):
                lhs = linearization_map(group, step.target, y.tolist(), algebra)
                rhs = module.apply(step, linearization_map(group, q, x.tolist(), algebra))
                if lhs != rhs:
                    failures.append(Failure(
                        relation=f'linearize {step}', family='linearization', q=q, indices=(step.index,),
                        witness=x.tolist(), lhs=module.describe(lhs), rhs=module.describe(rhs), rank=k,
                    ))
                    break
    logger.info("Linearization squares for K(%s,2): %d maps, %d failures", group, checks, len(failures))
    return _square_report('linearization', q_max, checks, counts, failures)


def verify_kg1_linearization(group: TableGroup, q_max: int,
                             algebra: Optional[HopfAlgebraStructure] = None) -> VerificationReport:
    """Same squares between K(G,1) and H^(eps,1) over k[G], on every basis tensor"""
    algebra = algebra or group_algebra(group)
    family = KG1(group)
    module = ConnesMoscoviciModule(algebra)
    one = algebra.one
    failures, counts, checks = [], {}, 0
    for q in range(q_max + 1):
        elements = family.elements_array(q)
        for step in _linearization_steps(q):
            checks += 1
            counts[step.op] = counts.get(step.op, 0) + 1
            images = family.apply_array(step, elements)
            for k, (x, y) in enumerate(zip(elements, images)):
                lhs = TensorVector.basis(y.tolist(), one)
                rhs = module.apply(step, TensorVector.basis(x.tolist(), one))
                if lhs != rhs:
                    failures.append(Failure(
                        relation=f'linearize {step}', family='linearization', q=q, indices=(step.index,),
                        witness=x.tolist(), lhs=module.describe(lhs), rhs=module.describe(rhs), rank=k,
                    ))
                    break
    return _square_report('kg1-linearization', q_max, checks, counts, failures)
