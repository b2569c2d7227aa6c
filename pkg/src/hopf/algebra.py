"""
Finite-dimensional Hopf algebras given by structure constants

Basis elements are indexed 0..d-1 and carry text labels. Vectors are sparse
dicts index -> scalar over a sympy domain (QQ, or GF(p) for speed), tensors
are dicts of index tuples. Group algebras and function algebras of finite
groups are generated; other algebras are loaded from JSON.
"""
import json
import logging
from itertools import product
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Rational
from sympy.polys.domains import GF, QQ

from ..algebra.fin_ab import FinAbGroup
from ..algebra.table_group import TableGroup, from_abelian, table_group_from_spec
from ..simplicial.core import Failure, VerificationReport
from ..utils.errors import GroupSpecError, HopfAlgebraError, InvalidInputError
from ..utils.helpers import dump_json

logger = logging.getLogger(__name__)

HOPF_SCHEMA = 'emforge-hopf/1'

Vector = Dict[int, Any]
Tensor = Dict[Tuple[int, ...], Any]


def _clean(terms: Dict) -> Dict:
    return {k: c for k, c in terms.items() if c}


def _accumulate(target: Dict, key, value):
    total = target.get(key)
    target[key] = value if total is None else total + value


def domain_name(domain) -> str:
    return 'QQ' if domain.characteristic() == 0 else f'GF({domain.characteristic()})'


def domain_from_name(name: str):
    """QQ or GF(p)"""
    text = name.strip()
    if text == 'QQ':
        return QQ
    if text.startswith('GF(') and text.endswith(')'):
        try:
            return GF(int(text[3:-1]))
        except ValueError as exc:
            raise InvalidInputError(f"Bad field '{name}'") from exc
    raise InvalidInputError(f"Unknown field '{name}'; expected QQ or GF(p)")


def parse_scalar(domain, text: Union[str, int]):
    value = Rational(str(text))
    denominator = domain.convert(int(value.q))
    if not denominator:
        raise HopfAlgebraError(f"Scalar {text} has a denominator divisible by the characteristic")
    return domain.convert(int(value.p)) / denominator


def scalar_text(domain, value) -> str:
    p = domain.characteristic()
    if p:
        return str(int(domain.to_int(value)) % p)
    return str(domain.to_sympy(value))


class TensorVector:
    """
    Element of H^{(x) degree}: a sparse combination of basis-index tuples

    Zero coefficients are never stored; degree 0 holds a scalar under the key ().
    """
    __slots__ = ('degree', 'terms')

    def __init__(self, degree: int, terms: Optional[Tensor] = None):
        self.degree = degree
        self.terms = _clean(terms or {})
        for key in self.terms:
            if len(key) != degree:
                raise InvalidInputError(f"Tensor key {key} does not have degree {degree}")

    @classmethod
    def basis(cls, indices: Sequence[int], coefficient) -> 'TensorVector':
        return cls(len(indices), {tuple(indices): coefficient})

    def items(self):
        return self.terms.items()

    def __add__(self, other: 'TensorVector') -> 'TensorVector':
        if other.degree != self.degree:
            raise InvalidInputError(f"Cannot add degrees {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for key, c in other.terms.items():
            _accumulate(terms, key, c)
        return TensorVector(self.degree, terms)

    def scaled(self, c) -> 'TensorVector':
        return TensorVector(self.degree, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return f"TensorVector({self.degree}, {self.terms})"


class HopfAlgebraStructure:
    """
    Hopf algebra by sparse structure constants

    Args:
        labels: Basis labels, in index order
        mult: (i, j) -> vector of e_i e_j; missing pairs multiply to zero
        unit: Vector of 1
        comult: i -> tensor (j, k) -> scalar of Delta(e_i)
        counit: Scalar epsilon(e_i) per index
        antipode: i -> vector S(e_i)
        domain: sympy domain of scalars (QQ or GF(p))
        name: Display name
    """

    def __init__(self, labels: Sequence[str], mult: Dict[Tuple[int, int], Vector], unit: Vector,
                 comult: Dict[int, Tensor], counit: Sequence[Any], antipode: Dict[int, Vector],
                 domain=QQ, name: str = 'H'):
        self.name = name
        self.domain = domain
        self.labels = list(labels)
        if len(set(self.labels)) != len(self.labels):
            raise HopfAlgebraError("Basis labels must be distinct")
        self.mult = {key: _clean(v) for key, v in mult.items()}
        self.unit = _clean(unit)
        self.comult = {i: _clean(v) for i, v in comult.items()}
        self.counit = list(counit)
        self.antipode = {i: _clean(v) for i, v in antipode.items()}
        if len(self.counit) != self.dim:
            raise HopfAlgebraError(f"Counit has {len(self.counit)} values for {self.dim} basis labels")
        self._index = {label: k for k, label in enumerate(self.labels)}
        self._comult_cache = {}
        self.commutative = all(
            self.mult.get((i, j), {}) == self.mult.get((j, i), {})
            for i in range(self.dim) for j in range(i)
        )
        self.cocommutative = all(
            self.comult.get(i, {}) == {(b, a): c for (a, b), c in self.comult.get(i, {}).items()}
            for i in range(self.dim)
        )

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def one(self):
        return self.domain.one

    @property
    def zero(self):
        return self.domain.zero

    def index(self, label: str) -> int:
        if label not in self._index:
            raise HopfAlgebraError(f"Unknown basis label '{label}'", witness=label)
        return self._index[label]

    def multiply_vectors(self, x: Vector, y: Vector) -> Vector:
        result = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mult.get((i, j), {}).items():
                    _accumulate(result, k, a * b * c)
        return _clean(result)

    def antipode_vector(self, x: Vector) -> Vector:
        result = {}
        for i, a in x.items():
            for k, c in self.antipode.get(i, {}).items():
                _accumulate(result, k, a * c)
        return _clean(result)

    def counit_value(self, x: Vector):
        total = self.zero
        for i, a in x.items():
            total += a * self.counit[i]
        return total

    def comult_vector(self, x: Vector) -> Tensor:
        result = {}
        for i, a in x.items():
            for key, c in self.comult.get(i, {}).items():
                _accumulate(result, key, a * c)
        return _clean(result)

    def iterated_comult_basis(self, i: int, legs: int) -> Tensor:
        """Delta applied legs-1 times to e_i, always on the last leg"""
        key = (i, legs)
        if key not in self._comult_cache:
            if legs < 1:
                raise InvalidInputError(f"Need at least one leg, got {legs}")
            current = {(i,): self.one}
            for _ in range(legs - 1):
                expanded = {}
                for prefix, c in current.items():
                    for (a, b), d in self.comult.get(prefix[-1], {}).items():
                        _accumulate(expanded, prefix[:-1] + (a, b), c * d)
                current = _clean(expanded)
            self._comult_cache[key] = current
        return self._comult_cache[key]

    def describe_vector(self, x: Vector) -> List[List[str]]:
        return sorted([self.labels[i], scalar_text(self.domain, c)] for i, c in x.items())

    def describe_tensor(self, x: Union[Tensor, TensorVector]) -> List[List[Any]]:
        terms = x.terms if isinstance(x, TensorVector) else x
        return sorted(
            [[self.labels[i] for i in key], scalar_text(self.domain, c)] for key, c in terms.items()
        )

    def vector_from_labels(self, values: Dict[str, Any]) -> Vector:
        return _clean({self.index(label): parse_scalar(self.domain, c) for label, c in values.items()})

    def __repr__(self):
        return f"HopfAlgebraStructure({self.name}, dim={self.dim}, field={domain_name(self.domain)})"


def iterated_comult(algebra: HopfAlgebraStructure, h: TensorVector, legs: int) -> TensorVector:
    """
    Sweedler expansion of a degree-1 tensor into `legs` legs

    Args:
        algebra: Hopf algebra
        h: Degree-1 tensor
        legs: Number of legs, at least 1

    Returns:
        Degree-`legs` tensor
    """
    if h.degree != 1:
        raise InvalidInputError(f"iterated_comult takes a degree-1 tensor, got degree {h.degree}")
    if legs < 1:
        raise InvalidInputError(f"Need at least one leg, got {legs}")
    result = {}
    for (i,), c in h.items():
        for key, d in algebra.iterated_comult_basis(i, legs).items():
            _accumulate(result, key, c * d)
    return TensorVector(legs, result)


def _check_characteristic(domain, order: int):
    p = domain.characteristic()
    if p and order % p == 0:
        raise HopfAlgebraError(f"GF({p}) divides the group order {order}; pick another prime")


def _as_table(group: Union[TableGroup, FinAbGroup]) -> TableGroup:
    return group if isinstance(group, TableGroup) else from_abelian(group)


def group_algebra(group: Union[TableGroup, FinAbGroup], domain=QQ) -> HopfAlgebraStructure:
    """
    k[G]: group-like basis, Delta(g) = g (x) g, epsilon(g) = 1, S(g) = g^{-1}

    Args:
        group: Finite group, abelian or by table
        domain: QQ or GF(p) with p not dividing |G|

    Returns:
        HopfAlgebraStructure whose basis index equals the group element index
    """
    table = _as_table(group)
    _check_characteristic(domain, table.order)
    one = domain.one
    m = table.order
    return HopfAlgebraStructure(
        labels=table.labels,
        mult={(a, b): {table.multiply(a, b): one} for a in range(m) for b in range(m)},
        unit={0: one},
        comult={a: {(a, a): one} for a in range(m)},
        counit=[one] * m,
        antipode={a: {table.inverse(a): one} for a in range(m)},
        domain=domain,
        name=f'k[{table.name}]',
    )


def function_algebra(group: Union[TableGroup, FinAbGroup], domain=QQ) -> HopfAlgebraStructure:
    """O(G): point indicators d_g with Delta(d_g) = sum over ab = g of d_a (x) d_b"""
    table = _as_table(group)
    _check_characteristic(domain, table.order)
    one = domain.one
    m = table.order
    comult = {g: {} for g in range(m)}
    for a in range(m):
        for b in range(m):
            comult[table.multiply(a, b)][(a, b)] = one
    return HopfAlgebraStructure(
        labels=[f'd[{label}]' for label in table.labels],
        mult={(g, g): {g: one} for g in range(m)},
        unit={g: one for g in range(m)},
        comult=comult,
        counit=[one if g == 0 else domain.zero for g in range(m)],
        antipode={g: {table.inverse(g): one} for g in range(m)},
        domain=domain,
        name=f'O({table.name})',
    )


def algebra_from_spec(text: str) -> HopfAlgebraStructure:
    """
    Resolve 'k[G]', 'F<p>[G]' or 'O(G)' where G is any group name accepted by the CLI

    Args:
        text: Algebra text

    Returns:
        Generated Hopf algebra
    """
    spec = text.strip()
    if spec.startswith('O(') and spec.endswith(')'):
        return function_algebra(table_group_from_spec(spec[2:-1]))
    if spec.endswith(']') and '[' in spec:
        prefix, group_text = spec[:-1].split('[', 1)
        if prefix == 'k':
            domain = QQ
        elif prefix.startswith('F') and prefix[1:].isdigit():
            domain = GF(int(prefix[1:]))
        else:
            raise GroupSpecError(f"Unknown field prefix '{prefix}'", token=prefix)
        return group_algebra(table_group_from_spec(group_text), domain)
    raise GroupSpecError(f"Unknown algebra '{spec}'; expected k[G], F<p>[G] or O(G)", token=spec)


def _failure(axiom: str, family: str, indices: Tuple[int, ...], algebra: HopfAlgebraStructure,
             lhs, rhs, describe) -> Failure:
    return Failure(
        relation=axiom, family=family, q=len(indices), indices=indices,
        witness=[algebra.labels[i] for i in indices], lhs=describe(lhs), rhs=describe(rhs),
    )


def verify_hopf_axioms(algebra: HopfAlgebraStructure) -> VerificationReport:
    """
    Check every Hopf algebra axiom as an exact identity of structure constants

    Associativity runs over all basis triples; the other axioms over basis
    labels or pairs. Failures carry the witnessing labels.

    Args:
        algebra: Structure to check

    Returns:
        VerificationReport of suite 'hopf-axioms'
    """
    H = algebra
    d = H.dim
    basis = [{i: H.one} for i in range(d)]
    failures = []
    counts = {'algebra': 0, 'coalgebra': 0, 'bialgebra': 0, 'antipode': 0}
    vec, ten = H.describe_vector, H.describe_tensor

    def check(axiom, family, indices, lhs, rhs, describe):
        counts[family] += 1
        if lhs != rhs:
            failures.append(_failure(axiom, family, indices, H, lhs, rhs, describe))

    def scalar(value):
        return [['1', scalar_text(H.domain, value)]]

    def tensor_product(x: Tensor, y: Tensor) -> Tensor:
        result = {}
        for (a, b), c in x.items():
            for (e, f), g in y.items():
                for k, s in H.mult.get((a, e), {}).items():
                    for l, t in H.mult.get((b, f), {}).items():
                        _accumulate(result, (k, l), c * g * s * t)
        return _clean(result)

    for i, j, k in product(range(d), repeat=3):
        left = H.multiply_vectors(H.multiply_vectors(basis[i], basis[j]), basis[k])
        right = H.multiply_vectors(basis[i], H.multiply_vectors(basis[j], basis[k]))
        check('associativity', 'algebra', (i, j, k), left, right, vec)
    for i in range(d):
        check('left unit', 'algebra', (i,), H.multiply_vectors(H.unit, basis[i]), basis[i], vec)
        check('right unit', 'algebra', (i,), H.multiply_vectors(basis[i], H.unit), basis[i], vec)

        delta = H.comult.get(i, {})
        left, right = {}, {}
        for (a, b), c in delta.items():
            for (x, y), e in H.comult.get(a, {}).items():
                _accumulate(left, (x, y, b), c * e)
            for (x, y), e in H.comult.get(b, {}).items():
                _accumulate(right, (a, x, y), c * e)
        check('coassociativity', 'coalgebra', (i,), _clean(left), _clean(right), ten)
        left_counit, right_counit = {}, {}
        for (a, b), c in delta.items():
            _accumulate(left_counit, b, c * H.counit[a])
            _accumulate(right_counit, a, c * H.counit[b])
        check('left counit', 'coalgebra', (i,), _clean(left_counit), basis[i], vec)
        check('right counit', 'coalgebra', (i,), _clean(right_counit), basis[i], vec)

        unit_counit = {k: c * H.counit[i] for k, c in H.unit.items()}
        left_antipode, right_antipode = {}, {}
        for (a, b), c in delta.items():
            for k, e in H.multiply_vectors(H.antipode_vector(basis[a]), basis[b]).items():
                _accumulate(left_antipode, k, c * e)
            for k, e in H.multiply_vectors(basis[a], H.antipode_vector(basis[b])).items():
                _accumulate(right_antipode, k, c * e)
        check('left antipode', 'antipode', (i,), _clean(left_antipode), _clean(unit_counit), vec)
        check('right antipode', 'antipode', (i,), _clean(right_antipode), _clean(unit_counit), vec)

    for i, j in product(range(d), repeat=2):
        product_ij = H.multiply_vectors(basis[i], basis[j])
        check('comultiplicative', 'bialgebra', (i, j), H.comult_vector(product_ij),
              tensor_product(H.comult.get(i, {}), H.comult.get(j, {})), ten)
        check('counit multiplicative', 'bialgebra', (i, j), H.counit_value(product_ij),
              H.counit[i] * H.counit[j], scalar)
    check('unit comultiplication', 'bialgebra', (), H.comult_vector(H.unit),
          _clean({(a, b): x * y for a, x in H.unit.items() for b, y in H.unit.items()}), ten)
    check('unit counit', 'bialgebra', (), H.counit_value(H.unit), H.one, scalar)

    failures.sort(key=Failure.sort_key)
    logger.info("Hopf axioms on %s: %d identities, %d failures", H.name, sum(counts.values()), len(failures))
    return VerificationReport(
        suite='hopf-axioms',
        relations_checked=sum(counts.values()),
        strategy={'kind': 'exhaustive-basis', 'dim': d, 'field': domain_name(H.domain)},
        failures=failures,
        counts=counts,
    )


class ModularPair:
    """
    Character delta and group-like sigma with the twisted antipode an involution

    Args:
        algebra: Hopf algebra
        delta: Character values per basis index
        sigma: Vector of the group-like element
        validate: Raise HopfAlgebraError when an invariant fails
    """

    def __init__(self, algebra: HopfAlgebraStructure, delta: Sequence[Any], sigma: Vector,
                 validate: bool = True):
        self.algebra = algebra
        self.delta = list(delta)
        self.sigma = _clean(sigma)
        if len(self.delta) != algebra.dim:
            raise HopfAlgebraError(f"Character has {len(self.delta)} values for {algebra.dim} basis labels")
        if validate:
            self.validate()

    @classmethod
    def trivial(cls, algebra: HopfAlgebraStructure) -> 'ModularPair':
        """(epsilon, 1)"""
        return cls(algebra, algebra.counit, algebra.unit)

    @classmethod
    def from_labels(cls, algebra: HopfAlgebraStructure, delta: Optional[Dict[str, Any]],
                    sigma: Optional[Union[str, Dict[str, Any]]], validate: bool = True) -> 'ModularPair':
        """
        Build a pair from label text

        delta None means the counit (unlisted labels map to 0); sigma None means the unit.
        """
        if delta is None:
            values = list(algebra.counit)
        else:
            values = [algebra.zero] * algebra.dim
            for label, value in delta.items():
                values[algebra.index(label)] = parse_scalar(algebra.domain, value)
        if sigma is None:
            vector = algebra.unit
        else:
            vector = algebra.vector_from_labels({sigma: 1} if isinstance(sigma, str) else sigma)
        return cls(algebra, values, vector, validate=validate)

    def character(self, x: Vector):
        total = self.algebra.zero
        for i, c in x.items():
            total += c * self.delta[i]
        return total

    def twisted_antipode(self, x: Vector) -> Vector:
        """sigma . delta(h<2>) S(h<1>)"""
        H = self.algebra
        result = {}
        for (a, b), c in H.comult_vector(x).items():
            weight = c * self.delta[b]
            if weight:
                for k, e in H.antipode_vector({a: H.one}).items():
                    _accumulate(result, k, weight * e)
        return H.multiply_vectors(self.sigma, _clean(result))

    def violations(self) -> List[Tuple[str, Any]]:
        """Failed invariants with a witness each, in checking order"""
        H = self.algebra
        found = []
        if self.character(H.unit) != H.one:
            found.append(('delta(1) = 1', None))
        for i, j in product(range(H.dim), repeat=2):
            if self.character(H.multiply_vectors({i: H.one}, {j: H.one})) != self.delta[i] * self.delta[j]:
                found.append(('delta multiplicative', [H.labels[i], H.labels[j]]))
                break
        square = _clean({(a, b): x * y for a, x in self.sigma.items() for b, y in self.sigma.items()})
        if not self.sigma or H.comult_vector(self.sigma) != square or H.counit_value(self.sigma) != H.one:
            found.append(('sigma group-like', H.describe_vector(self.sigma)))
        if self.character(self.sigma) != H.one:
            found.append(('delta(sigma) = 1', H.describe_vector(self.sigma)))
        for i in range(H.dim):
            if self.twisted_antipode(self.twisted_antipode({i: H.one})) != {i: H.one}:
                found.append(('twisted antipode squares to the identity', H.labels[i]))
                break
        return found

    def validate(self):
        found = self.violations()
        if found:
            condition, witness = found[0]
            raise HopfAlgebraError(f"Not a modular pair in involution: {condition} fails", witness=witness)

    @property
    def is_trivial(self) -> bool:
        return self.delta == self.algebra.counit and self.sigma == self.algebra.unit


def is_modular_pair_in_involution(algebra: HopfAlgebraStructure, delta: Sequence[Any], sigma: Vector) -> bool:
    return not ModularPair(algebra, delta, sigma, validate=False).violations()


def dump_hopf_algebra(algebra: HopfAlgebraStructure, path: Optional[str] = None) -> Dict[str, Any]:
    """
    JSON document of the structure constants, labels instead of indices

    Args:
        algebra: Hopf algebra
        path: Optional file to write

    Returns:
        The document
    """
    H = algebra
    label = H.labels

    def text(c):
        return scalar_text(H.domain, c)

    document = {
        'schema': HOPF_SCHEMA,
        'name': H.name,
        'field': domain_name(H.domain),
        'basis': label,
        'unit': {label[k]: text(c) for k, c in sorted(H.unit.items())},
        'counit': {label[k]: text(c) for k, c in enumerate(H.counit) if c},
        'mult': [[label[i], label[j], {label[k]: text(c) for k, c in sorted(v.items())}]
                 for (i, j), v in sorted(H.mult.items()) if v],
        'comult': [[label[i], [[label[a], label[b], text(c)] for (a, b), c in sorted(v.items())]]
                   for i, v in sorted(H.comult.items()) if v],
        'antipode': [[label[i], {label[k]: text(c) for k, c in sorted(v.items())}]
                     for i, v in sorted(H.antipode.items()) if v],
    }
    if path:
        dump_json(document, path)
    return document


def load_hopf_algebra(source: Union[str, Dict[str, Any]]) -> HopfAlgebraStructure:
    """
    Read a Hopf algebra from a JSON file path or an already parsed document

    Args:
        source: Path or document

    Returns:
        HopfAlgebraStructure (axioms are not checked here)
    """
    if isinstance(source, dict):
        document = source
    else:
        with open(source, 'r', encoding='utf-8') as handle:
            document = json.load(handle)
    try:
        domain = domain_from_name(document.get('field', 'QQ'))
        labels = list(document['basis'])
        index = {label: k for k, label in enumerate(labels)}

        def vector(values: Dict[str, Any]) -> Vector:
            return {index[k]: parse_scalar(domain, c) for k, c in values.items()}

        counit = [domain.zero] * len(labels)
        for k, c in document.get('counit', {}).items():
            counit[index[k]] = parse_scalar(domain, c)
        algebra = HopfAlgebraStructure(
            labels=labels,
            mult={(index[a], index[b]): vector(v) for a, b, v in document.get('mult', [])},
            unit=vector(document['unit']),
            comult={index[a]: {(index[b], index[c]): parse_scalar(domain, s) for b, c, s in terms}
                    for a, terms in document.get('comult', [])},
            counit=counit,
            antipode={index[a]: vector(v) for a, v in document.get('antipode', [])},
            domain=domain,
            name=document.get('name', 'H'),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise HopfAlgebraError(f"Malformed Hopf algebra document: {exc!r}") from exc
    logger.info("Loaded %s", algebra)
    return algebra


def enumerate_basis_tuples(algebra: HopfAlgebraStructure, degree: int) -> Iterable[Tuple[int, ...]]:
    return product(range(algebra.dim), repeat=degree)
