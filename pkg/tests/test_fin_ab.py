"""
Tests for finite abelian groups, Smith normal form and homology
"""
import os
import sys
import unittest
from collections import Counter
from math import gcd

os.environ.setdefault('EMFORGE_CONFIG', 'testing')
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np  # noqa: E402

from src.algebra.fin_ab import (  # noqa: E402
    AbChainComplex, AbHom, FinAbGroup, SmithNormalForm, enumerate_elements,
    group_from_order_counts, group_from_spec, hom_kernel, homology_at, integer_matrix,
    lift_through, matmul, smith_normal_form,
)
from src.utils.errors import (  # noqa: E402
    CapExceededError, ConsistencyError, GroupSpecError, InvalidInputError,
)

Z2 = FinAbGroup((2,))
Z4 = FinAbGroup((4,))


class TestSmithNormalForm(unittest.TestCase):
    """Test the Smith normal form and its transforms"""

    def test_known_diagonal(self):
        """Test the diagonal of a classic 3 x 3 example"""
        matrix = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        left, form, right = smith_normal_form(matrix)

        self.assertEqual([int(form[k, k]) for k in range(3)], [2, 6, 12])
        product = matmul(matmul(left, integer_matrix(matrix)), right)
        self.assertTrue(np.array_equal(product, form))

    def test_rank_deficient(self):
        """Test a matrix of rank one"""
        snf = SmithNormalForm([[1, 2], [2, 4]])
        self.assertEqual(snf.rank, 1)
        self.assertEqual([int(d) for d in snf.diagonal], [1, 0])

    def test_divisibility_chain(self):
        """Test that each diagonal entry divides the next"""
        snf = SmithNormalForm([[4, 0, 0], [0, 6, 0], [0, 0, 10]], left=False, right=False)
        diagonal = [int(d) for d in snf.diagonal]
        self.assertEqual(diagonal, [2, 2, 60])


class TestFinAbGroup(unittest.TestCase):
    """Test group construction and invariant factors"""

    def test_canonical_form(self):
        """Test that coprime factors merge"""
        self.assertEqual(FinAbGroup((2, 3)).canonical_form(), FinAbGroup((6,)))
        self.assertEqual(FinAbGroup((4, 6)).canonical_form(), FinAbGroup((2, 12)))
        self.assertTrue(FinAbGroup((3, 2)).is_isomorphic(FinAbGroup((6,))))

    def test_text_form(self):
        """Test the text rendering of groups"""
        self.assertEqual(str(FinAbGroup((2, 4))), 'Z/2 x Z/4')
        self.assertEqual(str(FinAbGroup()), '1')

    def test_small_modulus_rejected(self):
        """Test that moduli below 2 are refused"""
        with self.assertRaises(InvalidInputError):
            FinAbGroup((1,))

    def test_element_indexing(self):
        """Test that index_of and element_at agree"""
        group = FinAbGroup((2, 3))
        for index in range(group.order):
            self.assertEqual(group.index_of(group.element_at(index).coords), index)

    def test_enumeration_cap(self):
        """Test that enumeration respects the cap"""
        self.assertEqual(len(enumerate_elements(FinAbGroup((2, 2)), cap=4)), 4)
        with self.assertRaises(CapExceededError) as ctx:
            enumerate_elements(FinAbGroup((2, 2, 2)), cap=4)
        self.assertEqual(ctx.exception.size, 8)


class TestGroupSpec(unittest.TestCase):
    """Test parsing of group text"""

    def test_direct_sum(self):
        """Test a two-term direct sum"""
        self.assertEqual(group_from_spec('Z/2 x Z/4').moduli, (2, 4))

    def test_trivial(self):
        """Test the trivial group"""
        self.assertTrue(group_from_spec('1').is_trivial)

    def test_rejects_bad_terms(self):
        """Test that malformed terms name the offending token"""
        for text in ('Z/0', 'Z/1', 'Q', ''):
            with self.assertRaises(GroupSpecError):
                group_from_spec(text)
        with self.assertRaises(GroupSpecError) as ctx:
            group_from_spec('Z/2 x Z/0')
        self.assertEqual(ctx.exception.token, 'Z/0')


class TestHomomorphisms(unittest.TestCase):
    """Test homomorphisms, kernels and homology"""

    def test_well_defined_check(self):
        """Test that a map Z/2 -> Z/4 must send 1 to an element of order 2"""
        AbHom(Z2, Z4, [[2]])
        with self.assertRaises(InvalidInputError):
            AbHom(Z2, Z4, [[1]])

    def test_kernel_of_doubling(self):
        """Test the kernel of multiplication by 2 on Z/4"""
        doubling = AbHom(Z4, Z4, [[2]])
        kernel, incl = hom_kernel(doubling)

        self.assertEqual(kernel, Z2)
        self.assertTrue(doubling.compose(incl).is_zero)

    def test_homology_of_doubling(self):
        """Test that ker 2 = im 2 on Z/4"""
        doubling = AbHom(Z4, Z4, [[2]])
        self.assertTrue(homology_at(doubling, doubling).is_trivial)

    def test_homology_rejects_non_complex(self):
        """Test that a non-zero composite is refused"""
        identity = AbHom.identity(Z2)
        with self.assertRaises(InvalidInputError):
            homology_at(identity, identity)

    def test_lift_through_inclusion(self):
        """Test factoring through the subgroup 2Z/4"""
        incl = AbHom(Z2, Z4, [[2]])
        lifted = lift_through(incl, AbHom(Z2, Z4, [[2]]))
        self.assertEqual(lifted, AbHom.identity(Z2))

        with self.assertRaises(ConsistencyError):
            lift_through(incl, AbHom.identity(Z4))

    def test_chain_complex(self):
        """Test homology of a complex with zero differentials"""
        complex_ = AbChainComplex(
            [Z2, Z2], [AbHom.zero(Z2, FinAbGroup()), AbHom.zero(Z2, Z2)]
        )
        self.assertEqual(complex_.homology(0), Z2)


GROUPS = [
    (2,), (3,), (4,), (6,), (8,), (9,), (12,), (16,), (2, 2), (2, 4), (2, 6), (3, 3), (3, 6),
    (4, 4), (2, 8), (2, 2, 2), (2, 2, 4), (2, 4, 8),
]


def random_group(rng) -> FinAbGroup:
    return FinAbGroup(GROUPS[int(rng.integers(len(GROUPS)))])


def random_hom(rng, source: FinAbGroup, target: FinAbGroup) -> AbHom:
    """Random well-defined map: the entry from Z/s to Z/t is a multiple of t / gcd(s, t)"""
    if source.rank == 0 or target.rank == 0:
        return AbHom.zero(source, target)
    rows = [[int(rng.integers(gcd(s, t))) * (t // gcd(s, t)) for s in source.moduli]
            for t in target.moduli]
    return AbHom(source, target, integer_matrix(rows, shape=(target.rank, source.rank)))


def subgroup_from_elements(elements) -> FinAbGroup:
    return group_from_order_counts(Counter(x.order() for x in elements))


class TestBruteForce(unittest.TestCase):
    """Test kernels and homology against element enumeration"""

    def test_kernels(self):
        """Test hom_kernel on seeded random maps between groups of order at most 64"""
        for seed in range(120):
            rng = np.random.default_rng(seed)
            source, target = random_group(rng), random_group(rng)
            f = random_hom(rng, source, target)
            brute = [x for x in enumerate_elements(source, 64) if f.apply(x).is_zero]

            kernel, incl = hom_kernel(f)

            self.assertEqual(kernel.order, len(brute), seed)
            self.assertTrue(kernel.is_isomorphic(subgroup_from_elements(brute)), seed)
            self.assertTrue(f.compose(incl).is_zero, seed)

    def test_homology(self):
        """Test homology_at on seeded complexes X -> Y -> Z with |Y| at most 64"""
        for seed in range(120):
            rng = np.random.default_rng(1000 + seed)
            x, y, z = random_group(rng), random_group(rng), random_group(rng)
            d_out = random_hom(rng, y, z)
            kernel, incl = hom_kernel(d_out)
            if kernel.is_trivial:
                d_in = AbHom.zero(x, y)
            else:
                d_in = incl.compose(random_hom(rng, x, kernel))

            cycles = [e for e in enumerate_elements(y, 64) if d_out.apply(e).is_zero]
            boundaries = {d_in.apply(e) for e in enumerate_elements(x, 64)}
            coset_orders = Counter()
            for e in cycles:
                k, multiple = 1, e
                while multiple not in boundaries:
                    k, multiple = k + 1, multiple + e
                coset_orders[k] += 1
            counts = {k: c // len(boundaries) for k, c in coset_orders.items()}

            homology = homology_at(d_in, d_out)

            self.assertEqual(homology.order, len(cycles) // len(boundaries), seed)
            self.assertTrue(homology.is_isomorphic(group_from_order_counts(counts)), seed)


class TestOrderCounts(unittest.TestCase):
    """Test recovery of a group from its order histogram"""

    def test_recovery(self):
        """Test the Klein group, Z/4 and Z/2 x Z/4"""
        self.assertEqual(group_from_order_counts({1: 1, 2: 3}), FinAbGroup((2, 2)))
        self.assertEqual(group_from_order_counts({1: 1, 2: 1, 4: 2}), FinAbGroup((4,)))
        self.assertEqual(group_from_order_counts({1: 1, 2: 3, 4: 4}).canonical_form(),
                         FinAbGroup((2, 4)))
        self.assertTrue(group_from_order_counts({1: 1}).is_trivial)


if __name__ == '__main__':
    unittest.main()
