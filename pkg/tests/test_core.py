"""
Tests for relation checking, the Moore complex, homotopy groups and the mutation harness
"""
import os
import sys
import unittest

os.environ.setdefault('EMFORGE_CONFIG', 'testing')
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.algebra.fin_ab import AbHom, FinAbGroup  # noqa: E402
from src.algebra.table_group import symmetric3  # noqa: E402
from src.simplicial.core import (  # noqa: E402
    Exhaustive, Sampled, brute_force_homotopy, cyclic_relations, degeneracy, face,
    homotopy_groups, moore_complex, run_mutation_harness, simplicial_relations,
    unnormalized_chain_complex, verify_cyclic, verify_simplicial,
)
from src.simplicial.em_construct import KAn, KG1, KG1Abelian  # noqa: E402
from src.utils.errors import CapExceededError, InvalidInputError  # noqa: E402

Z2 = FinAbGroup((2,))
Z3 = FinAbGroup((3,))


class TestRelations(unittest.TestCase):
    """Test the generated relation lists"""

    def test_levels_stay_in_range(self):
        """Test that no relation reaches past level q_max + 1"""
        for relation in simplicial_relations(4) + cyclic_relations(4):
            self.assertLessEqual(relation.top_level, 5)

    def test_families_present(self):
        """Test that every identity family is generated"""
        names = {r.family for r in simplicial_relations(3)}
        self.assertEqual(len(names), 6)
        self.assertIn('tau_q^{q+1} = id', {r.family for r in cyclic_relations(3)})


class TestVerification(unittest.TestCase):
    """Test the simplicial and cyclic verification suites"""

    def test_kan_simplicial(self):
        """Test the simplicial identities on K(Z/2,2) and K(Z/3,3)"""
        self.assertTrue(verify_simplicial(KAn(Z2, 2), 4).passed)
        self.assertTrue(verify_simplicial(KAn(Z3, 3), 5).passed)

    def test_kan_cyclic(self):
        """Test the cyclic relations on K(Z/3,2) and K(Z/2 x Z/2,1)"""
        report = verify_cyclic(KAn(Z3, 2), 5)
        self.assertTrue(report.passed)
        self.assertEqual(report.strategy['evaluation'], 'matrix')
        self.assertTrue(verify_cyclic(KAn(FinAbGroup((2, 2)), 1), 4).passed)

    def test_kg1_table_family(self):
        """Test K(S3,1) exhaustively and by sampling"""
        family = KG1(symmetric3())
        self.assertTrue(verify_simplicial(family, 3).passed)
        self.assertTrue(verify_cyclic(family, 3).passed)
        sampled = verify_cyclic(family, 5, Sampled(samples=100, seed=7))
        self.assertTrue(sampled.passed)
        self.assertEqual(sampled.strategy['seed'], 7)

    def test_sampled_cyclic_z6(self):
        """Test the cyclic relations on K(Z/6,2) with a seeded sampled strategy"""
        report = verify_cyclic(KAn(FinAbGroup((6,)), 2), 5, Sampled(samples=200, seed=4))
        self.assertTrue(report.passed)
        self.assertEqual(report.failures, [])

    def test_cap_on_exhaustive_tables(self):
        """Test that exhaustive checking above the cap is refused"""
        with self.assertRaises(CapExceededError):
            verify_simplicial(KG1(symmetric3()), 4, Exhaustive(cap=100))

    def test_no_cyclic_operator(self):
        """Test that K(A,3) cannot be checked for cyclic relations"""
        with self.assertRaises(InvalidInputError):
            verify_cyclic(KAn(Z2, 3), 3)

    def test_broken_face_is_reported(self):
        """Test that a corrupted face fails with a witness"""
        family = KAn(Z3, 2)
        broken = family.override(face(3, 2), AbHom.zero(family.level(3), family.level(2)))
        report = verify_simplicial(broken, 3)
        self.assertFalse(report.passed)
        self.assertEqual(report.verdict, 'fail')
        failure = report.failures[0]
        self.assertEqual(failure.family, 'd_j s_j = id')
        self.assertEqual(failure.witness, [1])
        self.assertEqual((failure.lhs, failure.rhs), ([0], [1]))

    def test_broken_degeneracy_is_reported(self):
        """Test that a zero degeneracy breaks d_j s_j = id"""
        family = KAn(Z2, 2)
        broken = family.override(degeneracy(2, 0), AbHom.zero(family.level(2), family.level(3)))
        report = verify_simplicial(broken, 3)
        self.assertIn('d_j s_j = id', {f.family for f in report.failures})


class TestHomotopy(unittest.TestCase):
    """Test homotopy groups from the Moore complex"""

    def test_eilenberg_maclane_z2(self):
        """Test pi_q(K(Z/2,2)) = Z/2 at q = 2 only"""
        groups = homotopy_groups(KAn(Z2, 2), 4)
        self.assertEqual([str(g) for g in groups], ['1', '1', 'Z/2', '1', '1'])

    def test_eilenberg_maclane_z2_degree_four(self):
        """Test pi_q(K(Z/2,4)) up to q = 6"""
        groups = homotopy_groups(KAn(Z2, 4), 6)
        self.assertEqual([str(g) for g in groups], ['1', '1', '1', '1', 'Z/2', '1', '1'])

    def test_klein_group_every_degree(self):
        """Test pi_q(K(Z/2 x Z/2,n)) for n = 1, 2, 3"""
        klein = FinAbGroup((2, 2))
        for n in (1, 2, 3):
            groups = homotopy_groups(KAn(klein, n), 5)
            for q, group in enumerate(groups):
                if q == n:
                    self.assertTrue(group.is_isomorphic(klein), n)
                else:
                    self.assertTrue(group.is_trivial, (n, q))

    def test_klein_group_degree_three(self):
        """Test pi_3(K(Z/2 x Z/2,3)) = Z/2 x Z/2"""
        groups = homotopy_groups(KAn(FinAbGroup((2, 2)), 3), 4)
        self.assertEqual(groups[3], FinAbGroup((2, 2)))
        for q in (0, 1, 2, 4):
            self.assertTrue(groups[q].is_trivial)

    def test_normalized_levels(self):
        """Test that the normalized levels of K(A,2) vanish away from q = 2"""
        complex_ = moore_complex(KAn(FinAbGroup((4,)), 2), 5)
        for q in (0, 1, 3, 4, 5):
            self.assertTrue(complex_.levels[q].is_trivial)
        self.assertEqual(complex_.levels[2], FinAbGroup((4,)))

    def test_kg1_abelian(self):
        """Test pi_1(K(Z/6,1)) = Z/6"""
        groups = homotopy_groups(KG1Abelian(FinAbGroup((6,))), 2)
        self.assertEqual(groups[1], FinAbGroup((6,)))

    def test_unnormalized_complex(self):
        """Test that the alternating face sum has the same homology"""
        complex_ = unnormalized_chain_complex(KAn(Z2, 2), 4)
        self.assertEqual(complex_.homology(2), Z2)
        self.assertTrue(complex_.homology(1).is_trivial)

    def test_moore_needs_abelian_family(self):
        """Test that table families are refused"""
        with self.assertRaises(InvalidInputError):
            moore_complex(KG1(symmetric3()), 2)


class TestBruteForce(unittest.TestCase):
    """Test the enumeration oracle for homotopy groups"""

    def test_agrees_with_moore_complex(self):
        """Test K(Z/2,2) up to degree 3"""
        described = brute_force_homotopy(KAn(Z2, 2), 3, cap=1 << 10)
        self.assertEqual([d.order for d in described], [1, 1, 2, 1])
        self.assertEqual(described[2].structure, Z2)

    def test_nonabelian_fundamental_group(self):
        """Test the order histogram of pi_1(K(S3,1))"""
        described = brute_force_homotopy(KG1(symmetric3()), 2, cap=1 << 10)
        self.assertEqual(described[1].order, 6)
        self.assertEqual(dict(described[1].order_histogram), {1: 1, 2: 3, 3: 2})
        self.assertIsNone(described[1].structure)
        self.assertEqual(described[2].order, 1)

    def test_cap(self):
        """Test that the oracle refuses levels above the cap"""
        with self.assertRaises(CapExceededError):
            brute_force_homotopy(KAn(Z2, 2), 4, cap=32)


class TestMutationHarness(unittest.TestCase):
    """Test that single-entry corruptions are caught"""

    def test_all_mutants_killed(self):
        """Test a full kill rate on K(Z/2,2)"""
        report = run_mutation_harness(KAn(Z2, 2), 4, mutations=50, seed=0)
        self.assertEqual(report.trials, 50)
        self.assertEqual(report.kill_rate, 1.0)
        self.assertTrue(all(o.caught_by for o in report.outcomes))

    def test_seeded(self):
        """Test that the same seed gives the same trials"""
        first = run_mutation_harness(KAn(Z3, 2), 3, mutations=10, seed=5)
        second = run_mutation_harness(KAn(Z3, 2), 3, mutations=10, seed=5)
        self.assertEqual(first.to_dict(), second.to_dict())


if __name__ == '__main__':
    unittest.main()
