"""
Tests for Hopf algebras, modular pairs and the cyclic modules built on them
"""
import os
import sys
import tempfile
import unittest

os.environ.setdefault('EMFORGE_CONFIG', 'testing')
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.algebra.fin_ab import FinAbGroup  # noqa: E402
from src.algebra.table_group import symmetric3  # noqa: E402
from src.hopf.algebra import (  # noqa: E402
    ModularPair, TensorVector, algebra_from_spec, domain_name, dump_hopf_algebra,
    function_algebra, group_algebra, is_modular_pair_in_involution, iterated_comult,
    load_hopf_algebra, verify_hopf_axioms,
)
from src.hopf.cyclic import (  # noqa: E402
    ConnesMoscoviciModule, SecondaryModule, block_legs, linearization_map,
    verify_kg1_linearization, verify_linearization,
)
from src.simplicial.core import (  # noqa: E402
    Sampled, face, verify_cyclic, verify_simplicial, verify_symmetric,
)
from src.utils.errors import GroupSpecError, HopfAlgebraError, InvalidInputError  # noqa: E402

Z2 = FinAbGroup((2,))
Z3 = FinAbGroup((3,))


def basis(algebra, *indices):
    return TensorVector.basis(indices, algebra.one)


class TestHopfAlgebras(unittest.TestCase):
    """Test the generated Hopf algebras and the axiom checker"""

    def test_group_algebra_structure(self):
        """Test Delta(g) = g (x) g and S(g) = g^-1 in k[Z/3]"""
        H = group_algebra(Z3)
        self.assertEqual(H.comult[1], {(1, 1): H.one})
        self.assertEqual(H.antipode_vector({1: H.one}), {2: H.one})
        self.assertTrue(H.commutative)
        self.assertTrue(H.cocommutative)

    def test_axioms_hold(self):
        """Test k[G] and O(G) for abelian and non-abelian G"""
        for H in (group_algebra(FinAbGroup((6,))), group_algebra(symmetric3()),
                  function_algebra(symmetric3())):
            report = verify_hopf_axioms(H)
            self.assertTrue(report.passed, H.name)
            self.assertEqual(report.strategy['dim'], H.dim)

    def test_function_algebra_flags(self):
        """Test that O(S3) is commutative but not cocommutative"""
        H = function_algebra(symmetric3())
        self.assertTrue(H.commutative)
        self.assertFalse(H.cocommutative)
        self.assertFalse(group_algebra(symmetric3()).commutative)

    def test_corrupted_product(self):
        """Test that a wrong structure constant breaks associativity"""
        H = group_algebra(Z3)
        H.mult[(1, 1)] = {1: H.one}
        report = verify_hopf_axioms(H)
        self.assertFalse(report.passed)
        self.assertIn('associativity', {f.relation for f in report.failures})

    def test_iterated_comult(self):
        """Test Delta on g + h into two and three legs"""
        H = group_algebra(Z3)
        h = TensorVector(1, {(1,): H.one, (2,): H.one})
        self.assertEqual(iterated_comult(H, h, 2), TensorVector(2, {(1, 1): H.one, (2, 2): H.one}))
        self.assertEqual(iterated_comult(H, basis(H, 1), 3), basis(H, 1, 1, 1))
        with self.assertRaises(InvalidInputError):
            iterated_comult(H, basis(H, 1, 1), 2)

    def test_algebra_from_spec(self):
        """Test the algebra names accepted on the command line"""
        self.assertEqual(algebra_from_spec('k[Z/2]').dim, 2)
        self.assertEqual(domain_name(algebra_from_spec('F5[Z/2]').domain), 'GF(5)')
        self.assertEqual(algebra_from_spec('O(S3)').dim, 6)
        with self.assertRaises(HopfAlgebraError):
            algebra_from_spec('F2[Z/2]')
        for text in ('x[Z/2]', 'nonsense'):
            with self.assertRaises(GroupSpecError):
                algebra_from_spec(text)

    def test_document_round_trip(self):
        """Test writing and reading the structure constants of O(S3)"""
        H = function_algebra(symmetric3())
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'o_s3.json')
            dump_hopf_algebra(H, path)
            loaded = load_hopf_algebra(path)
        self.assertEqual(loaded.labels, H.labels)
        self.assertEqual(loaded.mult, H.mult)
        self.assertEqual(loaded.comult, H.comult)
        self.assertTrue(verify_hopf_axioms(loaded).passed)

    def test_malformed_document(self):
        """Test that a document without a basis is refused"""
        with self.assertRaises(HopfAlgebraError):
            load_hopf_algebra({'unit': {}})


class TestModularPairs(unittest.TestCase):
    """Test modular pairs in involution"""

    def test_trivial_pair(self):
        """Test (epsilon, 1)"""
        H = group_algebra(FinAbGroup((4,)))
        pair = ModularPair.trivial(H)
        self.assertTrue(pair.is_trivial)
        self.assertEqual(pair.violations(), [])

    def test_sign_character(self):
        """Test the sign character of Z/2 with sigma = 1"""
        H = group_algebra(Z2)
        pair = ModularPair.from_labels(H, {'0': '1', '1': '-1'}, None)
        self.assertFalse(pair.is_trivial)
        self.assertTrue(is_modular_pair_in_involution(H, pair.delta, pair.sigma))

    def test_sigma_not_group_like(self):
        """Test that sigma = e + g is refused"""
        H = group_algebra(Z2)
        pair = ModularPair.from_labels(H, None, {'0': 1, '1': 1}, validate=False)
        self.assertEqual(pair.violations()[0][0], 'sigma group-like')
        with self.assertRaises(HopfAlgebraError):
            ModularPair.from_labels(H, None, {'0': 1, '1': 1})

    def test_twisted_antipode_not_involutive(self):
        """Test sigma a transposition in k[S3]: conjugation is not the identity"""
        group = symmetric3()
        H = group_algebra(group)
        transposition = next(a for a in range(group.order) if group.element_order(a) == 2)
        pair = ModularPair(H, H.counit, {transposition: H.one}, validate=False)
        conditions = [condition for condition, _ in pair.violations()]
        self.assertEqual(conditions, ['twisted antipode squares to the identity'])


class TestConnesMoscoviciModule(unittest.TestCase):
    """Test H^(delta,sigma) on group algebras"""

    def setUp(self):
        self.H = group_algebra(Z3)
        self.module = ConnesMoscoviciModule(self.H)

    def test_cyclic_operator(self):
        """Test tau_2(g1 (x) g2) = (g1 g2)^-1 (x) g1"""
        self.assertEqual(self.module.cyclic(2, basis(self.H, 1, 2)), basis(self.H, 0, 1))
        self.assertEqual(self.module.cyclic(2, basis(self.H, 1, 1)), basis(self.H, 1, 1))

    def test_faces(self):
        """Test the inner face multiplies and the outer faces apply characters"""
        self.assertEqual(self.module.face(2, 1, basis(self.H, 1, 2)), basis(self.H, 0))
        self.assertEqual(self.module.face(1, 0, basis(self.H, 2)), TensorVector(0, {(): self.H.one}))
        self.assertEqual(self.module.face(2, 2, basis(self.H, 1, 2)), basis(self.H, 1))

    def test_degeneracy(self):
        """Test that s_1 inserts the unit after the first leg"""
        self.assertEqual(self.module.degeneracy(2, 1, basis(self.H, 1, 2)), basis(self.H, 1, 0, 2))

    def test_symmetric_action(self):
        """Test t_1(g1 (x) g2) = g1^-1 (x) g1 g2"""
        self.assertEqual(self.module.symmetric_action(2, 1, basis(self.H, 1, 1)), basis(self.H, 2, 2))

    def test_degree_mismatch(self):
        """Test that a tensor of the wrong degree is refused"""
        with self.assertRaises(InvalidInputError):
            self.module.apply(face(2, 1), basis(self.H, 1))

    def test_relations(self):
        """Test the simplicial, cyclic and symmetric relations on k[Z/3]"""
        self.assertTrue(verify_simplicial(self.module, 3).passed)
        self.assertTrue(verify_cyclic(self.module, 3).passed)
        self.assertTrue(verify_symmetric(self.module, 3).passed)

    def test_twisted_module(self):
        """Test the cyclic relations with the sign character of Z/2"""
        H = group_algebra(Z2)
        pair = ModularPair.from_labels(H, {'0': '1', '1': '-1'}, None)
        module = ConnesMoscoviciModule(H, pair)
        self.assertTrue(module.name.endswith('^(delta,sigma)'))
        self.assertFalse(module.has_symmetric)
        self.assertTrue(verify_cyclic(module, 4).passed)
        self.assertEqual(module.cyclic(1, basis(H, 1)), basis(H, 1).scaled(H.domain.convert(-1)))

    def test_sampled_relations(self):
        """Test seeded random combinations on the non-abelian group algebra"""
        module = ConnesMoscoviciModule(group_algebra(symmetric3()))
        report = verify_cyclic(module, 3, Sampled(samples=20, seed=3))
        self.assertTrue(report.passed)

    def test_sampled_symmetric_relations(self):
        """Test sampled Coxeter relations and t_1 ... t_q = tau_q on k[Z/2] and k[Z/3]"""
        for seed, group in enumerate((Z2, Z3)):
            module = ConnesMoscoviciModule(group_algebra(group))
            report = verify_symmetric(module, 4, Sampled(samples=200, seed=seed))
            self.assertTrue(report.passed, report.failures)
            self.assertIn('t_1 t_2 ... t_q = tau_q', report.counts)

    def test_symmetric_needs_positive_level(self):
        """Test that q_max below 1 is refused"""
        with self.assertRaises(InvalidInputError):
            verify_symmetric(ConnesMoscoviciModule(group_algebra(Z2)), 0)

    def test_function_algebra(self):
        """Test O(S3): cyclic but without a symmetric action"""
        module = ConnesMoscoviciModule(function_algebra(symmetric3()))
        self.assertTrue(verify_cyclic(module, 2).passed)
        with self.assertRaises(InvalidInputError):
            verify_symmetric(module, 2)
        with self.assertRaises(InvalidInputError):
            module.symmetric_action(2, 1, basis(module.algebra, 1, 1))


class TestSecondaryModule(unittest.TestCase):
    """Test the secondary module 2K(H) and its linearization"""

    def setUp(self):
        self.H = group_algebra(Z3)
        self.module = SecondaryModule(self.H)

    def test_block_order(self):
        """Test the leg order on level 4"""
        self.assertEqual(block_legs(4), [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])

    def test_inner_face(self):
        """Test d_2 on level 3: h01 h02 S(h12)"""
        self.assertEqual(self.module.face(3, 2, basis(self.H, 1, 1, 2)), basis(self.H, 0))
        self.assertEqual(self.module.face(3, 2, basis(self.H, 1, 2, 0)), basis(self.H, 0))
        self.assertEqual(self.module.face(3, 2, basis(self.H, 1, 0, 0)), basis(self.H, 1))

    def test_counit_face(self):
        """Test that d_0 on level 2 applies the counit"""
        self.assertEqual(self.module.face(2, 0, basis(self.H, 1)), TensorVector(0, {(): self.H.one}))

    def test_needs_commutative_algebra(self):
        """Test that k[S3] is refused"""
        with self.assertRaises(HopfAlgebraError):
            SecondaryModule(group_algebra(symmetric3()))

    def test_relations(self):
        """Test the simplicial and cyclic relations"""
        module = SecondaryModule(group_algebra(Z2))
        self.assertTrue(verify_simplicial(module, 4).passed)
        self.assertTrue(verify_cyclic(module, 4).passed)
        self.assertTrue(verify_cyclic(self.module, 3).passed)

    def test_sampled_relations_z3(self):
        """Test sampled simplicial and cyclic relations of 2K(k[Z/3]) up to level 4"""
        self.assertTrue(verify_simplicial(self.module, 4, Sampled(samples=200, seed=5)).passed)
        self.assertTrue(verify_cyclic(self.module, 4, Sampled(samples=200, seed=6)).passed)

    def test_linearization_z3_level_four(self):
        """Test the linearization squares over Z/3 up to level 4"""
        self.assertTrue(verify_linearization(Z3, 4).passed)

    def test_linearization_map(self):
        """Test that lexicographic coordinates land on block-ordered legs"""
        group = FinAbGroup((5,))
        tensor = linearization_map(group, 4, [0, 1, 2, 3, 4, 0])
        self.assertEqual(tensor.terms, {(0, 1, 3, 2, 4, 0): 1})
        with self.assertRaises(InvalidInputError):
            linearization_map(group, 4, [0, 1])

    def test_linearization_squares(self):
        """Test that linearization commutes with every structure map"""
        self.assertTrue(verify_linearization(Z2, 4).passed)
        self.assertTrue(verify_linearization(Z3, 3).passed)
        self.assertTrue(verify_kg1_linearization(symmetric3(), 3).passed)


if __name__ == '__main__':
    unittest.main()
