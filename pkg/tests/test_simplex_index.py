"""
Tests for index tuples, lexicographic ranks and the face and degeneracy branches
"""
import os
import sys
import unittest

os.environ.setdefault('EMFORGE_CONFIG', 'testing')
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.algebra.simplex_index import (  # noqa: E402
    Merged, Shifted, SimplexTuple, Trivial, binomial, codegeneracy_point, coface_point,
    degeneracy_branch, degeneracy_rows, face_branch, face_rows, level_tuples, rank_tuple,
    unrank_tuple,
)
from src.utils.errors import InvalidInputError  # noqa: E402


class TestRanking(unittest.TestCase):
    """Test the lexicographic ranking of tuples"""

    def test_binomial(self):
        """Test binomial coefficients, zero outside the triangle"""
        self.assertEqual(binomial(5, 2), 10)
        self.assertEqual(binomial(2, 3), 0)
        self.assertEqual(binomial(0, 0), 1)

    def test_level_order(self):
        """Test that level_tuples lists pairs lexicographically"""
        entries = [t.entries for t in level_tuples(4, 2)]
        self.assertEqual(entries, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])

    def test_rank_matches_listing(self):
        """Test rank and unrank against the lexicographic listing"""
        for q, n in ((5, 2), (6, 3), (4, 1), (3, 0)):
            for position, t in enumerate(level_tuples(q, n)):
                self.assertEqual(rank_tuple(t, q, n), position)
                self.assertEqual(unrank_tuple(position, q, n), t)

    def test_rank_is_a_bijection(self):
        """Test rank and unrank for every level up to q = 12, n = 4"""
        for n in range(1, 5):
            for q in range(13):
                tuples = level_tuples(q, n)
                self.assertEqual(len(tuples), binomial(q, n))
                ranks = [rank_tuple(t, q, n) for t in tuples]
                self.assertEqual(ranks, list(range(binomial(q, n))))
                for r in ranks:
                    self.assertEqual(rank_tuple(unrank_tuple(r, q, n), q, n), r)

    def test_invalid_tuples(self):
        """Test that unsorted or out-of-range tuples are refused"""
        with self.assertRaises(InvalidInputError):
            SimplexTuple((1, 1), 3)
        with self.assertRaises(InvalidInputError):
            SimplexTuple((0, 3), 3)
        with self.assertRaises(InvalidInputError):
            unrank_tuple(3, 3, 2)


class TestBranches(unittest.TestCase):
    """Test which branch produces each target coordinate"""

    def test_face_shifted(self):
        """Test that d_0 shifts every entry up by one"""
        action = face_branch(0, SimplexTuple((0, 1), 2), 3)
        self.assertEqual(action, Shifted(SimplexTuple((1, 2), 3)))

    def test_face_merged(self):
        """Test the signed product for d_2 on level 3"""
        action = face_branch(2, SimplexTuple((0, 1), 2), 3)
        self.assertIsInstance(action, Merged)
        terms = [(s.entries, sign) for s, sign in action.terms]
        self.assertEqual(terms, [((0, 1), 1), ((0, 2), 1), ((1, 2), -1)])

    def test_face_merged_three(self):
        """Test d_3 on K(A,3)_4: a012 + a013 - a023 + a123"""
        action = face_branch(3, SimplexTuple((0, 1, 2), 3), 4)
        terms = [(s.entries, sign) for s, sign in action.terms]
        self.assertEqual(terms, [((0, 1, 2), 1), ((0, 1, 3), 1), ((0, 2, 3), -1), ((1, 2, 3), 1)])

    def test_degeneracy_trivial(self):
        """Test the two ways a degenerate coordinate becomes trivial"""
        self.assertEqual(degeneracy_branch(1, SimplexTuple((0, 1), 3), 2), Trivial())
        self.assertEqual(degeneracy_branch(0, SimplexTuple((0, 1), 3), 2), Trivial())

    def test_degeneracy_shifted(self):
        """Test that s_0 pulls (1, 2) back to (0, 1)"""
        action = degeneracy_branch(0, SimplexTuple((1, 2), 3), 2)
        self.assertEqual(action, Shifted(SimplexTuple((0, 1), 2)))

    def test_index_range(self):
        """Test that indices outside [0, q] are refused"""
        with self.assertRaises(InvalidInputError):
            face_branch(4, SimplexTuple((0, 1), 2), 3)
        with self.assertRaises(InvalidInputError):
            degeneracy_branch(-1, SimplexTuple((0, 1), 3), 2)


class TestPointMaps(unittest.TestCase):
    """Test the coface and codegeneracy maps on points"""

    def test_examples(self):
        """Test both branches of each point map"""
        self.assertEqual(coface_point(2, 1), 1)
        self.assertEqual(coface_point(2, 2), 3)
        self.assertEqual(codegeneracy_point(1, 1), 1)
        self.assertEqual(codegeneracy_point(1, 2), 1)
        self.assertEqual(codegeneracy_point(0, 4), 3)

    def test_cosimplicial_identities(self):
        """Test the cosimplicial identities for all indices and points up to 8"""
        points = range(9)
        for j in range(9):
            for u in points:
                self.assertEqual(codegeneracy_point(j, coface_point(j, u)), u)
                self.assertEqual(codegeneracy_point(j, coface_point(j + 1, u)), u)
            for i in range(j):
                for u in points:
                    self.assertEqual(coface_point(j, coface_point(i, u)),
                                     coface_point(i, coface_point(j - 1, u)))
                    self.assertEqual(codegeneracy_point(j, coface_point(i, u)),
                                     coface_point(i, codegeneracy_point(j - 1, u)))
            for i in range(j + 1):
                for u in points:
                    self.assertEqual(codegeneracy_point(j, codegeneracy_point(i, u)),
                                     codegeneracy_point(i, codegeneracy_point(j + 1, u)))
            for i in range(j + 2, 10):
                for u in points:
                    self.assertEqual(codegeneracy_point(j, coface_point(i, u)),
                                     coface_point(i - 1, codegeneracy_point(j, u)))


class TestRows(unittest.TestCase):
    """Test the sparse coordinate rows"""

    def test_face_rows_level_three(self):
        """Test d_2 on K(A,2)_3: a01 + a02 - a12"""
        self.assertEqual(face_rows(2, 3, 2), [[(0, 1), (1, 1), (2, -1)]])
        self.assertEqual(face_rows(0, 3, 2), [[(2, 1)]])
        self.assertEqual(face_rows(1, 3, 2), [[(1, 1)]])

    def test_degeneracy_rows_level_two(self):
        """Test s_0 and s_1 from level 2 to level 3"""
        self.assertEqual(degeneracy_rows(0, 2, 2), [[], [(0, 1)], [(0, 1)]])
        self.assertEqual(degeneracy_rows(1, 2, 2), [[], [(0, 1)], []])

    def test_row_counts(self):
        """Test that there is one row per target coordinate"""
        for q in range(1, 6):
            for i in range(q + 1):
                self.assertEqual(len(face_rows(i, q, 2)), binomial(q - 1, 2))
                self.assertEqual(len(degeneracy_rows(i, q, 2)), binomial(q + 1, 2))


if __name__ == '__main__':
    unittest.main()
