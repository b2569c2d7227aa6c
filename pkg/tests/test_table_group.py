"""
Tests for groups given by multiplication tables
"""
import os
import sys
import tempfile
import unittest

os.environ.setdefault('EMFORGE_CONFIG', 'testing')
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.algebra.fin_ab import FinAbGroup  # noqa: E402
from src.algebra.table_group import (  # noqa: E402
    TableGroup, cyclic, dihedral4, from_abelian, load_table_group, quaternion, symmetric3,
    table_group_from_spec,
)
from src.utils.errors import GroupSpecError, InvalidInputError  # noqa: E402

# a loop of order 5 in which every element squares to the identity
NON_ASSOCIATIVE = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestBuiltinGroups(unittest.TestCase):
    """Test the generated tables of the built-in groups"""

    def test_symmetric3(self):
        """Test S3: order 6, not abelian"""
        group = symmetric3()
        self.assertEqual(group.order, 6)
        self.assertFalse(group.is_abelian)
        self.assertEqual(group.order_histogram(), {1: 1, 2: 3, 3: 2})

    def test_dihedral_and_quaternion(self):
        """Test that D4 and Q8 are told apart by element orders"""
        self.assertEqual(dihedral4().order_histogram(), {1: 1, 2: 5, 4: 2})
        self.assertEqual(quaternion().order_histogram(), {1: 1, 2: 1, 4: 6})

    def test_inverses(self):
        """Test that every element times its inverse is the identity"""
        group = quaternion()
        for a in range(group.order):
            self.assertEqual(group.multiply(a, group.inverse(a)), 0)

    def test_cyclic(self):
        """Test the cyclic table"""
        group = cyclic(4)
        self.assertTrue(group.is_abelian)
        self.assertEqual(group.product([1, 2, 3]), 2)
        self.assertEqual(group.element_order(2), 2)

    def test_from_abelian(self):
        """Test the table of Z/2 x Z/2 and its labels"""
        group = from_abelian(FinAbGroup((2, 2)))
        self.assertEqual(group.order, 4)
        self.assertEqual(group.labels, ['0,0', '0,1', '1,0', '1,1'])
        self.assertEqual(group.order_histogram(), {1: 1, 2: 3})


class TestTableValidation(unittest.TestCase):
    """Test that malformed tables are refused"""

    def test_not_latin(self):
        """Test a table whose second row repeats an entry"""
        with self.assertRaises(InvalidInputError):
            TableGroup([[0, 1], [1, 1]])

    def test_not_associative(self):
        """Test a latin square with identity that is not a group"""
        with self.assertRaises(InvalidInputError) as ctx:
            TableGroup(NON_ASSOCIATIVE)
        self.assertEqual(len(ctx.exception.witness), 3)

    def test_identity_first(self):
        """Test that element 0 must be the identity"""
        with self.assertRaises(InvalidInputError):
            TableGroup([[1, 0], [0, 1]])


class TestGroupLookup(unittest.TestCase):
    """Test resolving group names and loading table files"""

    def test_names(self):
        """Test built-in names, C<n> and abelian specs"""
        self.assertEqual(table_group_from_spec('S3').name, 'S3')
        self.assertEqual(table_group_from_spec('C5').order, 5)
        self.assertEqual(table_group_from_spec('Z/2 x Z/3').order, 6)
        with self.assertRaises(GroupSpecError):
            table_group_from_spec('Foo')

    def test_load_file(self):
        """Test loading a Z/3 table from disk"""
        with tempfile.NamedTemporaryFile('w', suffix='.txt', delete=False) as handle:
            handle.write('3\n0 1 2\n1 2 0\n2 0 1\n')
            path = handle.name
        try:
            group = load_table_group(path, name='C3')
            self.assertEqual(group.order, 3)
            self.assertEqual(group.inverse(1), 2)
        finally:
            os.unlink(path)

    def test_load_bad_file(self):
        """Test a file whose row count does not match the order"""
        with tempfile.NamedTemporaryFile('w', suffix='.txt', delete=False) as handle:
            handle.write('3\n0 1 2\n1 2 0\n')
            path = handle.name
        try:
            with self.assertRaises(InvalidInputError):
                load_table_group(path)
        finally:
            os.unlink(path)


if __name__ == '__main__':
    unittest.main()
