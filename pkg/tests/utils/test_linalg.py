"""
Tests for exact linear algebra.
"""
import unittest

from sympy.polys.domains import QQ

from src.core.exceptions import NotInvertibleError
from src.core.scalars import make_scalar, parse_scalar
from src.utils import linalg

def _vec(*values):
    return [parse_scalar(v) for v in values]

class TestLinalg(unittest.TestCase):
    """Test rank, kernels and solves over QQ_I."""

    def setUp(self):
        """Set up test fixtures."""
        # Two equal columns spanning e1
        self.columns = [_vec(1, 0), _vec(1, 0)]

    def test_rank(self):
        """Test rank computation."""
        self.assertEqual(linalg.rank(self.columns, 2), 1)
        self.assertEqual(linalg.rank([], 2), 0)
        self.assertEqual(linalg.rank([_vec(1, 0), _vec(0, "i")], 2), 2)

    def test_nullspace(self):
        """Test kernel basis per free column."""
        self.assertEqual(linalg.nullspace(self.columns, 2), [_vec(-1, 1)])

    def test_solve_canonical(self):
        """Test that free unknowns are set to zero."""
        self.assertEqual(linalg.solve(self.columns, 2, _vec(2, 0)), _vec(2, 0))
        self.assertEqual(linalg.solve(self.columns, 2, _vec(2, 0), column_order=[1, 0]), _vec(0, 2))

    def test_solve_inconsistent(self):
        """Test that inconsistent systems return None."""
        self.assertIsNone(linalg.solve(self.columns, 2, _vec(0, 1)))

    def test_solve_bad_order(self):
        """Test column order validation."""
        with self.assertRaises(ValueError):
            linalg.solve(self.columns, 2, _vec(1, 0), column_order=[0, 0])

    def test_contains(self):
        """Test span inclusion with the first offending vector."""
        self.assertEqual(linalg.contains(self.columns, [_vec(3, 0)], 2), (True, None))
        self.assertEqual(linalg.contains(self.columns, [_vec(3, 0), _vec(0, 1)], 2), (False, 1))

    def test_invert(self):
        """Test exact inversion."""
        inverse = linalg.invert([_vec(2, 0), _vec(0, 4)])
        self.assertEqual(inverse, [[make_scalar(QQ(1, 2)), make_scalar(0)], [make_scalar(0), make_scalar(QQ(1, 4))]])
        with self.assertRaises(NotInvertibleError):
            linalg.invert([_vec(1, 2), _vec(2, 4)], "test matrix")

    def test_apply(self):
        """Test matrix-vector products."""
        self.assertEqual(linalg.apply(self.columns, 2, _vec(1, 2)), _vec(3, 0))

if __name__ == '__main__':
    unittest.main()
