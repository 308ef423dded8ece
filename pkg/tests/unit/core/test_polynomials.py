"""Unit tests for polynomials.py."""

import numpy as np
import pytest

from app.core.polynomials import Polynomial2D


class TestPolynomial2D:
    """Test cases for Polynomial2D."""

    def test_evaluate(self):
        poly = Polynomial2D.from_monomials([(0, 0, 1.0), (2, 0, 3.0), (1, 1, -2.0)])
        assert poly(np.array([2.0, 0.5])) == pytest.approx(1.0 + 12.0 - 2.0)

    def test_repeated_monomials_add(self):
        poly = Polynomial2D.from_monomials([(1, 0, 1.0), (1, 0, 2.5)])
        assert poly.monomials() == [(1, 0, 3.5)]

    def test_empty_is_zero(self):
        assert Polynomial2D.from_monomials([])(np.array([3.0, 4.0])) == 0.0

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            Polynomial2D.from_monomials([(-1, 0, 1.0)])

    def test_partials(self):
        """d/dx (x^2 y + y^3) = 2xy and d/dy = x^2 + 3y^2."""
        poly = Polynomial2D.from_monomials([(2, 1, 1.0), (0, 3, 1.0)])
        point = np.array([1.5, -2.0])
        assert poly.partial(0)(point) == pytest.approx(-6.0)
        assert poly.partial(1)(point) == pytest.approx(2.25 + 12.0)
        assert np.allclose(poly.gradient(point), [-6.0, 14.25])

    def test_partial_of_constant_direction(self):
        poly = Polynomial2D.from_monomials([(3, 0, 2.0)])
        assert poly.partial(1)(np.array([1.0, 1.0])) == 0.0

    def test_invalid_axis(self):
        with pytest.raises(ValueError):
            Polynomial2D.constant(1.0).partial(2)

    def test_monomials_skip_zeros(self):
        poly = Polynomial2D(np.array([[1.0, 0.0], [0.0, -4.0]]))
        assert poly.monomials() == [(0, 0, 1.0), (1, 1, -4.0)]
