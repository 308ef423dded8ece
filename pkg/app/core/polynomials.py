"""Bivariate polynomials with exact differentiation."""

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from app.core.exceptions import DimensionError


@dataclass(frozen=True)
class Polynomial2D:
    """Polynomial ``sum c[i, j] x^i y^j`` in two variables.

    Attributes:
        coeffs: Coefficient matrix indexed by (x degree, y degree)
    """

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if coeffs.ndim != 2:
            raise DimensionError(f"Coefficient table must be 2D, got {coeffs.ndim}D")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_monomials(cls, monomials: Iterable[Tuple[int, int, float]]) -> "Polynomial2D":
        """Build from ``(x_deg, y_deg, coefficient)`` triples; repeats add up."""
        terms = list(monomials)
        if not terms:
            return cls.constant(0.0)
        max_x = max(t[0] for t in terms)
        max_y = max(t[1] for t in terms)
        coeffs = np.zeros((max_x + 1, max_y + 1))
        for x_deg, y_deg, value in terms:
            if x_deg < 0 or y_deg < 0:
                raise ValueError(f"Negative degree in monomial ({x_deg}, {y_deg})")
            coeffs[x_deg, y_deg] += value
        return cls(coeffs)

    @classmethod
    def constant(cls, value: float) -> "Polynomial2D":
        return cls(np.array([[value]]))

    def __call__(self, point: np.ndarray) -> float:
        return float(npoly.polyval2d(point[0], point[1], self.coeffs))

    def partial(self, axis: int) -> "Polynomial2D":
        """Exact partial derivative: axis 0 is x, axis 1 is y."""
        if axis not in (0, 1):
            raise ValueError(f"Axis must be 0 or 1, got {axis}")
        if self.coeffs.shape[axis] == 1:
            return Polynomial2D.constant(0.0)
        return Polynomial2D(npoly.polyder(self.coeffs, axis=axis))

    def gradient(self, point: np.ndarray) -> np.ndarray:
        return np.array([self.partial(0)(point), self.partial(1)(point)])

    def monomials(self):
        """Non-zero ``(x_deg, y_deg, coefficient)`` triples in index order."""
        rows, cols = np.nonzero(self.coeffs)
        return [(int(i), int(j), float(self.coeffs[i, j])) for i, j in zip(rows, cols)]
