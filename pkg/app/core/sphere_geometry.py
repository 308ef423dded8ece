"""Geometric backends and finite-difference derivatives.

Two kinds of backend are supported: the embedded round sphere
``S^{2n} in R^{2n+1}`` with the Gauss-formula connection, and a 2D conformal
chart ``h(x, y)(dx^2 + dy^2)`` with explicit Christoffel symbols. Points are
plain numpy arrays in both cases.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from app.core.exceptions import DimensionError, DomainError, MetricError, TangencyError

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-12
TANGENCY_TOL = 1e-10

# 4th-order central stencil: offsets and weights (divided by 12h)
STENCIL_OFFSETS = (-2.0, -1.0, 1.0, 2.0)
STENCIL_WEIGHTS = (1.0, -8.0, 8.0, -1.0)

MatrixField = Callable[[np.ndarray], np.ndarray]
ScalarField = Callable[[np.ndarray], float]
GradientField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EmbeddedSphere:
    """The round unit sphere S^{2n} inside R^{2n+1}.

    Attributes:
        n: Complex dimension; the sphere has real dimension 2n
    """

    n: int
    kind: str = field(default="embedded-sphere", init=False)

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n + 1

    @property
    def real_dim(self) -> int:
        return 2 * self.n

    def check_point(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.ambient_dim,):
            raise DimensionError(
                f"Point of shape {p.shape} does not lie in R^{self.ambient_dim}"
            )
        deviation = abs(float(np.linalg.norm(p)) - 1.0)
        if deviation > UNIT_NORM_TOL:
            raise DomainError(f"Point is not on the unit sphere (|norm - 1| = {deviation:.3e})")
        return p

    def tangent_projection(self, p: np.ndarray) -> np.ndarray:
        return tangent_projection(p)

    def metric_factor(self, p: np.ndarray) -> float:
        return 1.0

    def derivative(self, func: MatrixField, p: np.ndarray, x: np.ndarray, step: float) -> np.ndarray:
        return fd_derivative_matrix_field(func, p, x, step)


@dataclass(frozen=True)
class ConformalChart:
    """A 2D chart carrying the metric h(x, y)(dx^2 + dy^2).

    Attributes:
        name: Preset name, reported in metadata
        h: Conformal factor evaluator
        h_grad: Exact gradient of ``h`` if known; otherwise partials come from
            4th-order finite differences
        domain: Predicate for admissible points; ``None`` accepts all of R^2
        sample_box: ``(x_min, x_max, y_min, y_max)`` for random points
    """

    name: str
    h: ScalarField
    h_grad: Optional[GradientField] = None
    domain: Optional[Callable[[np.ndarray], bool]] = None
    sample_box: Tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)
    kind: str = field(default="conformal-chart", init=False)

    ambient_dim = 2
    real_dim = 2
    n = 1

    def check_point(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (2,):
            raise DimensionError(f"Chart point must have two coordinates, got {p.shape}")
        if self.domain is not None and not self.domain(p):
            raise DomainError(f"Point ({p[0]:g}, {p[1]:g}) is outside the {self.name} chart domain")
        return p

    def tangent_projection(self, p: np.ndarray) -> np.ndarray:
        return np.eye(2)

    def metric_factor(self, p: np.ndarray) -> float:
        value = float(self.h(p))
        if value <= 0:
            raise MetricError(f"Conformal factor h = {value:g} is not positive at {p}")
        return value

    def derivative(self, func: MatrixField, p: np.ndarray, x: np.ndarray, step: float) -> np.ndarray:
        return fd_chart_derivative(func, p, x, step, domain=self.check_point)

    def h_gradient(self, p: np.ndarray, step: float = 1e-4) -> np.ndarray:
        """Gradient (h_x, h_y), exact when an evaluator was supplied."""
        p = np.asarray(p, dtype=float)
        if self.h_grad is not None:
            return np.asarray(self.h_grad(p), dtype=float)
        grad = np.zeros(2)
        for axis in range(2):
            direction = np.zeros(2)
            direction[axis] = 1.0
            grad[axis] = fd_chart_derivative(
                lambda q: np.asarray(self.h(q), dtype=float), p, direction, step
            )
        return grad


Backend = Union[EmbeddedSphere, ConformalChart]


def paper_chart() -> ConformalChart:
    """Stereographic chart with h = 1/(1 + x^2 + y^2)^2, normalised so h(0) = 1."""

    def h(p: np.ndarray) -> float:
        return 1.0 / (1.0 + p[0] ** 2 + p[1] ** 2) ** 2

    def h_grad(p: np.ndarray) -> np.ndarray:
        denom = (1.0 + p[0] ** 2 + p[1] ** 2) ** 3
        return np.array([-4.0 * p[0] / denom, -4.0 * p[1] / denom])

    return ConformalChart(name="stereo", h=h, h_grad=h_grad)


def unit_sphere_chart() -> ConformalChart:
    """Stereographic chart of the unit sphere, h = 4/(1 + x^2 + y^2)^2."""

    def h(p: np.ndarray) -> float:
        return 4.0 / (1.0 + p[0] ** 2 + p[1] ** 2) ** 2

    def h_grad(p: np.ndarray) -> np.ndarray:
        denom = (1.0 + p[0] ** 2 + p[1] ** 2) ** 3
        return np.array([-16.0 * p[0] / denom, -16.0 * p[1] / denom])

    return ConformalChart(name="unit-stereo", h=h, h_grad=h_grad)


def flat_plane(
    domain: Optional[Callable[[np.ndarray], bool]] = None,
    name: str = "flat",
    sample_box: Tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0),
) -> ConformalChart:
    return ConformalChart(
        name=name,
        h=lambda p: 1.0,
        h_grad=lambda p: np.zeros(2),
        domain=domain,
        sample_box=sample_box,
    )


def random_point(backend: Backend, rng: np.random.Generator) -> np.ndarray:
    """
    Draw a point from the backend.

    Sphere points are normalised Gaussian vectors; chart points are uniform in
    the chart's sample box, redrawn until they fall inside the domain.
    """
    if isinstance(backend, EmbeddedSphere):
        v = rng.standard_normal(backend.ambient_dim)
        return v / np.linalg.norm(v)
    x_min, x_max, y_min, y_max = backend.sample_box
    while True:
        p = np.array([rng.uniform(x_min, x_max), rng.uniform(y_min, y_max)])
        if backend.domain is None or backend.domain(p):
            return p


def random_tangent(backend: Backend, rng: np.random.Generator, p: np.ndarray) -> np.ndarray:
    """Unit tangent direction at ``p`` (Gaussian, projected, normalised)."""
    v = backend.tangent_projection(p) @ rng.standard_normal(backend.ambient_dim)
    return v / np.linalg.norm(v)


def tangent_frame(backend: Backend, p: np.ndarray) -> List[np.ndarray]:
    """Coordinate directions projected to the tangent space, in index order."""
    projection = backend.tangent_projection(p)
    return [projection[:, k].copy() for k in range(backend.ambient_dim)]


def tangent_projection(p: np.ndarray) -> np.ndarray:
    """
    Orthogonal projection onto the tangent space of the unit sphere at ``p``.

    Args:
        p: Unit vector

    Returns:
        ``I - p p^T``
    """
    p = np.asarray(p, dtype=float)
    return np.eye(p.shape[0]) - np.outer(p, p)


def check_tangent(p: np.ndarray, x: np.ndarray, tol: float = TANGENCY_TOL) -> None:
    """Raise TangencyError unless |<p, x>| <= tol * |x|."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x)
    if x.shape != p.shape:
        raise DimensionError(f"Vector shape {x.shape} does not match point {p.shape}")
    normal = abs(complex(np.dot(p, x)))
    if normal > tol * float(np.linalg.norm(x)):
        raise TangencyError(
            f"Vector is not tangent (normal component {normal:.3e})", residual=normal
        )


def geodesic(p: np.ndarray, x: np.ndarray, t: float) -> np.ndarray:
    """
    Great-circle geodesic through ``p`` with initial velocity ``x``.

    Args:
        p: Unit base point
        x: Real tangent vector at ``p``
        t: Curve parameter

    Returns:
        ``cos(t|x|) p + sin(t|x|) x/|x|``; ``p`` itself when ``x = 0``

    Raises:
        TangencyError: If ``x`` is not tangent at ``p``
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    check_tangent(p, x)
    speed = float(np.linalg.norm(x))
    if speed == 0.0:
        return p.copy()
    angle = t * speed
    return np.cos(angle) * p + np.sin(angle) * (x / speed)


def _stencil(values, step: float):
    total = 0
    for weight, value in zip(STENCIL_WEIGHTS, values):
        total = total + weight * value
    return total / (12.0 * step)


def fd_derivative_matrix_field(
    func: MatrixField, p: np.ndarray, x: np.ndarray, step: float
) -> np.ndarray:
    """
    Derivative of a field along the geodesic through ``(p, x)``.

    Works for matrix-, vector- and scalar-valued fields alike.

    Args:
        func: Field evaluated at points of the sphere
        p: Base point
        x: Tangent direction
        step: Stencil spacing in the curve parameter

    Returns:
        4th-order central difference of ``t -> func(geodesic(p, x, t))`` at 0

    Raises:
        ValueError: If ``step`` is not positive
        DomainError: If ``func`` rejects a stencil point
    """
    if step <= 0:
        raise ValueError(f"Finite-difference step must be positive, got {step}")
    values = [np.asarray(func(geodesic(p, x, s * step))) for s in STENCIL_OFFSETS]
    return _stencil(values, step)


def fd_chart_derivative(
    func: Callable[[np.ndarray], np.ndarray],
    p: np.ndarray,
    x: np.ndarray,
    step: float,
    domain: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> np.ndarray:
    """Directional derivative along the straight line ``p + t x`` in a chart."""
    if step <= 0:
        raise ValueError(f"Finite-difference step must be positive, got {step}")
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    values = []
    for s in STENCIL_OFFSETS:
        q = p + s * step * x
        if domain is not None:
            domain(q)
        values.append(np.asarray(func(q)))
    return _stencil(values, step)


def covariant_derivative_vec(
    w: Callable[[np.ndarray], np.ndarray],
    p: np.ndarray,
    x: np.ndarray,
    step: float,
) -> np.ndarray:
    """
    Levi-Civita derivative of a tangent vector field on the round sphere.

    The Gauss formula splits the ambient derivative as
    ``d_X W = nabla_X W - <X, W> n``, so the covariant derivative is the
    tangential projection of the ambient finite difference. Complex-valued
    fields are differentiated componentwise.
    """
    raw = fd_derivative_matrix_field(w, p, x, step)
    return tangent_projection(p) @ raw


@dataclass(frozen=True)
class ChristoffelSymbols:
    """Christoffel symbols of a conformal metric at one chart point.

    All eight symbols follow from ``a = h_x/2h`` and ``b = h_y/2h``.
    ``gamma[l, j, k]`` is the symbol with upper index ``l``.
    """

    a: float
    b: float

    @property
    def gamma(self) -> np.ndarray:
        a, b = self.a, self.b
        g = np.zeros((2, 2, 2))
        # upper x
        g[0, 0, 0] = a
        g[0, 1, 1] = -a
        g[0, 0, 1] = g[0, 1, 0] = b
        # upper y
        g[1, 1, 1] = b
        g[1, 0, 0] = -b
        g[1, 0, 1] = g[1, 1, 0] = a
        return g

    def as_dict(self) -> Dict[str, float]:
        g = self.gamma
        names = "xy"
        return {
            f"{names[l]}_{names[j]}{names[k]}": float(g[l, j, k])
            for l in range(2)
            for j in range(2)
            for k in range(2)
        }

    def connection_matrix(self, x: np.ndarray) -> np.ndarray:
        """``(Gamma_X)^l_k = sum_j Gamma^l_{jk} X^j``."""
        return np.einsum("ljk,j->lk", self.gamma, np.asarray(x, dtype=float))


def christoffel_conformal(
    chart: ConformalChart, p: np.ndarray, step: float = 1e-4
) -> ChristoffelSymbols:
    """
    Christoffel symbols of ``h(dx^2 + dy^2)`` at a chart point.

    Raises:
        MetricError: If ``h(p) <= 0``
    """
    p = chart.check_point(p)
    h = chart.metric_factor(p)
    h_x, h_y = chart.h_gradient(p, step)
    return ChristoffelSymbols(a=float(h_x / (2.0 * h)), b=float(h_y / (2.0 * h)))


def chart_covariant_derivative(
    func: MatrixField,
    chart: ConformalChart,
    p: np.ndarray,
    x: np.ndarray,
    step: float,
) -> np.ndarray:
    """
    Levi-Civita derivative of an endomorphism field in a conformal chart.

    ``nabla_X J = d_X J + Gamma_X J - J Gamma_X``

    Raises:
        DomainError: If a stencil point leaves the chart domain
    """
    p = chart.check_point(p)
    x = np.asarray(x, dtype=float)
    value = np.asarray(func(p))
    coordinate = chart.derivative(func, p, x, step)
    gamma_x = christoffel_conformal(chart, p, step).connection_matrix(x)
    return coordinate + gamma_x @ value - value @ gamma_x


def chart_covariant_derivative_vec(
    w: Callable[[np.ndarray], np.ndarray],
    chart: ConformalChart,
    p: np.ndarray,
    x: np.ndarray,
    step: float,
) -> np.ndarray:
    """Covariant derivative of a vector field in a chart: ``d_X W + Gamma_X W``."""
    p = chart.check_point(p)
    coordinate = chart.derivative(w, p, x, step)
    gamma_x = christoffel_conformal(chart, p, step).connection_matrix(x)
    return coordinate + gamma_x @ np.asarray(w(p))
