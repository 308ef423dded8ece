"""Almost complex structure fields and their pointwise eigenstructure.

Sphere fields are ambient ``(2n+1) x (2n+1)`` real matrices that annihilate
the normal direction and square to ``-Pi_p``; chart fields are ``2 x 2``
matrices squaring to ``-I``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from app.core.complex_linalg import gram_schmidt_hermitian, hermitian_dot
from app.core.config import settings
from app.core.exceptions import (
    ConfigurationError,
    DegeneracyError,
    DomainError,
    GeometryError,
)
from app.core.polynomials import Polynomial2D
from app.core.sphere_geometry import (
    Backend,
    ConformalChart,
    EmbeddedSphere,
    flat_plane,
    geodesic,
    paper_chart,
    random_point,
    random_tangent,
    tangent_frame,
    tangent_projection,
)

logger = logging.getLogger(__name__)

# Cayley-Dickson multiplication: e_a e_b = e_c for each cyclic (a, b, c)
OCTONION_TRIPLES = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
)

CONTINUITY_STEP = 1e-6


def _cross7_structure() -> np.ndarray:
    eps = np.zeros((7, 7, 7))
    for a, b, c in OCTONION_TRIPLES:
        a, b, c = a - 1, b - 1, c - 1
        for i, j, k in ((a, b, c), (b, c, a), (c, a, b)):
            eps[i, j, k] = 1.0
            eps[j, i, k] = -1.0
    return eps


CROSS7 = _cross7_structure()


def cross7(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Seven-dimensional cross product (imaginary part of the octonion product)."""
    return np.einsum("abc,a,b->c", CROSS7, u, v)


@dataclass(frozen=True)
class AcsField:
    """An almost complex structure as an evaluator over a backend.

    Attributes:
        name: Registry name
        backend: Embedded sphere or conformal chart
        evaluate: Point to real matrix ``J_p``
        metadata: Free-form parameters, copied into reports
    """

    name: str
    backend: Backend
    evaluate: Callable[[np.ndarray], np.ndarray]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_chart(self) -> bool:
        return isinstance(self.backend, ConformalChart)

    def __call__(self, p: np.ndarray) -> np.ndarray:
        p = self.backend.check_point(p)
        return np.asarray(self.evaluate(p), dtype=float)

    def projection(self, p: np.ndarray) -> np.ndarray:
        return self.backend.tangent_projection(p)


@dataclass(frozen=True)
class T01Basis:
    """Orthonormal basis of the -i eigenspace of ``J_p``.

    ``w[k] = z[k] + i J z[k]``; orthonormality is for the metric
    ``metric_factor * <u, conj v>``.
    """

    w: List[np.ndarray]
    z: List[np.ndarray]
    metric_factor: float = 1.0

    def gram(self) -> np.ndarray:
        size = len(self.w)
        return np.array(
            [
                [self.metric_factor * hermitian_dot(self.w[j], self.w[k]) for k in range(size)]
                for j in range(size)
            ]
        )

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto T^{0,1} in the field's metric."""
        w = np.column_stack(self.w)
        return self.metric_factor * (w @ np.conj(w).T)


@dataclass
class FieldValidation:
    """Outcome of sampling a field's algebraic contract.

    Attributes:
        name: Field name
        samples: Number of sampled points
        tolerance: Pass threshold for the algebraic residuals
        residuals: Maximum ``square`` and ``tangency`` residuals
        lipschitz: Largest difference quotient of J along short curves
        passed: Whether every algebraic residual is within tolerance
    """

    name: str
    samples: int
    tolerance: float
    residuals: Dict[str, float]
    lipschitz: float
    passed: bool


def octonionic_j(p: np.ndarray) -> np.ndarray:
    """
    Matrix of ``v -> p x v`` on R^7.

    Args:
        p: Unit vector in R^7

    Returns:
        7x7 real matrix; restricted to ``T_p S^6`` it is an isometry squaring
        to ``-Id``
    """
    return np.einsum("abc,a->cb", CROSS7, np.asarray(p, dtype=float))


def standard_s2_j(p: np.ndarray) -> np.ndarray:
    """Matrix of ``v -> p x v`` on R^3, the round Kaehler structure of S^2."""
    x, y, z = np.asarray(p, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def example24_j(p: np.ndarray) -> np.ndarray:
    """
    Planar structure ``[[0, x], [-1/x, 0]]``.

    Raises:
        DomainError: If ``x = 0``
    """
    x = float(p[0])
    if x == 0.0:
        raise DomainError("Planar structure is undefined on the line x = 0")
    return np.array([[0.0, x], [-1.0 / x, 0.0]])


def stereo_fg_j(
    f: Callable[[np.ndarray], float], g: Callable[[np.ndarray], float]
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Chart family ``[[f, -(1 + f^2)/g], [g, -f]]``.

    Returns:
        Evaluator raising DomainError wherever ``g`` vanishes
    """

    def evaluate(p: np.ndarray) -> np.ndarray:
        f_val, g_val = float(f(p)), float(g(p))
        if g_val == 0.0:
            raise DomainError(f"g vanishes at ({p[0]:g}, {p[1]:g})")
        return np.array([[f_val, -(1.0 + f_val**2) / g_val], [g_val, -f_val]])

    return evaluate


def conjugated_j(
    base: Callable[[np.ndarray], np.ndarray], epsilon: float, seed: int, dim: int = 7
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Non-orthogonal structure ``S J_0 S^{-1}``.

    ``S = Pi (I + epsilon B) Pi + n n^T`` with ``B`` a seeded matrix of spectral
    norm one, so ``S`` preserves the tangent space and fixes the normal.
    """
    if not 0.0 < epsilon <= 0.3:
        raise ValueError(f"Conjugation strength must lie in (0, 0.3], got {epsilon}")
    rng = np.random.Generator(np.random.PCG64(seed))
    b = rng.standard_normal((dim, dim))
    b /= np.linalg.norm(b, 2)

    def evaluate(p: np.ndarray) -> np.ndarray:
        projection = tangent_projection(p)
        s = projection @ (np.eye(dim) + epsilon * b) @ projection + np.outer(p, p)
        return s @ base(p) @ np.linalg.inv(s)

    return evaluate


def p_minus(j: np.ndarray, projection: Optional[np.ndarray] = None) -> np.ndarray:
    """
    ``P^- = (Pi + iJ)/2``, the projector onto T^{0,1}.

    Args:
        j: Structure matrix at a point
        projection: Tangent projection; defaults to ``-J^2``
    """
    j = np.asarray(j, dtype=float)
    tangent = -j @ j if projection is None else projection
    return 0.5 * (tangent + 1j * j)


def p_plus(j: np.ndarray, projection: Optional[np.ndarray] = None) -> np.ndarray:
    """``P^+ = (Pi - iJ)/2``, the projector onto T^{1,0}."""
    j = np.asarray(j, dtype=float)
    tangent = -j @ j if projection is None else projection
    return 0.5 * (tangent - 1j * j)


def is_orthogonal(acs: AcsField, p: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether ``J_p`` is an isometry of the tangent space."""
    j = acs(p)
    residual = float(np.max(np.abs(j.T @ j - acs.projection(p))))
    return residual <= tol


def t01_basis(acs: AcsField, p: np.ndarray) -> T01Basis:
    """
    Orthonormal basis of T^{0,1} at ``p``.

    P^- is applied to the projected coordinate directions in index order and
    the images are orthonormalised; the first ``n`` survivors are kept.

    Raises:
        DegeneracyError: If fewer than ``n`` independent vectors survive
    """
    j = acs(p)
    projection = acs.projection(p)
    lower = p_minus(j, projection)
    seeds = [lower @ e for e in tangent_frame(acs.backend, p)]
    max_norm = max(float(np.linalg.norm(s)) for s in seeds)
    basis = gram_schmidt_hermitian(seeds, tol=settings.FRAME_SEED_TOL * max_norm)
    n = acs.backend.n
    if len(basis) < n:
        raise DegeneracyError(
            f"T01 basis of {acs.name} has rank {len(basis)}, expected {n}"
        )
    h = acs.backend.metric_factor(p)
    w = [v / np.sqrt(h) for v in basis[:n]]
    return T01Basis(w=w, z=[np.real(v).copy() for v in w], metric_factor=h)


def validate(acs: AcsField, samples: int, seed: int, tol: float) -> FieldValidation:
    """
    Sample the algebraic contract of a field.

    Residuals are ``J^2 + Pi`` and the tangency defects ``J Pi - J`` and
    ``Pi J - J``; the Lipschitz estimate records continuity along short
    curves and only has to be finite.

    Args:
        acs: Field to check
        samples: Number of seeded points (at least one)
        seed: Generator seed
        tol: Pass threshold

    Returns:
        FieldValidation with per-residual maxima
    """
    if samples < 1:
        raise ValueError(f"At least one sample is required, got {samples}")
    rng = np.random.Generator(np.random.PCG64(seed))
    square = tangency = lipschitz = 0.0
    for _ in range(samples):
        p = random_point(acs.backend, rng)
        x = random_tangent(acs.backend, rng, p)
        j = acs(p)
        projection = acs.projection(p)
        square = max(square, float(np.max(np.abs(j @ j + projection))))
        tangency = max(
            tangency,
            float(np.max(np.abs(j @ projection - j))),
            float(np.max(np.abs(projection @ j - j))),
        )
        if isinstance(acs.backend, EmbeddedSphere):
            q = geodesic(p, x, CONTINUITY_STEP)
        else:
            q = p + CONTINUITY_STEP * x
        try:
            quotient = float(np.linalg.norm(acs(q) - j)) / CONTINUITY_STEP
        except GeometryError:
            quotient = float("inf")
        lipschitz = max(lipschitz, quotient)

    residuals = {"square": square, "tangency": tangency}
    passed = all(r <= tol for r in residuals.values()) and np.isfinite(lipschitz)
    logger.info(
        "Validated %s on %d samples: square=%.3e tangency=%.3e lipschitz=%.3e",
        acs.name,
        samples,
        square,
        tangency,
        lipschitz,
    )
    return FieldValidation(
        name=acs.name,
        samples=samples,
        tolerance=tol,
        residuals=residuals,
        lipschitz=lipschitz,
        passed=bool(passed),
    )


def example24_chart() -> ConformalChart:
    return flat_plane(
        domain=lambda p: p[0] != 0.0,
        name="example-2-4",
        sample_box=(0.1, 3.0, -1.0, 1.0),
    )


FIELD_NAMES = ("octonionic-s6", "standard-s2", "example-2-4", "stereo-fg", "conjugated-s6")


def build_field(
    name: str,
    f: Optional[Polynomial2D] = None,
    g: Optional[Polynomial2D] = None,
    epsilon: float = 0.2,
    conjugation_seed: int = 7,
) -> AcsField:
    """
    Look up a built-in field by registry name.

    Args:
        name: One of FIELD_NAMES
        f: Polynomial ``f`` for ``stereo-fg`` (default 0)
        g: Polynomial ``g`` for ``stereo-fg`` (default 1)
        epsilon: Conjugation strength for ``conjugated-s6``
        conjugation_seed: Seed of the conjugating matrix for ``conjugated-s6``

    Raises:
        ConfigurationError: If the name is unknown
    """
    if name == "octonionic-s6":
        return AcsField(name, EmbeddedSphere(3), octonionic_j, {"orthogonal": True})
    if name == "standard-s2":
        return AcsField(name, EmbeddedSphere(1), standard_s2_j, {"orthogonal": True})
    if name == "example-2-4":
        return AcsField(name, example24_chart(), example24_j, {"orthogonal": False})
    if name == "stereo-fg":
        f = f if f is not None else Polynomial2D.constant(0.0)
        g = g if g is not None else Polynomial2D.constant(1.0)
        return AcsField(
            name,
            paper_chart(),
            stereo_fg_j(f, g),
            {"f": f.monomials(), "g": g.monomials()},
        )
    if name == "conjugated-s6":
        return AcsField(
            name,
            EmbeddedSphere(3),
            conjugated_j(octonionic_j, epsilon, conjugation_seed),
            {"orthogonal": False, "epsilon": epsilon, "conjugation_seed": conjugation_seed},
        )
    raise ConfigurationError(
        f"Unknown field '{name}'; expected one of {', '.join(FIELD_NAMES)}"
    )
