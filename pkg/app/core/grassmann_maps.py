"""Projector manifolds and the canonical maps of a field into them.

The tautological form ``omega = (1/2i) Tr(P dP^2)`` is evaluated on tangent
matrices ``S, T`` at ``P`` as ``(1/2i) Tr(P (S T - T S))`` for idempotents in
general and self-adjoint projectors alike.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from app.core.acs_fields import AcsField, build_field, p_minus, t01_basis
from app.core.complex_linalg import adjoint, block_split, gram_schmidt_hermitian, random_unitary
from app.core.exceptions import (
    DegeneracyError,
    DomainError,
    PreconditionError,
    TangencyError,
)
from app.core.polynomials import Polynomial2D
from app.core.sphere_geometry import EmbeddedSphere
from app.core.tensor_calculus import (
    commutator_trace_t01,
    default_step,
    eta_form,
    jrm_split,
    tangent_algebra_m,
)

logger = logging.getLogger(__name__)

IDEMPOTENT_TOL = 1e-9
RANK_TOL = 1e-6
SELF_ADJOINT_TOL = 1e-9
TANGENT_TOL = 1e-6


@dataclass(frozen=True)
class Projector:
    """An idempotent complex matrix with its residuals attached.

    Attributes:
        mat: The matrix
        rank: Declared rank
        idem_residual: ``|P^2 - P|``
        selfadj_residual: ``|P* - P|``
    """

    mat: np.ndarray
    rank: int
    idem_residual: float
    selfadj_residual: float

    @classmethod
    def from_matrix(cls, mat: np.ndarray, rank: Optional[int] = None) -> "Projector":
        """
        Wrap a matrix, checking idempotency and rank.

        Raises:
            DegeneracyError: If ``mat`` is not idempotent or its trace does not
                match the declared rank
        """
        mat = np.asarray(mat, dtype=complex)
        idem = float(np.linalg.norm(mat @ mat - mat))
        if idem > IDEMPOTENT_TOL * max(1.0, float(np.linalg.norm(mat))):
            raise DegeneracyError(f"Matrix is not idempotent (residual {idem:.3e})")
        trace = complex(np.trace(mat)).real
        declared = int(round(trace)) if rank is None else rank
        if abs(trace - declared) > RANK_TOL:
            raise DegeneracyError(f"Projector trace {trace:.6f} does not match rank {declared}")
        return cls(
            mat=mat,
            rank=declared,
            idem_residual=idem,
            selfadj_residual=float(np.linalg.norm(adjoint(mat) - mat)),
        )

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    @property
    def complement(self) -> np.ndarray:
        return np.eye(self.size, dtype=complex) - self.mat


@dataclass(frozen=True)
class GrassTangent:
    """A tangent matrix at a projector, with its off-diagonal blocks."""

    base: Projector
    mat: np.ndarray

    @property
    def blocks(self) -> Tuple[np.ndarray, np.ndarray]:
        return block_split(self.base.mat, self.mat)

    @property
    def tangency_residual(self) -> float:
        p, t = self.base.mat, self.mat
        return max(
            float(np.linalg.norm(t @ p - self.base.complement @ t)),
            float(np.linalg.norm(p @ t - t @ self.base.complement)),
        )


def make_tangent(base: Projector, mat: np.ndarray, tol: float = TANGENT_TOL) -> GrassTangent:
    """
    Attach ``mat`` to ``base`` as a tangent vector.

    Raises:
        TangencyError: If ``dP P = (I - P) dP`` fails beyond ``tol`` (relative
            to the size of ``mat``)
    """
    tangent = GrassTangent(base=base, mat=np.asarray(mat, dtype=complex))
    residual = tangent.tangency_residual
    if residual > tol * max(1.0, float(np.linalg.norm(tangent.mat))):
        raise TangencyError(
            f"Matrix is not tangent to the projector manifold (residual {residual:.3e})",
            residual=residual,
        )
    return tangent


def omega(p: Projector, s: GrassTangent, t: GrassTangent) -> complex:
    """``(1/2i) Tr(P (S T - T S))``."""
    commutator = s.mat @ t.mat - t.mat @ s.mat
    return complex(np.trace(p.mat @ commutator) / 2j)


def omega_blocks(s: GrassTangent, t: GrassTangent) -> float:
    """``Im Tr(B_S B_T^*)``, equal to omega on self-adjoint projectors."""
    b_s, _ = s.blocks
    b_t, _ = t.blocks
    return float(np.trace(b_s @ adjoint(b_t)).imag)


def grassmann_k(p: Projector, t: GrassTangent, tol: float = SELF_ADJOINT_TOL) -> GrassTangent:
    """
    Complex structure of the Grassmannian: ``K(T) = i (T P - P T)``.

    Raises:
        PreconditionError: If ``p`` is not self-adjoint
    """
    if p.selfadj_residual > tol:
        raise PreconditionError(
            f"K is defined on self-adjoint projectors (residual {p.selfadj_residual:.3e})"
        )
    return GrassTangent(base=p, mat=1j * (t.mat @ p.mat - p.mat @ t.mat))


def _adapted_basis(p: Projector) -> np.ndarray:
    """Columns: orthonormal basis of Im P followed by one of Ker P."""
    image = gram_schmidt_hermitian(list(p.mat.T))
    kernel = gram_schmidt_hermitian(list(p.complement.T))
    if len(image) != p.rank or len(image) + len(kernel) != p.size:
        raise DegeneracyError(
            f"Could not split C^{p.size} into image ({len(image)}) and kernel ({len(kernel)})"
        )
    return np.column_stack(image + kernel)


def k_block_formula(p: Projector, t: GrassTangent) -> np.ndarray:
    """``[[0, A], [A*, 0]] -> [[0, -iA], [iA*, 0]]`` in an adapted unitary basis."""
    s = _adapted_basis(p)
    k = p.rank
    local = adjoint(s) @ t.mat @ s
    image = np.zeros_like(local)
    image[:k, k:] = -1j * local[:k, k:]
    image[k:, :k] = 1j * local[k:, :k]
    return s @ image @ adjoint(s)


def taming_structure(p: Projector, t: GrassTangent) -> GrassTangent:
    """
    Almost complex structure on idempotents, ``[[0, b], [c, 0]] -> [[0, -ic*], [ib*, 0]]``.

    Blocks are read in orthonormal bases of Im P and Ker P (the two need not
    be mutually orthogonal).
    """
    s = _adapted_basis(p)
    k = p.rank
    local = np.linalg.solve(s, t.mat @ s)
    b, c = local[:k, k:], local[k:, :k]
    image = np.zeros_like(local)
    image[:k, k:] = -1j * adjoint(c)
    image[k:, :k] = 1j * adjoint(b)
    return GrassTangent(base=p, mat=s @ image @ np.linalg.inv(s))


def taming_check(p: Projector, t: GrassTangent) -> float:
    """``Re omega(T, J_I T)``; positive for every non-zero tangent."""
    return omega(p, t, taming_structure(p, t)).real


def taming_value(p: Projector, t: GrassTangent) -> float:
    """``(1/2) Tr(b b* + c* c)`` from the local blocks of ``T``."""
    s = _adapted_basis(p)
    k = p.rank
    local = np.linalg.solve(s, t.mat @ s)
    b, c = local[:k, k:], local[k:, :k]
    return 0.5 * float(np.trace(b @ adjoint(b) + adjoint(c) @ c).real)


def random_idempotent(rng: np.random.Generator, size: int, rank: int) -> Projector:
    """``S diag(I_k, 0) S^{-1}`` for a complex Gaussian ``S``."""
    s = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    diag = np.diag([1.0] * rank + [0.0] * (size - rank)).astype(complex)
    return Projector.from_matrix(s @ diag @ np.linalg.inv(s), rank)


def random_tangent_at(rng: np.random.Generator, p: Projector) -> GrassTangent:
    """``A P - P A`` for a complex Gaussian ``A``."""
    a = rng.standard_normal((p.size, p.size)) + 1j * rng.standard_normal((p.size, p.size))
    return GrassTangent(base=p, mat=a @ p.mat - p.mat @ a)


def random_self_adjoint_projector(rng: np.random.Generator, size: int, rank: int) -> Projector:
    """``U diag(I_k, 0) U^*`` for a random unitary ``U``."""
    u = random_unitary(rng, size)
    diag = np.diag([1.0] * rank + [0.0] * (size - rank))
    return Projector.from_matrix(u @ diag @ adjoint(u), rank)


def random_self_adjoint_tangent(rng: np.random.Generator, p: Projector) -> GrassTangent:
    """
    ``i (A P - P A)`` for a Hermitian Gaussian ``A``.

    The result is self-adjoint, so it stays tangent to the Grassmannian of
    self-adjoint projectors.
    """
    a = rng.standard_normal((p.size, p.size)) + 1j * rng.standard_normal((p.size, p.size))
    a = a + adjoint(a)
    return GrassTangent(base=p, mat=1j * (a @ p.mat - p.mat @ a))


def _normal_term(acs: AcsField, p: np.ndarray) -> np.ndarray:
    if isinstance(acs.backend, EmbeddedSphere):
        point = np.asarray(p, dtype=float)
        return np.outer(point, point)
    return np.zeros((2, 2))


def canonical_p_matrix(acs: AcsField, p: np.ndarray) -> np.ndarray:
    return p_minus(acs(p), acs.projection(p)) + _normal_term(acs, p)


def perp_p_matrix(acs: AcsField, p: np.ndarray) -> np.ndarray:
    return t01_basis(acs, p).projector() + _normal_term(acs, p)


def _rank(acs: AcsField) -> int:
    return acs.backend.n + (1 if isinstance(acs.backend, EmbeddedSphere) else 0)


def canonical_p(acs: AcsField, p: np.ndarray) -> Projector:
    """``P = (Pi + iJ)/2 + n n^T``: image T^{0,1} plus the normal, kernel T^{1,0}."""
    return Projector.from_matrix(canonical_p_matrix(acs, p), _rank(acs))


def perp_p(acs: AcsField, p: np.ndarray) -> Projector:
    """
    Orthogonal projection onto T^{0,1} plus the normal line.

    Raises:
        DegeneracyError: Propagated from the T^{0,1} basis
    """
    return Projector.from_matrix(perp_p_matrix(acs, p), _rank(acs))


MAPS = {"canonical": (canonical_p, canonical_p_matrix), "perp": (perp_p, perp_p_matrix)}


def d_map(
    acs: AcsField, p: np.ndarray, x: np.ndarray, which: str = "canonical", step: Optional[float] = None
) -> GrassTangent:
    """
    Finite-difference differential of the canonical or orthogonal map.

    Args:
        acs: Field
        p: Base point
        x: Tangent vector
        which: ``"canonical"`` or ``"perp"``
        step: Finite-difference step

    Returns:
        GrassTangent at the map's value; tangency is not enforced
    """
    if which not in MAPS:
        raise ValueError(f"Unknown map '{which}', expected one of {sorted(MAPS)}")
    build, matrix = MAPS[which]
    step = default_step(acs) if step is None else step
    derivative = acs.backend.derivative(lambda q: matrix(acs, q), p, np.asarray(x, dtype=float), step)
    return GrassTangent(base=build(acs, p), mat=derivative)


def _require_sphere(acs: AcsField, operation: str) -> None:
    if not isinstance(acs.backend, EmbeddedSphere):
        raise PreconditionError(f"{operation} requires an embedded sphere, got {acs.name}")


def pullback_reomega(
    acs: AcsField,
    p: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    mode: str = "closed",
    step: Optional[float] = None,
) -> float:
    """
    Pullback of ``Re omega`` along the canonical map.

    ``closed``: ``-(1/8) Im Tr([nabla_X J, nabla_Y J] | T01) - <X, JY>/4 + <Y, JX>/4``.
    ``fd``: ``Re omega(d_X P, d_Y P)`` from finite differences of the map.
    """
    _require_sphere(acs, "pullback_reomega")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if mode == "fd":
        d_x = d_map(acs, p, x, "canonical", step)
        d_y = d_map(acs, p, y, "canonical", step)
        return omega(d_x.base, d_x, d_y).real
    if mode == "closed":
        j = acs(p)
        trace = commutator_trace_t01(acs, p, x, y, step)
        return float(-trace.imag / 8.0 - np.dot(x, j @ y) / 4.0 + np.dot(y, j @ x) / 4.0)
    raise ValueError(f"Unknown mode '{mode}', expected 'fd' or 'closed'")


def pullback_kahler(
    acs: AcsField,
    p: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    mode: str = "closed",
    step: Optional[float] = None,
) -> float:
    """
    Pullback of the Kaehler form along the orthogonal map.

    ``closed``: ``eta(X, Y) + nu(X, Y)`` (available on charts too).
    ``fd``: ``Im Tr(B_X B_Y^*)`` from the blocks of ``d P_perp``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if mode == "fd":
        _require_sphere(acs, "pullback_kahler(fd)")
        return omega_blocks(d_map(acs, p, x, "perp", step), d_map(acs, p, y, "perp", step))
    if mode == "closed":
        split = jrm_split(acs, p)
        return eta_form(acs, p, x, y, step, split=split) + split.nu(x, y)
    raise ValueError(f"Unknown mode '{mode}', expected 'fd' or 'closed'")


def dbar_perp(
    acs: AcsField, p: np.ndarray, x: np.ndarray, v: np.ndarray, step: Optional[float] = None
) -> np.ndarray:
    """``(d_{JX} P_perp - K(d_X P_perp)) v``."""
    _require_sphere(acs, "dbar_perp")
    x = np.asarray(x, dtype=float)
    d_x = d_map(acs, p, x, "perp", step)
    d_jx = d_map(acs, p, acs(p) @ x, "perp", step)
    return (d_jx.mat - grassmann_k(d_x.base, d_x).mat) @ np.asarray(v, dtype=complex)


def dbar_target(
    acs: AcsField, p: np.ndarray, x: np.ndarray, y: np.ndarray, step: Optional[float] = None
) -> np.ndarray:
    """Closed form of ``dbar_perp`` on ``Y + iJY``: ``(I - P_perp)(J m(X, Y))``."""
    projector = perp_p(acs, p)
    return projector.complement @ (acs(p) @ tangent_algebra_m(acs, p, x, y, step))


@dataclass(frozen=True)
class CriterionRecord:
    """Pointwise degeneracy test of the orthogonal map for a chart (f, g) field.

    Attributes:
        det_df: ``f_x g_y - g_x f_y`` at the origin
        threshold: ``1 + f^2 + g^2`` at the origin
        pullback_value: ``c^4 g^2 det_df + c^2 g^2`` with ``c^2 = 1/threshold``
        chart_pullback_value: ``eta + nu`` at ``(d/dx, J d/dx)`` from the chart pipeline
        degenerate: Whether ``det_df = -threshold`` within tolerance
    """

    det_df: float
    threshold: float
    pullback_value: float
    chart_pullback_value: float
    degenerate: bool

    def as_dict(self) -> Dict[str, float]:
        return {
            "det_df": self.det_df,
            "threshold": self.threshold,
            "pullback_value": self.pullback_value,
            "chart_pullback_value": self.chart_pullback_value,
            "degenerate": self.degenerate,
        }


def s2_criterion(
    f: Polynomial2D, g: Polynomial2D, tol: float = 1e-8, step: Optional[float] = None
) -> CriterionRecord:
    """
    Degeneracy of the orthogonal map at the chart origin.

    The pullback vanishes on ``(d/dx, J d/dx)`` exactly when
    ``f_x g_y - g_x f_y = -(1 + f^2 + g^2)``; derivatives are taken from the
    polynomial coefficients.

    Raises:
        DomainError: If ``g(0, 0) = 0``
    """
    origin = np.zeros(2)
    f0, g0 = f(origin), g(origin)
    if g0 == 0.0:
        raise DomainError("g must not vanish at the chart origin")
    f_x, f_y = f.gradient(origin)
    g_x, g_y = g.gradient(origin)
    det_df = float(f_x * g_y - g_x * f_y)
    threshold = 1.0 + f0**2 + g0**2
    c2 = 1.0 / threshold
    pullback_value = c2**2 * g0**2 * det_df + c2 * g0**2

    acs = build_field("stereo-fg", f=f, g=g)
    x = np.array([1.0, 0.0])
    chart_value = pullback_kahler(acs, origin, x, acs(origin) @ x, "closed", step)
    degenerate = abs(det_df + threshold) <= tol
    logger.info(
        "Criterion: det_df=%.6g threshold=%.6g pullback=%.6g chart=%.6g degenerate=%s",
        det_df,
        threshold,
        pullback_value,
        chart_value,
        degenerate,
    )
    return CriterionRecord(
        det_df=det_df,
        threshold=threshold,
        pullback_value=float(pullback_value),
        chart_pullback_value=float(chart_value),
        degenerate=degenerate,
    )
