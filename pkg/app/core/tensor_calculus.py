"""Pointwise tensors built from the covariant derivative of J.

Tangent vectors are extended off the base point as ``Y(q) = Pi_q Y`` on the
sphere (constant in a chart). On the sphere this extension is parallel at the
base point, so ``(nabla_X J) Y = Pi_p d/dt [J Pi Y]`` with no correction
term and one finite difference of ``q -> J_q Pi_q`` gives the whole
endomorphism.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from app.core.acs_fields import AcsField, T01Basis, is_orthogonal, p_plus, t01_basis
from app.core.complex_linalg import gram_schmidt_hermitian, restricted_trace
from app.core.config import settings
from app.core.exceptions import PreconditionError
from app.core.sphere_geometry import (
    ConformalChart,
    chart_covariant_derivative,
    chart_covariant_derivative_vec,
    covariant_derivative_vec,
    fd_chart_derivative,
    fd_derivative_matrix_field,
    tangent_frame,
    tangent_projection,
)

logger = logging.getLogger(__name__)

VectorField = Callable[[np.ndarray], np.ndarray]


def default_step(acs: AcsField) -> float:
    return settings.CHART_STEP if acs.is_chart else settings.SPHERE_STEP


def _step(acs: AcsField, step: Optional[float]) -> float:
    return default_step(acs) if step is None else step


@dataclass(frozen=True)
class NablaJ:
    """Value of ``nabla_X J`` at one point.

    Attributes:
        point: Base point
        direction: Tangent vector X
        value: Endomorphism of the tangent space (ambient matrix on spheres)
    """

    point: np.ndarray
    direction: np.ndarray
    value: np.ndarray

    def anticommutator_residual(self, j: np.ndarray) -> float:
        return float(np.max(np.abs(self.value @ j + j @ self.value)))

    def trace(self) -> float:
        return float(np.trace(self.value))


def nabla_j(acs: AcsField, p: np.ndarray, x: np.ndarray, step: Optional[float] = None) -> NablaJ:
    """
    Covariant derivative of J in direction ``x``.

    Args:
        acs: Field
        p: Base point
        x: Tangent vector at ``p``
        step: Finite-difference step; defaults per backend

    Returns:
        NablaJ holding the endomorphism

    Raises:
        DomainError: If a stencil point leaves the field's domain
    """
    step = _step(acs, step)
    x = np.asarray(x, dtype=float)
    if isinstance(acs.backend, ConformalChart):
        value = chart_covariant_derivative(acs, acs.backend, p, x, step)
    else:
        projection = tangent_projection(p)
        raw = fd_derivative_matrix_field(
            lambda q: acs(q) @ tangent_projection(q), p, x, step
        )
        value = projection @ raw @ projection
    return NablaJ(point=np.asarray(p), direction=x, value=value)


def tangent_algebra_m(
    acs: AcsField, p: np.ndarray, x: np.ndarray, y: np.ndarray, step: Optional[float] = None
) -> np.ndarray:
    """``m(X, Y) = (nabla_{JX} J - J nabla_X J) Y``."""
    j = acs(p)
    d_x = nabla_j(acs, p, x, step).value
    d_jx = nabla_j(acs, p, j @ x, step).value
    return (d_jx - j @ d_x) @ np.asarray(y, dtype=float)


def nijenhuis(
    acs: AcsField, p: np.ndarray, x: np.ndarray, y: np.ndarray, step: Optional[float] = None
) -> np.ndarray:
    """Nijenhuis tensor as the swap antisymmetrisation ``m(Y, X) - m(X, Y)``."""
    return tangent_algebra_m(acs, p, y, x, step) - tangent_algebra_m(acs, p, x, y, step)


def _extension(acs: AcsField, vector: np.ndarray) -> VectorField:
    vector = np.asarray(vector, dtype=float)
    if acs.is_chart:
        return lambda q: vector
    return lambda q: tangent_projection(q) @ vector


def _lie_bracket(
    acs: AcsField, p: np.ndarray, u: VectorField, v: VectorField, step: float
) -> np.ndarray:
    u_p, v_p = u(p), v(p)
    if isinstance(acs.backend, ConformalChart):
        du_v = fd_chart_derivative(v, p, u_p, step, domain=acs.backend.check_point)
        dv_u = fd_chart_derivative(u, p, v_p, step, domain=acs.backend.check_point)
        return du_v - dv_u
    # The second fundamental form terms cancel in the difference
    bracket = fd_derivative_matrix_field(v, p, u_p, step) - fd_derivative_matrix_field(
        u, p, v_p, step
    )
    return tangent_projection(p) @ bracket


def nijenhuis_bracket_oracle(
    acs: AcsField,
    p: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    step: Optional[float] = None,
    x_field: Optional[VectorField] = None,
    y_field: Optional[VectorField] = None,
) -> np.ndarray:
    """
    Nijenhuis tensor from Lie brackets of extended fields.

    ``N(X, Y) = J[X, JY] + J[JX, Y] + [X, Y] - [JX, JY]``, with brackets
    ``[U, V] = D_U V - D_V U`` taken by finite differences. Since N is a
    tensor any extensions agreeing with ``x`` and ``y`` at ``p`` may be passed.
    """
    step = _step(acs, step)
    x_hat = x_field or _extension(acs, x)
    y_hat = y_field or _extension(acs, y)

    def jx_hat(q):
        return acs(q) @ x_hat(q)

    def jy_hat(q):
        return acs(q) @ y_hat(q)

    j = acs(p)
    return (
        j @ _lie_bracket(acs, p, x_hat, jy_hat, step)
        + j @ _lie_bracket(acs, p, jx_hat, y_hat, step)
        + _lie_bracket(acs, p, x_hat, y_hat, step)
        - _lie_bracket(acs, p, jx_hat, jy_hat, step)
    )


def orthonormal_frame(acs: AcsField, p: np.ndarray) -> List[np.ndarray]:
    """Real orthonormal frame of the tangent space in the field's metric."""
    seeds = tangent_frame(acs.backend, p)
    max_norm = max(float(np.linalg.norm(s)) for s in seeds)
    frame = gram_schmidt_hermitian(seeds, tol=settings.FRAME_SEED_TOL * max_norm)[: acs.backend.real_dim]
    h = acs.backend.metric_factor(p)
    return [np.real(e) / np.sqrt(h) for e in frame]


def metric_norm(acs: AcsField, p: np.ndarray, v: np.ndarray) -> float:
    return float(np.sqrt(acs.backend.metric_factor(p)) * np.linalg.norm(v))


def strong_residual(acs: AcsField, p: np.ndarray, step: Optional[float] = None) -> float:
    """Largest ``|m(e_i, e_j)|`` over an orthonormal frame; zero iff strongly integrable."""
    frame = orthonormal_frame(acs, p)
    worst = 0.0
    for e_i in frame:
        for e_j in frame:
            worst = max(worst, metric_norm(acs, p, tangent_algebra_m(acs, p, e_i, e_j, step)))
    return worst


def _euclidean_basis(basis: T01Basis) -> List[np.ndarray]:
    return [np.sqrt(basis.metric_factor) * w for w in basis.w]


def commutator_trace_t01(
    acs: AcsField,
    p: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    step: Optional[float] = None,
    basis: Optional[T01Basis] = None,
) -> complex:
    """
    Trace of ``[nabla_X J, nabla_Y J]`` restricted to T^{0,1}.

    Raises:
        InvarianceError: If the commutator fails to preserve T^{0,1}
    """
    basis = basis or t01_basis(acs, p)
    d_x = nabla_j(acs, p, x, step).value
    d_y = nabla_j(acs, p, y, step).value
    return restricted_trace(d_x @ d_y - d_y @ d_x, _euclidean_basis(basis))


def skew_trace_identity(
    acs: AcsField, p: np.ndarray, x: np.ndarray, step: Optional[float] = None
) -> Tuple[float, float]:
    """
    Both sides of ``Im Tr(J (nabla_X J)^2 | T01) = 2 sum |(nabla_X J) Z_k|^2``.

    Raises:
        PreconditionError: If J is not orthogonal at ``p``
    """
    if not is_orthogonal(acs, p):
        raise PreconditionError(f"{acs.name} is not orthogonal at the sampled point")
    basis = t01_basis(acs, p)
    j = acs(p)
    d_x = nabla_j(acs, p, x, step).value
    lhs = restricted_trace(j @ d_x @ d_x, _euclidean_basis(basis)).imag
    rhs = 2.0 * sum(metric_norm(acs, p, d_x @ z) ** 2 for z in basis.z)
    return float(lhs), float(rhs)


@dataclass(frozen=True)
class JrmSplit:
    """Real and imaginary parts of the orthogonal projector onto T^{0,1}.

    Attributes:
        q: Orthogonal projector ``Q = R + iM``
        r: ``Re Q``
        m: ``Im Q``
        j: Structure matrix at the point
        projection: Tangent projection at the point
        metric_factor: Conformal factor (1 on spheres)
    """

    q: np.ndarray
    r: np.ndarray
    m: np.ndarray
    j: np.ndarray
    projection: np.ndarray
    metric_factor: float = 1.0

    def nu(self, a: np.ndarray, b: np.ndarray) -> float:
        """The alternating form ``nu(a, b) = <M a, b>``."""
        return float(self.metric_factor * np.dot(self.m @ a, b))

    def ip(self, a: np.ndarray, b: np.ndarray) -> float:
        """The inner product ``(a, b) = nu(a, J b)``."""
        return self.nu(a, self.j @ b)

    def nu_matrix(self) -> np.ndarray:
        return self.metric_factor * self.m.T

    def ip_matrix(self) -> np.ndarray:
        return self.metric_factor * self.m.T @ self.j

    def residuals(self, dim: int) -> Dict[str, float]:
        """Maximum entrywise defects of every algebraic property of the split.

        Args:
            dim: Real dimension of the tangent space
        """
        r, m, j, projection = self.r, self.m, self.j, self.projection
        nu = self.nu_matrix()
        ip = self.ip_matrix()

        def defect(a: np.ndarray) -> float:
            return float(np.max(np.abs(a)))

        return {
            "r_minus_mj": defect(r - m @ j - projection),
            "r_symmetric": defect(r - r.T),
            "m_skew": defect(m + m.T),
            "trace": abs(complex(np.trace(self.q)) - dim / 2),
            "idempotent_real": defect(r @ r - m @ m - r),
            "idempotent_imag": defect(r @ m + m @ r - m),
            "mj": defect(m @ j + j.T @ m),
            "m2j": defect(m @ m @ j - j.T @ m @ m + m),
            "nu_alternating": defect(nu + nu.T),
            "ip_symmetric": defect(ip - ip.T),
            "nu_j_invariant": defect(j.T @ nu @ j - nu),
            "ip_j_invariant": defect(j.T @ ip @ j - ip),
        }

    def ip_min_eigenvalue(self, frame: List[np.ndarray]) -> float:
        """Smallest eigenvalue of the Gram matrix of ``( , )`` on a tangent frame."""
        f = np.column_stack(frame)
        gram = f.T @ self.ip_matrix() @ f
        return float(np.min(np.linalg.eigvalsh(0.5 * (gram + gram.T))))


def jrm_split(acs: AcsField, p: np.ndarray) -> JrmSplit:
    """
    Split the orthogonal projector onto T^{0,1} into real operators.

    Raises:
        DegeneracyError: Propagated from the T^{0,1} basis
    """
    basis = t01_basis(acs, p)
    q = basis.projector()
    return JrmSplit(
        q=q,
        r=np.real(q).copy(),
        m=np.imag(q).copy(),
        j=acs(p),
        projection=acs.projection(p),
        metric_factor=basis.metric_factor,
    )


def q_form(
    acs: AcsField,
    p: np.ndarray,
    z: np.ndarray,
    x: np.ndarray,
    step: Optional[float] = None,
    split: Optional[JrmSplit] = None,
) -> float:
    """``Q_Z(X) = ((nabla_X J) Z, J m(Z, X))`` with the induced inner product."""
    split = split or jrm_split(acs, p)
    d_x = nabla_j(acs, p, x, step).value
    return split.ip(d_x @ z, split.j @ tangent_algebra_m(acs, p, z, x, step))


def rotate_t01_basis(basis: T01Basis, unitary: np.ndarray) -> T01Basis:
    """Another admissible basis ``w' = w U``; ``z'`` is read off as ``Re w'``."""
    w = np.column_stack(basis.w) @ unitary
    columns = [w[:, k].copy() for k in range(w.shape[1])]
    return T01Basis(
        w=columns,
        z=[np.real(c).copy() for c in columns],
        metric_factor=basis.metric_factor,
    )


def eta_form(
    acs: AcsField,
    p: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    step: Optional[float] = None,
    basis: Optional[T01Basis] = None,
    split: Optional[JrmSplit] = None,
) -> float:
    """
    ``eta(X, Y) = sum_k nu((nabla_X J) Z_k, (nabla_Y J) Z_k)``.

    The value does not depend on which orthonormal basis ``Z_k + iJZ_k`` of
    T^{0,1} is used; pass ``basis`` to pick one.
    """
    split = split or jrm_split(acs, p)
    basis = basis or t01_basis(acs, p)
    d_x = nabla_j(acs, p, x, step).value
    d_y = nabla_j(acs, p, y, step).value
    return float(sum(split.nu(d_x @ z, d_y @ z) for z in basis.z))


def complexified_residual(
    acs: AcsField, p: np.ndarray, x: np.ndarray, y: np.ndarray, step: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Both sides of ``P^+(nabla_{X+iJX}(Y+iJY)) = -P^+(m(X, Y))``.

    The left side differentiates ``W = Y + iJY`` (``Y`` extended as usual)
    along ``X`` and ``JX``; the right side comes from the tangent algebra.
    """
    step = _step(acs, step)
    y_hat = _extension(acs, y)

    def w_field(q):
        return y_hat(q) + 1j * (acs(q) @ y_hat(q))

    j = acs(p)
    x = np.asarray(x, dtype=float)
    if isinstance(acs.backend, ConformalChart):
        along_x = chart_covariant_derivative_vec(w_field, acs.backend, p, x, step)
        along_jx = chart_covariant_derivative_vec(w_field, acs.backend, p, j @ x, step)
    else:
        along_x = covariant_derivative_vec(w_field, p, x, step)
        along_jx = covariant_derivative_vec(w_field, p, j @ x, step)
    upper = p_plus(j, acs.projection(p))
    lhs = upper @ (along_x + 1j * along_jx)
    rhs = -upper @ tangent_algebra_m(acs, p, x, y, step)
    return lhs, rhs
