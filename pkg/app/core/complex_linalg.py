"""Dense complex vector and matrix kernel.

Two inner products live side by side and neither silently replaces the other:
``bilinear_dot`` never conjugates, ``hermitian_dot`` is conjugate-linear in
its second argument.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import DimensionError, InvarianceError

logger = logging.getLogger(__name__)

CVector = np.ndarray
CMatrix = np.ndarray

GRAM_SCHMIDT_RELATIVE_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10
INVARIANCE_TOL = 1e-8


def as_cvector(values: Sequence[complex]) -> CVector:
    """Return ``values`` as a one-dimensional complex array."""
    vec = np.asarray(values, dtype=complex)
    if vec.ndim != 1:
        raise DimensionError(f"Expected a vector, got shape {vec.shape}")
    return vec


def _check_same_length(u: CVector, v: CVector) -> None:
    if u.shape != v.shape:
        raise DimensionError(
            f"Vector length mismatch: {u.shape[0]} vs {v.shape[0]}"
        )


def bilinear_dot(u: Sequence[complex], v: Sequence[complex]) -> complex:
    """
    Complex bilinear pairing, no conjugation.

    Args:
        u: First vector
        v: Second vector

    Returns:
        The sum of ``u_k * v_k``

    Raises:
        DimensionError: If the vectors differ in length
    """
    u, v = as_cvector(u), as_cvector(v)
    _check_same_length(u, v)
    return complex(np.sum(u * v))


def hermitian_dot(u: Sequence[complex], v: Sequence[complex]) -> complex:
    """
    Hermitian inner product, conjugate-linear in the second argument.

    Args:
        u: First vector
        v: Second vector

    Returns:
        The sum of ``u_k * conj(v_k)``

    Raises:
        DimensionError: If the vectors differ in length
    """
    u, v = as_cvector(u), as_cvector(v)
    _check_same_length(u, v)
    return complex(np.sum(u * np.conj(v)))


def hermitian_norm(u: Sequence[complex]) -> float:
    return float(np.sqrt(max(hermitian_dot(u, u).real, 0.0)))


def adjoint(a: CMatrix) -> CMatrix:
    return np.conj(np.asarray(a)).T


def gram_schmidt_hermitian(
    vs: Sequence[Sequence[complex]], tol: Optional[float] = None
) -> List[CVector]:
    """
    Orthonormalise vectors for the Hermitian inner product.

    Modified Gram-Schmidt with a second re-orthogonalisation pass. A vector
    whose residual after projection falls below ``tol`` is dropped, so the
    output length is the numerical rank of the input.

    Args:
        vs: Input vectors, all of one length
        tol: Absolute drop threshold; defaults to 1e-10 times the largest
            input norm

    Returns:
        Hermitian-orthonormal vectors spanning the same subspace
    """
    vectors = [as_cvector(v) for v in vs]
    if not vectors:
        return []
    for v in vectors[1:]:
        _check_same_length(vectors[0], v)

    if tol is None:
        max_norm = max(hermitian_norm(v) for v in vectors)
        tol = GRAM_SCHMIDT_RELATIVE_TOL * max_norm
    if tol <= 0:
        # all inputs are zero
        return []

    basis: List[CVector] = []
    for v in vectors:
        w = v.copy()
        for _ in range(2):
            for b in basis:
                w = w - hermitian_dot(w, b) * b
        norm = hermitian_norm(w)
        if norm < tol:
            logger.debug("Dropping dependent vector (residual %.3e)", norm)
            continue
        basis.append(w / norm)
    return basis


def block_split(p: CMatrix, t: CMatrix) -> Tuple[CMatrix, CMatrix]:
    """
    Off-diagonal blocks of ``t`` relative to the splitting defined by ``p``.

    Args:
        p: Idempotent matrix
        t: Square matrix of the same size

    Returns:
        ``(B, C)`` with ``B = P T (I - P)`` and ``C = (I - P) T P`` as full-size
        ambient matrices

    Raises:
        DimensionError: If the sizes differ
    """
    p = np.asarray(p, dtype=complex)
    t = np.asarray(t, dtype=complex)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DimensionError(f"Projector must be square, got {p.shape}")
    if t.shape != p.shape:
        raise DimensionError(
            f"Matrix shape {t.shape} does not match projector {p.shape}"
        )
    complement = np.eye(p.shape[0], dtype=complex) - p
    return p @ t @ complement, complement @ t @ p


def _check_orthonormal(basis: Sequence[CVector]) -> None:
    w = np.column_stack(basis)
    gram = adjoint(w) @ w
    residual = float(np.max(np.abs(gram - np.eye(len(basis)))))
    if residual > ORTHONORMAL_TOL:
        raise InvarianceError(
            f"Basis is not Hermitian-orthonormal (residual {residual:.3e})",
            residual=residual,
        )


def restricted_trace(a: CMatrix, basis: Sequence[Sequence[complex]]) -> complex:
    """
    Trace of ``a`` restricted to the span of an orthonormal basis.

    Args:
        a: Square matrix mapping the span into itself
        basis: Hermitian-orthonormal vectors

    Returns:
        The sum of ``hermitian_dot(A w_k, w_k)``

    Raises:
        DimensionError: If shapes are inconsistent
        InvarianceError: If ``a`` does not preserve the span, or the basis is
            not orthonormal
    """
    a = np.asarray(a, dtype=complex)
    vectors = [as_cvector(w) for w in basis]
    if not vectors:
        return 0j
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[1] != vectors[0].shape[0]:
        raise DimensionError(
            f"Matrix shape {a.shape} incompatible with basis length "
            f"{vectors[0].shape[0]}"
        )
    _check_orthonormal(vectors)

    w = np.column_stack(vectors)
    aw = a @ w
    projected = w @ (adjoint(w) @ aw)
    scale = max(1.0, float(np.linalg.norm(a, 2)))
    residual = float(np.linalg.norm(aw - projected)) / scale
    if residual > INVARIANCE_TOL:
        raise InvarianceError(
            f"Matrix does not preserve the subspace (residual {residual:.3e})",
            residual=residual,
        )
    return complex(sum(hermitian_dot(aw[:, k], w[:, k]) for k in range(w.shape[1])))


def random_unitary(rng: np.random.Generator, size: int) -> CMatrix:
    """Draw a unitary matrix from the seeded generator (QR of a Ginibre draw)."""
    z = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
