"""
Obstruction scans.

A scan evaluates one functional on seeded (point, direction) samples and
reports its extremes with witnesses. With ``optimize`` the best sample is
refined by projected coordinate ascent on the unit tangent bundle.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from app.core.acs_fields import AcsField
from app.core.config import settings
from app.core.exceptions import ConfigurationError, GeometryError
from app.core.sphere_geometry import EmbeddedSphere, tangent_projection
from app.core.tensor_calculus import (
    commutator_trace_t01,
    default_step,
    eta_form,
    jrm_split,
    metric_norm,
    nabla_j,
    tangent_algebra_m,
)
from app.schemas.scan import CheckRecord, Environment, ExtremumRecord, ScanConfig, ScanReport
from app.services.sampling import SamplingService, TangentSample
from app.services.suite_service import extremum, field_from_config
from app.services.task_executor import TaskExecutorService

logger = logging.getLogger(__name__)

# Reference levels of the commutator trace for unit X; the octonionic
# structure sits at the upper one.
COMMUTATOR_LOWER = 2.0
COMMUTATOR_OCTONIONIC = 4.0

EXAMPLE24_X_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10)) + tuple(
    round(1.1 + 0.1 * k, 1) for k in range(20)
)
EXAMPLE24_THETA_GRID = tuple(k * np.pi / 12.0 for k in range(12))
EXAMPLE24_Y = 0.0
MIN_ASCENT_STEP = 1e-8

Objective = Callable[[np.ndarray, np.ndarray], float]


@dataclass(frozen=True)
class AscentResult:
    value: float
    point: np.ndarray
    direction: np.ndarray
    sweeps: int


def _unit(acs: AcsField, p: np.ndarray, x: np.ndarray) -> np.ndarray:
    return x / metric_norm(acs, p, x)


def commutator_trace(acs: AcsField, p: np.ndarray, x: np.ndarray, step: float) -> float:
    """``Im Tr([nabla_X J, nabla_{JX} J] | T01)``."""
    return float(commutator_trace_t01(acs, p, x, acs(p) @ x, step).imag)


def commutator_obstruction(acs: AcsField, p: np.ndarray, x: np.ndarray, step: float) -> float:
    """Commutator trace minus ``2(|X|^2 + |JX|^2)``."""
    jx = acs(p) @ x
    norms = metric_norm(acs, p, x) ** 2 + metric_norm(acs, p, jx) ** 2
    return commutator_trace(acs, p, x, step) - 2.0 * norms


def eta_nu(acs: AcsField, p: np.ndarray, x: np.ndarray, y: np.ndarray, step: float) -> float:
    """``eta(X, Y) + nu(X, Y)``, the pullback of the Kaehler form by the orthogonal map."""
    split = jrm_split(acs, p)
    return eta_form(acs, p, x, y, step, split=split) + split.nu(x, y)


def qform_slacks(
    acs: AcsField, p: np.ndarray, z: np.ndarray, x: np.ndarray, step: float
) -> Tuple[float, float]:
    """
    Slack of both upper bounds on the Q form, in the induced inner product.

    Returns:
        ``|D Z|^2 - (D Z, J m(Z, X))`` and ``|D Z| - |m(Z, X)|`` with ``D = nabla_X J``
    """
    split = jrm_split(acs, p)
    dz = nabla_j(acs, p, x, step).value @ z
    m_zx = tangent_algebra_m(acs, p, z, x, step)
    rhs = split.ip(dz, dz)
    lhs = split.ip(dz, split.j @ m_zx)
    norm_dz = np.sqrt(max(rhs, 0.0))
    norm_m = np.sqrt(max(split.ip(m_zx, m_zx), 0.0))
    return float(rhs - lhs), float(norm_dz - norm_m)


def _sphere_candidate(
    p: np.ndarray, x: np.ndarray, block: int, k: int, delta: float
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    if block == 0:
        q = p.copy()
        q[k] += delta
        q = q / np.linalg.norm(q)
        direction = tangent_projection(q) @ x
    else:
        q = p
        direction = x.copy()
        direction[k] += delta
        direction = tangent_projection(q) @ direction
    size = np.linalg.norm(direction)
    if size < 1e-12:
        return None
    return q, direction / size


def coordinate_ascent(
    objective: Objective,
    p: np.ndarray,
    x: np.ndarray,
    iterations: Optional[int] = None,
    initial_step: Optional[float] = None,
) -> AscentResult:
    """
    Maximise ``objective`` over unit tangent vectors of the sphere.

    Each sweep perturbs every ambient coordinate of the point (renormalised,
    direction reprojected) and then of the direction (reprojected); the step
    halves after a sweep without improvement.

    Args:
        objective: Function of (point, unit direction)
        p: Starting point
        x: Starting unit direction
        iterations: Sweep budget
        initial_step: Starting perturbation size

    Returns:
        AscentResult with the best value found
    """
    iterations = settings.OPTIMIZE_ITERATIONS if iterations is None else iterations
    delta = settings.OPTIMIZE_INITIAL_STEP if initial_step is None else initial_step
    best = objective(p, x)
    sweeps = 0
    for sweeps in range(1, iterations + 1):
        improved = False
        for block in (0, 1):
            for k in range(p.size):
                for sign in (1.0, -1.0):
                    candidate = _sphere_candidate(p, x, block, k, sign * delta)
                    if candidate is None:
                        continue
                    try:
                        value = objective(*candidate)
                    except GeometryError:
                        continue
                    if value > best:
                        best, (p, x), improved = value, candidate, True
        if not improved:
            delta /= 2.0
            if delta < MIN_ASCENT_STEP:
                break
    logger.info("Coordinate ascent finished after %d sweeps at %.6g", sweeps, best)
    return AscentResult(value=best, point=p, direction=x, sweeps=sweeps)


class ScanService:
    """Evaluates obstruction functionals and reports their extremes."""

    @classmethod
    def scan(cls, config: ScanConfig) -> ScanReport:
        """
        Execute a scan.

        Args:
            config: Validated run configuration

        Returns:
            ScanReport whose ``suite`` is the quantity name

        Raises:
            ConfigurationError: If the quantity is unknown or does not apply
                to the field
            ServiceError: If a sample evaluation fails
        """
        handler = QUANTITIES.get(config.quantity)
        if handler is None:
            raise ConfigurationError(
                f"Unknown quantity '{config.quantity}'; expected one of {', '.join(QUANTITIES)}"
            )
        acs = field_from_config(config)
        step = config.step or default_step(acs)
        samples = SamplingService.draw(acs.backend, config.seed, config.samples)

        with TaskExecutorService.timed(f"scan {config.quantity} on {acs.name}") as timing:
            checks, extrema = handler(config, acs, step, samples)

        for record in extrema:
            logger.info("%s: max %.6g, min %.6g", record.quantity, record.max, record.min)

        return ScanReport(
            suite=config.quantity,
            field=acs.name,
            environment=Environment(
                seed=config.seed,
                step=step,
                samples=config.samples,
                workers=config.workers,
                wall_time=timing["wall_time"],
                field_params=acs.metadata,
            ),
            checks=checks,
            extrema=extrema,
        )


def _refine(
    config: ScanConfig,
    acs: AcsField,
    record: ExtremumRecord,
    objective: Objective,
) -> ExtremumRecord:
    if not config.optimize:
        return record
    if not isinstance(acs.backend, EmbeddedSphere):
        logger.warning("Optimisation needs a sphere field; keeping the sampled maximum")
        return record
    result = coordinate_ascent(
        objective, np.array(record.argmax.point), np.array(record.argmax.direction)
    )
    if result.value <= record.max:
        return record
    refined = extremum(
        record.quantity,
        [result.value, record.min],
        [(result.point, result.direction), (record.argmin.point, record.argmin.direction)],
    )
    return refined


def scan_commutator_obstruction(
    config: ScanConfig, acs: AcsField, step: float, samples: List[TangentSample]
):
    def per_sample(s: TangentSample) -> Dict[str, float]:
        x = _unit(acs, s.point, s.x)
        return {
            "obstruction": commutator_obstruction(acs, s.point, x, step),
            "trace": commutator_trace(acs, s.point, x, step),
        }

    results = TaskExecutorService.map_samples(
        per_sample, samples, config.workers, "commutator obstruction"
    )
    witnesses = [(s.point, _unit(acs, s.point, s.x)) for s in samples]
    obstruction = extremum(
        "commutator_obstruction", [r["obstruction"] for r in results], witnesses
    )
    obstruction = _refine(
        config, acs, obstruction, lambda p, x: commutator_obstruction(acs, p, x, step)
    )
    trace = extremum("commutator_trace", [r["trace"] for r in results], witnesses)

    checks = []
    if isinstance(acs.backend, EmbeddedSphere) and acs.backend.n == 3:
        checks.append(
            CheckRecord.evaluate(
                "obstruction_witness",
                max(0.0, -obstruction.max),
                config.tolerances["witness"],
                {
                    "max_trace": trace.max,
                    "lower_threshold": COMMUTATOR_LOWER,
                    "octonionic_threshold": COMMUTATOR_OCTONIONIC,
                },
            )
        )
    return checks, [obstruction, trace]


def scan_eta_nu(config: ScanConfig, acs: AcsField, step: float, samples: List[TangentSample]):
    def value(p: np.ndarray, x: np.ndarray) -> float:
        return eta_nu(acs, p, x, acs(p) @ x, step)

    results = TaskExecutorService.map_samples(
        lambda s: value(s.point, _unit(acs, s.point, s.x)), samples, config.workers, "eta-nu"
    )
    witnesses = [(s.point, _unit(acs, s.point, s.x)) for s in samples]
    record = _refine(config, acs, extremum("eta_nu", results, witnesses), value)
    checks = []
    if acs.name == "standard-s2":
        checks.append(
            CheckRecord.evaluate(
                "eta_nu_constant_half",
                max(abs(record.max - 0.5), abs(record.min - 0.5)),
                config.tolerances["eta_nu"],
            )
        )
    return checks, [record]


def scan_qform_bounds(
    config: ScanConfig, acs: AcsField, step: float, samples: List[TangentSample]
):
    def per_sample(s: TangentSample) -> Tuple[float, float]:
        return qform_slacks(acs, s.point, s.z, s.x, step)

    results = TaskExecutorService.map_samples(per_sample, samples, config.workers, "qform bounds")
    witnesses = [(s.point, s.x) for s in samples]
    return [], [
        extremum("qform_inner_slack", [r[0] for r in results], witnesses),
        extremum("qform_norm_slack", [r[1] for r in results], witnesses),
    ]


def example24_bound_gap(acs: AcsField, x_coord: float, theta: float, step: float) -> Dict[str, float]:
    """
    Euclidean comparison of both Q-form bounds on the planar field with ``Z = X``.

    Returns:
        ``gap``: relative excess of ``(D Z, J m(Z, X))`` over ``|D Z|^2``;
        ``norm_gap``: excess of ``|m(Z, X)|`` over ``|D Z|``
    """
    p = np.array([x_coord, EXAMPLE24_Y])
    x = np.array([np.cos(theta), np.sin(theta)])
    j = acs(p)
    dz = nabla_j(acs, p, x, step).value @ x
    m_zx = tangent_algebra_m(acs, p, x, x, step)
    lhs = float(np.dot(dz, j @ m_zx))
    rhs = float(np.dot(dz, dz))
    return {
        "gap": (lhs - rhs) / (1.0 + abs(rhs)),
        "norm_gap": float(np.linalg.norm(m_zx) - np.linalg.norm(dz)),
    }


def scan_example24_bounds(
    config: ScanConfig, acs: AcsField, step: float, samples: List[TangentSample]
):
    if acs.name != "example-2-4":
        raise ConfigurationError(f"example24-bounds runs on 'example-2-4', got '{acs.name}'")
    grid = [(x, theta) for x in EXAMPLE24_X_GRID for theta in EXAMPLE24_THETA_GRID]
    results = TaskExecutorService.map_samples(
        lambda cell: example24_bound_gap(acs, cell[0], cell[1], step),
        grid,
        config.workers,
        "example24 bounds",
    )
    tol = config.tolerances["example24"]
    below = [r["gap"] for (x, _), r in zip(grid, results) if x < 1.0]
    above: Dict[float, float] = {}
    for (x, _), r in zip(grid, results):
        if x > 1.0:
            above[x] = max(above.get(x, -np.inf), r["gap"])
    failing = [x for x, gap in above.items() if gap <= tol]

    checks = [
        CheckRecord.evaluate("bound_holds_below_one", max(0.0, max(below)), tol),
        CheckRecord.evaluate(
            "bound_fails_above_one",
            1.0 if failing else 0.0,
            tol,
            {"holding_points": len(failing)},
        ),
        CheckRecord.evaluate(
            "norm_form_fails",
            0.0 if max(r["norm_gap"] for r in results) > tol else 1.0,
            tol,
        ),
    ]
    witnesses = [
        (np.array([x, EXAMPLE24_Y]), np.array([np.cos(t), np.sin(t)])) for x, t in grid
    ]
    return checks, [extremum("bound_gap", [r["gap"] for r in results], witnesses)]


QUANTITIES = {
    "commutator-obstruction": scan_commutator_obstruction,
    "eta-nu": scan_eta_nu,
    "qform-bounds": scan_qform_bounds,
    "example24-bounds": scan_example24_bounds,
}
