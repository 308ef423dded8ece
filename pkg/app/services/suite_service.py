"""
Verification suites.

Each suite evaluates a family of identities on seeded samples and reduces the
per-sample residuals to one CheckRecord per identity (maximum over samples).
Positivity requirements are recorded as 0/1 violation indicators so that a
record passes only when every sample is strictly positive.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.acs_fields import (
    AcsField,
    build_field,
    is_orthogonal,
    p_minus,
    p_plus,
    t01_basis,
    validate,
)
from app.core.complex_linalg import random_unitary
from app.core.exceptions import ConfigurationError
from app.core.grassmann_maps import (
    canonical_p,
    d_map,
    dbar_perp,
    dbar_target,
    grassmann_k,
    k_block_formula,
    omega,
    omega_blocks,
    perp_p,
    pullback_kahler,
    pullback_reomega,
    random_idempotent,
    random_self_adjoint_projector,
    random_self_adjoint_tangent,
    random_tangent_at,
    s2_criterion,
    taming_check,
    taming_value,
)
from app.core.polynomials import Polynomial2D
from app.core.sphere_geometry import EmbeddedSphere
from app.core.tensor_calculus import (
    commutator_trace_t01,
    complexified_residual,
    default_step,
    eta_form,
    jrm_split,
    nabla_j,
    nijenhuis,
    nijenhuis_bracket_oracle,
    orthonormal_frame,
    q_form,
    rotate_t01_basis,
    skew_trace_identity,
    strong_residual,
    tangent_algebra_m,
)
from app.schemas.scan import CheckRecord, Environment, ExtremumRecord, ScanConfig, ScanReport, Witness
from app.services.sampling import SamplingService, TangentSample
from app.services.task_executor import TaskExecutorService

logger = logging.getLogger(__name__)

Residuals = Dict[str, float]
SuiteResult = Tuple[List[CheckRecord], List[ExtremumRecord]]

EXAMPLE24_POINTS = (0.5, 2.0, 5.0)


def _norm(a) -> float:
    return float(np.linalg.norm(a))


def _defect(a) -> float:
    return float(np.max(np.abs(a)))


def _violated(ok: bool) -> float:
    return 0.0 if ok else 1.0


def _rel(diff: float, scale: float) -> float:
    return abs(diff) / (1.0 + abs(scale))


@dataclass(frozen=True)
class SuiteContext:
    """Everything a suite needs: the field, its samples and the tolerances."""

    config: ScanConfig
    field: AcsField
    step: float
    samples: List[TangentSample]

    def tol(self, key: str) -> float:
        return self.config.tolerances[key]

    def map(self, func: Callable[[TangentSample], Residuals], name: str) -> List[Residuals]:
        return TaskExecutorService.map_samples(
            func, self.samples, self.config.workers, operation_name=name
        )


def field_from_config(config: ScanConfig) -> AcsField:
    return build_field(config.field, **config.field_params)


def extremum(
    quantity: str, values: Sequence[float], witnesses: Sequence[Tuple[np.ndarray, np.ndarray]]
) -> ExtremumRecord:
    """Reduce values to max/min with the (point, direction) where each occurs."""
    values = np.asarray(values, dtype=float)
    hi, lo = int(np.argmax(values)), int(np.argmin(values))

    def witness(k: int) -> Witness:
        point, direction = witnesses[k]
        return Witness(point=[float(v) for v in point], direction=[float(v) for v in direction])

    return ExtremumRecord(
        quantity=quantity,
        max=float(values[hi]),
        argmax=witness(hi),
        min=float(values[lo]),
        argmin=witness(lo),
    )


def _collect(
    ctx: SuiteContext,
    results: List[Residuals],
    tolerance_keys: Dict[str, str],
    details: Optional[Dict[str, Dict[str, float]]] = None,
) -> List[CheckRecord]:
    checks = []
    for name, key in tolerance_keys.items():
        worst = max(r[name] for r in results)
        checks.append(
            CheckRecord.evaluate(name, worst, ctx.tol(key), (details or {}).get(name))
        )
    return checks


def _sample_witnesses(ctx: SuiteContext) -> List[Tuple[np.ndarray, np.ndarray]]:
    return [(s.point, s.x) for s in ctx.samples]


def _require_sphere(ctx: SuiteContext, suite: str) -> None:
    if not isinstance(ctx.field.backend, EmbeddedSphere):
        raise ConfigurationError(f"Suite '{suite}' requires a sphere field, got '{ctx.field.name}'")


def _require_field(ctx: SuiteContext, suite: str, name: str) -> None:
    if ctx.field.name != name:
        raise ConfigurationError(f"Suite '{suite}' runs on '{name}', got '{ctx.field.name}'")


class SuiteService:
    """Runs named identity suites over seeded samples."""

    @classmethod
    def run_suite(cls, config: ScanConfig) -> ScanReport:
        """
        Execute a verification suite.

        Args:
            config: Validated run configuration

        Returns:
            ScanReport with one record per identity

        Raises:
            ConfigurationError: If the suite or field is unknown or the suite
                does not apply to the field
            ServiceError: If a sample evaluation fails
        """
        handler = SUITES.get(config.suite)
        if handler is None:
            raise ConfigurationError(
                f"Unknown suite '{config.suite}'; expected one of {', '.join(SUITES)}"
            )
        acs = field_from_config(config)
        step = config.step or default_step(acs)
        samples = SamplingService.draw(acs.backend, config.seed, config.samples)
        ctx = SuiteContext(config=config, field=acs, step=step, samples=samples)

        with TaskExecutorService.timed(f"suite {config.suite} on {acs.name}") as timing:
            checks, extrema = handler(ctx)

        for check in checks:
            if check.passed:
                logger.info(
                    "PASS %s: %.3e <= %.3e", check.name, check.max_residual, check.tolerance
                )
            else:
                logger.warning(
                    "FAIL %s: %.3e > %.3e", check.name, check.max_residual, check.tolerance
                )

        return ScanReport(
            suite=config.suite,
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


def suite_validate(ctx: SuiteContext) -> SuiteResult:
    acs = ctx.field
    result = validate(acs, len(ctx.samples), ctx.config.seed, ctx.tol("algebraic"))
    checks = [
        CheckRecord.evaluate("j_squared", result.residuals["square"], ctx.tol("algebraic")),
        CheckRecord.evaluate("j_tangent", result.residuals["tangency"], ctx.tol("algebraic")),
        CheckRecord.evaluate(
            "continuity",
            _violated(bool(np.isfinite(result.lipschitz))),
            ctx.tol("algebraic"),
            {"lipschitz": result.lipschitz},
        ),
    ]

    def per_sample(s: TangentSample) -> Residuals:
        p = s.point
        j = acs(p)
        projection = acs.projection(p)
        basis = t01_basis(acs, p)
        again = t01_basis(acs, p)
        lower, upper = p_minus(j, projection), p_plus(j, projection)
        return {
            "t01_eigenvectors": max(_norm(j @ w + 1j * w) for w in basis.w),
            "t01_orthonormal": _defect(basis.gram() - np.eye(len(basis.w))),
            "t01_reconstruct": max(_norm(w - (z + 1j * (j @ z))) for w, z in zip(basis.w, basis.z)),
            "t01_reproducible": _violated(
                all(np.array_equal(a, b) for a, b in zip(basis.w, again.w))
            ),
            "eigenprojector_sum": _defect(lower + upper - projection),
            "eigenprojector_idempotent": max(
                _defect(lower @ lower - lower), _defect(upper @ upper - upper)
            ),
            "eigenprojector_orthogonal": max(_defect(upper @ lower), _defect(lower @ upper)),
        }

    results = ctx.map(per_sample, "validate")
    checks += _collect(ctx, results, {name: "algebraic" for name in results[0]})
    return checks, []


def suite_tensor_identities(ctx: SuiteContext) -> SuiteResult:
    acs, step = ctx.field, ctx.step

    def per_sample(s: TangentSample) -> Residuals:
        p, x, y = s.point, s.x, s.y
        j = acs(p)
        d_x = nabla_j(acs, p, x, step).value
        m_xy = tangent_algebra_m(acs, p, x, y, step)
        scale = 1.0 + _norm(m_xy)
        n_xy = nijenhuis(acs, p, x, y, step)
        oracle = nijenhuis_bracket_oracle(acs, p, x, y, step)
        lhs, rhs = complexified_residual(acs, p, x, y, step)
        return {
            "nabla_anticommutes": _defect(d_x @ j + j @ d_x) / (1.0 + _norm(d_x)),
            "nabla_trace_free": abs(np.trace(d_x)) / (1.0 + _norm(d_x)),
            "m_antilinear_first": _norm(tangent_algebra_m(acs, p, j @ x, y, step) + j @ m_xy) / scale,
            "m_antilinear_second": _norm(tangent_algebra_m(acs, p, x, j @ y, step) + j @ m_xy) / scale,
            "m_tensorial": _norm(tangent_algebra_m(acs, p, 2.5 * x, y, step) - 2.5 * m_xy) / scale,
            "nijenhuis_antisymmetric": _norm(nijenhuis(acs, p, x, x, step)),
            "nijenhuis_bracket": _norm(n_xy - oracle) / (1.0 + _norm(n_xy)),
            "complexified": _norm(lhs - rhs) / (1.0 + _norm(rhs)),
            "strong": strong_residual(acs, p, step),
        }

    results = ctx.map(per_sample, "tensor identities")
    checks = _collect(
        ctx,
        results,
        {
            "nabla_anticommutes": "fd",
            "nabla_trace_free": "fd",
            "m_antilinear_first": "fd",
            "m_antilinear_second": "fd",
            "m_tensorial": "fd",
            "nijenhuis_antisymmetric": "algebraic",
            "nijenhuis_bracket": "bracket",
            "complexified": "fd",
        },
    )
    strong = [r["strong"] for r in results]
    return checks, [extremum("strong_residual", strong, _sample_witnesses(ctx))]


def suite_jrm(ctx: SuiteContext) -> SuiteResult:
    acs = ctx.field
    dim = acs.backend.real_dim

    def per_sample(s: TangentSample) -> Residuals:
        p = s.point
        split = jrm_split(acs, p)
        residuals = split.residuals(dim)
        residuals["reconstruct"] = _defect(split.r + 1j * split.m - split.q)
        eigenvalue = split.ip_min_eigenvalue(orthonormal_frame(acs, p))
        residuals["ip_positive_definite"] = _violated(eigenvalue > 0)
        residuals["ip_min_eigenvalue"] = eigenvalue
        if is_orthogonal(acs, p):
            residuals["orthogonal_split"] = max(
                _defect(split.r - 0.5 * split.projection), _defect(split.m - 0.5 * split.j)
            )
        else:
            residuals["orthogonal_split"] = 0.0
        return residuals

    results = ctx.map(per_sample, "jrm split")
    keys = {name: "lemma54" for name in results[0] if name not in ("ip_min_eigenvalue",)}
    keys["reconstruct"] = "grassmann"
    keys["orthogonal_split"] = "algebraic"
    details = {"ip_positive_definite": {"min_eigenvalue": min(r["ip_min_eigenvalue"] for r in results)}}
    return _collect(ctx, results, keys, details), []


def suite_thm44(ctx: SuiteContext) -> SuiteResult:
    _require_sphere(ctx, "thm44")
    acs, step = ctx.field, ctx.step

    def per_sample(s: TangentSample) -> Residuals:
        p, x, y = s.point, s.x, s.y
        j = acs(p)
        fd = pullback_reomega(acs, p, x, y, "fd", step)
        closed = pullback_reomega(acs, p, x, y, "closed", step)
        doubled = pullback_reomega(acs, p, 2.0 * x, y, "closed", step)
        d_x = d_map(acs, p, x, "canonical", step)
        d_y = d_map(acs, p, y, "canonical", step)
        dp, base = d_x.mat, d_x.base.mat
        return {
            "pullback_fd_vs_closed": _rel(fd - closed, closed),
            "normal_image": _norm(dp @ p - 0.5 * (x - 1j * (j @ x))),
            "tangency": _defect(dp @ base + base @ dp - dp),
            "immersion": _violated(np.linalg.norm(dp, 2) >= 0.5 * _norm(x)),
            "bilinearity": _rel(doubled - 2.0 * closed, 2.0 * closed),
            "imag_omega": omega(d_x.base, d_x, d_y).imag,
        }

    results = ctx.map(per_sample, "thm44")
    checks = _collect(
        ctx,
        results,
        {
            "pullback_fd_vs_closed": "pullback",
            "normal_image": "fd",
            "immersion": "fd",
            "bilinearity": "homogeneity",
        },
    )
    worst = max(r["tangency"] for r in results)
    checks.append(CheckRecord.evaluate("tangency", worst, 5.0 * ctx.step**2))
    imag = [r["imag_omega"] for r in results]
    return checks, [extremum("imag_omega", imag, _sample_witnesses(ctx))]


def suite_prop56(ctx: SuiteContext) -> SuiteResult:
    _require_sphere(ctx, "prop56")
    acs, step = ctx.field, ctx.step
    n = acs.backend.n

    def per_sample(s: TangentSample) -> Residuals:
        p, x, y = s.point, s.x, s.y
        fd = pullback_kahler(acs, p, x, y, "fd", step)
        closed = pullback_kahler(acs, p, x, y, "closed", step)
        swapped = pullback_kahler(acs, p, y, x, "closed", step)
        d_x = d_map(acs, p, x, "perp", step)
        dp, base = d_x.mat, d_x.base.mat
        split = jrm_split(acs, p)
        basis = t01_basis(acs, p)
        unitary = random_unitary(SamplingService.generator(ctx.config.seed + 1 + s.index), n)
        eta = eta_form(acs, p, x, y, step, basis=basis, split=split)
        eta_rotated = eta_form(acs, p, x, y, step, basis=rotate_t01_basis(basis, unitary), split=split)
        return {
            "pullback_fd_vs_closed": _rel(fd - closed, closed),
            "normal_image": _norm(dp @ p - d_x.base.complement @ x),
            "tangency": _defect(dp @ base + base @ dp - dp),
            "antisymmetry": abs(closed + swapped),
            "eta_basis_independent": abs(eta - eta_rotated),
        }

    results = ctx.map(per_sample, "prop56")
    checks = _collect(
        ctx,
        results,
        {
            "pullback_fd_vs_closed": "pullback",
            "normal_image": "fd",
            "antisymmetry": "homogeneity",
            "eta_basis_independent": "basis",
        },
    )
    worst = max(r["tangency"] for r in results)
    checks.append(CheckRecord.evaluate("tangency", worst, 5.0 * ctx.step**2))
    return checks, []


def suite_thm53(ctx: SuiteContext) -> SuiteResult:
    _require_sphere(ctx, "thm53")
    acs, step = ctx.field, ctx.step

    def per_sample(s: TangentSample) -> Residuals:
        p, x, y = s.point, s.x, s.y
        j = acs(p)
        target = dbar_target(acs, p, x, y, step)
        value = dbar_perp(acs, p, x, y + 1j * (j @ y), step)
        m_norm = _norm(tangent_algebra_m(acs, p, x, y, step))
        return {
            "dbar_normal": _norm(dbar_perp(acs, p, x, p, step)),
            "dbar_tangent": _norm(value - target) / (1.0 + m_norm),
        }

    results = ctx.map(per_sample, "thm53")
    return _collect(ctx, results, {"dbar_normal": "dbar_normal", "dbar_tangent": "dbar"}), []


def suite_taming(ctx: SuiteContext) -> SuiteResult:
    rng = SamplingService.generator(ctx.config.seed)
    cases = []
    for _ in ctx.samples:
        size = int(rng.integers(2, 7))
        rank = int(rng.integers(1, size))
        idem = random_idempotent(rng, size, rank)
        sa = random_self_adjoint_projector(rng, size, rank)
        cases.append(
            (
                idem,
                random_tangent_at(rng, idem),
                sa,
                random_self_adjoint_tangent(rng, sa),
                random_self_adjoint_tangent(rng, sa),
            )
        )

    def per_case(case) -> Residuals:
        idem, t_idem, sa, s, t = case
        value = taming_check(idem, t_idem)
        blocks = taming_value(idem, t_idem)
        k_t = grassmann_k(sa, t)
        k_s = grassmann_k(sa, s)
        w_st = omega(sa, s, t)
        kaehler = omega(sa, t, k_t).real
        return {
            "taming_positive": _violated(value > 0),
            "taming_block_formula": _rel(value - blocks, blocks),
            "k_squared": _norm(grassmann_k(sa, k_t).mat + t.mat) / (1.0 + _norm(t.mat)),
            "k_block_formula": _norm(k_t.mat - k_block_formula(sa, t)) / (1.0 + _norm(t.mat)),
            "omega_k_invariant": _rel(omega(sa, k_s, k_t).real - w_st.real, w_st.real),
            "omega_blocks": _rel(w_st.real - omega_blocks(s, t), w_st.real),
            "omega_antisymmetric": abs(w_st + omega(sa, t, s)) / (1.0 + abs(w_st)),
            "kaehler_positive": _violated(kaehler > 0),
            "taming_normalised": value / _norm(t_idem.mat) ** 2,
        }

    results = TaskExecutorService.map_samples(per_case, cases, ctx.config.workers, "taming")
    keys = {
        "taming_positive": "taming",
        "taming_block_formula": "algebraic",
        "k_squared": "grassmann",
        "k_block_formula": "grassmann",
        "omega_k_invariant": "algebraic",
        "omega_blocks": "algebraic",
        "omega_antisymmetric": "grassmann",
        "kaehler_positive": "taming",
    }
    details = {
        "taming_positive": {"min_normalised_value": min(r["taming_normalised"] for r in results)}
    }
    return _collect(ctx, results, keys, details), []


def _random_quadratic(rng: np.random.Generator, constant: float) -> Polynomial2D:
    """Random polynomial of degree at most two with a prescribed constant term."""
    terms = [(i, j, float(rng.standard_normal())) for i, j in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))]
    return Polynomial2D.from_monomials([(0, 0, constant)] + terms)


def suite_s2_criterion(ctx: SuiteContext) -> SuiteResult:
    params = ctx.config.field_params
    f = params.get("f")
    g = params.get("g")
    f = f if f is not None else Polynomial2D.constant(0.0)
    g = g if g is not None else Polynomial2D.constant(1.0)
    tol = ctx.tol("criterion")
    record = s2_criterion(f, g, tol)
    checks = [
        CheckRecord.evaluate(
            "criterion_consistency",
            abs(record.pullback_value - record.chart_pullback_value),
            tol,
            record.as_dict(),
        )
    ]

    rng = SamplingService.generator(ctx.config.seed)
    pairs = []
    for _ in ctx.samples:
        g_origin = float(rng.choice([-1.0, 1.0]) * (0.5 + rng.uniform()))
        f_rand = _random_quadratic(rng, float(rng.standard_normal()))
        g_rand = _random_quadratic(rng, g_origin)
        a = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))
        pairs.append((f_rand, g_rand, a))

    def per_pair(pair) -> Residuals:
        f_rand, g_rand, a = pair
        random_record = s2_criterion(f_rand, g_rand, tol)
        degenerate = s2_criterion(
            Polynomial2D.from_monomials([(1, 0, a)]),
            Polynomial2D.from_monomials([(0, 0, 1.0), (0, 1, -2.0 / a)]),
            tol,
        )
        generic = s2_criterion(
            Polynomial2D.from_monomials([(1, 0, a)]),
            Polynomial2D.constant(1.0),
            tol,
        )
        return {
            "criterion_random_pairs": abs(
                random_record.pullback_value - random_record.chart_pullback_value
            ),
            "criterion_degenerate_family": _violated(
                degenerate.degenerate and abs(degenerate.pullback_value) <= tol
            ),
            "criterion_generic_family": _violated(not generic.degenerate),
        }

    results = TaskExecutorService.map_samples(per_pair, pairs, ctx.config.workers, "s2 criterion")
    checks += _collect(
        ctx,
        results,
        {
            "criterion_random_pairs": "criterion",
            "criterion_degenerate_family": "criterion",
            "criterion_generic_family": "criterion",
        },
    )
    return checks, []


def suite_cor47_identity(ctx: SuiteContext) -> SuiteResult:
    acs, step = ctx.field, ctx.step

    def per_sample(s: TangentSample) -> Residuals:
        p, x = s.point, s.x
        lhs, rhs = skew_trace_identity(acs, p, x, step)
        lhs2, rhs2 = skew_trace_identity(acs, p, 2.0 * x, step)
        trace = commutator_trace_t01(acs, p, x, acs(p) @ x, step).imag
        tol = ctx.tol("cor47")
        return {
            "skew_trace_identity": _rel(lhs - rhs, rhs),
            "nonnegative": _violated(min(lhs, rhs) >= -tol),
            "homogeneity": max(_rel(lhs2 - 4.0 * lhs, 4.0 * lhs), _rel(rhs2 - 4.0 * rhs, 4.0 * rhs)),
            "commutator_gap": abs(trace - 2.0 * lhs),
        }

    results = ctx.map(per_sample, "cor47 identity")
    details = {
        "skew_trace_identity": {
            "max_commutator_minus_twice_lhs": max(r["commutator_gap"] for r in results)
        }
    }
    checks = _collect(
        ctx,
        results,
        {"skew_trace_identity": "cor47", "nonnegative": "cor47", "homogeneity": "homogeneity"},
        details,
    )
    return checks, []


def suite_example24(ctx: SuiteContext) -> SuiteResult:
    _require_field(ctx, "example24", "example-2-4")
    acs, step = ctx.field, ctx.step
    d_x, d_y = np.array([1.0, 0.0]), np.array([0.0, 1.0])

    def per_point(x_coord: float) -> Residuals:
        p = np.array([x_coord, 0.3])
        expected = np.array([[0.0, 1.0], [1.0 / x_coord**2, 0.0]])
        m_target = np.array([0.0, 1.0 / x_coord])
        return {
            "nabla_dy_vanishes": _defect(nabla_j(acs, p, d_y, step).value),
            "nabla_dx_matrix": _defect(nabla_j(acs, p, d_x, step).value - expected),
            "m_dy_dx": _norm(tangent_algebra_m(acs, p, d_y, d_x, step) - m_target),
            "m_dx_dy": _norm(tangent_algebra_m(acs, p, d_x, d_y, step) - m_target),
            "nijenhuis_vanishes": _norm(nijenhuis(acs, p, d_x, d_y, step)),
            "strong_lower_bound": max(0.0, 1.0 / (2.0 * x_coord) - strong_residual(acs, p, step)),
        }

    results = TaskExecutorService.map_samples(
        per_point, EXAMPLE24_POINTS, ctx.config.workers, "example24"
    )
    return _collect(ctx, results, {name: "example24" for name in results[0]}), []


def suite_prop512(ctx: SuiteContext) -> SuiteResult:
    acs, step = ctx.field, ctx.step

    def per_sample(s: TangentSample) -> Residuals:
        p, x, z = s.point, s.x, s.z
        j = acs(p)
        split = jrm_split(acs, p)
        q_x = q_form(acs, p, z, x, step, split)
        q_jx = q_form(acs, p, z, j @ x, step, split)
        q_jz = q_form(acs, p, j @ z, x, step, split)
        rhs = split.ip(tangent_algebra_m(acs, p, x, z, step), tangent_algebra_m(acs, p, z, x, step))
        return {
            "qform_sum_identity": _rel(q_jx + q_x - rhs, rhs),
            "qform_j_invariant": _rel(q_jz - q_x, q_x),
        }

    results = ctx.map(per_sample, "prop512")
    return _collect(
        ctx, results, {"qform_sum_identity": "prop512", "qform_j_invariant": "qform"}
    ), []


def suite_baselines(ctx: SuiteContext) -> SuiteResult:
    _require_field(ctx, "baselines", "standard-s2")
    acs, step = ctx.field, ctx.step

    def per_sample(s: TangentSample) -> Residuals:
        p, x, y, z = s.point, s.x, s.y, s.z
        jx = acs(p) @ x
        return {
            "nabla_vanishes": _defect(nabla_j(acs, p, x, step).value),
            "nijenhuis_vanishes": _norm(nijenhuis(acs, p, x, y, step)),
            "m_vanishes": _norm(tangent_algebra_m(acs, p, x, y, step)),
            "eta_vanishes": abs(eta_form(acs, p, x, y, step)),
            "qform_vanishes": abs(q_form(acs, p, z, x, step)),
            "reomega_half": abs(pullback_reomega(acs, p, x, jx, "closed", step) - 0.5),
            "kahler_half": abs(pullback_kahler(acs, p, x, jx, "closed", step) - 0.5),
        }

    results = ctx.map(per_sample, "baselines")
    return _collect(ctx, results, {name: "baseline" for name in results[0]}), []


def suite_remark42(ctx: SuiteContext) -> SuiteResult:
    _require_sphere(ctx, "remark42")
    acs = ctx.field
    orthogonal = bool(acs.metadata.get("orthogonal", False))
    tol = ctx.tol("remark42")

    def per_sample(s: TangentSample) -> Residuals:
        p = s.point
        canonical = canonical_p(acs, p)
        return {
            "self_adjoint_residual": canonical.selfadj_residual,
            "perp_vs_canonical": _norm(perp_p(acs, p).mat - canonical.mat),
            "detector": _violated(is_orthogonal(acs, p) == orthogonal),
        }

    results = ctx.map(per_sample, "remark42")
    residuals = [r["self_adjoint_residual"] for r in results]
    checks = [CheckRecord.evaluate("orthogonality_detector", max(r["detector"] for r in results), tol)]
    if orthogonal:
        checks.append(CheckRecord.evaluate("canonical_self_adjoint", max(residuals), tol))
        checks.append(
            CheckRecord.evaluate(
                "perp_equals_canonical", max(r["perp_vs_canonical"] for r in results), tol
            )
        )
    else:
        checks.append(
            CheckRecord.evaluate(
                "canonical_not_self_adjoint",
                max(_violated(r > 100.0 * tol) for r in residuals),
                tol,
                {"min_self_adjoint_residual": min(residuals)},
            )
        )
    return checks, [extremum("self_adjoint_residual", residuals, _sample_witnesses(ctx))]


SUITES: Dict[str, Callable[[SuiteContext], SuiteResult]] = {
    "validate": suite_validate,
    "tensor-identities": suite_tensor_identities,
    "jrm": suite_jrm,
    "thm44": suite_thm44,
    "prop56": suite_prop56,
    "thm53": suite_thm53,
    "taming": suite_taming,
    "s2-criterion": suite_s2_criterion,
    "cor47-identity": suite_cor47_identity,
    "example24": suite_example24,
    "prop512": suite_prop512,
    "baselines": suite_baselines,
    "remark42": suite_remark42,
}
