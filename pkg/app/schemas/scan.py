"""Pydantic schemas for run configuration and reports.

This module defines the data models behind the CLI: the validated run
configuration and the structured report of a suite or scan.
"""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from .base import ReportModel

DetailValue = Union[bool, int, float, str]


class ScanConfig(BaseModel):
    """Validated configuration of one verify or scan run.

    Attributes:
        command: ``verify`` runs a suite, ``scan`` evaluates a quantity.
        field: Registry name of the almost complex structure.
        field_params: Extra field parameters (polynomials, conjugation strength).
        suite: Suite name for ``verify``.
        quantity: Quantity name for ``scan``.
        samples: Number of seeded samples.
        seed: Generator seed.
        step: Finite-difference step; ``None`` selects the backend default.
        tolerances: Named tolerances after ``--tol`` overrides.
        optimize: Refine the best scan sample by coordinate ascent.
        workers: Thread count for sample evaluation.
        report_path: Where to write the report, if anywhere.
    """

    command: Literal["verify", "scan"]
    field: str
    field_params: Dict[str, Any] = Field(default_factory=dict)
    suite: Optional[str] = None
    quantity: Optional[str] = None
    samples: int = Field(ge=1)
    seed: int
    step: Optional[float] = Field(default=None, gt=0)
    tolerances: Dict[str, float]
    optimize: bool = False
    workers: int = Field(default=1, ge=1)
    report_path: Optional[str] = None

    @field_validator("tolerances")
    @classmethod
    def tolerances_positive(cls, v: Dict[str, float]) -> Dict[str, float]:
        """Every tolerance must be strictly positive."""
        bad = sorted(k for k, value in v.items() if not value > 0)
        if bad:
            raise ValueError(f"Tolerances must be positive: {', '.join(bad)}")
        return v

    @model_validator(mode="after")
    def target_matches_command(self) -> "ScanConfig":
        if self.command == "verify" and not self.suite:
            raise ValueError("verify requires a suite")
        if self.command == "scan" and not self.quantity:
            raise ValueError("scan requires a quantity")
        return self


class CheckRecord(ReportModel):
    """One identity check.

    Attributes:
        name: Check identifier.
        max_residual: Largest residual over the samples.
        tolerance: Pass threshold.
        passed: ``max_residual <= tolerance``; serialized as ``pass``.
        details: Extra values reported alongside (never asserted against).
    """

    name: str
    max_residual: float
    tolerance: float
    passed: bool = Field(alias="pass")
    details: Dict[str, DetailValue] = Field(default_factory=dict)

    @classmethod
    def evaluate(
        cls,
        name: str,
        max_residual: float,
        tolerance: float,
        details: Optional[Dict[str, DetailValue]] = None,
    ) -> "CheckRecord":
        """Build a record whose pass flag follows from residual and tolerance."""
        return cls(
            name=name,
            max_residual=float(max_residual),
            tolerance=float(tolerance),
            passed=bool(max_residual <= tolerance),
            details=details or {},
        )

    @model_validator(mode="after")
    def pass_is_recomputable(self) -> "CheckRecord":
        if self.passed != (self.max_residual <= self.tolerance):
            raise ValueError(
                f"Check '{self.name}' pass flag disagrees with its residual and tolerance"
            )
        return self


class Witness(ReportModel):
    """Sample location of an extremum.

    Attributes:
        point: Base point coordinates.
        direction: Tangent direction (first argument of the functional).
    """

    point: List[float]
    direction: List[float]


class ExtremumRecord(ReportModel):
    """Extremes of a scanned quantity.

    Attributes:
        quantity: Quantity name.
        max: Largest value.
        argmax: Where the maximum is attained.
        min: Smallest value.
        argmin: Where the minimum is attained.
    """

    quantity: str
    max: float
    argmax: Witness
    min: float
    argmin: Witness


class Environment(ReportModel):
    """Run environment.

    Attributes:
        seed: Generator seed.
        step: Finite-difference step in use.
        samples: Sample count.
        workers: Thread count (results do not depend on it).
        wall_time: Elapsed seconds; excluded from determinism comparisons.
        field_params: Field parameters, as configured.
    """

    seed: int
    step: float
    samples: int
    workers: int = 1
    wall_time: float = 0.0
    field_params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("field_params", mode="before")
    @classmethod
    def tuples_as_lists(cls, v: Any) -> Any:
        """Store monomial tuples as lists so a reloaded report compares equal."""

        def convert(value: Any) -> Any:
            if isinstance(value, (list, tuple)):
                return [convert(item) for item in value]
            if isinstance(value, dict):
                return {key: convert(item) for key, item in value.items()}
            return value

        return convert(v)


class ScanReport(ReportModel):
    """Structured record of a verification suite or an obstruction scan.

    Attributes:
        suite: Suite name, or the quantity name for scans.
        field: Field registry name.
        environment: Seed, step, sample count and timing.
        checks: Identity checks.
        extrema: Scanned extremes with witnesses.
    """

    suite: str
    field: str
    environment: Environment
    checks: List[CheckRecord] = Field(default_factory=list)
    extrema: List[ExtremumRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_checks(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]
