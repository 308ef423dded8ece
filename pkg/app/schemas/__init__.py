"""Pydantic schemas for run configuration and reports."""

from .scan import (  # noqa: F401
    CheckRecord,
    Environment,
    ExtremumRecord,
    ScanConfig,
    ScanReport,
    Witness,
)
