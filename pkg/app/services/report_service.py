"""
Report persistence and coefficient-table parsing.

Reports are written as indented JSON with every float printed to 17
significant digits, so a reloaded report compares equal to the one that was
written. Non-finite values appear as ``Infinity``/``NaN``.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import ValidationError

from app.core.exceptions import ConfigurationError, ReportError
from app.core.polynomials import Polynomial2D
from app.schemas.scan import ScanReport

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
INDENT = "  "


def format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def dump_value(value: Any, level: int = 0) -> str:
    """Serialise a report tree; floats via ``format_float``."""
    pad = INDENT * (level + 1)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_value(v, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + INDENT * level + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [pad + dump_value(v, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + INDENT * level + "]"
    raise TypeError(f"Cannot serialise {type(value).__name__} in a report")


class ReportService:
    """Reads and writes structured reports."""

    @staticmethod
    def to_json(report: ScanReport) -> str:
        return dump_value(report.model_dump(mode="python"))

    @classmethod
    def emit_report(cls, report: ScanReport, path: PathLike) -> Path:
        """
        Write a report to disk.

        Args:
            report: Report to serialise
            path: Destination file; parent directories are created

        Returns:
            Path: The written file

        Raises:
            ReportError: If the file cannot be written
        """
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(cls.to_json(report) + "\n", encoding="utf-8")
        except OSError as e:
            logger.error("Error writing report %s: %s", target, e, exc_info=True)
            raise ReportError(f"Failed to write report: {e}", path=str(target)) from e
        logger.info("Report for %s written to %s", report.suite, target)
        return target

    @classmethod
    def load_report(cls, path: PathLike) -> ScanReport:
        """
        Load and validate a report.

        Raises:
            ReportError: If the file is missing, not JSON or not a valid report
        """
        source = Path(path)
        try:
            payload = json.loads(source.read_text(encoding="utf-8"))
            return ScanReport.model_validate(payload)
        except OSError as e:
            raise ReportError(f"Failed to read report: {e}", path=str(source)) from e
        except (json.JSONDecodeError, ValidationError) as e:
            raise ReportError(f"Invalid report: {e}", path=str(source)) from e


def _parse_monomial(line: str, source: str, lineno: int) -> Tuple[int, int, float]:
    parts = line.split()
    if len(parts) != 3:
        raise ConfigurationError(
            f"{source}:{lineno}: expected 'x_deg y_deg coefficient', got '{line}'"
        )
    try:
        return int(parts[0]), int(parts[1]), float(parts[2])
    except ValueError as e:
        raise ConfigurationError(f"{source}:{lineno}: {e}") from e


def parse_fg_coeffs(path: PathLike) -> Dict[str, Polynomial2D]:
    """
    Read the polynomial pair of a ``stereo-fg`` field.

    The file has an ``f:`` section and a ``g:`` section, each followed by
    ``x_deg y_deg coefficient`` lines; ``#`` starts a comment. A missing
    section means ``f = 0`` or ``g = 1``.

    Returns:
        ``{"f": Polynomial2D, "g": Polynomial2D}``

    Raises:
        ConfigurationError: If the file is unreadable or malformed
    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read coefficient file {source}: {e}") from e

    sections: Dict[str, List[Tuple[int, int, float]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("f:", "g:"):
            current = line[0]
            if current in sections:
                raise ConfigurationError(f"{source}:{lineno}: duplicate section '{line}'")
            sections[current] = []
            continue
        if current is None:
            raise ConfigurationError(f"{source}:{lineno}: monomial outside an f:/g: section")
        x_deg, y_deg, value = _parse_monomial(line, str(source), lineno)
        if x_deg < 0 or y_deg < 0:
            raise ConfigurationError(f"{source}:{lineno}: degrees must be non-negative")
        sections[current].append((x_deg, y_deg, value))

    f = Polynomial2D.from_monomials(sections["f"]) if "f" in sections else Polynomial2D.constant(0.0)
    g = Polynomial2D.from_monomials(sections["g"]) if "g" in sections else Polynomial2D.constant(1.0)
    logger.debug("Parsed coefficient file %s: f=%s g=%s", source, f.monomials(), g.monomials())
    return {"f": f, "g": g}
