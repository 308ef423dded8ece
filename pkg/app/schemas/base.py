"""Base schemas with common functionality."""

from typing import Any, Dict

from pydantic import BaseModel, ConfigDict


class ReportModel(BaseModel):
    """Base for report records: populated by field name, dumped by alias."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    def model_dump_json(self, **kwargs) -> str:
        """Override to customize JSON serialization."""
        return super().model_dump_json(**{**kwargs, "by_alias": True})

    def model_dump(self, **kwargs) -> Dict[str, Any]:
        """Dump by alias so the document keys match the report format."""
        return super().model_dump(**{**kwargs, "by_alias": True})
