"""Services package initialization."""

from app.services.report_service import ReportService
from app.services.sampling import SamplingService
from app.services.scan_service import ScanService
from app.services.suite_service import SuiteService
from app.services.task_executor import TaskExecutorService

__all__ = [
    "ReportService",
    "SamplingService",
    "ScanService",
    "SuiteService",
    "TaskExecutorService",
]
