"""Unit tests for task_executor.py."""

import threading
from unittest.mock import patch

import pytest

from app.core.exceptions import DomainError, ServiceError
from app.services.task_executor import TaskExecutorService


class TestTaskExecutorService:
    """Test cases for TaskExecutorService."""

    @patch("app.services.task_executor.logger")
    def test_timed_records_wall_time(self, mock_logger):
        """Test timed context manager fills in the wall time on exit."""
        with TaskExecutorService.timed("validate") as timing:
            assert timing["wall_time"] == 0.0
        assert timing["wall_time"] >= 0.0
        assert mock_logger.info.call_args_list[0][0] == ("Starting %s", "validate")
        assert mock_logger.info.call_args_list[1][0][0] == "Finished %s in %.2fs"

    def test_timed_records_on_error(self):
        with pytest.raises(RuntimeError):
            with TaskExecutorService.timed("broken") as timing:
                raise RuntimeError("boom")
        assert timing["wall_time"] >= 0.0

    def test_map_samples_inline(self):
        assert TaskExecutorService.map_samples(lambda s: s * s, [1, 2, 3]) == [1, 4, 9]

    def test_map_samples_empty(self):
        assert TaskExecutorService.map_samples(lambda s: s, [], workers=4) == []

    def test_map_samples_threads_keep_order(self):
        """Results come back in sample order whatever the thread count."""
        seen = set()

        def work(sample):
            seen.add(threading.get_ident())
            return sample + 1

        samples = list(range(50))
        assert TaskExecutorService.map_samples(work, samples, workers=4) == [s + 1 for s in samples]
        assert TaskExecutorService.map_samples(work, samples, workers=1) == [s + 1 for s in samples]

    @patch("app.services.task_executor.logger")
    def test_app_error_is_wrapped(self, mock_logger):
        """Test that a geometry error becomes a ServiceError naming the sample."""

        def work(sample):
            if sample == 2:
                raise DomainError("outside chart")
            return sample

        with pytest.raises(ServiceError, match="thm44 failed on sample 2: outside chart") as exc_info:
            TaskExecutorService.map_samples(work, [0, 1, 2, 3], operation_name="thm44")
        assert isinstance(exc_info.value.__cause__, DomainError)

        mock_logger.error.assert_called_once()
        args = mock_logger.error.call_args[0]
        assert args[0] == "Error during %s on sample %d: %s"
        assert args[1:] == ("thm44", 2, "outside chart")

    @patch("app.services.task_executor.logger")
    def test_unexpected_error_is_wrapped(self, mock_logger):
        def work(sample):
            raise ZeroDivisionError("division by zero")

        with pytest.raises(ServiceError, match="failed on sample 0"):
            TaskExecutorService.map_samples(work, [5], workers=2)

        args = mock_logger.error.call_args[0]
        assert args[0] == "Unexpected error during %s on sample %d: %s"
        assert mock_logger.error.call_args[1]["exc_info"] is True

    def test_service_error_passes_through(self):
        """Test that a ServiceError is re-raised unchanged."""

        def work(sample):
            raise ServiceError("Business error")

        with pytest.raises(ServiceError, match="^Business error$"):
            TaskExecutorService.map_samples(work, [1])
