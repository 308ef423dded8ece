"""
Service responsible for evaluating per-sample work.
Handles thread dispatch, ordering of results and error wrapping.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Dict, Generator, List, Sequence, TypeVar

from app.core.exceptions import AppError, ServiceError

logger = logging.getLogger(__name__)
S = TypeVar("S")
T = TypeVar("T")


class TaskExecutorService:
    """
    Service responsible for running per-sample operations.
    Results are returned in sample order regardless of the thread count.
    """

    @classmethod
    @contextmanager
    def timed(cls, operation_name: str) -> Generator[Dict[str, float], None, None]:
        """Context manager recording the wall time of an operation."""
        timing = {"wall_time": 0.0}
        start = time.perf_counter()
        logger.info("Starting %s", operation_name)
        try:
            yield timing
        finally:
            timing["wall_time"] = time.perf_counter() - start
            logger.info("Finished %s in %.2fs", operation_name, timing["wall_time"])

    @classmethod
    def _run_one(cls, operation_name: str, func: Callable[[S], T], index: int, sample: S) -> T:
        try:
            return func(sample)
        except ServiceError:
            raise
        except AppError as exc:
            logger.error(
                "Error during %s on sample %d: %s", operation_name, index, str(exc)
            )
            raise ServiceError(
                f"{operation_name} failed on sample {index}: {str(exc)}"
            ) from exc
        except Exception as exc:
            logger.error(
                "Unexpected error during %s on sample %d: %s",
                operation_name,
                index,
                str(exc),
                exc_info=True,
            )
            raise ServiceError(
                f"{operation_name} failed on sample {index}: {str(exc)}"
            ) from exc

    @classmethod
    def map_samples(
        cls,
        func: Callable[[S], T],
        samples: Sequence[S],
        workers: int = 1,
        operation_name: str = "sample evaluation",
    ) -> List[T]:
        """
        Evaluate ``func`` on every sample.

        Args:
            func: Pure per-sample operation
            samples: Pre-materialised samples
            workers: Thread count; 1 evaluates inline
            operation_name: Human-readable name for the operation (for logging)

        Returns:
            Results in sample order

        Raises:
            ServiceError: If any sample fails; the first failing index is reported
        """
        if workers <= 1:
            return [cls._run_one(operation_name, func, i, s) for i, s in enumerate(samples)]

        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(cls._run_one, operation_name, func, i, s)
                for i, s in enumerate(samples)
            ]
            return [future.result() for future in futures]
