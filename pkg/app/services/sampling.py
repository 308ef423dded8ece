"""Seeded sample materialisation.

Every draw comes from one generator and is materialised before any parallel
dispatch, so results depend on the seed only.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from app.core.sphere_geometry import Backend, random_point, random_tangent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TangentSample:
    """A base point with unit tangent directions.

    Attributes:
        index: Position in the sample list
        point: Base point
        directions: Unit tangent vectors at ``point``
    """

    index: int
    point: np.ndarray
    directions: Tuple[np.ndarray, ...]

    @property
    def x(self) -> np.ndarray:
        return self.directions[0]

    @property
    def y(self) -> np.ndarray:
        return self.directions[1]

    @property
    def z(self) -> np.ndarray:
        return self.directions[2]


class SamplingService:
    """Draws tangent samples from a seeded PCG64 generator."""

    @staticmethod
    def generator(seed: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(seed))

    @classmethod
    def draw(
        cls, backend: Backend, seed: int, count: int, directions: int = 3
    ) -> List[TangentSample]:
        """
        Materialise ``count`` samples.

        Args:
            backend: Sphere or chart to sample on
            seed: Generator seed
            count: Number of samples
            directions: Unit tangent directions per sample

        Returns:
            Samples in index order
        """
        rng = cls.generator(seed)
        samples = []
        for index in range(count):
            point = random_point(backend, rng)
            dirs = tuple(random_tangent(backend, rng, point) for _ in range(directions))
            samples.append(TangentSample(index=index, point=point, directions=dirs))
        logger.debug("Drew %d samples (seed %d)", count, seed)
        return samples
