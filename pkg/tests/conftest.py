"""Pytest configuration and fixtures for testing."""

from typing import Callable, Dict, List

import numpy as np
import pytest

from app.core.acs_fields import AcsField, build_field
from app.core.config import settings
from app.core.polynomials import Polynomial2D
from app.core.sphere_geometry import random_point, random_tangent
from app.schemas.scan import ScanConfig


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    """A fresh seeded generator for each test."""
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture(scope="session")
def octonionic() -> AcsField:
    return build_field("octonionic-s6")


@pytest.fixture(scope="session")
def standard_s2() -> AcsField:
    return build_field("standard-s2")


@pytest.fixture(scope="session")
def planar() -> AcsField:
    """The non-strongly-integrable planar field on the flat plane."""
    return build_field("example-2-4")


@pytest.fixture(scope="session")
def conjugated() -> AcsField:
    return build_field("conjugated-s6")


@pytest.fixture(scope="session")
def stereo_fg() -> Callable[..., AcsField]:
    """Factory for chart fields given as monomial lists."""

    def make(f=None, g=None) -> AcsField:
        f_poly = Polynomial2D.from_monomials(f) if f else Polynomial2D.constant(0.0)
        g_poly = Polynomial2D.from_monomials(g) if g else Polynomial2D.constant(1.0)
        return build_field("stereo-fg", f=f_poly, g=g_poly)

    return make


@pytest.fixture(scope="function")
def tangent_samples(rng: np.random.Generator) -> Callable[[AcsField, int], List]:
    """Draw ``(p, X, Y)`` triples on the backend of a field."""

    def draw(acs: AcsField, count: int = 5) -> List:
        samples = []
        for _ in range(count):
            p = random_point(acs.backend, rng)
            samples.append((p, random_tangent(acs.backend, rng, p), random_tangent(acs.backend, rng, p)))
        return samples

    return draw


@pytest.fixture(scope="function")
def make_config() -> Callable[..., ScanConfig]:
    """Build a ScanConfig with test-sized defaults."""

    def make(**overrides) -> ScanConfig:
        values: Dict = {
            "command": "verify",
            "field": "octonionic-s6",
            "suite": "validate",
            "samples": 3,
            "seed": 7,
            "tolerances": dict(settings.DEFAULT_TOLERANCES),
        }
        values.update(overrides)
        return ScanConfig(**values)

    return make
