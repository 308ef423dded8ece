import os
from typing import Dict

from dotenv import load_dotenv

load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(f"ACS_{name}", str(default)))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(f"ACS_{name}", str(default)))


class Settings:
    PROJECT_NAME: str = os.getenv(
        "ACS_PROJECT_NAME", "Almost Complex Structure Verifier"
    )
    PROJECT_VERSION: str = "1.0.0"

    # Sampling defaults used when the CLI omits --seed / --samples
    DEFAULT_SEED: int = _env_int("DEFAULT_SEED", 20181017)
    DEFAULT_SAMPLES: int = _env_int("DEFAULT_SAMPLES", 100)

    # Finite-difference steps for the 4th-order stencil
    SPHERE_STEP: float = _env_float("SPHERE_STEP", 1e-3)
    CHART_STEP: float = _env_float("CHART_STEP", 1e-4)

    # Relative seeding tolerance for T^{0,1} bases and tangent frames
    FRAME_SEED_TOL: float = _env_float("FRAME_SEED_TOL", 1e-3)

    # Worker threads for sample evaluation; results do not depend on it
    WORKERS: int = _env_int("WORKERS", 1)

    # Witness search budget (coordinate sweeps)
    OPTIMIZE_ITERATIONS: int = _env_int("OPTIMIZE_ITERATIONS", 200)
    OPTIMIZE_INITIAL_STEP: float = _env_float("OPTIMIZE_INITIAL_STEP", 0.2)

    LOG_LEVEL: str = os.getenv("ACS_LOG_LEVEL", "INFO")

    # Named tolerances; --tol KEY=VAL overrides per run
    DEFAULT_TOLERANCES: Dict[str, float] = {
        "algebraic": 1e-10,
        "fd": 1e-6,
        "pullback": 1e-5,
        "bracket": 1e-5,
        "lemma54": 1e-9,
        "example24": 1e-9,
        "prop512": 1e-6,
        "cor47": 1e-6,
        "dbar": 1e-5,
        "dbar_normal": 1e-6,
        "criterion": 1e-8,
        "baseline": 1e-9,
        "witness": 1e-3,
        "grassmann": 1e-12,
        "remark42": 1e-9,
        "basis": 1e-8,
        "homogeneity": 1e-8,
        "qform": 1e-8,
        "taming": 1e-12,
        "eta_nu": 1e-8,
    }


settings = Settings()
