"""
HySim Inpainting Configuration
Pydantic models for the measure, exemplar engine, diffusion baseline and bench grid,
loaded from config/*.yaml with environment overrides.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator

logger = logging.getLogger(__name__)

MeasureFamily = Literal["ssd", "minkowski", "chebyshev", "hysim"]
ConductanceKind = Literal["exponential", "rational"]
FixtureName = Literal["two_tone_dot", "triangle_apex", "curve_gap", "two_region_straddle"]

FIXTURE_NAMES: List[str] = ["two_tone_dot", "triangle_apex", "curve_gap", "two_region_straddle"]

# Normaliser for the data term.
INTENSITY_MAX = 255.0


class MeasureConfig(BaseModel):
    """Distance family selector with the HySim weights."""

    model_config = {"frozen": True}

    family: MeasureFamily = "hysim"
    alpha: float = Field(default=1.0, ge=0.0)
    beta: float = Field(default=1.0, ge=0.0)
    p_exponent: float = Field(default=2.0, ge=1.0)

    @model_validator(mode="after")
    def _weights_not_both_zero(self) -> "MeasureConfig":
        if self.family == "hysim" and self.alpha == 0.0 and self.beta == 0.0:
            raise ValueError("hysim needs alpha or beta above zero")
        return self

    def label(self) -> str:
        """Short human label used in tables and logs."""
        if self.family == "hysim":
            return f"hysim(a={self.alpha:g},b={self.beta:g},P={self.p_exponent:g})"
        if self.family == "minkowski":
            return f"minkowski(P={self.p_exponent:g})"
        return self.family


class EngineConfig(BaseModel):
    """Exemplar fill-loop parameters."""

    model_config = {"frozen": True}

    patch_side: int = Field(default=9, ge=3)
    measure: MeasureConfig = Field(default_factory=MeasureConfig)
    data_term_floor: float = Field(default=1e-3, gt=0.0)
    max_iterations: Optional[int] = Field(default=None, ge=0)
    snapshot_every: int = Field(default=0, ge=0)
    threads: int = Field(default=0, ge=0)

    @field_validator("patch_side")
    @classmethod
    def _odd_side(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"patch_side must be odd, got {value}")
        return value

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1


class DiffusionConfig(BaseModel):
    """Perona-Malik baseline parameters."""

    model_config = {"frozen": True}

    kappa: float = Field(default=30.0, gt=0.0)
    step: float = Field(default=0.2, gt=0.0, le=0.25)
    max_steps: int = Field(default=5000, ge=1)
    tol: float = Field(default=1e-4, ge=0.0)
    conductance: ConductanceKind = "exponential"


class BenchConfig(BaseModel):
    """Fixture x measure grid for the benchmark sweep."""

    size: int = Field(default=64, ge=32)
    fixtures: List[FixtureName] = Field(default_factory=lambda: list(FIXTURE_NAMES))
    measures: List[MeasureConfig] = Field(
        default_factory=lambda: [
            MeasureConfig(family="ssd"),
            MeasureConfig(family="chebyshev"),
            MeasureConfig(family="minkowski", p_exponent=2.0),
        ]
        + [MeasureConfig(family="hysim", alpha=1.0, beta=1.0, p_exponent=float(p)) for p in (1, 2, 3, 4)]
    )
    with_diffusion: bool = False


def config_dir() -> Path:
    """Directory holding the YAML defaults (HYSIM_CONFIG_DIR or <repo>/config)."""
    load_dotenv()
    override = os.getenv("HYSIM_CONFIG_DIR")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent.parent / "config"


def _load_yaml(name: str, directory: Optional[Path] = None) -> Dict[str, Any]:
    path = (directory or config_dir()) / name
    if not path.exists():
        logger.warning(f"Config file not found at {path}. Using default configurations.")
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"Error loading config {path}: {e}")
        return {}


def load_engine_defaults(directory: Optional[Path] = None) -> Dict[str, Any]:
    """Return {"engine": EngineConfig, "diffusion": DiffusionConfig} from engine.yaml."""
    raw = _load_yaml("engine.yaml", directory)
    engine_raw = dict(raw.get("engine") or {})
    engine_raw["measure"] = MeasureConfig(**(raw.get("measure") or {}))

    threads_env = os.getenv("HYSIM_THREADS")
    if threads_env is not None:
        try:
            engine_raw["threads"] = int(threads_env)
        except ValueError:
            logger.warning(f"Ignoring non-integer HYSIM_THREADS={threads_env!r}")

    return {
        "engine": EngineConfig(**engine_raw),
        "diffusion": DiffusionConfig(**(raw.get("diffusion") or {})),
    }


def load_bench_config(directory: Optional[Path] = None) -> BenchConfig:
    raw = _load_yaml("bench.yaml", directory)
    return BenchConfig(**(raw.get("bench") or {}))
