"""Calibration scenarios shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .config import ScenarioConfig, parse_config_text

__all__ = ["FIXTURES", "fixture_text", "load_fixture", "fixture_path"]

FIXTURES = ("ua_family", "sr_family", "creep_family", "necking", "ring", "varcheck")


def _resource(name: str):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("agingmetric") / "data" / f"{name}.cfg"


def fixture_text(name: str) -> str:
    return _resource(name).read_text(encoding="utf-8")


def fixture_path(name: str) -> Path:
    """Filesystem path of a fixture (the package is installed unzipped)."""
    return Path(str(_resource(name)))


def load_fixture(name: str) -> ScenarioConfig:
    return parse_config_text(fixture_text(name))
