"""Shipped example models: the serverless/containerization pair comparison
(`deployment`), the 18-QA energy-sector case study (`case_study`), and reference
pair scores re-encoded as one-cell matrices (`normalization_reference`, raw-priority mode).
"""

from importlib import resources
from pathlib import Path

from ..model import AssessmentModel, load_model

NAMES = ("deployment", "case_study", "normalization_reference")


def fixture_path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(NAMES)}")
    return Path(str(resources.files(__package__).joinpath(f"{name}.json")))


def load_fixture(name: str) -> AssessmentModel:
    return load_model(fixture_path(name))
