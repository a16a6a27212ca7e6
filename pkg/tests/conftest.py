"""Shared fixtures for the nckit test suite."""

import random
from collections.abc import Callable
from pathlib import Path

import pytest

from nckit.core.kripke import Frame, Model
from nckit.utils.model_io import load_frame, load_model


REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"
PROOFS_DIR = REPO_ROOT / "proofs"


@pytest.fixture()
def fixtures_dir() -> Path:
    """Directory holding the shipped model and frame files."""
    return FIXTURES_DIR


@pytest.fixture()
def proofs_dir() -> Path:
    """Directory holding the shipped proof scripts."""
    return PROOFS_DIR


@pytest.fixture()
def model() -> Callable[[str], Model]:
    """Loader for shipped models by file stem."""

    def load(name: str) -> Model:
        return load_model(FIXTURES_DIR / f"{name}.json")

    return load


@pytest.fixture()
def frame() -> Callable[[str], Frame]:
    """Loader for shipped frames by file stem."""

    def load(name: str) -> Frame:
        return load_frame(FIXTURES_DIR / f"{name}.json")

    return load


@pytest.fixture()
def rng() -> random.Random:
    """Seeded generator so random suites are reproducible."""
    return random.Random(20240611)
