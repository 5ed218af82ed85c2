"""Shared fixtures: the shipped fixture documents, parsed once per session."""
import os

import pytest

from linfty import fixtures_io

HERE = os.path.dirname(__file__)
FIXDIR = os.path.join(HERE, "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXDIR, name)


@pytest.fixture(scope="session")
def core():
    return fixtures_io.load_document(fixture_path("core.json"))


@pytest.fixture(scope="session")
def perturbations():
    return fixtures_io.load_document(fixture_path("perturbations.json"))
