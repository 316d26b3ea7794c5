"""
Pytest fixtures for the cli app.
"""

from pathlib import Path

import pytest

from apps.cli.tests.tools import ModelFileBuilder, RunBuilder


LAMBDA_C_P4: float = 32.0 / 27.0


@pytest.fixture
def model_builder(tmp_path: Path) -> ModelFileBuilder:
    """Provide a ModelFileBuilder instance."""
    return ModelFileBuilder(directory=tmp_path)


@pytest.fixture
def run_builder(lab_settings, tmp_path: Path) -> RunBuilder:
    """Provide a RunBuilder instance writing under a temporary directory."""
    return RunBuilder(out=tmp_path / "out")


@pytest.fixture
def cw_file(model_builder: ModelFileBuilder) -> Path:
    """Curie-Weiss lambda = 0.5 model file."""
    return model_builder.build()


@pytest.fixture
def p4_file(model_builder: ModelFileBuilder) -> Path:
    """Four-body model file at its critical field."""
    return model_builder.with_p_body(4).with_field(LAMBDA_C_P4).build()


@pytest.fixture
def spin_one_file(tmp_path: Path) -> Path:
    """Spin-1 model file in YAML."""
    path = tmp_path / "spin1.yaml"
    path.write_text(
        "name: spin1\n"
        "kernel:\n"
        "  spin_s:\n"
        "    s: 1\n"
        "    lambda: 1.0\n"
        "interaction:\n"
        "  p_body:\n"
        "    p: 2\n"
        "    coefficient: 0.5\n"
    )
    return path
