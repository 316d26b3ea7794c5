import pytest
import os
from dataclasses import dataclass

# Configure Django settings for pytest before any imports
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'settings.env.local')
os.environ.setdefault('PROJECT_ENV_ID', 'local')
os.environ.setdefault('SECRET_KEY', 'test-secret-key-for-pytest')
os.environ.setdefault('MFGS_LOG_LEVEL', 'WARNING')


@dataclass
class LabSettings:
    threads: int
    chunk: int
    runs_dir: str


@pytest.fixture
def lab_settings(settings, tmp_path) -> LabSettings:
    """
    Lab settings for one test: runs go to a temporary directory and
    nothing is stored in the database.
    Based on pytest-django's settings fixture.
    """
    settings.MFGS_RUNS_DIR = str(tmp_path / "runs")
    settings.MFGS_RECORD_RUNS = False
    return LabSettings(
        threads=settings.MFGS_THREADS,
        chunk=settings.MFGS_MC_CHUNK,
        runs_dir=settings.MFGS_RUNS_DIR,
    )


@pytest.fixture
def record_runs(lab_settings: LabSettings, settings):
    """
    Temporarily stores every run in the database as well.
    Based on the lab_settings fixture.
    """
    settings.MFGS_RECORD_RUNS = True

    # Everything before yield = setup
    yield lab_settings

    # Everything after yield = teardown
    settings.MFGS_RECORD_RUNS = False
