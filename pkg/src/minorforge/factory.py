"""
Factory functions for creating ExperimentManager instances.

This module wires storage, repository and runner together.
"""

import logging

from .manager import ExperimentManager
from .parser import GraphParser
from .repository import ResultRepository
from .runner import TrialRunner
from .storage import Storage


def _create_dependencies(
    base_dir: str, parallel: int, progress: bool
) -> tuple[Storage, ResultRepository, TrialRunner]:
    """Create shared dependencies for ExperimentManager."""
    storage = Storage(base_dir)
    repository = ResultRepository(storage, GraphParser())
    runner = TrialRunner(parallel=parallel, progress=progress)
    return storage, repository, runner


def create_manager(
    base_dir: str = ".", parallel: int = 1, progress: bool = True
) -> ExperimentManager:
    """Create an ExperimentManager writing below ``base_dir``."""
    logger = logging.getLogger(__name__)
    _storage, repository, runner = _create_dependencies(
        base_dir, parallel, progress
    )
    logger.debug(
        "Created ExperimentManager (base_dir=%s, parallel=%d)",
        base_dir,
        runner.parallel,
    )
    return ExperimentManager(repository, runner)
