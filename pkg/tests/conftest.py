"""Shared fixtures: a session-wide eigenvalue cache so expensive solves are
paid once per run, plus convenience solvers."""

import os
from pathlib import Path

import pytest

from nodal_billiards.cache import EigenCache, solve_cached

# keep tests hermetic: never touch a user-level cache
os.environ.pop("BILLIARD_CACHE", None)

_PERSISTENT = Path(__file__).resolve().parent / ".eigen-cache.jsonl"


@pytest.fixture(scope="session")
def eigen_cache():
    """Session cache, persisted next to the tests so repeat runs are warm."""
    return EigenCache(_PERSISTENT)


@pytest.fixture(scope="session")
def solver(eigen_cache):
    def _solve(spec, qnums, clazz=None):
        state, _ = solve_cached(eigen_cache, spec, qnums, clazz)
        return state
    return _solve
