"""Shared fixtures for the test suite."""

import pytest

from collatz_lab import IterationLimits


@pytest.fixture(scope="session")
def tight_limits() -> IterationLimits:
    # Small enough that a divergent orbit gives up in milliseconds,
    # large enough that every frozen cycle below is still found.
    return IterationLimits(max_steps=10_000, max_bits=4096)
