"""Shared fixtures: memoized groups and enumerations for the whole session."""

from __future__ import annotations

import pytest

from schurkit.enumeration import enumerate_srings
from schurkit.groups import make_group

_GROUPS: dict[tuple[int, ...], object] = {}


def shared_group(*factors: int):
    """One AbelianGroup object per factor list, so per-group caches are shared."""
    key = tuple(factors)
    if key not in _GROUPS:
        _GROUPS[key] = make_group(list(key))
    return _GROUPS[key]


def shared_enumeration(*factors: int):
    return enumerate_srings(shared_group(*factors))


@pytest.fixture
def group():
    return shared_group


@pytest.fixture
def enumeration():
    return shared_enumeration
