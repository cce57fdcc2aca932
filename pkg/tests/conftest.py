"""Shared fixtures: corpus entries and derived pipeline stages, cached per session."""

import pytest

from weylkit import corpus
from weylkit.reconstruct import derive_weyl_actions, diamond_action


@pytest.fixture(scope="session")
def entry():
    """Cached corpus lookup: entry('q8') etc."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus.by_name(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def derived(entry):
    """Cached Weyl-derived ActionPackage per corpus name (with that entry's cocycle)."""
    cache = {}

    def get(name):
        if name not in cache:
            e = entry(name)
            cache[name] = derive_weyl_actions(e.G, e.S, e.omega)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def diamond(derived):
    """Cached DiamondData per trivial-cocycle corpus name."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = diamond_action(derived(name))
        return cache[name]

    return get
