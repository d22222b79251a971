"""Session-scoped caches for the expensive free-field constructions."""

import pytest

_CURRENTS = {}
_WGENS = {}


@pytest.fixture(scope="session")
def current_family():
    """Getter for the (cached) current family of a lattice (case, p, j)."""
    from nicholsw.freefield import build_currents, solve_momenta

    def get(case, p, j):
        key = (case, p, j)
        if key not in _CURRENTS:
            _CURRENTS[key] = build_currents(solve_momenta(case, p, j))
        return _CURRENTS[key]

    return get


@pytest.fixture(scope="session")
def w_family(current_family):
    """Getter for the (cached) W-generator triplet of a lattice (case, p, j)."""
    from nicholsw.freefield import w_generators

    def get(case, p, j):
        key = (case, p, j)
        if key not in _WGENS:
            _WGENS[key] = w_generators(current_family(case, p, j))
        return _WGENS[key]

    return get
