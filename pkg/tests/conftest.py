from functools import lru_cache
from pathlib import Path

import pytest

from cchain.chain import stationary, transition_matrix
from cchain.groups import build_family, load_cayley_json
from cchain.structure import analyze_structure

FIXTURES = Path(__file__).parent / "fixtures"

# every built group small enough for exhaustive exact checks
SMALL_GROUPS = [
    ("cyclic", 1), ("cyclic", 2), ("cyclic", 5),
    ("dihedral", 3), ("dihedral", 4), ("dihedral", 5), ("dihedral", 6), ("dihedral", 8),
    ("heisenberg", 3), ("affine", 3), ("affine", 5), ("gl2", 3), ("psl2_2k", 2),
]


@lru_cache(maxsize=None)
def built(family: str, param: int):
    """(group, structure, P, pi), cached across the session."""
    g = build_family(family, param)
    s = analyze_structure(g)
    P = transition_matrix(g, s)
    return g, s, P, stationary(g, s, P)


@lru_cache(maxsize=None)
def s4():
    g = load_cayley_json(FIXTURES / "s4.json")
    return g, analyze_structure(g)


def group_id(case):
    return f"{case[0]}-{case[1]}"


@pytest.fixture(params=SMALL_GROUPS, ids=group_id)
def small_group(request):
    return request.param, built(*request.param)
