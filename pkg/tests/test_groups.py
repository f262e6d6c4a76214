import json

import numpy as np
import pytest

from cchain.groups import (CapExceeded, GroupError, build_affine, build_cyclic, build_dihedral,
                           build_family, build_gl2, build_heisenberg, build_psl2_char2,
                           dump_cayley_json, from_table, load_cayley_json, validate_table)
from cchain.structure import analyze_structure

from conftest import FIXTURES


def label_index(g, label):
    return g.labels.index(label)


def test_dihedral_order_and_relations():
    g = build_dihedral(3)
    assert g.n == 6
    s = label_index(g, "s")
    r = label_index(g, "r")
    assert g.mul[s, s] == 0
    assert g.mul[g.mul[r, r], r] == 0
    sr = g.mul[s, r]
    assert g.mul[sr, sr] == 0
    assert g.labels == ("1", "r", "r^2", "s", "sr", "sr^2")


def test_dihedral_rejects_small_n():
    with pytest.raises(GroupError):
        build_dihedral(2)


def test_heisenberg_central_element_shifts_c():
    g = build_heisenberg(3)
    assert g.n == 27
    z = label_index(g, "(0,0,1)")
    for x in range(g.n):
        a, b, c = eval(g.labels[x])
        assert g.labels[g.mul[z, x]] == f"({a},{b},{(c + 1) % 3})"
        assert g.mul[z, x] == g.mul[x, z]


@pytest.mark.parametrize("p", [1, 2, 4, 9])
def test_heisenberg_rejects_bad_p(p):
    with pytest.raises(GroupError):
        build_heisenberg(p)


def test_affine_order_and_identity():
    g = build_affine(5)
    assert g.n == 20 and g.labels[0] == "(1,0)"
    with pytest.raises(GroupError):
        build_affine(6)


def test_gl2_and_psl2_orders():
    assert build_gl2(3).n == 48
    assert build_gl2(9, max_order=6000).n == (81 - 1) * (81 - 9)
    assert build_psl2_char2(2).n == 60
    assert build_psl2_char2(3).n == 504
    with pytest.raises(GroupError):
        build_gl2(4)
    with pytest.raises(GroupError):
        build_psl2_char2(1)


def test_order_cap():
    with pytest.raises(CapExceeded):
        build_gl2(7, max_order=1000)
    with pytest.raises(CapExceeded):
        build_family("heisenberg", 23)


def test_cyclic():
    assert build_cyclic(1).n == 1
    g = build_cyclic(4)
    assert g.is_abelian()


@pytest.mark.parametrize("family,param", [("dihedral", 7), ("heisenberg", 5), ("affine", 7),
                                          ("gl2", 3), ("psl2_2k", 2), ("cyclic", 6)])
def test_built_tables_are_groups(family, param):
    g = build_family(family, param)
    validate_table(g.mul)
    assert (g.mul[np.arange(g.n), g.inv] == 0).all()


def test_validate_rejects_non_group():
    bad = np.array([[0, 1, 2], [1, 1, 0], [2, 0, 1]])
    with pytest.raises(GroupError):
        validate_table(bad)
    # a Latin square with identity that is not associative
    loop = np.array([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3],
                     [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    with pytest.raises(GroupError):
        validate_table(loop)


def test_from_table_relabels_identity_to_zero():
    # Z/3 with the identity stored at index 2
    mul = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    g = from_table(mul, ["a", "b", "e"])
    assert g.labels[0] == "e"
    validate_table(g.mul)


def test_cayley_json_round_trip(tmp_path):
    g = build_dihedral(4)
    path = tmp_path / "d8.json"
    dump_cayley_json(g, path)
    h = load_cayley_json(path)
    assert (h.mul == g.mul).all() and h.labels == g.labels
    assert json.loads(path.read_text())["n"] == 8


def test_cayley_json_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 3, "mul": [[0, 1], [1, 0]]}))
    with pytest.raises(GroupError):
        load_cayley_json(path)
    path.write_text(json.dumps({"mul": [[0]]}))
    with pytest.raises(GroupError):
        load_cayley_json(path)


def test_s4_fixture_loads():
    g = load_cayley_json(FIXTURES / "s4.json")
    assert g.n == 24 and not g.is_abelian()
    assert analyze_structure(g).class_count == 5
