"""Finite groups as dense Cayley tables.

Every table indexes its elements ``0..n-1`` with the identity at index 0.
Family constructors enumerate elements lexicographically on their natural
parameter tuples (identity moved to the front where it is not already
first), so the tables and everything derived from them are reproducible.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fields import FieldSpec, field_make, field_tables, is_prime, prime_power

DEFAULT_MAX_ORDER = 6000


class GroupError(ValueError):
    """Invalid parameters or an invalid Cayley table."""


class CapExceeded(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class GroupTable:
    n: int
    mul: np.ndarray  # (n, n) element indices
    inv: np.ndarray  # (n,)
    labels: tuple[str, ...]
    family_tag: dict = field(default_factory=dict)
    identity: int = 0

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    @property
    def name(self) -> str:
        fam = self.family_tag.get("family", "group")
        params = {k: v for k, v in self.family_tag.items() if k != "family"}
        inner = ",".join(f"{k}={v}" for k, v in params.items())
        return f"{fam}({inner})" if inner else fam

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def to_json(self) -> dict:
        return {"n": self.n, "mul": self.mul.tolist(), "labels": list(self.labels)}


def _check_order(n: int, max_order: int) -> None:
    if n > max_order:
        raise CapExceeded(f"group order {n} exceeds cap {max_order}")


def _inverse_vector(mul: np.ndarray) -> np.ndarray:
    n = mul.shape[0]
    rows, cols = np.nonzero(mul == 0)
    if len(rows) != n or not np.array_equal(rows, np.arange(n)):
        raise GroupError("table has no unique inverses")
    return cols.astype(mul.dtype)


def validate_table(mul: np.ndarray, *, exhaustive_limit: int = 200,
                   samples: int = 100_000, seed: int = 0) -> None:
    """Raise GroupError unless ``mul`` is a group table with identity 0.

    Associativity is checked on all triples for n <= exhaustive_limit and on
    ``samples`` random triples otherwise.
    """
    mul = np.asarray(mul)
    n = mul.shape[0]
    if mul.shape != (n, n):
        raise GroupError("table must be square")
    if mul.min() < 0 or mul.max() >= n:
        raise GroupError("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
        raise GroupError("index 0 is not the identity")
    sorted_rows = np.sort(mul, axis=1)
    if not (sorted_rows == ar).all() or not (np.sort(mul, axis=0) == ar[:, None]).all():
        raise GroupError("table is not a Latin square")
    if n <= exhaustive_limit:
        for a in range(n):
            left = mul[mul[a]]           # (a*b)*c indexed [b, c]
            right = mul[a][mul]          # a*(b*c) indexed [b, c]
            if not np.array_equal(left, right):
                raise GroupError("table is not associative")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
            raise GroupError("table is not associative")


def from_elements(elements: list, product, identity, labels=None, *,
                  family_tag=None, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    """Tabulate ``product`` over hashable ``elements``; ``identity`` goes first."""
    elements = [identity] + [e for e in elements if e != identity]
    n = len(elements)
    _check_order(n, max_order)
    index = {e: i for i, e in enumerate(elements)}
    mul = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elements):
        mul[i] = [index[product(a, b)] for b in elements]
    if labels is None:
        labels = [str(e) for e in elements]
    else:
        labels = [labels(e) for e in elements]
    return GroupTable(n, mul, _inverse_vector(mul), tuple(labels), dict(family_tag or {}))


def from_table(mul, labels=None, *, family_tag=None, validate=True,
               max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    """Wrap a raw Cayley table, relabelling so that the identity is index 0."""
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    _check_order(n, max_order)
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar)]
    if len(ids) != 1:
        raise GroupError("table has no two-sided identity")
    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n:
        raise GroupError("labels length does not match n")
    e = ids[0]
    if e != 0:
        perm = np.array([e] + [i for i in range(n) if i != e])
        pos = np.empty(n, dtype=np.int64)
        pos[perm] = ar
        mul = pos[mul[np.ix_(perm, perm)]]
        labels = [labels[i] for i in perm]
    mul = mul.astype(np.int32)
    if validate:
        validate_table(mul)
    return GroupTable(n, mul, _inverse_vector(mul), tuple(labels),
                      dict(family_tag or {"family": "cayley"}))


def load_cayley_json(path, **kw) -> GroupTable:
    data = json.loads(Path(path).read_text())
    if "n" not in data or "mul" not in data:
        raise GroupError("Cayley JSON needs 'n' and 'mul'")
    mul = data["mul"]
    if len(mul) != data["n"]:
        raise GroupError("'n' disagrees with table size")
    tag = {"family": "cayley-file", "source": Path(path).name}
    return from_table(mul, data.get("labels"), family_tag=tag, **kw)


def dump_cayley_json(g: GroupTable, path) -> None:
    Path(path).write_text(json.dumps(g.to_json()))


# -- families -----------------------------------------------------------------

def build_cyclic(n: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    _check_order(n, max_order)
    ar = np.arange(n)
    mul = ((ar[:, None] + ar[None, :]) % n).astype(np.int32)
    return GroupTable(n, mul, _inverse_vector(mul), tuple(str(i) for i in range(n)),
                      {"family": "cyclic", "n": n})


def _dihedral_label(e) -> str:
    f, i = e
    rot = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
    if f == 0:
        return rot or "1"
    return "s" + rot


def build_dihedral(n: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    """D_2n = <r, s | r^n = s^2 = (sr)^2 = 1>; element (f, i) is s^f r^i."""
    if n < 3:
        raise GroupError("dihedral group needs n >= 3")
    _check_order(2 * n, max_order)
    elems = [(f, i) for f in (0, 1) for i in range(n)]

    def product(a, b):
        # r^i s = s r^-i
        (f1, i1), (f2, i2) = a, b
        return ((f1 + f2) % 2, ((-i1 if f2 else i1) + i2) % n)

    return from_elements(elems, product, (0, 0), _dihedral_label,
                         family_tag={"family": "dihedral", "n": n}, max_order=max_order)


def build_heisenberg(p: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    """Upper unitriangular 3x3 matrices over Z/p, written (a, b, c)."""
    if p == 2 or not is_prime(p):
        raise GroupError("Heisenberg group needs an odd prime p")
    _check_order(p**3, max_order)
    elems = list(itertools.product(range(p), repeat=3))

    def product(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    return from_elements(elems, product, (0, 0, 0), lambda e: "({},{},{})".format(*e),
                         family_tag={"family": "heisenberg", "p": p}, max_order=max_order)


def build_affine(p: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    """Affine maps v -> a v + b over Z/p, written (a, b) with a != 0."""
    if p < 3 or not is_prime(p):
        raise GroupError("affine group needs a prime p >= 3")
    _check_order(p * (p - 1), max_order)
    elems = [(a, b) for a in range(1, p) for b in range(p)]

    def product(x, y):
        return (x[0] * y[0] % p, (x[0] * y[1] + x[1]) % p)

    return from_elements(elems, product, (1, 0), lambda e: "({},{})".format(*e),
                         family_tag={"family": "affine", "p": p}, max_order=max_order)


def _matrix_group(F: FieldSpec, det_ok, family_tag, max_order) -> GroupTable:
    """2x2 matrices over F with determinant accepted by ``det_ok``.

    Products are computed on whole rows of the table at once through the
    field's code tables.
    """
    add, fmul, _ = field_tables(F)
    q = F.q
    quads = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
    a, b, c, d = quads.T
    det = add[fmul[a, d], _neg_codes(F)[fmul[b, c]]]
    keep = det_ok(det)
    quads = quads[keep]
    ident = np.array([1, 0, 0, 1])
    is_id = (quads == ident).all(axis=1)
    quads = np.concatenate([quads[is_id], quads[~is_id]])
    n = len(quads)
    _check_order(n, max_order)
    codes = ((quads[:, 0] * q + quads[:, 1]) * q + quads[:, 2]) * q + quads[:, 3]
    lookup = np.full(q**4, -1, dtype=np.int64)
    lookup[codes] = np.arange(n)
    A, B, C, D = (quads[:, i] for i in range(4))
    mul = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        a1, b1, c1, d1 = quads[i]
        e = add[fmul[a1, A], fmul[b1, C]]
        f = add[fmul[a1, B], fmul[b1, D]]
        g = add[fmul[c1, A], fmul[d1, C]]
        h = add[fmul[c1, B], fmul[d1, D]]
        mul[i] = lookup[((e * q + f) * q + g) * q + h]
    labels = tuple("[[{},{}],[{},{}]]".format(*row) for row in quads.tolist())
    return GroupTable(n, mul, _inverse_vector(mul), labels, family_tag)


def _neg_codes(F: FieldSpec) -> np.ndarray:
    add, _, _ = field_tables(F)
    return np.argmax(add == 0, axis=1)


def _field_for(q: int) -> FieldSpec:
    pk = prime_power(q)
    if pk is None:
        raise GroupError(f"q={q} is not a prime power")
    return field_make(*pk)


def build_gl2(q: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    pk = prime_power(q)
    if pk is None or pk[0] == 2:
        raise GroupError("GL(2,q) needs q a power of an odd prime")
    _check_order((q * q - 1) * (q * q - q), max_order)
    return _matrix_group(_field_for(q), lambda det: det != 0,
                         {"family": "gl2", "q": q}, max_order)


def build_psl2_char2(k: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    """PSL(2, 2^k), realised as SL(2, 2^k).

    In characteristic 2 the only scalar matrix of determinant 1 is the
    identity, so PSL(2, 2^k) and SL(2, 2^k) coincide.
    """
    if k < 2:
        raise GroupError("PSL(2,2^k) needs k >= 2")
    q = 2**k
    _check_order(q * (q * q - 1), max_order)
    return _matrix_group(_field_for(q), lambda det: det == 1,
                         {"family": "psl2_2k", "k": k}, max_order)


FAMILIES = {
    "dihedral": (build_dihedral, "n"),
    "heisenberg": (build_heisenberg, "p"),
    "affine": (build_affine, "p"),
    "gl2": (build_gl2, "q"),
    "psl2_2k": (build_psl2_char2, "k"),
    "cyclic": (build_cyclic, "n"),
}


def build_family(family: str, param: int, *, max_order=DEFAULT_MAX_ORDER) -> GroupTable:
    try:
        builder, _ = FAMILIES[family]
    except KeyError:
        raise GroupError(f"unknown family {family!r}") from None
    return builder(param, max_order=max_order)
