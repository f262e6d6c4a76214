"""Commuting structure of a finite group: center, centralizers, conjugacy
classes, and the CA signature."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .groups import GroupTable


@dataclass(frozen=True)
class CASignature:
    z: int
    distinct_centralizers: tuple[tuple[int, int], ...]  # (size, count), size ascending
    j: int
    c_star: int
    c_prime: int

    @property
    def sizes(self) -> list[int]:
        """Centralizer sizes with repetition, ascending."""
        return [c for c, m in self.distinct_centralizers for _ in range(m)]

    @property
    def order(self) -> int:
        return self.z + sum((c - self.z) * m for c, m in self.distinct_centralizers)


@dataclass(frozen=True, eq=False)
class GroupStructure:
    n: int
    center: tuple[int, ...]
    centralizers: tuple[np.ndarray, ...]
    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray
    commute: np.ndarray  # (n, n) bool
    is_ca: bool
    signature: CASignature | None
    blocks: tuple[np.ndarray, ...]  # distinct non-central centralizers, signature order
    c_star: int | None  # max |C_x| over x outside Z; None for abelian groups

    @property
    def z(self) -> int:
        return len(self.center)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def is_abelian(self) -> bool:
        return self.z == self.n

    @property
    def centralizer_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.centralizers])

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([len(self.classes[k]) for k in self.class_of])

    def representatives(self) -> list[int]:
        return [cls[0] for cls in self.classes]

    def census(self) -> list[tuple[int, int]]:
        """(size, count) over distinct non-central centralizers."""
        return list(self.signature.distinct_centralizers) if self.signature else []


def analyze_structure(g: GroupTable) -> GroupStructure:
    n = g.n
    mul = g.mul
    commute = mul == mul.T
    centralizers = tuple(np.flatnonzero(commute[x]) for x in range(n))
    center = tuple(int(x) for x in np.flatnonzero(commute.all(axis=1)))

    # x^G as the orbit {g x g^-1}; column x of the conjugation table
    class_of = np.full(n, -1, dtype=np.int64)
    classes = []
    inv = g.inv
    for x in range(n):
        if class_of[x] >= 0:
            continue
        orbit = np.unique(mul[mul[:, x], inv])
        class_of[orbit] = len(classes)
        classes.append(tuple(int(v) for v in orbit))

    central = np.zeros(n, dtype=bool)
    central[list(center)] = True
    seen: dict[bytes, int] = {}
    blocks = []
    for x in np.flatnonzero(~central):
        key = commute[x].tobytes()
        if key not in seen:
            seen[key] = len(blocks)
            blocks.append(centralizers[x])

    abelian = len(center) == n
    is_ca = all(commute[np.ix_(c, c)].all() for c in blocks)
    c_star = max((len(c) for c in blocks), default=None)
    signature = None
    if is_ca and not abelian:
        # stable order: by size, then by smallest element
        blocks.sort(key=lambda c: (len(c), int(c[~central[c]][0])))
        counts = Counter(len(c) for c in blocks)
        signature = CASignature(
            z=len(center),
            distinct_centralizers=tuple(sorted(counts.items())),
            j=len(blocks),
            c_star=max(counts),
            c_prime=min(counts),
        )
    commute.setflags(write=False)
    class_of.setflags(write=False)
    return GroupStructure(
        n=n, center=center, centralizers=centralizers, classes=tuple(classes),
        class_of=class_of, commute=commute, is_ca=is_ca, signature=signature,
        blocks=tuple(blocks), c_star=c_star,
    )


def verify_census(structure: GroupStructure, expected) -> bool:
    """Compare the distinct-centralizer census with ``expected`` (size, count)
    pairs; entries sharing a size are merged before comparing."""
    want = Counter()
    for size, count in expected:
        want[size] += count
    have = Counter(dict(structure.census()))
    return +want == +have


def ca_state_order(structure: GroupStructure) -> np.ndarray:
    """Center first, then each distinct centralizer's non-central part in
    signature order.  This is the state order of :func:`synthetic_ca_chain`."""
    if structure.signature is None:
        raise ValueError("state order only defined for non-abelian CA groups")
    center = set(structure.center)
    order = list(structure.center)
    for block in structure.blocks:
        order.extend(int(x) for x in block if int(x) not in center)
    return np.array(order)


def expected_census(family: str, param: int) -> list[tuple[int, int]] | None:
    """Distinct-centralizer census the closed-form group descriptions give."""
    if family == "heisenberg":
        p = param
        return [(p * p, p + 1)]
    if family == "affine":
        p = param
        return [(p - 1, p), (p, 1)]
    if family == "gl2":
        q = param
        return [((q - 1) ** 2, q * (q + 1) // 2), (q * q - 1, q * (q - 1) // 2),
                (q * (q - 1), q + 1)]
    if family == "psl2_2k":
        Q = 2**param
        return [(Q, Q + 1), (Q - 1, Q // 2 * (Q + 1)), (Q + 1, Q // 2 * (Q - 1))]
    if family == "dihedral":
        n = param
        if n % 2:
            return [(n, 1), (2, n)]
        return [(n, 1), (4, n // 2)]
    return None


def expected_class_count(family: str, param: int) -> int | None:
    if family == "heisenberg":
        return param**2 + param - 1
    if family == "affine":
        return param
    if family == "gl2":
        return param**2 - 1
    if family == "psl2_2k":
        return 2**param + 1
    if family == "dihedral":
        n = param
        return (n + 3) // 2 if n % 2 else (n + 6) // 2
    if family == "cyclic":
        return param
    return None
