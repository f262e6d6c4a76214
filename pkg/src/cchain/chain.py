"""The commuting chain: transition matrix, stationary law, total variation
decay, and the chain lumped onto conjugacy classes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import GroupTable
from .rational import ONE, ZERO, IntegerVector, RationalMatrix, _lcm, step
from .structure import GroupStructure

DEFAULT_EPS = (Fraction(1, 4), Fraction(1, 10))
EXACT_THRESHOLD = 256
FLOAT_TOL = 1e-10


@dataclass(frozen=True)
class Distribution:
    weights: tuple
    mode: str = "exact"  # "exact" (Fractions) or "float"

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    @property
    def total(self):
        return sum(self.weights, ZERO if self.mode == "exact" else 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])


def _as_fraction(eps) -> Fraction:
    if isinstance(eps, Fraction):
        return eps
    if isinstance(eps, float):
        return Fraction(str(eps))
    return Fraction(eps)


def transition_matrix(g: GroupTable, s: GroupStructure) -> RationalMatrix:
    """P(x, y) = 1/|C_x| when x and y commute, else 0."""
    n = g.n
    rows = []
    for x in range(n):
        p = Fraction(1, len(s.centralizers[x]))
        row = [ZERO] * n
        for y in s.centralizers[x]:
            row[y] = p
        rows.append(row)
    return RationalMatrix._trusted(rows)


def transition_matrix_float(s: GroupStructure) -> np.ndarray:
    A = s.commute.astype(float)
    return A / A.sum(axis=1, keepdims=True)


def stationary(g: GroupTable, s: GroupStructure, P: RationalMatrix | None = None) -> Distribution:
    """pi(x) = 1 / (k |x^G|); checked to satisfy pi P = pi exactly."""
    k = s.class_count
    sizes = s.class_sizes
    pi = Distribution(tuple(Fraction(1, k * int(sizes[x])) for x in range(g.n)))
    if pi.total != 1:
        raise AssertionError("stationary weights do not sum to 1")
    if P is not None and not is_stationary(P, pi):
        raise AssertionError("pi P != pi")
    return pi


def is_stationary(P: RationalMatrix, pi: Distribution) -> bool:
    v = IntegerVector.from_fractions(pi.weights)
    return step(v, P).fractions() == list(pi.weights)


def check_detailed_balance(P: RationalMatrix, pi: Distribution) -> bool:
    """Exact test of pi(x) P(x,y) == pi(y) P(y,x) for every pair."""
    n = P.shape[0]
    rows = P.rows
    w = pi.weights
    for x in range(n):
        rx = rows[x]
        for y in range(x + 1, n):
            a, b = rx[y], rows[y][x]
            if (a or b) and w[x] * a != w[y] * b:
                return False
    return True


def tv_distance(mu, nu):
    """Half the L1 distance.  Exact when both inputs are exact."""
    a = mu.weights if isinstance(mu, Distribution) else mu
    b = nu.weights if isinstance(nu, Distribution) else nu
    if len(a) != len(b):
        raise ValueError("distributions have different lengths")
    if all(isinstance(x, (int, Fraction)) for x in a) and all(isinstance(x, (int, Fraction)) for x in b):
        return sum((abs(Fraction(x) - Fraction(y)) for x, y in zip(a, b)), ZERO) / 2
    return 0.5 * float(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)).sum())


class _ExactTV:
    """TV distance from a fixed exact target to IntegerVectors."""

    def __init__(self, target: Sequence[Fraction]):
        t = IntegerVector.from_fractions(target)
        self.tw, self.tden = t.w, t.den

    def __call__(self, v: IntegerVector) -> Fraction:
        tden, den = self.tden, v.den
        total = sum(abs(x * tden - y * den) for x, y in zip(v.w, self.tw))
        return Fraction(total, 2 * den * tden)


@dataclass
class MixingProfile:
    d_values: list
    t_mix_quarter: int | None
    t_mix_of: dict
    truncated: bool
    mode: str
    flagged: list = field(default_factory=list)  # float mode: t where d(t) was within tol above eps

    def t_mix(self, eps=Fraction(1, 4)) -> int | None:
        return self.t_mix_of.get(_as_fraction(eps))

    def to_json(self) -> dict:
        conv = (lambda v: f"{v.numerator}/{v.denominator}") if self.mode == "exact" else float
        return {
            "mode": self.mode,
            "d_values": [conv(v) for v in self.d_values],
            "d_values_float": [float(v) for v in self.d_values],
            "t_mix_quarter": self.t_mix_quarter,
            "t_mix_of": {f"{e.numerator}/{e.denominator}": t for e, t in self.t_mix_of.items()},
            "truncated": self.truncated,
            "flagged": self.flagged,
        }


def default_t_cap(s: GroupStructure) -> int:
    """Ten times the minorization scale (c_star / z) * ln 4, rounded up."""
    if s.c_star is None:
        return 2
    return max(2, math.ceil(10 * s.c_star / s.z * math.log(4)))


def mixing_profile(P, pi: Distribution, eps_list=DEFAULT_EPS, T_cap: int = 100, *,
                   starts: Sequence[int] | None = None, exact: bool | None = None,
                   exact_threshold: int = EXACT_THRESHOLD, tol: float = FLOAT_TOL) -> MixingProfile:
    """d(t) = max over ``starts`` of ||P^t(x, .) - pi||_TV for t = 0, 1, ...

    Iteration stops once every requested epsilon is reached or at T_cap.
    ``starts`` defaults to all states; for the commuting chain one start per
    conjugacy class suffices because P is invariant under conjugation.
    Exact arithmetic is used when ``exact`` is True, or by default when the
    state count is at most ``exact_threshold`` and P is a RationalMatrix.
    """
    if T_cap < 1:
        raise ValueError("T_cap must be >= 1")
    n = P.shape[0]
    if starts is None:
        starts = range(n)
    starts = list(starts)
    eps = sorted({_as_fraction(e) for e in eps_list}, reverse=True)
    if exact is None:
        exact = isinstance(P, RationalMatrix) and n <= exact_threshold
    if exact and not isinstance(P, RationalMatrix):
        raise TypeError("exact mode needs a RationalMatrix")

    t_of: dict = {}
    d_values = []
    flagged = []

    def record(t, d):
        d_values.append(d)
        for e in eps:
            if e in t_of:
                continue
            if exact:
                hit = d <= e
            else:
                hit = d <= float(e) + tol
                if hit and d > float(e):
                    flagged.append(t)
            if hit:
                t_of[e] = t

    if exact:
        tv = _ExactTV(pi.weights)
        vecs = []
        for x in starts:
            w = [0] * n
            w[x] = 1
            vecs.append(IntegerVector(w, 1))
        t = 0
        record(0, max(tv(v) for v in vecs))
        while len(t_of) < len(eps) and t < T_cap:
            t += 1
            vecs = [step(v, P) for v in vecs]
            record(t, max(tv(v) for v in vecs))
        mode = "exact"
    else:
        Pf = P.to_numpy() if isinstance(P, RationalMatrix) else np.asarray(P, dtype=float)
        target = pi.as_array()
        V = np.zeros((len(starts), n))
        V[np.arange(len(starts)), starts] = 1.0
        t = 0
        record(0, float(0.5 * np.abs(V - target).sum(axis=1).max()))
        while len(t_of) < len(eps) and t < T_cap:
            t += 1
            V = V @ Pf
            record(t, float(0.5 * np.abs(V - target).sum(axis=1).max()))
        mode = "float"
    return MixingProfile(
        d_values=d_values,
        t_mix_quarter=t_of.get(Fraction(1, 4)),
        t_mix_of={e: t_of.get(e) for e in sorted(eps, reverse=True)},
        truncated=len(t_of) < len(eps),
        mode=mode,
        flagged=flagged,
    )


def lumped_chain(g: GroupTable, s: GroupStructure, P: RationalMatrix) -> RationalMatrix:
    """Chain on conjugacy classes: P~(O1, O2) = (1/|O1|) sum_{x in O1, y in O2} P(x, y)."""
    k = s.class_count
    cls = s.class_of
    out = []
    for O1 in s.classes:
        acc = [ZERO] * k
        for x in O1:
            for y, v in enumerate(P.rows[x]):
                if v:
                    acc[cls[y]] += v
        out.append([a / len(O1) for a in acc])
    return RationalMatrix._trusted(out)


def lumped_stationary(s: GroupStructure) -> Distribution:
    k = s.class_count
    return Distribution(tuple(Fraction(1, k) for _ in range(k)))


def class_start_distances(P: RationalMatrix, pi: Distribution, cls: Sequence[int],
                          t_max: int) -> list[Fraction]:
    """||mu_K P^t - pi||_TV for t = 1..t_max, mu_K uniform on ``cls``."""
    n = P.shape[0]
    w = [0] * n
    for x in cls:
        w[x] = 1
    v = IntegerVector(w, len(cls))
    tv = _ExactTV(pi.weights)
    out = []
    for _ in range(t_max):
        v = step(v, P)
        out.append(tv(v))
    return out


def check_class_start_equality(g: GroupTable, s: GroupStructure, P: RationalMatrix,
                               P_lumped: RationalMatrix, t_max: int,
                               pi: Distribution | None = None) -> bool:
    """Exact comparison of class-uniform starts on G with point starts on the
    lumped chain, for every class and 1 <= t <= t_max."""
    if pi is None:
        pi = stationary(g, s)
    pi_l = lumped_stationary(s)
    for K, cls in enumerate(s.classes):
        full = class_start_distances(P, pi, cls, t_max)
        e = [Fraction(0)] * s.class_count
        e[K] = ONE
        lumped = class_start_distances(P_lumped, pi_l, [K], t_max)
        if full != lumped:
            return False
    return True


def synthetic_ca_chain(z: int, centralizer_sizes: Sequence[int]) -> RationalMatrix:
    """Transition matrix assembled from a CA signature alone.

    States are ordered center first, then the non-central part of each
    centralizer in the given order.  Central rows are uniform; a row in the
    block of size c puts 1/c on the center and on its own block.
    """
    sizes = [int(c) for c in centralizer_sizes]
    if z < 1:
        raise ValueError("center size must be >= 1")
    if not sizes:
        raise ValueError("need at least one centralizer")
    if any(c < 2 * z for c in sizes):
        raise ValueError("every centralizer must have size >= 2z")
    n = z + sum(c - z for c in sizes)
    if len(sizes) == 1:
        # the single centralizer would be the whole group, which is abelian
        raise ValueError("a single centralizer of size n describes an abelian group")
    rows = [[Fraction(1, n)] * n for _ in range(z)]
    start = z
    for c in sizes:
        v = Fraction(1, c)
        for _ in range(c - z):
            row = [ZERO] * n
            for j in range(z):
                row[j] = v
            for j in range(start, start + c - z):
                row[j] = v
            rows.append(row)
        start += c - z
    return RationalMatrix._trusted(rows)


def two_step_check(s: GroupStructure) -> tuple[bool, Fraction, Fraction]:
    """Check P^2(x, y) >= z / (|G| c_star) over all pairs, exactly.

    Returns (holds, min over pairs of P^2, the bound).  Works in integers:
    with L = lcm of centralizer sizes, |C_x| L P^2(x, y) = sum_g A(x,g) (L/|C_g|) A(g,y).
    """
    if s.c_star is None:
        raise ValueError("bound needs a non-abelian group")
    A = s.commute.astype(np.int64)
    csz = A.sum(axis=1)
    L = _lcm(int(c) for c in np.unique(csz))
    M = (A * (L // csz)[None, :]) @ A
    n = s.n
    bound = Fraction(s.z, n * s.c_star)
    # M[x,y] * n * c_star >= z * |C_x| * L
    holds = bool((M * (n * s.c_star) >= (s.z * L) * csz[:, None]).all())
    row_min = M.min(axis=1)
    minimum = min(Fraction(int(m), int(c) * L) for m, c in zip(row_min, csz))
    return holds, minimum, bound
