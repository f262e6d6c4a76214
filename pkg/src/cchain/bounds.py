"""Mixing-time bounds for the commuting chain: Cheeger quantities, the
minorization and coupling upper bounds, the spectral sandwich, and the
bounded-ratio check that rules out cutoff.

Rational quantities stay exact.  Anything involving a logarithm is a double;
when a ceiling argument lies within ``CEIL_GUARD`` of an integer, the guard is
added before rounding up (so the bound can only get weaker) and the event is
recorded in the report's flags.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chain import Distribution, MixingProfile, _as_fraction
from .rational import ONE, ZERO, RationalMatrix, _lcm, frac_str
from .spectral import SpectralSummary
from .structure import GroupStructure

CEIL_GUARD = 1e-12
PHI_BRUTE_MAX = 20
CUTOFF_CONSTANT = 4 * math.log(4) + 4


def safe_ceil(x: float, flags: list | None = None, label: str = "") -> int:
    k = round(x)
    if abs(x - k) <= CEIL_GUARD:
        if flags is not None:
            flags.append(f"ceiling guard applied: {label}")
        return math.ceil(x + CEIL_GUARD)
    return math.ceil(x)


def _weights(pi) -> list[Fraction]:
    return list(pi.weights if isinstance(pi, Distribution) else pi)


def phi_of(S: Sequence[int], P: RationalMatrix, pi) -> Fraction:
    """Flow out of S under the stationary chain, divided by pi(S)."""
    w = _weights(pi)
    n = len(w)
    members = sorted({int(x) for x in S})
    if not members or len(members) >= n:
        raise ValueError("S must be a non-empty proper subset of the states")
    inside = set(members)
    flow = ZERO
    for x in members:
        out = sum((v for y, v in enumerate(P.rows[x]) if v and y not in inside), ZERO)
        flow += w[x] * out
    mass = sum((w[x] for x in members), ZERO)
    return flow / mass


def phi_star_bruteforce(P: RationalMatrix, pi, max_states: int = PHI_BRUTE_MAX) -> Fraction:
    """Exact min of phi_of over all S with 0 < pi(S) <= 1/2.

    All 2^n subsets are scored at once in integers: with a common
    denominator L, Q = L pi(x) P(x, y) and m = L pi(x) are integral, and the
    cut and mass of S are built by doubling over the highest element.
    """
    w = _weights(pi)
    n = len(w)
    if n > max_states:
        raise ValueError(f"brute force is limited to {max_states} states (got {n})")
    if n < 2:
        raise ValueError("need at least two states")
    Qf = [[w[x] * P.rows[x][y] for y in range(n)] for x in range(n)]
    L = _lcm([q.denominator for row in Qf for q in row] + [v.denominator for v in w])
    Q = np.array([[int(q * L) for q in row] for row in Qf], dtype=np.int64)
    if not (Q == Q.T).all():
        raise ValueError("chain is not reversible with respect to pi")
    m = np.array([int(v * L) for v in w], dtype=np.int64)
    out_deg = Q.sum(axis=1) - np.diag(Q)

    cut = np.zeros(1, dtype=np.int64)
    mass = np.zeros(1, dtype=np.int64)
    for b in range(n):
        # Q(b, S') for every S' over elements < b
        toward = np.zeros(1, dtype=np.int64)
        for j in range(b):
            toward = np.concatenate([toward, toward + Q[b, j]])
        cut = np.concatenate([cut, cut + out_deg[b] - 2 * toward])
        mass = np.concatenate([mass, mass + m[b]])
    ok = (mass > 0) & (2 * mass <= L)
    ok[-1] = False
    idx = np.flatnonzero(ok)
    ratio = cut[idx] / mass[idx]
    best = ratio.min()
    near = idx[ratio <= best * (1 + 1e-9) + 1e-300]
    return min(Fraction(int(cut[i]), int(mass[i])) for i in near)


def _block_sets(s: GroupStructure) -> list[tuple[int, list[int]]]:
    central = set(s.center)
    return [(len(b), [int(x) for x in b if int(x) not in central]) for b in s.blocks]


@dataclass
class CheegerChoice:
    value: Fraction | None  # c_i / (4 z)
    hypothesis_ok: bool
    centralizer_size: int | None
    chosen_set: list | None
    pi_of_set: Fraction | None
    largest_fails: bool  # the largest centralizer violates pi(C \ Z) <= 1/2


def lower_bound_cheeger(s: GroupStructure, pi) -> CheegerChoice:
    """Pick the largest centralizer C_i with pi(C_i \\ Z) <= 1/2 and return c_i/(4z)."""
    if not s.is_ca or s.is_abelian:
        raise ValueError("needs a non-abelian CA group")
    w = _weights(pi)
    scored = []
    for c, S in _block_sets(s):
        mass = sum((w[x] for x in S), ZERO)
        scored.append((c, S, mass))
    c_max = max(c for c, _, _ in scored)
    largest_fails = all(mass > Fraction(1, 2) for c, _, mass in scored if c == c_max)
    good = [t for t in scored if t[2] <= Fraction(1, 2)]
    if not good:
        return CheegerChoice(None, False, None, None, None, largest_fails)
    c, S, mass = max(good, key=lambda t: (t[0], -t[2]))
    return CheegerChoice(Fraction(c, 4 * s.z), True, c, S, mass, largest_fails)


def upper_bound_minorization(s: GroupStructure, eps=Fraction(1, 4),
                             flags: list | None = None) -> tuple[int, bool]:
    """ceil((2 c_star / z) log(1/eps) + 2) with t0 = 2 and delta = z / c_star.

    Returns (bound, vacuous); for abelian groups the chain is exact after one
    step, so (1, True) is returned.
    """
    if s.is_abelian:
        return 1, True
    e = float(_as_fraction(eps))
    x = 2 * s.c_star / s.z * math.log(1 / e) + 2
    return safe_ceil(x, flags, f"minorization eps={frac_str(_as_fraction(eps))}"), False


def coupling_rate(s: GroupStructure) -> Fraction | None:
    """min(z/c, c/|G|) when every non-central centralizer has the same size c."""
    if s.signature is None or len(s.signature.distinct_centralizers) != 1:
        return None
    c = s.signature.c_star
    return min(Fraction(s.z, c), Fraction(c, s.n))


def upper_bound_coupling(s: GroupStructure, eps=Fraction(1, 4),
                         flags: list | None = None) -> int | None:
    alpha = coupling_rate(s)
    if alpha is None:
        return None
    e = float(_as_fraction(eps))
    return safe_ceil(math.log(1 / e) / float(alpha), flags,
                     f"coupling eps={frac_str(_as_fraction(eps))}")


def eigen_sandwich(spec: SpectralSummary, pi_min, eps=Fraction(1, 4),
                   flags: list | None = None) -> tuple[float, int]:
    """((t_rel - 1) log(1/(2 eps)), ceil(t_rel log(1/(eps pi_min))))."""
    if not spec.lambda_star < 1:
        raise ValueError("lambda_star = 1: chain is reducible or periodic")
    e = float(_as_fraction(eps))
    t_rel = 1.0 if spec.lambda_star <= 1e-12 else spec.t_rel
    lb = (t_rel - 1) * math.log(1 / (2 * e))
    ub = safe_ceil(t_rel * math.log(1 / (e * float(pi_min))), flags, "eigen upper")
    return lb, ub


@dataclass
class CutoffCheck:
    ratio: float | None  # t_mix / (t_rel - 1)
    ceiling: float | None  # (4 log 4 + 4) / lambda_star
    within_ceiling: bool | None
    hypothesis_ok: bool | None  # pi(C_star \ Z) <= 1/2
    one_minus_lambda_star: float
    one_minus_lambda_star_exact: Fraction | None
    applicable: bool
    note: str = ""

    @property
    def disproved(self) -> bool:
        return bool(self.applicable and self.hypothesis_ok and self.within_ceiling)


def cutoff_check(profile: MixingProfile, spec: SpectralSummary, s: GroupStructure,
                 pi=None) -> CutoffCheck:
    gap_exact = spec.gap_exact()
    base = dict(one_minus_lambda_star=spec.gap, one_minus_lambda_star_exact=gap_exact)
    t_mix = profile.t_mix_quarter
    if s.is_abelian or spec.lambda_star <= 1e-15:
        return CutoffCheck(None, None, None, None, applicable=False,
                           note="degenerate: t_rel = 1", **base)
    if t_mix is None:
        return CutoffCheck(None, None, None, None, applicable=False,
                           note="t_mix not reached within T_cap", **base)
    hyp = None
    if s.is_ca:
        w = _weights(pi) if pi is not None else None
        if w is not None:
            masses = [sum((w[x] for x in S), ZERO) for c, S in _block_sets(s) if c == s.c_star]
            hyp = min(masses) <= Fraction(1, 2)
    ratio = t_mix / (spec.t_rel - 1)
    ceiling = CUTOFF_CONSTANT / spec.lambda_star
    return CutoffCheck(ratio, ceiling, ratio <= ceiling, hyp, applicable=True, **base)


@dataclass
class BoundReport:
    group_id: str
    lb_cheeger: Fraction | None
    lb_cheeger_hypothesis_ok: bool
    lb_eigen: float | None
    ub_minorization: int
    ub_coupling: int | None
    ub_eigen: int | None
    cutoff_ratio: float | None
    cutoff_disproved: bool
    phi_of_set: Fraction | None
    phi_star_exact: Fraction | None
    alpha: float | None
    delta: Fraction
    t0: int = 2
    eps: Fraction = Fraction(1, 4)
    lb_cheeger_centralizer: int | None = None
    lb_cheeger_largest_fails: bool = False
    ub_minorization_vacuous: bool = False
    ub_minorization_of: dict = field(default_factory=dict)  # eps -> bound
    flags: list = field(default_factory=list)

    def to_json(self) -> dict:
        fr = lambda v: None if v is None else frac_str(v)
        return {
            "schema_version": 1,
            "group_id": self.group_id,
            "lb_cheeger": fr(self.lb_cheeger),
            "lb_cheeger_hypothesis_ok": self.lb_cheeger_hypothesis_ok,
            "lb_cheeger_centralizer": self.lb_cheeger_centralizer,
            "lb_cheeger_largest_fails": self.lb_cheeger_largest_fails,
            "lb_eigen": self.lb_eigen,
            "ub_minorization": self.ub_minorization,
            "ub_minorization_vacuous": self.ub_minorization_vacuous,
            "ub_minorization_of": {frac_str(e): b for e, b in self.ub_minorization_of.items()},
            "ub_coupling": self.ub_coupling,
            "ub_eigen": self.ub_eigen,
            "cutoff_ratio": self.cutoff_ratio,
            "cutoff_disproved": self.cutoff_disproved,
            "phi_of_set": fr(self.phi_of_set),
            "phi_star_exact": fr(self.phi_star_exact),
            "alpha": self.alpha,
            "delta": frac_str(self.delta),
            "t0": self.t0,
            "eps": frac_str(self.eps),
            "flags": list(self.flags),
        }


def bound_report(group_id: str, s: GroupStructure, P: RationalMatrix | None, pi,
                 spec: SpectralSummary | None = None, profile: MixingProfile | None = None,
                 eps_list=(Fraction(1, 4), Fraction(1, 10)),
                 phi_brute_max: int = PHI_BRUTE_MAX) -> BoundReport:
    """Evaluate every bound available for the group.  ``P`` may be None for
    groups too large to hold exactly; set-based Cheeger quantities are then
    computed from the closed form z / c_i."""
    flags: list = []
    eps_list = [_as_fraction(e) for e in eps_list]
    eps = Fraction(1, 4)
    w = _weights(pi)

    ub_of = {e: upper_bound_minorization(s, e, flags)[0] for e in eps_list}
    ub_min, vacuous = upper_bound_minorization(s, eps, flags)
    delta = ONE if s.is_abelian else Fraction(s.z, s.c_star)
    alpha_q = coupling_rate(s)
    ub_coup = upper_bound_coupling(s, eps, flags)

    lb = None
    hyp = False
    c_used = None
    largest_fails = False
    phi_set = None
    if s.is_ca and not s.is_abelian:
        choice = lower_bound_cheeger(s, w)
        lb, hyp, c_used, largest_fails = (choice.value, choice.hypothesis_ok,
                                          choice.centralizer_size, choice.largest_fails)
        c_for_phi = c_used if c_used is not None else s.c_star
        S = next(S for c, S in _block_sets(s) if c == c_for_phi)
        phi_set = phi_of(S, P, w) if P is not None else Fraction(s.z, c_for_phi)
        if largest_fails:
            flags.append("largest centralizer violates pi(C \\ Z) <= 1/2")

    phi_star = None
    if P is not None and s.n <= phi_brute_max and s.n >= 2:
        phi_star = phi_star_bruteforce(P, w, phi_brute_max)

    lb_eigen = ub_eigen = None
    ratio = None
    disproved = False
    if spec is not None:
        lb_eigen, ub_eigen = eigen_sandwich(spec, min(w), eps, flags)
        if profile is not None:
            cc = cutoff_check(profile, spec, s, w)
            ratio, disproved = cc.ratio, cc.disproved
    return BoundReport(
        group_id=group_id, lb_cheeger=lb, lb_cheeger_hypothesis_ok=hyp, lb_eigen=lb_eigen,
        ub_minorization=ub_min, ub_coupling=ub_coup, ub_eigen=ub_eigen, cutoff_ratio=ratio,
        cutoff_disproved=disproved, phi_of_set=phi_set, phi_star_exact=phi_star,
        alpha=None if alpha_q is None else float(alpha_q), delta=delta, t0=2, eps=eps,
        lb_cheeger_centralizer=c_used, lb_cheeger_largest_fails=largest_fails,
        ub_minorization_vacuous=vacuous, ub_minorization_of=ub_of, flags=flags,
    )


# -- invariants checked along a computed profile --------------------------------

def minorization_decay_holds(profile: MixingProfile, delta: Fraction) -> bool:
    """d(t) <= (1 - delta)^floor(t/2) at every computed t."""
    for t, d in enumerate(profile.d_values):
        bound = (1 - delta) ** (t // 2)
        if profile.mode == "exact":
            if d > bound:
                return False
        elif float(d) > float(bound) + 1e-10:
            return False
    return True


def coupling_decay_holds(profile: MixingProfile, alpha: float) -> bool:
    """d(t) <= exp(-alpha t) at every computed t."""
    return all(float(d) <= math.exp(-alpha * t) + 1e-12 for t, d in enumerate(profile.d_values))


def sgap_sandwich_holds(phi_star: Fraction, lambda_2: float, tol: float = 1e-12) -> bool:
    """phi^2/2 <= 1 - lambda_2 <= 2 phi."""
    phi = float(phi_star)
    gap = 1 - lambda_2
    return phi * phi / 2 <= gap + tol and gap <= 2 * phi + tol


def cheeger_lower_holds(phi_star: Fraction, t_mix: int) -> bool:
    """1/(4 phi_star) <= t_mix, exactly."""
    return Fraction(1) / (4 * phi_star) <= t_mix
