"""Closed-form spectra of the commuting chain on the conjugacy classes of
D_2n, the eigenfunction bounds built on them, and the resulting
n-independent decay of the lumped chain.

Lumped states follow a fixed class order.  Odd n: {1}, {r^i, r^-i} for
i = 1..(n-1)/2, then all reflections.  Even n: {1}, {r^(n/2)}, {r^i, r^-i}
for i = 1..(n-2)/2, {s r^even}, {s r^odd}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chain import lumped_chain, transition_matrix
from .groups import build_dihedral
from .rational import RationalMatrix, ZERO
from .structure import analyze_structure

GOLDEN = (math.sqrt(5) + 1) / 2
ODD_CONSTANT = 4 * GOLDEN**2
EVEN_CONSTANT = 10 * (math.sqrt(5) + 1) ** 2
SLACK = 1e-12


@dataclass
class DihedralSpectrum:
    n: int
    parity: str
    m: int  # number of conjugacy classes
    c_n: float
    A_n: float
    B_n: float
    lambda_2: float
    lambda_m: float
    eigenvalues: list  # (value, multiplicity), summing to m
    eigenfunctions: dict = field(default_factory=dict)  # eigenvalue label -> (value, vector)

    @property
    def pi(self) -> np.ndarray:
        return np.full(self.m, 1.0 / self.m)

    @property
    def lambda_star(self) -> float:
        return max(self.lambda_2, abs(self.lambda_m))


def class_count(n: int) -> int:
    return (n + 3) // 2 if n % 2 else (n + 6) // 2


def closed_form_lumped_matrix(n: int) -> RationalMatrix:
    """The lumped transition matrix written out in closed form."""
    if n < 3:
        raise ValueError("need n >= 3")
    m = class_count(n)
    F = Fraction
    P = [[ZERO] * m for _ in range(m)]
    if n % 2:
        P[0][0] = F(1, 2 * n)
        for i in range(1, m - 1):
            P[0][i] = F(1, n)
            P[i][0] = F(1, n)
            for j in range(1, m - 1):
                P[i][j] = F(2, n)
        P[0][m - 1] = P[m - 1][0] = P[m - 1][m - 1] = F(1, 2)
    else:
        for a in (0, 1):
            for b in (0, 1):
                P[a][b] = F(1, 2 * n)
            for i in range(2, m - 2):
                P[a][i] = F(1, n)
                P[i][a] = F(1, n)
            for b in (m - 2, m - 1):
                P[a][b] = P[b][a] = F(1, 4)
        for i in range(2, m - 2):
            for j in range(2, m - 2):
                P[i][j] = F(2, n)
        if (n // 2) % 2:
            for a in (m - 2, m - 1):
                for b in (m - 2, m - 1):
                    P[a][b] = F(1, 4)
        else:
            P[m - 2][m - 2] = P[m - 1][m - 1] = F(1, 2)
    return RationalMatrix(P)


def lumped_class_order(n: int) -> list[str]:
    """Class labels in the order used by :func:`closed_form_lumped_matrix`; each
    class is named by its lexicographically first label as built by
    :func:`cchain.groups.build_dihedral`."""
    def rot(i):
        return "1" if i == 0 else ("r" if i == 1 else f"r^{i}")
    if n % 2:
        return ["1"] + [rot(i) for i in range(1, (n - 1) // 2 + 1)] + ["s"]
    return ["1", rot(n // 2)] + [rot(i) for i in range(1, (n - 2) // 2 + 1)] + ["s", "sr"]


def group_lumped_matrix(n: int) -> RationalMatrix:
    """Lumped chain computed from the Cayley table of D_2n, with classes
    permuted into the closed-form order."""
    g = build_dihedral(n)
    s = analyze_structure(g)
    Pl = lumped_chain(g, s, transition_matrix(g, s))
    index = {g.labels[x]: s.class_of[x] for x in range(g.n)}
    order = [int(index[label]) for label in lumped_class_order(n)]
    return Pl.permute(order)


def dihedral_closed_form(n: int) -> DihedralSpectrum:
    if n < 3:
        raise ValueError("need n >= 3")
    m = class_count(n)
    if n % 2:
        c = math.sqrt((5 * n - 1) * (n - 1))
        A = math.sqrt(n * n * (n + 3) / (5 * n * n - n * c + 4 * n + c - 1))
        B = math.sqrt(n * n * (n + 3) / (5 * n * n + n * c + 4 * n - c - 1))
        lam2, lamm = (n - 1 + c) / (4 * n), (n - 1 - c) / (4 * n)
        mid = m - 2
        f2 = A * np.array([(-(n + 1) / 2 + c / 2) / n] + [(-1 - c / (n - 1)) / n] * mid + [1.0])
        fm = B * np.array([(-(n + 1) / 2 - c / 2) / n] + [(-1 + c / (n - 1)) / n] * mid + [1.0])
        parity = "odd"
    else:
        c = math.sqrt((5 * n - 2) * (n - 2))
        A = math.sqrt(n * n * (n + 6) / (2 * (5 * n * n - n * c + 8 * n + 2 * c - 4)))
        B = math.sqrt(n * n * (n + 6) / (2 * (5 * n * n + n * c + 8 * n - 2 * c - 4)))
        lam2, lamm = (n - 2 + c) / (4 * n), (n - 2 - c) / (4 * n)
        mid = m - 4
        f2 = A * np.array([(-(n + 2) / 2 + c / 2) / n] * 2
                          + [2 / n * (-1 - c / (n - 2))] * mid + [1.0, 1.0])
        fm = B * np.array([(-(n + 2) / 2 - c / 2) / n] * 2
                          + [2 / n * (-1 + c / (n - 2))] * mid + [1.0, 1.0])
        parity = "even"
    funcs = {"f1": (1.0, np.ones(m)), "f2": (lam2, f2), "fm": (lamm, fm)}
    nonzero = [1.0, lam2, lamm]
    if n % 2 == 0 and (n // 2) % 2 == 0:
        # antisymmetric on the two reflection classes
        h = np.zeros(m)
        h[m - 2], h[m - 1] = -0.5 * math.sqrt(n + 6), 0.5 * math.sqrt(n + 6)
        funcs["f_half"] = (0.5, h)
        nonzero.append(0.5)
    # merge coincident values (n = 4 has lambda_2 = 1/2)
    vals: list[list] = []
    for v in sorted(nonzero, reverse=True):
        if vals and abs(vals[-1][0] - v) < 1e-12:
            vals[-1][1] += 1
        else:
            vals.append([v, 1])
    zeros = m - len(nonzero)
    if zeros:
        vals.append([0.0, zeros])
    vals.sort(key=lambda vm: -vm[0])
    return DihedralSpectrum(n=n, parity=parity, m=m, c_n=c, A_n=A, B_n=B,
                            lambda_2=lam2, lambda_m=lamm,
                            eigenvalues=[(v, k) for v, k in vals], eigenfunctions=funcs)


def eigenpair_residuals(spec: DihedralSpectrum, P: RationalMatrix | np.ndarray | None = None) -> dict:
    """For each listed eigenpair: (||P f - lam f||_inf, |<f, f>_pi - 1|)."""
    if P is None:
        P = closed_form_lumped_matrix(spec.n)
    Pf = P.to_numpy() if isinstance(P, RationalMatrix) else np.asarray(P)
    pi = spec.pi
    out = {}
    for name, (lam, f) in spec.eigenfunctions.items():
        out[name] = (float(np.abs(Pf @ f - lam * f).max()), float(abs(pi @ (f * f) - 1)))
    return out


def dihedral_bound_items(n: int) -> dict:
    """Each inequality of the eigenfunction bound lemma, evaluated at n.

    Odd n >= 3 and even n >= 4 with n/2 odd.  Interior indices (1-based)
    are 2..m-1 for odd n and 3..m-2 for even n.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    spec = dihedral_closed_form(n)
    m = spec.m
    g2 = spec.eigenfunctions["f2"][1] / spec.A_n
    gm = spec.eigenfunctions["fm"][1] / spec.B_n
    rn = math.sqrt(n)
    lam_cap = (1 + math.sqrt(5)) / 4
    if n % 2:
        interior = slice(1, m - 1)
        items = {
            "n <= c_n": n <= spec.c_n + SLACK,
            "c_n <= 3n": spec.c_n <= 3 * n + SLACK,
            "|f2/A_n| <= golden": np.abs(g2).max() <= GOLDEN + SLACK,
            "|fm/B_n| <= golden": np.abs(gm).max() <= GOLDEN + SLACK,
            "interior |f2/A_n| <= 4/n": np.abs(g2[interior]).max() <= 4 / n + SLACK,
            "interior |fm/B_n| <= 4/n": np.abs(gm[interior]).max() <= 4 / n + SLACK,
        }
    else:
        if (n // 2) % 2 == 0 or n < 4:
            raise ValueError("even-n lemma needs n >= 4 with n/2 odd")
        interior = slice(2, m - 2)
        cap = 1 + math.sqrt(5)
        items = {
            "|c_n| <= 4n": abs(spec.c_n) <= 4 * n + SLACK,
            "|f2/A_n| <= 1+sqrt5": np.abs(g2).max() <= cap + SLACK,
            "|fm/B_n| <= 1+sqrt5": np.abs(gm).max() <= cap + SLACK,
            "interior |f2/A_n| <= 16/n": np.abs(g2[interior]).max() <= 16 / n + SLACK,
            "interior |fm/B_n| <= 16/n": np.abs(gm[interior]).max() <= 16 / n + SLACK,
        }
    items["A_n <= sqrt(n)"] = spec.A_n <= rn + SLACK
    items["B_n <= sqrt(n)"] = spec.B_n <= rn + SLACK
    items["lambda_star < (1+sqrt5)/4"] = spec.lambda_star < lam_cap
    return {k: bool(v) for k, v in items.items()}


def dihedral_bound_lemmas(n: int) -> bool:
    return all(dihedral_bound_items(n).values())


def lumped_distance_profile(P: RationalMatrix | np.ndarray, t_max: int) -> np.ndarray:
    """d(t) for t = 0..t_max of a lumped chain with uniform stationary law,
    maximised over all start classes.  Float arithmetic."""
    Pf = P.to_numpy() if isinstance(P, RationalMatrix) else np.asarray(P, dtype=float)
    m = Pf.shape[0]
    V = np.eye(m)
    out = [0.5 * np.abs(V - 1.0 / m).sum(axis=1).max()]
    for _ in range(t_max):
        V = V @ Pf
        out.append(0.5 * np.abs(V - 1.0 / m).sum(axis=1).max())
    return np.array(out)


def fitted_decay_rate(d: np.ndarray, t_lo: int, t_hi: int) -> float:
    """exp of the least-squares slope of log d(t) over t_lo..t_hi."""
    t = np.arange(t_lo, t_hi + 1)
    slope = np.polyfit(t, np.log(d[t_lo:t_hi + 1]), 1)[0]
    return float(math.exp(slope))


def dihedral_constant_mixing_check(n_list, t_max: int = 60, eps: float = 0.25) -> dict:
    """Check d(t) <= C lam_2^t on each lumped chain, C = 4 golden^2 (odd n)
    or 10 (sqrt5 + 1)^2 (even n, n/2 odd), and report lumped t_mix(eps).

    Lumped chains come from the Cayley tables.  Even n with n/2 even is
    reported without a bound.
    """
    rows = []
    for n in n_list:
        Pl = group_lumped_matrix(n)
        d = lumped_distance_profile(Pl, t_max)
        spec = dihedral_closed_form(n)
        if n % 2:
            C = ODD_CONSTANT
        elif (n // 2) % 2:
            C = EVEN_CONSTANT
        else:
            C = None
        t = np.arange(t_max + 1)
        holds = None
        worst = None
        if C is not None:
            envelope = C * spec.lambda_2**t
            holds = bool((d <= envelope * (1 + 1e-12)).all())
            worst = float((d / envelope).max())
        hit = np.flatnonzero(d <= eps)
        t_mix = int(hit[0]) if len(hit) else None
        # t where the envelope itself falls below eps: an n-free upper bound
        bound_t = None if C is None else math.ceil(math.log(C / eps) / -math.log(spec.lambda_2))
        rows.append({"n": n, "lambda_2": spec.lambda_2, "constant": C, "holds": holds,
                     "max_ratio": worst, "lumped_t_mix": t_mix, "envelope_t_mix": bound_t})
    covered = [r for r in rows if r["holds"] is not None]
    t_mixes = [r["lumped_t_mix"] for r in rows if r["lumped_t_mix"] is not None]
    return {
        "rows": rows,
        "all_hold": all(r["holds"] for r in covered),
        "max_lumped_t_mix": max(t_mixes) if t_mixes else None,
        "t_max": t_max,
        "eps": eps,
    }
