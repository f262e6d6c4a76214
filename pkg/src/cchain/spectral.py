"""Characteristic polynomials and spectra of the commuting chain.

For a CA group with center size z and distinct non-central centralizers of
sizes c_1..c_j, the characteristic polynomial of P is determined by the
signature alone:

    lam^(n-j-1) * ( z/n * (1 + sum_k (c_k - z)/(c_k(lam-1) + z)) - lam )
                * prod_i (lam - (c_i - z)/c_i)

up to sign.  :func:`cacp_charpoly` expands this after clearing the
denominators; :func:`cacp_factors` keeps it factored, which is what the
exact eigenvalue forms come from.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rational import (
    ONE,
    ZERO,
    QuadraticSurd,
    RationalMatrix,
    RationalPolynomial,
    det_shifted,
    prod_poly,
    quadratic_roots,
)
from .structure import CASignature

LAM = RationalPolynomial([0, 1])


def _check_signature(sig: CASignature | None, group_order: int) -> None:
    if sig is None or sig.j < 1:
        raise ValueError("characteristic polynomial formula needs a non-abelian CA signature")
    if sig.order != group_order:
        raise ValueError(f"signature describes order {sig.order}, not {group_order}")


def _denominator_factor(c: int, z: int) -> RationalPolynomial:
    # c (lam - 1) + z
    return RationalPolynomial([z - c, c])


def cacp_charpoly(sig: CASignature, group_order: int) -> RationalPolynomial:
    """det(lam I - P) as a monic degree-n polynomial, from the CA signature.

    The middle factor's denominator prod_k (c_k(lam-1) + z) equals
    prod_k c_k * prod_k (lam - (c_k - z)/c_k), so multiplying it through
    cancels the product on the right and leaves lam^(n-j-1) N(lam) / prod c_k
    with N of degree j + 1.
    """
    _check_signature(sig, group_order)
    n, z = group_order, sig.z
    sizes = sig.sizes
    D = [_denominator_factor(c, z) for c in sizes]
    prod_all = prod_poly(D)
    # sum_k (c_k - z) prod_{l != k} D_l, grouped by size to avoid j^2 products
    counts = Counter(sizes)
    powers = {c: _denominator_factor(c, z) ** m for c, m in counts.items()}
    cross = RationalPolynomial()
    for c, m in counts.items():
        others = prod_poly(powers[d] for d in counts if d != c)
        cross = cross + (m * (c - z)) * _denominator_factor(c, z) ** (m - 1) * others
    N = Fraction(z, n) * (prod_all + cross) - LAM * prod_all
    poly = RationalPolynomial.monomial(n - sig.j - 1) * N
    if poly.degree != n:
        raise AssertionError(f"degree {poly.degree} != {n}")
    return poly.monic()


def cacp_display_value(sig: CASignature, group_order: int, lam) -> Fraction:
    """The closed-form expression evaluated literally (rational function and
    all) at a non-pole point."""
    _check_signature(sig, group_order)
    lam = Fraction(lam)
    n, z = group_order, sig.z
    sizes = sig.sizes
    inner = ONE + sum(Fraction(c - z) / (c * (lam - 1) + z) for c in sizes)
    middle = Fraction(z, n) * inner - lam
    out = lam ** (n - sig.j - 1) * middle
    for c in sizes:
        out *= lam - Fraction(c - z, c)
    return out


def cacp_poles(sig: CASignature) -> set[Fraction]:
    return {Fraction(c - sig.z, c) for c, _ in sig.distinct_centralizers}


@dataclass
class CharpolyFactors:
    """lam^zero_mult * prod (lam - r)^m over ``linear`` * residual (monic)."""
    n: int
    linear: dict  # Fraction root -> multiplicity (includes 0 and 1)
    residual: RationalPolynomial

    def expand(self) -> RationalPolynomial:
        out = self.residual
        for r, m in self.linear.items():
            out = out * RationalPolynomial.linear_root(r) ** m
        return out

    def exact_roots(self) -> list[tuple[QuadraticSurd, int]]:
        """Rational roots, plus surd roots when the residual is quadratic."""
        out = [(QuadraticSurd.rational(r), m) for r, m in self.linear.items()]
        if self.residual.degree == 1:
            out.append((QuadraticSurd.rational(-self.residual.coeffs[0]), 1))
        elif self.residual.degree == 2:
            out.extend((r, 1) for r in quadratic_roots(self.residual))
        out.sort(key=lambda rm: -float(rm[0]))
        return out

    def residual_roots(self) -> np.ndarray:
        if self.residual.degree <= 2:
            return np.array([])
        return np.sort(self.residual.roots_float().real)[::-1]

    def pretty(self, var: str = "x") -> str:
        parts = []
        for r, m in sorted(self.linear.items(), key=lambda rm: -rm[0]):
            base = var if r == 0 else f"({var} - {r})" if r > 0 else f"({var} + {-r})"
            parts.append(base if m == 1 else f"{base}^{m}")
        if self.residual.degree >= 1:
            parts.append(f"({str(self.residual).replace('x', var)})")
        return " * ".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {
            "linear": [{"root": str(r), "multiplicity": m}
                       for r, m in sorted(self.linear.items(), key=lambda rm: -rm[0])],
            "residual": self.residual.to_json(),
            "factored": self.pretty(),
        }


def cacp_factors(sig: CASignature, group_order: int) -> CharpolyFactors:
    """Factored form of :func:`cacp_charpoly`.

    Grouping equal centralizer sizes, prod_k D_k and the cross sum share
    prod_r D_r^(m_r - 1), which leaves a bracket of degree (#sizes + 1)
    containing the root 1.  Remaining rational roots are split off by trial
    division at 0, 1 and the pole values.
    """
    _check_signature(sig, group_order)
    n, z = group_order, sig.z
    counts = dict(sig.distinct_centralizers)
    Dr = {c: _denominator_factor(c, z) for c in counts}
    base = prod_poly(Dr.values())
    cross = RationalPolynomial()
    for c, m in counts.items():
        cross = cross + (m * (c - z)) * prod_poly(Dr[d] for d in counts if d != c)
    bracket = (Fraction(z, n) * (base + cross) - LAM * base).monic()

    linear: dict = Counter()
    linear[ZERO] += n - sig.j - 1
    for c, m in counts.items():
        if m > 1:
            linear[Fraction(c - z, c)] += m - 1
    candidates = [ONE, ZERO] + sorted(cacp_poles(sig))
    for r in candidates:
        k = bracket.multiplicity(r)
        if k:
            bracket = bracket // (RationalPolynomial.linear_root(r) ** k)
            linear[r] += k
    linear = {r: m for r, m in linear.items() if m}
    return CharpolyFactors(n=n, linear=linear, residual=bracket)


def direct_charpoly_check(P: RationalMatrix, poly: RationalPolynomial,
                          trials: int | None = None, *, full: bool = False) -> bool:
    """Polynomial identity test of ``poly`` against det(lam I - P).

    Degree and leading coefficient must match, and the two must agree at
    ``trials`` distinct rational points.  With ``full=True`` (or trials >= n+1)
    n+1 points are used, which proves the identity for degree-n polynomials.
    """
    n = P.shape[0]
    if poly.degree != n or poly.lead != 1:
        return False
    if full:
        trials = n + 1
    elif trials is None:
        trials = min(n + 1, 64)
    points = [Fraction(k + 2) if k % 2 == 0 else Fraction(-(k + 1), 2) for k in range(trials)]
    return all(poly(x) == det_shifted(P, x) for x in points)


@dataclass(frozen=True)
class Eigenvalue:
    value: float
    multiplicity: int
    exact: QuadraticSurd | None = None

    def to_json(self) -> dict:
        return {"value": self.value, "exact": None if self.exact is None else str(self.exact),
                "multiplicity": self.multiplicity}


@dataclass
class SpectralSummary:
    eigenvalues: list  # Eigenvalue, descending
    lambda_2: float
    lambda_min: float
    lambda_star: float
    t_rel: float
    gap: float
    lambda_star_exact: QuadraticSurd | None = None
    raw: np.ndarray = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return sum(e.multiplicity for e in self.eigenvalues)

    def multiplicity_of(self, value: float, tol: float = 1e-8) -> int:
        return sum(e.multiplicity for e in self.eigenvalues if abs(e.value - value) <= tol)

    def gap_exact(self) -> Fraction | None:
        if self.lambda_star_exact is not None and self.lambda_star_exact.is_rational:
            return 1 - self.lambda_star_exact.a
        return None

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "eigenvalues": [e.to_json() for e in self.eigenvalues],
            "lambda_2": self.lambda_2,
            "lambda_min": self.lambda_min,
            "lambda_star": self.lambda_star,
            "lambda_star_exact": None if self.lambda_star_exact is None else str(self.lambda_star_exact),
            "t_rel": self.t_rel,
            "gap": self.gap,
        }


def _match_exact(value: float, candidates, denom_cap: int, tol: float = 1e-9):
    for c in candidates:
        if abs(float(c) - value) <= tol:
            return c
    r = Fraction(value).limit_denominator(max(denom_cap, 1))
    if abs(float(r) - value) <= tol:
        return QuadraticSurd.rational(r)
    return None


def numeric_spectrum(P, pi, factors: CharpolyFactors | None = None, *,
                     group_tol: float = 1e-8, exact_tol: float = 1e-9) -> SpectralSummary:
    """Eigenvalues of a reversible chain via the symmetric matrix
    D^(1/2) P D^(-1/2), D = diag(pi)."""
    Pf = P.to_numpy() if isinstance(P, RationalMatrix) else np.asarray(P, dtype=float)
    w = np.array([float(x) for x in (pi.weights if hasattr(pi, "weights") else pi)])
    n = Pf.shape[0]
    root = np.sqrt(w)
    S = root[:, None] * Pf / root[None, :]
    if np.abs(S - S.T).max() > 1e-9:
        raise ValueError("chain is not reversible with respect to pi")
    vals = np.sort(np.linalg.eigvalsh((S + S.T) / 2))[::-1]

    candidates = [r for r, _ in factors.exact_roots()] if factors else []
    groups: list[list[float]] = []
    for v in vals:
        if groups and abs(groups[-1][-1] - v) <= group_tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    eigen = []
    for g in groups:
        mean = float(np.mean(g))
        ex = _match_exact(mean, candidates, n * n, exact_tol)
        eigen.append(Eigenvalue(float(ex) if ex is not None else mean, len(g), ex))

    lam2 = float(vals[1]) if n > 1 else 0.0
    lam_min = float(vals[-1]) if n > 1 else 0.0
    lam_star = max(lam2, abs(lam_min))
    if lam_star >= 1 - 1e-12:
        raise ValueError("chain is periodic or reducible")
    star_exact = None
    target = lam2 if lam2 >= abs(lam_min) else lam_min
    for e in eigen:
        if e.exact is not None and abs(e.value - target) <= group_tol:
            ex = e.exact
            star_exact = ex if target == lam2 else QuadraticSurd(-ex.a, -ex.b, ex.d)
            break
    if n == 1:
        star_exact = QuadraticSurd.rational(0)
    return SpectralSummary(
        eigenvalues=eigen, lambda_2=lam2, lambda_min=lam_min, lambda_star=lam_star,
        t_rel=1.0 / (1.0 - lam_star), gap=1.0 - lam_star, lambda_star_exact=star_exact, raw=vals,
    )


def residual_roots_match(factors: CharpolyFactors, summary: SpectralSummary,
                         tol: float = 1e-9) -> bool:
    """Roots of a residual factor of degree >= 3 all appear in the numeric
    spectrum (each with multiplicity at least one)."""
    roots = factors.residual_roots()
    vals = summary.raw
    return all(np.abs(vals - r).min() <= tol for r in roots)


def expected_multiplicities(factors: CharpolyFactors) -> list[tuple[float, int]]:
    """(value, multiplicity) for every root of the factored polynomial,
    merging coincident values."""
    out: list[list] = []
    pairs = [(float(r), m) for r, m in factors.exact_roots()]
    pairs += [(float(r), 1) for r in factors.residual_roots()]
    for v, m in sorted(pairs, key=lambda vm: -vm[0]):
        if out and abs(out[-1][0] - v) <= 1e-8:
            out[-1][1] += m
        else:
            out.append([v, m])
    return [(v, m) for v, m in out]


def spectrum_matches(summary: SpectralSummary, expected: Sequence[tuple[float, int]],
                     tol: float = 1e-9) -> bool:
    if len(summary.eigenvalues) != len(expected):
        return False
    return all(abs(e.value - v) <= tol and e.multiplicity == m
               for e, (v, m) in zip(summary.eigenvalues, expected))
