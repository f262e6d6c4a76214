"""Exact rational linear algebra and polynomials.

``RationalMatrix`` keeps dense rows of :class:`fractions.Fraction`.  The hot
paths (matrix powers applied to a distribution, determinants) avoid
Fraction arithmetic by clearing each row's denominator and working with
Python integers.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


class RationalMatrix:
    """Dense matrix of Fractions."""

    __slots__ = ("rows", "shape", "_intform")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(v if isinstance(v, Fraction) else Fraction(v) for v in r)
                          for r in rows)
        ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged rows")
        self.shape = (len(self.rows), ncols)
        self._intform = None

    @classmethod
    def _trusted(cls, rows) -> "RationalMatrix":
        m = cls.__new__(cls)
        m.rows = tuple(tuple(r) for r in rows)
        m.shape = (len(m.rows), len(m.rows[0]) if m.rows else 0)
        m._intform = None
        return m

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"RationalMatrix({self.shape[0]}x{self.shape[1]})"

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            nz = [(k, v) for k, v in enumerate(r) if v]
            out.append([sum((v * cols[j][k] for k, v in nz), ZERO) for j in range(len(cols))])
        return RationalMatrix._trusted(out)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._trusted(zip(*self.rows))

    def permute(self, perm: Sequence[int]) -> "RationalMatrix":
        """Simultaneous row/column permutation: result[i][j] = self[perm[i]][perm[j]]."""
        return RationalMatrix._trusted([[self.rows[a][b] for b in perm] for a in perm])

    def row_sums(self) -> list[Fraction]:
        return [sum(r, ZERO) for r in self.rows]

    def is_stochastic(self) -> bool:
        return all(v >= 0 for r in self.rows for v in r) and all(s == 1 for s in self.row_sums())

    def with_entry(self, i: int, j: int, value) -> "RationalMatrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = Fraction(value)
        return RationalMatrix._trusted(rows)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows])

    def integer_form(self) -> tuple[list[int], list[list[tuple[int, int]]]]:
        """Row denominators ``d`` and sparse integer rows: self[i][j] = N/d[i]
        for each (j, N) in rows[i]."""
        if self._intform is None:
            dens, rows = [], []
            for r in self.rows:
                d = _lcm(v.denominator for v in r if v)
                dens.append(d)
                rows.append([(j, int(v * d)) for j, v in enumerate(r) if v])
            self._intform = (dens, rows)
        return self._intform

    def to_json(self) -> dict:
        return {"schema_version": 1, "kind": "exact", "rows": self.shape[0],
                "cols": self.shape[1],
                "entries": [[frac_str(v) for v in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "RationalMatrix":
        return cls([[parse_frac(v) for v in r] for r in data["entries"]])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in self.rows:
            w.writerow([frac_str(v) for v in r])
        return buf.getvalue()


def identity(n: int) -> RationalMatrix:
    return RationalMatrix._trusted([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])


# -- distributions pushed through a matrix, in integer form ------------------

class IntegerVector:
    """A rational vector ``w / den`` with integer w, reduced by the common gcd."""

    __slots__ = ("w", "den")

    def __init__(self, w: list[int], den: int):
        g = math.gcd(den, *w) if w else den
        if g > 1:
            w = [x // g for x in w]
            den //= g
        self.w = w
        self.den = den

    @classmethod
    def from_fractions(cls, vec: Sequence[Fraction]) -> "IntegerVector":
        den = _lcm(v.denominator for v in vec)
        return cls([int(v * den) for v in vec], den)

    def fractions(self) -> list[Fraction]:
        return [Fraction(x, self.den) for x in self.w]


def step(vec: IntegerVector, P: RationalMatrix) -> IntegerVector:
    """Exact vec @ P."""
    dens, rows = P.integer_form()
    L = _lcm(d for d, x in zip(dens, vec.w) if x)
    out = [0] * P.shape[1]
    for x, d, row in zip(vec.w, dens, rows):
        if x:
            s = x * (L // d)
            for j, N in row:
                out[j] += s * N
    return IntegerVector(out, vec.den * L)


# -- determinants --------------------------------------------------------------

def det_bareiss(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination on an integer matrix."""
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            if aik:
                for j in range(k + 1, n):
                    ai[j] = (ai[j] * akk - aik * rowk[j]) // prev
            else:
                for j in range(k + 1, n):
                    ai[j] = ai[j] * akk // prev
            ai[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def _is_probable_prime(n: int) -> bool:
    # deterministic for n < 3.4e14
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES: list[int] = []


def _primes_31bit(count: int) -> list[int]:
    """The ``count`` largest primes below 2^31, descending."""
    c = _PRIMES[-1] - 2 if _PRIMES else (1 << 31) - 1
    while len(_PRIMES) < count:
        if _is_probable_prime(c):
            _PRIMES.append(c)
        c -= 2
    return _PRIMES[:count]


def _det_mod_stack(A: np.ndarray, primes: np.ndarray) -> list[int]:
    """det(A[i]) mod primes[i] for a stack of reduced int64 matrices.

    Gaussian elimination runs on the whole stack at once; 31-bit moduli keep
    every product inside int64.
    """
    a = A.copy()
    m, n, _ = a.shape
    pcol = primes[:, None]
    det = np.ones(m, dtype=np.int64)
    alive = np.ones(m, dtype=bool)
    layers = np.arange(m)
    for k in range(n):
        col = a[:, k:, k] != 0
        has = col.any(axis=1)
        alive &= has
        piv = k + np.argmax(col, axis=1)
        swap = piv != k
        if swap.any():
            rows_k = a[layers, k].copy()
            a[layers, k] = a[layers, piv]
            a[layers, piv] = rows_k
            det = np.where(swap, (-det) % primes, det)
        pv = a[:, k, k]
        det = det * pv % primes
        inv = np.array([pow(int(v), int(p) - 2, int(p)) if v else 0
                        for v, p in zip(pv, primes)], dtype=np.int64)
        f = a[:, k + 1:, k] * inv[:, None] % pcol
        a[:, k + 1:, k:] = (a[:, k + 1:, k:] - f[:, :, None] * a[:, k, None, k:]) % primes[:, None, None]
    det[~alive] = 0
    return [int(d) for d in det]


def det_modular(M: Sequence[Sequence[int]]) -> int:
    """Integer determinant by elimination modulo 31-bit primes and CRT.

    Enough primes are used that their product exceeds twice the Hadamard
    bound, so the symmetric residue is the exact determinant.
    """
    n = len(M)
    if n == 0:
        return 1
    bound_bits = 1.0
    for r in M:
        s = sum(x * x for x in r)
        if s == 0:
            return 0
        bound_bits += 0.5 * math.log2(s)
    need = bound_bits + 2
    count = math.ceil(need / 30.99) + 1
    primes = _primes_31bit(count)
    small = max(abs(x) for r in M for x in r) < 2**62
    if small:
        A = np.array(M, dtype=np.int64)
        stack = np.stack([A % p for p in primes])
    else:
        A = np.array(M, dtype=object)
        stack = np.stack([np.array((A % p).tolist(), dtype=np.int64) for p in primes])
    residues = _det_mod_stack(stack, np.array(primes, dtype=np.int64))
    residue, modulus = 0, 1
    for r, p in zip(residues, primes):
        t = (r - residue) * pow(modulus, -1, p) % p
        residue += modulus * t
        modulus *= p
    if residue > modulus // 2:
        residue -= modulus
    return residue


BAREISS_LIMIT = 64


def det_integer(M: Sequence[Sequence[int]]) -> int:
    return det_bareiss(M) if len(M) <= BAREISS_LIMIT else det_modular(M)


def det_shifted(P: RationalMatrix, lam: Fraction) -> Fraction:
    """Exact det(lam*I - P)."""
    n = P.shape[0]
    lam = Fraction(lam)
    dens, rows = P.integer_form()
    a, b = lam.numerator, lam.denominator
    # row i scaled by b * d_i: a*d_i on the diagonal minus b*N_ij
    M = []
    for i in range(n):
        r = [0] * n
        for j, N in rows[i]:
            r[j] = -b * N
        r[i] += a * dens[i]
        M.append(r)
    scale = b**n
    for d in dens:
        scale *= d
    return Fraction(det_integer(M), scale)


def det_rational(P: RationalMatrix) -> Fraction:
    """Exact determinant of a rational square matrix."""
    n = P.shape[0]
    dens, rows = P.integer_form()
    M = []
    for i in range(n):
        r = [0] * n
        for j, N in rows[i]:
            r[j] = N
        M.append(r)
    scale = 1
    for d in dens:
        scale *= d
    return Fraction(det_integer(M), scale)


# -- polynomials -----------------------------------------------------------------

class RationalPolynomial:
    """Polynomial with Fraction coefficients, low degree first, trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def linear_root(cls, r) -> "RationalPolynomial":
        return cls([-Fraction(r), 1])

    @classmethod
    def monomial(cls, k: int, c=1) -> "RationalPolynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return RationalPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RationalPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RationalPolynomial(), self
        quot = [ZERO] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = ZERO if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def monic(self) -> "RationalPolynomial":
        return RationalPolynomial(c / self.lead for c in self.coeffs)

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def multiplicity(self, r) -> int:
        """Order of vanishing at rational r."""
        m, p, lin = 0, self, RationalPolynomial.linear_root(r)
        while p and p(Fraction(r)) == 0:
            p = p // lin
            m += 1
        return m

    def roots_float(self) -> np.ndarray:
        if self.degree < 1:
            return np.array([])
        return np.roots([float(c) for c in reversed(self.coeffs)])

    def __repr__(self):
        return f"RationalPolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(f"+ {mono}")
            elif mono and c == -1:
                terms.append(f"- {mono}")
            else:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                cs = str(a) if a.denominator == 1 else f"({a})"
                terms.append(f"{sign} {cs}{'*' + mono if mono else ''}")
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self) -> list[str]:
        return [frac_str(c) for c in self.coeffs]


def _as_poly(x) -> RationalPolynomial:
    return x if isinstance(x, RationalPolynomial) else RationalPolynomial([x])


def prod_poly(polys: Iterable[RationalPolynomial]) -> RationalPolynomial:
    return reduce(lambda a, b: a * b, polys, RationalPolynomial([1]))


# -- quadratic surds ---------------------------------------------------------------

def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree; returns (s, d).  n > 0."""
    s, d, f = 1, n, 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


@dataclass(frozen=True)
class QuadraticSurd:
    """The number a + b*sqrt(d) with rational a, b and squarefree d > 1
    (b == 0 and d == 1 for rationals)."""
    a: Fraction
    b: Fraction = ZERO
    d: int = 1

    @classmethod
    def rational(cls, a) -> "QuadraticSurd":
        return cls(Fraction(a))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self):
        if self.is_rational:
            return str(self.a)
        den = _lcm([self.a.denominator, self.b.denominator])
        na, nb = int(self.a * den), int(self.b * den)
        sign = "+" if nb > 0 else "-"
        coef = "" if abs(nb) == 1 else f"{abs(nb)}*"
        head = f"{na}{sign}" if na else ("-" if nb < 0 else "")
        body = f"{head}{coef}sqrt({self.d})"
        return body if den == 1 else f"({body})/{den}"


def quadratic_roots(poly: RationalPolynomial) -> list[QuadraticSurd]:
    """Both roots of a degree-2 rational polynomial, larger first (real roots only)."""
    if poly.degree != 2:
        raise ValueError("need a quadratic")
    c, b, a = poly.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        raise ValueError("complex roots")
    den = disc.denominator
    num = disc.numerator * den  # disc = num / den^2
    if num == 0:
        r = -b / (2 * a)
        return [QuadraticSurd.rational(r)] * 2
    s, d = _squarefree_split(num)
    half = Fraction(s, den) / (2 * a)
    center = -b / (2 * a)
    if d == 1:
        roots = [center + half, center - half]
        roots.sort(reverse=True)
        return [QuadraticSurd.rational(r) for r in roots]
    hi, lo = QuadraticSurd(center, abs(half), d), QuadraticSurd(center, -abs(half), d)
    return [hi, lo]
