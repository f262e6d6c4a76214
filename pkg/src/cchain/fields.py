"""Arithmetic in GF(p^k).

Elements are coefficient tuples ``(c_0, ..., c_{k-1})`` read low degree
first, reduced modulo a fixed monic irreducible polynomial.  Each element
also has an integer *code* ``sum(c_i * p**i)`` which is what the matrix
group constructors work with; :func:`field_tables` exposes addition and
multiplication tables over codes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_FIELD_CAP = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return None


# -- polynomials over GF(p), coefficient lists low degree first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, m, p)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(f: tuple[int, ...] | list[int], p: int) -> bool:
    """Ben-Or test: f of degree k is irreducible iff gcd(x^(p^i) - x, f) = 1
    for every 1 <= i <= k // 2."""
    f = _trim(list(f))
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(k // 2):
        # power <- power^p mod f
        acc = [1]
        base = power
        e = p
        while e:
            if e & 1:
                acc = _poly_mulmod(acc, base, f, p)
            base = _poly_mulmod(base, base, f, p)
            e >>= 1
        power = acc
        g = _poly_gcd(f, _poly_sub(power, x, p), p)
        if len(g) > 1:
            return False
    return True


def has_factor_exhaustive(f: tuple[int, ...], p: int) -> bool:
    """Brute-force search for a monic factor of degree 1..deg(f)//2.

    Used only as an independent check of :func:`is_irreducible` for small k.
    """
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            if not _poly_mod(list(f), g, p):
                return True
    return False


# -- the field ---------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]  # monic, low degree first, length k + 1

    @property
    def q(self) -> int:
        return self.p**self.k

    def element(self, coeffs) -> tuple[int, ...]:
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) > self.k:
            c = tuple(_poly_mod(list(c), list(self.modulus), self.p))
        return c + (0,) * (self.k - len(c))

    def code(self, a: tuple[int, ...]) -> int:
        return sum(c * self.p**i for i, c in enumerate(a))

    def from_code(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.k

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.k - 1)

    def __str__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


def field_make(p: int, k: int = 1, cap: int = DEFAULT_FIELD_CAP) -> FieldSpec:
    """Build GF(p^k) using the lexicographically smallest monic irreducible
    modulus, comparing coefficients from the constant term upwards."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if k < 1:
        raise FieldError(f"k={k} must be positive")
    if p**k > cap:
        raise FieldError(f"field order {p}^{k} exceeds cap {cap}")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue  # divisible by x
        f = low + (1,)
        if is_irreducible(f, p):
            return FieldSpec(p, k, f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def field_add(spec: FieldSpec, a, b):
    return tuple((x + y) % spec.p for x, y in zip(a, b))


def field_neg(spec: FieldSpec, a):
    return tuple(-x % spec.p for x in a)


def field_mul(spec: FieldSpec, a, b):
    prod = _poly_mulmod(list(a), list(b), list(spec.modulus), spec.p)
    return spec.element(prod)


def field_inv(spec: FieldSpec, a):
    if not any(a):
        raise ZeroDivisionError("inverse of zero in " + str(spec))
    # a^(q-2) by square and multiply
    result, base, e = spec.one, tuple(a), spec.q - 2
    while e:
        if e & 1:
            result = field_mul(spec, result, base)
        base = field_mul(spec, base, base)
        e >>= 1
    return result


def field_enumerate(spec: FieldSpec) -> list[tuple[int, ...]]:
    """All q elements in code order, so 0 comes first and 1 second."""
    return [spec.from_code(c) for c in range(spec.q)]


@lru_cache(maxsize=32)
def field_tables(spec: FieldSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Addition table, multiplication table and inverse vector over codes.

    ``inv[0]`` is set to 0 as a placeholder.
    """
    elems = field_enumerate(spec)
    q = spec.q
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for i, a in enumerate(elems):
        for j in range(i, q):
            b = elems[j]
            add[i, j] = add[j, i] = spec.code(field_add(spec, a, b))
            mul[i, j] = mul[j, i] = spec.code(field_mul(spec, a, b))
    inv = np.zeros(q, dtype=np.int64)
    for i in range(1, q):
        inv[i] = int(np.flatnonzero(mul[i] == 1)[0])
    for t in (add, mul, inv):
        t.setflags(write=False)
    return add, mul, inv
