"""Explicit finite fields F_{p^n} with full exponent and discrete-log tables.

An element with coefficient vector (c_0, ..., c_{n-1}), standing for
sum_i c_i t^i in F_p[t]/(modulus), is encoded as the integer
sum_i c_i p^i.  Encodings are the single wire form: 0 is zero, 1 is one,
and the prime subfield occupies encodings 0..p-1.

Construction is deterministic: the modulus is the first monic irreducible
of degree n in encoding order of its low coefficient vector, and the
primitive root is the generator with the smallest encoding.  Two builds of
the same (p, n) therefore agree exactly, which keeps search output and
reports reproducible.

A FieldCtx is immutable after construction (tables are marked read-only)
and safe to share between processes.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .errors import (
    DegreeZero,
    DivisionByZero,
    FieldTooLarge,
    LogOfZero,
    NonPrime,
    NotPrimePower,
)

DEFAULT_FIELD_CAP = 1 << 22


def is_prime(m: int) -> bool:
    """Deterministic trial-division primality test, fine at desk scale."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Sorted distinct prime factors of m >= 1."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


def divisors(m: int) -> list[int]:
    """Sorted positive divisors of m >= 1."""
    small, large = [], []
    f = 1
    while f * f <= m:
        if m % f == 0:
            small.append(f)
            if f != m // f:
                large.append(m // f)
        f += 1
    return small + large[::-1]


def prime_power_decomposition(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p^n, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    p = fs[0]
    n = 0
    while q > 1:
        q //= p
        n += 1
    return p, n


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p.  Coefficient lists are little-endian and
# trimmed; these run only during construction, so plain Python is fine.

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df, lead_inv = len(f) - 1, pow(f[-1], -1, p)
    while len(a) - 1 >= df and any(a):
        _poly_trim(a)
        if len(a) - 1 < df:
            break
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return _poly_trim(a)


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, f, p)


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test: factor-free, works for every degree."""
    n = len(f) - 1
    if n == 1:
        return True
    x = [0, 1]
    # x^(p^k) mod f by iterated p-th powering
    frob = [_poly_mod(list(x), f, p)]
    for _ in range(n):
        frob.append(_poly_powmod(frob[-1], p, f, p))
    if _poly_trim([(c1 - c2) % p for c1, c2 in _zip_pad(frob[n], x, p)]):
        return False
    for ell in prime_factors(n):
        diff = [(c1 - c2) % p for c1, c2 in _zip_pad(frob[n // ell], x, p)]
        g = _poly_gcd(diff, f, p)
        if len(g) - 1 != 0:
            return False
    return True


def _zip_pad(a: list[int], b: list[int], p: int):
    m = max(len(a), len(b))
    a = a + [0] * (m - len(a))
    b = b + [0] * (m - len(b))
    return zip(a, b)


def _minimal_modulus(p: int, n: int) -> tuple[int, ...]:
    """First monic irreducible of degree n in encoding order of (c_0..c_{n-1})."""
    for k in range(p**n):
        coeffs = []
        kk = k
        for _ in range(n):
            coeffs.append(kk % p)
            kk //= p
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------


class FieldCtx:
    """A fully materialized F_{p^n}: modulus, primitive root, exp/log tables."""

    __slots__ = ("p", "n", "q", "modulus", "g", "exp", "log", "_pp", "_red")

    def __init__(self, p: int, n: int, cap: int = DEFAULT_FIELD_CAP):
        if not is_prime(p):
            raise NonPrime(f"p = {p} is not prime")
        if n < 1:
            raise DegreeZero(f"extension degree must be >= 1, got {n}")
        q = p**n
        if q > cap:
            raise FieldTooLarge(f"q = {q} exceeds cap {cap}")
        self.p, self.n, self.q = p, n, q
        self.modulus = _minimal_modulus(p, n)
        self._pp = tuple(p**i for i in range(n))
        self._red = self._reduction_rows()
        self.g = self._find_primitive_root()
        self.exp, self.log = self._build_tables()
        self.exp.flags.writeable = False
        self.log.flags.writeable = False

    # -- construction internals --

    def _reduction_rows(self) -> np.ndarray:
        """Rows r_j with t^(n+j) == sum_i r_j[i] t^i mod modulus, j = 0..n-2."""
        p, n = self.p, self.n
        rows = np.zeros((max(n - 1, 0), n), dtype=np.int64)
        cur = [(-c) % p for c in self.modulus[:n]]  # t^n
        for j in range(n - 1):
            rows[j] = cur
            nxt = [0] + cur[: n - 1]
            carry = cur[n - 1]
            if carry:
                for i in range(n):
                    nxt[i] = (nxt[i] + carry * rows[0][i]) % p
            cur = [c % p for c in nxt]
        return rows

    def _mul_scalar(self, x: int, y: int) -> int:
        """Table-free product of two encodings, used before tables exist."""
        a, b = self.coeffs(x), self.coeffs(y)
        prod = [0] * (2 * self.n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self._reduce_encode(prod)

    def _reduce_encode(self, prod: list[int]) -> int:
        p, n = self.p, self.n
        low = prod[:n] + [0] * (n - len(prod[:n]))
        for j in range(n, len(prod)):
            c = prod[j] % p
            if c:
                row = self._red[j - n]
                for i in range(n):
                    low[i] += c * int(row[i])
        return sum((low[i] % p) * self._pp[i] for i in range(n))

    def _pow_scalar_generic(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self._mul_scalar(result, base)
            base = self._mul_scalar(base, base)
            e >>= 1
        return result

    def _find_primitive_root(self) -> int:
        order = self.q - 1
        checks = [(order // ell) for ell in prime_factors(order)] if order > 1 else []
        for cand in range(1, self.q):
            if all(self._pow_scalar_generic(cand, e) != 1 for e in checks):
                return cand
        raise RuntimeError("no primitive root found")  # unreachable

    def _mul_by_scalar_vec(self, encs: np.ndarray, s: int) -> np.ndarray:
        """Vectorized product of an encoding array with one fixed element."""
        p, n = self.p, self.n
        sd = self.coeffs(s)
        digits = [(encs // self._pp[i]) % p for i in range(n)]
        prod = [np.zeros(encs.shape, dtype=np.int64) for _ in range(2 * n - 1)]
        for i in range(n):
            di = digits[i]
            for j in range(n):
                if sd[j]:
                    prod[i + j] += di * sd[j]
        low = [c % p for c in prod[:n]]
        for j in range(n, 2 * n - 1):
            c = prod[j] % p
            row = self._red[j - n]
            for i in range(n):
                if row[i]:
                    low[i] = low[i] + c * int(row[i])
        out = np.zeros(encs.shape, dtype=np.int64)
        for i in range(n):
            out += (low[i] % p) * self._pp[i]
        return out

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        # doubling: once g^0..g^(k-1) are known, the next block is g^k times them
        q = self.q
        exp = np.zeros(q - 1, dtype=np.int64)
        exp[0] = 1
        filled = 1
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            step = self._mul_scalar(int(exp[filled - 1]), self.g)
            exp[filled : filled + take] = self._mul_by_scalar_vec(exp[:take], step)
            filled += take
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if q > 2 and int(log[1:].min()) < 0:
            raise RuntimeError("exp table is not a bijection; bad primitive root")
        return exp, log

    # -- encodings --

    def coeffs(self, x: int) -> list[int]:
        """Coefficient vector (c_0, ..., c_{n-1}) of an encoding."""
        out = []
        for _ in range(self.n):
            out.append(x % self.p)
            x //= self.p
        return out

    def encode(self, coeffs) -> int:
        if len(coeffs) > self.n:
            raise ValueError("coefficient vector longer than extension degree")
        return sum((c % self.p) * self._pp[i] for i, c in enumerate(coeffs))

    def poly_str(self, x: int) -> str:
        """Human form of an element, e.g. '2t + 3'."""
        terms = []
        for i, c in enumerate(self.coeffs(x)):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "t" if i == 1 else f"t^{i}"
                terms.append(var if c == 1 else f"{c}{var}")
        return " + ".join(reversed(terms)) if terms else "0"

    # -- scalar arithmetic on encodings --

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        out, pw = 0, 1
        for _ in range(self.n):
            out += ((x + y) % self.p) * pw
            x //= self.p
            y //= self.p
            pw *= self.p
        return out

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        out, pw = 0, 1
        for _ in range(self.n):
            out += ((-x) % self.p) * pw
            x //= self.p
            pw *= self.p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(int(self.log[x]) + int(self.log[y])) % (self.q - 1)])

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.exp[(-int(self.log[x])) % (self.q - 1)])

    def div(self, x: int, y: int) -> int:
        if y == 0:
            raise DivisionByZero("division by zero")
        if x == 0:
            return 0
        return int(self.exp[(int(self.log[x]) - int(self.log[y])) % (self.q - 1)])

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise DivisionByZero("negative power of zero")
        return int(self.exp[(int(self.log[x]) * k) % (self.q - 1)])

    def frobenius(self, x: int, j: int) -> int:
        """x^(p^j); j is reduced mod n."""
        j %= self.n
        if x == 0:
            return 0
        return int(self.exp[(int(self.log[x]) * self._pp[j]) % (self.q - 1)])

    def discrete_log(self, x: int) -> int:
        if x == 0:
            raise LogOfZero("discrete log of zero")
        return int(self.log[x])

    def subfield_profile(self, x: int) -> set[int]:
        """Divisors d of n with x in F_{p^d}."""
        return {d for d in divisors(self.n) if self.frobenius(x, d % self.n) == x}

    def subfield_encodings(self, d: int) -> list[int]:
        """Sorted encodings of the subfield F_{p^d} (d must divide n)."""
        if self.n % d:
            raise ValueError(f"{d} does not divide extension degree {self.n}")
        fixed = [0] + [
            int(e)
            for e in self.exp[:: (self.q - 1) // (self.p**d - 1)]
        ]
        return sorted(fixed)

    # -- vectorized arithmetic on encoding arrays --

    def add_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i in range(self.n):
            out += (((a // self._pp[i]) + (b // self._pp[i])) % self.p) * self._pp[i]
        return out

    def neg_vec(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        out = np.zeros(a.shape, dtype=np.int64)
        for i in range(self.n):
            out += ((-(a // self._pp[i])) % self.p) * self._pp[i]
        return out

    def sub_vec(self, a, b) -> np.ndarray:
        return self.add_vec(a, self.neg_vec(b))

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        la = self.log[np.where(a != 0, a, 1)]
        lb = self.log[np.where(b != 0, b, 1)]
        prod = self.exp[(la + lb) % (self.q - 1)]
        return np.where(nz, prod, 0)

    def div_vec(self, a, b) -> np.ndarray:
        """Elementwise a/b; b must be nonzero everywhere."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if np.any(b == 0):
            raise DivisionByZero("division by zero in vectorized divide")
        nz = a != 0
        la = self.log[np.where(nz, a, 1)]
        quot = self.exp[(la - self.log[b]) % (self.q - 1)]
        return np.where(nz, quot, 0)

    def scalar_mul_table(self, s: int) -> np.ndarray:
        """Array T with T[e] = e * s for every encoding e."""
        if s == 0:
            return np.zeros(self.q, dtype=np.int64)
        table = np.zeros(self.q, dtype=np.int64)
        shift = (np.arange(self.q - 1, dtype=np.int64) + int(self.log[s])) % (self.q - 1)
        table[self.exp] = self.exp[shift]
        return table

    def frob_table(self, j: int) -> np.ndarray:
        """Array F with F[e] = e^(p^j)."""
        j %= self.n
        table = np.zeros(self.q, dtype=np.int64)
        idx = (np.arange(self.q - 1, dtype=np.int64) * self._pp[j]) % (self.q - 1)
        table[self.exp] = self.exp[idx]
        return table

    # -- misc --

    def elements(self) -> range:
        return range(self.q)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "modulus": list(self.modulus),
            "g": self.g,
        }

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={list(self.modulus)}, g={self.g})"

    def __reduce__(self):
        # rebuild rather than pickling tables; construction is deterministic
        return (build_field, (self.p, self.n, max(self.q, DEFAULT_FIELD_CAP)))


@functools.lru_cache(maxsize=None)
def build_field(p: int, n: int, cap: int = DEFAULT_FIELD_CAP) -> FieldCtx:
    """Construct (or fetch the cached) canonical F_{p^n}."""
    return FieldCtx(p, n, cap)
