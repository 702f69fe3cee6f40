"""Finite fields GF(p^m) of odd characteristic.

Elements are plain integers: the position of the element in the field's fixed
enumeration.  Index 0 is always zero.  For prime fields the enumeration is the
natural one ``0, 1, ..., p-1``; for extension fields it is ``0, g^0, g^1, ...,
g^(q-2)`` for the fixed primitive element ``g`` of the modulus, so index ``i``
for ``i >= 1`` is ``g^(i-1)``.

All arithmetic methods accept Python ints or integer numpy arrays and broadcast
like numpy ufuncs.  Scalars in give scalars out.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .errors import NoModulusKnown, NonSquareOrder, NotADivisor, NotOddPrime, ReducibleModulus

# Conway polynomials, coefficients low to high, monic.
CONWAY = {
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (11, 4): (2, 10, 8, 0, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
    (13, 4): (2, 12, 3, 0, 1),
}

# Full add/mul tables are built below this order; larger fields use log arithmetic.
TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _poly_mod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``f`` over GF(p)."""
    a = [c % p for c in a]
    deg = len(f) - 1
    for top in range(len(a) - 1, deg - 1, -1):
        c = a[top]
        if c:
            for i in range(deg + 1):
                a[top - deg + i] = (a[top - deg + i] - c * f[i]) % p
    return (a + [0] * deg)[:deg]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility test for a monic polynomial over GF(p)."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for tail in range(p**d):
            g = [(tail // p**i) % p for i in range(d)] + [1]
            if not any(_poly_mod(list(f), g, p)):
                return False
    return True


class Field:
    """The field GF(p^m) with a deterministic zero-first enumeration.

    >>> F = Field(3, 2)
    >>> F.q, F.mul(2, 2)
    (9, 3)
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p) or p == 2:
            raise NotOddPrime(f"characteristic must be an odd prime, got {p}")
        if m < 1:
            raise NoModulusKnown(f"extension degree must be >= 1, got {m}")
        if modulus is None:
            if m == 1:
                modulus = (0, 1)
            elif (p, m) in CONWAY:
                modulus = CONWAY[(p, m)]
            else:
                raise NoModulusKnown(f"no built-in modulus for GF({p}^{m}); supply one")
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ReducibleModulus(f"modulus must be monic of degree {m}")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(f"{modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = tuple(int(c) for c in modulus)
        self._build()

    # -- construction -----------------------------------------------------

    def _mul_x_enc(self, enc: int, g_coeffs: list[int]) -> int:
        p, m = self.p, self.m
        a = [(enc // p**i) % p for i in range(m)]
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, gj in enumerate(g_coeffs):
                    prod[i + j] += ai * gj
        r = _poly_mod(prod, self.modulus, p)
        return sum(c * p**i for i, c in enumerate(r))

    def _build(self) -> None:
        p, m, q = self.p, self.m, self.q
        if m == 1:
            enc_order = list(range(p))
            g = next(c for c in range(2, p + 1) if _order_mod(c % p, p) == p - 1) % p if p > 2 else 1
            exp = [1]
            for _ in range(q - 2):
                exp.append(exp[-1] * g % p)
            exp_idx = np.array(exp, dtype=np.int64)
        else:
            exp_enc = None
            for cand in range(p, q):
                coeffs = [(cand // p**i) % p for i in range(m)]
                powers = [1]
                for _ in range(q - 2):
                    powers.append(self._mul_x_enc(powers[-1], coeffs))
                if len(set(powers)) == q - 1:
                    exp_enc = powers
                    break
            if exp_enc is None:  # pragma: no cover - irreducible moduli always have one
                raise ReducibleModulus("no primitive element found")
            enc_order = [0] + exp_enc
            exp_idx = np.arange(1, q, dtype=np.int64)
        self._enc = np.array(enc_order, dtype=np.int64)
        self._idx_of_enc = np.empty(q, dtype=np.int64)
        self._idx_of_enc[self._enc] = np.arange(q)
        self._digits = np.stack([(self._enc // p**i) % p for i in range(m)], axis=-1)
        self._pw = p ** np.arange(m, dtype=np.int64)
        self._exp = exp_idx
        self._log = np.full(q, -1, dtype=np.int64)
        self._log[exp_idx] = np.arange(q - 1)
        self._neg = self._idx_of_enc[((-self._digits) % p) @ self._pw]
        self._inv = np.zeros(q, dtype=np.int64)
        self._inv[1:] = self._exp[(-self._log[1:]) % (q - 1)]
        self._add_t = self._mul_t = None
        if q <= TABLE_LIMIT:
            a = np.arange(q)[:, None]
            b = np.arange(q)[None, :]
            self._add_t = self._add_slow(a, b)
            self._mul_t = self._mul_slow(a, b)

    # -- descriptors ------------------------------------------------------

    def __repr__(self) -> str:
        return f"Field(p={self.p}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def to_dict(self) -> dict[str, Any]:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Field:
        return make_field(d["p"], d["m"], d.get("modulus"))

    @property
    def order_list(self) -> list[tuple[int, ...]]:
        """Coefficient vectors (low to high) of the elements, in enumeration order."""
        return [tuple(int(c) for c in row) for row in self._digits]

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @property
    def is_square_order(self) -> bool:
        return self.m % 2 == 0

    @property
    def sqrt_order(self) -> int:
        """``q0`` with ``q0**2 == q``; the qudit alphabet for Hermitian constructions."""
        if not self.is_square_order:
            raise NonSquareOrder(f"GF({self.q}) does not have square order")
        return self.p ** (self.m // 2)

    @cached_property
    def generator(self) -> int:
        """Index of the fixed primitive element."""
        return int(self._exp[1]) if self.q > 2 else 1

    @cached_property
    def lam(self) -> int:
        """The constant (p-1)/2, i.e. the solution of 2x + 1 = 0."""
        return self.from_int((self.p - 1) // 2)

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits[x])

    def from_coeffs(self, c: Sequence[int]) -> int:
        c = list(c) + [0] * (self.m - len(c))
        return int(self._idx_of_enc[int(np.dot(np.array(c[: self.m]) % self.p, self._pw))])

    def from_int(self, c: Any) -> Any:
        """Embed integers (mod p) into the prime subfield."""
        c = np.asarray(c) % self.p
        return _out(self._idx_of_enc[c])

    # -- arithmetic -------------------------------------------------------

    def _add_slow(self, a, b):
        d = (self._digits[a] + self._digits[b]) % self.p
        return self._idx_of_enc[d @ self._pw]

    def _mul_slow(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self._add_t is not None:
            return _out(self._add_t[a, b])
        return _out(self._add_slow(a, b))

    def neg(self, a):
        return _out(self._neg[np.asarray(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self._mul_t is not None:
            return _out(self._mul_t[a, b])
        return _out(self._mul_slow(a, b))

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return _out(self._inv[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a)
        if e == 0:
            return _out(np.ones_like(a))
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self._exp[(self._log[a] * e) % (self.q - 1)]
        return _out(np.where(a == 0, 0, out))

    def sum(self, a, axis=None):
        """Field sum of an array along ``axis`` (all entries when ``None``)."""
        a = np.asarray(a)
        if axis is None:
            a = a.reshape(-1)
            axis = 0
        a = np.moveaxis(a, axis, 0)
        total = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            total = self.add(total, row)
        return _out(np.asarray(total))

    def dot(self, u, v) -> int:
        return int(self.sum(self.mul(u, v)))

    def conj(self, a):
        """Frobenius conjugate ``a**sqrt(q)``; defined only for square orders."""
        return self.pow(a, self.sqrt_order)

    # -- special functions ------------------------------------------------

    def sqrt(self, x: int) -> int | None:
        """First element ``y`` in enumeration order with ``y*y == x``, or ``None``."""
        squares = self.mul(self.elements, self.elements)
        hits = np.flatnonzero(squares == x)
        return int(hits[0]) if hits.size else None

    def subgroup(self, r: int) -> np.ndarray:
        """The ``r`` roots of ``X^r - 1``, ascending by enumeration index."""
        if r < 1 or (self.q - 1) % r:
            raise NotADivisor(f"{r} does not divide q-1 = {self.q - 1}")
        step = (self.q - 1) // r
        return np.sort(self._exp[np.arange(r) * step])

    def power_sum(self, r: int, t: int) -> int:
        """Sum of ``x**t`` over the roots of ``X^r - 1``.

        Equals ``r mod p`` when ``r | t`` and zero otherwise.
        """
        if r < 1 or (self.q - 1) % r:
            raise NotADivisor(f"{r} does not divide q-1 = {self.q - 1}")
        if t < 0:
            raise ValueError("exponent must be nonnegative")
        return self.from_int(r) if t % r == 0 else 0


def _order_mod(g: int, p: int) -> int:
    if g == 0:
        return 0
    k, x = 1, g
    while x != 1:
        x = x * g % p
        k += 1
    return k


def _out(x):
    x = np.asarray(x)
    return int(x) if x.ndim == 0 else x


_CACHE: dict[tuple, Field] = {}


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Build (or fetch the cached) GF(p^m)."""
    key = (p, m, None if modulus is None else tuple(int(c) % p for c in modulus))
    if key not in _CACHE:
        _CACHE[key] = Field(p, m, modulus)
    return _CACHE[key]


def field_of_order(q: int) -> Field:
    """GF(q) for an odd prime power ``q``."""
    for p in range(3, q + 1, 2):
        if is_prime(p) and q % p == 0:
            m = round(math.log(q, p))
            if p**m == q:
                return make_field(p, m)
            break
    raise NotOddPrime(f"{q} is not a power of an odd prime")


def conjugate(F: Field, x):
    return F.conj(x)


def power_sum(F: Field, r: int, t: int) -> int:
    return F.power_sum(r, t)


def sqrt(F: Field, x: int) -> int | None:
    return F.sqrt(x)
