"""Arithmetic in GF(p^t) with exp/log tables.

Elements are plain ints: the polynomial-basis coordinates (c_0, ..., c_{t-1})
packed base p, so ``value = sum(c_i * p**i)``. 0 is the additive identity and
1 the multiplicative identity. Tables are numpy arrays; ``exp[i]`` is alpha^i.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, FieldTooLarge, NonPrimeCharacteristic, NotASubfield

MAX_ORDER = 1 << 24
_SEED_BLOCK = 8192


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


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**s; raises NonPrimeCharacteristic if q is not a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            s, r = 0, q
            while r % p == 0:
                r //= p
                s += 1
            if r != 1 or not is_prime(p):
                raise NonPrimeCharacteristic(f"{q} is not a prime power")
            return p, s
    raise NonPrimeCharacteristic(f"{q} is not a prime power")


# -- dense polynomial helpers over GF(p); coefficient lists, low degree first --

def _poly_mulmod(a, b, mod, p):
    t = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # mod is monic
    for d in range(len(prod) - 1, t - 1, -1):
        c = prod[d]
        if c:
            for j in range(t + 1):
                prod[d - t + j] = (prod[d - t + j] - c * mod[j]) % p
    res = prod[:t] + [0] * (t - len(prod[:t]))
    return res


def _poly_powmod(a, e, mod, p):
    t = len(mod) - 1
    result = [1] + [0] * (t - 1)
    base = list(a) + [0] * (t - len(a))
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _has_full_order(g, mod, p, order):
    one = [1] + [0] * (len(mod) - 2)
    if _poly_powmod(g, order, mod, p) != one:
        return False
    return all(_poly_powmod(g, order // r, mod, p) != one for r in prime_factors(order))


def _digits(value: int, p: int, t: int) -> list[int]:
    out = []
    for _ in range(t):
        value, d = divmod(value, p)
        out.append(d)
    return out


def _pack(digits, p: int) -> int:
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


@lru_cache(maxsize=None)
def primitive_modulus(p: int, t: int) -> tuple[int, ...]:
    """Smallest monic primitive polynomial of degree t over GF(p).

    Candidates are scanned in increasing packed-integer order of the lower
    coefficients, so the result is deterministic (e.g. x^3 + x + 1 for GF(8)).
    """
    order = p**t - 1
    x = [0, 1] if t > 1 else None
    for low in range(1, p**t):
        coeffs = _digits(low, p, t)
        if coeffs[0] == 0:
            continue
        mod = coeffs + [1]
        g = x if t > 1 else [(-mod[0]) % p]
        if _has_full_order(g, mod, p, order):
            return tuple(mod)
    raise AssertionError(f"no primitive polynomial of degree {t} over GF({p})")


class GaloisField:
    """GF(p^t) with exp/log tables built from a primitive generator.

    Immutable after construction; all methods are read-only.
    """

    def __init__(self, p: int, t: int, modulus=None):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if t < 1:
            raise ValueError("extension degree must be >= 1")
        if p**t > MAX_ORDER:
            raise FieldTooLarge(f"GF({p}^{t}) exceeds the table limit of 2^24 elements")
        self.p = p
        self.t = t
        self.order = p**t
        self.modulus = tuple(modulus) if modulus is not None else primitive_modulus(p, t)
        if len(self.modulus) != t + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree t")
        self.generator = self._find_generator()
        self.exp, self.log = self._build_tables()
        self.exp.flags.writeable = False
        self.log.flags.writeable = False

    def __repr__(self):
        return f"GaloisField({self.p}, {self.t})"

    @property
    def alpha(self) -> int:
        return self.generator

    @property
    def nonzero_count(self) -> int:
        return self.order - 1

    def _find_generator(self) -> int:
        mod = list(self.modulus)
        n = self.order - 1
        if n == 1:
            return 1
        first = 1 if self.t == 1 else self.p  # the polynomial "x"
        if self.t == 1:
            first = (-mod[0]) % self.p
        candidates = [first] + [g for g in range(2, min(self.order, 4096)) if g != first]
        for g in candidates:
            if _has_full_order(_digits(g, self.p, self.t), mod, self.p, n):
                return g
        raise ValueError(f"modulus {self.modulus} does not define GF({self.p}^{self.t})")

    def _mul_matrix(self, elem: int) -> np.ndarray:
        """t x t matrix M over GF(p) with digits(v * elem) = digits(v) @ M."""
        mod = list(self.modulus)
        e = _digits(elem, self.p, self.t)
        rows = []
        for j in range(self.t):
            basis = [0] * self.t
            basis[j] = 1
            rows.append(_poly_mulmod(basis, e, mod, self.p))
        return np.array(rows, dtype=np.int64)

    def _build_tables(self):
        n = self.order - 1
        p, t = self.p, self.t
        mod = list(self.modulus)
        g = _digits(self.generator, p, t)
        block = min(n, _SEED_BLOCK)
        seed = np.empty((block, t), dtype=np.int64)
        cur = [1] + [0] * (t - 1)
        for i in range(block):
            seed[i] = cur
            cur = _poly_mulmod(cur, g, mod, p)
        weights = p ** np.arange(t, dtype=np.float64)
        exp = np.empty(n, dtype=np.int64)
        exp[:block] = (seed @ weights.astype(np.int64))
        # chunk j holds seed * alpha^(j*block); float matmul is exact at these sizes
        seed_f = seed.astype(np.float64)
        jump = self._mul_matrix(_pack(cur, p))
        acc = jump.copy()
        pos = block
        while pos < n:
            take = min(block, n - pos)
            chunk = np.mod(seed_f[:take] @ acc.astype(np.float64), p)
            exp[pos:pos + take] = (chunk @ weights).astype(np.int64)
            acc = (acc @ jump) % p
            pos += take
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        if (log[1:] < 0).any() or exp[0] != 1:
            raise ValueError("generator is not primitive")
        return exp, log

    # -- scalar arithmetic --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        out, w = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * w
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        out, w = 0, 1
        while a:
            a, d = divmod(a, p)
            out += ((-d) % p) * w
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self.order - 1
        return int(self.exp[(self.log[a] + self.log[b]) % n])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        n = self.order - 1
        return int(self.exp[(-self.log[a]) % n])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("zero to a negative power")
            return 1 if e == 0 else 0
        n = self.order - 1
        return int(self.exp[(int(self.log[a]) * e) % n])

    def alpha_pow(self, i: int) -> int:
        return int(self.exp[i % (self.order - 1)])

    # -- vectorized helpers used by the geometry code --

    def add_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.t):
            a, da = np.divmod(a, p)
            b, db = np.divmod(b, p)
            out += ((da + db) % p) * w
            w *= p
        return out

    def neg_arrays(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        p = self.p
        out = np.zeros_like(a)
        w = 1
        for _ in range(self.t):
            a, d = np.divmod(a, p)
            out += ((-d) % p) * w
            w *= p
        return out

    def mul_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n = self.order - 1
        out = self.exp[(self.log[a] + self.log[b]) % n]
        return np.where((a == 0) | (b == 0), 0, out)

    def subfield_embedding(self, small_order: int) -> list[int]:
        """Elements of the GF(small_order) copy inside this field.

        Returns ``[0, beta^0, beta^1, ..., beta^(small_order-2)]`` with
        beta = alpha^((order-1)/(small_order-1)).
        """
        if small_order < 2 or (self.order - 1) % (small_order - 1):
            raise NotASubfield(f"GF({small_order}) is not a subfield of GF({self.order})")
        # GF(p^s) sits inside GF(p^t) iff s | t
        try:
            sp, s = prime_power(small_order)
        except NonPrimeCharacteristic:
            raise NotASubfield(f"{small_order} is not a prime power") from None
        if sp != self.p or self.t % s:
            raise NotASubfield(f"GF({small_order}) is not a subfield of GF({self.order})")
        step = (self.order - 1) // (small_order - 1)
        return [0] + [int(self.exp[(i * step) % (self.order - 1)]) for i in range(small_order - 1)]


@lru_cache(maxsize=32)
def field_create(p: int, t: int) -> GaloisField:
    """Cached constructor for GF(p^t) with the default primitive modulus."""
    return GaloisField(p, t)
