"""Binary circulants as polynomials in GF(2)[x]/(x^p - 1).

A circulant is stored as its first row packed into a Python int (bit i is the
coefficient of x^i). Row r of the matrix is the first row rotated right by r,
so row-vector-times-circulant is polynomial multiplication and the matrix
product of two circulants is the product of their polynomials.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotInvertible, PivotNotInvertible, SizeMismatch

# below this many set bits in the sparser operand, shift-and-xor beats Kronecker
_SPARSE_CUTOFF = 48


def bits_to_int(bits) -> int:
    bits = np.asarray(bits, dtype=np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def int_to_bits(value: int, length: int) -> np.ndarray:
    raw = value.to_bytes((length + 7) // 8 or 1, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length].copy()


def _set_bits(value: int):
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)[x]) product, no reduction."""
    if not a or not b:
        return 0
    wa, wb = a.bit_count(), b.bit_count()
    if wa > wb:
        a, b, wa, wb = b, a, wb, wa
    if wa <= _SPARSE_CUTOFF:
        out = 0
        for i in _set_bits(a):
            out ^= b << i
        return out
    # Kronecker substitution: one coefficient per slot, integer product, parity of each slot
    nbits = max(a.bit_length(), b.bit_length())
    dtype = np.dtype("<u2") if wa < (1 << 16) else np.dtype("<u4")
    A = int.from_bytes(int_to_bits(a, nbits).astype(dtype).tobytes(), "little")
    B = int.from_bytes(int_to_bits(b, nbits).astype(dtype).tobytes(), "little")
    prod_len = a.bit_length() + b.bit_length() - 1
    raw = (A * B).to_bytes(prod_len * dtype.itemsize, "little")
    slots = np.frombuffer(raw, dtype=dtype)[:prod_len] & 1
    return bits_to_int(slots.astype(np.uint8))


def reduce_cyclic(value: int, p: int) -> int:
    mask = (1 << p) - 1
    while value >> p:
        value = (value & mask) ^ (value >> p)
    return value


def polymul_mod(a: int, b: int, p: int) -> int:
    return reduce_cyclic(clmul(a, b), p)


def _gf2_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q |= 1 << s
        a ^= b << s
    return q, a


def gf2_gcd_inverse(a: int, modulus: int) -> tuple[int, int]:
    """Extended Euclid in GF(2)[x]: returns (gcd, s) with s*a = gcd mod modulus."""
    r0, r1 = modulus, a
    s0, s1 = 0, 1
    while r1:
        q, r = _gf2_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
    return r0, s0


def transpose_row(row: int, p: int) -> int:
    """First row of the transposed circulant: coefficient i moves to (p - i) mod p."""
    bits = int_to_bits(row, p)
    return bits_to_int(np.roll(bits[::-1], 1))


@dataclass(frozen=True)
class Circulant:
    p: int
    row: int

    def __post_init__(self):
        if self.row >> self.p:
            raise SizeMismatch(f"first row wider than p={self.p}")

    @classmethod
    def identity(cls, p: int) -> "Circulant":
        return cls(p, 1)

    @classmethod
    def zero(cls, p: int) -> "Circulant":
        return cls(p, 0)

    @classmethod
    def from_bits(cls, bits) -> "Circulant":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(len(bits), bits_to_int(bits))

    @classmethod
    def from_string(cls, s: str) -> "Circulant":
        return cls.from_bits([int(c) for c in s])

    @classmethod
    def from_support(cls, p: int, support) -> "Circulant":
        row = 0
        for i in support:
            row |= 1 << (i % p)
        return cls(p, row)

    @property
    def bits(self) -> np.ndarray:
        return int_to_bits(self.row, self.p)

    @property
    def weight(self) -> int:
        return self.row.bit_count()

    @property
    def support(self) -> list[int]:
        return list(_set_bits(self.row))

    def __str__(self):
        return "".join(map(str, self.bits))

    def _same_size(self, other: "Circulant"):
        if self.p != other.p:
            raise SizeMismatch(f"circulant sizes differ: {self.p} vs {other.p}")

    def __add__(self, other: "Circulant") -> "Circulant":
        self._same_size(other)
        return Circulant(self.p, self.row ^ other.row)

    def __mul__(self, other: "Circulant") -> "Circulant":
        return circ_mul(self, other)

    def transpose(self) -> "Circulant":
        return Circulant(self.p, transpose_row(self.row, self.p))

    @property
    def T(self) -> "Circulant":
        return self.transpose()

    def inverse(self) -> "Circulant":
        return circ_inverse(self)

    def is_invertible(self) -> bool:
        if self.weight % 2 == 0:
            return False
        g, _ = gf2_gcd_inverse(self.row, (1 << self.p) | 1)
        return g == 1

    def shifted(self, i: int) -> "Circulant":
        """Multiply by x^i (rotate the first row right by i)."""
        i %= self.p
        mask = (1 << self.p) - 1
        return Circulant(self.p, ((self.row << i) | (self.row >> (self.p - i))) & mask)

    def dense(self) -> np.ndarray:
        if self.p > 4096:
            raise ValueError("refusing to materialize a circulant with p > 4096")
        b = self.bits
        return np.stack([np.roll(b, r) for r in range(self.p)])

    def vec_mul(self, v: int) -> int:
        """Row vector (as packed int) times this circulant."""
        return polymul_mod(v, self.row, self.p)


def circ_mul(a: Circulant, b: Circulant) -> Circulant:
    a._same_size(b)
    return Circulant(a.p, polymul_mod(a.row, b.row, a.p))


def circ_inverse(a: Circulant) -> Circulant:
    """Inverse modulo x^p - 1; raises NotInvertible when gcd(a, x^p - 1) != 1."""
    if a.row == 0 or a.weight % 2 == 0:
        raise NotInvertible("even-weight circulant is divisible by (x + 1)")
    g, s = gf2_gcd_inverse(a.row, (1 << a.p) | 1)
    if g != 1:
        raise NotInvertible(f"gcd with x^{a.p} + 1 has degree {g.bit_length() - 1}")
    return Circulant(a.p, reduce_cyclic(s, a.p))


class BlockRowParityCheck:
    """H = [H_0 ... H_{n0-1}] with one designated invertible pivot block."""

    def __init__(self, blocks, pivot=None):
        blocks = tuple(blocks)
        if not blocks:
            raise ValueError("need at least one block")
        p = blocks[0].p
        if any(b.p != p for b in blocks):
            raise SizeMismatch("all circulant blocks must share p")
        self.blocks = blocks
        self.p = p
        self.pivot = len(blocks) - 1 if pivot is None else pivot
        if not 0 <= self.pivot < len(blocks):
            raise ValueError("pivot out of range")

    def __repr__(self):
        return f"BlockRowParityCheck(n0={self.n0}, p={self.p}, pivot={self.pivot})"

    @property
    def n0(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return self.n0 * self.p

    @property
    def k(self) -> int:
        return (self.n0 - 1) * self.p

    @property
    def message_blocks(self) -> list[int]:
        return [i for i in range(self.n0) if i != self.pivot]

    @cached_property
    def transposed_rows(self) -> tuple[int, ...]:
        return tuple(transpose_row(b.row, self.p) for b in self.blocks)

    @cached_property
    def pivot_inverse(self) -> Circulant:
        try:
            return circ_inverse(self.blocks[self.pivot])
        except NotInvertible as exc:
            raise PivotNotInvertible(f"pivot block {self.pivot} is singular") from exc

    def split(self, v) -> list[int]:
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.n,):
            raise SizeMismatch(f"expected {self.n} bits, got {v.shape}")
        p = self.p
        return [bits_to_int(v[i * p:(i + 1) * p]) for i in range(self.n0)]

    def join(self, parts) -> np.ndarray:
        return np.concatenate([int_to_bits(x, self.p) for x in parts])

    def syndrome(self, v) -> np.ndarray:
        return int_to_bits(self.syndrome_int(self.split(v)), self.p)

    def syndrome_int(self, parts) -> int:
        acc = 0
        for part, ht in zip(parts, self.transposed_rows):
            acc ^= clmul(part, ht)
        return reduce_cyclic(acc, self.p)

    def dense(self) -> np.ndarray:
        return np.hstack([b.dense() for b in self.blocks])


def mul_vec_H(v, H: BlockRowParityCheck) -> np.ndarray:
    """Syndrome H v^T as a length-p bit vector."""
    return H.syndrome(v)


class QcGenerator:
    """Systematic generator: message occupies the non-pivot blocks, parity the pivot.

    With the pivot last this is G = [I_k | C], C_i = (H_piv^-1 H_i)^T.
    """

    def __init__(self, H: BlockRowParityCheck):
        self.H = H
        p = H.p
        inv = H.pivot_inverse
        pivot_block = H.blocks[H.pivot]
        parity = []
        for i in H.message_blocks:
            c = circ_mul(inv, H.blocks[i]).transpose()
            # H_i + H_piv * C_i^T must vanish
            if (circ_mul(pivot_block, c.transpose()) + H.blocks[i]).row:
                raise AssertionError("generator block fails H * G^T = 0")
            parity.append(c)
        self.parity_blocks = tuple(parity)
        self.p = p

    @property
    def k(self) -> int:
        return self.H.k

    @property
    def n(self) -> int:
        return self.H.n

    def parity_int(self, message_parts) -> int:
        acc = 0
        for part, c in zip(message_parts, self.parity_blocks):
            acc ^= clmul(part, c.row)
        return reduce_cyclic(acc, self.p)

    def encode(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.uint8)
        if m.shape != (self.k,):
            raise SizeMismatch(f"message must have {self.k} bits, got {m.shape}")
        p = self.p
        parts = [bits_to_int(m[j * p:(j + 1) * p]) for j in range(len(self.parity_blocks))]
        out = [0] * self.H.n0
        for j, i in enumerate(self.H.message_blocks):
            out[i] = parts[j]
        out[self.H.pivot] = self.parity_int(parts)
        return self.H.join(out)

    def extract(self, codeword) -> np.ndarray:
        """Systematic message bits of a codeword."""
        codeword = np.asarray(codeword, dtype=np.uint8)
        p = self.p
        return np.concatenate([codeword[i * p:(i + 1) * p] for i in self.H.message_blocks])

    def dense(self) -> np.ndarray:
        k, p = self.k, self.p
        G = np.zeros((k, self.n), dtype=np.uint8)
        for row in range(k):
            e = np.zeros(k, dtype=np.uint8)
            e[row] = 1
            G[row] = self.encode(e)
        return G


def build_generator(H: BlockRowParityCheck) -> QcGenerator:
    return QcGenerator(H)


def mul_vec_G(m, G: QcGenerator) -> np.ndarray:
    return G.encode(m)


class RightInverse:
    """Canonical right inverse of H: zero everywhere except H_piv^-1 at the pivot block.

    ``apply(z)`` returns e with H e^T = z^T.
    """

    def __init__(self, H: BlockRowParityCheck):
        self.H = H
        # H_piv u^T = z^T  <=>  u(x) * h_piv^T(x) = z(x)
        self._factor = H.pivot_inverse.transpose().row

    def apply_int(self, z: int) -> int:
        return polymul_mod(z, self._factor, self.H.p)

    def apply(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.uint8)
        if z.shape != (self.H.p,):
            raise SizeMismatch(f"z must have {self.H.p} bits")
        parts = [0] * self.H.n0
        parts[self.H.pivot] = self.apply_int(bits_to_int(z))
        return self.H.join(parts)

    def dense(self) -> np.ndarray:
        p = self.H.p
        out = np.zeros((self.H.n, p), dtype=np.uint8)
        piv = self.H.pivot
        out[piv * p:(piv + 1) * p] = self.H.pivot_inverse.dense()
        return out


def right_inverse(H: BlockRowParityCheck) -> RightInverse:
    H.pivot_inverse  # raises PivotNotInvertible early
    return RightInverse(H)


def check_girth6(H: BlockRowParityCheck) -> bool:
    """True iff no two columns of the expanded H share more than one row.

    Columns of block i have supports {c - j : j in S_i}; two columns collide in
    two rows exactly when a difference j - j' (mod p) repeats.
    """
    p = H.p
    supports = [b.support for b in H.blocks]
    for a in range(H.n0):
        for b in range(a, H.n0):
            diffs = Counter((x - y) % p for x in supports[a] for y in supports[b])
            if a == b:
                diffs.pop(0, None)  # a column against itself
            if any(v > 1 for v in diffs.values()):
                return False
    return True
