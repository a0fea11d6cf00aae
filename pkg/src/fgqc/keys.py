"""Secret keys: generation, compact bit-exact serialization, expansion to H and P.

Serialized layout (most significant bit first)::

    header   kind:1  q:8  m:8  n0:8  l:16  pivot:ceil(log2 n0)
    payload  class index  x n0      ceil(log2 N_c) bits each
             shift        x (n0-1)  ceil(log2 p) bits each (block 0 is unshifted)
             Lehmer digit x l       digit i in ceil(log2(l - i)) bits
             seed                   128 bits

Only the payload is counted in ``key_size_report``.
"""
from __future__ import annotations

import math
import secrets
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .circulant import BlockRowParityCheck, Circulant, QcGenerator, RightInverse
from .errors import (
    BadBlockLength,
    InvalidGeometry,
    MalformedKey,
    NoInvertibleBlock,
    TooFewClasses,
    UnknownGeometry,
)
from .geometry import GeometryKind, GeometrySpec, Line, canonicalize, enumerate_cyclic_classes

SEED_BITS = 128
KEY_MAGIC = b"FGQC"
KEYGEN_RETRIES = 64


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


# -- permutations --

def lehmer_encode(perm) -> list[int]:
    """Factorial-number-system digits: d_i = #{j > i : perm[j] < perm[i]}."""
    perm = np.asarray(perm)
    return [int((perm[i + 1:] < perm[i]).sum()) for i in range(len(perm))]


def lehmer_decode(digits) -> list[int]:
    pool = list(range(len(digits)))
    return [pool.pop(d) for d in digits]


def permutation_bits(l: int) -> int:
    """Closed form for sum_{i=1..l} ceil(log2 i), with l' = 2^floor(log2 l)."""
    if l < 1:
        return 0
    lp = 1 << (l.bit_length() - 1)
    return l * lp.bit_length() - 2 * lp + 1


@dataclass(frozen=True)
class PermutationBlock:
    """pi on [0, l): position i moves to map[i]."""

    map: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.map) != list(range(len(self.map))):
            raise ValueError("not a permutation")

    @property
    def l(self) -> int:
        return len(self.map)

    @classmethod
    def identity(cls, l: int) -> "PermutationBlock":
        return cls(tuple(range(l)))

    @classmethod
    def random(cls, l: int, rng: np.random.Generator) -> "PermutationBlock":
        return cls(tuple(int(x) for x in rng.permutation(l)))

    def inverse(self) -> "PermutationBlock":
        inv = [0] * self.l
        for i, d in enumerate(self.map):
            inv[d] = i
        return PermutationBlock(tuple(inv))

    def lehmer(self) -> list[int]:
        return lehmer_encode(self.map)

    @classmethod
    def from_lehmer(cls, digits) -> "PermutationBlock":
        return cls(tuple(lehmer_decode(digits)))


# -- bit packing --

class BitWriter:
    def __init__(self):
        self.value = 0
        self.length = 0

    def write(self, v: int, width: int):
        if width == 0:
            if v:
                raise ValueError("nonzero value in zero-width field")
            return
        if v < 0 or v >> width:
            raise ValueError(f"{v} does not fit in {width} bits")
        self.value = (self.value << width) | v
        self.length += width

    def to_bytes(self) -> bytes:
        pad = (-self.length) % 8
        return (self.value << pad).to_bytes((self.length + pad) // 8, "big")

    def bitstring(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""


class BitReader:
    def __init__(self, data: bytes):
        self.value = int.from_bytes(data, "big")
        self.length = len(data) * 8
        self.pos = 0

    @classmethod
    def from_bitstring(cls, bits: str) -> "BitReader":
        r = cls(b"")
        r.value = int(bits, 2) if bits else 0
        r.length = len(bits)
        return r

    def read(self, width: int) -> int:
        if width == 0:
            return 0
        if self.pos + width > self.length:
            raise MalformedKey("key data truncated")
        shift = self.length - self.pos - width
        self.pos += width
        return (self.value >> shift) & ((1 << width) - 1)

    @property
    def remaining(self) -> int:
        return self.length - self.pos


# -- keys --

@dataclass(frozen=True)
class KeySizeReport:
    bits_H: int
    bits_P: int
    bits_S: int

    @property
    def total(self) -> int:
        return self.bits_H + self.bits_P + self.bits_S


def key_size_report(spec: GeometrySpec, n0: int, l: int) -> KeySizeReport:
    """Payload bits for H, P and the seed.

    Class indices take ceil(log2 N_c) bits, which is what reproduces the
    reference totals (e.g. 92 bits of H for EG*(6,3) with n0 = 6).
    """
    bits_H = n0 * ceil_log2(spec.class_count) + (n0 - 1) * ceil_log2(spec.points)
    return KeySizeReport(bits_H, permutation_bits(l), SEED_BITS)


@dataclass(frozen=True)
class SecretKey:
    geometry: GeometrySpec
    n0: int
    class_ids: tuple[int, ...]
    shifts: tuple[int, ...]
    pivot: int
    perm: PermutationBlock
    seed: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.class_ids) != self.n0 or len(self.shifts) != self.n0:
            raise MalformedKey("class/shift count does not match n0")
        if len(set(self.class_ids)) != self.n0:
            raise MalformedKey("class indices must be distinct")
        if any(not 0 <= c < self.geometry.class_count for c in self.class_ids):
            raise MalformedKey("class index out of range")
        if self.shifts[0] != 0 or any(not 0 <= s < self.p for s in self.shifts):
            raise MalformedKey("shifts must lie in [0, p) with the first block unshifted")
        if not 0 <= self.pivot < self.n0:
            raise MalformedKey("pivot out of range")
        if len(self.seed) * 8 != SEED_BITS:
            raise MalformedKey("seed must be 128 bits")
        if self.n % self.perm.l:
            raise BadBlockLength(f"permutation block length {self.perm.l} does not divide n={self.n}")

    @property
    def p(self) -> int:
        return self.geometry.points

    @property
    def n(self) -> int:
        return self.n0 * self.p

    @property
    def k(self) -> int:
        return (self.n0 - 1) * self.p

    @property
    def l(self) -> int:
        return self.perm.l

    @cached_property
    def H(self) -> BlockRowParityCheck:
        return expand_H(self)

    @cached_property
    def G(self) -> QcGenerator:
        return QcGenerator(self.H)

    @cached_property
    def H_inv(self) -> RightInverse:
        return RightInverse(self.H)

    @cached_property
    def P(self) -> np.ndarray:
        return expand_P(self, self.n)

    @cached_property
    def P_inv(self) -> np.ndarray:
        inv = np.empty_like(self.P)
        inv[self.P] = np.arange(self.n)
        return inv

    def size_report(self) -> KeySizeReport:
        return key_size_report(self.geometry, self.n0, self.l)


def _as_rng(entropy) -> np.random.Generator:
    if isinstance(entropy, np.random.Generator):
        return entropy
    if entropy is None:
        entropy = secrets.randbits(128)
    if isinstance(entropy, (bytes, bytearray)):
        entropy = int.from_bytes(entropy, "big")
    return np.random.default_rng(entropy)


def keygen(spec: GeometrySpec, n0: int, l: int, entropy=None) -> SecretKey:
    """Draw a fresh secret key.

    ``entropy`` may be a numpy Generator, an int/bytes seed, or None for system
    entropy; identical entropy yields an identical key.
    """
    classes = enumerate_cyclic_classes(spec)
    nc, p = len(classes), spec.points
    if n0 < 2:
        raise TooFewClasses("need at least two circulant blocks")
    if n0 > nc:
        raise TooFewClasses(f"{spec} has {nc} cyclic classes, {n0} requested")
    if l < 1 or l >= 1 << 16 or (n0 * p) % l:
        raise BadBlockLength(f"permutation block length {l} must divide n={n0 * p}")
    if spec.rho % 2 == 0:
        raise NoInvertibleBlock("no invertible circulant block (even row weight)")
    rng = _as_rng(entropy)

    # invertibility is shift invariant, so it is a property of the class
    cache: dict[int, bool] = {}

    def invertible(c):
        if c not in cache:
            cache[c] = Circulant.from_support(p, classes[c].representative.points).is_invertible()
        return cache[c]

    ids = None
    for _ in range(KEYGEN_RETRIES):
        trial = [int(c) for c in rng.choice(nc, size=n0, replace=False)]
        if any(invertible(c) for c in trial):
            ids = trial
            break
    if ids is None:
        good = next((c for c in range(nc) if invertible(c)), None)
        if good is None:
            raise NoInvertibleBlock(f"no cyclic class of {spec} gives an invertible circulant")
        ids = trial if good in trial else trial[:-1] + [good]
    shifts = [0] + [int(s) for s in rng.integers(0, p, size=n0 - 1)]

    piv = max(i for i, c in enumerate(ids) if invertible(c))
    ids[piv], ids[-1] = ids[-1], ids[piv]
    shifts[piv], shifts[-1] = shifts[-1], shifts[piv]
    # shifting every block by the same amount permutes rows of H only
    s0 = shifts[0]
    shifts = [(s - s0) % p for s in shifts]

    perm = PermutationBlock.random(l, rng)
    seed = rng.bytes(SEED_BITS // 8)
    return SecretKey(spec, n0, tuple(ids), tuple(shifts), n0 - 1, perm, seed)


def expand_H(key: SecretKey) -> BlockRowParityCheck:
    classes = enumerate_cyclic_classes(key.geometry)
    blocks = [
        Circulant.from_support(key.p, classes[c].representative.points).shifted(s)
        for c, s in zip(key.class_ids, key.shifts)
    ]
    return BlockRowParityCheck(blocks, key.pivot)


def expand_P(key: SecretKey, n: int) -> np.ndarray:
    """Full permutation on [0, n): position i goes to P[i]; pi repeated per segment."""
    l = key.perm.l
    if n % l:
        raise BadBlockLength(f"block length {l} does not divide {n}")
    base = np.asarray(key.perm.map, dtype=np.int64)
    return (np.arange(0, n, l, dtype=np.int64)[:, None] + base[None, :]).ravel()


def recover_block_descriptor(key: SecretKey, i: int) -> tuple[int, int]:
    """Re-canonicalize block i of the expanded H into (class index, shift)."""
    classes = enumerate_cyclic_classes(key.geometry)
    cls, shift = canonicalize(Line.from_points(key.p, key.H.blocks[i].support))
    index = next(j for j, c in enumerate(classes) if c.representative == cls.representative)
    return index, shift


# -- serialization --

def _header_fields(key: SecretKey):
    g = key.geometry
    if g.q >= 256 or g.m >= 256 or key.n0 >= 256:
        raise MalformedKey("parameters exceed header field widths")
    return [
        (0 if g.kind is GeometryKind.EG else 1, 1),
        (g.q, 8),
        (g.m, 8),
        (key.n0, 8),
        (key.l, 16),
        (key.pivot, ceil_log2(key.n0)),
    ]


def _payload_fields(key: SecretKey):
    wc = ceil_log2(key.geometry.class_count)
    wp = ceil_log2(key.p)
    fields = [(c, wc) for c in key.class_ids]
    fields += [(s, wp) for s in key.shifts[1:]]
    l = key.l
    fields += [(d, ceil_log2(l - i)) for i, d in enumerate(key.perm.lehmer())]
    fields.append((int.from_bytes(key.seed, "big"), SEED_BITS))
    return fields


@dataclass(frozen=True)
class SerializedKey:
    header_bits: str
    payload_bits: str

    @property
    def bits(self) -> str:
        return self.header_bits + self.payload_bits

    def to_bytes(self) -> bytes:
        w = BitWriter()
        if self.bits:
            w.write(int(self.bits, 2), len(self.bits))
        return KEY_MAGIC + w.to_bytes()


def serialize(key: SecretKey) -> SerializedKey:
    h, pl = BitWriter(), BitWriter()
    for v, w in _header_fields(key):
        h.write(v, w)
    for v, w in _payload_fields(key):
        pl.write(v, w)
    return SerializedKey(h.bitstring(), pl.bitstring())


def _read_key(r: BitReader) -> SecretKey:
    kind = GeometryKind.PG if r.read(1) else GeometryKind.EG
    q, m, n0, l = r.read(8), r.read(8), r.read(8), r.read(16)
    try:
        spec = GeometrySpec(kind, m, q)
    except (InvalidGeometry, ValueError) as exc:
        raise UnknownGeometry(f"header names an invalid geometry: {exc}") from None
    if n0 < 1 or l < 1:
        raise MalformedKey("n0 and l must be positive")
    pivot = r.read(ceil_log2(n0))
    wc, wp = ceil_log2(spec.class_count), ceil_log2(spec.points)
    ids = tuple(r.read(wc) for _ in range(n0))
    shifts = (0,) + tuple(r.read(wp) for _ in range(n0 - 1))
    digits = [r.read(ceil_log2(l - i)) for i in range(l)]
    if any(d >= l - i for i, d in enumerate(digits)):
        raise MalformedKey("invalid permutation digits")
    seed = r.read(SEED_BITS).to_bytes(SEED_BITS // 8, "big")
    try:
        return SecretKey(spec, n0, ids, shifts, pivot, PermutationBlock.from_lehmer(digits), seed)
    except BadBlockLength as exc:
        raise MalformedKey(str(exc)) from None


def deserialize(bits) -> SecretKey:
    """Inverse of ``serialize``; accepts a SerializedKey or a bit string."""
    if isinstance(bits, SerializedKey):
        bits = bits.bits
    r = BitReader.from_bitstring(bits)
    key = _read_key(r)
    if r.remaining:
        raise MalformedKey(f"{r.remaining} trailing bits after key")
    return key


def key_to_bytes(key: SecretKey) -> bytes:
    return serialize(key).to_bytes()


def key_from_bytes(data: bytes) -> SecretKey:
    if data[:4] != KEY_MAGIC:
        raise MalformedKey("missing FGQC magic")
    r = BitReader(data[4:])
    key = _read_key(r)
    if r.remaining >= 8 or r.read(r.remaining):
        raise MalformedKey("unexpected data after key")
    return key


def write_key_file(path, key: SecretKey) -> None:
    Path(path).write_bytes(key_to_bytes(key))


def read_key_file(path) -> SecretKey:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise MalformedKey(f"cannot read key file: {exc}") from None
    return key_from_bytes(data)


def count_parity_check_matrices(spec: GeometrySpec, n0: int) -> int:
    """p^(n0-1) * N_c! / (N_c - n0)!"""
    return spec.points ** (n0 - 1) * math.perm(spec.class_count, n0)

