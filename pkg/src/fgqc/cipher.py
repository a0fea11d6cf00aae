"""Frame encryption: encode, add a secret perturbation, permute. Decryption undoes each step.

The perturbation is the canonical right inverse of H applied to a syndrome
taken from the keystream at the frame counter, so sender and receiver derive
the same vector without shared stream state.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circulant import bits_to_int, int_to_bits
from .errors import BadBlockLength, DecodeFailure, LengthMismatch, MalformedFrame
from .keys import SecretKey
from .keystream import DEFAULT_KEYSTREAM
from .spa import DecoderConfig, TannerGraph, decode_batch

FRAME_MAGIC = b"FGQF"
FRAME_HEADER = struct.Struct(">4sQI")
HARD_LLR = 4.0
MAX_COUNTER = (1 << 64) - 1


@dataclass(frozen=True)
class CiphertextFrame:
    counter: int
    payload: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, CiphertextFrame)
            and self.counter == other.counter
            and np.array_equal(self.payload, other.payload)
        )

    def to_bytes(self) -> bytes:
        bits = np.asarray(self.payload, dtype=np.uint8)
        return FRAME_HEADER.pack(FRAME_MAGIC, self.counter, bits.size) + np.packbits(bits).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0) -> tuple["CiphertextFrame", int]:
        """Parse one frame at ``offset``; returns the frame and the next offset."""
        end = offset + FRAME_HEADER.size
        if end > len(data):
            raise MalformedFrame("truncated frame header", offset)
        magic, counter, nbits = FRAME_HEADER.unpack_from(data, offset)
        if magic != FRAME_MAGIC:
            raise MalformedFrame("bad frame magic", offset)
        body = (nbits + 7) // 8
        if end + body > len(data):
            raise MalformedFrame(f"truncated payload: need {body} bytes, have {len(data) - end}", offset)
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8, count=body, offset=end))
        if bits[nbits:].any():
            raise MalformedFrame("nonzero padding bits", offset)
        return cls(counter, bits[:nbits].copy()), end + body


def iter_frames(data: bytes):
    offset = 0
    while offset < len(data):
        frame, offset = CiphertextFrame.from_bytes(data, offset)
        yield frame


@lru_cache(maxsize=8)
def tanner_graph(key: SecretKey) -> TannerGraph:
    return TannerGraph(key.H)


def derive_z(key: SecretKey, counter: int, keystream=DEFAULT_KEYSTREAM) -> np.ndarray:
    """The (n - k)-bit syndrome z for this frame counter."""
    if not 0 <= counter <= MAX_COUNTER:
        raise ValueError("counter must fit in 64 bits")
    return keystream.generate(key.seed, counter, key.n - key.k)


def perturbation(key: SecretKey, counter: int, keystream=DEFAULT_KEYSTREAM) -> np.ndarray:
    return key.H_inv.apply(derive_z(key, counter, keystream))


def _perturbation_int(key, counter, keystream) -> int:
    return key.H_inv.apply_int(bits_to_int(derive_z(key, counter, keystream)))


def _segments(v, pi):
    pi = np.asarray(getattr(pi, "map", pi), dtype=np.int64)
    v = np.asarray(v)
    l = pi.size
    if l == 0 or v.shape[-1] % l:
        raise BadBlockLength(f"block length {l} does not divide {v.shape[-1]}")
    return v.reshape(v.shape[:-1] + (-1, l)), pi


def segment_permute(v, pi) -> np.ndarray:
    """Apply one block permutation to every length-l segment: out[pi[i]] = v[i]."""
    seg, pi = _segments(v, pi)
    out = np.empty_like(seg)
    out[..., pi] = seg
    return out.reshape(np.shape(v))


def segment_unpermute(v, pi) -> np.ndarray:
    seg, pi = _segments(v, pi)
    return seg[..., pi].reshape(np.shape(v))


def permutation_apply(v, key: SecretKey) -> np.ndarray:
    """out[P[i]] = v[i], segment by segment; works on bits or LLRs."""
    v = np.asarray(v)
    if v.shape[-1] % key.l:
        raise BadBlockLength(f"block length {key.l} does not divide {v.shape[-1]}")
    if v.shape[-1] != key.n:
        raise LengthMismatch(f"expected {key.n} positions, got {v.shape[-1]}")
    out = np.empty_like(v)
    out[..., key.P] = v
    return out


def permutation_invert(v, key: SecretKey) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[-1] != key.n:
        raise LengthMismatch(f"expected {key.n} positions, got {v.shape[-1]}")
    return v[..., key.P]


def encrypt(m, key: SecretKey, counter: int, keystream=DEFAULT_KEYSTREAM) -> CiphertextFrame:
    m = np.asarray(m, dtype=np.uint8)
    if m.shape != (key.k,):
        raise LengthMismatch(f"message must be {key.k} bits, got {m.shape}")
    H, p = key.H, key.p
    msg = [bits_to_int(m[j * p:(j + 1) * p]) for j in range(key.n0 - 1)]
    parts = [0] * key.n0
    for j, i in enumerate(H.message_blocks):
        parts[i] = msg[j]
    # the perturbation lives on the pivot block only
    parts[H.pivot] = key.G.parity_int(msg) ^ _perturbation_int(key, counter, keystream)
    return CiphertextFrame(counter, permutation_apply(H.join(parts), key))


def _depermute_and_strip(payload, counter, key, keystream) -> np.ndarray:
    r = permutation_invert(np.asarray(payload, dtype=np.uint8), key)
    piv, p = key.H.pivot, key.p
    seg = slice(piv * p, (piv + 1) * p)
    r = r.copy()
    r[seg] ^= int_to_bits(_perturbation_int(key, counter, keystream), p)
    return r


def decrypt_hard(frame: CiphertextFrame, key: SecretKey, config: DecoderConfig = DecoderConfig(),
                 keystream=DEFAULT_KEYSTREAM) -> np.ndarray:
    """Recover the message from a hard-decision frame or raise DecodeFailure."""
    payload = np.asarray(frame.payload, dtype=np.uint8)
    if payload.shape != (key.n,):
        raise LengthMismatch(f"frame payload must be {key.n} bits, got {payload.shape}")
    c = _depermute_and_strip(payload, frame.counter, key, keystream)
    if not key.H.syndrome_int(key.H.split(c)):
        return key.G.extract(c)
    llrs = HARD_LLR * (1.0 - 2.0 * c)
    outcome = decode_batch(llrs[None, :], tanner_graph(key), config)[0]
    if not outcome.converged:
        raise DecodeFailure(iterations=outcome.iterations_used)
    return key.G.extract(outcome.bits)


def strip_soft(llrs, counter: int, key: SecretKey, keystream=DEFAULT_KEYSTREAM) -> np.ndarray:
    """Undo the permutation and perturbation on channel LLRs.

    LLRs are de-permuted, then negated wherever the perturbation bit is 1.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape[-1] != key.n:
        raise LengthMismatch(f"expected {key.n} LLRs, got {llrs.shape[-1]}")
    out = permutation_invert(llrs, key).copy()
    e = perturbation(key, counter, keystream)
    out[..., e == 1] *= -1.0
    return out


def decrypt_soft(llrs, counter: int, key: SecretKey, config: DecoderConfig = DecoderConfig(),
                 keystream=DEFAULT_KEYSTREAM) -> np.ndarray:
    outcome = decrypt_soft_outcome(llrs, counter, key, config, keystream)
    if not outcome.converged:
        raise DecodeFailure(iterations=outcome.iterations_used)
    return key.G.extract(outcome.bits)


def decrypt_soft_outcome(llrs, counter, key, config=DecoderConfig(), keystream=DEFAULT_KEYSTREAM):
    """Like decrypt_soft but returns the raw DecodeOutcome (codeword domain)."""
    stripped = strip_soft(llrs, counter, key, keystream)
    return decode_batch(stripped[None, :], tanner_graph(key), config)[0]
