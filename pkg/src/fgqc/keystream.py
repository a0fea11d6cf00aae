"""Seeded keystream generators used to derive perturbation syndromes.

Any generator works as long as (seed, nonce) deterministically fixes the
stream. The default is AES-128 in counter mode with the 64-bit frame counter
as the upper half of the initial counter block.
"""
from __future__ import annotations

import hashlib

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes


def _to_bits(data: bytes, nbits: int) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:nbits].copy()


class AesCtrKeystream:
    name = "aes128-ctr"

    def generate(self, seed: bytes, nonce: int, nbits: int) -> np.ndarray:
        if len(seed) != 16:
            raise ValueError("AES-128 needs a 16-byte seed")
        iv = nonce.to_bytes(8, "big") + bytes(8)
        enc = Cipher(algorithms.AES(seed), modes.CTR(iv)).encryptor()
        return _to_bits(enc.update(bytes((nbits + 7) // 8)), nbits)


class ShakeKeystream:
    name = "shake128"

    def generate(self, seed: bytes, nonce: int, nbits: int) -> np.ndarray:
        h = hashlib.shake_128(b"fgqc-keystream" + seed + nonce.to_bytes(8, "big"))
        return _to_bits(h.digest((nbits + 7) // 8), nbits)


KEYSTREAMS = {cls.name: cls for cls in (AesCtrKeystream, ShakeKeystream)}
DEFAULT_KEYSTREAM = AesCtrKeystream()


def get_keystream(name: str):
    try:
        return KEYSTREAMS[name]()
    except KeyError:
        raise ValueError(f"unknown keystream {name!r}; choose from {sorted(KEYSTREAMS)}") from None
