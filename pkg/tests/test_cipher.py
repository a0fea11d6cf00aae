import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fgqc.cipher import (
    CiphertextFrame,
    decrypt_hard,
    decrypt_soft,
    decrypt_soft_outcome,
    derive_z,
    encrypt,
    iter_frames,
    permutation_apply,
    permutation_invert,
    perturbation,
    segment_permute,
    segment_unpermute,
    strip_soft,
)
from fgqc.errors import BadBlockLength, DecodeFailure, LengthMismatch, MalformedFrame
from fgqc.keystream import AesCtrKeystream, ShakeKeystream, get_keystream


@pytest.mark.parametrize("ks", [AesCtrKeystream(), ShakeKeystream()])
def test_keystream_deterministic_and_distinct(ks):
    seed = bytes(range(16))
    a = ks.generate(seed, 7, 728)
    assert np.array_equal(a, ks.generate(seed, 7, 728))
    assert a.shape == (728,) and set(np.unique(a)) <= {0, 1}
    b = ks.generate(seed, 8, 728)
    frac = np.mean(a != b)
    assert 0.4 < frac < 0.6


def test_aes_keystream_known_answer():
    # AES-128 of the all-zero block under the all-zero key
    bits = AesCtrKeystream().generate(bytes(16), 0, 128)
    assert np.packbits(bits).tobytes().hex() == "66e94bd4ef8a2c3b884cfa59ca342b2e"


def test_keystream_lookup():
    assert get_keystream("shake128").name == "shake128"
    with pytest.raises(ValueError):
        get_keystream("rc4")


def test_derive_z(key4368):
    z = derive_z(key4368, 3)
    assert z.size == key4368.n - key4368.k == key4368.p
    assert np.array_equal(z, derive_z(key4368, 3))
    frac = np.mean(z != derive_z(key4368, 4))
    assert 0.4 < frac < 0.6


def test_perturbation_solves_syndrome(key4368):
    for t in range(5):
        e = perturbation(key4368, t)
        assert np.array_equal(key4368.H.syndrome(e), derive_z(key4368, t))
        assert not e[: key4368.k].any()  # pivot block is last


def test_zero_message_zero_z_gives_zero(key4368, monkeypatch):
    class ZeroStream:
        def generate(self, seed, nonce, nbits):
            return np.zeros(nbits, dtype=np.uint8)

    frame = encrypt(np.zeros(key4368.k, np.uint8), key4368, 0, keystream=ZeroStream())
    assert not frame.payload.any()


def test_round_trip_and_counter_effect(key4368, rng):
    m = rng.integers(0, 2, key4368.k).astype(np.uint8)
    f0, f1 = encrypt(m, key4368, 10), encrypt(m, key4368, 11)
    assert not np.array_equal(f0.payload, f1.payload)
    assert np.array_equal(decrypt_hard(f0, key4368), m)
    assert np.array_equal(decrypt_hard(f1, key4368), m)


def test_ciphertext_invariants(key4368, rng):
    for t in range(20):
        m = rng.integers(0, 2, key4368.k).astype(np.uint8)
        c = encrypt(m, key4368, t).payload
        r = permutation_invert(c, key4368)
        # syndrome of c P^-1 equals z, and removing the perturbation leaves a codeword
        assert np.array_equal(key4368.H.syndrome(r), derive_z(key4368, t))
        assert not key4368.H.syndrome(r ^ perturbation(key4368, t)).any()


def test_perturbations_look_independent(key4368):
    piv = slice(key4368.k, key4368.n)
    es = [perturbation(key4368, t)[piv] for t in range(200)]
    agree = [np.mean(es[i] == es[i + 1]) for i in range(199)]
    assert abs(np.mean(agree) - 0.5) < 0.02


def test_encrypt_length_checked(key4368):
    with pytest.raises(LengthMismatch):
        encrypt(np.zeros(10, np.uint8), key4368, 0)
    with pytest.raises(LengthMismatch):
        decrypt_hard(CiphertextFrame(0, np.zeros(10, np.uint8)), key4368)


def test_decrypt_hard_corrects_flips(key4368, rng):
    ok = 0
    for t in range(30):
        m = rng.integers(0, 2, key4368.k).astype(np.uint8)
        c = encrypt(m, key4368, t).payload.copy()
        c[rng.choice(key4368.n, 20, replace=False)] ^= 1
        try:
            ok += np.array_equal(decrypt_hard(CiphertextFrame(t, c), key4368), m)
        except DecodeFailure:
            pass
    assert ok >= 27


def test_wrong_counter_fails(key4368, rng):
    m = rng.integers(0, 2, key4368.k).astype(np.uint8)
    frame = encrypt(m, key4368, 5)
    with pytest.raises(DecodeFailure):
        decrypt_hard(CiphertextFrame(6, frame.payload), key4368)


def test_soft_noiseless(key4368, rng):
    m = rng.integers(0, 2, key4368.k).astype(np.uint8)
    c = encrypt(m, key4368, 2).payload
    llr = 30.0 * (1.0 - 2.0 * c)
    out = decrypt_soft_outcome(llr, 2, key4368)
    assert out.converged and out.iterations_used == 0
    assert np.array_equal(decrypt_soft(llr, 2, key4368), m)


def test_soft_strip_equals_hard_xor(key4368, rng):
    c = rng.integers(0, 2, key4368.n).astype(np.uint8)
    llr = 30.0 * (1.0 - 2.0 * c)
    stripped = strip_soft(llr, 9, key4368)
    hard = permutation_invert(c, key4368) ^ perturbation(key4368, 9)
    assert np.array_equal((stripped < 0).astype(np.uint8), hard)


def test_segment_permute_example():
    v = np.array([1, 0, 0, 0, 1, 0, 0, 0])
    pi = [1, 2, 3, 0]  # cyclic shift by one
    out = segment_permute(v, pi)
    assert out.tolist() == [0, 1, 0, 0, 0, 1, 0, 0]
    assert segment_unpermute(out, pi).tolist() == v.tolist()
    with pytest.raises(BadBlockLength):
        segment_permute(np.zeros(7), pi)


def test_permutation_apply_invert(key4368, rng):
    for _ in range(1000):
        v = rng.integers(0, 2, key4368.n).astype(np.uint8)
        w = permutation_apply(v, key4368)
        assert w.sum() == v.sum()
        assert np.array_equal(permutation_invert(w, key4368), v)
    assert np.array_equal(permutation_apply(v, key4368), segment_permute(v, key4368.perm))
    llr = rng.normal(size=key4368.n)
    assert np.allclose(permutation_invert(permutation_apply(llr, key4368), key4368), llr)
    with pytest.raises(LengthMismatch):
        permutation_apply(np.zeros(26), key4368)


def test_frame_wire_format(key4368, rng):
    frame = encrypt(rng.integers(0, 2, key4368.k).astype(np.uint8), key4368, 0x0102030405060708)
    raw = frame.to_bytes()
    assert raw[:4] == b"FGQF"
    assert raw[4:12] == bytes.fromhex("0102030405060708")
    assert int.from_bytes(raw[12:16], "big") == 4368
    assert len(raw) == 16 + 4368 // 8
    back, end = CiphertextFrame.from_bytes(raw)
    assert back == frame and end == len(raw)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**64 - 1), st.lists(st.integers(0, 1), min_size=1, max_size=50))
def test_frame_round_trip(counter, bits):
    f = CiphertextFrame(counter, np.array(bits, dtype=np.uint8))
    raw = f.to_bytes() * 2
    frames = list(iter_frames(raw))
    assert frames == [f, f]


def test_malformed_frames(key4368):
    raw = CiphertextFrame(1, np.ones(4368, np.uint8)).to_bytes()
    with pytest.raises(MalformedFrame, match="offset 0"):
        CiphertextFrame.from_bytes(raw[:10])
    with pytest.raises(MalformedFrame, match=f"offset {len(raw)}"):
        list(iter_frames(raw + raw[:100]))
    with pytest.raises(MalformedFrame, match="magic"):
        CiphertextFrame.from_bytes(b"XXXX" + raw[4:])
    odd = CiphertextFrame(1, np.ones(5, np.uint8)).to_bytes()
    with pytest.raises(MalformedFrame, match="padding"):
        CiphertextFrame.from_bytes(odd[:-1] + b"\xff")
