import math

import numpy as np
import pytest

from fgqc.channel import BerPoint, ChannelSpec, binomial_ci, run_ber, transmit, uncoded_ber
from fgqc.cipher import decrypt_soft_outcome, encrypt, perturbation
from fgqc.oracles import oracle_q_function
from fgqc.spa import DecoderConfig, build_tanner, decode


def test_sigma():
    assert ChannelSpec(0.0, 0.5).sigma2 == pytest.approx(1.0)
    assert ChannelSpec(10 * math.log10(2), 1.0).sigma2 == pytest.approx(0.25)


def test_high_snr_signs_match():
    bits = np.random.default_rng(0).integers(0, 2, 5000).astype(np.uint8)
    llr = transmit(bits, ChannelSpec(60.0), noise_seed=1)
    assert np.array_equal((llr < 0).astype(np.uint8), bits)


def test_llr_mean_at_0db():
    chan = ChannelSpec(0.0)
    llr = transmit(np.zeros(100_000, np.uint8), chan, noise_seed=3)
    assert abs(llr.mean() / (2 / chan.sigma2) - 1) < 0.05


def test_uncoded_ber_vs_q_oracle():
    for db in (0.0, 2.0, 4.0, 7.0):
        assert uncoded_ber(db) == pytest.approx(oracle_q_function(db), rel=1e-12)
    assert uncoded_ber(math.inf) == 0.0
    assert oracle_q_function(0.0) == pytest.approx(0.0786, abs=1e-4)
    assert oracle_q_function(4.0) == pytest.approx(0.0125, abs=1e-4)
    assert oracle_q_function(math.inf) == 0.0


def test_empirical_uncoded_ber_at_4db():
    bits = np.random.default_rng(1).integers(0, 2, 100_000).astype(np.uint8)
    llr = transmit(bits, ChannelSpec(4.0), noise_seed=2)
    ber = np.mean((llr < 0) != bits)
    assert abs(ber / oracle_q_function(4.0) - 1) < 0.10


def test_transmit_deterministic():
    bits = np.zeros(100, np.uint8)
    assert np.array_equal(transmit(bits, ChannelSpec(3.0), 5), transmit(bits, ChannelSpec(3.0), 5))


def test_binomial_ci():
    lo, hi = binomial_ci(0, 200)
    assert lo == 0.0 and 0.015 < hi < 0.02
    lo, hi = binomial_ci(200, 200)
    assert hi == 1.0 and lo > 0.98
    lo, hi = binomial_ci(50, 100)
    assert lo < 0.5 < hi


def test_ber_point_merge():
    a = BerPoint(1.0, 2, 20, 3, 1, 7).merge(BerPoint(1.0, 2, 20, 1, 1, 3))
    assert (a.frames, a.ber, a.fer, a.mean_iters) == (4, 0.1, 0.5, 2.5)


def test_run_ber_reproducible_and_csv(key4368):
    cfg = DecoderConfig(max_iterations=5)
    a = run_ber(key4368, [3.0, 8.0], 20, cfg)
    b = run_ber(key4368, [3.0, 8.0], 20, cfg)
    assert a.to_csv() == b.to_csv()
    lines = a.to_csv().splitlines()
    assert lines[0] == "ebn0_db,frames,ber,fer,mean_iters"
    assert len(lines) == 3
    assert a.points[1].fer == 0.0 and a.points[1].mean_iters <= 1.0
    assert "Eb/N0" in a.to_text()


def test_secure_link_matches_plain_per_frame(key4368):
    # stripping the permutation and perturbation maps the secure channel onto a plain one whose noise
    # sample at position j is the received sample at P[j], sign-flipped where the perturbation is 1
    rng = np.random.default_rng(8)
    g = build_tanner(key4368.H)
    chan = ChannelSpec(3.0, key4368.k / key4368.n)
    for t in range(12):
        m = rng.integers(0, 2, key4368.k).astype(np.uint8)
        frame = encrypt(m, key4368, t)
        noise = rng.normal(0, math.sqrt(chan.sigma2), key4368.n)
        y = 1.0 - 2.0 * frame.payload + noise
        secure = decrypt_soft_outcome(2 * y / chan.sigma2, t, key4368)
        cw = key4368.G.encode(m)
        flip = np.where(perturbation(key4368, t) == 1, -1.0, 1.0)
        y_plain = 1.0 - 2.0 * cw + flip * noise[key4368.P]
        plain = decode(2 * y_plain / chan.sigma2, g)
        assert np.array_equal(secure.bits, plain.bits)
        assert (secure.converged, secure.iterations_used) == (plain.converged, plain.iterations_used)


def test_secure_and_plain_fer_agree(key4368):
    cfg = DecoderConfig(max_iterations=10)
    plain = run_ber(key4368, [3.0], 100, cfg)
    secure = run_ber(key4368, [3.0], 100, cfg, secure=True)
    (a_lo, a_hi), (b_lo, b_hi) = plain.points[0].fer_ci, secure.points[0].fer_ci
    assert a_lo <= b_hi and b_lo <= a_hi
