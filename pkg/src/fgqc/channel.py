"""AWGN channel simulation and BER/FER measurement.

QPSK is two independent Gray-mapped BPSK rails, so per-bit LLRs are the BPSK
ones: bit 0 -> +1, bit 1 -> -1, LLR = 2y / sigma^2.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.special import erfc

from .cipher import encrypt, strip_soft, tanner_graph
from .keys import SecretKey
from .spa import DecoderConfig, decode_batch

BATCH = 64


class Modulation(enum.Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"


@dataclass(frozen=True)
class ChannelSpec:
    ebn0_db: float
    code_rate: float = 1.0
    modulation: Modulation = Modulation.QPSK

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.code_rate * 10.0 ** (self.ebn0_db / 10.0))


def uncoded_ber(ebn0_db: float) -> float:
    """Q(sqrt(2 Eb/N0)) for hard-decision BPSK/QPSK."""
    if math.isinf(ebn0_db):
        return 0.0 if ebn0_db > 0 else 0.5
    return 0.5 * float(erfc(math.sqrt(10.0 ** (ebn0_db / 10.0))))


def transmit(bits, chan: ChannelSpec, noise_seed=None) -> np.ndarray:
    """Modulate, add Gaussian noise and return channel LLRs (deterministic per seed)."""
    rng = noise_seed if isinstance(noise_seed, np.random.Generator) else np.random.default_rng(noise_seed)
    bits = np.asarray(bits, dtype=np.uint8)
    sigma2 = chan.sigma2
    y = 1.0 - 2.0 * bits + rng.normal(0.0, math.sqrt(sigma2), size=bits.shape)
    return 2.0 * y / sigma2


def binomial_ci(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval."""
    if trials == 0:
        return 0.0, 1.0
    a = (1 - level) / 2
    lo = 0.0 if errors == 0 else float(stats.beta.ppf(a, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(stats.beta.ppf(1 - a, errors + 1, trials - errors))
    return lo, hi


@dataclass
class BerPoint:
    ebn0_db: float
    frames: int = 0
    bits: int = 0
    bit_errors: int = 0
    frame_errors: int = 0
    iterations: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    @property
    def mean_iters(self) -> float:
        return self.iterations / self.frames if self.frames else 0.0

    @property
    def fer_ci(self) -> tuple[float, float]:
        return binomial_ci(self.frame_errors, self.frames)

    def merge(self, other: "BerPoint") -> "BerPoint":
        return BerPoint(
            self.ebn0_db,
            self.frames + other.frames,
            self.bits + other.bits,
            self.bit_errors + other.bit_errors,
            self.frame_errors + other.frame_errors,
            self.iterations + other.iterations,
        )


@dataclass
class BerReport:
    points: list[BerPoint] = field(default_factory=list)
    label: str = ""
    max_iterations: int = 0

    def fer(self) -> list[float]:
        return [pt.fer for pt in self.points]

    def ber(self) -> list[float]:
        return [pt.ber for pt in self.points]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ebn0_db", "frames", "ber", "fer", "mean_iters"])
        for pt in self.points:
            w.writerow([f"{pt.ebn0_db:g}", pt.frames, f"{pt.ber:.6e}", f"{pt.fer:.6e}", f"{pt.mean_iters:.3f}"])
        return buf.getvalue()

    def to_text(self) -> str:
        head = f"{'Eb/N0':>6} {'frames':>7} {'BER':>11} {'FER':>9} {'FER 95% CI':>21} {'iters':>6} {'uncoded':>10}"
        lines = [self.label, head] if self.label else [head]
        for pt in self.points:
            lo, hi = pt.fer_ci
            lines.append(
                f"{pt.ebn0_db:6.2f} {pt.frames:7d} {pt.ber:11.3e} {pt.fer:9.4f} "
                f"[{lo:8.4f}, {hi:8.4f}] {pt.mean_iters:6.2f} {uncoded_ber(pt.ebn0_db):10.3e}"
            )
        return "\n".join(lines)


def _frame_rngs(seed, snr_index, frame):
    return np.random.default_rng([seed, snr_index, frame])


def run_ber(key: SecretKey, snr_list, frames: int, config: DecoderConfig = DecoderConfig(),
            secure: bool = False, message_seed: int = 1, noise_seed: int = 2,
            label: str = "") -> BerReport:
    """Monte-Carlo BER/FER of the code (or the full secure link when ``secure``).

    Messages and noise are drawn per (SNR index, frame), so coded and secure
    runs with the same seeds see the same messages and noise samples.
    """
    if frames < 1:
        raise ValueError("frames must be >= 1")
    graph = tanner_graph(key)
    G = key.G
    rate = key.k / key.n
    report = BerReport(label=label, max_iterations=config.max_iterations)
    for si, ebn0 in enumerate(snr_list):
        chan = ChannelSpec(float(ebn0), rate)
        point = BerPoint(float(ebn0))
        for start in range(0, frames, BATCH):
            idx = range(start, min(frames, start + BATCH))
            msgs, llrs = [], []
            for f in idx:
                m = _frame_rngs(message_seed, si, f).integers(0, 2, key.k, dtype=np.uint8)
                noise = _frame_rngs(noise_seed, si, f)
                if secure:
                    counter = si * frames + f
                    tx = encrypt(m, key, counter).payload
                    llr = strip_soft(transmit(tx, chan, noise), counter, key)
                else:
                    llr = transmit(G.encode(m), chan, noise)
                msgs.append(m)
                llrs.append(llr)
            for m, out in zip(msgs, decode_batch(np.array(llrs), graph, config)):
                errs = int(np.count_nonzero(G.extract(out.bits) != m))
                point = point.merge(BerPoint(float(ebn0), 1, key.k, errs, int(errs > 0), out.iterations_used))
        report.points.append(point)
    return report
