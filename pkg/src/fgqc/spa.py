"""Log-domain sum-product decoding on the Tanner graph of a block-row H.

LLR convention: positive favours bit 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circulant import BlockRowParityCheck

_ONE = 1.0 - 1e-12  # keeps arctanh finite


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int = 10
    early_stop: bool = True
    llr_clamp: float = 30.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class DecodeOutcome:
    bits: np.ndarray
    converged: bool
    iterations_used: int


class TannerGraph:
    """Check-major edge layout: check r owns edges r*dc .. r*dc + dc - 1.

    Row r of H_i has ones at columns r + j (mod p) for j in the support of
    the first row, so every check has the same degree dc = sum of block weights.
    """

    def __init__(self, H: BlockRowParityCheck):
        p = H.p
        rows = np.arange(p, dtype=np.int64)[:, None]
        cols = []
        for i, block in enumerate(H.blocks):
            support = np.asarray(block.support, dtype=np.int64)
            cols.append(i * p + (rows + support[None, :]) % p)
        self.check_vars = np.hstack(cols)  # (p, dc)
        self.check_vars.flags.writeable = False
        self.n = H.n
        self.m = p
        self.dc = self.check_vars.shape[1]
        self.edge_var = self.check_vars.ravel()
        self.var_degree = np.bincount(self.edge_var, minlength=self.n)

    @property
    def edges(self) -> int:
        return self.edge_var.size

    def syndrome(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.uint8)
        return (bits[..., self.check_vars].sum(axis=-1) % 2).astype(np.uint8)

    def has_four_cycle(self) -> bool:
        """True iff two checks share more than one variable."""
        seen = set()
        for row in self.check_vars:
            vs = sorted(int(v) for v in row)
            for a in range(len(vs)):
                for b in range(a + 1, len(vs)):
                    pair = (vs[a], vs[b])
                    if pair in seen:
                        return True
                    seen.add(pair)
        return False


def build_tanner(H: BlockRowParityCheck) -> TannerGraph:
    return TannerGraph(H)


def _extrinsic_product(t: np.ndarray) -> np.ndarray:
    """Product over each row excluding the own entry, via prefix/suffix products."""
    ones = np.ones(t.shape[:-1] + (1,))
    prefix = np.cumprod(np.concatenate([ones, t[..., :-1]], axis=-1), axis=-1)
    suffix = np.cumprod(np.concatenate([ones, t[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
    return prefix * suffix


def decode_batch(llrs, graph: TannerGraph, config: DecoderConfig = DecoderConfig()) -> list[DecodeOutcome]:
    """Decode several frames at once; each row behaves exactly as a lone decode."""
    llrs = np.atleast_2d(np.asarray(llrs, dtype=np.float64))
    if llrs.shape[1] != graph.n:
        raise ValueError(f"expected {graph.n} LLRs per frame, got {llrs.shape[1]}")
    if not np.isfinite(llrs).all():
        raise ValueError("LLRs must be finite")
    clamp = config.llr_clamp
    channel = np.clip(llrs, -clamp, clamp)
    batch = channel.shape[0]
    m, dc, n = graph.m, graph.dc, graph.n
    ev = graph.edge_var

    bits = (channel < 0).astype(np.uint8)
    converged = ~graph.syndrome(bits).any(axis=1)
    iters = np.zeros(batch, dtype=np.int64)
    active = np.flatnonzero(~converged)

    if active.size:
        v2c = channel[active][:, ev]
        offsets = (np.arange(active.size) * n)[:, None]
        for it in range(1, config.max_iterations + 1):
            t = np.tanh(0.5 * v2c).reshape(-1, m, dc)
            ext = np.clip(_extrinsic_product(t), -_ONE, _ONE)
            c2v = np.clip(2.0 * np.arctanh(ext), -clamp, clamp).reshape(len(active), -1)
            incoming = np.bincount((offsets + ev[None, :]).ravel(), weights=c2v.ravel(),
                                   minlength=len(active) * n).reshape(len(active), n)
            total = channel[active] + incoming
            hard = (total < 0).astype(np.uint8)
            bits[active] = hard
            iters[active] = it
            ok = ~graph.syndrome(hard).any(axis=1)
            converged[active] = ok
            if config.early_stop and ok.any():
                keep = ~ok
                active, total, c2v = active[keep], total[keep], c2v[keep]
                offsets = offsets[: active.size]
                if not active.size:
                    break
            v2c = np.clip(total[:, ev] - c2v, -clamp, clamp)

    return [DecodeOutcome(bits[i].copy(), bool(converged[i]), int(iters[i])) for i in range(batch)]


def decode(llrs, graph: TannerGraph, config: DecoderConfig = DecoderConfig()) -> DecodeOutcome:
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.ndim != 1:
        raise ValueError("decode takes a single LLR vector; use decode_batch for several")
    return decode_batch(llrs[None, :], graph, config)[0]
