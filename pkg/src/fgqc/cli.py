"""Command-line front end: fgqc {keygen,encrypt,decrypt,params,simulate}.

Exit codes: 0 success, 2 usage error, 3 data or key error, 4 decode failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import secrets
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .channel import run_ber
from .cipher import CiphertextFrame, MAX_COUNTER, decrypt_hard, encrypt, iter_frames
from .errors import DecodeFailure, FgqcError
from .geometry import GeometrySpec
from .keys import key_size_report, keygen, read_key_file, write_key_file
from .spa import DecoderConfig

log = logging.getLogger("fgqc")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DECODE = 0, 2, 3, 4
FRAMES_ENV = "FGQC_FRAMES"
DEFAULT_FRAMES = 200


class UsageError(Exception):
    pass


# -- padding: append a 1 then zeros up to a multiple of k --

def pad_bits(bits: np.ndarray, k: int) -> np.ndarray:
    total = -(-(bits.size + 1) // k) * k
    out = np.zeros(total, dtype=np.uint8)
    out[: bits.size] = bits
    out[bits.size] = 1
    return out


def unpad_bits(bits: np.ndarray) -> np.ndarray:
    ones = np.flatnonzero(bits)
    if not ones.size:
        raise FgqcError("padding marker not found")
    return bits[: ones[-1]]


def encrypt_bytes(data: bytes, key, counter_start: int = 0) -> bytes:
    bits = pad_bits(np.unpackbits(np.frombuffer(data, dtype=np.uint8)), key.k)
    blocks = bits.reshape(-1, key.k)
    if counter_start + len(blocks) - 1 > MAX_COUNTER:
        raise FgqcError("frame counter would overflow 64 bits")
    return b"".join(encrypt(m, key, counter_start + i).to_bytes() for i, m in enumerate(blocks))


def decrypt_bytes(data: bytes, key, config: DecoderConfig = DecoderConfig(), counter_start=None) -> bytes:
    """Decrypt a stream of frames; ``counter_start`` overrides the header counters."""
    out = []
    for i, frame in enumerate(iter_frames(data)):
        if counter_start is not None:
            frame = CiphertextFrame(counter_start + i, frame.payload)
        try:
            out.append(decrypt_hard(frame, key, config))
        except DecodeFailure as exc:
            raise DecodeFailure(f"frame {i} (counter {frame.counter}): decoder did not converge",
                                iterations=exc.iterations) from None
    if not out:
        raise FgqcError("input holds no frames")
    bits = unpad_bits(np.concatenate(out))
    if bits.size % 8:
        raise FgqcError("recovered bit count is not a whole number of bytes")
    return np.packbits(bits).tobytes()


# -- subcommands --

def _spec(args) -> GeometrySpec:
    return GeometrySpec(args.geometry, args.m, args.q)


def _print_code(spec: GeometrySpec, n0: int, l: int | None):
    params = analysis.code_params(spec, n0)
    print(f"code: {spec} n0={n0} {params.label} rate={params.rate:.4f} density={params.density:.4f}")
    print(f"cyclic classes: {params.n_classes}  log2 N_FG: {params.log2_nfg:.2f}")
    if l is not None:
        print(f"log2 l!: {analysis.log2_factorial(l):.2f}")
    return params


def cmd_keygen(args) -> int:
    spec = _spec(args)
    if args.seed_hex is None:
        seed = secrets.token_bytes(16)
        print(f"keygen seed: {seed.hex()}", flush=True)
    else:
        try:
            seed = bytes.fromhex(args.seed_hex)
        except ValueError:
            raise UsageError("--seed-hex must be hexadecimal") from None
    key = keygen(spec, args.n0, args.l, entropy=seed)
    write_key_file(args.out, key)
    _print_code(spec, args.n0, args.l)
    rep = key.size_report()
    print(f"key bits H: {rep.bits_H}")
    print(f"key bits P: {rep.bits_P}")
    print(f"key bits S: {rep.bits_S}")
    print(f"total key bits: {rep.total}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    key = read_key_file(args.key)
    data = Path(args.inp).read_bytes()
    out = encrypt_bytes(data, key, args.counter_start or 0)
    Path(args.out).write_bytes(out)
    frames = -(-(len(data) * 8 + 1) // key.k)
    log.info("encrypted %d bytes into %d frames", len(data), frames)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = read_key_file(args.key)
    data = Path(args.inp).read_bytes()
    config = DecoderConfig(max_iterations=args.iters)
    Path(args.out).write_bytes(decrypt_bytes(data, key, config, args.counter_start))
    return EXIT_OK


def cmd_params(args) -> int:
    if args.reproduce_tables:
        return _reproduce_tables()
    if args.search:
        c = analysis.SearchConstraints(
            n_min=args.n_min, n_max=args.n_max, rate_min=args.rate_min, rate_max=args.rate_max,
            density_max=args.density_max, min_log2_nfg=args.min_log2n, n0_max=args.n0_max,
        )
        rows = analysis.param_search(c)
        print(analysis.params_table(rows))
        print(f"{len(rows)} parameter sets")
        if args.csv:
            Path(args.csv).write_text(analysis.params_csv(rows))
        return EXIT_OK
    if args.m is None or args.q is None or args.n0 is None:
        raise UsageError("give --reproduce-tables, --search, or --geometry/--q/--m/--n0")
    spec = _spec(args)
    params = _print_code(spec, args.n0, args.l)
    if args.l is not None:
        rep = key_size_report(spec, args.n0, args.l)
        print(f"key bits H/P/S: {rep.bits_H}/{rep.bits_P}/{rep.bits_S}  total key bits: {rep.total}")
        print(analysis.security_report(params, args.l).to_text())
    print(analysis.complexity_report(params, args.iters_avg, args.quant_bits).to_text())
    return EXIT_OK


def _reproduce_tables() -> int:
    rows = [analysis.code_params(GeometrySpec(kind, m, q), n0)
            for kind, n0, q, m, *_ in analysis.REFERENCE_CODES]
    print(analysis.params_table(rows))
    for (q, m, n0, l), _ in analysis.REFERENCE_KEYS:
        rep = key_size_report(GeometrySpec("eg", m, q), n0, l)
        print(f"EG*({m},{q}) n0={n0} l={l}: H={rep.bits_H} P={rep.bits_P} S={rep.bits_S} "
              f"total={rep.total} log2 l!={analysis.log2_factorial(l):.2f}")
    bad = analysis.check_reference_codes() + analysis.check_reference_keys()
    if bad:
        for line in bad:
            print(f"mismatch: {line}")
        return EXIT_DATA
    print("Tables 3,4,5,6: all cells match")
    return EXIT_OK


def _parse_snr(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --snr list {text!r}") from None


def cmd_simulate(args) -> int:
    if args.key:
        key = read_key_file(args.key)
    else:
        if args.m is None or args.q is None or args.n0 is None:
            raise UsageError("simulate needs --key or --geometry/--q/--m/--n0")
        seed = args.key_seed
        if seed is None:
            seed = secrets.randbits(64)
            print(f"key seed: {seed}", flush=True)
        spec = _spec(args)
        key = keygen(spec, args.n0, args.l or spec.points, entropy=seed)
    frames = args.frames
    if frames is None:
        frames = int(os.environ.get(FRAMES_ENV, DEFAULT_FRAMES))
    snrs = _parse_snr(args.snr)
    label = f"C({key.n},{key.k}) {key.geometry} {'secure link' if args.secure else 'coded'}"
    reports = []
    for iters in [args.iters] + list(args.compare_iters or []):
        r = run_ber(key, snrs, frames, DecoderConfig(max_iterations=iters), secure=args.secure,
                    message_seed=args.message_seed, noise_seed=args.noise_seed,
                    label=f"{label}, {iters} iterations")
        print(r.to_text())
        reports.append(r)
    if args.csv:
        Path(args.csv).write_text(reports[0].to_csv())
        for r in reports[1:]:
            extra = Path(args.csv).with_name(f"{Path(args.csv).stem}_it{r.max_iterations}.csv")
            extra.write_text(r.to_csv())
    if args.figure:
        from .plotting import plot_ber

        plot_ber(reports, args.figure, title=label)
    return EXIT_OK


# -- argument parsing --

def _add_geometry(p, required: bool):
    p.add_argument("--geometry", choices=["eg", "pg"], default="eg")
    p.add_argument("--q", type=int, required=required)
    p.add_argument("--m", type=int, required=required)
    p.add_argument("--n0", type=int, required=required)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fgqc", description="Joint encryption and LDPC coding with finite-geometry QC codes.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="draw a secret key and write it to a file")
    _add_geometry(p, True)
    p.add_argument("--l", type=int, required=True, help="permutation block length (must divide n)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed-hex", help="hex entropy for a reproducible key")
    p.set_defaults(func=cmd_keygen)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} a file frame by frame")
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="inp", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--counter-start", type=int, default=None,
                       help="first frame counter (decrypt: override the counters in the frames)")
        if name == "decrypt":
            p.add_argument("--iters", type=int, default=10)
        p.set_defaults(func=func)

    p = sub.add_parser("params", help="code parameters, table reproduction and parameter search")
    p.add_argument("--reproduce-tables", action="store_true")
    p.add_argument("--search", action="store_true")
    p.add_argument("--n-min", type=int, default=336)
    p.add_argument("--n-max", type=int, default=64800)
    p.add_argument("--rate-min", type=float, default=0.0)
    p.add_argument("--rate-max", type=float, default=1.0)
    p.add_argument("--density-max", type=float, default=0.01)
    p.add_argument("--min-log2n", type=float, default=0.0)
    p.add_argument("--n0-max", type=int, default=None)
    p.add_argument("--csv")
    _add_geometry(p, False)
    p.add_argument("--l", type=int)
    p.add_argument("--iters-avg", type=float, default=10)
    p.add_argument("--quant-bits", type=int, default=6)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("simulate", help="BER/FER over an AWGN channel")
    p.add_argument("--key")
    _add_geometry(p, False)
    p.add_argument("--l", type=int)
    p.add_argument("--key-seed", type=int)
    p.add_argument("--snr", default="1,2,3,4,5", help="comma-separated Eb/N0 values in dB")
    p.add_argument("--frames", type=int, default=None, help=f"frames per point (default ${FRAMES_ENV} or {DEFAULT_FRAMES})")
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--compare-iters", type=int, nargs="*", help="extra iteration limits to run for comparison")
    p.add_argument("--secure", action="store_true", help="simulate the full encrypt/decrypt link")
    p.add_argument("--message-seed", type=int, default=1)
    p.add_argument("--noise-seed", type=int, default=2)
    p.add_argument("--csv")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"fgqc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DecodeFailure as exc:
        print(f"fgqc: decode failure: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except (FgqcError, OSError) as exc:
        print(f"fgqc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
