"""Closed-form code parameters, key-space sizes, attack work factors and costs."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .errors import TooFewClasses
from .field import NonPrimeCharacteristic, prime_power
from .geometry import GeometryKind, GeometrySpec
from .keys import key_size_report

LN2 = math.log(2.0)


@dataclass(frozen=True)
class CodeParameters:
    kind: GeometryKind
    q: int
    m: int
    n0: int
    p: int
    n_classes: int
    rho: int
    n: int
    k: int
    rate: float
    density: float
    log2_nfg: float

    @property
    def label(self) -> str:
        return f"C({self.n},{self.k})"


def log2_falling_factorial(a: int, b: int) -> float:
    """log2 of a! / (a - b)!"""
    return (math.lgamma(a + 1) - math.lgamma(a - b + 1)) / LN2


def log2_factorial(x: int) -> float:
    return math.lgamma(x + 1) / LN2


def code_params(spec: GeometrySpec, n0: int) -> CodeParameters:
    nc, p = spec.class_count, spec.points
    if n0 > nc:
        raise TooFewClasses(f"{spec} has only {nc} cyclic classes")
    q, m = spec.q, spec.m
    if spec.kind is GeometryKind.EG:
        density = q / (q**m - 1)
    else:
        density = (q * q - 1) / (q ** (m + 1) - 1)
    log2_nfg = (n0 - 1) * math.log2(p) + log2_falling_factorial(nc, n0)
    return CodeParameters(
        spec.kind, q, m, n0, p, nc, spec.rho, n0 * p, (n0 - 1) * p, (n0 - 1) / n0, density, log2_nfg
    )


@dataclass(frozen=True)
class SecurityReport:
    log2_nfg: float
    log2_perm_space: float
    log2_st_workfactor: float
    log2_rn_workfactor: float
    ne_exponent: int
    st_expression: str
    rn_expression: str
    log2_rn_base_p: float  # Omega(r^k) with r = n - k

    def to_text(self) -> str:
        return "\n".join([
            f"log2 N_FG                    : {self.log2_nfg:.2f}",
            f"log2 l! (permutation space)  : {self.log2_perm_space:.2f}",
            f"Struik-Tilburg work factor   : {self.st_expression}  (log2 = {self.log2_st_workfactor:.2f})",
            f"Rao-Nam work factor, N_e^k   : Ω(2^({self.ne_exponent}·k))  (log2 = {self.log2_rn_workfactor:.0f})",
            f"Rao-Nam, p^k form            : {self.rn_expression}  (log2 = {self.log2_rn_base_p:.2f})",
            "note: with N_e = 2^(n-k) the N_e^k formula and the p^k form disagree; both are shown",
        ])


def security_report(params: CodeParameters, l: int) -> SecurityReport:
    """Brute-force and chosen-plaintext work factors.

    N_e = 2^(n-k): Struik-Tilburg is k * n * N_e^2 * log2(N_e), Rao-Nam N_e^k.
    """
    if l < 2:
        raise ValueError("permutation block length must be >= 2")
    n, k = params.n, params.k
    r = n - k
    st = math.log2(k) + math.log2(n) + 2 * r + math.log2(r)
    return SecurityReport(
        log2_nfg=params.log2_nfg,
        log2_perm_space=log2_factorial(l),
        log2_st_workfactor=st,
        log2_rn_workfactor=float(k * r),
        ne_exponent=r,
        st_expression=f"Ω({k} × {n} × 2^{2 * r} × {r})",
        rn_expression=f"Ω({r}^{k})",
        log2_rn_base_p=k * math.log2(r),
    )


@dataclass(frozen=True)
class ComplexityReport:
    enc_per_bit: float
    spa_ops: float
    dec_per_bit: float
    dec_per_bit_expanded: float
    inputs: dict = field(default_factory=dict)

    def to_text(self) -> str:
        return "\n".join([
            f"encryption-encoding, ops per info bit : {self.enc_per_bit:.1f}",
            f"sum-product decoding ops per frame    : {self.spa_ops:.0f}",
            f"decryption-decoding, ops per info bit : {self.dec_per_bit:.1f}",
            f"  (SPA term expanded literally        : {self.dec_per_bit_expanded:.1f})",
        ])


def complexity_report(params: CodeParameters, i_avg: float = 10, d: int = 6) -> ComplexityReport:
    """Binary-operation counts for encryption and decryption.

    ``dec_per_bit`` is the compact closed form, whose constants at the
    defaults are 490 = I(8d+1), 720 = 12 I d and -110 = -11 I.
    ``dec_per_bit_expanded`` divides the SPA count by k term by term instead,
    which gives -11 I d (-660 at the defaults) for the last constant.
    """
    if i_avg < 1 or d < 1:
        raise ValueError("I_avg and d must be >= 1")
    n, k, R, rho, n0 = params.n, params.k, params.rate, params.rho, params.n0
    enc = (0.08 * n + 2) / R
    spa = i_avg * n * (d * (8 * rho + 12 * R - 11) + rho)
    linear = 2 + (n - k) + n0 * rho
    dec = (linear + i_avg * (8 * d + 1) * rho + 12 * i_avg * d * R - 11 * i_avg) / R
    dec_expanded = linear / R + spa / k
    inputs = dict(I_avg=i_avg, d=d, rho=rho, R=R, n=n, k=k, n0=n0)
    return ComplexityReport(enc, spa, dec, dec_expanded, inputs)


# -- parameter search --

@dataclass(frozen=True)
class SearchConstraints:
    n_min: int = 336
    n_max: int = 64800
    rate_min: float = 0.0
    rate_max: float = 1.0
    density_max: float = 0.01
    min_log2_nfg: float = 0.0
    n0_max: int | None = None
    q_max: int = 16
    m_max: int = 12
    kinds: tuple = (GeometryKind.EG, GeometryKind.PG)


def _prime_powers(limit: int):
    for q in range(2, limit + 1):
        try:
            prime_power(q)
        except NonPrimeCharacteristic:
            continue
        yield q


def param_search(c: SearchConstraints = SearchConstraints()) -> list[CodeParameters]:
    out = []
    for kind in c.kinds:
        for q in _prime_powers(c.q_max):
            for m in range(2, c.m_max + 1):
                spec = GeometrySpec(kind, m, q)
                p, nc = spec.points, spec.class_count
                if p > c.n_max:
                    break
                if spec.density > c.density_max:
                    continue
                top = min(nc, c.n_max // p)
                if c.n0_max is not None:
                    top = min(top, c.n0_max)
                for n0 in range(2, top + 1):
                    n = n0 * p
                    rate = (n0 - 1) / n0
                    if n < c.n_min or not c.rate_min <= rate <= c.rate_max:
                        continue
                    params = code_params(spec, n0)
                    if params.log2_nfg >= c.min_log2_nfg:
                        out.append(params)
    out.sort(key=lambda r: (r.n, r.kind.value, r.q, r.m, r.n0))
    return out


# -- tabular output --

COLUMNS = ["kind", "n0", "q", "m", "p", "N_c", "n", "R", "r", "log2_N"]


def _row(r: CodeParameters):
    return [r.kind.value, r.n0, r.q, r.m, r.p, r.n_classes, r.n, f"{r.rate:.4f}", f"{r.density:.4f}", f"{r.log2_nfg:.2f}"]


def params_table(rows) -> str:
    rows = [_row(r) for r in rows]
    widths = [max(len(str(x)) for x in col) for col in zip(COLUMNS, *rows)] if rows else [len(c) for c in COLUMNS]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    return "\n".join([fmt.format(*COLUMNS)] + [fmt.format(*map(str, r)) for r in rows])


def params_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(_row(r))
    return buf.getvalue()


# -- reference values --
# (kind, n0, q, m, p, N_c, n, R, r, log2 N)

REFERENCE_CODES = [
    ("eg", 4, 5, 6, 15624, 781, 62496, 0.75, 0.0003, 80.22),
    ("eg", 5, 3, 8, 6560, 1093, 32800, 0.80, 0.0005, 101.18),
    ("eg", 6, 2, 8, 255, 127, 1530, 0.8333, 0.0078, 81.73),
    ("eg", 6, 3, 6, 728, 121, 4368, 0.8333, 0.0041, 88.87),
    ("eg", 7, 7, 4, 2400, 57, 16800, 0.8571, 0.0029, 107.65),
    ("eg", 8, 2, 9, 511, 255, 4088, 0.8750, 0.0039, 126.78),
    ("eg", 9, 2, 10, 1023, 511, 9207, 0.8889, 0.0020, 160.86),
    ("eg", 15, 2, 10, 1023, 511, 15345, 0.9333, 0.0020, 274.64),
    ("pg", 5, 4, 6, 5461, 273, 27305, 0.8000, 0.0009, 90.07),
    ("pg", 6, 2, 8, 511, 85, 3066, 0.8333, 0.0059, 83.18),
    ("pg", 6, 2, 9, 1023, 170, 6138, 0.8333, 0.0029, 94.32),
    ("pg", 8, 3, 6, 1093, 91, 8744, 0.8750, 0.0037, 122.26),
    ("pg", 11, 2, 8, 511, 85, 5621, 0.9091, 0.0059, 159.50),
    ("pg", 13, 5, 5, 3906, 130, 50778, 0.9231, 0.0015, 233.57),
    ("pg", 15, 3, 7, 3280, 273, 49200, 0.9333, 0.0012, 284.34),
]

# (q, m, n0, l): bits_H, bits_P, bits_S, total, log2 N_FG, log2 l!
REFERENCE_KEYS = [
    ((3, 6, 6, 26), (92, 99, 128, 319, 88.87, 88.38)),
    ((3, 6, 8, 52), (126, 249, 128, 503, 121.56, 225.58)),
]

LOG2_TOL = 0.02


def check_reference_codes() -> list[str]:
    """Mismatch descriptions for the reference code-parameter rows (empty if all match)."""
    bad = []
    for kind, n0, q, m, p, nc, n, R, r, log2n in REFERENCE_CODES:
        got = code_params(GeometrySpec(kind, m, q), n0)
        where = f"{kind} n0={n0} q={q} m={m}"
        checks = [
            ("p", got.p, p), ("N_c", got.n_classes, nc), ("n", got.n, n),
            ("R", round(got.rate, 4), R), ("r", round(got.density, 4), r),
        ]
        for name, a, b in checks:
            if a != b:
                bad.append(f"{where}: {name} {a} != {b}")
        if abs(got.log2_nfg - log2n) > LOG2_TOL:
            bad.append(f"{where}: log2N {got.log2_nfg:.3f} != {log2n}")
    return bad


def check_reference_keys() -> list[str]:
    bad = []
    for (q, m, n0, l), (bh, bp, bs, total, log2n, log2l) in REFERENCE_KEYS:
        spec = GeometrySpec("eg", m, q)
        rep = key_size_report(spec, n0, l)
        where = f"q={q} m={m} n0={n0} l={l}"
        if (rep.bits_H, rep.bits_P, rep.bits_S, rep.total) != (bh, bp, bs, total):
            bad.append(f"{where}: key bits {rep.bits_H}/{rep.bits_P}/{rep.bits_S}/{rep.total} != {bh}/{bp}/{bs}/{total}")
        got = code_params(spec, n0).log2_nfg
        if abs(got - log2n) > LOG2_TOL:
            bad.append(f"{where}: log2N {got:.3f} != {log2n}")
        if abs(log2_factorial(l) - log2l) > 0.01:
            bad.append(f"{where}: log2 l! {log2_factorial(l):.3f} != {log2l}")
    return bad
