"""Slow, independent reference implementations for tests.

Nothing here imports the field, geometry, circulant, spa or channel modules:
field elements are coefficient tuples, matrices are dense numpy arrays and
every search is exhaustive.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import GeometryTooLarge

MAX_DENSE_P = 64
MAX_GEOMETRY_P = 1024


# -- naive polynomial field GF(p^t) --

def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            s, r = 0, q
            while r % p == 0:
                r //= p
                s += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, s
    raise ValueError(f"{q} is not a prime power")


class NaiveField:
    """GF(p^t) elements as length-t coefficient tuples, lowest degree first."""

    def __init__(self, p: int, t: int, modulus=None):
        self.p, self.t = p, t
        self.order = p**t
        if modulus is None:
            modulus = self._search_modulus()
        self.modulus = tuple(int(c) for c in modulus)  # monic, length t + 1
        self.zero = (0,) * t
        self.one = (1,) + (0,) * (t - 1)
        self.powers = self._power_list()
        if len(set(self.powers)) != self.order - 1:
            raise ValueError("modulus is not primitive")
        self.index = {e: i for i, e in enumerate(self.powers)}

    def times_x(self, a):
        p, t = self.p, self.t
        top = a[-1]
        shifted = (0,) + a[:-1]
        return tuple((shifted[i] - top * self.modulus[i]) % p for i in range(t))

    def _power_list(self):
        if self.t == 1:
            # prime field: find a primitive root by brute force
            for g in range(1, self.p):
                seq = [pow(g, i, self.p) for i in range(self.p - 1)]
                if len(set(seq)) == self.p - 1:
                    return [(x,) for x in seq]
        out, cur = [], self.one
        for _ in range(self.order - 1):
            out.append(cur)
            cur = self.times_x(cur)
        return out

    def _search_modulus(self):
        p, t = self.p, self.t
        if t == 1:
            return (0, 1)
        for tail in itertools.product(range(p), repeat=t):
            if tail[0] == 0:
                continue
            self.modulus = tuple(tail) + (1,)
            cur, seen = (1,) + (0,) * (t - 1), set()
            for _ in range(p**t - 1):
                seen.add(cur)
                cur = self.times_x(cur)
            if len(seen) == p**t - 1:
                return self.modulus
        raise ValueError("no primitive polynomial found")

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        return self.powers[(self.index[a] + self.index[b]) % (self.order - 1)]

    def subfield(self, q: int):
        """GF(q) inside this field: zero plus the powers of alpha^((order-1)/(q-1))."""
        step = (self.order - 1) // (q - 1)
        return [self.zero] + [self.powers[j * step] for j in range(q - 1)]


# -- exhaustive geometry --

def _modulus_tuple(modulus, t):
    if modulus is None:
        return None
    mod = tuple(int(c) for c in modulus)
    if len(mod) != t + 1:
        raise ValueError("modulus must have t + 1 coefficients")
    return mod


def oracle_points(kind: str, m: int, q: int) -> int:
    return q**m - 1 if kind == "eg" else (q ** (m + 1) - 1) // (q - 1)


def oracle_enumerate_all_lines(kind: str, m: int, q: int, modulus=None) -> set[frozenset]:
    """Every line of EG*(m,q) (lines avoiding the origin) or PG(m,q), by closing all point pairs.

    Points use the labelling alpha^i -> i (EG*) and alpha^i -> i mod points (PG).
    ``modulus`` is the coefficient list (lowest degree first) of the primitive
    polynomial to use, so labels can be compared with another implementation.
    """
    kind = kind.lower().rstrip("*")
    pch, s = _factor_prime_power(q)
    npts = oracle_points(kind, m, q)
    if npts > MAX_GEOMETRY_P:
        raise GeometryTooLarge(f"oracle enumeration limited to {MAX_GEOMETRY_P} points")
    t = s * (m if kind == "eg" else m + 1)
    F = NaiveField(pch, t, _modulus_tuple(modulus, t))
    sub = F.subfield(q)
    lines = set()
    if kind == "eg":
        for i, j in itertools.combinations(range(npts), 2):
            a, b = F.powers[i], F.powers[j]
            d = F.sub(b, a)
            pts = [F.add(a, F.mul(beta, d)) for beta in sub]
            if F.zero in pts:
                continue
            lines.add(frozenset(F.index[x] for x in pts))
    else:
        nz = sub[1:]
        for i, j in itertools.combinations(range(npts), 2):
            a, b = F.powers[i], F.powers[j]
            pts = set()
            for e1 in [F.zero] + nz:
                for e2 in [F.zero] + nz:
                    if e1 == F.zero and e2 == F.zero:
                        continue
                    pts.add(F.index[F.add(F.mul(e1, a), F.mul(e2, b))] % npts)
            lines.add(frozenset(pts))
    return lines


def oracle_line_count(kind: str, m: int, q: int) -> int:
    """Closed-form number of lines (EG* excludes the lines through the origin)."""
    if kind == "eg":
        return (q ** (m - 1) - 1) * (q**m - 1) // (q - 1)
    n = q ** (m + 1) - 1
    return n * (q**m - 1) // ((q * q - 1) * (q - 1))


def _bitstring(line, npts) -> str:
    return "".join("1" if i in line else "0" for i in range(npts))


def oracle_class_partition(lines, npts: int) -> list[str]:
    """Canonical representatives (as bit strings) of the full-length cyclic orbits.

    Rotations are scanned exhaustively; the representative has a 1 at position
    0, its second 1 as early as possible, and is then lexicographically
    smallest. The list is sorted by (second-1 position, bit string).
    """
    remaining = {_bitstring(x, npts) for x in lines}
    reps = []
    while remaining:
        v = remaining.pop()
        orbit = {v[-r:] + v[:-r] if r else v for r in range(npts)}
        remaining -= orbit
        if len(orbit) < npts:
            continue
        cands = [w for w in orbit if w[0] == "1"]
        reps.append(min(cands, key=lambda w: (w.index("1", 1), w)))
    reps.sort(key=lambda w: (w.index("1", 1), w))
    return reps


def oracle_pairs_on_one_line(lines, npts: int, kind: str = "pg", q: int = 2) -> bool:
    """Every pair of distinct points lies on exactly one of the given lines.

    For EG* the pairs whose line passes through the removed origin (labels
    differing by a multiple of points/(q-1)) must lie on no line instead.
    """
    count = np.zeros((npts, npts), dtype=np.int64)
    for line in lines:
        pts = sorted(line)
        for a, b in itertools.combinations(pts, 2):
            count[a, b] += 1
    a, b = np.triu_indices(npts, 1)
    want = np.ones(a.size, dtype=np.int64)
    if kind.lower().rstrip("*") == "eg":
        want[(b - a) % (npts // (q - 1)) == 0] = 0
    return bool((count[a, b] == want).all())


def oracle_max_overlap(lines, npts: int) -> int:
    """Largest number of points shared by two distinct lines."""
    lines = list(lines)
    M = np.zeros((len(lines), npts), dtype=np.float32)
    for r, line in enumerate(lines):
        M[r, sorted(line)] = 1.0
    best = 0
    for start in range(0, len(lines), 1024):
        block = M[start:start + 1024] @ M.T
        rows = np.arange(block.shape[0])
        block[rows, start + rows] = 0.0
        best = max(best, int(block.max(initial=0.0)))
    return best


# -- dense GF(2) algebra --

def _check_size(p: int):
    if p > MAX_DENSE_P:
        raise ValueError(f"dense oracle limited to p <= {MAX_DENSE_P}")


def dense_circulant(first_row) -> np.ndarray:
    """Row r is the first row rotated right by r."""
    row = [int(b) & 1 for b in first_row]
    p = len(row)
    _check_size(p)
    return np.array([[row[(c - r) % p] for c in range(p)] for r in range(p)], dtype=np.int64)


def dense_block_row(first_rows) -> np.ndarray:
    return np.hstack([dense_circulant(r) for r in first_rows])


def dense_mul(a, b) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % 2


def dense_inverse(a):
    """Gauss-Jordan inverse over GF(2); None if singular."""
    a = np.array(a, dtype=np.int64) % 2
    n = a.shape[0]
    aug = np.hstack([a, np.eye(n, dtype=np.int64)])
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col]), None)
        if piv is None:
            return None
        aug[[col, piv]] = aug[[piv, col]]
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] ^= aug[col]
    return aug[:, n:]


def dense_rank(a) -> int:
    a = np.array(a, dtype=np.int64) % 2
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def brute_force_circulant_inverse(first_row):
    """Search all 2^p first rows for one whose circulant inverts the given one.

    A product of circulants is circulant, so A B = I iff A times the first
    column of B is the unit vector; all 2^p columns are tested at once.
    """
    p = len(first_row)
    if p > 16:
        raise ValueError("exhaustive inverse search limited to p <= 16")
    A = dense_circulant(first_row)
    cols = (np.arange(1 << p)[:, None] >> np.arange(p)[None, :]) & 1
    unit = np.zeros(p, dtype=np.int64)
    unit[0] = 1
    hits = np.flatnonzero(((cols @ A.T) % 2 == unit).all(axis=1))
    if not hits.size:
        return None
    col = cols[hits[0]]
    row = np.array([col[(-j) % p] for j in range(p)], dtype=np.uint8)
    assert np.array_equal(dense_mul(A, dense_circulant(row)), np.eye(p, dtype=np.int64))
    return row


def dense_generator(first_rows) -> np.ndarray:
    """Systematic G = [I_k | C] for H = [H_0 ... H_{n0-1}] with H_{n0-1} invertible."""
    blocks = [dense_circulant(r) for r in first_rows]
    p = blocks[0].shape[0]
    inv = dense_inverse(blocks[-1])
    if inv is None:
        raise ValueError("last block is singular")
    A = np.hstack(blocks[:-1])
    C = dense_mul(inv, A).T
    k = A.shape[1]
    return np.hstack([np.eye(k, dtype=np.int64), C])


def dense_right_inverse(first_rows) -> np.ndarray:
    """n x p matrix X with H X = I, nonzero only in the last block."""
    blocks = [dense_circulant(r) for r in first_rows]
    p = blocks[0].shape[0]
    inv = dense_inverse(blocks[-1])
    if inv is None:
        raise ValueError("last block is singular")
    return np.vstack([np.zeros(((len(blocks) - 1) * p, p), dtype=np.int64), inv])


def dense_girth_at_least_6(H) -> bool:
    """No two columns share two or more rows."""
    H = np.asarray(H, dtype=np.int64)
    overlap = H.T @ H
    np.fill_diagonal(overlap, 0)
    return bool(overlap.max(initial=0) <= 1)


# -- channel --

def oracle_q_function(ebn0_db: float, rate: float = 1.0) -> float:
    """Uncoded BPSK bit error rate Q(sqrt(2 Eb/N0)).

    ``rate`` is accepted for interface symmetry; the uncoded baseline does not
    depend on it.
    """
    if math.isinf(ebn0_db):
        return 0.0 if ebn0_db > 0 else 0.5
    return 0.5 * math.erfc(math.sqrt(10.0 ** (ebn0_db / 10.0)))
