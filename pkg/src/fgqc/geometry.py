"""Euclidean (origin removed) and projective geometries over GF(q).

Points are integer labels. In EG*(m,q) point i is alpha^i in GF(q^m); in
PG(m,q) point i is the coset (alpha^i) of GF(q)* inside GF(q^(m+1)), so that
multiplying by alpha is exactly a +1 shift of every label.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import GeometryTooLarge, InvalidGeometry, NonPrimitiveOrbit, SamePoint
from .field import GaloisField, field_create, prime_factors, prime_power

MAX_CLASS_ENUM_POINTS = 1 << 16


class GeometryKind(enum.Enum):
    EG = "eg"  # Euclidean geometry without the origin
    PG = "pg"

    @classmethod
    def parse(cls, value) -> "GeometryKind":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("eg", "eg*", "euclidean"):
            return cls.EG
        if v in ("pg", "projective"):
            return cls.PG
        raise InvalidGeometry(f"unknown geometry kind {value!r}")


@dataclass(frozen=True)
class GeometrySpec:
    kind: GeometryKind
    m: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "kind", GeometryKind.parse(self.kind))
        if self.m < 2:
            raise InvalidGeometry("dimension m must be at least 2")
        if self.q < 2:
            raise InvalidGeometry("q must be at least 2")
        prime_power(self.q)

    def __str__(self):
        name = "EG*" if self.kind is GeometryKind.EG else "PG"
        return f"{name}({self.m},{self.q})"

    # closed-form parameters

    @property
    def points(self) -> int:
        q, m = self.q, self.m
        if self.kind is GeometryKind.EG:
            return q**m - 1
        return (q ** (m + 1) - 1) // (q - 1)

    @property
    def rho(self) -> int:
        return self.q if self.kind is GeometryKind.EG else self.q + 1

    @property
    def gamma(self) -> int:
        q, m = self.q, self.m
        g = (q**m - 1) // (q - 1)
        return g - 1 if self.kind is GeometryKind.EG else g

    @property
    def line_count(self) -> int:
        """All lines of the geometry (J_o for EG*, J for PG)."""
        q, m = self.q, self.m
        if self.kind is GeometryKind.EG:
            return (q ** (m - 1) - 1) * (q**m - 1) // (q - 1)
        return (q ** (m + 1) - 1) * (q**m - 1) // ((q - 1) * (q - 1) * (q + 1))

    @property
    def primitive_line_count(self) -> int:
        """Lines whose incident vector has a full-length cyclic orbit."""
        q, m = self.q, self.m
        if self.kind is GeometryKind.PG and m % 2 == 1:
            return q * (q ** (m + 1) - 1) * (q ** (m - 1) - 1) // ((q * q - 1) * (q - 1))
        return self.line_count

    @property
    def class_count(self) -> int:
        q, m = self.q, self.m
        if self.kind is GeometryKind.EG:
            return (q ** (m - 1) - 1) // (q - 1)
        if m % 2 == 0:
            return (q**m - 1) // (q * q - 1)
        return q * (q ** (m - 1) - 1) // (q * q - 1)

    @property
    def density(self) -> float:
        return self.rho / self.points

    @property
    def field_degree(self) -> int:
        s = prime_power(self.q)[1]
        return s * (self.m if self.kind is GeometryKind.EG else self.m + 1)

    @property
    def field(self) -> GaloisField:
        return field_create(prime_power(self.q)[0], self.field_degree)

    @property
    def subfield(self) -> list[int]:
        return self.field.subfield_embedding(self.q)


@dataclass(frozen=True)
class Line:
    """A line given by its sorted point labels; doubles as its incident vector."""

    p: int
    points: tuple[int, ...]

    @classmethod
    def from_points(cls, p, points) -> "Line":
        return cls(p, tuple(sorted(int(x) for x in points)))

    @classmethod
    def from_bits(cls, bits) -> "Line":
        bits = np.asarray(bits)
        return cls(len(bits), tuple(int(i) for i in np.flatnonzero(bits)))

    @property
    def weight(self) -> int:
        return len(self.points)

    @property
    def bits(self) -> np.ndarray:
        v = np.zeros(self.p, dtype=np.uint8)
        v[list(self.points)] = 1
        return v

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    def as_int(self) -> int:
        """Incident vector packed into an int, bit i = point i."""
        out = 0
        for x in self.points:
            out |= 1 << x
        return out

    def __contains__(self, point):
        return point in self.points


IncidentVector = Line


@dataclass(frozen=True)
class CyclicClass:
    representative: Line
    j2: int
    orbit_size: int

    def line(self, shift: int) -> Line:
        return shift_line(self.representative, shift)


def shift_line(v: Line, i: int) -> Line:
    """Cyclic right shift by i positions (the line alpha^i * F)."""
    p = v.p
    return Line.from_points(p, ((x + i) % p for x in v.points))


def orbit_size(v: Line) -> int:
    p = v.p
    pts = set(v.points)
    size = p
    # an orbit smaller than p divides p/r for some prime r | p
    for r in prime_factors(p):
        d = p // r
        if d and d < size and all((x + d) % p in pts for x in pts):
            size = d
    if size < p:
        # refine to the exact minimal period
        for d in range(1, size + 1):
            if size % d == 0 and all((x + d) % p in pts for x in pts):
                return d
    return size


def _rotation_key(support: tuple[int, ...]):
    # lexicographically smaller bit string == larger label at the first differing position
    return (support[1] if len(support) > 1 else 0, tuple(-x for x in support))


def canonicalize(v: Line) -> tuple[CyclicClass, int]:
    """Class representative r and shift s with shift_line(r, s) == v.

    r starts with a 1 at position 0 and has its second 1 as early as possible;
    ties go to the lexicographically smallest bit string.
    """
    size = orbit_size(v)
    if size < v.p:
        raise NonPrimitiveOrbit(f"orbit of size {size} < {v.p}")
    p = v.p
    best = None
    for j in v.points:
        support = tuple(sorted((x - j) % p for x in v.points))
        key = _rotation_key(support)
        if best is None or key < best[0]:
            best = (key, support, j)
    _, support, shift = best
    rep = Line(p, support)
    j2 = support[1] if len(support) > 1 else 0
    return CyclicClass(rep, j2, size), shift


# -- line construction --

def _check_point(spec: GeometrySpec, pt: int):
    if not 0 <= pt < spec.points:
        raise InvalidGeometry(f"point {pt} outside [0, {spec.points})")


def _eg_lines_through(spec: GeometrySpec, pt: int) -> np.ndarray:
    """Rows of sorted point labels, one per line through pt avoiding the origin."""
    F = spec.field
    a0 = int(F.exp[pt])
    others = F.exp[np.arange(F.order - 1) != pt]
    direction = F.add_arrays(others, F.neg(a0))
    cols = [F.add_arrays(a0, F.mul_arrays(beta, direction)) for beta in spec.subfield]
    pts = np.stack(cols, axis=1)
    keep = ~(pts == 0).any(axis=1)
    labels = np.sort(F.log[pts[keep]], axis=1)
    return np.unique(labels, axis=0)


def eg_enumerate_lines_through_point(spec: GeometrySpec, pt: int) -> set[Line]:
    if spec.kind is not GeometryKind.EG:
        raise InvalidGeometry("EG* enumeration requested for a projective geometry")
    _check_point(spec, pt)
    p = spec.points
    return {Line(p, tuple(int(x) for x in row)) for row in _eg_lines_through(spec, pt)}


def _pg_lines_rows(spec: GeometrySpec, j1: int, j2s: np.ndarray) -> np.ndarray:
    F = spec.field
    n = spec.points
    a = int(F.exp[j1])
    b = F.exp[j2s]
    cols = [F.log[b] % n]
    for eta in spec.subfield:
        e = F.add_arrays(a, F.mul_arrays(eta, b))
        cols.append(F.log[e] % n)
    return np.sort(np.stack(cols, axis=1), axis=1)


def pg_line(spec: GeometrySpec, j1: int, j2: int) -> Line:
    """Line through projective points j1 and j2: cosets of eta1*a^j1 + eta2*a^j2."""
    if spec.kind is not GeometryKind.PG:
        raise InvalidGeometry("pg_line requires a projective geometry")
    _check_point(spec, j1)
    _check_point(spec, j2)
    if j1 == j2:
        raise SamePoint(f"points {j1} and {j2} coincide")
    row = _pg_lines_rows(spec, j1, np.array([j2]))[0]
    return Line(spec.points, tuple(int(x) for x in row))


def _pg_lines_through(spec: GeometrySpec, pt: int) -> np.ndarray:
    others = np.array([j for j in range(spec.points) if j != pt], dtype=np.int64)
    return np.unique(_pg_lines_rows(spec, pt, others), axis=0)


def lines_through_point(spec: GeometrySpec, pt: int) -> list[Line]:
    _check_point(spec, pt)
    rows = _eg_lines_through(spec, pt) if spec.kind is GeometryKind.EG else _pg_lines_through(spec, pt)
    return [Line(spec.points, tuple(int(x) for x in row)) for row in rows]


def class_sort_key(c: CyclicClass):
    return _rotation_key(c.representative.points)


@lru_cache(maxsize=16)
def enumerate_cyclic_classes(spec: GeometrySpec) -> tuple[CyclicClass, ...]:
    """All cyclic classes with full-length orbits, in canonical order.

    Canonical order is ascending j2, then lexicographically smallest bit string.
    Only lines through point 0 are examined: every orbit of length p meets it.
    """
    if spec.points > MAX_CLASS_ENUM_POINTS:
        raise GeometryTooLarge(f"{spec} has {spec.points} points (limit {MAX_CLASS_ENUM_POINTS})")
    seen = {}
    for line in lines_through_point(spec, 0):
        try:
            cls, _ = canonicalize(line)
        except NonPrimitiveOrbit:
            continue
        seen.setdefault(cls.representative.points, cls)
    classes = tuple(sorted(seen.values(), key=class_sort_key))
    if len(classes) != spec.class_count:
        raise AssertionError(f"{spec}: enumerated {len(classes)} classes, expected {spec.class_count}")
    return classes
