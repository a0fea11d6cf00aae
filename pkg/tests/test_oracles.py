import numpy as np
import pytest

from fgqc.errors import GeometryTooLarge
from fgqc.oracles import (
    NaiveField,
    brute_force_circulant_inverse,
    dense_circulant,
    dense_inverse,
    dense_mul,
    dense_rank,
    oracle_enumerate_all_lines,
    oracle_line_count,
    oracle_max_overlap,
    oracle_pairs_on_one_line,
    oracle_points,
    oracle_q_function,
)


@pytest.mark.parametrize("kind,m,q,count", [("eg", 2, 2, 3), ("pg", 2, 2, 7), ("eg", 2, 3, 8)])
def test_line_counts(kind, m, q, count):
    lines = oracle_enumerate_all_lines(kind, m, q)
    assert len(lines) == count == oracle_line_count(kind, m, q)


def test_naive_field_finds_primitive_modulus():
    F = NaiveField(2, 3)
    assert F.modulus in {(1, 1, 0, 1), (1, 0, 1, 1)}  # the two primitive cubics
    assert len(F.powers) == 7
    with pytest.raises(ValueError):
        NaiveField(2, 3, modulus=(1, 1, 1, 1))  # reducible


def test_size_cap():
    with pytest.raises(GeometryTooLarge):
        oracle_enumerate_all_lines("eg", 4, 7)


def test_pair_and_overlap_properties_up_to_255():
    for kind, m, q in [("eg", 3, 3), ("eg", 4, 3), ("eg", 3, 5), ("pg", 3, 3), ("pg", 4, 2), ("pg", 7, 2), ("eg", 7, 2)]:
        npts = oracle_points(kind, m, q)
        assert npts <= 255
        lines = oracle_enumerate_all_lines(kind, m, q)
        assert len(lines) == oracle_line_count(kind, m, q)
        assert oracle_pairs_on_one_line(lines, npts, kind, q)
        assert oracle_max_overlap(lines, npts) == 1


def test_dense_inverse_and_rank():
    a = dense_circulant([1, 1, 1, 0, 0, 0, 0])
    inv = dense_inverse(a)
    assert np.array_equal(dense_mul(a, inv), np.eye(7, dtype=np.int64))
    assert dense_inverse(dense_circulant([1, 1, 0, 1, 0, 0, 0])) is None
    assert dense_rank(dense_circulant([1, 1, 0, 1, 0, 0, 0])) == 4
    assert np.array_equal(dense_circulant(brute_force_circulant_inverse([1, 1, 1, 0, 0, 0, 0])), inv)


def test_q_function():
    assert oracle_q_function(0.0) == pytest.approx(0.0786, abs=1e-4)
    assert oracle_q_function(4.0) == pytest.approx(0.0125, abs=1e-4)
    assert oracle_q_function(float("inf")) == 0.0
    assert oracle_q_function(80.0) < 1e-300 or oracle_q_function(80.0) == 0.0


def test_oracles_do_not_import_main_paths():
    import fgqc.oracles as o

    src = open(o.__file__).read()
    for mod in ("field", "geometry", "circulant", "spa", "channel", "keys", "cipher"):
        assert f"from .{mod} import" not in src
