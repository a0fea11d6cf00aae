import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fgqc.errors import DivisionByZero, FieldTooLarge, NonPrimeCharacteristic, NotASubfield
from fgqc.field import GaloisField, field_create, prime_power, primitive_modulus

FIELDS = [(2, 1), (2, 3), (2, 4), (3, 2), (3, 6), (5, 2), (7, 2), (2, 8)]


def naive_mulmod(a, b, mod, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    t = len(mod) - 1
    for d in range(len(prod) - 1, t - 1, -1):
        c = prod[d]
        if c:
            for k in range(t + 1):
                prod[d - t + k] = (prod[d - t + k] - c * mod[k]) % p
    return (prod + [0] * t)[:t]


def digits(v, p, t):
    return [(v // p**i) % p for i in range(t)]


def test_gf8_modulus_and_alpha_cubed():
    F = field_create(2, 3)
    assert F.modulus == (1, 1, 0, 1)
    a = F.alpha
    assert F.add(F.alpha_pow(0), F.alpha_pow(1)) == F.alpha_pow(3)
    assert F.pow(a, 3) == F.add(a, 1)
    # cross-check x^3 against schoolbook reduction
    assert naive_mulmod([0, 0, 0, 1], [1], list(F.modulus), 2) == digits(F.alpha_pow(3), 2, 3)


def test_prime_field_gf2():
    F = field_create(2, 1)
    assert F.order == 2 and F.alpha == 1
    assert list(F.exp) == [1]


def test_gf729_nonzero_count():
    F = field_create(3, 6)
    assert F.order - 1 == 728


@pytest.mark.parametrize("p,t", FIELDS)
def test_alpha_has_full_order(p, t):
    F = field_create(p, t)
    n = F.order - 1
    assert F.pow(F.alpha, n) == 1
    assert len(set(F.exp.tolist())) == n
    assert 0 not in F.exp.tolist()
    nz = np.arange(1, F.order)
    assert np.array_equal(F.exp[F.log[nz]], nz)
    assert F.log[0] == -1


@pytest.mark.parametrize("p,t", [(2, 3), (3, 2), (2, 4), (5, 2)])
def test_exp_table_matches_schoolbook(p, t):
    F = field_create(p, t)
    cur = [1] + [0] * (t - 1)
    g = digits(F.alpha, p, t)
    for i in range(F.order - 1):
        assert digits(int(F.exp[i]), p, t) == cur
        cur = naive_mulmod(cur, g, list(F.modulus), p)


def test_mul_identity_gf729(rng):
    F = field_create(3, 6)
    for x in rng.integers(0, F.order, 1000):
        assert F.mul(int(x), 1) == int(x)


def test_gf8_exponent_arithmetic():
    F = field_create(2, 3)
    assert F.mul(F.alpha_pow(2), F.alpha_pow(6)) == F.alpha_pow(8) == F.alpha


def test_gf9_additive_inverse():
    F = field_create(3, 2)
    for a in range(9):
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(a, a) == 0


@pytest.mark.parametrize("p,t", [(2, 4), (3, 2), (3, 6), (5, 2), (7, 2)])
def test_distributivity(p, t):
    F = field_create(p, t)
    r = np.random.default_rng(p * 100 + t)
    a, b, c = (r.integers(0, F.order, 10_000) for _ in range(3))
    lhs = F.mul_arrays(a, F.add_arrays(b, c))
    rhs = F.add_arrays(F.mul_arrays(a, b), F.mul_arrays(a, c))
    assert np.array_equal(lhs, rhs)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 80), st.integers(1, 80))
def test_inverse_and_division(a, b):
    F = field_create(3, 4)
    assert F.mul(a, F.inv(a)) == 1
    assert F.mul(F.div(a, b), b) == a


def test_zero_has_no_inverse():
    F = field_create(2, 3)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(1, 0)


def test_subfield_gf8_small_2():
    assert field_create(2, 3).subfield_embedding(2) == [0, 1]


def test_subfield_gf16_small_4_closed():
    F = field_create(2, 4)
    sub = F.subfield_embedding(4)
    assert sub == [0, F.alpha_pow(0), F.alpha_pow(5), F.alpha_pow(10)]
    s = set(sub)
    for a in sub:
        for b in sub:
            assert F.add(a, b) in s
            assert F.mul(a, b) in s
        if a:
            assert F.inv(a) in s


def test_subfield_gf729_small_3():
    F = field_create(3, 6)
    sub = F.subfield_embedding(3)
    assert sub == [0, F.alpha_pow(0), F.alpha_pow(364)]
    assert F.pow(F.alpha_pow(364), 2) == 1


def test_not_a_subfield():
    with pytest.raises(NotASubfield):
        field_create(2, 4).subfield_embedding(8)
    with pytest.raises(NotASubfield):
        field_create(2, 4).subfield_embedding(6)


def test_construction_errors():
    with pytest.raises(NonPrimeCharacteristic):
        GaloisField(4, 2)
    with pytest.raises(FieldTooLarge):
        GaloisField(2, 25)
    with pytest.raises(NonPrimeCharacteristic):
        prime_power(12)
    assert prime_power(16) == (2, 4)


def test_custom_modulus_gives_isomorphic_field():
    F = GaloisField(2, 3, modulus=(1, 0, 1, 1))  # x^3 + x^2 + 1
    assert len(set(F.exp.tolist())) == 7
    assert F.modulus != primitive_modulus(2, 3)
