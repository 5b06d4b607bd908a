import cmath
import random

import pytest
from hypothesis import given, settings, strategies as st

from gbfcert.cyclo import (
    CycloElt,
    abs_square,
    conj,
    cyclotomic_poly,
    equals_integer,
    float_approx,
    is_zero,
    reduction_matrix,
    root_power,
)


def mobius(n):
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    return -res if n > 1 else res


def pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def pdiv_exact(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        q[k] = a[k + len(b) - 1] // b[-1]
        for j, y in enumerate(b):
            a[k + j] -= q[k] * y
    assert not any(a)
    return q


def phi_mobius(n):
    """Phi_n = prod_{d | n} (x^d - 1)^mu(n/d)."""
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d == 0:
            mu = mobius(n // d)
            term = [-1] + [0] * (d - 1) + [1]
            if mu == 1:
                num = pmul(num, term)
            elif mu == -1:
                den = pmul(den, term)
    return pdiv_exact(num, den)


def elt(q, coeffs):
    return CycloElt(q, coeffs)


def rand_elt(rng, q, lo=-10, hi=10):
    return CycloElt(q, [rng.randint(lo, hi) for _ in range(q)])


@pytest.mark.parametrize("q, i, k", [(4, 0, 0), (4, 6, 2), (7, -1, 6)])
def test_root_power(q, i, k):
    z = root_power(q, i)
    assert z.coeffs == tuple(1 if j == k else 0 for j in range(q))


def test_root_power_rejects_small_modulus():
    with pytest.raises(ValueError):
        root_power(1, 0)


def test_mul_examples():
    z4 = root_power(4, 1)
    assert (z4 * z4).coeffs == root_power(4, 2).coeffs
    s = elt(3, [1, 1, 1])
    assert is_zero(s * CycloElt.constant(3, 1))
    a = elt(5, [3, -1, 0, 2, 7])
    assert is_zero(a + (-a))


def test_modulus_mismatch():
    with pytest.raises(ValueError):
        root_power(3, 1) + root_power(4, 1)
    with pytest.raises(ValueError):
        root_power(3, 1) * root_power(4, 1)


def test_conj_examples():
    assert conj(root_power(7, 1)).coeffs == root_power(7, 6).coeffs
    assert conj(CycloElt.constant(9, 5)).coeffs == CycloElt.constant(9, 5).coeffs
    rng = random.Random(1)
    for _ in range(50):
        a = rand_elt(rng, rng.randint(2, 30))
        assert conj(conj(a)).coeffs == a.coeffs


@pytest.mark.parametrize("q, coeffs", [
    (3, (1, 1, 1)),
    (14, (1, -1, 1, -1, 1, -1, 1)),
    (8, (1, 0, 0, 0, 1)),
])
def test_cyclotomic_examples(q, coeffs):
    assert cyclotomic_poly(q).coeffs == coeffs


def test_cyclotomic_matches_mobius_formula():
    for q in range(1, 106):
        assert list(cyclotomic_poly(q).coeffs) == phi_mobius(q), q


def test_cyclotomic_divides_xq_minus_1():
    for q in range(1, 60):
        pdiv_exact([-1] + [0] * (q - 1) + [1], list(cyclotomic_poly(q).coeffs))


def test_cyclotomic_poly_str():
    assert str(cyclotomic_poly(3)) == "x^2 + x + 1"
    assert str(cyclotomic_poly(2)) == "x + 1"


@pytest.mark.parametrize("a, expected", [
    (elt(3, [1, 1, 1]), True),
    (elt(4, [1, 0, 1, 0]), True),
    (root_power(7, 1), False),
])
def test_is_zero_examples(a, expected):
    assert is_zero(a) is expected


def test_equals_integer_examples():
    one_plus_i = elt(4, [1, 1, 0, 0])
    assert equals_integer(one_plus_i * conj(one_plus_i), 2)
    assert not equals_integer(root_power(7, 1), 0)
    assert root_power(6, 3) == -1


def test_abs_square_examples():
    for q in (2, 7, 14, 46):
        for i in range(q):
            assert equals_integer(abs_square(root_power(q, i)), 1)
    assert is_zero(abs_square(elt(7, [1] * 7)))
    assert equals_integer(abs_square(CycloElt.constant(23, 3)), 9)


def test_float_approx_examples():
    assert abs(float_approx(elt(4, [1, 1, 0, 0])) - (1 + 1j)) < 1e-12
    assert abs(float_approx(elt(7, [1] * 7))) < 1e-9


def test_is_zero_agrees_with_float_evaluation():
    rng = random.Random(7)
    seen_zero = 0
    for _ in range(300):
        q = rng.randint(2, 40)
        a = rand_elt(rng, q, -2, 2)
        if rng.random() < 0.3:
            # multiples of 1 + zeta + ... + zeta^(q-1) vanish
            a = a * CycloElt(q, [1] * q)
        exact = is_zero(a)
        seen_zero += exact
        assert exact == (abs(float_approx(a)) < 1e-9)
    assert seen_zero > 0


def test_reduced_evaluates_like_original():
    rng = random.Random(3)
    for _ in range(100):
        q = rng.randint(2, 60)
        a = rand_elt(rng, q)
        r = a.reduced()
        approx = sum(c * cmath.exp(2j * cmath.pi * i / q) for i, c in enumerate(r))
        assert abs(approx - float_approx(a)) < 1e-8


def test_reduction_matrix_matches_reduced():
    rng = random.Random(5)
    for q in (2, 6, 12, 14, 15, 30):
        R = reduction_matrix(q)
        for _ in range(20):
            a = rand_elt(rng, q)
            lin = [sum(a.coeffs[k] * R[k][j] for k in range(q)) for j in range(len(R[0]))]
            assert tuple(lin) == a.reduced()


moduli = st.integers(min_value=2, max_value=40)


@st.composite
def triples(draw):
    q = draw(moduli)
    coeff = st.lists(st.integers(-10, 10), min_size=q, max_size=q)
    return tuple(CycloElt(q, draw(coeff)) for _ in range(3))


@settings(max_examples=150)
@given(triples())
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert conj(a * b) == conj(a) * conj(b)


@settings(max_examples=150)
@given(triples())
def test_abs_square_is_real_and_nonnegative(abc):
    a = abc[0]
    s = abs_square(a)
    assert conj(s) == s
    v = float_approx(s)
    assert abs(v.imag) < 1e-9
    assert v.real > -1e-9
    assert abs(v.real - abs(float_approx(a)) ** 2) <= 1e-9 * max(1.0, v.real)


def test_hash_disabled_and_eq_semantic():
    a = elt(3, [1, 1, 1])
    assert a == CycloElt.zero(3)
    with pytest.raises(TypeError):
        hash(a)
