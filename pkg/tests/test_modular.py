import math

import pytest
from hypothesis import given, strategies as st

from gbfcert.modular import (
    ALL_E,
    E_ONE,
    NONE,
    applicability,
    factorize,
    half_order_condition,
    is_prime,
    ord2_mod,
    primes_7_mod_8,
    wieferich_ok,
)

TABLE_PRIMES = {7, 23, 47, 71, 79, 103, 167, 191, 199}


def naive_order(p):
    k, x = 1, 2 % p
    while x != 1:
        x = x * 2 % p
        k += 1
    return k


def trial_division(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


@pytest.mark.parametrize("n, expected", [(7, True), (1, False), (0, False), (2, True), (3511, True),
                                         (3511 * 3511, False), (561, False)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected
    assert trial_division(n) is expected


def test_is_prime_matches_sieve_below_10_6(prime_flags):
    mismatches = [n for n in range(len(prime_flags)) if is_prime(n) != bool(prime_flags[n])]
    assert mismatches == []


def test_is_prime_large_known_values():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@pytest.mark.parametrize("p, k", [(7, 3), (23, 11), (31, 5)])
def test_ord2_examples(p, k):
    assert ord2_mod(p) == k == naive_order(p)


def test_ord2_matches_naive_below_5000():
    for p in range(3, 5000, 2):
        if is_prime(p):
            assert ord2_mod(p) == naive_order(p), p


@pytest.mark.parametrize("bad", [1, 2, 9, 15, 0])
def test_ord2_rejects_non_odd_primes(bad):
    with pytest.raises(ValueError):
        ord2_mod(bad)


def test_ord2_minimality_and_divisibility():
    for p in primes_7_mod_8(3000):
        k = ord2_mod(p)
        assert pow(2, k, p) == 1
        for ell in factorize(k):
            assert pow(2, k // ell, p) != 1
        assert ((p - 1) // 2) % k == 0


@given(st.integers(min_value=2, max_value=10**12))
def test_factorize_product(n):
    fac = factorize(n)
    assert math.prod(ell**e for ell, e in fac.items()) == n
    assert all(is_prime(ell) for ell in fac)


def test_factorize_uses_rho_beyond_trial_range():
    a, b = 1000003, 1000033
    assert factorize(a * b) == {a: 1, b: 1}


@pytest.mark.parametrize("p, expected", [(23, True), (31, False), (7, True)])
def test_half_order(p, expected):
    assert half_order_condition(p) is expected


@pytest.mark.parametrize("p, expected", [(7, True), (3511, False), (1093, False), (23, True)])
def test_wieferich(p, expected):
    assert wieferich_ok(p) is expected


def test_wieferich_seven_by_hand():
    assert pow(2, 6, 49) == 15


def test_applicability_examples():
    r = applicability(23)
    assert (r.residue_ok, r.half_order_ok, r.wieferich_ok, r.max_e) == (True, True, True, ALL_E)
    r = applicability(31)
    assert r.residue_ok and not r.half_order_ok and r.max_e == NONE
    r = applicability(17)
    assert not r.residue_ok and r.max_e == NONE
    assert any("mod 8" in x for x in r.reasons)


def test_applicability_never_raises_on_odd_input():
    for n in [-5, 0, 1, 2, 4, 15, 49, 3511 * 7]:
        r = applicability(n)
        assert r.max_e == NONE and r.reasons


def test_applicability_3511_is_e1_only():
    r = applicability(3511)
    assert r.residue_ok and r.half_order_ok and not r.wieferich_ok
    assert r.max_e == E_ONE


def test_applicable_set_below_200():
    got = {p for p in range(2, 200) if applicability(p).max_e == ALL_E}
    assert got == TABLE_PRIMES


def test_max_e_invariant():
    for p in range(2, 4000):
        r = applicability(p)
        if r.prime and r.residue_ok and r.half_order_ok:
            assert r.max_e == (ALL_E if r.wieferich_ok else E_ONE)
        else:
            assert r.max_e == NONE
