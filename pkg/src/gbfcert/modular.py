"""Elementary modular arithmetic: primality, the order of 2, and the hypothesis bundle
that decides whether the nonexistence theorems apply to a prime p."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

ALL_E = "all e >= 1"
E_ONE = "e = 1 only"
NONE = "none"

# Deterministic for n < 3.3 * 10^24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = _MR_BASES
_TRIAL_LIMIT = 10**6


@lru_cache(maxsize=65536)
def is_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set; exact for all n < 3.3e24."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int) -> dict[int, int]:
    """Prime factorization: trial division up to 10^6, then Pollard rho."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= _TRIAL_LIMIT:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = _pollard_rho(m)
        stack += [r, m // r]
    return dict(sorted(out.items()))


def _require_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def ord2_mod(p: int) -> int:
    """Multiplicative order of 2 modulo the odd prime p."""
    _require_odd_prime(p)
    k = p - 1
    for ell in factorize(p - 1):
        while k % ell == 0 and pow(2, k // ell, p) == 1:
            k //= ell
    if pow(2, k, p) != 1:  # pragma: no cover - would mean a broken factorization
        raise ArithmeticError(f"order computation failed for p={p}")
    return k


def half_order_condition(p: int) -> bool:
    return ord2_mod(p) == (p - 1) // 2


def wieferich_ok(p: int) -> bool:
    """True when 2^(p-1) is *not* 1 modulo p^2, i.e. p is not a base-2 Wieferich prime."""
    _require_odd_prime(p)
    return pow(2, p - 1, p * p) != 1


@dataclass(frozen=True)
class ApplicabilityReport:
    p: int
    prime: bool
    residue_ok: bool
    half_order_ok: bool
    wieferich_ok: bool
    ord2: int | None
    max_e: str
    reasons: tuple[str, ...] = field(default=())

    @property
    def applicable(self) -> bool:
        return self.max_e != NONE

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "prime": self.prime,
            "residue_ok": self.residue_ok,
            "half_order_ok": self.half_order_ok,
            "wieferich_ok": self.wieferich_ok,
            "ord2": self.ord2,
            "max_e": self.max_e,
            "reasons": list(self.reasons),
        }


def applicability(p: int) -> ApplicabilityReport:
    """Collect every hypothesis of the nonexistence theorems for p.

    Never raises: composite or out-of-range input yields a report with
    ``max_e == "none"`` and the failed conditions listed in ``reasons``.
    """
    prime = p >= 3 and is_prime(p)
    residue = p % 8 == 7
    reasons = []
    if not prime:
        reasons.append(f"{p} is not an odd prime")
    if not residue:
        reasons.append(f"{p} = {p % 8} (mod 8), need 7")
    ord2 = half = wief = None
    if prime:
        ord2 = ord2_mod(p)
        half = ord2 == (p - 1) // 2
        wief = wieferich_ok(p)
        if not half:
            reasons.append(f"ord_p(2) = {ord2}, need (p-1)/2 = {(p - 1) // 2}")
        if not wief:
            reasons.append("2^(p-1) = 1 (mod p^2); only e = 1 is covered")
    half = bool(half)
    wief = bool(wief)
    if prime and residue and half:
        max_e = ALL_E if wief else E_ONE
    else:
        max_e = NONE
    return ApplicabilityReport(p, prime, residue, half, wief, ord2, max_e, tuple(reasons))


def primes_7_mod_8(limit: int) -> list[int]:
    """Primes p <= limit with p = 7 (mod 8), ascending."""
    return [p for p in range(7, limit + 1, 8) if is_prime(p)]
