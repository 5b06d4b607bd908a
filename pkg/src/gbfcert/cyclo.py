"""Exact arithmetic in Z[zeta_q].

Elements live on the full power basis 1, zeta, ..., zeta^(q-1) with no normal form;
equality is decided by exact division by the cyclotomic polynomial Phi_q.
"""

from __future__ import annotations

import cmath
import threading
from dataclasses import dataclass


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division by a monic integer polynomial; coefficient lists are low degree first."""
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(num) <= dd:
        return [0], num + [0] * (dd - len(num))
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        lead = num[k]
        if lead:
            quot[k - dd] = lead
            base = k - dd
            for j in range(dd + 1):
                num[base + j] -= lead * den[j]
    return quot, num[:dd]


@dataclass(frozen=True)
class CycloPoly:
    q: int
    coeffs: tuple[int, ...]  # low degree first, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c:
                mono = "1" if k == 0 else ("x" if k == 1 else f"x^{k}")
                if k and abs(c) == 1:
                    terms.append(("-" if c < 0 else "+") + mono)
                else:
                    terms.append(f"{c:+d}" + ("" if k == 0 else "*" + mono))
        s = " ".join(t[0] + " " + t[1:] for t in terms)
        return s[2:] if s.startswith("+ ") else s


_PHI: dict[int, CycloPoly] = {}
_PHI_LOCK = threading.Lock()


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cyclotomic_poly(q: int) -> CycloPoly:
    """Phi_q = (x^q - 1) / prod_{d | q, d < q} Phi_d, cached per q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    cached = _PHI.get(q)
    if cached is not None:
        return cached
    num = [-1] + [0] * (q - 1) + [1]
    for d in _divisors(q)[:-1]:
        num, rem = _poly_divmod(num, list(cyclotomic_poly(d).coeffs))
        if any(rem):  # pragma: no cover
            raise ArithmeticError(f"Phi_{d} does not divide x^{q} - 1")
    poly = CycloPoly(q, tuple(num))
    with _PHI_LOCK:
        return _PHI.setdefault(q, poly)


class CycloElt:
    """An element sum_i coeffs[i] * zeta_q^i of Z[zeta_q]."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs):
        if q < 2:
            raise ValueError("modulus must be >= 2")
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != q:
            raise ValueError(f"expected {q} coefficients, got {len(coeffs)}")
        self.q = q
        self.coeffs = coeffs

    @classmethod
    def constant(cls, q: int, c: int) -> "CycloElt":
        return cls(q, (c,) + (0,) * (q - 1))

    @classmethod
    def zero(cls, q: int) -> "CycloElt":
        return cls(q, (0,) * q)

    def _same(self, other) -> None:
        if self.q != other.q:
            raise ValueError(f"modulus mismatch: {self.q} vs {other.q}")

    def _coerce(self, other) -> "CycloElt":
        if isinstance(other, int):
            return CycloElt.constant(self.q, other)
        self._same(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return CycloElt(self.q, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElt(self.q, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        return CycloElt(self.q, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElt(self.q, (other * a for a in self.coeffs))
        self._same(other)
        q = self.q
        out = [0] * q
        rhs = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in rhs:
                    out[(i + j) % q] += a * b
        return CycloElt(q, out)

    __rmul__ = __mul__

    def conj(self) -> "CycloElt":
        c = self.coeffs
        return CycloElt(self.q, (c[-i % self.q] for i in range(self.q)))

    def reduced(self) -> tuple[int, ...]:
        """Canonical coordinates: remainder modulo Phi_q, length phi(q)."""
        _, rem = _poly_divmod(list(self.coeffs), list(cyclotomic_poly(self.q).coeffs))
        return tuple(rem)

    def is_zero(self) -> bool:
        return not any(self.coeffs) or not any(self.reduced())

    def equals_integer(self, n: int) -> bool:
        return (self - n).is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.equals_integer(other)
        if not isinstance(other, CycloElt) or other.q != self.q:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # equality is semantic; no cheap canonical hash

    def abs_square(self) -> "CycloElt":
        return self * self.conj()

    def float_approx(self) -> complex:
        q = self.q
        return sum(c * cmath.exp(2j * cmath.pi * i / q) for i, c in enumerate(self.coeffs) if c)

    def __repr__(self):
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycloElt(q={self.q}: {' + '.join(terms) or '0'})"


def root_power(q: int, i: int) -> CycloElt:
    """zeta_q^(i mod q)."""
    if q < 2:
        raise ValueError("modulus must be >= 2")
    v = [0] * q
    v[i % q] = 1
    return CycloElt(q, v)


def conj(a: CycloElt) -> CycloElt:
    return a.conj()


def is_zero(a: CycloElt) -> bool:
    return a.is_zero()


def equals_integer(a: CycloElt, n: int) -> bool:
    return a.equals_integer(n)


def abs_square(a: CycloElt) -> CycloElt:
    return a.abs_square()


def float_approx(a: CycloElt) -> complex:
    return a.float_approx()


def reduction_matrix(q: int) -> list[list[int]]:
    """Rows k = 0..q-1: coordinates of x^k modulo Phi_q.

    An exponent-indexed vector c is zero in Z[zeta_q] iff sum_k c[k] * row[k] == 0;
    the search code uses this as a linear map to test many vectors at once.
    """
    phi = list(cyclotomic_poly(q).coeffs)
    rows = []
    for k in range(q):
        mono = [0] * k + [1]
        rows.append(_poly_divmod(mono, phi)[1])
    return rows
