"""Binary quadratic forms of discriminant -p and the order t_p of the ideal class above 2.

t_p is computed along two routes that share no code beyond integer square roots:

* class-group route: the order of the form (2, 1, (p+1)/8) under Gauss composition;
* Diophantine route: the least odd m with x^2 + p*y^2 = 2^(m+2) solvable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .modular import is_prime

DEFAULT_CEILING = 201


@dataclass(frozen=True)
class QuadForm:
    """The form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (-b == a or a == c):
            return False
        return True

    def inverse(self) -> "QuadForm":
        return reduce(QuadForm(self.a, -self.b, self.c))

    def __mul__(self, other: "QuadForm") -> "QuadForm":
        return compose(self, other)

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def _check_definite(f: QuadForm) -> None:
    if f.a <= 0 or f.disc >= 0:
        raise ValueError(f"{f} is not positive definite")


def reduce(form: QuadForm) -> QuadForm:
    """Unique reduced form properly equivalent to ``form``."""
    _check_definite(form)
    a, b, c = form.a, form.b, form.c
    while True:
        # normalize b into (-a, a]
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def principal_form(disc: int) -> QuadForm:
    if disc % 4 == 0:
        return QuadForm(1, 0, -disc // 4)
    return QuadForm(1, 1, (1 - disc) // 4)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition of two primitive forms, returned reduced."""
    _check_definite(f)
    _check_definite(g)
    D = f.disc
    if g.disc != D:
        raise ValueError(f"discriminant mismatch: {D} vs {g.disc}")
    a1, b1, _ = f
    a2, b2, c2 = g
    if a1 > a2:
        a1, b1, _, a2, b2, c2 = a2, b2, c2, a1, b1, f.c
    s = (b1 + b2) // 2
    n = b2 - s
    # u*a2 + v*a1 = d
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, y1, _ = _xgcd(a2, a1)
    # x2*s + y2*d = d1
    if s % d == 0:
        x2, y2, d1 = 0, -1, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce(QuadForm(a3, b3, c3))


def form_power(f: QuadForm, k: int) -> QuadForm:
    result = principal_form(f.disc)
    base = reduce(f)
    if k < 0:
        base, k = base.inverse(), -k
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def _check_working_prime(p: int) -> None:
    if p % 8 != 7 or not is_prime(p):
        raise ValueError(f"{p} is not a prime = 7 (mod 8)")


@dataclass(frozen=True)
class ClassGroupSummary:
    p: int
    h: int
    reduced_forms: tuple[QuadForm, ...]


def reduced_forms(disc: int) -> list[QuadForm]:
    """All reduced primitive positive-definite forms of a negative discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError(f"bad discriminant {disc}")
    out = []
    a = 1
    # reduced => 3a^2 <= |disc|
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = QuadForm(a, b, c)
            if f.is_reduced() and math.gcd(math.gcd(a, b), c) == 1:
                out.append(f)
        a += 1
    return out


def class_group(p: int) -> ClassGroupSummary:
    _check_working_prime(p)
    forms = reduced_forms(-p)
    return ClassGroupSummary(p, len(forms), tuple(forms))


def prime_form_above_2(p: int) -> QuadForm:
    """The form (2, 1, (p+1)/8), which represents a prime ideal above 2."""
    _check_working_prime(p)
    return QuadForm(2, 1, (p + 1) // 8)


def tp_via_class_order(p: int) -> int:
    """Order of the class of (2, 1, (p+1)/8) in the form class group."""
    base = reduce(prime_form_above_2(p))
    one = principal_form(-p)
    cur, k = base, 1
    while cur != one:
        cur = compose(cur, base)
        k += 1
    return k


class NotFoundError(ArithmeticError):
    pass


def first_odd_level(p: int) -> int:
    """Least odd m with 2^(m+2) > p, i.e. the least odd m above log2(p) - 2."""
    m = 1
    while (1 << (m + 2)) <= p:
        m += 2
    return m


def solve_norm_equation(p: int, m: int) -> tuple[int, int] | None:
    """First (x, y), by increasing y >= 0, with x^2 + p*y^2 = 2^(m+2) and x >= 0."""
    target = 1 << (m + 2)
    y = 0
    while p * y * y <= target:
        rest = target - p * y * y
        x = math.isqrt(rest)
        if x * x == rest:
            return x, y
        y += 1
    return None


def tp_via_diophantine(p: int, ceiling: int = DEFAULT_CEILING) -> tuple[int, int, int]:
    """Least odd m with x^2 + p*y^2 = 2^(m+2) solvable; returns (m, x, y)."""
    _check_working_prime(p)
    m = first_odd_level(p)
    while m <= ceiling:
        sol = solve_norm_equation(p, m)
        if sol is not None:
            return (m, *sol)
        m += 2
    raise NotFoundError(f"no solution for p={p} with odd m <= {ceiling}")


class RouteDisagreement(AssertionError):
    """The two computations of t_p returned different values."""


@dataclass(frozen=True)
class TpCertificate:
    p: int
    t_p: int
    witness_x: int
    witness_y: int
    route_class_order: int
    route_diophantine: int

    def check(self) -> None:
        x, y = self.witness_x, self.witness_y
        if x * x + self.p * y * y != 1 << (self.t_p + 2):
            raise ValueError(f"witness ({x}, {y}) fails for p={self.p}, t_p={self.t_p}")
        if self.t_p % 2 == 0:
            raise ValueError("t_p must be odd")
        if (1 << (self.t_p + 2)) <= self.p:
            raise ValueError("t_p violates t_p > log2(p) - 2")
        if not (self.route_class_order == self.route_diophantine == self.t_p):
            raise RouteDisagreement(f"routes disagree for p={self.p}")


def tp_certificate(p: int, ceiling: int = DEFAULT_CEILING) -> TpCertificate:
    by_class = tp_via_class_order(p)
    by_norm, x, y = tp_via_diophantine(p, ceiling)
    if by_class != by_norm:
        raise RouteDisagreement(
            f"p={p}: class-group order {by_class} != Diophantine level {by_norm}"
        )
    cert = TpCertificate(p, by_class, x, y, by_class, by_norm)
    cert.check()
    return cert
