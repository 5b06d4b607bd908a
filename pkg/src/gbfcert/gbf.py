"""Generalized bent functions: data model, exact spectra and structural diagnostics.

Two families are supported:

* ``qq``: f: Z_q^n -> Z_q with F(lam) = sum_x zeta_q^(f(x) - x.lam); bent iff |F|^2 = q^n.
* ``2m``: f: Z_2^n -> Z_m with F(lam) = sum_x (-1)^(x.lam) zeta_m^f(x); bent iff |F|^2 = 2^n.

Domain points are indexed mixed-radix with coordinate 0 least significant, so for
base b the index of x is x[0] + b*x[1] + b^2*x[2] + ...
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cyclo import CycloElt
from .modular import applicability, is_prime
from .quadforms import tp_certificate

QQ = "qq"
TWO_M = "2m"
FAMILIES = (QQ, TWO_M)
SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class GbfType:
    family: str
    n: int
    modulus: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")

    @property
    def base(self) -> int:
        """Size of each domain coordinate."""
        return self.modulus if self.family == QQ else 2

    @property
    def domain_size(self) -> int:
        return self.base**self.n

    @property
    def target(self) -> int:
        """The value |F(lam)|^2 must take for a bent function."""
        return self.domain_size

    def __str__(self):
        return f"[{self.n}, {self.modulus}] ({self.family})"


def decode(index: int, base: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, base)
        out.append(r)
    return tuple(out)


def encode(x, base: int) -> int:
    idx = 0
    for c in reversed(x):
        idx = idx * base + c
    return idx


def domain_points(t: GbfType) -> np.ndarray:
    """All domain points as a (D, n) integer array in index order."""
    idx = np.arange(t.domain_size)
    return np.stack([(idx // t.base**j) % t.base for j in range(t.n)], axis=1)


@dataclass(frozen=True)
class GbfFunction:
    type: GbfType
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.type.domain_size:
            raise ValueError(
                f"expected {self.type.domain_size} values for type {self.type}, got {len(vals)}"
            )
        bad = [i for i, v in enumerate(vals) if not 0 <= v < self.type.modulus]
        if bad:
            i = bad[0]
            raise ValueError(f"values[{i}] = {vals[i]} is outside [0, {self.type.modulus})")

    @classmethod
    def from_callable(cls, t: GbfType, fn) -> "GbfFunction":
        pts = [decode(i, t.base, t.n) for i in range(t.domain_size)]
        return cls(t, tuple(fn(x) % t.modulus for x in pts))

    def to_dict(self) -> dict:
        return {
            "family": self.type.family,
            "n": self.type.n,
            "modulus": self.type.modulus,
            "values": list(self.values),
        }

    @classmethod
    def from_dict(cls, doc) -> "GbfFunction":
        return cls(GbfType(doc["family"], doc["n"], doc["modulus"]), tuple(doc["values"]))


class FunctionFileError(ValueError):
    """A function file that cannot be parsed or fails validation."""


def load_function(path) -> GbfFunction:
    """Read and validate a function file ``{"family", "n", "modulus", "values"}``."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise FunctionFileError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FunctionFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_function(doc, where=str(path))


def parse_function(doc, where: str = "<input>") -> GbfFunction:
    if not isinstance(doc, dict):
        raise FunctionFileError(f"{where}: top level must be a JSON object")
    for key, kind in (("family", str), ("n", int), ("modulus", int), ("values", list)):
        if key not in doc:
            raise FunctionFileError(f"{where}: missing field {key!r}")
        if not isinstance(doc[key], kind) or isinstance(doc[key], bool):
            raise FunctionFileError(f"{where}: field {key!r} must be {kind.__name__}")
    for i, v in enumerate(doc["values"]):
        if not isinstance(v, int) or isinstance(v, bool):
            raise FunctionFileError(f"{where}: values[{i}] is not an integer")
    try:
        return GbfFunction.from_dict(doc)
    except ValueError as exc:
        raise FunctionFileError(f"{where}: {exc}") from exc


def save_function(f: GbfFunction, path) -> None:
    with open(path, "w") as fh:
        json.dump(f.to_dict(), fh)
        fh.write("\n")


# --- spectra -----------------------------------------------------------------


def spectrum_matrix(f: GbfFunction) -> np.ndarray:
    """Exponent-count matrix S with F(lam) = sum_k S[lam, k] * zeta^k.

    Shape (D, modulus), int64. Row order follows the domain index.
    """
    t = f.type
    D, m = t.domain_size, t.modulus
    X = domain_points(t)
    dots = X @ X.T
    vals = np.asarray(f.values, dtype=np.int64)
    rows = np.repeat(np.arange(D, dtype=np.int64), D) * m
    if t.family == QQ:
        exps = (vals[None, :] - dots) % m
        return np.bincount((rows + exps.ravel()), minlength=D * m).reshape(D, m)
    odd = (dots % 2).astype(bool)
    slots = rows.reshape(D, D) + vals[None, :]
    plus = np.bincount(slots[~odd], minlength=D * m)
    minus = np.bincount(slots[odd], minlength=D * m)
    return (plus - minus).reshape(D, m)


@dataclass(frozen=True)
class Spectrum:
    type: GbfType
    entries: tuple[CycloElt, ...]

    def __getitem__(self, lam) -> CycloElt:
        if not isinstance(lam, int):
            lam = encode(lam, self.type.base)
        return self.entries[lam]

    def __len__(self):
        return len(self.entries)


def fourier(f: GbfFunction) -> Spectrum:
    """Exact Fourier (QtoQ) or Walsh-type (TwoToM) spectrum, by direct summation."""
    S = spectrum_matrix(f)
    m = f.type.modulus
    return Spectrum(f.type, tuple(CycloElt(m, row.tolist()) for row in S))


def is_gbf(f: GbfFunction, spectrum: Spectrum | None = None) -> bool:
    """Exact bent test; stops at the first lam (in index order) that fails."""
    target = f.type.target
    if spectrum is None:
        S = spectrum_matrix(f)
        m = f.type.modulus
        entries = (CycloElt(m, row.tolist()) for row in S)
    else:
        entries = iter(spectrum.entries)
    return all(F.abs_square().equals_integer(target) for F in entries)


def float_spectrum(f: GbfFunction) -> np.ndarray:
    """Complex double-precision spectrum, computed independently of the exact path."""
    t = f.type
    X = domain_points(t).astype(np.float64)
    vals = np.asarray(f.values, dtype=np.float64)
    if t.family == QQ:
        phase = (vals[None, :] - X @ X.T) / t.modulus
        return np.exp(2j * np.pi * phase).sum(axis=1)
    sign = np.cos(np.pi * (X @ X.T))
    return (sign * np.exp(2j * np.pi * vals[None, :] / t.modulus)).sum(axis=1)


def float_is_gbf(f: GbfFunction, tol: float = 1e-6) -> bool:
    F = float_spectrum(f)
    return bool(np.all(np.abs(np.abs(F) ** 2 - f.type.target) < tol))


def construct_quadratic(n: int, q: int, verify: bool = True) -> GbfFunction:
    """f(x) = x0*x1 + x2*x3 + ... mod q on Z_q^n (n even)."""
    if n % 2 or n < 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    t = GbfType(QQ, n, q)
    f = GbfFunction.from_callable(t, lambda x: sum(x[2 * j] * x[2 * j + 1] for j in range(n // 2)))
    if verify and t.domain_size <= 4096 and not is_gbf(f):  # pragma: no cover
        raise ArithmeticError(f"quadratic construction is not bent at {t}")
    return f


# --- shifts and partitions -----------------------------------------------------


def add_points(x, y, base: int) -> tuple[int, ...]:
    return tuple((a + b) % base for a, b in zip(x, y))


def order2_elements(t: GbfType) -> list[tuple[int, ...]]:
    """Elements of order exactly 2, ordered by bitmask (bit j set <=> coordinate j nonzero)."""
    if t.base % 2:
        raise ValueError(f"Z_{t.base}^{t.n} has no elements of order 2")
    half = t.base // 2
    return [tuple(half if mask >> j & 1 else 0 for j in range(t.n)) for mask in range(1, 2**t.n)]


def _check_order2(t: GbfType, v) -> tuple[int, ...]:
    v = tuple(v)
    if len(v) != t.n:
        raise ValueError(f"shift {v} has wrong length for {t}")
    if any(2 * c % t.base for c in v) or not any(c % t.base for c in v):
        raise ValueError(f"shift {v} does not have order 2 in Z_{t.base}^{t.n}")
    return v


def cross_correlation(f: GbfFunction, v, spectrum: Spectrum | None = None) -> CycloElt:
    """sum_lam F(lam) * conj(F(lam + v)); identically zero for v != 0."""
    t = f.type
    v = tuple(c % t.base for c in v)
    if len(v) != t.n:
        raise ValueError(f"shift {v} has wrong length for {t}")
    if not any(v):
        raise ValueError("v = 0 gives the total spectral mass, not a correlation")
    spec = spectrum or fourier(f)
    acc = CycloElt.zero(t.modulus)
    for i in range(t.domain_size):
        lam = decode(i, t.base, t.n)
        acc = acc + spec[i] * spec[add_points(lam, v, t.base)].conj()
    return acc


@dataclass(frozen=True)
class PartitionReport:
    shift: tuple[int, ...]
    n_v: int
    m_v: int
    o_v: int

    def to_dict(self) -> dict:
        return {"shift": list(self.shift), "n_v": self.n_v, "m_v": self.m_v, "o_v": self.o_v}


def _canonical(spec: Spectrum) -> list[tuple[int, ...]]:
    return [F.reduced() for F in spec.entries]


def _classify(a: tuple[int, ...], b: tuple[int, ...]) -> str:
    # zero == zero counts as N (tie rule)
    if a == b:
        return "N"
    if all(x == -y for x, y in zip(a, b)):
        return "M"
    return "O"


def partition_report(f: GbfFunction, v, spectrum: Spectrum | None = None) -> PartitionReport:
    """Sizes of {F(lam) = F(lam+v)}, {F(lam) = -F(lam+v)} and the remainder."""
    t = f.type
    v = _check_order2(t, v)
    canon = _canonical(spectrum or fourier(f))
    counts = Counter()
    for i in range(t.domain_size):
        j = encode(add_points(decode(i, t.base, t.n), v, t.base), t.base)
        counts[_classify(canon[i], canon[j])] += 1
    return PartitionReport(v, counts["N"], counts["M"], counts["O"])


# --- subgroup structure and the cell census -----------------------------------


def _parity_table(t: int) -> np.ndarray:
    par = np.zeros(2**t, dtype=np.int8)
    for k in range(t):
        par[1 << k : 1 << (k + 1)] = 1 - par[: 1 << k]
    return par


def index2_subgroups(t: int) -> list[np.ndarray]:
    """Kernels of the nonzero functionals on F_2^t, as boolean masks of length 2^t.

    Functional a (1 <= a < 2^t) sends x to the parity of popcount(a & x); the
    subgroups are returned in increasing order of a.
    """
    if t < 1:
        raise ValueError("t must be positive")
    par = _parity_table(t)
    xs = np.arange(2**t)
    return [par[a & xs] == 0 for a in range(1, 2**t)]


def is_subgroup_mask(members: set[int]) -> bool:
    """Whether a set of F_2^t vectors (encoded as ints, 0 included) is closed under xor."""
    return 0 in members and all((u ^ w) in members for u in members for w in members)


@dataclass
class CellCensus:
    """Joint N/M pattern of every lam across all order-2 shifts."""

    type: GbfType
    shifts: list[tuple[int, ...]]
    reports: list[PartitionReport]
    unclassified: int  # lam with F(lam) != +-F(lam+v) for some v
    cells: dict[frozenset, int] = field(default_factory=dict)  # N-set (shift masks) -> size
    triples: list[dict] = field(default_factory=list)

    @property
    def n_G(self) -> int:
        return self.cells.get(frozenset(range(1, len(self.shifts) + 1)), 0)

    def cell_kind(self, nset: frozenset) -> str:
        members = set(nset) | {0}
        size = len(self.shifts) + 1
        if not is_subgroup_mask(members):
            return "not a subgroup"
        if len(members) == size:
            return "G"
        if 2 * len(members) == size:
            return "index 2"
        return "index > 2"

    def to_dict(self) -> dict:
        return {
            "type": {"family": self.type.family, "n": self.type.n, "modulus": self.type.modulus},
            "shifts": [r.to_dict() for r in self.reports],
            "unclassified": self.unclassified,
            "cells": [
                {"n_set": sorted(k), "size": v, "kind": self.cell_kind(k)}
                for k, v in sorted(self.cells.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            ],
            "triples": self.triples,
            "n_G": self.n_G,
        }


def cell_census(f: GbfFunction, spectrum: Spectrum | None = None) -> CellCensus:
    """Partition reports for every order-2 shift plus the subgroup-cell breakdown.

    Shift k (1-based) is the order-2 element whose nonzero coordinates are the set
    bits of k. A lam falls into the cell labelled by {k : F(lam) = F(lam + v_k)}
    provided F(lam) = +-F(lam + v_k) for every k; otherwise it is unclassified.
    The triple table counts, for each u + v + w = 0, the lam in N_u∩N_v∩M_w-type
    intersections (any one M) and in M_u∩M_v∩M_w.
    """
    t = f.type
    shifts = order2_elements(t)
    canon = _canonical(spectrum or fourier(f))
    D = t.domain_size
    labels = np.empty((len(shifts), D), dtype="<U1")
    for k, v in enumerate(shifts):
        for i in range(D):
            j = encode(add_points(decode(i, t.base, t.n), v, t.base), t.base)
            labels[k, i] = _classify(canon[i], canon[j])
    reports = [
        PartitionReport(v, int((labels[k] == "N").sum()), int((labels[k] == "M").sum()),
                        int((labels[k] == "O").sum()))
        for k, v in enumerate(shifts)
    ]
    cells: Counter = Counter()
    unclassified = 0
    for i in range(D):
        col = labels[:, i]
        if (col == "O").any():
            unclassified += 1
            continue
        cells[frozenset(k + 1 for k in range(len(shifts)) if col[k] == "N")] += 1
    triples = []
    for a, b in combinations(range(1, len(shifts) + 1), 2):
        c = a ^ b
        if c <= b:
            continue
        la, lb, lc = labels[a - 1], labels[b - 1], labels[c - 1]
        nm = (la == "M").astype(int) + (lb == "M").astype(int) + (lc == "M").astype(int)
        classified = (la != "O") & (lb != "O") & (lc != "O")
        triples.append({
            "u": a, "v": b, "w": c,
            "one_M": int(((nm == 1) & classified).sum()),
            "all_M": int(((nm == 3) & classified).sum()),
        })
    return CellCensus(t, shifts, reports, unclassified, dict(cells), triples)


# --- the counting argument ----------------------------------------------------


@dataclass(frozen=True)
class CountingOutcome:
    t: int
    p: int
    e: int
    n_G: int
    divisible_by_2t: bool
    contradiction: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t, "p": self.p, "e": self.e, "n_G": self.n_G,
            "divisible_by_2t": self.divisible_by_2t, "contradiction": self.contradiction,
        }


_EXPLICIT_COUNT_LIMIT = 14


def _kernel_nonzero_count(t: int) -> int:
    """|H - {0}|, common to every index-2 subgroup H of F_2^t.

    Counted explicitly over all 2^t - 1 subgroups when t is small enough,
    otherwise taken as 2^(t-1) - 1.
    """
    if t > _EXPLICIT_COUNT_LIMIT:
        return 2 ** (t - 1) - 1
    par = _parity_table(t)
    xs = np.arange(1, 2**t)
    sizes = {int((par[a & xs] == 0).sum()) for a in range(1, 2**t)}
    if len(sizes) != 1:  # pragma: no cover
        raise ArithmeticError("index-2 subgroups of unequal size")
    return sizes.pop()


def counting_contradiction(t: int, p: int, e: int) -> CountingOutcome:
    """Solve the cell-count system of a hypothetical bent function of type [t, 2p^e] for n_G.

    With q = 2p^e and h_H the size of the cell of index-2 subgroup H:
        sum_H h_H + n_G = q^t
        sum_{H contains v} h_H + n_G = q^t / 2      for each v != 0 in G.
    Summing the second family over v counts each h_H once per nonzero element
    of H; substituting the first equation leaves a single linear equation in n_G.
    """
    if t < 1 or t % 2 == 0:
        raise ValueError(f"t must be a positive odd integer, got {t}")
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if e < 1:
        raise ValueError("e must be positive")
    q = 2 * p**e
    total = Fraction(q**t)
    half = total / 2
    n_shifts = 2**t - 1
    k = _kernel_nonzero_count(t)
    # summed shift equations: k * sum_h + n_shifts * n_G = n_shifts * half
    # with sum_h = total - n_G:  (n_shifts - k) * n_G = n_shifts * half - k * total
    n_G = (n_shifts * half - k * total) / (n_shifts - k)
    if n_G.denominator != 1:  # pragma: no cover
        raise ArithmeticError(f"non-integral n_G = {n_G}")
    n_G = int(n_G)
    divisible = n_G % 2**t == 0
    return CountingOutcome(t, p, e, n_G, divisible, not divisible)


def solve_rational(A, b) -> list[Fraction]:
    """Gauss-Jordan elimination over Q for a square nonsingular system."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                factor = M[r][col]
                M[r] = [x - factor * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def cell_system(t: int, q: int) -> tuple[list[list[int]], list[int]]:
    """The full 2^t x 2^t system in unknowns (h_1, ..., h_{2^t-1}, n_G)."""
    subs = index2_subgroups(t)
    rows = [[1] * len(subs) + [1]]
    rhs = [q**t]
    for v in range(1, 2**t):
        rows.append([int(H[v]) for H in subs] + [1])
        rhs.append(q**t // 2)
    return rows, rhs


# --- certificates ------------------------------------------------------------


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class NonexistenceCertificate:
    p: int
    t_p: int
    witness: tuple[int, int]
    conditions: dict
    e_range: str
    families: tuple[str, ...]
    types: tuple[str, ...]
    n_G: int
    tool_version: str
    schema_version: str = SCHEMA_VERSION

    def validate(self) -> None:
        x, y = self.witness
        if x * x + self.p * y * y != 2 ** (self.t_p + 2):
            raise CertificateError(
                f"witness ({x}, {y}) fails x^2 + {self.p} y^2 = 2^{self.t_p + 2}"
            )
        if self.t_p % 2 == 0:
            raise CertificateError("t_p must be odd")
        if self.schema_version != SCHEMA_VERSION:
            raise CertificateError(f"unsupported schema_version {self.schema_version!r}")

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "p": self.p,
            "t_p": self.t_p,
            "witness": {"x": self.witness[0], "y": self.witness[1]},
            "conditions": dict(self.conditions),
            "e_range": self.e_range,
            "families": list(self.families),
            "types": list(self.types),
            "n_G": self.n_G,
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "NonexistenceCertificate":
        try:
            cert = cls(
                p=doc["p"],
                t_p=doc["t_p"],
                witness=(doc["witness"]["x"], doc["witness"]["y"]),
                conditions=dict(doc["conditions"]),
                e_range=doc["e_range"],
                families=tuple(doc["families"]),
                types=tuple(doc["types"]),
                n_G=doc["n_G"],
                tool_version=doc["tool_version"],
                schema_version=doc["schema_version"],
            )
        except (KeyError, TypeError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from exc
        cert.validate()
        return cert

    @classmethod
    def from_json(cls, text: str) -> "NonexistenceCertificate":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class NotApplicable:
    p: int
    failed: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "p": self.p, "status": "not applicable",
                "failed": list(self.failed)}


def nonexistence_certificate(p: int) -> NonexistenceCertificate | NotApplicable:
    """Certify that no bent function of type [t_p, 2p^e] exists, in both families."""
    from . import __version__

    rep = applicability(p)
    if not rep.applicable:
        return NotApplicable(p, rep.reasons)
    tp = tp_certificate(p)
    outcome = counting_contradiction(tp.t_p, p, 1)
    if not outcome.contradiction:  # pragma: no cover
        raise ArithmeticError(f"counting argument failed for p={p}")
    e_part = "2*{p}^e" if rep.max_e.startswith("all") else "2*{p}"
    types = tuple(
        f"[{tp.t_p}, {e_part.format(p=p)}] {fam}" for fam in FAMILIES
    )
    cert = NonexistenceCertificate(
        p=p,
        t_p=tp.t_p,
        witness=(tp.witness_x, tp.witness_y),
        conditions={
            "residue_7_mod_8": rep.residue_ok,
            "half_order": rep.half_order_ok,
            "ord2": rep.ord2,
            "wieferich_ok": rep.wieferich_ok,
        },
        e_range=rep.max_e,
        families=FAMILIES,
        types=types,
        n_G=outcome.n_G,
        tool_version=__version__,
    )
    cert.validate()
    return cert
