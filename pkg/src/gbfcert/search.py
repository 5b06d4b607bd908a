"""Exhaustive and random searches for bent functions at tiny types.

Candidates are value tables ordered lexicographically with values[0] most
significant, so candidate index k is the base-``modulus`` numeral of the table.
With ``normalize`` the first value is pinned to 0 and the scan covers the first
modulus^(D-1) indices only.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cyclo import reduction_matrix
from .gbf import QQ, GbfFunction, GbfType, domain_points, is_gbf

DEFAULT_BUDGET = 10**8
DEFAULT_WITNESS_CAP = 1000
BLOCK = 4096
FLOAT_TOL = 1e-6


class BudgetExceeded(Exception):
    def __init__(self, required: int, budget: int):
        super().__init__(f"{required} candidates required, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class SearchSpec:
    type: GbfType
    mode: str = "exhaustive"
    normalize: bool = False
    sample_count: int = 1000
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    witness_cap: int = DEFAULT_WITNESS_CAP

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")

    @property
    def candidates(self) -> int:
        D = self.type.domain_size
        return self.type.modulus ** (D - 1 if self.normalize else D)

    def to_dict(self) -> dict:
        return {
            "family": self.type.family,
            "n": self.type.n,
            "modulus": self.type.modulus,
            "mode": self.mode,
            "normalize": self.normalize,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "budget": self.budget,
            "witness_cap": self.witness_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchSpec":
        return cls(GbfType(d["family"], d["n"], d["modulus"]), d["mode"], d["normalize"],
                   d["sample_count"], d["seed"], d["budget"], d["witness_cap"])


@dataclass
class SearchResult:
    spec: SearchSpec
    witnesses: list[GbfFunction]
    witness_count: int
    candidates: int
    exhausted: bool
    float_mismatches: int = 0

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "witness_count": self.witness_count,
            "candidates": self.candidates,
            "exhausted": self.exhausted,
            "float_mismatches": self.float_mismatches,
            "witnesses": [list(w.values) for w in self.witnesses],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchResult":
        spec = SearchSpec.from_dict(d["spec"])
        return cls(spec, [GbfFunction(spec.type, tuple(v)) for v in d["witnesses"]],
                   d["witness_count"], d["candidates"], d["exhausted"], d["float_mismatches"])


class BentChecker:
    """Batch exact bent test for one type, on int64 exponent-count vectors.

    For each lam in index order the spectrum coefficients of the surviving
    candidates are histogrammed, |F|^2 - D is formed by cyclic autocorrelation
    and mapped through the reduction matrix modulo Phi_m; a nonzero image
    eliminates the candidate. Falls back to the scalar exact test when int64
    could overflow.
    """

    def __init__(self, t: GbfType):
        self.type = t
        D, m = t.domain_size, t.modulus
        X = domain_points(t)
        dots = X @ X.T
        if t.family == QQ:
            self.shift = (-dots) % m       # exponent offset per (lam, x)
            self.sign = None
        else:
            self.shift = None
            self.sign = 1 - 2 * (dots % 2)  # +-1 per (lam, x)
        self.R = np.array(reduction_matrix(m), dtype=np.int64)
        bound = m * D * D * int(np.abs(self.R).max())
        self.exact_int64 = bound < 2**62
        # float verifier: F = Z @ W with Z[x] = exp(2 pi i f(x)/m)
        if t.family == QQ:
            self.W = np.exp(-2j * np.pi * dots.T / m)
        else:
            self.W = self.sign.T.astype(np.complex128)

    def _counts(self, vals: np.ndarray, lam: int) -> np.ndarray:
        B = vals.shape[0]
        m = self.type.modulus
        offs = (np.arange(B) * m)[:, None]
        if self.shift is not None:
            e = (vals + self.shift[lam][None, :]) % m
            return np.bincount((offs + e).ravel(), minlength=B * m).reshape(B, m)
        w = np.broadcast_to(self.sign[lam][None, :], vals.shape)
        plus = np.bincount((offs + vals)[w > 0], minlength=B * m)
        minus = np.bincount((offs + vals)[w < 0], minlength=B * m)
        return (plus - minus).reshape(B, m)

    def exact(self, vals: np.ndarray) -> np.ndarray:
        """Boolean verdict per row of ``vals`` (shape (B, D))."""
        B = vals.shape[0]
        t = self.type
        if not self.exact_int64:
            return np.array([is_gbf(GbfFunction(t, tuple(r))) for r in vals.tolist()], dtype=bool)
        alive = np.ones(B, dtype=bool)
        m = t.modulus
        for lam in range(t.domain_size):
            idx = np.flatnonzero(alive)
            if idx.size == 0:
                break
            A = self._counts(vals[idx], lam)
            # (F * conj F)[k] = sum_i A[i] * A[i - k]
            C = np.empty_like(A)
            for k in range(m):
                C[:, k] = (A * np.roll(A, k, axis=1)).sum(axis=1)
            C[:, 0] -= t.target
            bad = (C @ self.R).any(axis=1)
            alive[idx[bad]] = False
        return alive

    def approx(self, vals: np.ndarray, tol: float = FLOAT_TOL) -> np.ndarray:
        Z = np.exp(2j * np.pi * vals / self.type.modulus)
        F = Z @ self.W
        return (np.abs(np.abs(F) ** 2 - self.type.target) < tol).all(axis=1)


def _decode_block(start: int, stop: int, M: int, D: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    powers = M ** np.arange(D - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % M


def _scan_tables(checker: BentChecker, tables, cap: int, cross_check: bool):
    count = 0
    mismatches = 0
    found: list[tuple[int, ...]] = []
    for vals in tables:
        ok = checker.exact(vals)
        if cross_check:
            mismatches += int((ok != checker.approx(vals)).sum())
        hits = np.flatnonzero(ok)
        count += hits.size
        if len(found) < cap:
            found += [tuple(r) for r in vals[hits[: cap - len(found)]].tolist()]
    return count, found, mismatches


def run_range(spec: SearchSpec, start: int, stop: int, cross_check: bool = True):
    """Scan candidate indices [start, stop); returns (count, witness tables, float mismatches)."""
    t = spec.type
    checker = BentChecker(t)
    D = t.domain_size

    def blocks():
        for lo in range(start, stop, BLOCK):
            yield _decode_block(lo, min(lo + BLOCK, stop), t.modulus, D)

    return _scan_tables(checker, blocks(), spec.witness_cap, cross_check)


def partition_workload(spec: SearchSpec, shards: int) -> list[range]:
    """Contiguous near-equal index ranges; the first ``total % shards`` get one extra."""
    if shards < 1:
        raise ValueError("shards must be >= 1")
    if spec.mode != "exhaustive":
        raise ValueError("only exhaustive searches are partitioned")
    total = spec.candidates
    size, extra = divmod(total, shards)
    out, lo = [], 0
    for i in range(shards):
        hi = lo + size + (1 if i < extra else 0)
        out.append(range(lo, hi))
        lo = hi
    return out


def _run_shard(args):
    spec, r, cross_check = args
    return run_range(spec, r.start, r.stop, cross_check)


def _finish(spec, parts, candidates, exhausted) -> SearchResult:
    count = 0
    mismatches = 0
    tables: list[tuple[int, ...]] = []
    for c, found, mm in parts:
        count += c
        mismatches += mm
        tables += found[: spec.witness_cap - len(tables)]
    witnesses = [GbfFunction(spec.type, tb) for tb in tables]
    # re-verify every emitted witness on the scalar exact path
    for w in witnesses:
        if not is_gbf(w):  # pragma: no cover
            raise AssertionError(f"batch checker accepted a non-bent table {w.values}")
    return SearchResult(spec, witnesses, count, candidates, exhausted, mismatches)


def enumerate_search(spec: SearchSpec, shards: int = 1, jobs: int = 1,
                     cross_check: bool = True) -> SearchResult:
    """Exhaustive scan; the result does not depend on ``shards`` or ``jobs``."""
    if spec.mode != "exhaustive":
        raise ValueError("enumerate_search needs mode='exhaustive'")
    if spec.candidates > min(spec.budget, 2**62):
        raise BudgetExceeded(spec.candidates, min(spec.budget, 2**62))
    ranges = partition_workload(spec, shards)
    work = [(spec, r, cross_check) for r in ranges]
    if jobs > 1 and shards > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_shard, work))
    else:
        parts = [_run_shard(w) for w in work]
    return _finish(spec, parts, spec.candidates, True)


def sample_tables(spec: SearchSpec) -> np.ndarray:
    """The (sample_count, D) tables drawn for a random search; fixed by the seed."""
    rng = np.random.default_rng(spec.seed)
    vals = rng.integers(0, spec.type.modulus, size=(spec.sample_count, spec.type.domain_size))
    if spec.normalize:
        vals[:, 0] = 0
    return vals


def random_search(spec: SearchSpec, cross_check: bool = True) -> SearchResult:
    """Seeded sampling with replacement; witness_count counts hits among samples."""
    if spec.mode != "random":
        raise ValueError("random_search needs mode='random'")
    vals = sample_tables(spec)
    checker = BentChecker(spec.type)
    blocks = (vals[i:i + BLOCK] for i in range(0, len(vals), BLOCK))
    part = _scan_tables(checker, blocks, spec.witness_cap, cross_check)
    return _finish(spec, [part], spec.sample_count, False)


def run(spec: SearchSpec, shards: int = 1, jobs: int = 1) -> SearchResult:
    if spec.mode == "exhaustive":
        return enumerate_search(spec, shards, jobs)
    return random_search(spec)

