"""Arithmetic functions used as coefficient sources.

Sequences are immutable, integer-indexed arrays of values on [n_min, n_max].
Reading outside the stored range is an error: the Selberg windows would
otherwise silently see zeros at the edges.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._io import format_float


class DegenerateFitError(ValueError):
    """The least-squares design matrix is rank deficient."""


@dataclass(frozen=True, eq=False)
class ArithmeticSequence:
    """Values of an arithmetic function on the integers n_min..n_max.

    Attributes:
        name: Label carried into reports and CSV exports.
        n_min: First index (>= 1).
        values: One value per integer, ``values[i]`` belongs to ``n_min + i``.
    """

    name: str
    n_min: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, copy=True)
        if not np.iscomplexobj(vals):
            vals = vals.astype(np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("values must be a non-empty 1-d array")
        if int(self.n_min) < 1:
            raise ValueError(f"n_min must be >= 1, got {self.n_min}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "n_min", int(self.n_min))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, name, f, n_min, n_max):
        ns = np.arange(n_min, n_max + 1)
        return cls(name, n_min, np.array([f(int(n)) for n in ns]))

    @property
    def n_max(self) -> int:
        return self.n_min + self.values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @cached_property
    def sup(self) -> float:
        """max |value| over the whole stored range."""
        return float(np.max(np.abs(self.values)))

    def covers(self, lo: int, hi: int) -> bool:
        return self.n_min <= lo and hi <= self.n_max

    def require(self, lo: int, hi: int) -> None:
        if not self.covers(lo, hi):
            raise IndexError(
                f"{self.name}: range [{lo}, {hi}] not covered by stored "
                f"[{self.n_min}, {self.n_max}]"
            )

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Values for n = lo..hi inclusive (read-only view)."""
        self.require(lo, hi)
        return self.values[lo - self.n_min: hi - self.n_min + 1]

    def __getitem__(self, n: int):
        self.require(n, n)
        return self.values[n - self.n_min]

    def __len__(self):
        return self.values.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,value\n")
        for n, v in zip(self.indices, self.values):
            if np.iscomplexobj(self.values):
                raise TypeError("CSV export supports real sequences only")
            buf.write(f"{n},{format_float(v)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, name: str = "csv") -> "ArithmeticSequence":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if lines[0].strip() != "n,value":
            raise ValueError("expected header 'n,value'")
        ns, vals = [], []
        for ln in lines[1:]:
            a, b = ln.split(",")
            ns.append(int(a))
            vals.append(float(b))
        if ns != list(range(ns[0], ns[0] + len(ns))):
            raise ValueError("indices must be consecutive")
        return cls(name, ns[0], np.array(vals))


def constant(value: float, n_min: int, n_max: int, name: str | None = None):
    return ArithmeticSequence(name or f"const({value})", n_min,
                              np.full(n_max - n_min + 1, value, dtype=np.float64))


def indicator(points: dict[int, float], n_min: int, n_max: int, name="spikes"):
    """Sequence that is zero except at the given points."""
    vals = np.zeros(n_max - n_min + 1)
    for n, v in points.items():
        if not n_min <= n <= n_max:
            raise IndexError(f"spike at {n} outside [{n_min}, {n_max}]")
        vals[n - n_min] = v
    return ArithmeticSequence(name, n_min, vals)


def _check_limit(limit):
    if int(limit) != limit or limit < 1:
        raise ValueError(f"limit must be a positive integer, got {limit}")


def sieve_dk(k: int, limit: int) -> ArithmeticSequence:
    """k-fold divisor function d_k(n) for 1 <= n <= limit.

    Built from d_1 = 1 by k - 1 passes of ``d_{j+1}(n) = sum_{m | n} d_j(m)``,
    each pass O(limit log limit). Counting is exact in integers; if the
    crude bound d_k(n) <= k**log2(n) could exceed 62 bits the passes run on
    Python integers instead of int64.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    _check_limit(limit)
    k, limit = int(k), int(limit)
    wide = math.log2(k) * math.log2(max(limit, 2)) >= 62
    dtype = object if wide else np.int64
    cur = np.ones(limit, dtype=dtype)
    for _ in range(k - 1):
        nxt = np.zeros(limit, dtype=dtype)
        for m in range(1, limit + 1):
            nxt[m - 1::m] += cur[m - 1]
        cur = nxt
    return ArithmeticSequence(f"d_{k}", 1, cur.astype(np.float64))


def moebius(limit: int) -> ArithmeticSequence:
    """Moebius function on 1..limit via an Eratosthenes-style sieve."""
    _check_limit(limit)
    limit = int(limit)
    mu = np.ones(limit + 1, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if not is_prime[p]:
            continue
        is_prime[p * p::p] = False
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return ArithmeticSequence("mu", 1, mu[1:].astype(np.float64))


def balance(seq: ArithmeticSequence, degree: int) -> ArithmeticSequence:
    """Remove the least-squares polynomial in log n of the given degree.

    The residual is orthogonal to every (log n)**j, j <= degree, so in
    particular its total sum vanishes.

    Raises:
        DegenerateFitError: too few points or rank-deficient design matrix.
    """
    degree = int(degree)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if len(seq) < degree + 2:
        raise DegenerateFitError(
            f"need at least {degree + 2} points for degree {degree}, got {len(seq)}")
    logn = np.log(seq.indices.astype(np.float64))
    # a centered, scaled variable spans the same polynomial space and keeps
    # the design matrix well conditioned
    span = np.ptp(logn)
    u = (logn - logn.mean()) / (span if span > 0 else 1.0)
    X = np.vander(u, degree + 1, increasing=True)
    if np.linalg.matrix_rank(X) < degree + 1:
        raise DegenerateFitError(f"rank-deficient fit of degree {degree} on {len(seq)} points")
    y = seq.values
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    # one step of iterative refinement
    corr, *_ = np.linalg.lstsq(X, resid, rcond=None)
    resid = resid - X @ corr
    return ArithmeticSequence(f"balanced({seq.name},{degree})", seq.n_min, resid)


def sup_norm(seq: ArithmeticSequence, N: int, delta: float) -> float:
    """max |c(n)| over integers N - delta < n <= 2N + delta."""
    if N < 1 or delta <= 0:
        raise ValueError("need N >= 1 and delta > 0")
    seq.require(N - math.floor(delta), 2 * N + math.ceil(delta))
    lo = math.floor(N - delta) + 1
    hi = math.floor(2 * N + delta)
    return float(np.max(np.abs(seq.window(lo, hi))))
