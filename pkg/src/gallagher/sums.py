"""Exponential sums, Dirichlet polynomials and critical-line polynomials.

An exponential sum is ``S(t) = sum_nu c(nu) e(nu t)`` with ``e(x) = exp(2 pi i x)``
over finitely many real frequencies. A Dirichlet polynomial
``D(t) = sum_n a_n n^{it}`` is the special case nu = log(n) / (2 pi).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._io import dumps_json
from ._numerics import csum
from .arith import ArithmeticSequence

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class ExponentialSum:
    """Finite exponential sum with strictly increasing frequencies.

    Use :meth:`from_terms` to build one from unsorted data; coefficients of
    repeated frequencies are added together there.
    """

    frequencies: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        nu = np.array(self.frequencies, dtype=np.float64).ravel()
        c = np.array(self.coefficients, dtype=np.complex128).ravel()
        if nu.shape != c.shape:
            raise ValueError("frequencies and coefficients differ in length")
        if not (np.all(np.isfinite(nu)) and np.all(np.isfinite(c))):
            raise ValueError("non-finite frequency or coefficient")
        if nu.size > 1 and not np.all(np.diff(nu) > 0):
            raise ValueError("frequencies must be strictly increasing; use from_terms")
        nu.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "frequencies", nu)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_terms(cls, frequencies, coefficients) -> "ExponentialSum":
        nu = np.asarray(frequencies, dtype=np.float64).ravel()
        c = np.asarray(coefficients, dtype=np.complex128).ravel()
        order = np.argsort(nu, kind="stable")
        nu, c = nu[order], c[order]
        uniq, start = np.unique(nu, return_index=True)
        if uniq.size == nu.size:
            return cls(nu, c)
        bounds = list(start) + [nu.size]
        merged = [csum(c[bounds[i]:bounds[i + 1]]) for i in range(uniq.size)]
        return cls(uniq, np.array(merged, dtype=np.complex128))

    @classmethod
    def zero(cls) -> "ExponentialSum":
        return cls(np.empty(0), np.empty(0, dtype=np.complex128))

    def __len__(self):
        return self.frequencies.size

    @property
    def l1(self) -> float:
        return math.fsum(np.abs(self.coefficients))

    @property
    def spread(self) -> float:
        """Largest frequency difference."""
        return float(self.frequencies[-1] - self.frequencies[0]) if len(self) else 0.0

    def scaled(self, factor: complex) -> "ExponentialSum":
        return ExponentialSum(self.frequencies, self.coefficients * factor)

    def __call__(self, t):
        return eval_expsum(self, t)


@dataclass(frozen=True, eq=False)
class DirichletPolynomial:
    """Coefficients a_n for n = n_min .. n_min + len(coefficients) - 1."""

    n_min: int
    coefficients: np.ndarray = field(repr=False)
    w_sup: float | None = None  # sup |w| when built by critical_line_poly

    def __post_init__(self):
        a = np.array(self.coefficients, dtype=np.complex128).ravel()
        if int(self.n_min) < 1:
            raise ValueError("n_min must be >= 1")
        if a.size == 0:
            raise ValueError("need at least one coefficient")
        if not np.all(np.isfinite(a)):
            raise ValueError("non-finite coefficient")
        a.setflags(write=False)
        object.__setattr__(self, "n_min", int(self.n_min))
        object.__setattr__(self, "coefficients", a)

    @property
    def n_max(self) -> int:
        return self.n_min + self.coefficients.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """(n, a_n) restricted to nonzero coefficients."""
        nz = self.coefficients != 0
        return self.indices[nz], self.coefficients[nz]

    def conjugate(self) -> "DirichletPolynomial":
        return DirichletPolynomial(self.n_min, np.conj(self.coefficients), self.w_sup)

    def scaled(self, factor: complex) -> "DirichletPolynomial":
        return DirichletPolynomial(self.n_min, self.coefficients * factor, self.w_sup)

    @property
    def l1(self) -> float:
        return math.fsum(np.abs(self.coefficients))

    def __call__(self, t):
        return eval_dirichlet(self, t)


def _phase_sum(coeffs: np.ndarray, phases: np.ndarray) -> complex:
    if coeffs.size == 0:
        return 0j
    return csum(coeffs * np.exp(1j * phases))


def eval_expsum(s: ExponentialSum, t: float) -> complex:
    """S(t), reduced with a correctly rounded sum over ascending frequencies."""
    return _phase_sum(s.coefficients, TWO_PI * (s.frequencies * float(t)))


def eval_expsum_many(s: ExponentialSum, t, chunk: int = 4096) -> np.ndarray:
    """Vectorized S(t) for an array of t (numpy pairwise reduction)."""
    t = np.asarray(t, dtype=np.float64)
    flat = t.ravel()
    out = np.empty(flat.size, dtype=np.complex128)
    for i in range(0, flat.size, chunk):
        ph = TWO_PI * np.outer(flat[i:i + chunk], s.frequencies)
        out[i:i + chunk] = (np.exp(1j * ph) * s.coefficients).sum(axis=1)
    return out.reshape(t.shape)


def eval_dirichlet(d: DirichletPolynomial, t: float) -> complex:
    """D(t) = sum a_n exp(i t log n), ascending n, correctly rounded reduction."""
    return _phase_sum(d.coefficients, float(t) * np.log(d.indices.astype(np.float64)))


def from_dirichlet(d: DirichletPolynomial) -> ExponentialSum:
    """Exponential sum with frequencies log(n)/(2 pi) over the nonzero a_n."""
    n, a = d.support()
    return ExponentialSum(np.log(n.astype(np.float64)) / TWO_PI, a)


def critical_line_poly(w: ArithmeticSequence, b: ArithmeticSequence,
                       N1: int, N2: int) -> DirichletPolynomial:
    """Coefficients a_n = w(n) b(n) n^{-1/2} on [N1, N2].

    Raises:
        IndexError: w or b does not cover [N1, N2].
    """
    if not 1 <= N1 <= N2:
        raise ValueError(f"need 1 <= N1 <= N2, got {N1}, {N2}")
    wv = w.window(N1, N2)
    bv = b.window(N1, N2)
    n = np.arange(N1, N2 + 1, dtype=np.float64)
    a = wv * bv / np.sqrt(n)
    return DirichletPolynomial(N1, a, w_sup=float(np.max(np.abs(wv))))


def random_expsum(rng: np.random.Generator, n_terms: int, max_frequency: float) -> ExponentialSum:
    """Frequencies uniform on [0, max_frequency], coefficients uniform in the unit disc."""
    nu = rng.uniform(0.0, max_frequency, size=n_terms)
    return ExponentialSum.from_terms(nu, random_disc(rng, n_terms))


def random_disc(rng: np.random.Generator, size: int) -> np.ndarray:
    r = np.sqrt(rng.uniform(0.0, 1.0, size=size))
    phi = rng.uniform(0.0, TWO_PI, size=size)
    return r * np.exp(1j * phi)


def random_dirichlet(rng: np.random.Generator, n_max: int, n_min: int = 1) -> DirichletPolynomial:
    return DirichletPolynomial(n_min, random_disc(rng, n_max - n_min + 1))


# -- JSON coefficient sets -------------------------------------------------

def to_json(obj: ExponentialSum | DirichletPolynomial) -> str:
    """Array of {"n"|"nu", "re", "im"} records."""
    if isinstance(obj, DirichletPolynomial):
        rows = [{"n": int(n), "re": a.real, "im": a.imag}
                for n, a in zip(obj.indices, obj.coefficients)]
    else:
        rows = [{"nu": nu, "re": c.real, "im": c.imag}
                for nu, c in zip(obj.frequencies, obj.coefficients)]
    return dumps_json(rows)


def from_json(text: str) -> ExponentialSum | DirichletPolynomial:
    rows = json.loads(text)
    if not rows:
        return ExponentialSum.zero()
    if all("n" in r for r in rows):
        ns = [int(r["n"]) for r in rows]
        lo, hi = min(ns), max(ns)
        a = np.zeros(hi - lo + 1, dtype=np.complex128)
        for n, r in zip(ns, rows):
            a[n - lo] += complex(r["re"], r.get("im", 0.0))
        return DirichletPolynomial(lo, a)
    if all("nu" in r for r in rows):
        return ExponentialSum.from_terms(
            [r["nu"] for r in rows], [complex(r["re"], r.get("im", 0.0)) for r in rows])
    raise ValueError("each record needs 'n' or 'nu' (not a mixture)")
