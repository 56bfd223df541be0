"""Mean squares of exponential sums and the window integrals that bound them.

Continuous integrals over t or x are evaluated exactly as Hermitian bilinear
forms in the coefficients whenever the integrand allows it; the Dirichlet
y-integrals are split at the points where the set of contributing n changes.
The discrete Selberg sums run over integer x in (N, 2N] in exact integer
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Literal

import numpy as np

from ._numerics import EPS, adaptive_gauss_legendre, csum, gl_panels
from .arith import ArithmeticSequence
from .kernels import Kernel, Shape, WindowParams, autocorrelation, sinc
from .sums import DirichletPolynomial, ExponentialSum, eval_expsum_many

Method = Literal["exact-bilinear", "exact-piecewise", "panel-quadrature"]


@dataclass(frozen=True)
class IntegralResult:
    value: float
    method: Method
    est_abs_error: float
    imag_residual: float = 0.0

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"integral of a squared modulus came out as {self.value}")

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class SelbergWindow:
    """Integer x in (N, 2N] and a short-interval length h < N."""

    N: int
    h: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if not 0 < self.h < self.N:
            raise ValueError(f"need 0 < h < N, got h={self.h}, N={self.N}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def required_range(self) -> tuple[int, int]:
        return max(1, self.N - math.ceil(self.h)), 2 * self.N + math.ceil(self.h)


# -- bilinear forms ----------------------------------------------------------

def _hermitian_form(c: np.ndarray, weights: np.ndarray) -> tuple[float, float, float]:
    """sum_{i,j} c_i conj(c_j) W_ij for a real symmetric W.

    Returns (real part, imaginary part, rounding-error estimate).
    """
    if c.size == 0:
        return 0.0, 0.0, 0.0
    outer = c[:, None] * np.conj(c)[None, :]
    terms = outer * weights
    re = math.fsum(terms.real.ravel())
    im = math.fsum(terms.imag.ravel())
    err = 4 * EPS * math.fsum(np.abs(terms).ravel())
    return re, im, err


def _bilinear_result(c, weights) -> IntegralResult:
    re, im, err = _hermitian_form(c, weights)
    # tiny negative values are rounding noise around an exact zero
    return IntegralResult(max(re, 0.0), "exact-bilinear", err, im)


def meansquare_exact(s: ExponentialSum, T: float) -> IntegralResult:
    """int_{-T}^{T} |S(t)|^2 dt as sum c_i conj(c_j) sin(2 pi u T)/(pi u), u = nu_i - nu_j."""
    if not T > 0:
        raise ValueError("T must be positive")
    u = s.frequencies[:, None] - s.frequencies[None, :]
    return _bilinear_result(s.coefficients, 2.0 * T * sinc(2.0 * T * u))


def meansquare_quad(s: ExponentialSum, T: float, tol: float = 1e-10,
                    max_panels: int = 1 << 22) -> IntegralResult:
    """Adaptive Gauss-Legendre evaluation of int_{-T}^{T} |S(t)|^2 dt.

    Raises:
        QuadratureError: panel budget exhausted (carries the partial estimate).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if len(s) == 0:
        return IntegralResult(0.0, "panel-quadrature", 0.0)

    def f(t):
        return np.abs(eval_expsum_many(s, t)) ** 2

    n_init = int(math.ceil(2.0 * T * s.spread)) + 8
    # pointwise error of |S|^2: each phase 2 pi nu t is rounded at its own magnitude
    phase = 2.0 * math.pi * T * float(np.max(np.abs(s.frequencies)))
    noise = s.l1 ** 2 * (len(s) + phase)
    value, err = adaptive_gauss_legendre(f, -T, T, tol, n_init=n_init, max_panels=max_panels,
                                         noise=noise)
    return IntegralResult(max(value, 0.0), "panel-quadrature", err)


def rhs_window(s: ExponentialSum, w: WindowParams, shape: Shape) -> IntegralResult:
    """delta^-2 int_R |windowed coefficient sum at x|^2 dx.

    For ``cesaro`` the window is the Cesaro-weighted sum over |nu - x| <= delta,
    for ``rectangular`` the plain sum over x < nu <= x + delta. Either way the
    value is int |sum c(nu) k(x - nu)|^2 dx for the unit-mass kernel k, which
    expands into the autocorrelation of k at the frequency differences. The
    rectangle is centered rather than one-sided; integrating over all x makes
    the shift irrelevant.
    """
    k = Kernel(shape, w.delta)
    u = s.frequencies[:, None] - s.frequencies[None, :]
    return _bilinear_result(s.coefficients, autocorrelation(k, u))


# -- discrete Selberg integrals ----------------------------------------------

def _as_scaled_ints(values: np.ndarray) -> tuple[list[int], int]:
    """Exact integers I and a power of two D with values == I / D."""
    ratios = [float(v).as_integer_ratio() for v in values]
    D = max(den for _, den in ratios)
    return [num * (D // den) for num, den in ratios], D


def _prefix(ints: list[int]) -> list[int]:
    return [0] + list(accumulate(ints))


def _check_coverage(seq: ArithmeticSequence, win: SelbergWindow):
    lo, hi = win.required_range
    seq.require(lo, hi)


def _parts(vals: np.ndarray) -> list[np.ndarray]:
    if np.iscomplexobj(vals):
        return [vals.real, vals.imag]
    return [vals]


def _selberg_real(vals: np.ndarray, base: int, N: int, m: int) -> list[float]:
    # vals[i] is c(base + i); returns the inner sums for x = N+1 .. 2N
    ints, D = _as_scaled_ints(vals)
    P = _prefix(ints)  # P[i] = sum of the first i values

    def pre(n):  # sum of c(k) for base <= k <= n
        return P[n - base + 1]

    return [(pre(x + m) - pre(x)) / D for x in range(N + 1, 2 * N + 1)]


def selberg_integral(seq: ArithmeticSequence, win: SelbergWindow) -> float:
    """J_c(N, h) = sum_{N < x <= 2N} |sum_{x < n <= x + h} c(n)|^2.

    The inner sums come from exact integer prefix sums, so each is correctly
    rounded; the outer sum uses ``fsum``.
    """
    _check_coverage(seq, win)
    N, m = win.N, math.floor(win.h)
    lo, hi = N + 1, 2 * N + m
    squares = []
    for part in _parts(seq.window(lo, hi)):
        inner = np.array(_selberg_real(part, lo, N, m))
        squares.append(inner * inner)
    return math.fsum(np.concatenate(squares))


def _modified_real(vals: np.ndarray, base: int, N: int, m: int, h: float) -> list[float]:
    ints, D = _as_scaled_ints(vals)
    P = _prefix(ints)
    Q = _prefix([(base + i) * v for i, v in enumerate(ints)])
    hn, hd = Fraction(h).as_integer_ratio()

    def p(n):
        return P[n - base + 1]

    def q(n):
        return Q[n - base + 1]

    out = []
    for x in range(N + 1, 2 * N + 1):
        s0 = p(x + m) - p(x - m - 1)
        # sum_{j=1}^{m} j (c(x+j) + c(x-j))
        right = (q(x + m) - q(x)) - x * (p(x + m) - p(x))
        left = x * (p(x - 1) - p(x - m - 1)) - (q(x - 1) - q(x - m - 1))
        s1 = right + left
        # W = s0 - s1/h, with h = hn/hd
        out.append((hn * s0 - hd * s1) / (hn * D))
    return out


def selberg_modified(seq: ArithmeticSequence, win: SelbergWindow) -> float:
    """Cesaro-weighted J~_c(N, h) = sum_x |sum_{|n-x|<=h} (1 - |n-x|/h) c(n)|^2.

    Weighted inner sums are expressed through prefix sums of c(n) and n c(n)
    and evaluated in exact rational arithmetic, O(N) in total.
    """
    _check_coverage(seq, win)
    N, m = win.N, math.floor(win.h)
    lo, hi = N + 1 - m, 2 * N + m
    squares = []
    for part in _parts(seq.window(lo, hi)):
        inner = np.array(_modified_real(part, lo, N, m, float(win.h)))
        squares.append(inner * inner)
    return math.fsum(np.concatenate(squares))


# -- Dirichlet-polynomial y-integrals ------------------------------------------

def _piecewise_log_integral(lo: np.ndarray, hi: np.ndarray, v: np.ndarray,
                            u_min: float, u_max: float) -> float:
    """int_{u_min}^{u_max} |sum_{lo_k <= u < hi_k} v_k|^2 du.

    ``lo`` and ``hi`` must both be nondecreasing in k, so the active set at
    any u is a contiguous index range.
    """
    pts = np.concatenate([lo, hi])
    pts = pts[(pts > u_min) & (pts < u_max)]
    edges = np.unique(np.concatenate([[u_min], pts, [u_max]]))
    pieces = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        i0 = np.searchsorted(hi, mid, side="right")
        i1 = np.searchsorted(lo, mid, side="right")
        if i1 <= i0:
            continue
        total = csum(v[i0:i1])
        pieces.append(abs(total) ** 2 * (b - a))
    return math.fsum(pieces)


def rhs_gallagher_series(d: DirichletPolynomial, T: float) -> IntegralResult:
    """T^2 int_0^inf |sum_{y < n <= y e^{1/T}} a_n|^2 dy/y.

    In u = log y, n contributes exactly for log n - 1/T <= u < log n, so the
    integrand is a step function of u.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    n, a = d.support()
    if n.size == 0:
        return IntegralResult(0.0, "exact-piecewise", 0.0)
    logn = np.log(n.astype(np.float64))
    lo = logn - 1.0 / T
    val = _piecewise_log_integral(lo, logn, a, float(lo[0]), float(logn[-1]))
    value = T * T * val
    return IntegralResult(value, "exact-piecewise", 8 * EPS * value)


def tail_ratio(T: float, kappa: float) -> float:
    """Delta(y, T) / y for the concrete choice Delta = y/T + kappa y/T^2."""
    return 1.0 / T + kappa / (T * T)


def rhs_theorem_tail(d: DirichletPolynomial, T: float, kappa: float = 1.0,
                     y_range: tuple[float, float] = (1.0, math.inf)) -> IntegralResult:
    """int (sum_{|n - y| <= Delta} |a_n|)^2 dy/y over y_range, Delta = y (1/T + kappa/T^2)."""
    if not T > 1:
        raise ValueError("T must exceed 1")
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    r = tail_ratio(T, kappa)
    if r >= 1:
        raise ValueError(f"window ratio 1/T + kappa/T^2 = {r} must be < 1")
    n, a = d.support()
    if n.size == 0:
        return IntegralResult(0.0, "exact-piecewise", 0.0)
    logn = np.log(n.astype(np.float64))
    # |n - y| <= r y  <=>  n/(1+r) <= y <= n/(1-r)
    lo = logn - math.log1p(r)
    hi = logn - math.log1p(-r)
    u_min = max(math.log(y_range[0]), float(lo[0]))
    u_max = min(math.log(y_range[1]) if math.isfinite(y_range[1]) else math.inf, float(hi[-1]))
    if u_max <= u_min:
        return IntegralResult(0.0, "exact-piecewise", 0.0)
    value = _piecewise_log_integral(lo, hi, np.abs(a), u_min, u_max)
    return IntegralResult(value, "exact-piecewise", 8 * EPS * value)


def rhs_theorem_main(d: DirichletPolynomial, T: float,
                     y_range: tuple[float, float] = (1.0, math.inf)) -> IntegralResult:
    """T^2 int |sum_{|n-y| <= y/T} (1 - |n-y|/(y/T)) a_n|^2 dy/y over y_range.

    Panels are cut at n/(1+1/T), n and n/(1-1/T) for every nonzero a_n; the
    integrand is smooth inside each. Every panel gets the 16-point rule whole
    and bisected; the bisected value is kept and the difference is the error
    estimate.
    """
    if not T > 1:
        raise ValueError("T must exceed 1")
    n, a = d.support()
    if n.size == 0:
        return IntegralResult(0.0, "panel-quadrature", 0.0)
    nf = n.astype(np.float64)
    inv = 1.0 / T
    pts = np.unique(np.concatenate([nf / (1.0 + inv), nf, nf / (1.0 - inv)]))
    y_lo = max(y_range[0], float(pts[0]))
    y_hi = min(y_range[1], float(pts[-1]))
    if y_hi <= y_lo:
        return IntegralResult(0.0, "panel-quadrature", 0.0)
    inner = pts[(pts > y_lo) & (pts < y_hi)]
    edges = np.concatenate([[y_lo], inner, [y_hi]])

    values, errors = [], []
    for left, right in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (left + right)
        i0 = np.searchsorted(nf, mid * (1.0 - inv), side="left")
        i1 = np.searchsorted(nf, mid * (1.0 + inv), side="right")
        if i1 <= i0:
            continue
        na, aa = nf[i0:i1], a[i0:i1]

        def f(y, na=na, aa=aa):
            yy = y.reshape(-1, 1)
            w = np.maximum(1.0 - T * np.abs(na[None, :] - yy) / yy, 0.0)
            s = (w * aa[None, :]).sum(axis=1)
            return (np.abs(s) ** 2 / yy[:, 0]).reshape(y.shape)

        lo_, hi_ = np.array([left]), np.array([right])
        m_ = 0.5 * (lo_ + hi_)
        whole = gl_panels(f, lo_, hi_)[0]
        halves = gl_panels(f, np.array([left, m_[0]]), np.array([m_[0], right]))
        refined = math.fsum(halves)
        values.append(refined)
        errors.append(abs(whole - refined))
    T2 = T * T
    value = T2 * math.fsum(values)
    return IntegralResult(max(value, 0.0), "panel-quadrature", T2 * math.fsum(errors))
