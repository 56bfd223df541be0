import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from gallagher.arith import ArithmeticSequence, balance, constant, indicator, moebius, sieve_dk
from gallagher.kernels import WindowParams
from gallagher.meansquare import (
    IntegralResult,
    SelbergWindow,
    meansquare_exact,
    meansquare_quad,
    rhs_gallagher_series,
    rhs_theorem_main,
    rhs_theorem_tail,
    rhs_window,
    selberg_integral,
    selberg_modified,
)
from gallagher.sums import DirichletPolynomial, ExponentialSum, random_dirichlet, random_expsum


# -- oracles ------------------------------------------------------------------

def brute_selberg(seq, N, h):
    total = 0.0
    for x in range(N + 1, 2 * N + 1):
        s = 0.0
        for n in range(x + 1, x + math.floor(h) + 1):
            s += seq[n]
        total += abs(s) ** 2
    return total


def brute_modified(seq, N, h):
    total = 0.0
    m = math.floor(h)
    for x in range(N + 1, 2 * N + 1):
        s = 0.0
        for n in range(x - m, x + m + 1):
            s += (1 - abs(n - x) / h) * seq[n]
        total += abs(s) ** 2
    return total


def window_oracle(s, w, shape):
    """delta^-2 int |windowed sum|^2 dx straight from the definition."""
    d = w.delta
    nu, c = s.frequencies, s.coefficients

    def inner(x):
        if shape == "cesaro":
            wts = np.maximum(1 - np.abs(nu - x) / d, 0.0)
        else:
            wts = ((nu > x) & (nu <= x + d)).astype(float)
        return abs(np.sum(wts * c)) ** 2

    if shape == "cesaro":
        pts = np.unique(np.concatenate([nu - d, nu, nu + d]))
    else:
        pts = np.unique(np.concatenate([nu - d, nu]))
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += quad(inner, a, b, epsabs=1e-14, epsrel=1e-13)[0]
    return total / d ** 2


def dirichlet_y_oracle(d, weight, y_lo, y_hi, pts):
    n = d.indices.astype(float)
    a = d.coefficients

    def f(y):
        return abs(np.sum(weight(n, y) * a)) ** 2 / y

    edges = np.unique(np.clip(np.concatenate([[y_lo, y_hi], pts]), y_lo, y_hi))
    return math.fsum(quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
                     for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo)


# -- mean square over [-T, T] -------------------------------------------------------

def test_meansquare_examples():
    c = 0.3 - 1.1j
    one = ExponentialSum.from_terms([1.7], [c])
    assert meansquare_exact(one, 3.0).value == pytest.approx(6 * abs(c) ** 2, rel=1e-15)
    two = ExponentialSum.from_terms([0.0, 1.0], [1, 1])
    oracle = quad(lambda t: 2 + 2 * math.cos(2 * math.pi * t), -1, 1)[0]
    assert oracle == pytest.approx(4.0, abs=1e-13)
    assert meansquare_exact(two, 1.0).value == pytest.approx(4.0, abs=1e-13)
    assert meansquare_quad(two, 1.0, 1e-12).value == pytest.approx(4.0, abs=1e-12)
    assert meansquare_quad(one, 10.0, 1e-12).value == pytest.approx(20 * abs(c) ** 2, rel=1e-13)
    assert meansquare_quad(ExponentialSum.zero(), 5.0).value == 0.0
    assert meansquare_exact(ExponentialSum.zero(), 5.0).value == 0.0


def test_homogeneity(rng):
    s = random_expsum(rng, 15, 5.0)
    base = meansquare_exact(s, 4.0).value
    assert meansquare_exact(s.scaled(2.0), 4.0).value == pytest.approx(4 * base, rel=1e-14)


def test_exact_matches_quadrature(rng):
    for _ in range(15):
        s = random_expsum(rng, int(rng.integers(1, 30)), 5.0)
        T = float(rng.uniform(0.5, 20))
        ex = meansquare_exact(s, T)
        qd = meansquare_quad(s, T, 1e-12)
        assert abs(ex.value - qd.value) <= max(1e-12, 1e-9 * ex.value)
        assert abs(ex.imag_residual) <= 1e-12 * max(ex.value, 1.0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10 ** 6), T=st.floats(0.1, 50))
def test_monotone_in_T(seed, T):
    s = random_expsum(np.random.default_rng(seed), 20, 10.0)
    a, b = meansquare_exact(s, T).value, meansquare_exact(s, 2 * T).value
    assert b >= a * (1 - 1e-12)


def test_integral_result_rejects_negative():
    with pytest.raises(ValueError):
        IntegralResult(-1.0, "exact-bilinear", 0.0)


# -- window integrals --------------------------------------------------------------

def test_rhs_window_single_term():
    w = WindowParams(T=4.0, theta=0.3)
    s = ExponentialSum.from_terms([0.2], [1.0])
    d = w.delta
    ces_oracle = quad(lambda u: (1 - abs(u) / d) ** 2, -d, d, points=[0])[0] / d ** 2
    assert ces_oracle == pytest.approx(2 / (3 * d), rel=1e-13)
    assert rhs_window(s, w, "cesaro").value == pytest.approx(2 / (3 * d), rel=1e-15)
    assert rhs_window(s, w, "rectangular").value == pytest.approx(1 / d, rel=1e-15)


def test_rhs_window_disjoint_terms_add():
    w = WindowParams(T=2.0, theta=0.5)
    d = w.delta
    s = ExponentialSum.from_terms([0.0, 2 * d, 4.5 * d], [1.0, 2j, -1.5])
    single = 2 / (3 * d)
    assert rhs_window(s, w, "cesaro").value == pytest.approx(single * (1 + 4 + 2.25), rel=1e-14)


@pytest.mark.parametrize("shape", ["rectangular", "cesaro"])
def test_rhs_window_matches_definition(shape, rng):
    for _ in range(10):
        s = random_expsum(rng, int(rng.integers(1, 7)), 1.0)
        w = WindowParams(float(rng.uniform(0.5, 5)), float(rng.uniform(0.1, 0.9)))
        got = rhs_window(s, w, shape).value
        assert got == pytest.approx(window_oracle(s, w, shape), rel=1e-8)


# -- Selberg integrals ---------------------------------------------------------------

def test_selberg_constant_one():
    one = constant(1.0, 1, 300)
    w = SelbergWindow(100, 5)
    assert brute_selberg(one, 100, 5) == 100 * 25
    assert selberg_integral(one, w) == 100 * 25
    assert brute_modified(one, 100, 5) == pytest.approx(100 * 25, rel=1e-14)
    assert selberg_modified(one, w) == 100 * 25


def test_selberg_zero():
    zero = constant(0.0, 1, 300)
    assert selberg_integral(zero, SelbergWindow(100, 5)) == 0.0
    assert selberg_modified(zero, SelbergWindow(100, 5)) == 0.0


def test_selberg_single_spike():
    N, h, n0 = 100, 5, 150
    spike = indicator({n0: 1.0}, 1, 300)
    assert brute_selberg(spike, N, h) == h
    assert selberg_integral(spike, SelbergWindow(N, h)) == h
    closed = (2 * h * h + 1) / (3 * h)
    assert brute_modified(spike, N, h) == pytest.approx(closed, rel=1e-14)
    assert selberg_modified(spike, SelbergWindow(N, h)) == pytest.approx(closed, rel=1e-15)


@pytest.mark.parametrize("h", [1, 2.5, 7, 13.25, 20])
def test_selberg_matches_brute_force(h):
    N = 400
    bal = balance(sieve_dk(3, 1000), 2)
    mu = moebius(1000)
    rnd = ArithmeticSequence("rand", 1, np.random.default_rng(5).normal(size=1000))
    for seq in (bal, mu, rnd):
        w = SelbergWindow(N, h)
        assert selberg_integral(seq, w) == pytest.approx(brute_selberg(seq, N, h), rel=1e-12)
        assert selberg_modified(seq, w) == pytest.approx(brute_modified(seq, N, h), rel=1e-12)


def test_selberg_complex_sequence():
    rng = np.random.default_rng(9)
    z = ArithmeticSequence("z", 1, rng.normal(size=200) + 1j * rng.normal(size=200))
    w = SelbergWindow(60, 6)
    assert selberg_integral(z, w) == pytest.approx(brute_selberg(z, 60, 6), rel=1e-12)
    assert selberg_modified(z, w) == pytest.approx(brute_modified(z, 60, 6), rel=1e-12)


def test_selberg_coverage_and_window_validation():
    short = constant(1.0, 1, 205)
    with pytest.raises(IndexError):
        selberg_integral(short, SelbergWindow(100, 6))
    with pytest.raises(IndexError):
        selberg_modified(constant(1.0, 97, 400), SelbergWindow(100, 6))
    with pytest.raises(ValueError):
        SelbergWindow(10, 10)
    with pytest.raises(ValueError):
        SelbergWindow(10, 0)


# -- Dirichlet y-integrals ------------------------------------------------------------

def test_gallagher_series_single_coefficient():
    for T in (0.7, 3.0, 50.0):
        for n0, a in ((1, 2.0), (17, 1 - 1j)):
            d = DirichletPolynomial(n0, [a])
            assert rhs_gallagher_series(d, T).value == pytest.approx(T * abs(a) ** 2, rel=1e-12)
    assert rhs_gallagher_series(DirichletPolynomial(3, [0, 0]), 2.0).value == 0.0


def test_gallagher_series_matches_definition(rng):
    for T in (0.8, 2.5, 9.0):
        d = random_dirichlet(rng, 25)
        tau = math.exp(1 / T)
        n = d.indices.astype(float)

        def weight(nn, y):
            return ((nn > y) & (nn <= y * tau)).astype(float)

        oracle = T * T * dirichlet_y_oracle(d, weight, 1 / tau, 25.0, np.concatenate([n, n / tau]))
        assert rhs_gallagher_series(d, T).value == pytest.approx(oracle, rel=1e-9)


def test_theorem_main_single_coefficient():
    T, n0 = 100.0, 37
    d = DirichletPolynomial(n0, [1.0])
    # in s = n/y the integral is T^2 int (1 - T|s-1|)^2 ds/s over |s-1| <= 1/T
    oracle = T * T * quad(lambda s: (1 - T * abs(s - 1)) ** 2 / s, 1 - 1 / T, 1 + 1 / T,
                          points=[1.0], epsabs=1e-15, epsrel=1e-14)[0]
    got = rhs_theorem_main(d, T).value
    assert got == pytest.approx(oracle, rel=1e-10)
    assert got == pytest.approx(2 * T / 3, rel=0.02)


def test_theorem_main_matches_definition(rng):
    for T in (3.0, 10.0):
        d = random_dirichlet(rng, 40)
        n = d.indices.astype(float)

        def weight(nn, y):
            return np.maximum(1 - np.abs(nn - y) / (y / T), 0.0)

        pts = np.concatenate([n / (1 + 1 / T), n, n / (1 - 1 / T)])
        oracle = T * T * dirichlet_y_oracle(d, weight, 1.0, 40 / (1 - 1 / T), pts)
        res = rhs_theorem_main(d, T)
        assert res.value == pytest.approx(oracle, rel=1e-9)
        assert res.est_abs_error <= 1e-6 * res.value


def test_theorem_main_zero_and_homogeneity(rng):
    assert rhs_theorem_main(DirichletPolynomial(1, [0.0, 0.0]), 10.0).value == 0.0
    d = random_dirichlet(rng, 60)
    a = rhs_theorem_main(d, 20.0).value
    assert rhs_theorem_main(d.scaled(2.0), 20.0).value == pytest.approx(4 * a, rel=1e-13)


def test_theorem_main_restricted_range(rng):
    d = random_dirichlet(rng, 50)
    full = rhs_theorem_main(d, 10.0, y_range=(0.5, math.inf)).value
    lo = rhs_theorem_main(d, 10.0, y_range=(0.5, 20.0)).value
    hi = rhs_theorem_main(d, 10.0, y_range=(20.0, math.inf)).value
    assert lo + hi == pytest.approx(full, rel=1e-9)


def test_theorem_tail_single_coefficient():
    T, n0, a = 100.0, 5000, 0.5 - 0.5j
    d = DirichletPolynomial(n0, [a])
    r = 1 / T + 1 / T ** 2
    exact = abs(a) ** 2 * math.log((1 + r) / (1 - r))
    got = rhs_theorem_tail(d, T, 1.0).value
    assert got == pytest.approx(exact, rel=1e-12)
    assert got == pytest.approx(2 * abs(a) ** 2 * (1 / T + 1 / T ** 2), rel=0.05)
    r0 = 1 / T
    assert rhs_theorem_tail(d, T, 0.0).value == pytest.approx(
        abs(a) ** 2 * math.log((1 + r0) / (1 - r0)), rel=1e-12)
    assert rhs_theorem_tail(DirichletPolynomial(1, [0.0]), T).value == 0.0


def test_theorem_tail_matches_definition(rng):
    for T, kappa in ((4.0, 1.0), (12.0, 0.5)):
        d = random_dirichlet(rng, 30)
        n = d.indices.astype(float)
        r = 1 / T + kappa / T ** 2

        def weight(nn, y):
            return (np.abs(nn - y) <= r * y).astype(float)

        dd = DirichletPolynomial(1, np.abs(d.coefficients))
        pts = np.concatenate([n / (1 + r), n / (1 - r)])
        oracle = dirichlet_y_oracle(dd, weight, 1.0, 30 / (1 - r), pts)
        assert rhs_theorem_tail(d, T, kappa).value == pytest.approx(oracle, rel=1e-9)


def test_theorem_tail_rejects_wide_window():
    with pytest.raises(ValueError):
        rhs_theorem_tail(DirichletPolynomial(1, [1.0]), 1.2, 1.0)
