"""Checks of each mean-value inequality on concrete instances.

Inequalities with a proof-derived constant (the Gallagher bound with either
kernel, its Dirichlet-series form, and the Plancherel identity) are asserted
against that constant. The asymptotic bounds (Dirichlet polynomial theorem,
critical-line corollary, modified-vs-plain Selberg) only record the ratio
and compare it with a generous cap.
"""

from __future__ import annotations

import io
import math
import zlib
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Literal, Sequence

import numpy as np

from ._io import dumps_json, format_float
from ._numerics import adaptive_gauss_legendre
from .arith import ArithmeticSequence, sup_norm
from .kernels import Kernel, WindowParams, explicit_constant, transform
from .meansquare import (
    SelbergWindow,
    meansquare_exact,
    rhs_gallagher_series,
    rhs_theorem_main,
    rhs_theorem_tail,
    rhs_window,
    selberg_integral,
    selberg_modified,
)
from .sums import (
    DirichletPolynomial,
    ExponentialSum,
    critical_line_poly,
    eval_expsum_many,
    from_dirichlet,
    random_dirichlet,
    random_expsum,
)

Inequality = Literal[
    "star", "star-tilde", "star-star", "star-star-tilde", "corollary", "cl-selberg", "plancherel"
]

# relative slack on theorem-backed assertions
SLACK = 1e-10
THEOREM_CAP = 100.0
SELBERG_CAP = 10.0
PLANCHEREL_RTOL = 1e-6
# theta giving the Dirichlet-series form, where nu = log(n) / (2 pi)
SERIES_THETA = 1.0 / (2.0 * math.pi)


@dataclass
class VerificationReport:
    inequality: Inequality
    lhs: float
    rhs_terms: list[tuple[str, float]]
    constant: float | None
    passed: bool
    seed: int | None = None
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def rhs(self) -> float:
        return math.fsum(v for _, v in self.rhs_terms)

    @property
    def ratio(self) -> float:
        return _ratio(self.lhs, self.rhs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "inequality": self.inequality,
            "lhs": self.lhs,
            "rhs_terms": [{"label": k, "value": v} for k, v in self.rhs_terms],
            "ratio": self.ratio,
            "constant": self.constant,
            "pass": self.passed,
            "seed": self.seed,
            "params": self.params,
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict())


def _ratio(lhs: float, rhs: float) -> float:
    if lhs == 0:
        return 0.0
    return lhs / rhs if rhs > 0 else math.inf


def _bounded(lhs: float, rhs: float, constant: float) -> bool:
    return lhs <= constant * rhs * (1.0 + SLACK)


# -- theorem-backed checks -----------------------------------------------------

def _window_check(inequality, shape, s, w, seed, params):
    lhs = meansquare_exact(s, w.T).value
    rhs = rhs_window(s, w, shape).value
    C = explicit_constant(w.theta, shape)
    p = {"T": w.T, "theta": w.theta, "delta": w.delta, "n_terms": len(s)}
    p.update(params or {})
    return VerificationReport(inequality, lhs, [("window", rhs)], C, _bounded(lhs, rhs, C), seed, p)


def check_lemma(s: ExponentialSum, w: WindowParams, seed=None, params=None) -> VerificationReport:
    """Cesaro-window bound, asserted with constant (pi theta / sin pi theta)**4."""
    return _window_check("star-tilde", "cesaro", s, w, seed, params)


def check_gallagher_original(s: ExponentialSum, w: WindowParams, seed=None,
                             params=None) -> VerificationReport:
    """Sharp-window bound, asserted with constant (pi theta / sin pi theta)**2."""
    return _window_check("star", "rectangular", s, w, seed, params)


def series_constant() -> float:
    # x = theta log y with theta = 1/(2 pi) turns dx into theta dy/y, so the
    # window constant picks up a factor 1/theta
    return explicit_constant(SERIES_THETA, "rectangular") / SERIES_THETA


def check_gallagher_series(d: DirichletPolynomial, T: float, seed=None, params=None) -> VerificationReport:
    """Dirichlet-series form of the sharp-window bound, with its explicit constant."""
    lhs = meansquare_exact(from_dirichlet(d), T).value
    rhs = rhs_gallagher_series(d, T).value
    C = series_constant()
    p = {"T": T, "n_min": d.n_min, "n_max": d.n_max}
    p.update(params or {})
    return VerificationReport("star-star", lhs, [("series", rhs)], C, _bounded(lhs, rhs, C), seed, p)


def check_plancherel(s: ExponentialSum, w: WindowParams, seed=None, params=None,
                     rtol: float = PLANCHEREL_RTOL) -> VerificationReport:
    """Compare int |C~(x)|^2 dx with int transform(y)^2 |S(-y)|^2 dy.

    The left side is the autocorrelation bilinear form. The right side is
    adaptive quadrature on [-Y, Y], where Y is the point beyond which
    transform**2 * (sum |c|)**2 < 1e-14 * lhs; sinc**4 <= (pi delta y)**-4
    gives Y explicitly.
    """
    k = Kernel("cesaro", w.delta)
    lhs = rhs_window(s, w, "cesaro").value
    p = {"T": w.T, "theta": w.theta, "delta": w.delta, "n_terms": len(s)}
    p.update(params or {})
    if lhs == 0:
        return VerificationReport("plancherel", 0.0, [("fourier", 0.0)], 1.0, True, seed, p)
    l1 = s.l1
    Y = (l1 * l1 / (1e-14 * lhs)) ** 0.25 / (math.pi * w.delta)

    def f(y):
        return transform(k, y) ** 2 * np.abs(eval_expsum_many(s, -y)) ** 2

    band = s.spread + 2.0 * w.delta
    n_init = int(math.ceil(2.0 * Y * band)) + 16
    rhs, err = adaptive_gauss_legendre(f, -Y, Y, 1e-3 * rtol * lhs, n_init=n_init)
    p["cutoff"] = Y
    p["quad_err"] = err
    passed = abs(lhs - rhs) <= rtol * max(lhs, rhs)
    return VerificationReport("plancherel", lhs, [("fourier", rhs)], 1.0, passed, seed, p)


# -- asymptotic bounds: ratio recorded, cap asserted -----------------------------

def check_theorem(d: DirichletPolynomial, T: float, kappa: float = 1.0,
                  cap: float = THEOREM_CAP, seed=None, params=None) -> VerificationReport:
    if not T > 1:
        raise ValueError("T must exceed 1")
    lhs = meansquare_exact(from_dirichlet(d), T).value
    main = rhs_theorem_main(d, T).value
    tail = rhs_theorem_tail(d, T, kappa).value
    rep = VerificationReport("star-star-tilde", lhs, [("main", main), ("tail", tail)], cap,
                             False, seed, {"T": T, "kappa": kappa, "n_min": d.n_min,
                                           "n_max": d.n_max, **(params or {})})
    rep.passed = rep.ratio <= cap
    return rep


def corollary_tail(N2: int, T: float, epsilon: float) -> float:
    return N2 ** (1.0 + epsilon) / (T * T)


def check_corollary(w_seq: ArithmeticSequence, b_seq: ArithmeticSequence, N1: int, N2: int,
                    T: float, epsilon: float, cap: float = THEOREM_CAP,
                    seed=None) -> VerificationReport:
    """Critical-line polynomial P(t) = sum w(n) b(n) n^{-1/2 - it}.

    P(t) = D(-t) for the polynomial with a_n = w(n) b(n) n^{-1/2}; the mean
    square over the symmetric interval is taken on the conjugate, whose
    modulus at t equals |D(-t)|.
    """
    if not T > 1 or not epsilon > 0:
        raise ValueError("need T > 1 and epsilon > 0")
    d = critical_line_poly(w_seq, b_seq, N1, N2)
    lhs = meansquare_exact(from_dirichlet(d.conjugate()), T).value
    main = rhs_theorem_main(d, T, y_range=(N1 / 2.0, 1.5 * N2)).value
    tail = corollary_tail(N2, T, epsilon)
    rep = VerificationReport(
        "corollary", lhs, [("main", main), ("tail", tail)], cap, False, seed,
        {"N1": N1, "N2": N2, "T": T, "epsilon": epsilon, "w_sup": d.w_sup,
         "w": w_seq.name, "b": b_seq.name})
    rep.passed = rep.ratio <= cap
    return rep


def check_cl_selberg(seq: ArithmeticSequence, win: SelbergWindow, cap: float = SELBERG_CAP,
                     seed=None) -> VerificationReport:
    """Modified Selberg integral against J + h^3 sup|c|^2, for real balanced c."""
    if not seq.is_real:
        raise ValueError("the modified/plain Selberg comparison needs a real sequence")
    lhs = selberg_modified(seq, win)
    J = selberg_integral(seq, win)
    sup = sup_norm(seq, win.N, win.h)
    rep = VerificationReport("cl-selberg", lhs, [("selberg", J), ("h3_sup2", win.h ** 3 * sup * sup)],
                             cap, False, seed, {"N": win.N, "h": win.h, "sequence": seq.name})
    rep.passed = rep.ratio <= cap
    return rep


# -- randomized suites and sweeps ---------------------------------------------------

def instance_rng(seed: int, *keys) -> np.random.Generator:
    """Generator keyed by a base seed, an instance index and cell labels.

    The cell labels enter through CRC32 of their text so the stream is stable
    across processes and does not depend on how many instances are run.
    """
    tag = zlib.crc32(repr(keys).encode())
    return np.random.default_rng([int(seed), tag])


CHECKS = {"star": check_gallagher_original, "star-tilde": check_lemma}


def lemma_suite(inequality: str, thetas: Sequence[float], trials: int, seed: int = 0,
                max_terms: int = 30, max_frequency: float = 10.0,
                T_range: tuple[float, float] = (0.5, 50.0), T: float | None = None,
                workers: int = 1) -> list[VerificationReport]:
    """Random exponential sums checked against the window bound.

    Each trial draws the number of terms in 1..max_terms, frequencies in
    [0, max_frequency], coefficients in the unit disc, and T uniformly in
    T_range unless T is given.
    """
    check = CHECKS[inequality]

    def one(job):
        i, theta = job
        rng = instance_rng(seed, i)
        n_terms = int(rng.integers(1, max_terms + 1))
        s = random_expsum(rng, n_terms, max_frequency)
        TT = float(rng.uniform(*T_range)) if T is None else T
        return check(s, WindowParams(TT, theta), seed=seed, params={"trial": i})

    jobs = [(i, th) for i in range(trials) for th in thetas]
    return _map(one, jobs, workers)


def plancherel_suite(trials: int, seed: int = 0, max_terms: int = 8,
                     max_frequency: float = 2.0, workers: int = 1) -> list[VerificationReport]:
    def one(i):
        rng = instance_rng(seed, "plancherel", i)
        s = random_expsum(rng, int(rng.integers(1, max_terms + 1)), max_frequency)
        w = WindowParams(float(rng.uniform(1.0, 5.0)), float(rng.choice([0.25, 0.5, 0.75])))
        return check_plancherel(s, w, seed=seed, params={"trial": i})

    return _map(one, range(trials), workers)


def theorem_suite(Ts: Sequence[float], n_max: int = 1000, instances: int = 10, seed: int = 0,
                  kappa: float = 1.0, cap: float = THEOREM_CAP,
                  workers: int = 1) -> list[VerificationReport]:
    """The fixed corpus: ``instances`` random polynomials on [1, n_max], each at every T."""
    corpus = [random_dirichlet(instance_rng(seed, "theorem", i), n_max) for i in range(instances)]

    def one(job):
        i, T = job
        return check_theorem(corpus[i], T, kappa, cap, seed=seed, params={"instance": i})

    return _map(one, [(i, T) for T in Ts for i in range(instances)], workers)


def _map(fn, jobs, workers):
    jobs = list(jobs)
    if workers <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


@dataclass
class SweepConfig:
    """Grid for :func:`estimate_constant`; every cell gets seeds 0..n_seeds-1."""

    thetas: Sequence[float] = (0.5,)
    Ts: Sequence[float] = (10.0,)
    n_terms: Sequence[int] = (10,)
    n_seeds: int = 20
    seed: int = 0
    max_frequency: float = 10.0
    kappa: float = 1.0


def estimate_constant(inequality: str, config: SweepConfig) -> list[dict[str, Any]]:
    """Largest observed ratio in each cell of the parameter grid.

    Supported inequalities: ``star`` and ``star-tilde`` over (theta, T, n_terms),
    and ``star-star-tilde`` over (T, n_terms) where n_terms is the length of
    a random Dirichlet polynomial on [1, n_terms].
    """
    rows = []
    if inequality in CHECKS:
        check = CHECKS[inequality]
        for theta, T, n in product(config.thetas, config.Ts, config.n_terms):
            ratios = []
            for i in range(config.n_seeds):
                rng = instance_rng(config.seed, inequality, theta, T, n, i)
                s = random_expsum(rng, int(n), config.max_frequency)
                ratios.append(check(s, WindowParams(T, theta)).ratio)
            if ratios:
                rows.append({"theta": theta, "T": T, "n_terms": n,
                             "max_ratio": max(ratios), "n_seeds": config.n_seeds})
    elif inequality == "star-star-tilde":
        for T, n in product(config.Ts, config.n_terms):
            ratios = []
            for i in range(config.n_seeds):
                d = random_dirichlet(instance_rng(config.seed, inequality, T, n, i), int(n))
                ratios.append(check_theorem(d, T, config.kappa).ratio)
            if ratios:
                rows.append({"T": T, "n_terms": n, "max_ratio": max(ratios),
                             "n_seeds": config.n_seeds})
    else:
        raise ValueError(f"no sweep defined for {inequality!r}")
    return rows


def table_to_csv(rows: list[dict[str, Any]]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    keys = list(rows[0])
    buf.write(",".join(keys) + "\n")
    for r in rows:
        buf.write(",".join(_cell(r[k]) for k in keys) + "\n")
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def emit_plot_data(reports: Sequence[VerificationReport], param: str = "theta") -> str:
    """Tidy CSV of (parameter, ratio, constant) with a '#' header comment."""
    if not reports:
        raise ValueError("no reports to emit")
    buf = io.StringIO()
    buf.write(f"# parameter={param}: value of that instance parameter; ratio=lhs/sum(rhs_terms); "
              "constant=explicit constant or cap\n")
    buf.write("parameter,ratio,constant\n")
    for r in reports:
        const = "" if r.constant is None else format_float(r.constant)
        buf.write(f"{format_float(r.params[param])},{format_float(r.ratio)},{const}\n")
    return buf.getvalue()
