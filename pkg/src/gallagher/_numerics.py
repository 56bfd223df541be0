"""Low-level numerical helpers shared by the integral and kernel modules.

Reductions go through :func:`math.fsum`, which returns the correctly rounded
sum and is therefore independent of term order. Quadrature uses fixed
16-point Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

EPS = np.finfo(np.float64).eps

GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)

# below this |x| the sinc is evaluated by its Taylor series
SINC_SERIES_CUTOFF = 1e-4


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature runs out of panels.

    The best available estimate is kept on ``partial`` so callers can still
    report something.
    """

    def __init__(self, message: str, partial: float, est_abs_error: float):
        super().__init__(message)
        self.partial = partial
        self.est_abs_error = est_abs_error


def csum(values) -> complex | float:
    """Correctly rounded sum of real or complex values."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.ravel()), math.fsum(arr.imag.ravel()))
    return math.fsum(arr.ravel())


def sinc_arg(x):
    """sin(x)/x with the removable singularity handled by a 4-term series."""
    x = np.asarray(x, dtype=np.float64)
    small = np.abs(x) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    direct = np.sin(safe) / safe
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def gl_panels(f: Callable[[np.ndarray], np.ndarray], left, right) -> np.ndarray:
    """Apply the 16-point rule on each panel [left[i], right[i]].

    ``f`` receives a 2-d array of nodes (panels x 16) and must return values
    of the same shape.
    """
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(nodes)
    return half * (vals @ _GL_WEIGHTS)


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    n_init: int = 8,
    max_panels: int = 1 << 22,
    chunk: int = 1 << 14,
    noise: float = 0.0,
) -> tuple[float, float]:
    """Integrate a real function over [a, b] by panel bisection.

    Each panel is integrated whole and as two halves; the halves are kept
    once the discrepancy is below the panel's share of ``tol`` or at the
    rounding floor of the panel. ``noise`` bounds |f| evaluation error per
    unit length (e.g. l1^2 for |S|^2) so panels near zeros of f are not
    refined below what the integrand can resolve. Accepted panel values are reduced with
    ``fsum`` so the result does not depend on the refinement history.

    Returns:
        (value, estimated absolute error)
    """
    if b <= a:
        return 0.0, 0.0
    width = b - a
    edges = np.linspace(a, b, max(1, int(n_init)) + 1)
    active_l, active_r = edges[:-1], edges[1:]
    accepted: list[np.ndarray] = []
    errors: list[np.ndarray] = []
    total_panels = active_l.size

    while active_l.size:
        next_l, next_r = [], []
        for start in range(0, active_l.size, chunk):
            lo = active_l[start:start + chunk]
            hi = active_r[start:start + chunk]
            mid = 0.5 * (lo + hi)
            whole = gl_panels(f, lo, hi)
            first = gl_panels(f, lo, mid)
            second = gl_panels(f, mid, hi)
            halves = first + second
            err = np.abs(whole - halves)
            scale = np.maximum(np.abs(first) + np.abs(second), noise * (hi - lo))
            ok = (err <= tol * (hi - lo) / width) | (err <= 64 * EPS * scale)
            accepted.append(halves[ok])
            errors.append(err[ok])
            if not ok.all():
                bad = ~ok
                next_l.extend([lo[bad], mid[bad]])
                next_r.extend([mid[bad], hi[bad]])
        if not next_l:
            break
        active_l = np.concatenate(next_l)
        active_r = np.concatenate(next_r)
        total_panels += active_l.size
        if total_panels > max_panels:
            partial = math.fsum(np.concatenate(accepted))
            partial += math.fsum(gl_panels(f, active_l, active_r))
            raise QuadratureError(
                f"panel budget {max_panels} exhausted on [{a}, {b}]",
                partial,
                math.fsum(np.concatenate(errors)) if errors else math.inf,
            )

    value = math.fsum(np.concatenate(accepted))
    err = math.fsum(np.concatenate(errors))
    return value, err
