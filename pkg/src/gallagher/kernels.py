"""Rectangular and Cesaro (triangle) averaging kernels.

Both kernels have unit mass. The rectangle of width ``delta`` and height
``1/delta`` has transform sinc(delta*y); the triangle of half-width ``delta``
is the rectangle convolved with itself, so its transform is the square.
Here sinc is the normalized one, ``sin(pi x)/(pi x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ._numerics import sinc_arg

Shape = Literal["rectangular", "cesaro"]
SHAPES = ("rectangular", "cesaro")


@dataclass(frozen=True)
class Kernel:
    shape: Shape
    delta: float

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown kernel shape {self.shape!r}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    @property
    def support(self) -> float:
        """Half-width of the support."""
        return self.delta / 2 if self.shape == "rectangular" else self.delta

    def __call__(self, y):
        return eval_kernel(self, y)


@dataclass(frozen=True)
class WindowParams:
    """Window scale tied to the time horizon: delta = theta / T."""

    T: float
    theta: float
    delta: float = field(init=False)

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        object.__setattr__(self, "delta", self.theta / self.T)


def eval_kernel(k: Kernel, y):
    """Kernel value at y; the rectangle includes its boundary |y| = delta/2."""
    y = np.abs(np.asarray(y, dtype=np.float64))
    d = k.delta
    if k.shape == "rectangular":
        out = np.where(y <= d / 2, 1.0 / d, 0.0)
    else:
        out = np.maximum(1.0 / d - y / (d * d), 0.0)
    return out if out.ndim else float(out)


def sinc(x):
    """Normalized sinc, sin(pi x)/(pi x)."""
    return sinc_arg(np.pi * np.asarray(x, dtype=np.float64))


def transform(k: Kernel, y):
    """Fourier transform  int k(x) e(-xy) dx  (real, since k is even)."""
    s = sinc(k.delta * np.asarray(y, dtype=np.float64))
    return s if k.shape == "rectangular" else s * s


def _cubic_bspline(u):
    # centered cardinal B-spline of order 4, support [-2, 2]
    u = np.abs(u)
    inner = 2.0 / 3.0 - u * u + 0.5 * u ** 3
    outer = (2.0 - u) ** 3 / 6.0
    return np.where(u <= 1.0, inner, np.where(u < 2.0, outer, 0.0))


def autocorrelation(k: Kernel, lag):
    """int k(x) k(x + lag) dx, in closed form.

    The rectangle gives a triangle of half-width delta. The triangle is a
    two-fold rectangle convolution, so its autocorrelation is a four-fold one:
    the cubic B-spline scaled to support |lag| <= 2 delta.
    """
    u = np.abs(np.asarray(lag, dtype=np.float64)) / k.delta
    if k.shape == "rectangular":
        out = np.maximum(0.0, 1.0 - u) / k.delta
    else:
        out = _cubic_bspline(u) / k.delta
    return out if out.ndim else float(out)


def explicit_constant(theta: float, shape: Shape) -> float:
    """Admissible constant C(theta) in  int_{-T}^{T} |S|^2 <= C * (window integral).

    On |y| <= T the transform is at least sinc(theta) (rectangular) or
    sinc(theta)**2 (cesaro), because delta*T = theta and sinc decreases on
    [0, 1]. Plancherel squares the transform, giving
    (pi theta / sin pi theta)**2 and **4 respectively.
    """
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if shape not in SHAPES:
        raise ValueError(f"unknown kernel shape {shape!r}")
    power = 2 if shape == "rectangular" else 4
    return float(sinc(theta)) ** (-power)


def transform_lower_bound(theta: float, shape: Shape) -> float:
    """min of the transform over |y| <= T, for delta = theta/T."""
    s = float(sinc(theta))
    return s if shape == "rectangular" else s * s


def unit_mass(k: Kernel) -> float:
    """Closed-form integral of the kernel (always 1)."""
    if k.shape == "rectangular":
        return (1.0 / k.delta) * k.delta
    return 0.5 * (2 * k.delta) * (1.0 / k.delta)

