"""Triangle and rectangle kernels: transforms, autocorrelations and constants.

The triangle kernel is the rectangle convolved with itself, so its transform
is the square of the sinc and never changes sign. On |y| <= T the transform of
either kernel with delta = theta / T stays above sinc(theta) (or its square),
which is where the explicit constants come from.
"""

import math

import numpy as np

from gallagher.kernels import Kernel, autocorrelation, explicit_constant, transform

delta = 0.5
tri, rect = Kernel("cesaro", delta), Kernel("rectangular", delta)

print("y        rectangle      triangle")
for y in (0.0, 0.5, 1.0, 2.0, 3.0, 5.0):
    print(f"{y:4.1f}  {transform(rect, y): .6e}  {transform(tri, y): .6e}")

# the rectangle transform goes negative between 1/delta and 2/delta
ys = np.linspace(0, 10, 2001)
print("\nmin rectangle transform:", float(transform(rect, ys).min()))
print("min triangle transform: ", float(transform(tri, ys).min()))

print("\nautocorrelation at lag 0: triangle", autocorrelation(tri, 0.0),
      "expected 2/(3 delta) =", 2 / (3 * delta))

print("\ntheta    C_rect      C_cesaro")
for theta in (0.1, 0.25, 1 / (2 * math.pi), 0.5, 0.9):
    print(f"{theta:.4f}  {explicit_constant(theta, 'rectangular'):10.5f}  "
          f"{explicit_constant(theta, 'cesaro'):10.5f}")
