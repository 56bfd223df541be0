"""Mean-square bounds for exponential sums with rectangular and Cesaro windows.

Modules:
    arith       divisor functions, Moebius, balancing, sup norms
    kernels     the two averaging kernels, transforms, explicit constants
    sums        exponential sums, Dirichlet and critical-line polynomials
    meansquare  exact and quadrature integrals, Selberg integrals
    verify      inequality checks, randomized suites, constant sweeps
    cli         batch runner
"""

from .arith import ArithmeticSequence, balance, moebius, sieve_dk, sup_norm
from .kernels import Kernel, WindowParams, autocorrelation, eval_kernel, explicit_constant, transform
from .meansquare import (
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
from .sums import (
    DirichletPolynomial,
    ExponentialSum,
    critical_line_poly,
    eval_dirichlet,
    eval_expsum,
    from_dirichlet,
)
from .verify import (
    SweepConfig,
    VerificationReport,
    check_cl_selberg,
    check_corollary,
    check_gallagher_original,
    check_gallagher_series,
    check_lemma,
    check_plancherel,
    check_theorem,
    emit_plot_data,
    estimate_constant,
)

__version__ = "0.1.0"
