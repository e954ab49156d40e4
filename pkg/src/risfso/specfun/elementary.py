"""Scalar special functions: incomplete gamma, Bessel I, Laguerre L_1/2, Beta reflection."""
import math

import numpy as np

from risfso import kernels
from risfso.errors import DomainError, OverflowRangeError, PoleError

_EPS = 2.0**-52
_MAX_ITER = 10_000


def log_gamma_complex(z):
    """Principal-branch log Gamma for a complex scalar.

    Upward recurrence to |z| >= 10 followed by an 8-term Stirling series.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"log Gamma has a pole at {z.real:g}")
    return complex(kernels.log_gamma(np.array([z]))[0])


def _gamma_series(s, x):
    # P(s, x) by the power series, valid for x < s + 1
    term = 1.0 / s
    total = term
    for n in range(1, _MAX_ITER):
        term *= x / (s + n)
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _gamma_cfrac(s, x):
    # Q(s, x) by modified Lentz on the Legendre continued fraction
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h


def lower_incomplete_gamma_regularized(s, x):
    """P(s, x) = gamma(s, x) / Gamma(s).

    Accepts a scalar ``x`` or an array; ``s`` is a positive scalar.
    """
    s = float(s)
    if not s > 0.0 or not math.isfinite(s):
        raise DomainError(f"incomplete gamma needs s > 0, got {s}")
    if np.ndim(x) == 0:
        x = float(x)
        if not x >= 0.0:
            raise DomainError(f"incomplete gamma needs x >= 0, got {x}")
        if x == 0.0:
            return 0.0
        if math.isinf(x):
            return 1.0
        if x < s + 1.0:
            return min(1.0, _gamma_series(s, x))
        return max(0.0, 1.0 - _gamma_cfrac(s, x))
    xs = np.asarray(x, dtype=float)
    if np.any(~(xs >= 0.0)):
        raise DomainError("incomplete gamma needs x >= 0")
    out = np.fromiter(
        (lower_incomplete_gamma_regularized(s, v) for v in xs.ravel()), float, xs.size
    )
    return out.reshape(xs.shape)


def beta_reflection(z, tol=1e-8):
    """B(z, 1 - z) = pi / sin(pi z), continued to all non-integer z."""
    z = float(z)
    if abs(z - round(z)) <= tol:
        raise PoleError(f"B(z, 1-z) has a pole at z = {round(z)}")
    # reduce before sin so large |z| keeps its accuracy
    k = math.floor(z)
    frac = z - k
    sign = -1.0 if k % 2 else 1.0
    return sign * math.pi / math.sin(math.pi * frac)


def _bessel_series(nu, x):
    half = 0.5 * x
    q = half * half
    term = half**nu / math.factorial(nu)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if term <= total * 1e-17:
            return total


def _bessel_asymptotic_scaled(nu, x):
    # e^{-x} I_nu(x) for large positive x
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    for k in range(1, 60):
        nxt = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) > abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i_scaled(order, x):
    """exp(-|x|) * I_order(x) for order in {0, 1}."""
    if order not in (0, 1):
        raise DomainError("bessel_i supports orders 0 and 1 only")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("bessel_i needs a finite argument")
    ax = abs(x)
    if ax <= 25.0:
        val = _bessel_series(order, ax) * math.exp(-ax)
    else:
        val = _bessel_asymptotic_scaled(order, ax)
    return -val if (order == 1 and x < 0) else val


def bessel_i(order, x):
    """Modified Bessel function of the first kind, orders 0 and 1."""
    x = float(x)
    if abs(x) > 700.0:
        raise OverflowRangeError(f"I_{order}({x}) overflows double precision")
    return bessel_i_scaled(order, x) * math.exp(abs(x))


def laguerre_half(x):
    """L_{1/2}(x) = e^{x/2}[(1 - x) I0(-x/2) - x I1(-x/2)] for x <= 0.

    Evaluated with scaled Bessel functions so large |x| does not overflow.
    """
    x = float(x)
    if x > 0.0:
        raise DomainError("laguerre_half is defined here for x <= 0")
    y = -0.5 * x
    # e^{x/2} e^{|x/2|} = 1 for x <= 0
    return (1.0 - x) * bessel_i_scaled(0, y) - x * bessel_i_scaled(1, y)


