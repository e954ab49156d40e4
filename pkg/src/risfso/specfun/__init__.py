"""Special functions used by the closed-form metrics."""
from risfso.specfun.elementary import (
    bessel_i,
    bessel_i_scaled,
    beta_reflection,
    laguerre_half,
    log_gamma_complex,
    lower_incomplete_gamma_regularized,
)
from risfso.specfun.meijer import MeijerGSpec, meijer_g, meijer_g_many, mellin_product

__all__ = [
    "MeijerGSpec",
    "bessel_i",
    "bessel_i_scaled",
    "beta_reflection",
    "laguerre_half",
    "log_gamma_complex",
    "lower_incomplete_gamma_regularized",
    "meijer_g",
    "meijer_g_many",
    "mellin_product",
]
