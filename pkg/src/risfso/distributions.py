"""PDFs and CDFs of the link SNRs and of the dual-hop DF SNR.

RF cascade SNRs follow the Gamma-fitted amplitude law. FSO SNRs are
gamma_bar * Z^r with Z a unit-mean Malaga-pointing irradiance (one link)
or the product of two such variates (RIS cascade).
"""
import math

import numpy as np

from risfso.errors import DomainError
from risfso.policy import SERIES_CAP, SERIES_RTOL, clamp_probability
from risfso.specfun import MeijerGSpec, lower_incomplete_gamma_regularized, meijer_g_many


def _positive(gamma, name="gamma"):
    g = np.asarray(gamma, dtype=float)
    if np.any(~(g > 0)):
        raise DomainError(f"{name} must be > 0")
    return g


def _nonnegative(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(~(g >= 0)):
        raise DomainError("gamma must be >= 0")
    return g


def _out(val, like):
    return float(val) if np.ndim(like) == 0 else val


# --- RF cascade ---------------------------------------------------------

def pdf_snr_rf(fit, gbar, gamma):
    """Density of gbar * A^2 with A ~ Gamma(a + 1, b)."""
    g = _positive(gamma)
    s = fit.a + 1.0
    logf = (
        0.5 * (fit.a - 1.0) * np.log(g)
        - np.sqrt(g) / (fit.b * math.sqrt(gbar))
        - math.log(2.0)
        - s * math.log(fit.b)
        - math.lgamma(s)
        - 0.5 * s * math.log(gbar)
    )
    return _out(np.exp(logf), gamma)


def cdf_snr_rf(fit, gbar, gamma):
    """P(a + 1, sqrt(gamma) / (b sqrt(gbar)))."""
    g = _nonnegative(gamma)
    x = np.sqrt(g) / (fit.b * math.sqrt(gbar))
    return _out(lower_incomplete_gamma_regularized(fit.a + 1.0, x), gamma)


def cdf_snr_rf_series(fit, gbar, gamma):
    """Alternating-series form of the RF CDF; validation path only.

    Returns ``(value, truncated)``.
    """
    g = float(gamma)
    if g < 0:
        raise DomainError("gamma must be >= 0")
    if g == 0:
        return 0.0, False
    s = fit.a + 1.0
    x = math.sqrt(g) / (fit.b * math.sqrt(gbar))
    total = 0.0
    log_x = math.log(x)
    log_gs = math.lgamma(s)
    for n in range(SERIES_CAP):
        mag = math.exp((s + n) * log_x - math.lgamma(n + 1.0) - log_gs)
        term = (-1) ** n * mag / (s + n)
        total += term
        if abs(term) < SERIES_RTOL * abs(total):
            return total, False
    return total, True


# --- FSO links ------------------------------------------------------------

def _link_terms(link):
    k = link.constants
    xi2 = link.xi**2
    return [
        (0.5 * xi2 * k.A * bm, (xi2, link.alpha, float(m)))
        for m, bm in enumerate(k.b_m, start=1)
    ]


def link_pdf_terms(link):
    """Mixture terms (weight, spec) of the unit-mean irradiance density.

    f_X(x) = sum w * G(B x) / x.
    """
    xi2 = link.xi**2
    return [(w, MeijerGSpec(3, 0, [xi2 + 1.0], list(bb))) for w, bb in _link_terms(link)]


def link_cdf_terms(link):
    """Mixture terms (weight, spec) with F_X(x) = sum w * G(B x)."""
    xi2 = link.xi**2
    return [(w, MeijerGSpec(3, 1, [1.0, xi2 + 1.0], list(bb) + [0.0])) for w, bb in _link_terms(link)]


def pair_pdf_terms(linkA, linkB):
    """Mixture terms of the product Z = X_A X_B: f_Z(z) = sum w G(B_A B_B z) / z."""
    top = [1.0 + linkB.xi**2, 1.0 + linkA.xi**2]
    return [
        (wa * wb, MeijerGSpec(6, 0, top, list(ba) + list(bb)))
        for wa, ba in _link_terms(linkA)
        for wb, bb in _link_terms(linkB)
    ]


def pair_cdf_terms(linkA, linkB):
    """Mixture terms with F_Z(z) = sum w G(B_A B_B z)."""
    top = [1.0, 1.0 + linkB.xi**2, 1.0 + linkA.xi**2]
    return [
        (wa * wb, MeijerGSpec(6, 1, top, list(ba) + list(bb) + [0.0]))
        for wa, ba in _link_terms(linkA)
        for wb, bb in _link_terms(linkB)
    ]


def _shared_r(linkA, linkB):
    if linkA.r != linkB.r:
        raise DomainError("both FSO sub-links must use the same detection order r")
    return linkA.r


def _pdf_from_terms(terms, Bz, gbar, gamma, r):
    g = _positive(gamma)
    flat = g.ravel()
    z = (flat / gbar) ** (1.0 / r)
    acc = np.zeros(flat.size)
    for w, spec in terms:
        acc += w * meijer_g_many(spec, Bz * z)
    return _out((acc / (r * flat)).reshape(g.shape), gamma)


def _cdf_from_terms(terms, Bz, gbar, gamma, r, raw):
    g = _nonnegative(gamma)
    flat = g.ravel()
    acc = np.zeros(flat.size)
    live = (flat > 0) & np.isfinite(flat)
    acc[np.isinf(flat)] = 1.0
    if live.any():
        x = flat[live] / gbar
        for w, spec in terms:
            pref, spec_r, argf = spec.root_expansion(r)
            acc[live] += w * pref * meijer_g_many(spec_r, argf * Bz**r * x)
    if not raw:
        acc, _ = clamp_probability(acc)
    return _out(acc.reshape(g.shape), gamma)


def pdf_snr_fso_link(link, gbar, gamma):
    """Density of gbar * X^r for a single Malaga-pointing sub-link."""
    return _pdf_from_terms(link_pdf_terms(link), link.constants.B, gbar, gamma, link.r)


def cdf_snr_fso_link(link, gbar, gamma, *, raw=False):
    """CDF of gbar * X^r for a single sub-link."""
    return _cdf_from_terms(link_cdf_terms(link), link.constants.B, gbar, gamma, link.r, raw)


def pdf_snr_fso_pair(linkA, linkB, gprod, gamma):
    """Density of gprod * (X_A X_B)^r for the RIS-cascaded FSO hop."""
    r = _shared_r(linkA, linkB)
    Bz = linkA.constants.B * linkB.constants.B
    return _pdf_from_terms(pair_pdf_terms(linkA, linkB), Bz, gprod, gamma, r)


def cdf_snr_fso_pair(linkA, linkB, gprod, gamma, *, raw=False):
    """CDF of gprod * (X_A X_B)^r.

    Uses the Gauss-multiplication form, a G^{6r,1}_{2r+1,6r+1} per term
    after cancellation.
    """
    r = _shared_r(linkA, linkB)
    Bz = linkA.constants.B * linkB.constants.B
    return _cdf_from_terms(pair_cdf_terms(linkA, linkB), Bz, gprod, gamma, r, raw)


def cdf_pair_prefactor(linkA, linkB, mA, mB):
    """Closed-form prefactor of one (mA, mB) term of the r-expanded CDF.

    xi_A^2 A_A xi_B^2 A_B b_mA b_mB r^{S-2} / (2^{2r} (2 pi)^{2(r-1)}) with
    S = alpha_A + alpha_B + mA + mB.
    """
    r = _shared_r(linkA, linkB)
    ka, kb = linkA.constants, linkB.constants
    S = linkA.alpha + linkB.alpha + mA + mB
    return (
        linkA.xi**2 * ka.A * linkB.xi**2 * kb.A * ka.b_m[mA - 1] * kb.b_m[mB - 1]
        * r ** (S - 2) / (2 ** (2 * r) * (2 * math.pi) ** (2 * (r - 1)))
    )


# --- dual hop -------------------------------------------------------------

def combine_dualhop(FR, FD):
    """CDF of min(gamma_R, gamma_D) from the hop CDFs."""
    return FR + FD - FR * FD


def cdf_dualhop(fit, g1, linkH, linkG, g2, gamma):
    """CDF of the DF end-to-end SNR min(gamma_R, gamma_D)."""
    FR = np.asarray(cdf_snr_rf(fit, g1, gamma))
    FD = np.asarray(cdf_snr_fso_pair(linkH, linkG, g2, gamma))
    return _out(combine_dualhop(FR, FD), gamma)


def cdf_dualhop_series(fit, g1, linkH, linkG, g2, gamma):
    """Dual-hop CDF with the RF part from the alternating series.

    Returns ``(value, truncated)``; validation path only.
    """
    FR, truncated = cdf_snr_rf_series(fit, g1, gamma)
    FD = cdf_snr_fso_pair(linkH, linkG, g2, gamma)
    return combine_dualhop(FR, FD), truncated
