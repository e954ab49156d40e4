"""Pure numpy kernels for the Mellin-Barnes line integral.

Same interface as the compiled ``_mbkernel`` module.
"""
import numpy as np

_LOG_SQRT_2PI = 0.91893853320467274178
# B_2k / (2k (2k-1)) for k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


def log_gamma(z):
    """Principal-branch log Gamma of a complex array (inf real part at poles)."""
    z = np.array(z, dtype=np.complex128, copy=True)
    shape = z.shape
    z = z.ravel()
    acc = np.zeros_like(z)
    pole = (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))
    z[pole] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        need = (z.real < 0.0) | (np.abs(z) < 10.0)
        while need.any():
            acc[need] += np.log(z[need])
            z[need] += 1.0
            need = (z.real < 0.0) | (np.abs(z) < 10.0)
        w = 1.0 / z
        w2 = w * w
        ser = np.full_like(z, _STIRLING[7])
        for coef in _STIRLING[6::-1]:
            ser = ser * w2 + coef
        out = (z - 0.5) * np.log(z) - z + _LOG_SQRT_2PI + ser * w - acc
    out[pole] = np.inf
    return out.reshape(shape)


def mb_log_phi(c, t, bm, an, bq, ap):
    """log of the Mellin-Barnes kernel at s = c + i t for every t.

    The imaginary part is only defined modulo 2 pi.
    """
    s = c + 1j * np.asarray(t, dtype=np.float64)
    acc = np.zeros_like(s)
    for b in bm:
        acc += log_gamma(b - s)
    for a in an:
        acc += log_gamma(1.0 - a + s)
    for b in bq:
        acc -= log_gamma(1.0 - b + s)
    for a in ap:
        acc -= log_gamma(a - s)
    return acc


def mb_line_sums(logphi, c, t, w, logz):
    """Weighted sums of Re[Phi(c+it) z^(c+it)] over t for each log z.

    Returns ``(sums, abs_sums)``; the second is the L1 mass used for the
    roundoff floor.
    """
    logphi = np.asarray(logphi)
    t = np.asarray(t, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    logz = np.atleast_1d(np.asarray(logz, dtype=np.float64))
    sums = np.empty(logz.size)
    abss = np.empty(logz.size)
    # chunk over z to keep the outer product bounded
    for k0 in range(0, logz.size, 64):
        lz = logz[k0:k0 + 64, None]
        with np.errstate(over="ignore", under="ignore"):
            mag = np.exp(logphi.real[None, :] + c * lz) * w[None, :]
        sums[k0:k0 + 64] = (mag * np.cos(logphi.imag[None, :] + t[None, :] * lz)).sum(axis=1)
        abss[k0:k0 + 64] = mag.sum(axis=1)
    return sums, abss
