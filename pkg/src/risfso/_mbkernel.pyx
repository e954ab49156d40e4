# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Mellin-Barnes line integral.

Mirrors ``_mbkernel_py`` function for function; ``risfso.kernels`` picks
whichever is available.
"""
import numpy as np

from libc.math cimport atan2, cos, exp, hypot, log, INFINITY

cdef double _LOG_SQRT_2PI = 0.91893853320467274178

# B_2k / (2k (2k-1)) for k = 1..8
cdef double[8] _STIRLING = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
]


cdef inline double complex _clog(double complex z) nogil:
    return log(hypot(z.real, z.imag)) + 1j * atan2(z.imag, z.real)


cdef inline double complex _stirling(double complex z) nogil:
    cdef double complex w, w2, ser
    cdef int k
    w = 1.0 / z
    w2 = w * w
    ser = _STIRLING[7]
    for k in range(6, -1, -1):
        ser = ser * w2 + _STIRLING[k]
    return (z - 0.5) * _clog(z) - z + _LOG_SQRT_2PI + ser * w


cdef inline bint _is_pole(double complex z) nogil:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == <double>(<long>z.real)


cdef double complex _lgamma(double complex z) nogil:
    # principal branch: one log per recurrence step
    cdef double complex acc = 0.0
    if _is_pole(z):
        return INFINITY
    while z.real < 0.0 or z.real * z.real + z.imag * z.imag < 100.0:
        acc = acc + _clog(z)
        z = z + 1.0
    return _stirling(z) - acc


cdef double complex _lgamma_mod(double complex z) nogil:
    # imaginary part only modulo 2 pi; enough wherever exp() is taken
    cdef double complex prod = 1.0
    cdef double complex acc = 0.0
    if _is_pole(z):
        return INFINITY
    while z.real < 0.0 or z.real * z.real + z.imag * z.imag < 100.0:
        prod = prod * z
        if prod.real * prod.real + prod.imag * prod.imag > 1e200:
            acc = acc + _clog(prod)
            prod = 1.0
        z = z + 1.0
    return _stirling(z) - acc - _clog(prod)


def log_gamma(z):
    """Principal-branch log Gamma of a complex array (inf real part at poles)."""
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    out = np.empty(zv.shape[0], dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(zv.shape[0]):
            ov[i] = _lgamma(zv[i])
    return out.reshape(np.shape(z))


def mb_log_phi(double c, t, bm, an, bq, ap):
    """log of the Mellin-Barnes kernel at s = c + i t for every t.

    The imaginary part is only defined modulo 2 pi.
    """
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] vbm = np.ascontiguousarray(bm, dtype=np.float64)
    cdef double[::1] van = np.ascontiguousarray(an, dtype=np.float64)
    cdef double[::1] vbq = np.ascontiguousarray(bq, dtype=np.float64)
    cdef double[::1] vap = np.ascontiguousarray(ap, dtype=np.float64)
    out = np.empty(tv.shape[0], dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double complex s, acc
    with nogil:
        for i in range(tv.shape[0]):
            s = c + 1j * tv[i]
            acc = 0.0
            for j in range(vbm.shape[0]):
                acc = acc + _lgamma_mod(vbm[j] - s)
            for j in range(van.shape[0]):
                acc = acc + _lgamma_mod(1.0 - van[j] + s)
            for j in range(vbq.shape[0]):
                acc = acc - _lgamma_mod(1.0 - vbq[j] + s)
            for j in range(vap.shape[0]):
                acc = acc - _lgamma_mod(vap[j] - s)
            ov[i] = acc
    return out


def mb_line_sums(logphi, double c, t, w, logz):
    """Weighted sums of Re[Phi(c+it) z^(c+it)] over t for each log z.

    Returns ``(sums, abs_sums)``; the second is the L1 mass used for the
    roundoff floor.
    """
    cdef double complex[::1] lp = np.ascontiguousarray(logphi, dtype=np.complex128)
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] lz = np.ascontiguousarray(logz, dtype=np.float64)
    sums = np.zeros(lz.shape[0])
    abss = np.zeros(lz.shape[0])
    cdef double[::1] sv = sums
    cdef double[::1] av = abss
    cdef Py_ssize_t i, k
    cdef double mag, term, acc, aacc
    with nogil:
        for k in range(lz.shape[0]):
            acc = 0.0
            aacc = 0.0
            for i in range(tv.shape[0]):
                mag = exp(lp[i].real + c * lz[k]) * wv[i]
                term = mag * cos(lp[i].imag + tv[i] * lz[k])
                acc = acc + term
                aacc = aacc + mag
            sv[k] = acc
            av[k] = aacc
    return sums, abss
