"""Meijer G-function by numerical Mellin-Barnes integration.

Convention::

    G(z) = 1/(2 pi i) * int Phi(s) z^s ds,
    Phi(s) = prod_{j<m} Gamma(b_j - s) prod_{i<n} Gamma(1 - a_i + s)
             / [prod_{j>=m} Gamma(1 - b_j + s) prod_{i>=n} Gamma(a_i - s)]

For real z > 0 and a vertical line s = c + it separating the pole sets,
G(z) = (1/pi) int_0^inf Re[Phi(c + it) z^(c + it)] dt. The integrand decays
like exp(-pi * delta * |t|) with delta = m + n - (p + q)/2, so the trapezoid
rule on the truncated line converges geometrically; the step is halved
until successive sums agree.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from risfso import kernels
from risfso.errors import ConvergenceError, DomainError, NonSeparablePolesError, OverflowRangeError

DEFAULT_RTOL = 1e-8
MAX_HALVINGS = 10
# integrand cut where |Phi| drops below this fraction of its peak
TAIL_LOG = math.log(1e-16)
# two parameters closer than this are treated as equal when cancelling
CANCEL_TOL = 1e-12
_EPS = 2.0**-52
# sums this small are indistinguishable from zero (subnormal range)
_TINY = 1e-280
# bin width in log z for sharing one contour across a batch
_GROUP_WIDTH = 2.0
_PROBE_T = np.array([0.0, 0.5, 1.0, 2.0])
_SCAN_T = np.concatenate([np.arange(0.0, 20.0, 0.5), 20.0 * 1.15 ** np.arange(1, 45)])


@dataclass(frozen=True)
class MeijerGSpec:
    """Order (m, n, p, q) and parameters of G^{m,n}_{p,q}(z | a; b).

    The first n entries of ``a`` and the first m entries of ``b`` are the
    numerator parameters.
    """

    m: int
    n: int
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if not (0 <= self.m <= len(self.b) and 0 <= self.n <= len(self.a)):
            raise DomainError(
                f"invalid order G^{{{self.m},{self.n}}}_{{{len(self.a)},{len(self.b)}}}"
            )
        if not all(math.isfinite(v) for v in self.a + self.b):
            raise DomainError("Meijer G parameters must be finite")

    @property
    def p(self):
        return len(self.a)

    @property
    def q(self):
        return len(self.b)

    @property
    def delta(self):
        return self.m + self.n - 0.5 * (self.p + self.q)

    def __str__(self):
        return f"G^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}(a={list(self.a)}; b={list(self.b)})"

    def pole_bounds(self):
        """(rightmost left pole, leftmost right pole)."""
        lo = max((self.a[i] - 1.0 for i in range(self.n)), default=-math.inf)
        hi = min((self.b[j] for j in range(self.m)), default=math.inf)
        return lo, hi

    def is_separable(self):
        lo, hi = self.pole_bounds()
        return hi - lo > CANCEL_TOL

    def inverted(self):
        """Spec H with G(x) = H(1/x)."""
        return MeijerGSpec(
            self.n,
            self.m,
            tuple(1.0 - v for v in self.b),
            tuple(1.0 - v for v in self.a),
        )

    def reduced(self):
        """Cancel Gamma ratios that are identically one."""
        a_num, a_den = list(self.a[: self.n]), list(self.a[self.n:])
        b_num, b_den = list(self.b[: self.m]), list(self.b[self.m:])
        for num, den in ((a_num, b_den), (b_num, a_den)):
            i = 0
            while i < len(num):
                hit = next(
                    (k for k, v in enumerate(den) if abs(v - num[i]) <= CANCEL_TOL), None
                )
                if hit is None:
                    i += 1
                else:
                    num.pop(i)
                    den.pop(hit)
        return MeijerGSpec(len(b_num), len(a_num), a_num + a_den, b_num + b_den)

    def root_expansion(self, r, reduce=True):
        """Gauss-multiplication form of G(x^{1/r}).

        Returns ``(prefactor, spec, arg_factor)`` with
        G_self(x^{1/r}) = prefactor * G_spec(arg_factor * x). With
        ``reduce=False`` the full G^{rm,rn}_{rp,rq} is kept.
        """
        r = int(r)
        if r < 1:
            raise DomainError("root order must be a positive integer")
        if r == 1:
            return 1.0, self, 1.0

        def spread(vals):
            return [(v + j) / r for v in vals for j in range(r)]

        spec = MeijerGSpec(
            r * self.m,
            r * self.n,
            spread(self.a[: self.n]) + spread(self.a[self.n:]),
            spread(self.b[: self.m]) + spread(self.b[self.m:]),
        )
        log_pref = math.log(r) * (1.0 + sum(self.b) - sum(self.a) + 0.5 * (self.p - self.q))
        log_pref += (1 - r) * self.delta * math.log(2.0 * math.pi)
        if reduce:
            spec = spec.reduced()
        return math.exp(log_pref), spec, float(r) ** (r * (self.p - self.q))

    def gamma_average(self, k, nu):
        """Average of G(sigma * U^k) over U ~ Gamma(shape nu, scale theta).

        Returns ``(prefactor, spec, arg_factor)`` with
        E[G_self(sigma U^k)] = prefactor * G_spec(arg_factor * sigma * theta^k).
        """
        k = int(k)
        if k < 1 or not nu > 0:
            raise DomainError("gamma_average needs integer k >= 1 and nu > 0")
        extra = [1.0 - (nu + j) / k for j in range(k)]
        spec = MeijerGSpec(
            self.m,
            self.n + k,
            extra + list(self.a[: self.n]) + list(self.a[self.n:]),
            self.b,
        )
        log_pref = 0.5 * (1 - k) * math.log(2.0 * math.pi) + (nu - 0.5) * math.log(k)
        log_pref -= math.lgamma(nu)
        return math.exp(log_pref), spec.reduced(), float(k) ** k


def mellin_product(g1, g2):
    """Spec H with int_0^inf x^{-1} G1(s x) G2(w x) dx = H(s / w)."""
    m1, n1, m2, n2 = g1.m, g1.n, g2.m, g2.n
    a = (
        list(g1.a[:n1])
        + [1.0 - v for v in g2.b[:m2]]
        + list(g1.a[n1:])
        + [1.0 - v for v in g2.b[m2:]]
    )
    b = (
        list(g1.b[:m1])
        + [1.0 - v for v in g2.a[:n2]]
        + list(g1.b[m1:])
        + [1.0 - v for v in g2.a[n2:]]
    )
    return MeijerGSpec(m1 + n2, n1 + m2, a, b)


def _kernel_args(spec):
    return (
        np.array(spec.b[: spec.m]),
        np.array(spec.a[: spec.n]),
        np.array(spec.b[spec.m:]),
        np.array(spec.a[spec.n:]),
    )


def _check(spec):
    if spec.delta <= 0:
        raise DomainError(
            f"{spec}: line integral needs m + n > (p + q)/2 (delta = {spec.delta})"
        )
    lo, hi = spec.pole_bounds()
    if not hi - lo > CANCEL_TOL:
        raise NonSeparablePolesError(
            f"{spec}: left poles reach {lo:.6g}, right poles start at {hi:.6g}"
        )
    return lo, hi


def _choose_contour(args, logz, lo, hi):
    gap = hi - lo
    mu = min(0.25, gap / 4.0) if math.isfinite(gap) else 0.25
    left = lo + mu if math.isfinite(lo) else hi - 40.0
    right = hi - mu if math.isfinite(hi) else lo + 40.0
    if right - left < 1e-9:
        return 0.5 * (left + right)

    def objective(c):
        lp = kernels.mb_log_phi(c, _PROBE_T, *args).real
        top = lp.max()
        if not math.isfinite(top):
            return math.inf if top > 0 else -math.inf
        return top + math.log(np.exp(lp - top).sum()) + c * logz

    res = minimize_scalar(objective, bounds=(left, right), method="bounded",
                          options={"xatol": 1e-3})
    return float(res.x)


def _cutoff(args, c):
    lp = kernels.mb_log_phi(c, _SCAN_T, *args).real
    peak = np.nanmax(lp)
    above = np.nonzero(lp > peak + TAIL_LOG - 2.0)[0]
    last = above[-1]
    if last + 1 >= _SCAN_T.size:
        raise ConvergenceError("Mellin-Barnes integrand does not decay on the scanned line")
    return float(_SCAN_T[last + 1])


@lru_cache(maxsize=4096)
def _plan(spec, key):
    # contour, cutoff and pole distance for one log z bin; pure, so memoised
    lo, hi = spec.pole_bounds()
    args = _kernel_args(spec)
    c = _choose_contour(args, (key + 0.5) * _GROUP_WIDTH, lo, hi)
    return c, _cutoff(args, c), min(c - lo, hi - c)


def _integrate(args, c, T, d, logz, rtol, min_halvings):
    h = min(d, 1.0) / 4.0
    K = int(math.ceil(T / h))
    t = h * np.arange(K + 1)
    w = np.full(K + 1, h)
    w[0] = 0.5 * h
    lp = kernels.mb_log_phi(c, t, *args)
    S, L1 = kernels.mb_line_sums(lp, c, t, w, logz)
    if not np.all(np.isfinite(L1)):
        raise OverflowRangeError("Meijer G value exceeds the double-precision range")
    err = np.full(logz.size, np.inf)
    for level in range(1, MAX_HALVINGS + 1):
        h *= 0.5
        K *= 2
        tn = h * np.arange(1, K, 2)
        lp = kernels.mb_log_phi(c, tn, *args)
        s_new, l_new = kernels.mb_line_sums(lp, c, tn, np.full(tn.size, h), logz)
        S_next = 0.5 * S + s_new
        L1 = 0.5 * L1 + l_new
        floor = np.maximum(64.0 * _EPS * L1, _TINY)
        err = np.maximum(np.abs(S_next - S), floor)
        S = S_next
        if level >= min_halvings and np.all(err <= np.maximum(rtol * np.abs(S), floor)):
            return S / math.pi, err / math.pi, level
    worst = float(np.max(err / np.maximum(np.abs(S), 1e-300)))
    raise ConvergenceError(
        f"Mellin-Barnes quadrature stalled at relative error {worst:.3g}", achieved=worst
    )


def meijer_g_many(spec, z, *, rtol=DEFAULT_RTOL, full_output=False, min_halvings=1):
    """Evaluate G(z) for an array of positive real z.

    Arguments are grouped into fixed log z bins; one contour and one set of
    Gamma evaluations serves each bin. With ``full_output`` returns
    ``(values, error_bounds, halvings)``.
    """
    zs = np.asarray(z, dtype=float)
    flat = zs.ravel()
    if flat.size and not np.all((flat > 0) & np.isfinite(flat)):
        raise DomainError("Meijer G is evaluated for finite z > 0 only")
    lo, hi = _check(spec)
    args = _kernel_args(spec)
    logz = np.log(flat)
    vals = np.empty(flat.size)
    errs = np.empty(flat.size)
    levels = np.zeros(flat.size, dtype=int)
    if flat.size == 0:
        out = vals.reshape(zs.shape)
        return (out, errs.reshape(zs.shape), levels.reshape(zs.shape)) if full_output else out
    bins = np.floor(logz / _GROUP_WIDTH).astype(np.int64)
    for key in np.unique(bins):
        sel = np.nonzero(bins == key)[0]
        c, T, d = _plan(spec, int(key))
        v, e, lev = _integrate(args, c, T, d, logz[sel], rtol, min_halvings)
        vals[sel] = v
        errs[sel] = e
        levels[sel] = lev
    if np.ndim(z) == 0:
        vals, errs, levels = vals[0], errs[0], levels[0]
    else:
        vals, errs, levels = vals.reshape(zs.shape), errs.reshape(zs.shape), levels.reshape(zs.shape)
    if full_output:
        return vals, errs, levels
    return vals


def meijer_g(spec, z, *, rtol=DEFAULT_RTOL, full_output=False, min_halvings=1):
    """G^{m,n}_{p,q}(z | a; b) for a single real z > 0."""
    z = float(z)
    res = meijer_g_many(spec, z, rtol=rtol, full_output=True, min_halvings=min_halvings)
    val, err, lev = float(res[0]), float(res[1]), int(res[2])
    if full_output:
        return val, err, lev
    return val
