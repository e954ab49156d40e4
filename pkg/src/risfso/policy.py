"""Numerical policies shared by distributions and metrics."""
import numpy as np

# probability excursions beyond this are flagged, smaller ones clamped silently
CLAMP_FLAG_TOL = 1e-6
# alternating series: stop when |term| < SERIES_RTOL * |sum| or after SERIES_CAP terms
SERIES_RTOL = 1e-12
SERIES_CAP = 200

FLAG_CLAMPED = "clamped"
FLAG_TRUNCATED = "truncated"
FLAG_POLE_PERTURBED = "pole-perturbed"
FLAG_ILL_CONDITIONED = "ill-conditioned"


def clamp_probability(raw):
    """Clip to [0, 1]; returns ``(clipped, flagged)``."""
    arr = np.asarray(raw, dtype=float)
    excess = np.maximum(arr - 1.0, -arr)
    flagged = bool(np.any(excess > CLAMP_FLAG_TOL))
    clipped = np.clip(arr, 0.0, 1.0)
    if np.ndim(raw) == 0:
        clipped = float(clipped)
    return clipped, flagged
