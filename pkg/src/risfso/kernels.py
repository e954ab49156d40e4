"""Backend selection for the Mellin-Barnes kernels.

The compiled extension is used when it imports; setting
``RISFSO_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

BACKEND = "python"

if os.environ.get("RISFSO_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from risfso._mbkernel import log_gamma, mb_line_sums, mb_log_phi  # noqa: F401
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

if BACKEND == "python":
    from risfso._mbkernel_py import log_gamma, mb_line_sums, mb_log_phi  # noqa: F401

__all__ = ["BACKEND", "log_gamma", "mb_line_sums", "mb_log_phi"]
