"""Compare the compiled and pure-numpy Mellin-Barnes kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Part one times the raw kernels side by side. Part two times an end-to-end
CDF sweep in a fresh interpreter per backend, since the backend is picked
at import time through RISFSO_PURE_PYTHON.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from risfso import _mbkernel_py as pure

try:
    from risfso import _mbkernel as compiled
except ImportError:
    compiled = None

END_TO_END = """
import time, numpy as np
from risfso import kernels
from risfso.channels import MalagaPointingLink
from risfso.distributions import cdf_snr_fso_pair
a = MalagaPointingLink(4.2, 3, 1.1, r=2)
g = np.logspace(-3, 3, 400)
t0 = time.perf_counter()
cdf_snr_fso_pair(a, a, 10.0, g)
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def raw_kernels(repeat):
    t = np.linspace(-80.0, 80.0, 4001)
    w = np.full(t.size, t[1] - t[0])
    args = ([1.1, 2.0, 0.5, 4.2, 3.0, 0.0], [0.0], [-0.1], [2.21, 1.0, 1.0])
    logz = np.linspace(-8.0, 8.0, 256)
    for name, mod in (("python", pure), ("cython", compiled)):
        if mod is None:
            print(f"{name:8s} unavailable")
            continue
        lp = mod.mb_log_phi(0.3, t, *args)
        t_phi = min(timeit.repeat(lambda: mod.mb_log_phi(0.3, t, *args), number=1, repeat=repeat))
        t_sum = min(timeit.repeat(lambda: mod.mb_line_sums(lp, 0.3, t, w, logz), number=1, repeat=repeat))
        print(f"{name:8s} log_phi {1e3 * t_phi:8.2f} ms   line_sums {1e3 * t_sum:8.2f} ms")


def end_to_end():
    for pure_flag in ("0", "1"):
        env = dict(os.environ, RISFSO_PURE_PYTHON=pure_flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"{backend:8s} 400-point pair CDF (r=2) {float(secs):8.3f} s")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    raw_kernels(args.repeat)
    end_to_end()


if __name__ == "__main__":
    main()
