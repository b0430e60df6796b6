"""Pure numpy/Python fallbacks for the jit kernels.

Selected when numba is unavailable or WAVEPIPE_NO_JIT=1. Each routine
performs the same float operations in the same order as its counterpart
in `_kernels_jit`, so outputs agree bit for bit; only the speed differs
(the IIR recursion is inherently sequential and falls back to a Python
sample loop vectorized across channels).
"""

import numpy as np


def iir_cascade_serial(sos, x):
    out = x.copy()
    n = out.shape[1]
    for s in range(sos.shape[0]):
        b0, b1, b2, a1, a2 = sos[s]
        w1 = np.zeros(out.shape[0])
        w2 = np.zeros(out.shape[0])
        for i in range(n):
            xi = out[:, i]
            yi = b0 * xi + w1
            w1 = b1 * xi - a1 * yi + w2
            w2 = b2 * xi - a2 * yi
            out[:, i] = yi
    return out


# channels are independent either way; without a JIT there is no cheaper
# schedule, so "parallel" computes the identical serial recursion
iir_cascade_parallel = iir_cascade_serial


def fir_direct_serial(taps, x):
    n = x.shape[1]
    out = np.zeros_like(x)
    for k in range(min(len(taps), n)):
        if k == 0:
            out += taps[0] * x
        else:
            out[:, k:] += taps[k] * x[:, :-k]
    return out


fir_direct_parallel = fir_direct_serial


def oracle_transversal(b, a, x):
    bl = b.tolist()
    al = a.tolist()
    xl = x.tolist()
    n = len(xl)
    nb = len(bl)
    na = len(al)
    y = [0.0] * n
    for i in range(n):
        acc = 0.0
        for k in range(min(nb, i + 1)):
            acc += bl[k] * xl[i - k]
        for k in range(1, min(na, i + 1)):
            acc -= al[k] * y[i - k]
        y[i] = acc
    return np.asarray(y, dtype=np.float64)
