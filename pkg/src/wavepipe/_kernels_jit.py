"""numba-compiled hot loops: biquad cascades, direct convolution, oracle.

Serial and parallel variants share the same per-channel inner function, so
their per-channel float operation sequence is identical and outputs are
bit-exact across backends and thread counts. fastmath stays off: IEEE
semantics are part of the contract. `_kernels_py` mirrors these routines
with the same operation order.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _iir_channel(sos, x, out):
    n = x.shape[0]
    for i in range(n):
        out[i] = x[i]
    for s in range(sos.shape[0]):
        b0 = sos[s, 0]
        b1 = sos[s, 1]
        b2 = sos[s, 2]
        a1 = sos[s, 3]
        a2 = sos[s, 4]
        w1 = 0.0
        w2 = 0.0
        for i in range(n):
            xi = out[i]
            yi = b0 * xi + w1
            w1 = b1 * xi - a1 * yi + w2
            w2 = b2 * xi - a2 * yi
            out[i] = yi


@njit(cache=True)
def iir_cascade_serial(sos, x):
    out = np.empty_like(x)
    for c in range(x.shape[0]):
        _iir_channel(sos, x[c], out[c])
    return out


@njit(parallel=True, cache=True)
def iir_cascade_parallel(sos, x):
    out = np.empty_like(x)
    for c in prange(x.shape[0]):
        _iir_channel(sos, x[c], out[c])
    return out


@njit(cache=True)
def _fir_channel(taps, x, out):
    n = x.shape[0]
    t = taps.shape[0]
    for i in range(n):
        kmax = i + 1
        if kmax > t:
            kmax = t
        acc = 0.0
        for k in range(kmax):
            acc += taps[k] * x[i - k]
        out[i] = acc


@njit(cache=True)
def fir_direct_serial(taps, x):
    out = np.empty_like(x)
    for c in range(x.shape[0]):
        _fir_channel(taps, x[c], out[c])
    return out


@njit(parallel=True, cache=True)
def fir_direct_parallel(taps, x):
    out = np.empty_like(x)
    for c in prange(x.shape[0]):
        _fir_channel(taps, x[c], out[c])
    return out


@njit(cache=True)
def oracle_transversal(b, a, x):
    n = x.shape[0]
    y = np.empty_like(x)
    nb = b.shape[0]
    na = a.shape[0]
    for i in range(n):
        acc = 0.0
        kb = i + 1
        if kb > nb:
            kb = nb
        for k in range(kb):
            acc += b[k] * x[i - k]
        ka = i + 1
        if ka > na:
            ka = na
        for k in range(1, ka):
            acc -= a[k] * y[i - k]
        y[i] = acc
    return y
