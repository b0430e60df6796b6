import numpy as np
import pytest
from hypothesis import settings

import wavepipe as wp

# jit compilation happens on first call; keep it out of individual test timings
settings.register_profile("wavepipe", deadline=None, max_examples=50)
settings.load_profile("wavepipe")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    wave = wp.white_noise(0.01, 2, 8000, seed=1)
    filt = wp.design_butterworth("lp", 2, 1000, 8000)
    wp.apply_iir(filt, wave, backend="serial")
    wp.apply_iir(filt, wave, backend="parallel")
    fir = wp.design_fir("lp", 9, 1000, "hamming", 8000)
    wp.apply_fir(fir, wave, backend="serial", strategy="direct")
    wp.apply_fir(fir, wave, backend="parallel", strategy="direct")
    wp.iir_oracle([1.0], [1.0], np.zeros(4))


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def random_stable_section(rng) -> wp.BiquadSection:
    """Random biquad inside the stability triangle, mixing complex and real poles."""
    if rng.random() < 0.7:
        radius = rng.uniform(0.0, 0.95)
        angle = rng.uniform(0.0, np.pi)
        a1 = -2.0 * radius * np.cos(angle)
        a2 = radius * radius
    else:
        p1 = rng.uniform(-0.95, 0.95)
        p2 = rng.uniform(-0.95, 0.95)
        a1 = -(p1 + p2)
        a2 = p1 * p2
    b = rng.uniform(-2.0, 2.0, size=3)
    return wp.BiquadSection(b[0], b[1], b[2], a1, a2)


def random_cascade(rng, max_sections=6, fs=44100) -> wp.IirFilter:
    n_sections = int(rng.integers(1, max_sections + 1))
    sections = [random_stable_section(rng) for _ in range(n_sections)]
    gain = float(rng.uniform(0.25, 2.0))
    return wp.IirFilter.from_sections(sections, fs=fs, overall_gain=gain)


def random_unbound_stage(rng):
    """Random unbound design drawn across the filter catalog."""
    fc = float(rng.uniform(100, 8000))
    choice = int(rng.integers(0, 4))
    if choice == 0:
        kind = ("lowpass", "highpass")[int(rng.integers(0, 2))]
        return wp.design_butterworth(kind, int(rng.integers(1, 5)), fc)
    if choice == 1:
        return wp.design_chebyshev1("lowpass", int(rng.integers(1, 5)), float(rng.uniform(0.1, 2.0)), fc)
    if choice == 2:
        kind = ("lo_shelf", "hi_shelf")[int(rng.integers(0, 2))]
        return wp.design_shelf(kind, fc, gain_db=float(rng.uniform(-6, 6)))
    return wp.design_peaking(fc, gain_db=float(rng.uniform(-6, 6)), q=float(rng.uniform(0.5, 2.0)))


def oracle_cascade(filt: wp.IirFilter, x: np.ndarray) -> np.ndarray:
    """Section-chained oracle reference for a cascade over one channel."""
    y = np.asarray(x, dtype=np.float64)
    for s in filt.sections:
        y = wp.iir_oracle([s.b0, s.b1, s.b2], [1.0, s.a1, s.a2], y)
    return y * filt.overall_gain
