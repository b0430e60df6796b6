import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import wavepipe as wp

FS = 44100

# Reference (b, a) polynomials computed with an independent design tool and
# frozen; our cascades are expanded by polynomial multiplication to compare.
REF_CHEBY1_4_1DB_2000 = (
    [8.898545271346152e-05, 0.00035594181085384606, 0.0005339127162807691,
     0.00035594181085384606, 8.898545271346152e-05],
    [1.0, -3.651712987704756, 5.082417591635586, -3.191498904811017, 0.7623917940019291],
)
REF_BUTTER_4_1000 = (
    [2.1520951214109304e-05, 8.608380485643722e-05, 0.00012912570728465582,
     8.608380485643722e-05, 2.1520951214109304e-05],
    [1.0, -3.627844202190272, 4.95122513325103, -3.0119242815053817, 0.6888876856640502],
)

# Audio-EQ cookbook low shelf (fc=2000, gain=-6 dB, q=0.707, fs=44100),
# evaluated by hand from the cookbook formulas and frozen.
REF_LO_SHELF = (
    [0.9331406285426834, -1.5516066139004616, 0.6643406183509267],
    [1.0, -1.5287779671849073, 0.6203098936091647],
)


def expand_ba(filt: wp.IirFilter):
    b = np.array([filt.overall_gain])
    a = np.array([1.0])
    for s in filt.sections:
        b = np.polymul(b, [s.b0, s.b1, s.b2])
        a = np.polymul(a, [1.0, s.a1, s.a2])
    # sections are padded with trailing zero coefficients for odd orders
    return np.trim_zeros(b, "b"), np.trim_zeros(a, "b")


def mag_db(filt, freqs):
    return 20.0 * np.log10(np.abs(wp.frequency_response(filt, freqs)))


class TestButterworth:
    def test_first_order_quarter_fs_by_hand(self):
        # prewarped analog cutoff at fs/4 makes the bilinear transform collapse
        # to H(z) = (1 + z^-1) / 2
        f = wp.design_butterworth("lowpass", 1, 11025, FS)
        assert len(f.sections) == 1
        s = f.sections[0]
        folded = np.array([s.b0, s.b1, s.b2]) * f.overall_gain
        np.testing.assert_allclose(folded, [0.5, 0.5, 0.0], atol=1e-12)
        np.testing.assert_allclose([s.a1, s.a2], [0.0, 0.0], atol=1e-12)

    def test_matches_reference_tool(self):
        b, a = expand_ba(wp.design_butterworth("lowpass", 4, 1000, FS))
        np.testing.assert_allclose(b, REF_BUTTER_4_1000[0], rtol=0, atol=1e-8)
        np.testing.assert_allclose(a, REF_BUTTER_4_1000[1], rtol=0, atol=1e-8)

    @pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 8])
    def test_dc_gain_exactly_one(self, order):
        f = wp.design_butterworth("lowpass", order, 1000, FS)
        assert abs(wp.frequency_response(f, [0.0])[0]) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("order", [2, 4, 8])
    def test_half_power_at_cutoff(self, order):
        f = wp.design_butterworth("lowpass", order, 1000, FS)
        assert abs(wp.frequency_response(f, [1000.0])[0]) == pytest.approx(1 / math.sqrt(2), abs=1e-9)

    def test_highpass_nyquist_gain_one(self):
        f = wp.design_butterworth("highpass", 4, 1000, FS)
        assert abs(wp.frequency_response(f, [FS / 2])[0]) == pytest.approx(1.0, abs=1e-12)
        assert abs(wp.frequency_response(f, [0.0])[0]) == pytest.approx(0.0, abs=1e-12)

    def test_monotone_magnitude(self):
        f = wp.design_butterworth("lowpass", 2, 1000, FS)
        freqs = np.linspace(0, FS / 2, 512)
        mags = np.abs(wp.frequency_response(f, freqs))
        assert np.all(np.diff(mags) <= 1e-12)

    def test_order_doubling_is_magnitude_squared(self):
        single = wp.design_butterworth("lowpass", 3, 1000, FS)
        doubled = wp.IirFilter.from_sections(
            single.sections + single.sections, fs=FS,
            overall_gain=single.overall_gain**2,
        )
        freqs = np.geomspace(10, FS / 2, 64)
        np.testing.assert_allclose(
            np.abs(wp.frequency_response(doubled, freqs)),
            np.abs(wp.frequency_response(single, freqs)) ** 2,
            rtol=0, atol=1e-9,
        )

    def test_sections_ordered_by_ascending_pole_radius(self):
        f = wp.design_butterworth("lowpass", 8, 4000, FS)
        radii = [math.sqrt(abs(s.a2)) for s in f.sections]
        assert radii == sorted(radii)

    def test_bad_args(self):
        with pytest.raises(wp.InvalidOrder):
            wp.design_butterworth("lowpass", 0, 1000, FS)
        with pytest.raises(wp.InvalidCutoff):
            wp.design_butterworth("lowpass", 2, 30000, FS)
        with pytest.raises(wp.InvalidCutoff):
            wp.design_butterworth("lowpass", 2, 0, FS)
        with pytest.raises(wp.InvalidArgument):
            wp.design_butterworth("bandpass", 2, 1000, FS)


class TestChebyshev1:
    def test_matches_reference_tool(self):
        b, a = expand_ba(wp.design_chebyshev1("lowpass", 4, 1.0, 2000, FS))
        np.testing.assert_allclose(b, REF_CHEBY1_4_1DB_2000[0], rtol=0, atol=1e-8)
        np.testing.assert_allclose(a, REF_CHEBY1_4_1DB_2000[1], rtol=0, atol=1e-8)

    @pytest.mark.parametrize("order,ripple", [(2, 0.5), (4, 1.0), (5, 2.0), (7, 1.0)])
    def test_passband_ripple_bounds(self, order, ripple):
        f = wp.design_chebyshev1("lowpass", order, ripple, 2000, FS)
        freqs = np.linspace(0, 2000, 512)
        mags = np.abs(wp.frequency_response(f, freqs))
        floor = 10 ** (-ripple / 20)
        assert np.all(mags <= 1.0 + 1e-9)
        assert np.all(mags >= floor - 1e-9)

    def test_even_order_dc_gain_is_ripple_floor(self):
        f = wp.design_chebyshev1("lowpass", 4, 1.0, 2000, FS)
        dc = abs(wp.frequency_response(f, [0.0])[0])
        assert dc == pytest.approx(10 ** (-1.0 / 20), abs=1e-12)

    def test_cutoff_gain_even_order(self):
        f = wp.design_chebyshev1("lowpass", 4, 1.0, 2000, FS)
        assert abs(wp.frequency_response(f, [2000.0])[0]) == pytest.approx(10 ** (-1.0 / 20), abs=1e-9)

    def test_vanishing_ripple_approaches_butterworth(self):
        # As ripple -> 0 the equiripple design converges pointwise to the
        # maximally flat one anchored at its own half-power frequency
        # (at the ripple-edge cutoff it would converge to an all-pass).
        # Convergence is O(ripple^(1/4)) inside the transition band, so the
        # 1e-3 check probes the pass- and stopband and a separate assertion
        # tracks the full-range error shrinking with ripple.
        def equivalent_halfpower_fc(ripple):
            eps = math.sqrt(10 ** (ripple / 10) - 1)
            stretch = math.cosh(math.acosh(1 / eps) / 4)
            w_analog = 2 * FS * math.tan(math.pi * 1000 / FS)
            return FS / math.pi * math.atan(w_analog * stretch / (2 * FS))

        def max_gap(ripple, freqs):
            cheby = wp.design_chebyshev1("lowpass", 4, ripple, 1000, FS)
            butter = wp.design_butterworth("lowpass", 4, equivalent_halfpower_fc(ripple), FS)
            return np.max(
                np.abs(
                    np.abs(wp.frequency_response(cheby, freqs))
                    - np.abs(wp.frequency_response(butter, freqs))
                )
            )

        fcb = equivalent_halfpower_fc(1e-4)
        probes = np.concatenate([np.geomspace(100, 0.45 * fcb, 5), np.geomspace(3.5 * fcb, 21000, 5)])
        assert max_gap(1e-4, probes) <= 1e-3

        everywhere = np.geomspace(50, 21000, 64)
        gaps = [max_gap(r, everywhere) for r in (1e-1, 1e-2, 1e-3, 1e-4)]
        assert gaps == sorted(gaps, reverse=True)

    def test_bad_ripple(self):
        with pytest.raises(wp.InvalidRipple):
            wp.design_chebyshev1("lowpass", 4, 0.0, 1000, FS)
        with pytest.raises(wp.InvalidRipple):
            wp.design_chebyshev1("lowpass", 4, -1.0, 1000, FS)


class TestShelvesAndPeak:
    def test_zero_gain_shelf_is_identity(self):
        f = wp.design_shelf("hi_shelf", 1000, gain_db=0.0, fs=FS)
        s = f.sections[0]
        np.testing.assert_allclose([s.b0, s.b1, s.b2], [1.0, 0.0, 0.0], atol=1e-12)
        freqs = np.geomspace(1, FS / 2, 32)
        np.testing.assert_allclose(np.abs(wp.frequency_response(f, freqs)), 1.0, atol=1e-12)

    def test_hi_shelf_asymptotes(self):
        f = wp.design_shelf("hi_shelf", 1000, gain_db=6.0, q=0.707, fs=FS)
        assert abs(wp.frequency_response(f, [FS / 2])[0]) == pytest.approx(10 ** (6 / 20), abs=1e-6)
        assert abs(wp.frequency_response(f, [0.0])[0]) == pytest.approx(1.0, abs=1e-6)

    def test_lo_shelf_matches_cookbook_reference(self):
        f = wp.design_shelf("lo_shelf", 2000, gain_db=-6.0, q=0.707, fs=FS)
        s = f.sections[0]
        np.testing.assert_allclose([s.b0, s.b1, s.b2], REF_LO_SHELF[0], rtol=0, atol=1e-10)
        np.testing.assert_allclose([1.0, s.a1, s.a2], REF_LO_SHELF[1], rtol=0, atol=1e-10)

    def test_lo_shelf_dc_gain(self):
        f = wp.design_shelf("lo_shelf", 2000, gain_db=-6.0, q=0.707, fs=FS)
        assert abs(wp.frequency_response(f, [0.0])[0]) == pytest.approx(10 ** (-6 / 20), abs=1e-9)
        assert abs(wp.frequency_response(f, [FS / 2])[0]) == pytest.approx(1.0, abs=1e-9)

    def test_peaking_center_gain(self):
        f = wp.design_peaking(1000, gain_db=12.0, q=1.0, fs=FS)
        assert abs(wp.frequency_response(f, [1000.0])[0]) == pytest.approx(3.98107, abs=1e-4)
        assert abs(wp.frequency_response(f, [0.0])[0]) == pytest.approx(1.0, abs=1e-9)
        assert abs(wp.frequency_response(f, [FS / 2])[0]) == pytest.approx(1.0, abs=1e-9)

    def test_peaking_zero_gain_identity(self):
        f = wp.design_peaking(500, gain_db=0.0, q=2.0, fs=FS)
        s = f.sections[0]
        # numerator collapses onto the denominator, so H(z) = 1 everywhere
        assert s.b0 == pytest.approx(1.0, abs=1e-12)
        assert s.b1 == pytest.approx(s.a1, abs=1e-12)
        assert s.b2 == pytest.approx(s.a2, abs=1e-12)
        freqs = np.geomspace(1, FS / 2, 32)
        np.testing.assert_allclose(np.abs(wp.frequency_response(f, freqs)), 1.0, atol=1e-12)

    def test_peak_cascade_cancellation(self):
        boost = wp.design_peaking(1000, gain_db=9.0, q=1.4, fs=FS)
        cut = wp.design_peaking(1000, gain_db=-9.0, q=1.4, fs=FS)
        freqs = np.geomspace(10, FS / 2, 100)
        product = wp.frequency_response(boost, freqs) * wp.frequency_response(cut, freqs)
        np.testing.assert_allclose(np.abs(product), 1.0, rtol=0, atol=1e-9)

    def test_bad_q(self):
        with pytest.raises(wp.InvalidQ):
            wp.design_peaking(1000, gain_db=3.0, q=0.0, fs=FS)
        with pytest.raises(wp.InvalidQ):
            wp.design_shelf("lo_shelf", 1000, gain_db=3.0, q=-1.0, fs=FS)


class TestFir:
    def test_lowpass_unit_dc_sum(self):
        f = wp.design_fir("lowpass", 101, 1000, "hamming", FS)
        assert np.sum(f.taps) == pytest.approx(1.0, abs=1e-12)

    def test_three_tap_near_nyquist_rect_is_passthrough(self):
        f = wp.design_fir("lowpass", 3, FS / 2 * 0.999, "rect", FS)
        np.testing.assert_allclose(f.taps, [0.0, 1.0, 0.0], atol=1e-2)

    def test_hamming_stopband_attenuation(self):
        f = wp.design_fir("lowpass", 101, 1000, "hamming", FS)
        assert abs(wp.frequency_response(f, [4000.0])[0]) < 10 ** (-50 / 20)

    def test_odd_symmetric_linear_phase(self):
        for kind, fc in [("lowpass", 1000), ("highpass", 4000), ("bandpass", (500, 2000))]:
            f = wp.design_fir(kind, 101, fc, "hamming", FS)
            np.testing.assert_allclose(f.taps, f.taps[::-1], rtol=0, atol=1e-15)

    def test_even_count_lowpass_allowed(self):
        f = wp.design_fir("lowpass", 64, 1000, "hamming", FS)
        assert len(f.taps) == 64
        assert np.sum(f.taps) == pytest.approx(1.0, abs=1e-12)

    def test_highpass_nyquist_gain(self):
        f = wp.design_fir("highpass", 101, 4000, "hamming", FS)
        assert abs(wp.frequency_response(f, [FS / 2])[0]) == pytest.approx(1.0, abs=1e-12)

    def test_bandpass_center_gain(self):
        # 301 taps keep the hamming transition width (~3.3 fs / N) well
        # inside the low band edge
        f = wp.design_fir("bandpass", 301, (1000, 4000), "hamming", FS)
        assert abs(wp.frequency_response(f, [2500.0])[0]) == pytest.approx(1.0, abs=1e-12)
        assert abs(wp.frequency_response(f, [50.0])[0]) < 0.01
        assert abs(wp.frequency_response(f, [16000.0])[0]) < 0.01

    def test_tap_count_errors(self):
        with pytest.raises(wp.InvalidTapCount):
            wp.design_fir("lowpass", 1, 1000, "hamming", FS)
        with pytest.raises(wp.InvalidTapCount):
            wp.design_fir("highpass", 100, 1000, "hamming", FS)
        with pytest.raises(wp.InvalidTapCount):
            wp.design_fir("bandpass", 100, (500, 2000), "hamming", FS)

    def test_bandpass_needs_ordered_pair(self):
        with pytest.raises(wp.InvalidCutoff):
            wp.design_fir("bandpass", 101, (2000, 500), "hamming", FS)
        with pytest.raises(wp.InvalidCutoff):
            wp.design_fir("bandpass", 101, 1000, "hamming", FS)

    def test_unknown_window(self):
        with pytest.raises(wp.InvalidArgument):
            wp.design_fir("lowpass", 11, 1000, "kaiser", FS)


class TestBindingAndResponse:
    @pytest.mark.parametrize(
        "make",
        [
            lambda fs: wp.design_butterworth("lowpass", 4, 1000, fs),
            lambda fs: wp.design_butterworth("highpass", 3, 2000, fs),
            lambda fs: wp.design_chebyshev1("lowpass", 5, 1.0, 3000, fs),
            lambda fs: wp.design_shelf("hi_shelf", 1000, gain_db=3.0, fs=fs),
            lambda fs: wp.design_peaking(800, gain_db=-4.0, q=2.0, fs=fs),
        ],
    )
    def test_unbound_bind_equals_bound_iir(self, make):
        eager = make(FS)
        lazy = make(None).bind(FS)
        assert lazy.overall_gain == eager.overall_gain
        for s1, s2 in zip(lazy.sections, eager.sections):
            assert (s1.b0, s1.b1, s1.b2, s1.a1, s1.a2) == (s2.b0, s2.b1, s2.b2, s2.a1, s2.a2)

    def test_unbound_bind_equals_bound_fir(self):
        eager = wp.design_fir("lowpass", 33, 1000, "blackman", FS)
        lazy = wp.design_fir("lowpass", 33, 1000, "blackman").bind(FS)
        np.testing.assert_array_equal(lazy.taps, eager.taps)

    def test_unbound_nyquist_violation_surfaces_at_bind(self):
        f = wp.design_butterworth("lowpass", 4, 30000)
        with pytest.raises(wp.InvalidCutoff):
            f.bind(FS)

    def test_rebind_conflict(self):
        f = wp.design_butterworth("lowpass", 4, 1000, 48000)
        with pytest.raises(wp.SampleRateMismatch):
            f.bind(44100)

    def test_response_requires_bound(self):
        with pytest.raises(wp.UnboundFilter):
            wp.frequency_response(wp.design_peaking(1000, gain_db=1.0), [100.0])

    def test_response_frequency_range_checked(self):
        f = wp.design_peaking(1000, gain_db=1.0, fs=FS)
        with pytest.raises(wp.FrequencyOutOfRange):
            wp.frequency_response(f, [FS])
        with pytest.raises(wp.FrequencyOutOfRange):
            wp.frequency_response(f, [-1.0])

    def test_identity_section_response(self):
        f = wp.IirFilter.from_sections([wp.BiquadSection(1.0, 0.0, 0.0, 0.0, 0.0)], fs=FS)
        freqs = np.geomspace(1, FS / 2, 16)
        np.testing.assert_array_equal(wp.frequency_response(f, freqs), np.ones(16, dtype=complex))

    def test_pure_delay_fir_response(self):
        f = wp.FirFilter.from_taps([0.0, 1.0], fs=FS)
        freqs = np.array([100.0, 1000.0, 5000.0])
        resp = wp.frequency_response(f, freqs)
        np.testing.assert_allclose(np.abs(resp), 1.0, atol=1e-12)
        np.testing.assert_allclose(np.angle(resp), -2 * np.pi * freqs / FS, atol=1e-12)


class TestStability:
    @given(
        order=st.integers(1, 10),
        fc_frac=st.floats(0.01, 0.49),
        kind=st.sampled_from(["lowpass", "highpass"]),
    )
    def test_butterworth_sections_satisfy_triangle(self, order, fc_frac, kind):
        f = wp.design_butterworth(kind, order, fc_frac * FS, FS)
        for s in f.sections:
            assert abs(s.a2) < 1.0
            assert abs(s.a1) < 1.0 + s.a2

    @given(
        order=st.integers(1, 8),
        ripple=st.floats(0.01, 3.0),
        fc_frac=st.floats(0.01, 0.49),
    )
    def test_chebyshev_sections_satisfy_triangle(self, order, ripple, fc_frac):
        f = wp.design_chebyshev1("lowpass", order, ripple, fc_frac * FS, FS)
        for s in f.sections:
            assert abs(s.a2) < 1.0
            assert abs(s.a1) < 1.0 + s.a2

    def test_unstable_raw_section_rejected(self):
        with pytest.raises(wp.InvalidCoefficients):
            wp.BiquadSection(1.0, 0.0, 0.0, 0.0, 1.0)
        with pytest.raises(wp.InvalidCoefficients):
            wp.BiquadSection(1.0, 0.0, 0.0, -2.05, 1.05)
