import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigcast.causal import (
    CausalParams,
    causal_fit,
    causal_forecast,
    gram_matrix,
    moving_average,
    qstar,
    regularized_solve,
    sinc,
    synthesize_causal,
)
from sigcast.series import Window

SMALL = CausalParams(n_harmonics=6)  # 13 coefficients, keeps brute force cheap


def qstar_bruteforce(z, params, t_start):
    """Direct double-loop evaluation of the projection."""
    n = params.n_harmonics
    out = np.zeros(2 * n + 1)
    for ki, k in enumerate(range(-n, n + 1)):
        acc = 0.0
        for ti, zt in enumerate(z):
            t = t_start + ti
            acc += math.sin(k * math.pi + params.omega * t) / (k * math.pi + params.omega * t) * zt \
                if (k * math.pi + params.omega * t) != 0 else zt
        out[ki] = (params.omega / math.pi) * acc
    return out


def gram_bruteforce(window, params):
    n = params.n_harmonics
    size = 2 * n + 1
    out = np.zeros((size, size))
    ts = range(window.q, window.s + 1)
    for ki, k in enumerate(range(-n, n + 1)):
        for mi, m in enumerate(range(-n, n + 1)):
            acc = 0.0
            for t in ts:
                acc += float(sinc(k * math.pi + params.omega * t)) * float(
                    sinc(m * math.pi + params.omega * t)
                )
            out[ki, mi] = (params.omega / math.pi) ** 2 * acc
    return out


class TestSinc:
    def test_zero(self):
        assert sinc(0.0) == 1.0

    def test_pi(self):
        assert abs(sinc(math.pi)) < 1e-15

    def test_half_pi(self):
        assert sinc(math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-14)

    def test_array(self):
        out = sinc(np.array([0.0, math.pi]))
        assert out[0] == 1.0 and abs(out[1]) < 1e-15


class TestMovingAverage:
    def test_constant_unchanged(self):
        z = np.full(10, 3.5)
        assert np.array_equal(moving_average(z, 5), z)

    def test_impulse_center(self):
        out = moving_average([0.0, 0, 0, 5, 0, 0, 0], 5)
        assert out[3] == 1.0

    def test_interior_matches_direct_mean(self):
        rng = np.random.default_rng(0)
        z = rng.normal(size=40)
        out = moving_average(z, 5)
        for i in range(2, 38):
            assert out[i] == pytest.approx(np.mean(z[i - 2 : i + 3]), rel=1e-14)

    def test_edges_use_truncated_window(self):
        z = np.arange(8.0)
        out = moving_average(z, 5)
        assert out[0] == pytest.approx(np.mean(z[:3]))
        assert out[1] == pytest.approx(np.mean(z[:4]))
        assert out[-1] == pytest.approx(np.mean(z[-3:]))

    def test_even_width_rejected(self):
        with pytest.raises(ValueError):
            moving_average(np.zeros(10), 4)

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            moving_average(np.zeros(3), 5)


class TestQstar:
    def test_zero_window(self):
        out = qstar(np.zeros(20), SMALL, t_start=1)
        assert np.array_equal(out, np.zeros(13))

    def test_single_sample_at_origin_picks_k0(self):
        out = qstar([1.0], SMALL, t_start=0)
        expect = np.zeros(13)
        expect[6] = SMALL.omega / math.pi  # sinc(k*pi) = delta_k0
        assert np.allclose(out, expect, atol=1e-15)

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(1)
        z = rng.normal(size=13)
        got = qstar(z, SMALL, t_start=1)
        want = qstar_bruteforce(z, SMALL, t_start=1)
        assert np.allclose(got, want, rtol=1e-11, atol=1e-13)

    def test_full_size_matches_bruteforce(self):
        rng = np.random.default_rng(2)
        params = CausalParams()
        z = rng.normal(size=91)
        got = qstar(z, params, t_start=1)
        want = qstar_bruteforce(z, params, t_start=1)
        assert np.allclose(got, want, rtol=1e-11, atol=1e-12)


class TestGramMatrix:
    def test_bitwise_symmetric(self):
        gram = gram_matrix(Window(1, 91), CausalParams())
        assert np.array_equal(gram, gram.T)

    def test_single_sample_rank_one(self):
        gram = gram_matrix(Window(0, 0), SMALL)
        expect = np.zeros((13, 13))
        expect[6, 6] = (SMALL.omega / math.pi) ** 2
        assert np.allclose(gram, expect, atol=1e-15)

    def test_matches_bruteforce(self):
        win = Window(1, 13)
        got = gram_matrix(win, SMALL)
        want = gram_bruteforce(win, SMALL)
        assert np.allclose(got, want, rtol=1e-11, atol=1e-13)

    def test_psd_random_windows(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            q = int(rng.integers(-50, 50))
            length = int(rng.integers(1, 40))
            gram = gram_matrix(Window(q, q + length - 1), SMALL)
            assert np.linalg.eigvalsh(gram).min() >= -1e-10

    def test_cache_returns_consistent_values(self):
        a = gram_matrix(Window(1, 20), SMALL)
        b = gram_matrix(Window(1, 20), SMALL)
        assert np.array_equal(a, b)


class TestRegularizedSolve:
    def test_zero_matrix(self):
        b = np.array([1.0, -2.0, 3.0])
        assert np.allclose(regularized_solve(np.zeros((3, 3)), 1.0, b), b)

    def test_identity_matrix(self):
        b = np.full(4, 2.0)
        got = regularized_solve(np.eye(4), 1.0, b)
        assert np.allclose(got, np.ones(4))

    def test_matches_independent_solver(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(30, 30))
        gram = a.T @ a  # SPD-ish
        b = rng.normal(size=30)
        got = regularized_solve(gram, 0.1, b)
        want, *_ = np.linalg.lstsq(gram + 0.1 * np.eye(30), b, rcond=None)  # SVD route
        assert np.allclose(got, want, rtol=1e-8, atol=1e-10)

    def test_residual_bound(self):
        gram = gram_matrix(Window(1, 91), CausalParams())
        rng = np.random.default_rng(5)
        b = rng.normal(size=91)
        y = regularized_solve(gram, 0.1, b)
        resid = np.linalg.norm((gram + 0.1 * np.eye(91)) @ y - b)
        assert resid < 1e-8 * np.linalg.norm(b)

    def test_nonfinite_rejected(self):
        gram = np.eye(2)
        with pytest.raises(ValueError):
            regularized_solve(gram, 1.0, np.array([np.nan, 0.0]))

    def test_never_fails_on_real_window_grams(self):
        # nu >= 0.1 bounds the condition number for any window geometry
        rng = np.random.default_rng(10)
        params = CausalParams()
        for _ in range(10):
            q = int(rng.integers(-200, 200))
            length = int(rng.integers(1, 92))
            gram = gram_matrix(Window(q, q + length - 1), params)
            b = rng.normal(size=gram.shape[0])
            y = regularized_solve(gram, 0.1, b)
            assert np.all(np.isfinite(y))


class TestSynthesizeCausal:
    def test_zero_coeffs(self):
        fit = causal_fit(np.zeros(13), SMALL)
        out = synthesize_causal(fit, range(1, 5), SMALL)
        assert np.allclose(out, 0.0)

    def test_single_harmonic(self):
        from sigcast.causal import CausalCoefficients

        y = np.zeros(13)
        y[6] = 1.0  # k = 0
        coeffs = CausalCoefficients(y=y, window_mean=0.0, tail_mean=0.0)
        ts = np.array([0.0, 1.0, 2.0])
        got = synthesize_causal(coeffs, ts, SMALL)
        want = (SMALL.omega / math.pi) * sinc(SMALL.omega * ts)
        assert np.allclose(got, want, rtol=1e-14)

    def test_matches_direct_sum(self):
        from sigcast.causal import CausalCoefficients

        rng = np.random.default_rng(6)
        y = rng.normal(size=13)
        coeffs = CausalCoefficients(y=y, window_mean=0.0, tail_mean=0.0)
        ts = [2, 5, 9]
        got = synthesize_causal(coeffs, ts, SMALL)
        for out, t in zip(got, ts):
            direct = sum(
                y[ki] * (SMALL.omega / math.pi) * float(sinc(k * math.pi + SMALL.omega * t))
                for ki, k in enumerate(range(-6, 7))
            )
            assert out == pytest.approx(direct, rel=1e-12)


class TestCausalForecast:
    def test_constant_history_returns_level_exactly(self):
        fc = causal_forecast(np.full(91, 7.25), 5)
        assert np.array_equal(fc, np.full(5, 7.25))

    def test_constant_history_general_level(self):
        fc = causal_forecast(np.full(91, 23.1), 3)
        assert np.allclose(fc, 23.1, rtol=1e-12)

    def test_wrong_history_length(self):
        with pytest.raises(ValueError, match="91"):
            causal_forecast(np.zeros(90), 2)

    def test_level_equivariance(self):
        rng = np.random.default_rng(7)
        hist = rng.normal(20.0, 3.0, 91)
        base = causal_forecast(hist, 4)
        for shift in (-5.0, 0.125, 100.0):
            shifted = causal_forecast(hist + shift, 4)
            assert np.max(np.abs(shifted - base - shift)) < 1e-9

    def test_in_band_sinusoid_characterization(self):
        """Behavior on sin(0.1 t), t = 1..91, pinned from oracle runs.

        At the code defaults (nu = 0.1) the Tikhonov term shrinks the
        in-band coefficients by a factor nu/(nu + omega/pi) ~ 0.29, so the
        in-window reconstruction carries a ~28% relative error. Dropping nu
        to 0.01 restores the representation (< 5% error), confirming the
        sinc basis spans the band.
        """
        t = np.arange(1, 92, dtype=float)
        hist = np.sin(0.1 * t)

        fit_default = causal_fit(moving_average(hist, 5), CausalParams())
        recon = synthesize_causal(fit_default, range(1, 92), CausalParams()) + fit_default.window_mean
        rel_default = np.linalg.norm(recon - hist) / np.linalg.norm(hist)
        assert 0.25 < rel_default < 0.32  # frozen: 0.2797

        light = CausalParams(nu=0.01)
        fit_light = causal_fit(moving_average(hist, 5), light)
        recon_light = synthesize_causal(fit_light, range(1, 92), light) + fit_light.window_mean
        rel_light = np.linalg.norm(recon_light - hist) / np.linalg.norm(hist)
        assert rel_light < 0.05  # frozen: 0.0498

    def test_in_band_sinusoid_forecast_tracks_level(self):
        """Two-step error against the analytic continuation, pinned.

        The tail-mean re-centering keeps the forecast at the recent local
        level, which costs ~0.3 amplitude units against sin's continuation
        at this phase; scaled by the window signal norm the error stays
        below 10%.
        """
        t = np.arange(1, 92, dtype=float)
        hist = np.sin(0.1 * t)
        truth = np.sin(0.1 * np.array([92.0, 93.0]))
        fc = causal_forecast(hist, 2)
        scaled = np.linalg.norm(fc - truth) / np.linalg.norm(hist)
        assert scaled < 0.10  # frozen: 0.0678
        assert np.max(np.abs(fc - truth)) < 0.45  # frozen: 0.3586

    def test_presmoothed_window_skips_internal_smoothing(self):
        rng = np.random.default_rng(8)
        hist = rng.normal(size=91)
        sm = moving_average(hist, 5)
        via_arg = causal_forecast(hist, 3, presmoothed=sm)
        direct = causal_forecast(hist, 3)
        assert np.array_equal(via_arg, direct)

        other = moving_average(np.concatenate([hist, [50.0] * 4]), 5)[:91]
        assert not np.array_equal(causal_forecast(hist, 3, presmoothed=other), direct)


class TestCausalParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"omega": 0.0},
            {"omega": 4.0},
            {"nu": 0.0},
            {"n_harmonics": 0},
            {"ma_width": 4},
            {"ma_width": -1},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            CausalParams(**kwargs)

    def test_code_defaults(self):
        p = CausalParams()
        assert p.omega == pytest.approx(math.pi / 4)
        assert p.nu == 0.1
        assert p.n_harmonics == 45
        assert p.ma_width == 5
        assert p.window_len == 91


@given(
    shift=st.floats(-50, 50, allow_nan=False),
    seed=st.integers(0, 2**16),
)
@settings(max_examples=20, deadline=None)
def test_level_equivariance_property(shift, seed):
    rng = np.random.default_rng(seed)
    hist = rng.normal(0.0, 2.0, 91)
    base = causal_forecast(hist, 3)
    shifted = causal_forecast(hist + shift, 3)
    assert np.max(np.abs(shifted - base - shift)) < 1e-9
