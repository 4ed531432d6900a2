import json
import math

import numpy as np
import pytest
from scipy.stats import chi2, chisquare

from fourphoton import DegenerateInputError, DomainError, EmptyRunError, MomentResult, PreconditionError, chi_quadrature
from fourphoton._parallel import THREADS_ENV, ordered_map, worker_count
from fourphoton.coincidence import (
    ExperimentConfig,
    appendix_rates,
    estimate_ratio,
    simulate_pulse_train,
    verify_time_structure,
)
from fourphoton.errors import HighGainWarning
from fourphoton.moments import chi_closed_form, gaussian_setup


def run(**kwargs):
    config = ExperimentConfig(**kwargs)
    hist = simulate_pulse_train(config)
    return config, hist, estimate_ratio(hist, config)


# --- configuration ------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [
    {"p2": -0.1}, {"p2": 1.2}, {"chi": 1.5}, {"chi": -0.1}, {"pulses": -1}, {"pulses": 2.5},
    {"seed": 2**64}, {"seed": -1}, {"eta": 0.0}, {"eta": 1.1}, {"dark": 1.0},
    {"bin_ns": 2.0}, {"peak_halfwidth_ns": 4.0}, {"peak_halfwidth_ns": 0.01}, {"batches": 0},
])
def test_config_rejects(kwargs):
    base = {"p2": 0.1, "chi": 0.5, "pulses": 10}
    with pytest.raises(DomainError):
        ExperimentConfig(**{**base, **kwargs})


def test_config_rejects_overfull_probabilities():
    with pytest.raises(DomainError):
        ExperimentConfig(p2=0.9, chi=1.0, pulses=10)


def test_high_gain_warns():
    with pytest.warns(HighGainWarning):
        ExperimentConfig(p2=0.5, chi=0.0, pulses=10)


def test_largest_seed_is_accepted():
    run(p2=0.1, chi=0.5, pulses=1000, seed=2**64 - 1)


def test_empty_run():
    with pytest.raises(EmptyRunError):
        simulate_pulse_train(ExperimentConfig(p2=0.1, chi=0.5, pulses=0))


# --- histogram shape ------------------------------------------------------------

def test_peaks_at_zero_and_one_period():
    config, hist, _ = run(p2=0.1, chi=0.5, pulses=200_000, seed=5)
    # without dark counts every coincidence lands exactly on a multiple of the period
    assert set(np.round(hist.centers[hist.counts > 0], 9)) == {-13.0, 0.0, 13.0}
    for order in (-1, 0, 1):
        window = np.abs(hist.centers - 13.0 * order) <= 1.0
        assert hist.centers[window][np.argmax(hist.counts[window])] == pytest.approx(13.0 * order)
    assert hist.peak(0).gross > 0 and hist.peak(1).gross > 0


def test_no_signal_gives_flat_histogram():
    config, hist, _ = run(p2=0.0, chi=0.0, pulses=1_000_000, dark=0.05, seed=11)
    # bins near +-1.5 periods only see one of the two neighbouring pulses
    inner = np.abs(hist.centers) <= config.period_ns
    counts = hist.counts[inner]
    assert counts.sum() > 1000
    assert chisquare(counts).pvalue > 1e-3
    for order in (-1, 0, 1):
        peak = hist.peak(order)
        sigma = math.sqrt(max(peak.gross, 1))
        assert abs(peak.net) < 4 * sigma


def test_histogram_csv():
    _, hist, _ = run(p2=0.1, chi=0.5, pulses=1000, seed=1)
    text = hist.to_csv()
    lines = text.split("\n")
    assert lines[0] == "delay_ns,counts" and text.endswith("\n")
    assert len(lines) == hist.counts.size + 2
    assert sum(int(row.split(",")[1]) for row in lines[1:-1]) == hist.total


# --- determinism ------------------------------------------------------------------

def test_same_seed_same_histogram():
    a = run(p2=0.1, chi=0.3, pulses=50_000, seed=99, eta=0.5, dark=1e-3)
    b = run(p2=0.1, chi=0.3, pulses=50_000, seed=99, eta=0.5, dark=1e-3)
    assert np.array_equal(a[1].counts, b[1].counts)
    assert a[2].to_json() == b[2].to_json()
    c = run(p2=0.1, chi=0.3, pulses=50_000, seed=100, eta=0.5, dark=1e-3)
    assert not np.array_equal(a[1].counts, c[1].counts)


@pytest.mark.parametrize("threads", ["1", "3"])
def test_result_independent_of_threads(monkeypatch, threads):
    reference = run(p2=0.1, chi=0.3, pulses=40_000, seed=4)[1].batch_counts
    monkeypatch.setenv(THREADS_ENV, threads)
    assert worker_count() <= max(int(threads), 1)
    assert np.array_equal(run(p2=0.1, chi=0.3, pulses=40_000, seed=4)[1].batch_counts, reference)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "not-a-number")
    assert worker_count() >= 1
    monkeypatch.setenv(THREADS_ENV, "0")
    assert worker_count() == 1
    assert ordered_map(lambda x: x * x, range(6)) == [0, 1, 4, 9, 16, 25]


# --- ratio estimator -------------------------------------------------------------

@pytest.mark.parametrize("chi", [0.0, 0.5, 0.95])
def test_ratio_estimates_one_plus_chi(chi):
    _, _, summary = run(p2=0.1, chi=chi, pulses=1_000_000, seed=2024)
    assert abs(summary.ratio - (1 + chi)) < 3 * summary.ratio_stderr
    assert summary.ratio_stderr < 0.1


def test_raw_ratio_is_biased_low():
    # the side peak also counts two-pair pulses; the raw ratio falls short of 1 + chi
    _, _, summary = run(p2=0.1, chi=0.5, pulses=1_000_000, seed=3)
    assert summary.ratio_raw < summary.ratio
    assert summary.ratio_raw < 1.5 - 3 * summary.ratio_stderr


def test_ratio_consistent_across_seeds():
    z = []
    central = []
    for seed in range(20):
        _, hist, summary = run(p2=0.1, chi=0.5, pulses=100_000, seed=seed)
        z.append((summary.ratio - 1.5) / summary.ratio_stderr)
        central.append(hist.peak(0).gross)
    z = np.array(z)
    assert np.mean(np.abs(z) < 3) >= 0.9
    assert abs(z.mean()) < 3 / math.sqrt(len(z)) + 0.5
    # seed-to-seed spread of central-peak totals is Poisson-like
    central = np.array(central, dtype=float)
    stat = ((central - central.mean()) ** 2).sum() / central.mean()
    assert 1e-3 < chi2.sf(stat, len(central) - 1) < 1 - 1e-3


def test_summary_json():
    _, _, summary = run(p2=0.1, chi=0.5, pulses=20_000, seed=8)
    data = json.loads(summary.to_json())
    assert data["seed"] == 8 and data["pulses"] == 20_000
    assert set(data) == {"r0", "rside_plus", "rside_minus", "ratio", "ratio_stderr",
                         "ratio_raw", "seed", "pulses"}


# --- peak rates from the moments ----------------------------------------------------

def test_peak_rates_rank_one():
    rates = appendix_rates(MomentResult.from_moments(1.0, 1.0))
    assert (rates.r_c, rates.r_lat, rates.ratio) == (4.0, 1.0, 2.0)


def test_peak_rates_independent_pairs():
    assert appendix_rates(MomentResult.from_moments(1.0, 0.0)).ratio == 1.0


def test_peak_rates_gaussian():
    moments = chi_quadrature(1.0)
    rates = appendix_rates(moments)
    # 1 + chi is stored, so subtracting 1 recovers chi up to one rounding
    assert rates.ratio - 1.0 == pytest.approx(moments.chi, abs=2 * np.finfo(float).eps)
    assert rates.ratio == pytest.approx(1 + 1 / math.sqrt(2), abs=1e-9)
    assert rates.r_c / (2 * rates.r_lat) == pytest.approx(rates.ratio, rel=1e-14)


def test_peak_rates_rejects_zero_j2f():
    with pytest.raises(DegenerateInputError):
        appendix_rates(MomentResult(0.0, 0.0, 0.0))


# --- double-pulse time structure --------------------------------------------------------

@pytest.mark.parametrize("ratio", [1.0, 2.5])
def test_time_structure(ratio):
    amp, filt, config = gaussian_setup(ratio)
    tau = 50.0 / amp.pump.width
    report = verify_time_structure(amp, filt, tau, config.signal_grid, config.idler_grid)
    assert report.passed, report.checks
    assert report.r2[(0.0, tau)] < 1e-3 * report.r2[(0.0, 0.0)]
    assert report.peak_ratio == pytest.approx(1 + chi_closed_form(ratio), rel=1e-3)
    r1 = np.array(list(report.r1.values()))
    assert r1.max() / r1.min() - 1 < 1e-6


def test_time_structure_needs_separated_pulses():
    amp, filt, config = gaussian_setup(1.0)
    with pytest.raises(PreconditionError, match="separated"):
        verify_time_structure(amp, filt, 2.0, config.signal_grid, config.idler_grid)
    with pytest.raises(PreconditionError, match="window"):
        verify_time_structure(amp, filt, 50.0, config.signal_grid, config.idler_grid, window=1.0)
    with pytest.raises(DomainError):
        verify_time_structure(amp, filt, -1.0, config.signal_grid, config.idler_grid)
