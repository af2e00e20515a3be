import math

import numpy as np
import pytest
from scipy.integrate import quad

from levylab.errors import ConfigError, PreconditionError
from levylab.estimators import (BoundVerdict, MomentAccumulator,
                                estimate_p_moment, fit_loglog_slope,
                                merge_accumulators)
from levylab.rng import RngStream


def test_constant_samples_have_zero_se():
    est = estimate_p_moment(np.full(100, 2.0), 2.0)
    assert est.value == 4.0
    assert est.standard_error == 0.0


def test_rademacher_any_exponent():
    x = np.where(RngStream(1, 0).generator().random(5000) < 0.5, -1.0, 1.0)
    for p in (1.0, 1.3, 2.0):
        est = estimate_p_moment(x, p)
        assert est.value == 1.0
        assert est.standard_error == 0.0


def test_half_normal_mean_against_quadrature_oracle():
    # oracle: integrate |x| against the standard normal density
    oracle, err = quad(lambda x: 2 * x * math.exp(-x * x / 2) / math.sqrt(2 * math.pi),
                       0, np.inf)
    assert abs(oracle - math.sqrt(2 / math.pi)) < 1e-10
    x = RngStream(2, 0).generator().standard_normal(400_000)
    est = estimate_p_moment(x, 1.0)
    assert abs(est.value - oracle) <= 3 * est.standard_error


def test_vector_samples_use_row_norms():
    xs = np.array([[3.0, 4.0], [3.0, 4.0]])
    est = estimate_p_moment(xs, 2.0)
    assert est.value == 25.0


def test_merge_equals_single_pass_exactly_on_integer_sums():
    gen = RngStream(3, 0).generator()
    chunks = [np.asarray(gen.integers(-3, 4, 1000), dtype=float) for _ in range(7)]
    accs = [MomentAccumulator(2.0).add(c) for c in chunks]
    merged = merge_accumulators(accs).estimate()
    whole = estimate_p_moment(np.concatenate(chunks), 2.0)
    assert merged.value == whole.value
    assert merged.standard_error == whole.standard_error
    assert merged.n_samples == whole.n_samples


def test_merge_matches_single_pass_on_floats():
    gen = RngStream(4, 0).generator()
    chunks = [gen.standard_normal(5000) for _ in range(5)]
    merged = merge_accumulators([MomentAccumulator(1.5).add(c) for c in chunks]).estimate()
    whole = estimate_p_moment(np.concatenate(chunks), 1.5)
    assert merged.value == pytest.approx(whole.value, rel=1e-14)
    assert merged.standard_error == pytest.approx(whole.standard_error, rel=1e-12)


def test_merge_order_is_deterministic():
    gen = RngStream(5, 0).generator()
    chunks = [gen.standard_normal(200) for _ in range(4)]
    a = merge_accumulators([MomentAccumulator(2.0).add(c) for c in chunks]).estimate()
    b = merge_accumulators([MomentAccumulator(2.0).add(c) for c in chunks]).estimate()
    assert a.value == b.value


def test_standard_error_shrinks_like_sqrt_n():
    gen = RngStream(6, 0).generator()
    small = estimate_p_moment(gen.standard_normal(4000), 2.0)
    big = estimate_p_moment(gen.standard_normal(64_000), 2.0)
    ratio = small.standard_error / big.standard_error
    assert 2.8 < ratio < 5.7  # expect 4 = sqrt(16)


def test_root_delta_method():
    est = estimate_p_moment(np.full(10, 9.0), 2.0)
    root = est.root()
    assert root.value == 3.0 and root.standard_error == 0.0
    noisy = estimate_p_moment(RngStream(7, 0).generator().standard_normal(1000) + 5, 2.0)
    r = noisy.root()
    expected_se = noisy.standard_error / (2.0 * math.sqrt(noisy.value))
    assert r.standard_error == pytest.approx(expected_se, rel=1e-12)


def test_empty_input_rejected():
    with pytest.raises(PreconditionError):
        estimate_p_moment(np.array([]), 1.0)
    with pytest.raises(PreconditionError):
        estimate_p_moment(np.ones(3), 0.0)


def test_bound_verdict_slack_policy():
    est = estimate_p_moment(np.full(10, 1.0), 1.0)
    assert BoundVerdict(est, 1.0).passed
    assert not BoundVerdict(est, 0.9).passed
    noisy = estimate_p_moment(np.array([0.8, 1.2, 1.0, 1.0]), 1.0)
    v = BoundVerdict(noisy, noisy.value - 2.0 * noisy.standard_error)
    assert v.passed  # within the 3 SE slack
    assert BoundVerdict(est, 0.9, bound_se=0.05).passed  # bound-side SE counts too


def test_fit_loglog_exact_power_law():
    ns = [1, 2, 4, 8, 16]
    slope, intercept, resid = fit_loglog_slope([(n, n**0.5) for n in ns])
    assert slope == pytest.approx(0.5, abs=1e-12)
    assert resid < 1e-12
    slope, intercept, _ = fit_loglog_slope([(n, 7.3 * n ** (1 / 3)) for n in ns])
    assert slope == pytest.approx(1 / 3, abs=1e-12)
    assert intercept == pytest.approx(math.log(7.3), abs=1e-10)


def test_fit_loglog_rejects_bad_input():
    with pytest.raises(ConfigError):
        fit_loglog_slope([(1, 1.0), (2, 2.0)])
    with pytest.raises(ConfigError):
        fit_loglog_slope([(1, 1.0), (2, -2.0), (4, 3.0)])
    with pytest.raises(ConfigError):
        fit_loglog_slope([(1, 1.0), (1, 2.0), (4, 3.0)])
