import math

import pytest

import sdmaq


def upper_gamma(m, x):
    # finite Poisson-tail series, independent of the extension
    return math.exp(-x) * sum(x**n / math.factorial(n) for n in range(m))


def test_departure_rate_matches_series():
    p = sdmaq.SystemParams(4, 10.0, 3.0)
    for k in range(1, 5):
        assert sdmaq.departure_rate(p, k) == pytest.approx(upper_gamma(4 - k + 1, k * 3.0 / 10.0), rel=1e-12)
    assert sdmaq.departure_rates(p)[0] == 0.0


def test_polytope_document():
    p = sdmaq.SystemParams(2, 10.0, 3.0)
    doc = sdmaq.stability_polytope(p)
    assert set(doc) >= {"params", "index_set", "d", "vertices", "max_sum_rate"}
    assert 0 in doc["index_set"]
    d1 = upper_gamma(2, 0.3)
    assert [d1, 0.0] in doc["vertices"]
    assert sdmaq.contains(p, [0.5 * d1, 0.0])
    assert not sdmaq.contains(p, [1.01 * d1, 1.01 * d1])


def test_decompose_weights_sum_to_one():
    p = sdmaq.SystemParams(3, 10.0, 3.0)
    w = sdmaq.decompose(p, [0.1, 0.1, 0.1])
    assert len(w) == 8
    assert sum(w) == pytest.approx(1.0)
    assert min(w) >= 0.0


def test_max_weight_skips_empty_queues():
    p = sdmaq.SystemParams(3, 10.0, 3.0)
    assert sdmaq.max_weight_decision(p, [0, 0, 0]) == [0, 0, 0]
    assert sdmaq.max_weight_decision(p, [0, 5, 0]) == [0, 1, 0]


def test_feedback_budget():
    p = sdmaq.SystemParams(3, 10.0, 3.0)
    b = sdmaq.feedback_bits_for_delta(p, 0.1)
    kappa = 2 * math.log2(3 * (1 + 9.0) * (1 + 0.3))
    assert b["kappa"] == pytest.approx(kappa)
    assert b["bits_real"] == pytest.approx(-2 * math.log2(0.1) + kappa)
    assert b["bits"] == math.ceil(b["bits_real"])
    assert sdmaq.delta_for_bits(p, b["bits_real"]) == pytest.approx(0.1)


def test_pk_and_kingman():
    lam, mu = 0.5, 0.8
    assert sdmaq.pk_average_delay(lam, mu) == pytest.approx(lam * (2 - mu) / (2 * mu * (mu - lam)))
    k = sdmaq.kingman_exponent(mu, "exponential", lam)
    r = k["exponent"]
    assert mu * lam / (lam + r) - math.exp(-r) + 1 - mu == pytest.approx(0.0, abs=1e-10)
    assert sdmaq.perturbation_coefficient(mu, r, "exponential", lam) > 0


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        sdmaq.SystemParams(0, 1.0, 1.0)
    with pytest.raises(sdmaq.NumericError):
        sdmaq.pk_average_delay(0.9, 0.8)


def test_single_queue_simulation():
    m = sdmaq.single_queue(0.3, 0.6, horizon=20000, seed=3)
    assert m["verdict"] in {"stable", "inconclusive"}
    assert len(m["waits"]) > 1000
    again = sdmaq.single_queue(0.3, 0.6, horizon=20000, seed=3)
    assert again["waits"] == m["waits"]


def test_limited_feedback_simulation_runs():
    p = sdmaq.SystemParams(3, 10.0, 3.0)
    m = sdmaq.simulate(p, [0.05], csi="sphere-cap", bits=10, horizon=5000, seed=7)
    assert len(m["mean_queue_length"]) == 3
    est = sdmaq.estimate_departure_rate(p, 2, slots=20000, seed=1)
    assert est["estimate"] == pytest.approx(sdmaq.departure_rate(p, 2), abs=5 * est["std_error"] + 1e-3)
