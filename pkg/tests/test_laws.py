from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dist
from scanlaw.cgf import CaseReport, classify, golden_max, superlog_constants, total_intensity
from scanlaw.errors import ArgumentError, CapabilityError, DomainError
from scanlaw.laws import (
    GumbelLaw,
    centering_exponents_agree,
    gumbel_law,
    gumbel_location,
    gumbel_scale,
    hitting_cdf,
    hitting_normalization,
    hitting_threshold,
    intensity,
    intensity_integral,
    iterated_log_exponent,
    limit_cdf_msq,
    optimal_length,
    pvalue_m,
)

SQRT_PI = math.sqrt(math.pi)
SUPERLOG_PAIRS = [(4, 1 / 12), (4, 1 / 20), (3, 0.5 / (3 * math.sqrt(0.75)))]


def superlog(q, kappa):
    return CaseReport(case="superlogarithmic", **superlog_constants(q, kappa))


@pytest.fixture(scope="module")
def sym():
    return classify(dist("bernoulli_symmetric"))


@pytest.fixture(scope="module")
def logcase():
    return classify(dist("bernoulli_0.3")).with_hstar(0.5)


def test_location_examples():
    n = 10**4
    assert gumbel_location(superlog(4, 1 / 12), n) == pytest.approx(9.210340372 - 0.5 * 2.220327, abs=1e-6)
    for n in (3, 100, 10**6):
        assert gumbel_location(superlog(6, 0.01), n) == pytest.approx(math.log(n), rel=1e-15)
    case = CaseReport(case="logarithmic", m_star=1.2)
    assert gumbel_location(case, round(math.exp(10))) == pytest.approx(1.2 * math.log(round(math.exp(10))))
    assert gumbel_scale(case) == 1.2
    assert gumbel_location(case, 22026) == pytest.approx(12.0, abs=1e-4)


def test_location_rejects_other_cases_and_small_n(sym):
    with pytest.raises(CapabilityError):
        gumbel_location(classify(dist("gaussian")), 100)
    with pytest.raises(CapabilityError):
        gumbel_location(classify(dist("exponential")), 100)
    with pytest.raises(ArgumentError):
        gumbel_location(sym, 2)


@pytest.mark.parametrize("q", range(3, 21))
def test_two_centerings_agree(q):
    assert centering_exponents_agree(q)
    p = q / (q - 2)
    n = 12345
    alt = math.log(n * math.log(n) ** (1.5 - p))
    assert gumbel_location(superlog(q, 0.1), n) == pytest.approx(alt, rel=1e-14)


def test_cdf_reference_points(sym):
    n = 10**4
    lam = 3.0 / (2.0 * SQRT_PI)
    assert sym.lambda_total == pytest.approx(lam, rel=1e-14)
    a_n = gumbel_location(sym, n)
    assert limit_cdf_msq(2 * a_n, sym, n) == pytest.approx(math.exp(-lam), rel=1e-14)
    assert limit_cdf_msq(2 * (a_n + 1), sym, n) == pytest.approx(math.exp(-lam / math.e), rel=1e-14)
    assert limit_cdf_msq(-1e6, sym, n) == pytest.approx(0.0, abs=1e-300)
    assert limit_cdf_msq(1e6, sym, n) == 1.0


@pytest.mark.parametrize("n", [3, 100, 10**4, 10**8])
def test_cdf_is_monotone_onto_unit_interval(sym, logcase, n):
    for case in (sym, logcase):
        a_n = gumbel_location(case, n)
        x = 2 * a_n + np.linspace(-60, 200, 10_000) * gumbel_scale(case)
        f = limit_cdf_msq(x, case, n)
        assert np.all(np.diff(f) >= 0)
        assert f[0] < 1e-12 and f[-1] > 1 - 1e-12
        assert np.all((f >= 0) & (f <= 1))


def test_pvalue_examples(sym):
    n = 10**4
    a_n = gumbel_location(sym, n)
    lam = sym.lambda_total
    assert pvalue_m(math.sqrt(2 * a_n), sym, n) == pytest.approx(1 - math.exp(-lam), rel=1e-12)
    assert pvalue_m(1e-9, sym, n) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ArgumentError):
        pvalue_m(0.0, sym, n)


@given(m=st.floats(min_value=4.5, max_value=12.0))
def test_pvalue_tail_linearization(m):
    case = classify(dist("bernoulli_symmetric"))
    n = 10**4
    p = pvalue_m(m, case, n)
    if p < 0.01:
        tau = m * m / 2 - gumbel_location(case, n)
        assert p == pytest.approx(case.lambda_total * math.exp(-tau), rel=0.01)


def test_pvalue_forms_agree_near_the_centering(sym):
    n = 10**6
    b = math.sqrt(2 * gumbel_location(sym, n))
    assert pvalue_m(b, sym, n, form="linear") == pytest.approx(pvalue_m(b, sym, n), rel=1e-12)
    m = b + 0.05
    assert pvalue_m(m, sym, n, form="linear") == pytest.approx(pvalue_m(m, sym, n), rel=0.01)
    with pytest.raises(ArgumentError):
        pvalue_m(m, sym, n, form="cube")


def test_superlog_intensity_at_peak(sym):
    assert sym.a_star == pytest.approx(1 / 6, rel=1e-12)
    assert intensity(sym, 1 / 6) == pytest.approx(18 / SQRT_PI * math.exp(-2), rel=1e-12)
    assert intensity(sym, 1 / 6) == pytest.approx(1.374386, abs=1e-6)
    assert intensity(sym, 1e-6) == 0.0
    with pytest.raises(DomainError):
        intensity(sym, 0.0)


@pytest.mark.parametrize("q,kappa", SUPERLOG_PAIRS + [(5, 0.03), (8, 0.2)])
def test_intensity_peak_is_a_star(q, kappa):
    case = superlog(q, kappa)
    top = golden_max(lambda a: float(intensity(case, a)), 1e-3, 50.0, tol=1e-12)
    assert top == pytest.approx(case.a_star, abs=1e-8)


@pytest.mark.parametrize("q,kappa", SUPERLOG_PAIRS)
def test_total_intensity_integral(q, kappa):
    case = superlog(q, kappa)
    assert intensity_integral(case, 0.0, math.inf) == pytest.approx(total_intensity(q, kappa), abs=1e-8)


@pytest.mark.parametrize("q,kappa", SUPERLOG_PAIRS)
def test_intensity_integral_is_additive(q, kappa):
    case = superlog(q, kappa)
    whole = intensity_integral(case, 0.1, 10.0)
    parts = intensity_integral(case, 0.1, 1.3) + intensity_integral(case, 1.3, 10.0)
    assert whole == pytest.approx(parts, abs=1e-10)
    assert intensity_integral(case, 2.0, 2.0) == 0.0


def test_log_intensity_integral(logcase):
    closed = (
        math.sqrt(logcase.m_star) * 0.25 / (math.sqrt(2) * logcase.beta_star * logcase.sigma_star)
    )
    assert logcase.theta_total == pytest.approx(closed, rel=1e-14)
    assert intensity_integral(logcase, -math.inf, math.inf) == pytest.approx(closed, abs=1e-10)
    peak = math.sqrt(logcase.m_star) * 0.25 / (2 * SQRT_PI * logcase.sigma_star)
    assert intensity(logcase, 0.0) == pytest.approx(peak, rel=1e-14)


def test_missing_hstar_fails_loudly():
    case = classify(dist("bernoulli_0.3"))
    assert case.h_star is None
    for call in (
        lambda: gumbel_law(case, 100),
        lambda: pvalue_m(3.0, case, 100),
        lambda: intensity(case, 0.0),
        lambda: hitting_cdf(1.0, 3.0, case),
    ):
        with pytest.raises(CapabilityError):
            call()


def test_optimal_length_descriptors(sym, logcase):
    q3 = optimal_length(superlog(3, 0.2), 1000)
    assert q3["p"] == 3
    d = optimal_length(sym, 1000)
    assert d["p"] == 2 and d["peak_a"] == pytest.approx(2 / 12)
    lg = optimal_length(logcase, 1000)
    base = dist("bernoulli_0.3")
    assert logcase.d_star == pytest.approx(1.0 / float(base.cgf(logcase.t_star)), rel=1e-12)
    assert lg["center_length"] == pytest.approx(logcase.d_star * math.log(1000))
    assert optimal_length(classify(dist("exponential")), 1000)["form"] == "O(1)"
    assert optimal_length(classify(dist("gaussian")), 1000)["form"] == "a*log(n)"


def test_hitting_law_examples(sym, logcase):
    u = 4.0
    out = hitting_cdf(1.0 / sym.lambda_total, u, sym)
    assert out["survival"] == pytest.approx(math.exp(-1))
    assert out["alpha"] == iterated_log_exponent(4) == -0.5
    assert out["normalization"] == pytest.approx(math.sqrt(2) / u * math.exp(-u * u / 2), rel=1e-14)
    assert hitting_cdf(1e-12, u, sym)["survival"] == pytest.approx(1.0)
    assert hitting_normalization(u, logcase) == pytest.approx(math.exp(-u * u / (2 * logcase.m_star)))
    u4 = hitting_threshold(logcase, 1e4)
    assert hitting_normalization(u4, logcase) == pytest.approx(1e-4, rel=1e-12)
    with pytest.raises(ArgumentError):
        hitting_cdf(0.0, u, sym)


def test_gumbel_law_json_round_trip(sym):
    law = gumbel_law(sym, 10**5)
    again = GumbelLaw.from_json(law.to_json())
    assert again == law
    x = np.linspace(10, 40, 7)
    assert np.array_equal(again.cdf_msq(x), law.cdf_msq(x))


@given(prob=st.floats(min_value=1e-6, max_value=1 - 1e-9))
def test_quantile_inverts_cdf(prob):
    law = GumbelLaw("superlogarithmic", 0.8, 9.0, 1.0, 10**4)
    assert float(law.cdf_tau(law.ppf_tau(prob))) == pytest.approx(prob, rel=1e-9)
