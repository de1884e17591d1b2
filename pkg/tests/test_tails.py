from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from conftest import LATTICE_BERNOULLI, dist
from scanlaw.errors import ArgumentError, CapabilityError
from scanlaw.tails import (
    TailQuery,
    bahadur_rao_tail,
    chernoff_bound,
    cramer_tail,
    exact_tail,
    gaussian_sf,
    importance_tail,
    lattice_walk_pmf,
)


def symmetric_walk_tail(k, level, strict=True):
    """P[S_k > level] (or >=) for the +-1 walk via the binomial law."""
    # S_k = 2B - k with B ~ Bin(k, 1/2)
    b = (level + k) / 2
    cut = math.floor(b) if strict else math.ceil(b) - 1
    return float(stats.binom.sf(cut, k, 0.5))


def test_tail_query_validation():
    with pytest.raises(ArgumentError):
        TailQuery(0, 1.0)
    with pytest.raises(ArgumentError):
        TailQuery(5, 0.0)
    assert TailQuery(100, 3.0).level == pytest.approx(0.3)


def test_gaussian_sf_accuracy():
    assert gaussian_sf(10.0) == pytest.approx(stats.norm.sf(10.0), rel=1e-13)
    assert gaussian_sf(0.0) == 0.5


def test_cramer_gaussian_reference():
    est = cramer_tail(dist("gaussian"), TailQuery(100, 3.0))
    assert est.value == pytest.approx(math.exp(-4.5) / (math.sqrt(2 * math.pi) * 3), rel=1e-12)
    assert est.value == pytest.approx(0.0014773, rel=1e-4)
    assert not est.warnings


@given(x=st.floats(min_value=0.01, max_value=8.0), k=st.integers(min_value=1, max_value=10**6))
def test_cramer_series_is_exact_for_gaussian(x, k):
    est = cramer_tail(dist("gaussian"), TailQuery(k, x), form="series")
    assert est.value == pytest.approx(gaussian_sf(x), rel=1e-12)


def test_cramer_symmetric_bernoulli_against_binomial():
    est = cramer_tail(dist("bernoulli_symmetric"), TailQuery(400, 2.0)).value
    # the continuous approximation sits between the strict and non-strict lattice tails
    non_strict = symmetric_walk_tail(400, 40, strict=False)
    assert abs(est / non_strict - 1) < 0.15
    assert exact_tail(dist("bernoulli_symmetric"), TailQuery(400, 2.0)) == pytest.approx(
        symmetric_walk_tail(400, 40, strict=True), rel=1e-10
    )


def test_cramer_regime_and_clt_flags():
    est = cramer_tail(dist("bernoulli_symmetric"), TailQuery(10**6, 1e-8))
    assert math.isfinite(est.value)
    assert any("clt" in w for w in est.warnings)
    est = cramer_tail(dist("bernoulli_symmetric"), TailQuery(100, 20.0))
    assert any("regime" in w for w in est.warnings)


def test_bahadur_rao_gaussian():
    est = bahadur_rao_tail(dist("gaussian"), TailQuery(100, 10.0)).value
    assert est == pytest.approx(math.exp(-50) / math.sqrt(2 * math.pi * 100), rel=1e-12)
    assert abs(est / gaussian_sf(10.0) - 1) < 0.1


def test_bahadur_rao_rejects_lattice():
    with pytest.raises(CapabilityError):
        bahadur_rao_tail(dist("bernoulli_symmetric"), TailQuery(10, 1.0))


def test_bahadur_rao_bias_decays_like_inverse_k():
    d = dist("uniform")
    errs = {}
    for k in (25, 50, 200):
        q = TailQuery(k, 0.5 * math.sqrt(k))
        mean, se = importance_tail(d, q, 200_000, seed=k)
        errs[k] = bahadur_rao_tail(d, q).value / mean - 1
        assert se / mean < 0.01
    assert errs[25] > errs[50] > errs[200] > 0
    assert errs[200] < 0.05
    for k, e in errs.items():
        assert 2.0 < k * e < 4.5


def test_chernoff_reference_values():
    assert chernoff_bound(dist("gaussian"), TailQuery(4, 2.0)) == pytest.approx(math.exp(-2), rel=1e-12)
    d = dist("bernoulli_symmetric")
    assert chernoff_bound(d, TailQuery(10, math.sqrt(10))) == pytest.approx(2.0**-10, rel=1e-12)
    assert chernoff_bound(d, TailQuery(10, 2 * math.sqrt(10))) == 0.0


@pytest.mark.parametrize("name", LATTICE_BERNOULLI)
@given(k=st.integers(min_value=1, max_value=64), frac=st.floats(min_value=0.01, max_value=1.2))
def test_chernoff_dominates_exact(name, k, frac):
    d = dist(name)
    x = frac * d.sup * math.sqrt(k)
    q = TailQuery(k, x)
    assert chernoff_bound(d, q) >= exact_tail(d, q) * (1 - 1e-12)


@pytest.mark.parametrize("name", LATTICE_BERNOULLI)
def test_lattice_pmf_is_a_distribution(name):
    d = dist(name)
    values, probs = d.atoms()
    base, span, pmf = lattice_walk_pmf(values, probs, 37, d.lattice().span)
    assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
    support = base + span * np.arange(len(pmf))
    assert float(pmf @ support) == pytest.approx(0.0, abs=1e-9)
    assert float(pmf @ support**2) == pytest.approx(37.0, rel=1e-10)


def test_exact_tail_needs_lattice():
    with pytest.raises(CapabilityError):
        exact_tail(dist("gaussian"), TailQuery(3, 1.0))


def test_importance_sampling_matches_exact_lattice_tail():
    d = dist("bernoulli_0.3")
    q = TailQuery(100, 3.0)
    mean, se = importance_tail(d, q, 200_000, seed=3)
    assert abs(mean - exact_tail(d, q)) < 4 * se


def test_cramer_ratio_improves_with_k():
    d = dist("bernoulli_symmetric")
    ratios = []
    for k in (100, 1000, 10_000):
        q = TailQuery(k, k**0.3)
        ratios.append(cramer_tail(d, q).value / exact_tail(d, q))
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)
    assert 0.8 <= ratios[-1] <= 1.25
