from __future__ import annotations

import pytest
from hypothesis import settings

from scanlaw.distributions import make_distribution

settings.register_profile("scanlaw", deadline=None, max_examples=60)
settings.load_profile("scanlaw")

CATALOG = {
    "gaussian": {"family": "gaussian"},
    "bernoulli_symmetric": {"family": "bernoulli_symmetric"},
    "bernoulli_0.3": {"family": "bernoulli", "params": {"p": 0.3}},
    "bernoulli_0.75": {"family": "bernoulli", "params": {"p": 0.75}},
    "uniform": {"family": "uniform_pm_sqrt3"},
    "exponential": {"family": "exponential_std"},
    "poisson": {"family": "poisson_std", "params": {"rate": 2.0}},
    "binomial_conv": {
        "family": "binomial_convolution",
        "params": {"base": {"family": "bernoulli", "params": {"p": 0.3}}, "m": 3},
    },
    "tabulated": {"family": "tabulated", "params": {"atoms": [[-1.0, 0.2], [0.0, 0.5], [2.0, 0.3]]}},
    "jittered": {
        "family": "jittered",
        "params": {"base": {"family": "bernoulli", "params": {"p": 0.3}}, "width": 0.5},
    },
}

LATTICE_BERNOULLI = ["bernoulli_symmetric", "bernoulli_0.3", "bernoulli_0.75", "binomial_conv", "tabulated"]


def dist(name: str):
    return make_distribution(CATALOG[name])


@pytest.fixture(params=sorted(CATALOG))
def any_dist(request):
    return dist(request.param)


# criterion number -> list of (ok, detail) recorded by the acceptance tests
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        verdict = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {k:2d}: {verdict} | {detail}")
