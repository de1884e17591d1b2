"""Gumbel limits, scale intensities, p-values and hitting-time laws.

Every law is stored on the tau scale: tau = (M^2/2 - location) / scale and
P[tau <= t] = exp(-mass * exp(-t)).

* superlogarithmic: location = log n + c_q log log n with
  c_q = (q - 6) / (2 (q - 2)), scale 1, mass Lambda_{q,kappa}.
  The alternative form log(n log^{3/2 - p} n) is the same centering:
  3/2 - q/(q-2) = (3(q-2) - 2q) / (2(q-2)) = (q-6)/(2(q-2)).
* logarithmic: location = m* log n, scale m*, mass Theta*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .cgf import CaseReport
from .errors import ArgumentError, CapabilityError, DomainError, NumericError

SQRT_PI = math.sqrt(math.pi)
QUAD_TOL = 1e-10


def iterated_log_exponent(q: int) -> float:
    """Coefficient c_q of log log n in the superlogarithmic centering."""
    return (q - 6) / (2.0 * (q - 2))


def centering_exponents_agree(q: int) -> bool:
    """Exact rational check that (q-6)/(2(q-2)) equals 3/2 - q/(q-2)."""
    q = Fraction(q)
    return (q - 6) / (2 * (q - 2)) == Fraction(3, 2) - q / (q - 2)


def _require_law_case(case: CaseReport) -> None:
    if case.case not in ("superlogarithmic", "logarithmic"):
        raise CapabilityError(f"no quantitative Gumbel law for the {case.case} case")


def _mass(case: CaseReport) -> float:
    _require_law_case(case)
    if case.case == "superlogarithmic":
        return float(case.lambda_total)
    if case.theta_total is None:
        raise CapabilityError("Theta* unavailable: attach an H* estimate to the logarithmic case first")
    return float(case.theta_total)


def _check_n(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise ArgumentError(f"n must be an integer >= 3, got {n!r}")
    return int(n)


def gumbel_location(case: CaseReport, n: int) -> float:
    """Centering of M_n^2 / 2 (on the scale reported by ``gumbel_scale``)."""
    _require_law_case(case)
    n = _check_n(n)
    if case.case == "superlogarithmic":
        return math.log(n) + iterated_log_exponent(case.q) * math.log(math.log(n))
    return case.m_star * math.log(n)


def gumbel_scale(case: CaseReport) -> float:
    _require_law_case(case)
    return 1.0 if case.case == "superlogarithmic" else float(case.m_star)


@dataclass(frozen=True)
class GumbelLaw:
    case_tag: str
    mass: float
    location: float
    scale: float
    n: int

    def tau(self, msq):
        return (np.asarray(msq, dtype=float) / 2.0 - self.location) / self.scale

    def cdf_tau(self, tau):
        with np.errstate(over="ignore"):  # tau -> -inf gives exp(-inf) = 0
            return np.exp(-self.mass * np.exp(-np.asarray(tau, dtype=float)))

    def sf_tau(self, tau):
        with np.errstate(over="ignore"):
            return -np.expm1(-self.mass * np.exp(-np.asarray(tau, dtype=float)))

    def cdf_msq(self, msq):
        return self.cdf_tau(self.tau(msq))

    def ppf_tau(self, prob):
        prob = np.asarray(prob, dtype=float)
        return -np.log(-np.log(prob) / self.mass)

    def to_json(self) -> dict:
        return {
            "case_tag": self.case_tag,
            "mass": self.mass,
            "location": self.location,
            "scale": self.scale,
            "n": self.n,
        }

    @classmethod
    def from_json(cls, record: dict) -> "GumbelLaw":
        return cls(
            str(record["case_tag"]),
            float(record["mass"]),
            float(record["location"]),
            float(record["scale"]),
            int(record["n"]),
        )


def gumbel_law(case: CaseReport, n: int) -> GumbelLaw:
    return GumbelLaw(case.case, _mass(case), gumbel_location(case, n), gumbel_scale(case), _check_n(n))


def limit_cdf_msq(x, case: CaseReport, n: int):
    """Limiting P[M_n^2 <= x]."""
    out = gumbel_law(case, n).cdf_msq(x)
    return float(out) if np.ndim(out) == 0 else out


def pvalue_m(m: float, case: CaseReport, n: int, form: str = "square"):
    """Asymptotic P[M_n > m].

    ``form="square"`` uses tau = (m^2/2 - location)/scale.  ``form="linear"``
    uses the first-order expansion around b_n = sqrt(2 location), i.e.
    tau = b_n (m - b_n) / scale, the M-scale normalization of the same law.
    """
    if not m > 0:
        raise ArgumentError("m must be positive")
    law = gumbel_law(case, n)
    if form == "square":
        tau = float(law.tau(m * m))
    elif form == "linear":
        b = math.sqrt(2.0 * law.location)
        tau = b * (m - b) / law.scale
    else:
        raise ArgumentError(f"unknown p-value form {form!r}")
    return float(law.sf_tau(tau))


def intensity(case: CaseReport, a):
    """Scale intensity: Lambda_{q,kappa}(a) (superlog) or Theta(a) (log)."""
    _require_law_case(case)
    a = np.asarray(a, dtype=float)
    if case.case == "superlogarithmic":
        if np.any(a <= 0):
            raise DomainError("superlogarithmic intensity needs a > 0", bound=0.0)
        q, kappa = case.q, case.kappa
        out = np.exp(-kappa * 2.0 ** (q / 2.0) * a ** (-(q - 2) / 2.0)) / (2.0 * SQRT_PI * a * a)
    else:
        if case.h_star is None:
            raise CapabilityError("Theta(a) needs H*: attach an estimate first")
        peak = math.sqrt(case.m_star) * case.h_star**2 / (2.0 * SQRT_PI * case.sigma_star)
        out = peak * np.exp(-0.5 * (case.beta_star * a) ** 2)
    return float(out) if out.ndim == 0 else out


def _quad(f, lo, hi, points=None):
    val, err = integrate.quad(f, lo, hi, epsabs=QUAD_TOL / 10, epsrel=0.0, limit=400, points=points)
    if not err <= QUAD_TOL:
        raise NumericError(f"quadrature reached only {err:.3g} (target {QUAD_TOL})", achieved=err)
    return val


def intensity_integral(case: CaseReport, A1: float, A2: float) -> float:
    """Integral of ``intensity`` over [A1, A2]; infinite limits allowed."""
    _require_law_case(case)
    if A1 > A2:
        raise ArgumentError("need A1 <= A2")
    if A1 == A2:
        return 0.0
    if case.case == "superlogarithmic":
        if A1 < 0:
            raise DomainError("superlogarithmic scales start at 0", bound=0.0)

        c = case.kappa * 2.0 ** (case.q / 2.0)
        half = (case.q - 2) / 2.0

        def g(u):
            # a * Lambda(a) at a = e^u, written in log space to avoid 0 * inf
            expo = -u - c * math.exp(min(-half * u, 700.0))
            return math.exp(expo) / (2.0 * SQRT_PI)

        lo = -math.inf if A1 == 0 else math.log(A1)
        hi = math.log(A2) if math.isfinite(A2) else math.inf
        peak = math.log(case.a_star)
        # split at the peak so both halves are monotone
        if lo < peak < hi:
            return _quad(g, lo, peak) + _quad(g, peak, hi)
        return _quad(g, lo, hi)

    def h(u):
        c = math.cos(u)
        return intensity(case, math.tan(u)) / (c * c) if c > 0 else 0.0

    lo, hi = math.atan(A1), math.atan(A2)
    if lo < 0.0 < hi:
        return _quad(h, lo, 0.0) + _quad(h, 0.0, hi)
    return _quad(h, lo, hi)


def optimal_length(case: CaseReport, n: int) -> dict:
    """Descriptor of the interval lengths carrying the maximum."""
    n = _check_n(n)
    logn = math.log(n)
    if case.case == "superlogarithmic":
        p = case.p_exponent
        return {
            "case": case.case,
            "form": "a*log^p(n)",
            "p": p,
            "peak_a": case.a_star,
            "peak_length": case.a_star * logn**p,
        }
    if case.case == "logarithmic":
        return {
            "case": case.case,
            "form": "d*log(n)+a*sqrt(log(n))",
            "d_star": case.d_star,
            "peak_a": 0.0,
            "center_length": case.d_star * logn,
            "spread": math.sqrt(logn) / case.beta_star,
        }
    if case.case == "sublogarithmic":
        return {"case": case.case, "form": "O(1)", "note": "the maximum is attained on intervals of length 1"}
    if case.case == "gaussian":
        return {"case": case.case, "form": "a*log(n)", "note": "constant outside the scope of this package"}
    raise CapabilityError(f"no optimal-length description for the {case.case} case")


def hitting_normalization(u: float, case: CaseReport) -> float:
    """Factor c(u) such that c(u) * T(u) is asymptotically exponential."""
    _require_law_case(case)
    if not u > 0:
        raise ArgumentError("u must be positive")
    if case.case == "superlogarithmic":
        alpha = iterated_log_exponent(case.q)
        return 2.0 ** (-alpha) * u ** (2.0 * alpha) * math.exp(-u * u / 2.0)
    return math.exp(-u * u / (2.0 * case.m_star))


def hitting_alpha(case: CaseReport) -> float:
    _require_law_case(case)
    return iterated_log_exponent(case.q) if case.case == "superlogarithmic" else 0.0


def hitting_cdf(y: float, u: float, case: CaseReport) -> dict:
    """P[c(u) T(u) > y] ~ exp(-mass y), with c(u) reported alongside."""
    if not y > 0:
        raise ArgumentError("y must be positive")
    mass = _mass(case)
    return {
        "survival": math.exp(-mass * y),
        "normalization": hitting_normalization(u, case),
        "alpha": hitting_alpha(case),
        "mass": mass,
        "case_tag": case.case,
    }


def hitting_threshold(case: CaseReport, level: float) -> float:
    """u with c(u) = 1/level in the logarithmic case, i.e. exp(u^2/(2 m*)) = level."""
    if case.case != "logarithmic":
        raise CapabilityError("threshold helper is defined for the logarithmic case")
    return math.sqrt(2.0 * case.m_star * math.log(level))
