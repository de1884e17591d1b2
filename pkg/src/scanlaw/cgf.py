"""Cumulant-generating-function analysis.

psi(t) = 2 cgf(t) / t^2 decides the tail regime: its supremum ``m_star``
and maximizer ``t_star`` (when interior) select one of the four cases.
The Legendre-Fenchel rate I(s) = sup_t (s t - cgf(t)) is computed by a
bracketed Newton iteration on cgf'(t) = s.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import gamma as gamma_fn

from .distributions import Distribution
from .errors import ArgumentError, CapabilityError, ConsistencyError, RateInfinite

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
CUMULANT_ZERO_TOL = 1e-10
TAYLOR_SWITCH = 1e-4
STATIONARITY_TOL = 1e-8


def golden_max(f, a: float, b: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Golden-section search for the maximizer of a unimodal ``f`` on [a, b]."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return c if fc > fd else d


PSI_SERIES_SWITCH = 1e-2


def _series_cumulants(dist: Distribution, top: int = 4) -> list[float] | None:
    """[k3, ..., k_top], or None when the family has no exact cumulants."""
    try:
        return [dist.cumulant(j) for j in range(3, top + 1)]
    except CapabilityError:
        return None


def psi(dist: Distribution, t):
    """2 cgf(t)/t^2.

    For t < 1e-2 the cumulant series through order 8 replaces the direct
    quotient, whose cancellation error grows like 1e-16/t^2.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("psi requires t > 0")
    dist.check_domain(t_arr)
    with np.errstate(over="ignore", invalid="ignore"):
        out = 2.0 * np.asarray(dist._cgf(t_arr), dtype=float) / t_arr**2
    small = t_arr < PSI_SERIES_SWITCH
    if np.any(small):
        ks = _series_cumulants(dist, 8)
        if ks is not None:
            series = np.ones_like(t_arr)
            for j, k in enumerate(ks, start=3):
                series = series + 2.0 * k * t_arr ** (j - 2) / math.factorial(j)
            out = np.where(small, series, out)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RateEval:
    s: float
    value: float
    maximizer: float
    d1: float
    d2: float


def _solve_dcgf(dist: Distribution, s: float, tol: float = 1e-12) -> float:
    """Root of cgf'(t) = s on [0, t_inf) by Newton with a bisection fallback."""
    lo, hi = 0.0, 1.0
    right = dist.cgf_domain_right
    if math.isfinite(right):
        hi = min(hi, 0.5 * right)
    while dist._dcgf(hi) < s:
        lo = hi
        if math.isfinite(right):
            hi = hi + 0.5 * (right - hi)
            if right - hi < 1e-15:
                break
        else:
            hi *= 2.0
            if hi > 1e300:
                raise RateInfinite(f"cgf' never reaches s={s}", bound=dist.sup)
    x = 0.5 * (lo + hi)
    for _ in range(200):
        f = float(dist._dcgf(x)) - s
        if abs(f) <= tol * max(1.0, abs(s)):
            d2 = float(dist._d2cgf(x))
            # one last Newton step squares the residual
            return x - f / d2 if d2 > 0 else x
        if f > 0:
            hi = x
        else:
            lo = x
        d2 = float(dist._d2cgf(x))
        step = x - f / d2 if d2 > 0 else math.nan
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * max(1.0, abs(x)):
            return step
        x = step
    return x


def rate(dist: Distribution, s: float) -> RateEval:
    """Legendre-Fenchel rate I(s) for 0 <= s < s_inf (right end of support)."""
    if s < 0:
        raise ArgumentError("rate is defined here for s >= 0")
    if s >= dist.sup:
        raise RateInfinite(f"I(s)=+inf for s={s} >= right end of support {dist.sup}", bound=dist.sup)
    if s == 0.0:
        return RateEval(0.0, 0.0, 0.0, 0.0, 1.0 / float(dist._d2cgf(0.0)))
    if s < TAYLOR_SWITCH:
        ks = _series_cumulants(dist)
        if ks is not None:
            k3, k4 = ks
            c4 = (3.0 * k3**2 - k4) / 24.0
            value = s**2 / 2.0 - k3 * s**3 / 6.0 + c4 * s**4
            t = s - k3 * s**2 / 2.0 + 4.0 * c4 * s**3
            return RateEval(s, value, t, t, 1.0 - k3 * s + 12.0 * c4 * s**2)
    t = _solve_dcgf(dist, s)
    value = s * t - float(dist._cgf(t))
    return RateEval(s, value, t, t, 1.0 / float(dist._d2cgf(t)))


def cramer_lambda(dist: Distribution, y: float) -> float:
    """Cramer series (y^2/2 - I(y)) / y^3."""
    if not y > 0:
        raise ValueError("cramer_lambda requires y > 0")
    if y < TAYLOR_SWITCH:
        ks = _series_cumulants(dist)
        if ks is not None:
            k3, k4 = ks
            return k3 / 6.0 - (3.0 * k3**2 - k4) / 24.0 * y
    return (y**2 / 2.0 - rate(dist, y).value) / y**3


def extract_qkappa(dist: Distribution) -> tuple[int, float]:
    """(q, kappa) from cgf(t) = t^2/2 - kappa t^q + o(t^q).

    Returns q = 0 (and kappa = 0) when cumulants 3..8 all vanish, the
    Gaussian-or-undetectable signal.
    """
    for j in range(3, 9):
        k = dist.cumulant(j)
        if abs(k) > CUMULANT_ZERO_TOL:
            return j, -k / math.factorial(j)
    return 0, 0.0


def kappa_from_rate(dist: Distribution, q: int, levels: range = range(3, 9)) -> float:
    """kappa fitted from (I(s) - s^2/2)/s^q on s = 2^-k, extrapolated to s=0.

    Neville's polynomial extrapolation over the whole ladder; the smallest
    s is kept well above the region where I(s) - s^2/2 drowns in roundoff.
    """
    s = np.array([2.0**-k for k in levels])
    f = np.array([(rate(dist, x).value - x**2 / 2.0) / x**q for x in s])
    table = f.copy()
    n = len(s)
    for m in range(1, n):
        for i in range(n - m):
            table[i] = (s[i + m] * table[i] - s[i] * table[i + 1]) / (s[i + m] - s[i])
    return float(table[0])


@dataclass(frozen=True)
class GridConfig:
    points: int = 4096
    t_min: float = 1e-4
    t_cap: float = 50.0
    tol_ratio: float = 1e-6

    def grid(self, dist: Distribution) -> np.ndarray:
        right = dist.cgf_domain_right
        t_max = min(right * (1.0 - 1e-3), self.t_cap) if math.isfinite(right) else self.t_cap
        return np.geomspace(self.t_min, t_max, self.points)


@dataclass
class PsiProfile:
    grid: np.ndarray
    values: np.ndarray
    local_maxima: list[int]  # interior indexes

    @property
    def argmax(self) -> int:
        return int(np.nanargmax(np.where(np.isnan(self.values), -np.inf, self.values)))


def psi_profile(dist: Distribution, config: GridConfig = GridConfig()) -> PsiProfile:
    grid = config.grid(dist)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(psi(dist, grid), dtype=float)
    vals = np.where(np.isnan(vals), np.inf, vals)
    inner = np.flatnonzero((vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    return PsiProfile(grid, vals, [int(i) for i in inner])


def _polish_tstar(dist: Distribution, t: float, lo: float, hi: float) -> float:
    # Newton on g(t) = t cgf'(t) - 2 cgf(t), whose root is the psi maximizer
    for _ in range(50):
        g = t * float(dist._dcgf(t)) - 2.0 * float(dist._cgf(t))
        dg = t * float(dist._d2cgf(t)) - float(dist._dcgf(t))
        if dg == 0 or not math.isfinite(dg):
            break
        nt = t - g / dg
        if not lo < nt < hi:
            break
        if abs(nt - t) <= 1e-15 * t:
            t = nt
            break
        t = nt
    return t


def stationarity_residual(dist: Distribution, t: float) -> float:
    """|t cgf'(t) - 2 cgf(t)| scaled by max(1, |cgf(t)|)."""
    phi = float(dist._cgf(t))
    return abs(t * float(dist._dcgf(t)) - 2.0 * phi) / max(1.0, abs(phi))


def find_tstar(dist: Distribution, config: GridConfig = GridConfig()) -> tuple[float, float] | None:
    """Interior maximizer of psi with m_star > 1 + tol_ratio, else ``None``."""
    prof = psi_profile(dist, config)
    return _tstar_from_profile(dist, prof, config)


def _tstar_from_profile(dist, prof: PsiProfile, config: GridConfig):
    i = prof.argmax
    if i == 0 or i == len(prof.grid) - 1:
        return None
    if not prof.values[i] > 1.0 + config.tol_ratio:
        return None
    lo, hi = float(prof.grid[i - 1]), float(prof.grid[i + 1])
    t = golden_max(lambda x: float(psi(dist, x)), lo, hi, tol=1e-13)
    t = _polish_tstar(dist, t, lo, hi)
    return t, float(psi(dist, t))


@dataclass
class CaseReport:
    case: str
    q: int | None = None
    kappa: float | None = None
    p_exponent: float | None = None
    a_star: float | None = None
    lambda_total: float | None = None
    t_star: float | None = None
    m_star: float | None = None
    s_star: float | None = None
    sigma_star: float | None = None
    beta_star: float | None = None
    d_star: float | None = None
    h_star: float | None = None
    theta_total: float | None = None
    alpha: float | None = None
    D: float | None = None
    diagnostics: str | None = None
    warnings: list[str] = field(default_factory=list)
    local_maxima: list[list[float]] = field(default_factory=list)

    _FIELDS = {
        "gaussian": (),
        "superlogarithmic": ("q", "kappa", "p_exponent", "a_star", "lambda_total"),
        "logarithmic": (
            "t_star", "m_star", "s_star", "sigma_star", "beta_star", "d_star", "h_star", "theta_total",
        ),
        "sublogarithmic": ("alpha", "D"),
        "indeterminate": ("diagnostics", "local_maxima"),
    }

    def with_hstar(self, h_star: float) -> "CaseReport":
        """Attach a Pickands-constant estimate and the resulting Theta_*."""
        if self.case != "logarithmic":
            raise CapabilityError(f"H* applies to the logarithmic case, not {self.case}")
        theta = theta_total(self.m_star, h_star, self.beta_star, self.sigma_star)
        return replace(self, h_star=float(h_star), theta_total=theta)

    def to_json(self) -> dict:
        out: dict = {"case": self.case}
        d = asdict(self)
        for name in self._FIELDS[self.case]:
            out[name] = d[name]
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out

    @classmethod
    def from_json(cls, record: dict) -> "CaseReport":
        known = {k: v for k, v in record.items() if k in cls.__dataclass_fields__}
        return cls(**known)


def theta_total(m_star: float, h_star: float, beta_star: float, sigma_star: float) -> float:
    return math.sqrt(m_star) * h_star**2 / (math.sqrt(2.0) * beta_star * sigma_star)


def total_intensity(q: int, kappa: float) -> float:
    """Integral over a > 0 of exp(-kappa 2^{q/2} a^{-(q-2)/2}) / (2 sqrt(pi) a^2).

    Substituting b = 1/a gives Gamma(q/(q-2)) (kappa 2^{q/2})^{-2/(q-2)} / (2 sqrt(pi)).
    """
    return float(gamma_fn(q / (q - 2))) * (kappa * 2.0 ** (q / 2.0)) ** (-2.0 / (q - 2)) / (2.0 * math.sqrt(math.pi))


def literal_total_intensity(q: int, kappa: float) -> float:
    """Gamma(q/(q-2)) (2 kappa)^{2/(q-2)} / sqrt(pi); kept only for comparison.

    This expression does not equal the integral of the intensity (its kappa
    power has the wrong sign) and is not used by any law.
    """
    return float(gamma_fn(q / (q - 2))) * (2.0 * kappa) ** (2.0 / (q - 2)) / math.sqrt(math.pi)


def superlog_constants(q: int, kappa: float) -> dict:
    p = q / (q - 2)
    a_star = 2.0 ** ((q - 4) / (q - 2)) * kappa ** (2.0 / (q - 2)) * (q - 2) ** (2.0 / (q - 2))
    lam = total_intensity(q, kappa)
    return {"q": q, "kappa": kappa, "p_exponent": p, "a_star": a_star, "lambda_total": lam}


def log_constants(dist: Distribution, t_star: float, m_star: float) -> dict:
    """s*, sigma*, beta*, d* at a stationary point of psi."""
    res = stationarity_residual(dist, t_star)
    if res > STATIONARITY_TOL:
        raise ConsistencyError(f"t_star={t_star} is not stationary for psi (residual {res:.3e})")
    phi = float(dist._cgf(t_star))
    s_star = float(dist._dcgf(t_star))
    sigma2 = float(dist._d2cgf(t_star))
    beta2 = s_star**4 / (8.0 * m_star) * (1.0 / sigma2 - 1.0 / m_star)
    if not beta2 > 0:
        raise ConsistencyError(f"beta_star^2 = {beta2} is not positive")
    return {
        "t_star": t_star,
        "m_star": m_star,
        "s_star": s_star,
        "sigma_star": math.sqrt(sigma2),
        "beta_star": math.sqrt(beta2),
        "d_star": 1.0 / phi,
    }


def classify(dist: Distribution, config: GridConfig = GridConfig()) -> CaseReport:
    """Sort a standardized law into gaussian / superlog / log / sublog."""
    prof = psi_profile(dist, config)
    vals = prof.values
    try:
        q, kappa = extract_qkappa(dist)
    except CapabilityError:
        q, kappa = None, None

    warnings: list[str] = []
    top = float(np.max(vals))
    near = [i for i in prof.local_maxima if vals[i] >= top - config.tol_ratio * max(1.0, top)]
    if len(prof.local_maxima) > 1 and len(near) > 1:
        warnings.append(f"psi has {len(near)} local maxima within tolerance of the global value")

    if q == 0 and np.all(np.abs(vals - 1.0) < 1e-9):
        return CaseReport("gaussian", warnings=warnings)

    right_end = vals[-1]
    increasing_at_end = vals[-1] >= vals[-2]
    if prof.argmax == len(vals) - 1 and increasing_at_end and (
        math.isfinite(dist.cgf_domain_right) or not math.isfinite(right_end) or right_end > 10.0
    ):
        alpha = D = None
        if dist.tail_regularity is not None:
            alpha, D = dist.tail_regularity
        else:
            warnings.append("tail exponent (alpha, D) not available for this family")
        return CaseReport("sublogarithmic", alpha=alpha, D=D, warnings=warnings)

    interior_high = [i for i in prof.local_maxima if vals[i] > 1.0 + config.tol_ratio]
    if interior_high:
        if len(near) > 1:
            maxima = [[float(prof.grid[i]), float(vals[i])] for i in near]
            return CaseReport(
                "indeterminate",
                diagnostics="psi attains its supremum at several interior points",
                local_maxima=maxima,
                warnings=warnings,
            )
        found = _tstar_from_profile(dist, prof, config)
        if found is not None:
            consts = log_constants(dist, *found)
            return CaseReport("logarithmic", warnings=warnings, **consts)

    if top <= 1.0 + 1e-12 and right_end < 1.0 - config.tol_ratio and q:
        if kappa is None or kappa <= 0:
            return CaseReport(
                "indeterminate", diagnostics=f"psi < 1 on the grid but kappa={kappa} is not positive",
                warnings=warnings,
            )
        return CaseReport("superlogarithmic", warnings=warnings, **superlog_constants(q, kappa))

    return CaseReport(
        "indeterminate",
        diagnostics=(
            f"sup psi on grid = {top:.6g} at t={prof.grid[prof.argmax]:.6g}; "
            f"psi at right end = {right_end:.6g}; q={q}"
        ),
        warnings=warnings,
    )


@dataclass(frozen=True)
class DualityReport:
    residuals: dict
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(v < self.tolerance for v in self.residuals.values())

    def to_json(self) -> dict:
        return {
            "residuals": {k: f"{v:.16e}" for k, v in self.residuals.items()},
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def duality_report(dist: Distribution, case: CaseReport, tolerance: float = 1e-6) -> DualityReport:
    """Residuals of the Legendre duality identities at (t*, s*)."""
    if case.case != "logarithmic":
        raise CapabilityError(f"duality identities need the logarithmic case, got {case.case}")
    t, m = case.t_star, case.m_star
    s = t * m
    ev = rate(dist, s)
    phi = float(dist._cgf(t))
    residuals = {
        "s_star_vs_dcgf": abs(s - float(dist._dcgf(t))),
        "t_star_vs_dI": abs(t - ev.d1),
        "d2I_times_d2cgf": abs(ev.d2 * float(dist._d2cgf(t)) - 1.0),
        "cgf_vs_I": abs(phi - ev.value),
        "I_vs_half_st": abs(ev.value - s * t / 2.0),
    }
    return DualityReport(residuals, tolerance)
