"""Monte Carlo experiments confronting the limit laws with simulated scans."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .cgf import CaseReport
from .distributions import Distribution, rng_for
from .errors import ArgumentError, CapabilityError, ResourceError
from .laws import GumbelLaw, gumbel_law, hitting_normalization
from .scan import hitting_time, prefix_sums, scan_prefix

FULL_SCAN_LIMIT = 20_000
MIN_REPS = 100
TAIL_MASS = 1e-3  # share of the superlog intensity allowed beyond the theory window
LOG_REACH = 16  # multiple of the log-case peak region kept in the window
AUDIT_STREAM = 2**31  # disjoint from replicate streams


def theory_window(case: CaseReport, n: int) -> tuple[int, int]:
    """Length window (h1, h2) that carries the maximum with wide margins.

    h1 is always 1, so the short lengths 1..ceil(log n) are included.  The
    superlogarithmic intensity decays only like 1/(2 sqrt(pi) a^2), so the
    upper end is where its tail mass drops to TAIL_MASS of the total.
    """
    logn = math.log(n)
    short = math.ceil(logn)
    if case.case == "superlogarithmic":
        reach = 1.0 / (2.0 * math.sqrt(math.pi) * TAIL_MASS * case.lambda_total)
        top = max(16.0 * case.a_star, reach) * logn**case.p_exponent
    elif case.case == "logarithmic":
        # Theta(a) has standard deviation 1/beta* in a; +-8 alone can miss half of it.
        # At desk n, m* is close to 1 and long near-Gaussian intervals still win
        # a few percent of the time, so the window reaches well past the peak.
        peak = case.d_star * logn + max(8.0, 4.0 / case.beta_star) * math.sqrt(logn)
        top = LOG_REACH * peak
    elif case.case == "sublogarithmic":
        top = logn**2
    else:
        raise ArgumentError(f"no theory window for the {case.case} case; use an explicit window")
    return 1, int(min(n, max(short, math.ceil(top))))


def resolve_window(policy, case: CaseReport, n: int) -> tuple[str, int, int]:
    if policy == "full":
        if n > FULL_SCAN_LIMIT:
            raise ResourceError(f"full scan at n={n} exceeds {FULL_SCAN_LIMIT}; use the theory window policy")
        return "full", 1, n
    if policy == "theory":
        return ("theory", *theory_window(case, n))
    if isinstance(policy, (tuple, list)) and len(policy) == 2:
        h1, h2 = int(policy[0]), int(policy[1])
        if not 1 <= h1 <= h2 <= n:
            raise ArgumentError(f"explicit window ({h1},{h2}) must satisfy 1 <= h1 <= h2 <= n={n}")
        return "explicit", h1, h2
    raise ArgumentError(f"unknown window policy {policy!r}")


@dataclass
class SimulationSummary:
    n: int
    reps: int
    window: tuple[int, int]
    policy: str
    seed: int
    values: np.ndarray
    argmax_lengths: np.ndarray
    case_tag: str
    law: GumbelLaw | None = None
    ks: float | None = None
    u_fraction: float | None = None
    audit: dict = field(default_factory=dict)

    def taus(self) -> np.ndarray:
        if self.law is None:
            raise ArgumentError("summary has no attached limit law")
        return self.law.tau(self.values**2)

    def to_json(self, include_samples: bool = True) -> dict:
        out = {
            "n": self.n,
            "reps": self.reps,
            "window": list(self.window),
            "policy": self.policy,
            "seed": self.seed,
            "case": self.case_tag,
            "law": None if self.law is None else self.law.to_json(),
            "ks": self.ks,
            "u_fraction": self.u_fraction,
            "audit": self.audit,
        }
        if include_samples:
            out["values"] = [float(v) for v in self.values]
            out["argmax_lengths"] = [int(v) for v in self.argmax_lengths]
        return out

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["value", "length"])
            for v, ell in zip(self.values, self.argmax_lengths):
                w.writerow([repr(float(v)), int(ell)])


def _replicate(dist: Distribution, n: int, h1: int, h2: int, seed: int, r: int, audit: bool):
    x = dist.draw(rng_for(seed, (r,)), n)
    s = prefix_sums(x)
    res = scan_prefix(s, h1, h2)
    single = bool(res.length == 1)
    wide = None
    if audit:
        wide = scan_prefix(s, max(1, h1 // 2), min(n, 2 * h2)).value
    return res.value, res.length, single, wide


def _audit_indices(reps: int, fraction: float, seed: int) -> set[int]:
    m = max(1, math.ceil(fraction * reps))
    rng = rng_for(seed, (AUDIT_STREAM,))
    return set(int(i) for i in rng.choice(reps, size=min(m, reps), replace=False))


def run_mn_experiment(
    dist: Distribution,
    case: CaseReport,
    n: int,
    reps: int,
    window_policy="theory",
    seed: int = 0,
    threads: int = 1,
    audit_fraction: float = 0.01,
) -> SimulationSummary:
    """Simulate ``reps`` independent walks of length n and scan each one.

    Replicate r draws from the stream (seed, r), so results do not depend on
    ``threads``.  Under the theory policy a random 1% of replicates is
    re-scanned with a 2x-widened window; disagreements are reported.
    """
    if reps < MIN_REPS:
        raise ArgumentError(f"reps must be >= {MIN_REPS}")
    if n < 3:
        raise ArgumentError("n must be >= 3")
    policy, h1, h2 = resolve_window(window_policy, case, n)
    audited = _audit_indices(reps, audit_fraction, seed) if policy == "theory" else set()

    def job(r):
        return _replicate(dist, n, h1, h2, seed, r, r in audited)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, range(reps)))
    else:
        rows = [job(r) for r in range(reps)]

    values = np.array([row[0] for row in rows])
    lengths = np.array([row[1] for row in rows], dtype=np.int64)
    ks = None
    try:
        law = gumbel_law(case, n)
    except CapabilityError:
        law = None
    if law is not None:
        ks = ks_statistic(law.tau(values**2), law.cdf_tau)
    u_fraction = float(np.mean([row[2] for row in rows])) if h1 == 1 else None
    audit = {}
    if audited:
        disagreements = [
            {"replicate": r, "value": float(rows[r][0]), "widened_value": float(rows[r][3])}
            for r in sorted(audited)
            if rows[r][3] != rows[r][0]
        ]
        audit = {
            "sampled": len(audited),
            "widened_window": [max(1, h1 // 2), min(n, 2 * h2)],
            "agreement_fraction": 1.0 - len(disagreements) / len(audited),
            "disagreements": disagreements,
        }
    return SimulationSummary(
        n=int(n),
        reps=int(reps),
        window=(int(h1), int(h2)),
        policy=policy,
        seed=int(seed),
        values=values,
        argmax_lengths=lengths,
        case_tag=case.case,
        law=law,
        ks=ks,
        u_fraction=u_fraction,
        audit=audit,
    )


def ks_statistic(samples, cdf) -> float:
    """sup_x |F_n(x) - F(x)| over the sample points."""
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ArgumentError("ks_statistic needs at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    m = x.size
    upper = np.arange(1, m + 1) / m - f
    lower = f - np.arange(m) / m
    return float(max(upper.max(), lower.max()))


def ks_pvalue(samples, cdf) -> float:
    """Asymptotic KS p-value from scipy for the same statistic."""
    return float(stats.kstest(np.asarray(samples, dtype=float), cdf).pvalue)


def argmax_length_profile(summary: SimulationSummary, case: CaseReport, n: int | None = None, bins: int = 20) -> dict:
    """Histogram of rescaled argmax lengths and its median."""
    if summary.argmax_lengths.size == 0:
        raise ArgumentError("empty simulation summary")
    n = summary.n if n is None else int(n)
    if n != summary.n or case.case != summary.case_tag:
        raise ArgumentError("case or n does not match the simulation summary")
    ell = summary.argmax_lengths.astype(float)
    logn = math.log(n)
    if case.case == "superlogarithmic":
        scaled = ell / logn**case.p_exponent
        form = "length/log^p(n)"
        reference = case.a_star
    elif case.case == "logarithmic":
        scaled = (ell - case.d_star * logn) / math.sqrt(logn)
        form = "(length - d*log(n))/sqrt(log(n))"
        reference = 0.0
    else:
        raise ArgumentError(f"no length rescaling for the {case.case} case")
    counts, edges = np.histogram(scaled, bins=bins)
    return {
        "form": form,
        "median": float(np.median(scaled)),
        "reference_peak": reference,
        "counts": counts.tolist(),
        "edges": edges.tolist(),
    }


@dataclass
class HittingSummary:
    u: float
    reps: int
    seed: int
    n_cap: int
    window_cap: int | None
    normalization: float
    times: list[int | None]

    def normalized(self) -> np.ndarray:
        hit = [t for t in self.times if t is not None]
        return self.normalization * np.asarray(hit, dtype=float)

    @property
    def censored(self) -> int:
        return sum(t is None for t in self.times)

    def to_json(self) -> dict:
        norm = self.normalized()
        return {
            "u": self.u,
            "reps": self.reps,
            "seed": self.seed,
            "n_cap": self.n_cap,
            "window_cap": self.window_cap,
            "windowed": self.window_cap is not None,
            "normalization": self.normalization,
            "censored": self.censored,
            "mean_normalized": float(norm.mean()) if norm.size else None,
            "times": list(self.times),
        }


def run_hitting_experiment(
    dist: Distribution,
    case: CaseReport,
    u: float,
    reps: int,
    seed: int,
    n_cap: int,
    window_cap: int | None = None,
    threads: int = 1,
) -> HittingSummary:
    """First-passage times T(u) for ``reps`` independent streams (seed, r)."""
    if reps < 1:
        raise ArgumentError("reps must be >= 1")
    norm = hitting_normalization(u, case)

    def job(r):
        return hitting_time(dist, u, seed, n_cap, window_cap, stream=(r,)).time

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            times = list(pool.map(job, range(reps)))
    else:
        times = [job(r) for r in range(reps)]
    return HittingSummary(float(u), int(reps), int(seed), int(n_cap), window_cap, norm, times)
