"""Tail approximations and bounds for P[S_k / sqrt(k) > x]."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cgf import cramer_lambda, rate
from .distributions import Distribution, rng_for
from .errors import ArgumentError, CapabilityError, RateInfinite

SQRT_2PI = math.sqrt(2.0 * math.pi)
PRUNE = 1e-300


@dataclass(frozen=True)
class TailQuery:
    k: int
    x: float

    def __post_init__(self):
        if self.k < 1:
            raise ArgumentError("k must be a positive integer")
        if not self.x > 0:
            raise ArgumentError("x must be positive")

    @property
    def level(self) -> float:
        return self.x / math.sqrt(self.k)


@dataclass
class TailEstimate:
    value: float
    method: str
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "warnings": list(self.warnings)}


def gaussian_sf(x: float) -> float:
    """Upper Gaussian tail via erfc."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def cramer_tail(dist: Distribution, query: TailQuery, form: str = "mills") -> TailEstimate:
    """Moderate-deviation tail.

    ``form="mills"``: exp(-k I(x/sqrt k)) / (sqrt(2 pi) x).
    ``form="series"``: gaussian_sf(x) * exp((x^3/sqrt k) lambda(x/sqrt k)).
    """
    k, x = query.k, query.x
    warnings = []
    if x >= k**0.49:
        warnings.append(f"regime: x={x:.4g} >= k^0.49={k**0.49:.4g}; moderate-deviation form may be inaccurate")
    if x < 1e-3:
        warnings.append("clt: x near 0, the 1/x Mills factor dominates")
    y = query.level
    try:
        if form == "mills":
            value = math.exp(-k * rate(dist, y).value) / (SQRT_2PI * x)
        elif form == "series":
            value = gaussian_sf(x) * math.exp(x**3 / math.sqrt(k) * cramer_lambda(dist, y))
        else:
            raise ArgumentError(f"unknown cramer form {form!r}")
    except RateInfinite:
        value = 0.0
        warnings.append("x/sqrt(k) at or beyond the support: probability 0")
    return TailEstimate(value, f"cramer_{form}", warnings)


def bahadur_rao_tail(dist: Distribution, query: TailQuery) -> TailEstimate:
    """Large-deviation tail for nonlattice laws."""
    if dist.lattice() is not None:
        raise CapabilityError("Bahadur-Rao asymptotics assume a non-lattice law")
    k, alpha = query.k, query.level
    ev = rate(dist, alpha)
    sigma = math.sqrt(float(dist._d2cgf(ev.d1)))
    value = math.exp(-k * ev.value) / (math.sqrt(2.0 * math.pi * k) * ev.d1 * sigma)
    return TailEstimate(value, "bahadur_rao")


def chernoff_bound(dist: Distribution, query: TailQuery) -> float:
    """exp(-k I(x/sqrt k)); a rigorous upper bound.

    At exactly the top atom s_inf of a finite law, I(s_inf) = -log P[X = s_inf]
    (the limit from below), so the bound is P[X = s_inf]^k.  Beyond it the
    event is impossible and the bound is 0.
    """
    try:
        return math.exp(-query.k * rate(dist, query.level).value)
    except RateInfinite:
        ab = dist.atoms()
        if ab is not None and math.isclose(query.level, dist.sup, rel_tol=1e-12, abs_tol=1e-15):
            return float(ab[1][-1]) ** query.k
        return 0.0


def lattice_walk_pmf(values: np.ndarray, probs: np.ndarray, k: int, span: float):
    """Law of a k-step sum of an atom law on an arithmetic grid.

    Returns (base, span, pmf) with P[S_k = base + span*m] = pmf[m].
    """
    vmin = float(values.min())
    steps = np.rint((values - vmin) / span).astype(np.int64)
    if np.max(np.abs(vmin + steps * span - values)) > 1e-9 * max(1.0, span):
        raise CapabilityError("atoms do not sit on the requested lattice")
    kernel = np.zeros(int(steps.max()) + 1)
    np.add.at(kernel, steps, probs)
    pmf = np.ones(1)
    lo = 0
    for _ in range(k):
        pmf = np.convolve(pmf, kernel)
        nz = np.flatnonzero(pmf >= PRUNE)
        if nz.size and (nz[0] > 0 or nz[-1] < len(pmf) - 1):
            lo += int(nz[0])
            pmf = pmf[nz[0] : nz[-1] + 1]
    return k * vmin + lo * span, span, pmf


def exact_tail(dist: Distribution, query: TailQuery) -> float:
    """Exact P[S_k/sqrt(k) > x] for atom laws by lattice convolution."""
    ab = dist.atoms()
    lat = dist.lattice()
    if ab is None or lat is None:
        raise CapabilityError("exact tail DP needs a finite lattice law")
    base, span, pmf = lattice_walk_pmf(ab[0], ab[1], query.k, lat.span)
    level = query.x * math.sqrt(query.k)
    m_cut = (level - base) / span
    m = np.arange(len(pmf))
    # strict inequality; lattice points within 1e-9 of the cut count as equal
    mask = m > m_cut + 1e-9
    return float(np.sum(pmf[mask]))


def importance_tail(dist: Distribution, query: TailQuery, draws: int, seed: int, batch: int = 20000):
    """Tilted Monte Carlo estimate (value, stderr) of P[S_k/sqrt k > x]."""
    k = query.k
    theta = rate(dist, query.level).d1
    tilted = dist.tilt(theta)
    log_norm = k * float(dist._cgf(theta))
    level = query.x * math.sqrt(k)
    total = total_sq = 0.0
    done = 0
    chunk_id = 0
    while done < draws:
        m = min(batch, draws - done)
        s = tilted.draw(rng_for(seed, (chunk_id,)), (m, k)).sum(axis=1)
        w = np.where(s > level, np.exp(log_norm - theta * s), 0.0)
        total += float(w.sum())
        total_sq += float(np.square(w).sum())
        done += m
        chunk_id += 1
    mean = total / draws
    var = max(total_sq / draws - mean**2, 0.0)
    return mean, math.sqrt(var / draws)

