"""Catalog of standardized increment laws.

Every law built by :func:`make_distribution` has mean 0 and variance 1.
Each carries an analytic cumulant generating function with its first two
derivatives, exact cumulants, lattice metadata and a seeded sampler.
Tilted versions (``dist.tilt(t)``) share the same interface but are not
standardized; they exist for the Pickands-constant machinery.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import logsumexp

from .errors import (
    CapabilityError,
    DegenerateDistributionError,
    DomainError,
    SchemaError,
)

SQRT3 = math.sqrt(3.0)
MAX_CATALOG_CUMULANT = 8


def _offset(x: float, span: float) -> float:
    r = float(np.mod(x, span))
    return 0.0 if span - r <= 1e-12 * max(1.0, span) else r


@dataclass(frozen=True)
class Lattice:
    """Support contained in ``offset + span * Z`` with ``0 <= offset < span``."""

    span: float
    offset: float

    def to_json(self) -> dict:
        return {"kind": "lattice", "span": self.span, "offset": self.offset}


NONLATTICE_JSON = {"kind": "nonlattice"}


def rng_for(seed: int, stream: int | tuple = 0) -> np.random.Generator:
    """Generator keyed by (master seed, stream id); independent of call order."""
    key = stream if isinstance(stream, tuple) else (int(stream),)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=key)))


def _cumulants_from_moments(moments: list[float]) -> list[float]:
    # moments[j] = E X^j, j = 0..N ; returns kappa[0..N] with kappa[0] unused
    n = len(moments) - 1
    kappa = [0.0] * (n + 1)
    for r in range(1, n + 1):
        acc = moments[r]
        for k in range(1, r):
            acc -= math.comb(r - 1, k - 1) * kappa[k] * moments[r - k]
        kappa[r] = acc
    return kappa


@lru_cache(maxsize=None)
def _bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """Exact B_0..B_n (B_1 = -1/2) by the Akiyama-Tanigawa recurrence."""
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]
    return tuple(out)


def _uniform_cumulant(halfwidth_sq: float, order: int) -> float:
    if order == 1 or order % 2:
        return 0.0
    b = float(_bernoulli_numbers(order)[order])
    return b * (4.0 * halfwidth_sq) ** (order // 2) / order


def _float_gcd(values: np.ndarray, tol: float = 1e-12) -> float:
    span = 0.0
    for d in np.abs(values):
        if d <= tol:
            continue
        if span == 0.0:
            span = float(d)
            continue
        a, b = max(span, float(d)), min(span, float(d))
        while b > tol * max(1.0, a):
            r = math.fmod(a, b)
            if b - r <= tol * max(1.0, a):
                r = 0.0
            a, b = b, r
        span = a
    return span


class Distribution:
    """Base class; also serves as the ``DistributionSpec`` of the catalog."""

    family: str = "abstract"
    record: dict | None = None
    cgf_domain_left: float = math.inf  # sigma_0: cgf finite on (-sigma_0, ...)
    cgf_domain_right: float = math.inf  # t_inf
    sup: float = math.inf  # right end of the support (s_inf)
    inf: float = -math.inf
    # (alpha, D) in lim x^-alpha log P[X > x] = -D, when known
    tail_regularity: tuple[float, float] | None = None

    # -- analytic pieces supplied by subclasses -------------------------
    def _cgf(self, t):
        raise NotImplementedError

    def _dcgf(self, t):
        raise NotImplementedError

    def _d2cgf(self, t):
        raise NotImplementedError

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        raise NotImplementedError

    def _draw_tilted(self, rng: np.random.Generator, size, theta: float) -> np.ndarray:
        raise CapabilityError(f"no tilted sampler for family {self.family!r}")

    def lattice(self) -> Lattice | None:
        return None

    def atoms(self) -> tuple[np.ndarray, np.ndarray] | None:
        return None

    def cumulant(self, order: int) -> float:
        raise CapabilityError(f"cumulants unavailable for family {self.family!r}")

    # -- public evaluation with domain checks ---------------------------
    def check_domain(self, t) -> None:
        arr = np.asarray(t, dtype=float)
        if np.any(arr >= self.cgf_domain_right):
            raise DomainError(
                f"t={t} outside cgf domain: need t < {self.cgf_domain_right}",
                bound=self.cgf_domain_right,
            )
        if np.any(arr <= -self.cgf_domain_left):
            raise DomainError(
                f"t={t} outside cgf domain: need t > {-self.cgf_domain_left}",
                bound=-self.cgf_domain_left,
            )

    def cgf(self, t):
        self.check_domain(t)
        return self._cgf(t)

    def dcgf(self, t):
        self.check_domain(t)
        return self._dcgf(t)

    def d2cgf(self, t):
        self.check_domain(t)
        return self._d2cgf(t)

    def tilt(self, theta: float) -> "Distribution":
        """Law with density exp(theta*x - cgf(theta)) against this one."""
        self.check_domain(theta)
        return Tilted(self, float(theta))

    def to_json(self) -> dict:
        if self.record is None:
            raise SchemaError(f"{type(self).__name__} has no JSON record")
        return self.record

    def __repr__(self) -> str:
        if self.record is not None:
            return f"Distribution({json.dumps(self.record)})"
        return f"<{type(self).__name__}>"


class Gaussian(Distribution):
    family = "gaussian"

    def __init__(self, mean: float = 0.0):
        self.mean = mean

    def _cgf(self, t):
        return self.mean * t + 0.5 * np.square(t)

    def _dcgf(self, t):
        return self.mean + np.asarray(t, dtype=float) * 1.0

    def _d2cgf(self, t):
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0

    def draw(self, rng, size):
        return self.mean + rng.standard_normal(size)

    def _draw_tilted(self, rng, size, theta):
        return self.mean + theta + rng.standard_normal(size)

    def cumulant(self, order):
        if order < 1:
            raise CapabilityError("cumulant order must be >= 1")
        return {1: self.mean, 2: 1.0}.get(order, 0.0)


class Atoms(Distribution):
    """Finite discrete law; values are used as given (no standardization)."""

    family = "atoms"

    def __init__(self, values, probs):
        v = np.asarray(values, dtype=float)
        p = np.asarray(probs, dtype=float)
        order = np.argsort(v, kind="stable")
        self.values = v[order]
        self.probs = p[order]
        self._logp = np.log(self.probs)
        self._cum = np.cumsum(self.probs)
        self._cum[-1] = 1.0
        self.sup = float(self.values[-1])
        self.inf = float(self.values[0])

    def _weights(self, t):
        t = np.asarray(t, dtype=float)
        z = np.multiply.outer(t, self.values) + self._logp
        return z

    def _cgf(self, t):
        return logsumexp(self._weights(t), axis=-1)

    def _tilted_probs(self, t):
        z = self._weights(t)
        return np.exp(z - logsumexp(z, axis=-1, keepdims=True))

    def _dcgf(self, t):
        return self._tilted_probs(t) @ self.values

    def _d2cgf(self, t):
        w = self._tilted_probs(t)
        m = w @ self.values
        return w @ np.square(self.values) - np.square(m)

    def draw(self, rng, size):
        idx = np.searchsorted(self._cum, rng.random(size), side="right")
        return self.values[np.minimum(idx, len(self.values) - 1)]

    def atoms(self):
        return self.values, self.probs

    def tilt(self, theta):
        return Atoms(self.values, self._tilted_probs(theta))

    def cumulant(self, order):
        if order < 1:
            raise CapabilityError("cumulant order must be >= 1")
        moments = [float(np.sum(self.probs * self.values**j)) for j in range(order + 1)]
        return _cumulants_from_moments(moments)[order]

    def lattice(self):
        if len(self.values) == 1:
            return Lattice(span=math.inf, offset=float(self.values[0]))
        span = _float_gcd(self.values - self.values[0])
        return Lattice(span=span, offset=_offset(self.values[0], span))


def _logsinhc_coeffs(n_terms: int = 24) -> np.ndarray:
    # log(sinh x / x) = sum_n c_n x^(2n), c_n = 2^(2n) B_2n / (2n (2n)!)
    b = _bernoulli_numbers(2 * n_terms)
    return np.array(
        [2.0 ** (2 * n) * float(b[2 * n]) / (2 * n * math.factorial(2 * n)) for n in range(1, n_terms + 1)]
    )


_LOGSINHC = _logsinhc_coeffs()
_SERIES_X = 1.0


class Uniform(Distribution):
    """Uniform law on [-halfwidth, halfwidth].

    log(sinh x/x) and its derivatives use the power series for |x| < 1
    (radius pi), the closed forms beyond.
    """

    family = "uniform"

    def __init__(self, halfwidth: float, halfwidth_sq: float | None = None):
        self.a = float(halfwidth)
        self.a2 = float(halfwidth_sq) if halfwidth_sq is not None else self.a**2
        self.sup = self.a
        self.inf = -self.a

    @staticmethod
    def _poly(x2, coeffs):
        out = np.zeros_like(x2)
        for c in coeffs[::-1]:
            out = out * x2 + c
        return out

    def _parts(self, t):
        t = np.asarray(t, dtype=float)
        x = self.a * t
        small = np.abs(x) < _SERIES_X
        x2 = self.a2 * t * t
        return t, x, x2, small

    def _cgf(self, t):
        t, x, x2, small = self._parts(t)
        ax = np.where(small, 1.0, np.abs(x))
        big = ax - math.log(2.0) + np.log1p(-np.exp(-2.0 * ax)) - np.log(ax)
        series = x2 * self._poly(x2, _LOGSINHC)
        out = np.where(small, series, big)
        return float(out) if out.ndim == 0 else out

    def _dcgf(self, t):
        t, x, x2, small = self._parts(t)
        n = np.arange(1, len(_LOGSINHC) + 1)
        # d/dt sum c_n a^2n t^2n = sum 2n c_n a^2n t^(2n-1)
        series = self.a2 * t * self._poly(x2, 2 * n * _LOGSINHC)
        safe_t = np.where(small, 1.0, t)
        big = self.a / np.tanh(self.a * safe_t) - 1.0 / safe_t
        out = np.where(small, series, big)
        return float(out) if out.ndim == 0 else out

    def _d2cgf(self, t):
        t, x, x2, small = self._parts(t)
        n = np.arange(1, len(_LOGSINHC) + 1)
        series = self.a2 * self._poly(x2, 2 * n * (2 * n - 1) * _LOGSINHC)
        safe_t = np.where(small, 1.0, t)
        with np.errstate(over="ignore"):
            big = 1.0 / safe_t**2 - self.a2 / np.sinh(self.a * safe_t) ** 2
        out = np.where(small, series, big)
        return float(out) if out.ndim == 0 else out

    def draw(self, rng, size):
        return rng.uniform(-self.a, self.a, size)

    def _draw_tilted(self, rng, size, theta):
        u = rng.random(size)
        if abs(theta * self.a) < 1e-12:
            return -self.a + 2.0 * self.a * u
        if theta > 0:
            return -self.a + np.log1p(u * math.expm1(2.0 * theta * self.a)) / theta
        return self.a + np.log1p(u * math.expm1(-2.0 * theta * self.a)) / theta

    def cumulant(self, order):
        if order < 1:
            raise CapabilityError("cumulant order must be >= 1")
        if order > MAX_CATALOG_CUMULANT:
            raise CapabilityError(f"cumulant order {order} > {MAX_CATALOG_CUMULANT}")
        return _uniform_cumulant(self.a2, order)


class StdExponential(Distribution):
    """E - 1 with E ~ Exp(1)."""

    family = "exponential_std"
    cgf_domain_right = 1.0
    inf = -1.0
    tail_regularity = (1.0, 1.0)

    def _cgf(self, t):
        t = np.asarray(t, dtype=float)
        out = -t - np.log1p(-t)
        return float(out) if out.ndim == 0 else out

    def _dcgf(self, t):
        t = np.asarray(t, dtype=float)
        out = t / (1.0 - t)
        return float(out) if out.ndim == 0 else out

    def _d2cgf(self, t):
        t = np.asarray(t, dtype=float)
        out = 1.0 / (1.0 - t) ** 2
        return float(out) if out.ndim == 0 else out

    def draw(self, rng, size):
        return rng.standard_exponential(size) - 1.0

    def _draw_tilted(self, rng, size, theta):
        return rng.standard_exponential(size) / (1.0 - theta) - 1.0

    def cumulant(self, order):
        if order < 1:
            raise CapabilityError("cumulant order must be >= 1")
        if order > MAX_CATALOG_CUMULANT:
            raise CapabilityError(f"cumulant order {order} > {MAX_CATALOG_CUMULANT}")
        return 0.0 if order == 1 else float(math.factorial(order - 1))


class StdPoisson(Distribution):
    """(N - rate)/sqrt(rate) with N ~ Poisson(rate)."""

    family = "poisson_std"

    def __init__(self, rate: float):
        self.rate = float(rate)
        self.scale = math.sqrt(self.rate)
        self.inf = -self.scale

    def _cgf(self, t):
        t = np.asarray(t, dtype=float)
        out = self.rate * np.expm1(t / self.scale) - t * self.scale
        return float(out) if out.ndim == 0 else out

    def _dcgf(self, t):
        t = np.asarray(t, dtype=float)
        out = self.scale * np.expm1(t / self.scale)
        return float(out) if out.ndim == 0 else out

    def _d2cgf(self, t):
        t = np.asarray(t, dtype=float)
        out = np.exp(t / self.scale)
        return float(out) if out.ndim == 0 else out

    def draw(self, rng, size):
        return (rng.poisson(self.rate, size) - self.rate) / self.scale

    def _draw_tilted(self, rng, size, theta):
        lam = self.rate * math.exp(theta / self.scale)
        return (rng.poisson(lam, size) - self.rate) / self.scale

    def cumulant(self, order):
        if order < 1:
            raise CapabilityError("cumulant order must be >= 1")
        if order > MAX_CATALOG_CUMULANT:
            raise CapabilityError(f"cumulant order {order} > {MAX_CATALOG_CUMULANT}")
        return 0.0 if order == 1 else self.rate ** (1.0 - order / 2.0)

    def lattice(self):
        span = 1.0 / self.scale
        return Lattice(span=span, offset=_offset(-self.scale, span))


class Convolution(Distribution):
    """(X_1 + ... + X_m)/sqrt(m) for i.i.d. copies of a standardized base."""

    family = "binomial_convolution"

    def __init__(self, base: Distribution, m: int):
        self.base = base
        self.m = int(m)
        self.root = math.sqrt(self.m)
        self.cgf_domain_right = base.cgf_domain_right * self.root
        self.cgf_domain_left = base.cgf_domain_left * self.root
        self.sup = base.sup * self.root
        self.inf = base.inf * self.root
        self.tail_regularity = None
        self._atoms = None
        ab = base.atoms()
        if ab is not None:
            vals, probs = ab
            cur_v, cur_p = np.zeros(1), np.ones(1)
            for _ in range(self.m):
                v = np.add.outer(cur_v, vals).ravel()
                p = np.multiply.outer(cur_p, probs).ravel()
                v = np.round(v, 12)
                uniq, inv = np.unique(v, return_inverse=True)
                cur_v, cur_p = uniq, np.bincount(inv, weights=p)
            self._atoms = Atoms(cur_v / self.root, cur_p)

    def _cgf(self, t):
        return self.m * self.base._cgf(np.asarray(t) / self.root)

    def _dcgf(self, t):
        return self.root * self.base._dcgf(np.asarray(t) / self.root)

    def _d2cgf(self, t):
        return self.base._d2cgf(np.asarray(t) / self.root)

    def draw(self, rng, size):
        shape = (size,) if np.isscalar(size) else tuple(size)
        return self.base.draw(rng, shape + (self.m,)).sum(axis=-1) / self.root

    def _draw_tilted(self, rng, size, theta):
        shape = (size,) if np.isscalar(size) else tuple(size)
        x = self.base._draw_tilted(rng, shape + (self.m,), theta / self.root)
        return x.sum(axis=-1) / self.root

    def atoms(self):
        return None if self._atoms is None else self._atoms.atoms()

    def tilt(self, theta):
        if self._atoms is not None:
            self.check_domain(theta)
            return self._atoms.tilt(theta)
        return super().tilt(theta)

    def cumulant(self, order):
        return self.m * self.base.cumulant(order) / self.root**order

    def lattice(self):
        if self._atoms is not None:
            return self._atoms.lattice()
        lat = self.base.lattice()
        if lat is None:
            return None
        span = lat.span / self.root
        return Lattice(span=span, offset=_offset(self.m * lat.offset / self.root, span))


class Jittered(Distribution):
    """(B + J)/sigma with J ~ Uniform(-width, width) independent of base B."""

    family = "jittered"

    def __init__(self, base: Distribution, width: float):
        self.base = base
        self.jitter = Uniform(width)
        self.width = float(width)
        self.sigma = math.sqrt(1.0 + width**2 / 3.0)
        self.cgf_domain_right = base.cgf_domain_right * self.sigma
        self.cgf_domain_left = base.cgf_domain_left * self.sigma
        self.sup = (base.sup + width) / self.sigma
        self.inf = (base.inf - width) / self.sigma

    def _cgf(self, t):
        u = np.asarray(t, dtype=float) / self.sigma
        return self.base._cgf(u) + self.jitter._cgf(u)

    def _dcgf(self, t):
        u = np.asarray(t, dtype=float) / self.sigma
        return (self.base._dcgf(u) + self.jitter._dcgf(u)) / self.sigma

    def _d2cgf(self, t):
        u = np.asarray(t, dtype=float) / self.sigma
        return (self.base._d2cgf(u) + self.jitter._d2cgf(u)) / self.sigma**2

    def draw(self, rng, size):
        b = self.base.draw(rng, size)
        return (b + self.jitter.draw(rng, size)) / self.sigma

    def _draw_tilted(self, rng, size, theta):
        u = theta / self.sigma
        b = self.base.tilt(u).draw(rng, size)
        return (b + self.jitter._draw_tilted(rng, size, u)) / self.sigma

    def cumulant(self, order):
        return (self.base.cumulant(order) + self.jitter.cumulant(order)) / self.sigma**order


class Tilted(Distribution):
    """Exponential tilt of a base law by theta."""

    family = "tilted"

    def __init__(self, base: Distribution, theta: float):
        self.base = base
        self.theta = theta
        self._shift = float(base._cgf(theta))
        self.cgf_domain_right = base.cgf_domain_right - theta
        self.cgf_domain_left = base.cgf_domain_left + theta
        self.sup, self.inf = base.sup, base.inf

    def _cgf(self, t):
        return self.base._cgf(np.asarray(t) + self.theta) - self._shift

    def _dcgf(self, t):
        return self.base._dcgf(np.asarray(t) + self.theta)

    def _d2cgf(self, t):
        return self.base._d2cgf(np.asarray(t) + self.theta)

    def draw(self, rng, size):
        return self.base._draw_tilted(rng, size, self.theta)

    def lattice(self):
        return self.base.lattice()


class Affine(Distribution):
    """Law of scale*X + shift; used for the Pickands increments Y = tX - cgf(t)."""

    family = "affine"

    def __init__(self, base: Distribution, scale: float, shift: float):
        if scale <= 0:
            raise DomainError("affine scale must be positive", bound=0.0)
        self.base, self.scale, self.shift = base, float(scale), float(shift)
        self.cgf_domain_right = base.cgf_domain_right / scale
        self.cgf_domain_left = base.cgf_domain_left / scale
        self.sup = scale * base.sup + shift
        self.inf = scale * base.inf + shift

    def _cgf(self, t):
        t = np.asarray(t, dtype=float)
        return self.base._cgf(self.scale * t) + self.shift * t

    def _dcgf(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * self.base._dcgf(self.scale * t) + self.shift

    def _d2cgf(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale**2 * self.base._d2cgf(self.scale * t)

    def draw(self, rng, size):
        return self.scale * self.base.draw(rng, size) + self.shift

    def tilt(self, theta):
        self.check_domain(theta)
        return Affine(self.base.tilt(self.scale * theta), self.scale, self.shift)

    def atoms(self):
        ab = self.base.atoms()
        if ab is None:
            return None
        return self.scale * ab[0] + self.shift, ab[1]

    def lattice(self):
        lat = self.base.lattice()
        if lat is None:
            return None
        span = self.scale * lat.span
        return Lattice(span=span, offset=_offset(self.scale * lat.offset + self.shift, span))


def _standardized_atoms(values, probs, family: str, record: dict) -> Atoms:
    v = np.asarray(values, dtype=float)
    p = np.asarray(probs, dtype=float)
    mu = float(np.sum(p * v))
    var = float(np.sum(p * (v - mu) ** 2))
    if not var > 1e-300:
        raise DegenerateDistributionError(f"{family}: zero variance, cannot standardize")
    out = Atoms((v - mu) / math.sqrt(var), p)
    out.family = family
    out.record = record
    return out


def _require(params: dict, key: str, family: str):
    if key not in params:
        raise SchemaError(f"{family}: missing parameter {key!r}")
    return params[key]


def make_distribution(source: dict | str) -> Distribution:
    """Build a standardized law from ``{"family": ..., "params": {...}}``."""
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid distribution JSON: {exc}") from None
    if not isinstance(source, dict) or "family" not in source:
        raise SchemaError("distribution record needs a 'family' field")
    family = source["family"]
    params = source.get("params", {}) or {}
    if not isinstance(params, dict):
        raise SchemaError("'params' must be an object")

    if family == "gaussian":
        dist: Distribution = Gaussian()
    elif family == "bernoulli_symmetric":
        dist = _standardized_atoms([1.0, -1.0], [0.5, 0.5], family, source)
    elif family == "bernoulli":
        p = _require(params, "p", family)
        if not isinstance(p, (int, float)) or not 0.0 < p < 1.0:
            raise SchemaError(f"bernoulli: p must lie in (0,1), got {p!r}")
        dist = _standardized_atoms([1.0, -1.0], [p, 1.0 - p], family, source)
    elif family == "tabulated":
        atoms = _require(params, "atoms", family)
        try:
            vals = [float(a[0]) for a in atoms]
            probs = [float(a[1]) for a in atoms]
        except (TypeError, IndexError, ValueError):
            raise SchemaError("tabulated: atoms must be [[value, prob], ...]") from None
        if not vals or any(q < 0 or not math.isfinite(q) for q in probs):
            raise SchemaError("tabulated: probabilities must be finite and non-negative")
        if any(not math.isfinite(v) for v in vals):
            raise SchemaError("tabulated: values must be finite")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise SchemaError(f"tabulated: probabilities sum to {math.fsum(probs)!r}, not 1")
        keep = [(v, q) for v, q in zip(vals, probs) if q > 0]
        dist = _standardized_atoms([k[0] for k in keep], [k[1] for k in keep], family, source)
    elif family == "uniform_pm_sqrt3":
        dist = Uniform(SQRT3, 3.0)
    elif family == "exponential_std":
        dist = StdExponential()
    elif family == "poisson_std":
        rate = _require(params, "rate", family)
        if not isinstance(rate, (int, float)) or not rate > 0:
            raise SchemaError(f"poisson_std: rate must be positive, got {rate!r}")
        dist = StdPoisson(rate)
    elif family == "binomial_convolution":
        base = make_distribution(_require(params, "base", family))
        m = _require(params, "m", family)
        if not isinstance(m, int) or m < 1:
            raise SchemaError(f"binomial_convolution: m must be a positive integer, got {m!r}")
        dist = Convolution(base, m)
    elif family == "jittered":
        base = make_distribution(_require(params, "base", family))
        width = _require(params, "width", family)
        if not isinstance(width, (int, float)) or not width > 0:
            raise SchemaError(f"jittered: width must be positive, got {width!r}")
        dist = Jittered(base, float(width))
    else:
        raise SchemaError(f"unknown distribution family {family!r}")
    dist.family = family
    dist.record = source
    return dist


def dist_to_json(dist: Distribution) -> str:
    return json.dumps(dist.to_json(), sort_keys=True, separators=(",", ":"))


def sample(dist: Distribution, seed: int, count: int, stream: int | tuple = 0) -> np.ndarray:
    """``count`` i.i.d. draws, deterministic in (dist, seed, stream)."""
    if count < 1:
        raise SchemaError("count must be >= 1")
    return dist.draw(rng_for(seed, stream), int(count))


def cgf(dist: Distribution, t):
    return dist.cgf(t)


def cumulant(dist: Distribution, order: int) -> float:
    if order < 1:
        raise CapabilityError("cumulant order must be >= 1")
    return dist.cumulant(order)


def lattice_info(dist: Distribution) -> Lattice | None:
    """``None`` means nonlattice."""
    return dist.lattice()


def lattice_json(dist: Distribution) -> dict[str, Any]:
    lat = dist.lattice()
    return NONLATTICE_JSON if lat is None else lat.to_json()
