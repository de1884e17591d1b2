"""Pickands-type constant H* of the logarithmic case, estimated two ways.

Forward increments are Y = t X - cgf(t), so E exp(Y) = 1 and E Y < 0.
Backward increments Y_- have law exp(y) P[Y in dy].  The two-sided walk is
W_k = Y_1 + ... + Y_k and W_{-k} = -(Y_{-1} + ... + Y_{-k}); both halves
drift to -inf.

* ``hstar_direct`` estimates (1/B) E max_{k<=B} exp(W_k) for a schedule of
  B and extrapolates in 1/B.  Plain Monte Carlo of exp(max W) is useless
  here (the mean is carried by exponentially rare paths), so the default
  estimator changes measure at the last argmax J: E max exp(W_k) equals
  sum_j P[J = j under the j-fold tilt], a probability of the two-sided
  walk staying below its value at J.
* ``hstar_spitzer`` evaluates R_+ R_- with R_+ = exp(-sum P[W_k > 0]/k),
  R_- = exp(-sum P[W_{-k} >= 0]/k), exactly on a lattice or by Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cgf import golden_max
from .distributions import Affine, Atoms, Distribution, rng_for
from .errors import ArgumentError, CapabilityError, ConsistencyError, PrecisionError

TIE_TOL = 1e-9
MIN_DIRECT_REPS = 1000


@dataclass
class TiltedWalkSpec:
    forward: Distribution
    backward: Distribution
    t_star: float | None = None
    base: Distribution | None = None
    warnings: list[str] = field(default_factory=list)

    def mean_exp_forward(self) -> float:
        return math.exp(float(self.forward._cgf(1.0)))

    def mean_exp_neg_backward(self) -> float:
        return math.exp(float(self.backward._cgf(-1.0)))

    def drift(self) -> float:
        return float(self.forward._dcgf(0.0))

    def is_exponential_martingale(self, tol: float = 1e-10) -> bool:
        return abs(self.mean_exp_forward() - 1.0) <= tol

    def to_json(self) -> dict:
        return {
            "t_star": self.t_star,
            "E_exp_Y": self.mean_exp_forward(),
            "E_exp_minus_Y_backward": self.mean_exp_neg_backward(),
            "E_Y": self.drift(),
            "warnings": list(self.warnings),
        }


def tilt(base: Distribution, t: float) -> TiltedWalkSpec:
    """Forward/backward increment laws for Y = t X - cgf(t)."""
    base.check_domain(t)
    phi = float(base._cgf(t))
    if t <= 0:
        zero = Atoms([0.0], [1.0])
        spec = TiltedWalkSpec(zero, zero, float(t), base)
        spec.warnings.append("t <= 0: increments are degenerate or drift upward (E Y >= 0)")
        return spec
    forward = Affine(base, t, -phi)
    try:
        backward = Affine(base.tilt(t), t, -phi)
    except CapabilityError:
        raise CapabilityError(f"family {base.family!r} has no tilted sampler") from None
    spec = TiltedWalkSpec(forward, backward, float(t), base)
    if not spec.drift() < 0:
        spec.warnings.append(f"E Y = {spec.drift():.3g} is not negative")
    return spec


@dataclass
class HStarEstimate:
    value: float
    stderr: float
    method: str
    params: dict
    diagnostics: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "method": self.method,
            "params": self.params,
            "diagnostics": self.diagnostics,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------- direct


def _indicator_batch(tw: TiltedWalkSpec, B: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """1{J = j} under the j-fold tilt, j uniform on {0..B}, for m replicates."""
    j = rng.integers(0, B + 1, size=m)
    fwd = np.cumsum(tw.forward.draw(rng, (m, B)), axis=1)
    bwd = np.cumsum(tw.backward.draw(rng, (m, B)), axis=1)
    # forward: the first B - j partial sums stay < 0
    fwd_bad = np.maximum.accumulate(fwd, axis=1) >= 0
    # backward: the first j partial sums of Y_- stay >= 0 (W_{-k} <= 0)
    bwd_bad = np.minimum.accumulate(bwd, axis=1) < 0
    rows = np.arange(m)
    fwd_ok = np.ones(m, dtype=bool)
    has_f = j < B
    fwd_ok[has_f] = ~fwd_bad[rows[has_f], B - j[has_f] - 1]
    bwd_ok = np.ones(m, dtype=bool)
    has_b = j > 0
    bwd_ok[has_b] = ~bwd_bad[rows[has_b], j[has_b] - 1]
    return (fwd_ok & bwd_ok).astype(np.float64)


def _naive_batch(tw: TiltedWalkSpec, B: int, m: int, rng: np.random.Generator) -> np.ndarray:
    w = np.cumsum(tw.forward.draw(rng, (m, B)), axis=1)
    return np.exp(np.maximum(w.max(axis=1), 0.0))


def _per_b(tw, B, reps, seed, method, batch):
    vals = []
    done, chunk_id = 0, 0
    while done < reps:
        m = min(batch, reps - done)
        rng = rng_for(seed, (B, chunk_id))
        vals.append(_indicator_batch(tw, B, m, rng) if method == "importance" else _naive_batch(tw, B, m, rng))
        done += m
        chunk_id += 1
    v = np.concatenate(vals)
    scale = (B + 1) / B if method == "importance" else 1.0 / B
    return scale * float(v.mean()), scale * float(v.std(ddof=1)) / math.sqrt(reps)


def extrapolate_inverse_b(bs, values, errors) -> tuple[float, float]:
    """Least-squares fit of c0 + c1/B; returns (c0, stderr of c0)."""
    x = 1.0 / np.asarray(bs, dtype=float)
    A = np.column_stack([np.ones_like(x), x])
    pinv = np.linalg.pinv(A)
    c0 = float(pinv[0] @ np.asarray(values, dtype=float))
    se = float(math.sqrt(np.sum((pinv[0] * np.asarray(errors, dtype=float)) ** 2)))
    return c0, se


def hstar_direct(
    tw: TiltedWalkSpec,
    B_schedule: list[int],
    reps: int,
    seed: int,
    method: str = "auto",
    batch: int = 2000,
) -> HStarEstimate:
    """(1/B) E max exp(W_k) per B, extrapolated by c0 + c1/B on the last three B."""
    bs = [int(b) for b in B_schedule]
    if len(bs) < 3 or any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])) or bs[0] < 1:
        raise ArgumentError("B_schedule must be at least three increasing positive integers")
    if reps < MIN_DIRECT_REPS:
        raise ArgumentError(f"reps must be >= {MIN_DIRECT_REPS}")
    if not tw.drift() < 0:
        raise ConsistencyError(f"walk drift E Y = {tw.drift():.3g} is not negative")
    warnings = list(tw.warnings)
    if method == "auto":
        method = "importance" if tw.is_exponential_martingale() else "naive"
        if method == "naive":
            warnings.append("E exp(Y) != 1: plain Monte Carlo of max exp(W_k) used")
    if method not in ("importance", "naive"):
        raise ArgumentError(f"unknown direct method {method!r}")
    if method == "importance":
        if not tw.is_exponential_martingale():
            raise ConsistencyError("importance estimator requires E exp(Y) = 1")
    per_b = [_per_b(tw, b, reps, seed, method, batch) for b in bs]
    values = [v for v, _ in per_b]
    errors = [e for _, e in per_b]
    c0, se = extrapolate_inverse_b(bs[-3:], values[-3:], errors[-3:])
    if max(errors) == 0:
        warnings.append("degenerate walk: deterministic estimates, H* interpretation does not apply")
    return HStarEstimate(
        value=c0,
        stderr=se,
        method="direct",
        params={"B_schedule": bs, "reps": int(reps), "seed": int(seed), "estimator": method},
        diagnostics={"per_B": [{"B": b, "value": v, "stderr": e} for b, v, e in zip(bs, values, errors)]},
        warnings=warnings,
    )


# ---------------------------------------------------------------- spitzer


def chernoff_rate_zero(tw: TiltedWalkSpec) -> float:
    """r with P[W_k > 0] <= exp(-k r) and P[W_{-k} >= 0] <= exp(-k r)."""
    f = tw.forward
    if not tw.drift() < 0:
        return 0.0
    right = min(1.0, f.cgf_domain_right * (1 - 1e-9))
    theta = golden_max(lambda th: -float(f._cgf(th)), 0.0, right, tol=1e-12)
    r = -float(f._cgf(theta))
    return max(r, 0.0)


def truncation_remainder(rate_r: float, K: int) -> float:
    """Upper bound on sum_{k>K} exp(-k r)/k."""
    if rate_r <= 0:
        return math.inf
    q = math.exp(-rate_r)
    return q ** (K + 1) / ((K + 1) * (1.0 - q))


def _lattice_parts(tw: TiltedWalkSpec):
    fa, ba = tw.forward.atoms(), tw.backward.atoms()
    if fa is None or ba is None:
        return None
    vals, pf = fa
    vals_b, pb = ba
    if len(vals) == 1 and len(vals_b) == 1 and vals[0] == vals_b[0]:
        span = 1.0  # a point mass sits on every lattice
    else:
        lat = Atoms(np.concatenate([vals, vals_b]), np.ones(len(vals) + len(vals_b))).lattice()
        if lat is None or not math.isfinite(lat.span):
            return None
        span = lat.span
    ymin = float(min(vals.min(), vals_b.min()))
    steps = np.rint((vals - ymin) / span).astype(np.int64)
    steps_b = np.rint((vals_b - ymin) / span).astype(np.int64)
    kf = np.zeros(int(steps.max()) + 1)
    kb = np.zeros_like(kf)
    np.add.at(kf, steps, pf)
    np.add.at(kb, steps_b, pb)
    return ymin, span, kf, kb


def lattice_series(tw: TiltedWalkSpec, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact P[W_k > 0] and P[W_{-k} >= 0] for k = 1..K on a lattice walk."""
    parts = _lattice_parts(tw)
    if parts is None:
        raise CapabilityError("exact Spitzer series needs a lattice atom law")
    ymin, span, kf, kb = parts
    pos = np.empty(K)
    neg = np.empty(K)
    pf = np.ones(1)
    pb = np.ones(1)
    for k in range(1, K + 1):
        pf = np.convolve(pf, kf)
        pb = np.convolve(pb, kb)
        pf[pf < 1e-300] = 0.0
        pb[pb < 1e-300] = 0.0
        # W = k*ymin + span*M ; M0 solves W = 0
        m0 = -k * ymin / span
        m = np.arange(len(pf))
        pos[k - 1] = pf[m > m0 + TIE_TOL].sum()
        # W_{-k} >= 0  <=>  sum of Y_- <= 0
        neg[k - 1] = pb[m < m0 + TIE_TOL].sum()
    return pos, neg


def lattice_survival(tw: TiltedWalkSpec, K: int) -> tuple[float, float]:
    """P[W_k < 0, k=1..K] and P[W_{-k} <= 0, k=1..K] by killed lattice DP.

    Strictness sits on the opposite sides from the Spitzer series, so the
    halves are not R_+ and R_- individually; only the products agree.
    """
    parts = _lattice_parts(tw)
    if parts is None:
        raise CapabilityError("joint DP needs a lattice atom law")
    ymin, span, kf, kb = parts
    pf = np.ones(1)
    pb = np.ones(1)
    for k in range(1, K + 1):
        pf = np.convolve(pf, kf)
        pb = np.convolve(pb, kb)
        m0 = -k * ymin / span
        m = np.arange(len(pf))
        pf[m >= m0 - TIE_TOL] = 0.0  # forward strict: W_k < 0
        pb[m < m0 - TIE_TOL] = 0.0  # backward: sum Y_- >= 0
    return float(pf.sum()), float(pb.sum())


def _mc_series(tw: TiltedWalkSpec, K: int, reps: int, seed: int, batch: int = 5000):
    """Per-replicate sums S+ = sum 1{W_k>0}/k, S- = sum 1{W_{-k}>=0}/k."""
    inv_k = 1.0 / np.arange(1, K + 1)
    sp, sm = [], []
    pos = np.zeros(K)
    neg = np.zeros(K)
    done, chunk_id = 0, 0
    while done < reps:
        m = min(batch, reps - done)
        rng = rng_for(seed, (K, chunk_id))
        wf = np.cumsum(tw.forward.draw(rng, (m, K)), axis=1) > 0
        wb = np.cumsum(tw.backward.draw(rng, (m, K)), axis=1) <= 0
        sp.append(wf @ inv_k)
        sm.append(wb @ inv_k)
        pos += wf.sum(axis=0)
        neg += wb.sum(axis=0)
        done += m
        chunk_id += 1
    return np.concatenate(sp), np.concatenate(sm), pos / reps, neg / reps


def hstar_spitzer(
    tw: TiltedWalkSpec,
    K: int,
    exact: bool | None = None,
    reps: int = 20000,
    seed: int = 0,
    precision: float = 1e-6,
) -> HStarEstimate:
    """R_+ R_- from the first K terms of both series, plus a truncation bound."""
    if K < 16:
        raise ArgumentError("K must be >= 16")
    if not tw.drift() < 0:
        raise ConsistencyError(f"walk drift E Y = {tw.drift():.3g} is not negative")
    r = chernoff_rate_zero(tw)
    rem = truncation_remainder(r, K)
    # both series lose at most ``rem``; H moves by at most H*(1 - exp(-2 rem)) <= 2 rem
    trunc = 2.0 * rem
    if trunc > precision:
        raise PrecisionError(
            f"truncation bound {trunc:.3g} exceeds requested precision {precision:.3g} at K={K} "
            f"(Chernoff rate {r:.4g}); increase K"
        )
    if exact is None:
        exact = _lattice_parts(tw) is not None
    if exact:
        pos, neg = lattice_series(tw, K)
        inv_k = 1.0 / np.arange(1, K + 1)
        s_plus, s_minus = float(pos @ inv_k), float(neg @ inv_k)
        value = math.exp(-s_plus - s_minus)
        mc_se = 0.0
        params = {"K": int(K), "exact": True}
    else:
        sp, sm, pos, neg = _mc_series(tw, K, reps, seed)
        s_plus, s_minus = float(sp.mean()), float(sm.mean())
        value = math.exp(-s_plus - s_minus)
        mc_se = value * float(np.std(sp + sm, ddof=1)) / math.sqrt(reps)
        params = {"K": int(K), "exact": False, "reps": int(reps), "seed": int(seed)}
    return HStarEstimate(
        value=value,
        stderr=mc_se + trunc,
        method="spitzer",
        params=params,
        diagnostics={
            "R_plus": math.exp(-s_plus),
            "R_minus": math.exp(-s_minus),
            "chernoff_rate": r,
            "truncation_bound": trunc,
            "P_W_pos": [float(v) for v in pos],
            "P_Wneg_nonneg": [float(v) for v in neg],
        },
        warnings=list(tw.warnings),
    )


def reconcile(direct: HStarEstimate, spitzer: HStarEstimate, z: float = 3.0) -> dict:
    """Agreement verdict |direct - spitzer| < z * combined stderr."""
    diff = direct.value - spitzer.value
    se = math.hypot(direct.stderr, spitzer.stderr)
    both_inside = 0.0 < direct.value < 1.0 and 0.0 < spitzer.value < 1.0
    return {
        "difference": diff,
        "combined_stderr": se,
        "z_score": diff / se if se > 0 else math.inf,
        "threshold": z,
        "agree": bool(abs(diff) < z * se and both_inside),
        "both_in_unit_interval": both_inside,
    }
