"""Exact multiscale scan statistic over prefix sums.

M_n(h1, h2) = max over 0 <= i < j <= n with h1 <= j - i <= h2 of
(S_j - S_i) / sqrt(j - i).  Ties go to the smallest i, then the smallest j.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .distributions import Distribution, rng_for
from .errors import ArgumentError

LENGTH_CHUNK = 64  # fixed length-chunk size for the parallel reduction
PRUNE_BASE = 256  # lengths above this are handled by the block-bounded kernel
PRUNE_RATIO = 1.25  # geometric growth of the length blocks


@dataclass(frozen=True)
class ScanResult:
    value: float
    i: int
    j: int
    h1: int
    h2: int

    @property
    def length(self) -> int:
        return self.j - self.i

    def to_json(self) -> dict:
        d = asdict(self)
        return {"value": d["value"], "i": self.i, "j": self.j, "length": self.length, "h1": self.h1, "h2": self.h2}


@njit(cache=True, nogil=True)
def _kahan_prefix(x, start, comp):
    n = x.shape[0]
    out = np.empty(n + 1)
    out[0] = start
    total = start
    c = comp
    for k in range(n):
        y = x[k] - c
        t = total + y
        c = (t - total) - y
        total = t
        out[k + 1] = total
    return out, c


def prefix_sums(data) -> np.ndarray:
    """Kahan-compensated S_0 = 0, S_k = x_1 + ... + x_k."""
    x = np.ascontiguousarray(data, dtype=np.float64)
    return _kahan_prefix(x, 0.0, 0.0)[0]


@njit(cache=True, nogil=True, fastmath={"nnan", "nsz"})
def _row_screen(s, i, jlo, jhi, inv):
    # upper estimate of the row maximum; multiplication vectorizes, division does not
    si = s[i]
    m = (s[jlo] - si) * inv[jlo - i]
    for j in range(jlo + 1, jhi + 1):
        m = max(m, (s[j] - si) * inv[j - i])
    return m


@njit(cache=True, nogil=True)
def _scan_kernel(s, h1, h2):
    n = s.shape[0] - 1
    roots = np.sqrt(np.arange(h2 + 1).astype(np.float64))
    inv = 1.0 / roots
    best = -np.inf
    bi = -1
    bj = -1
    for i in range(0, n - h1 + 1):
        jmax = min(n, i + h2)
        m = _row_screen(s, i, i + h1, jmax, inv)
        # rows that cannot reach ``best`` (up to rounding of the reciprocal) are skipped
        if m + abs(m) * 1e-14 + 1e-300 < best:
            continue
        si = s[i]
        for j in range(i + h1, jmax + 1):
            v = (s[j] - si) / roots[j - i]
            if v > best:
                best = v
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True, nogil=True)
def _window_min(s, lo, hi):
    # out[j] = min(s[j-hi .. j-lo]) for j >= lo, via a monotone deque
    n = s.shape[0] - 1
    out = np.full(n + 1, np.inf)
    dq = np.empty(n + 1, dtype=np.int64)
    head = 0
    tail = 0
    for j in range(lo, n + 1):
        k = j - lo
        while tail > head and s[dq[tail - 1]] >= s[k]:
            tail -= 1
        dq[tail] = k
        tail += 1
        while dq[head] < j - hi:
            head += 1
        out[j] = s[dq[head]]
    return out


@njit(cache=True, nogil=True)
def _improves(v, i, j, best, bi, bj):
    if v != best:
        return v > best
    return i < bi or (i == bi and j < bj)


@njit(cache=True, nogil=True)
def _pruned_kernel(s, h1, h2, base, ratio):
    """Exact scan of lengths in [h1, h2].

    Lengths up to ``base`` use the row kernel.  Longer lengths are cut into
    blocks [lo, hi]; for each end point j the block value is at most
    (S_j - min S_i) / sqrt(lo), and only end points whose bound can still
    match the running best are scanned exactly.
    """
    n = s.shape[0] - 1
    top = min(h2, max(h1, base))
    best, bi, bj = _scan_kernel(s, h1, top)
    lo = top + 1
    while lo <= h2:
        hi = min(h2, max(lo, int(lo * ratio)))
        mins = _window_min(s, lo, hi)
        rlo = math.sqrt(lo)
        rhi = math.sqrt(hi)
        for j in range(lo, n + 1):
            d = s[j] - mins[j]
            bound = d / rlo if d >= 0 else d / rhi
            if bound + abs(bound) * 1e-12 + 1e-300 < best:
                continue
            sj = s[j]
            for ell in range(lo, min(hi, j) + 1):
                v = (sj - s[j - ell]) / math.sqrt(ell)
                if _improves(v, j - ell, j, best, bi, bj):
                    best = v
                    bi = j - ell
                    bj = j
        lo = hi + 1
    return best, bi, bj


def _check_window(n: int, h1: int, h2: int) -> None:
    if n < 1:
        raise ArgumentError("scan needs at least one observation")
    if not (isinstance(h1, (int, np.integer)) and isinstance(h2, (int, np.integer))):
        raise ArgumentError("window bounds must be integers")
    if h1 < 1 or h1 > n:
        raise ArgumentError(f"h1={h1} must satisfy 1 <= h1 <= n={n}")
    if h2 < h1 or h2 > n:
        raise ArgumentError(f"h2={h2} must satisfy h1 <= h2 <= n={n}")


def _better(a, b):
    # (value, i, j): larger value wins, then smaller i, then smaller j
    if a[0] != b[0]:
        return a if a[0] > b[0] else b
    return a if (a[1], a[2]) <= (b[1], b[2]) else b


def scan_prefix(s: np.ndarray, h1: int, h2: int, threads: int = 1) -> ScanResult:
    """Restricted scan on a prefix-sum array ``s`` (length n + 1)."""
    n = len(s) - 1
    _check_window(n, h1, h2)
    if h2 > max(h1, PRUNE_BASE):
        # exact for any window; the bound makes thread splitting unnecessary
        v, i, j = _pruned_kernel(s, int(h1), int(h2), PRUNE_BASE, PRUNE_RATIO)
        return ScanResult(float(v), int(i), int(j), int(h1), int(h2))
    if threads <= 1 or h2 - h1 + 1 <= LENGTH_CHUNK:
        v, i, j = _scan_kernel(s, int(h1), int(h2))
        return ScanResult(float(v), int(i), int(j), int(h1), int(h2))
    bounds = [(lo, min(lo + LENGTH_CHUNK - 1, h2)) for lo in range(h1, h2 + 1, LENGTH_CHUNK)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda b: _scan_kernel(s, b[0], b[1]), bounds))
    best = parts[0]
    for p in parts[1:]:
        best = _better(best, p)
    return ScanResult(float(best[0]), int(best[1]), int(best[2]), int(h1), int(h2))


def scan_restricted(data, h1: int, h2: int, threads: int = 1) -> ScanResult:
    """Exact maximum over all intervals with h1 <= length <= h2."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ArgumentError("data must be a non-empty 1-d sequence")
    return scan_prefix(prefix_sums(x), h1, h2, threads)


def scan_full(data, block: int = 256) -> ScanResult:
    """Exhaustive O(n^2) scan in plain numpy; the reference for scan_restricted."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ArgumentError("data must be a non-empty 1-d sequence")
    s = prefix_sums(x)
    n = x.size
    idx = np.arange(n + 1)
    best = (-np.inf, -1, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        for start in range(0, n, block):
            rows = idx[start : min(start + block, n)]
            lengths = idx[None, :] - rows[:, None]
            vals = (s[None, :] - s[rows][:, None]) / np.sqrt(np.maximum(lengths, 1))
            vals = np.where(lengths >= 1, vals, -np.inf)
            flat = int(np.argmax(vals))
            r, c = divmod(flat, n + 1)
            cand = (float(vals[r, c]), int(rows[r]), int(c))
            if cand[0] > best[0]:
                best = cand
    return ScanResult(best[0], best[1], best[2], 1, n)


def scan_two_sided(data, h1: int, h2: int, threads: int = 1) -> tuple[ScanResult, ScanResult]:
    """(M_n^+, M_n^-); the second is the scan of the negated data."""
    x = np.asarray(data, dtype=np.float64)
    return scan_restricted(x, h1, h2, threads), scan_restricted(-x, h1, h2, threads)


def abs_scan_value(plus: ScanResult, minus: ScanResult) -> float:
    return max(plus.value, minus.value)


@njit(cache=True, nogil=True)
def _first_exceedance(s, start, stop, u, w):
    for j in range(start, stop + 1):
        lmax = j if w <= 0 else min(w, j)
        sj = s[j]
        for ell in range(1, lmax + 1):
            if (sj - s[j - ell]) / math.sqrt(ell) > u:
                return j
    return -1


@dataclass(frozen=True)
class HittingResult:
    time: int | None
    u: float
    n_cap: int
    window_cap: int | None

    def to_json(self) -> dict:
        return {
            "time": self.time,
            "u": self.u,
            "n_cap": self.n_cap,
            "window_cap": self.window_cap,
            "windowed": self.window_cap is not None,
        }


def hitting_time(
    dist: Distribution,
    u: float,
    seed: int,
    n_cap: int,
    window_cap: int | None = None,
    stream: int | tuple = 0,
    chunk: int = 4096,
) -> HittingResult:
    """First n <= n_cap with M_n > u, streaming one chunk of draws at a time.

    With ``window_cap`` only intervals of length <= window_cap are examined;
    that shortcut is the caller's responsibility and is flagged in the result.
    """
    if n_cap < 1:
        raise ArgumentError("n_cap must be >= 1")
    rng = rng_for(seed, stream)
    w = 0 if window_cap is None else int(window_cap)
    s = np.zeros(min(n_cap, chunk) + 1)
    total, comp = 0.0, 0.0
    filled = 0
    while filled < n_cap:
        m = min(chunk, n_cap - filled)
        x = np.ascontiguousarray(dist.draw(rng, m), dtype=np.float64)
        pref, comp = _kahan_prefix(x, total, comp)
        total = pref[-1]
        if filled + m + 1 > len(s):
            grown = np.empty(max(2 * len(s), filled + m + 1))
            grown[: filled + 1] = s[: filled + 1]
            s = grown
        s[filled + 1 : filled + m + 1] = pref[1:]
        hit = _first_exceedance(s, filled + 1, filled + m, float(u), w)
        filled += m
        if hit >= 0:
            return HittingResult(int(hit), float(u), int(n_cap), window_cap)
    return HittingResult(None, float(u), int(n_cap), window_cap)


def read_data(path: str | Path) -> np.ndarray:
    """One-column CSV or newline-delimited floats; an optional header line."""
    text = Path(path).read_text(encoding="utf-8")
    values = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text))):
        if not row or not row[0].strip():
            continue
        try:
            values.append(float(row[0]))
        except ValueError:
            if values or lineno > 0:
                raise ArgumentError(f"{path}: line {lineno + 1}: not a number: {row[0]!r}") from None
    if not values:
        raise ArgumentError(f"{path}: no data")
    return np.asarray(values, dtype=np.float64)
