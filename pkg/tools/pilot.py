"""Pilot runs that calibrate the frozen bands used by the acceptance tests.

Pilots use seeds disjoint from the acceptance seeds.  Run with
``python3 tools/pilot.py > tools/pilot_results.json`` and then freeze the
bands in tests/frozen_bands.json by hand.
"""

from __future__ import annotations

import json
import math
import sys
import time

from scanlaw.cgf import classify
from scanlaw.distributions import make_distribution
from scanlaw.harness import argmax_length_profile, run_hitting_experiment, run_mn_experiment, theory_window
from scanlaw.laws import hitting_threshold
from scanlaw.pickands import hstar_spitzer, tilt

JITTERED = {"family": "jittered", "params": {"base": {"family": "bernoulli", "params": {"p": 0.3}}, "width": 0.5}}
PILOT_SEEDS = (90210, 90211, 90212)
HITTING_LEVEL = 1e4


def log_law(seed):
    dist = make_distribution(JITTERED)
    case = classify(dist)
    est = hstar_spitzer(tilt(dist, case.t_star), 200, exact=False, reps=20000, seed=seed)
    return dist, case.with_hstar(est.value), est


def log(msg, t0):
    print(f"[{time.time() - t0:7.1f}s] {msg}", file=sys.stderr, flush=True)


def main() -> None:
    out = {"seeds": list(PILOT_SEEDS)}
    t0 = time.time()
    dist, case, est = log_law(PILOT_SEEDS[0])
    out["jittered_hstar"] = {"value": est.value, "stderr": est.stderr}

    trend = {}
    for seed in PILOT_SEEDS:
        row = {}
        for n in (10**3, 10**4, 10**5):
            s = run_mn_experiment(dist, case, n, 2000, "theory", seed=seed)
            row[n] = {"ks": s.ks, "window": list(s.window), "audit": s.audit["agreement_fraction"]}
            log(f"gumbel seed={seed} n={n} {row[n]}", t0)
        trend[seed] = row
    out["gumbel_trend"] = trend

    u = hitting_threshold(case, HITTING_LEVEL)
    cap = theory_window(case, int(HITTING_LEVEL))[1]
    hit = {}
    for seed in PILOT_SEEDS:
        hs = run_hitting_experiment(dist, case, u, 500, seed, n_cap=2_000_000, window_cap=cap)
        hit[seed] = {"mean_normalized": float(hs.normalized().mean()), "censored": hs.censored}
        log(f"hitting seed={seed} {hit[seed]}", t0)
    out["hitting"] = {"inverse_theta": 1 / case.theta_total, "window_cap": cap, "runs": hit}

    sym = make_distribution({"family": "bernoulli_symmetric"})
    scase = classify(sym)
    s = run_mn_experiment(sym, scase, 10**5, 2000, "theory", seed=PILOT_SEEDS[0])
    prof = argmax_length_profile(s, scase)
    out["length_concentration"] = {"median": prof["median"], "a_star": scase.a_star, "window": list(s.window),
                                   "audit": s.audit["agreement_fraction"]}
    log(f"lengths {out['length_concentration']}", t0)

    ex = make_distribution({"family": "exponential_std"})
    ecase = classify(ex)
    collapse = {}
    for seed in PILOT_SEEDS:
        collapse[seed] = {n: run_mn_experiment(ex, ecase, n, 1000, "full", seed=seed).u_fraction
                          for n in (10**2, 10**3, 10**4)}
        log(f"collapse seed={seed} {collapse[seed]}", t0)
    out["sublog_collapse"] = collapse
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    print()


if __name__ == "__main__":
    main()
