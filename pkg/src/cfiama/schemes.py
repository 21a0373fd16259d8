"""Benchmark access schemes and the scheme registry.

All benchmarks share the structural constraints of the interference-aware
pipeline: at most tau_p master UEs per AP, one served UE per (AP, pilot),
masters never evicted, and the master-pilot conflict repair applied after
every pilot (re)assignment.
"""

from __future__ import annotations

import numpy as np

from .access import (AccessState, iama, repair_master_pilot_conflicts,
                     select_masters)


def _serve_best_per_pilot(metric, pilots, masters, a, tau_p):
    """Every AP serves, per pilot, the UE with the largest metric value.

    Master-held (AP, pilot) slots are left to the masters. Mutates and
    returns a.
    """
    for t in range(tau_p):
        members = np.flatnonzero(pilots == t)
        if members.size == 0:
            continue
        sub = metric[members]
        best_ue = members[sub.argmax(axis=0)]
        master_held = np.zeros(metric.shape[1], dtype=bool)
        master_held[masters[members]] = True
        free = np.flatnonzero(~master_held)
        a[best_ue[free], free] = 1
    return a


def random_access(beta, tau_p, rng):
    """Uniform i.i.d. pilots; masters and service rules as in the scalable
    baseline."""
    K = beta.shape[0]
    masters, a, b = select_masters(beta, tau_p)
    pilots = rng.integers(0, tau_p, size=K)
    pilots = repair_master_pilot_conflicts(beta, pilots, masters, tau_p)
    a = _serve_best_per_pilot(beta, pilots, masters, a, tau_p)
    return AccessState(pilots=pilots, a=a, b=b, masters=masters)


def scalable_access(beta, tau_p):
    """Deterministic sequential baseline.

    UEs in index order pick the best-gain AP still having master capacity;
    the master assigns the pilot with the least contamination at itself.
    Every AP then serves the strongest UE per pilot.
    """
    K, L = beta.shape
    masters = np.empty(K, dtype=np.int64)
    pilots = np.empty(K, dtype=np.int64)
    capacity = np.full(L, tau_p, dtype=np.int64)
    for k in range(K):
        row = np.where(capacity > 0, beta[k], -np.inf)
        m = int(row.argmax())
        masters[k] = m
        capacity[m] -= 1
        contamination = np.zeros(tau_p)
        for t in range(tau_p):
            contamination[t] = beta[:k][pilots[:k] == t, m].sum()
        pilots[k] = int(contamination.argmin())
    pilots = repair_master_pilot_conflicts(beta, pilots, masters, tau_p)
    a = np.zeros((K, L), dtype=np.int8)
    a[np.arange(K), masters] = 1
    a = _serve_best_per_pilot(beta, pilots, masters, a, tau_p)
    return AccessState(pilots=pilots, a=a, b=np.zeros((K, L), dtype=np.int8),
                       masters=masters)


def contamination_proxy(beta, pilots, a, k, t):
    """Received contamination of UE k on pilot t: sum over its serving APs
    of the gains of the other pilot-t UEs."""
    serving = np.flatnonzero(a[k])
    others = np.flatnonzero(pilots == t)
    others = others[others != k]
    if others.size == 0 or serving.size == 0:
        return 0.0
    return float(beta[np.ix_(others, serving)].sum())


def greedy_access(beta, tau_p, rng, n_iters=None, trace=None):
    """Iterative pilot refinement of the random baseline.

    For up to n_iters (default K) rounds, the UE with the largest received
    contamination moves to its least-contaminated pilot; service is rebuilt
    after each move. Stops early once the worst UE is already on its best
    pilot. Accepted moves strictly decrease the moved UE's contamination;
    pass a list as `trace` to record (before, after) pairs.
    """
    K, L = beta.shape
    state = random_access(beta, tau_p, rng)
    pilots, masters = state.pilots, state.masters
    n_iters = K if n_iters is None else n_iters
    a = state.a
    pilot_ids = np.arange(tau_p)
    for _ in range(n_iters):
        member = pilots[None, :] == pilot_ids[:, None]
        gain_sums = member.astype(float) @ beta          # (tau_p, L)
        proxies = (a * (gain_sums[pilots] - beta)).sum(axis=1)
        worst = int(proxies.argmax())
        options = gain_sums @ (a[worst].astype(float))
        options[pilots[worst]] -= float((a[worst] * beta[worst]).sum())
        best_t = int(options.argmin())
        if best_t == pilots[worst]:
            break
        if trace is not None:
            trace.append((float(options[pilots[worst]]), float(options[best_t])))
        pilots[worst] = best_t
        pilots = repair_master_pilot_conflicts(beta, pilots, masters, tau_p)
        a = np.zeros((K, L), dtype=np.int8)
        a[np.arange(K), masters] = 1
        a = _serve_best_per_pilot(beta, pilots, masters, a, tau_p)
    return AccessState(pilots=pilots, a=a, b=state.b, masters=masters)


# registry used by the experiment runner; rng streams are keyed by these
# fixed per-scheme indices so a run's scheme subset never changes another
# scheme's draws
SCHEME_ORDER = ("iarmin", "iarsum", "scalable", "greedy", "random")


def build_access(scheme, beta, config, rng):
    if scheme == "iarmin":
        return iama(beta, config, rng, goal="min")
    if scheme == "iarsum":
        return iama(beta, config, rng, goal="sum")
    if scheme == "scalable":
        return scalable_access(beta, config.tau_p)
    if scheme == "greedy":
        return greedy_access(beta, config.tau_p, rng)
    if scheme == "random":
        return random_access(beta, config.tau_p, rng)
    raise ValueError(f"unknown scheme '{scheme}'")
