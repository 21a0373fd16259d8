"""Interference-aware massive access: master selection, pilot assignment and
UE-AP association.

The pipeline has three stages, all driven by large-scale coefficients only:

1. master AP selection by capacity-constrained best-gain assignment (MUSA),
2. pilot assignment by local exhaustive reassignment inside per-UE
   neighborhoods, scored by the interference-aware reward (IAR),
3. association of further serving APs (MUMA), greedily for the sum goal or
   with an additional weakest-UE improvement loop for the min goal.

The IAR of a (UE k, AP l, pilot t) triple rewards the own-link gain and
penalizes the product of the strongest co-pilot gain at l and the strongest
gain from k to an AP serving a co-pilot UE:

    iar = kappa * beta[k,l]^mu - max_{i in S_ue} beta[i,l] * max_{j in S_ap} beta[k,j]

with S_ue the co-pilot UEs of k and S_ap their serving APs minus k's own.
If either set is empty the interference product is zero.

Ties are broken everywhere by the lowest index (UE, then AP, then pilot).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import accel

NEG_INF = -np.inf


@dataclass
class AccessState:
    """Joint pilot / association state of one scheme on one setup.

    pilots:  (K,) pilot index per UE in [0, tau_p)
    a:       (K, L) binary association matrix (a[k,l]=1: AP l serves UE k)
    b:       (K, L) binary marking matrix accumulated by the algorithms
    masters: (K,) master AP per UE; a[k, masters[k]] is always 1
    """
    pilots: np.ndarray
    a: np.ndarray
    b: np.ndarray
    masters: np.ndarray

    def validate(self, tau_p):
        """Raise AssertionError on any violated structural constraint."""
        K, L = self.a.shape
        assert self.pilots.shape == (K,) and self.masters.shape == (K,)
        assert np.isin(self.a, (0, 1)).all() and np.isin(self.b, (0, 1)).all()
        assert ((self.pilots >= 0) & (self.pilots < tau_p)).all(), "pilot out of range"
        assert (self.a.sum(axis=1) >= 1).all(), "some UE has no serving AP"
        assert (self.a[np.arange(K), self.masters] == 1).all(), "master not serving"
        for t in range(tau_p):
            per_ap = self.a[self.pilots == t].sum(axis=0)
            assert (per_ap <= 1).all(), f"pilot {t} reused at an AP"
        assert (self.a.sum(axis=0) <= tau_p).all(), "AP serves more than tau_p UEs"


# ---------------------------------------------------------------------------
# interference-aware reward
# ---------------------------------------------------------------------------

def interfering_ues(t, k, pilots):
    """UEs sharing pilot t, excluding k (evaluated as if k used pilot t)."""
    return np.flatnonzero((pilots == t) & (np.arange(pilots.size) != k))


def interfering_aps(t, k, pilots, assoc):
    """APs serving any pilot-t co-UE of k, minus the APs serving k."""
    ues = interfering_ues(t, k, pilots)
    if ues.size == 0:
        return np.zeros(0, dtype=np.int64)
    served = assoc[ues].any(axis=0) & (assoc[k] == 0)
    return np.flatnonzero(served)


def iar(k, l, t, beta, pilots, assoc, kappa, mu):
    """Scalar interference-aware reward of the triple (k, l, t).

    Direct set-based evaluation; the vectorized iar_table is checked against
    this form.
    """
    ues = interfering_ues(t, k, pilots)
    aps = interfering_aps(t, k, pilots, assoc)
    if ues.size and aps.size:
        term = beta[ues, l].max() * beta[k, aps].max()
    else:
        term = 0.0
    return kappa * beta[k, l] ** mu - term


def iar_table(beta, pilots, assoc, kappa, mu, tau_p=None):
    """(K, L) IARs of every (UE, AP) pair at each UE's current pilot."""
    K, L = beta.shape
    tau_p = int(pilots.max()) + 1 if tau_p is None else tau_p

    # strongest co-pilot gain at each AP, excluding the UE itself
    m_ue = np.full((K, L), NEG_INF)
    for t in range(tau_p):
        members = np.flatnonzero(pilots == t)
        if members.size == 0:
            continue
        sub = beta[members]                                   # (g, L)
        if members.size == 1:
            continue                                          # no co-pilot UE
        top1 = sub.max(axis=0)
        arg1 = members[sub.argmax(axis=0)]                    # (L,) global index
        top2 = np.partition(sub, members.size - 2, axis=0)[members.size - 2]
        m_ue[members] = np.where(arg1[None, :] == members[:, None],
                                 top2[None, :], top1[None, :])

    # strongest gain from each UE to an AP serving a co-pilot UE
    member = pilots[None, :] == np.arange(tau_p)[:, None]
    count_t = member.astype(float) @ assoc                    # (tau_p, L)
    count_own = count_t[pilots] - assoc                       # co-pilot APs, k removed
    ap_mask = (count_own > 0.5) & (assoc == 0)
    m_ap = np.where(ap_mask, beta, NEG_INF).max(axis=1)       # (K,)

    interference = (np.where(np.isfinite(m_ue), m_ue, 0.0)
                    * np.where(np.isfinite(m_ap), m_ap, 0.0)[:, None])
    return kappa * beta ** mu - interference


# ---------------------------------------------------------------------------
# capacity-constrained best-gain assignment (MUSA)
# ---------------------------------------------------------------------------

def musa_assign(weights, capacity):
    """Assign each agent (row) to one resource (column), at most `capacity`
    agents per resource where resolvable.

    Greedy argmax initialization; while some over-capacity resource has an
    unmarked agent, each over-capacity resource moves the agent with the
    smallest weight loss to its best unmarked alternative and marks the
    vacated pair. Agents without unmarked alternatives are skipped; if no
    over-capacity resource can move anyone the residual overload is accepted.

    Returns (assignment (n,), marks (n, m) bool).
    """
    w = np.asarray(weights, dtype=float)
    n, m = w.shape
    if n > m * capacity:
        raise ValueError(f"infeasible: {n} agents > {m} resources x capacity {capacity}")
    assign = w.argmax(axis=1)
    marks = np.zeros((n, m), dtype=bool)
    while True:
        loads = np.bincount(assign, minlength=m)
        over = np.flatnonzero((loads > capacity) & (marks.sum(axis=0) < n))
        if over.size == 0:
            break
        moved = False
        for l in over:
            if loads[l] <= capacity:
                continue
            members = np.flatnonzero(assign == l)
            alt = w[members].copy()
            alt[:, l] = NEG_INF
            alt[marks[members]] = NEG_INF
            best_alt = alt.max(axis=1)
            movable = np.isfinite(best_alt)
            if not movable.any():
                continue                      # dead end at this resource
            delta = np.where(movable, w[members, l] - best_alt, np.inf)
            i = members[delta.argmin()]       # first minimum: lowest agent index
            dest = int(alt[np.searchsorted(members, i)].argmax())
            assign[i] = dest
            marks[i, l] = True
            loads[l] -= 1
            loads[dest] += 1
            moved = True
        if not moved:
            break
    return assign, marks


def select_masters(beta, tau_p):
    """Master AP per UE: best-gain assignment with at most tau_p masters
    per AP. Returns (masters, a, b) with a the master-only association and b
    the marks accumulated while resolving overloads."""
    masters, marks = musa_assign(beta, tau_p)
    K, L = beta.shape
    a = np.zeros((K, L), dtype=np.int8)
    a[np.arange(K), masters] = 1
    return masters, a, marks.astype(np.int8)


# ---------------------------------------------------------------------------
# pilot assignment
# ---------------------------------------------------------------------------

def neighborhood(k, beta, masters, tau_p):
    """UE k plus the tau_p - 1 UEs with the largest gain to k's master AP.

    Ordered: k first, then by descending gain (ties to the lower UE index).
    """
    col = beta[:, masters[k]]
    order = np.argsort(-col, kind="stable")
    others = order[order != k][: tau_p - 1]
    return np.concatenate(([k], others))


@dataclass
class PilotAssignment:
    pilots: np.ndarray
    initial_sum_iar: float
    final_sum_iar: float
    sweeps: int


def _master_sum_iar(beta, pilots, master_assoc, masters, kappa, mu, tau_p):
    table = iar_table(beta, pilots, master_assoc, kappa, mu, tau_p)
    return float(table[np.arange(beta.shape[0]), masters].sum())


def assign_pilots(beta, masters, config, rng, tol=1e-9, max_sweeps=10):
    """IAR-driven pilot assignment.

    Starting from uniform random pilots, sweep the UEs in index order; for
    each UE k, reassign the pilots of its neighborhood by solving the
    capacity-1 assignment problem on the potential IARs at k's master AP,
    computed against the frozen pilots of all UEs outside the neighborhood.
    Sweeps stop when the sum of own-master IARs changes by less than `tol`
    (relative) or after `max_sweeps`.
    """
    K, L = beta.shape
    tau_p = config.tau_p
    pilots = rng.integers(0, tau_p, size=K)

    master_assoc = np.zeros((K, L), dtype=np.int8)
    master_assoc[np.arange(K), masters] = 1
    master_onehot = master_assoc.astype(float)

    # neighborhoods and their sub-problem row order are fixed by (beta, masters)
    hoods = [np.sort(neighborhood(k, beta, masters, tau_p)) for k in range(K)]
    hood_table = np.asarray(hoods, dtype=np.int64)
    use_numba = accel.BACKEND == "numba"

    initial = _master_sum_iar(beta, pilots, master_assoc, masters, kappa=config.kappa,
                              mu=config.mu, tau_p=tau_p)
    previous = initial
    sweeps = 0
    pilot_ids = np.arange(tau_p)
    for _ in range(max_sweeps):
        if use_numba:
            accel.pilot_sweep_numba(beta, pilots, masters.astype(np.int64),
                                    hood_table, tau_p, config.kappa, config.mu)
        else:
            for k in range(K):
                members = hoods[k]
                l_k = masters[k]
                frozen = np.ones(K, dtype=bool)
                frozen[members] = False
                onpilot = (pilots[None, :] == pilot_ids[:, None]) & frozen[None, :]

                vals = np.where(onpilot, beta[:, l_k][None, :], NEG_INF)
                m_ue = vals.max(axis=1)                          # (tau_p,)
                ap_mask = (onpilot.astype(float) @ master_onehot) > 0.5  # (tau_p, L)

                bm = beta[members].copy()                        # (m, L)
                bm[np.arange(members.size), masters[members]] = NEG_INF
                m_ap = np.where(ap_mask[:, None, :], bm[None, :, :], NEG_INF).max(axis=2)

                interference = (np.where(np.isfinite(m_ue), m_ue, 0.0)[:, None]
                                * np.where(np.isfinite(m_ap), m_ap, 0.0))
                reward = config.kappa * beta[members, l_k] ** config.mu
                table = reward[None, :] - interference           # (tau_p, m)

                sub_pilots, _ = musa_assign(table.T, 1)
                pilots[members] = sub_pilots
        sweeps += 1
        total = _master_sum_iar(beta, pilots, master_assoc, masters,
                                kappa=config.kappa, mu=config.mu, tau_p=tau_p)
        if abs(total - previous) <= tol * max(abs(total), abs(previous)):
            previous = total
            break
        previous = total
    return PilotAssignment(pilots=pilots, initial_sum_iar=initial,
                           final_sum_iar=previous, sweeps=sweeps)


def repair_master_pilot_conflicts(beta, pilots, masters, tau_p):
    """Ensure UEs sharing a master AP hold distinct pilots.

    Among colliders at a master AP the UE with the largest gain to it keeps
    the pilot; each other UE is reassigned to the pilot with the least
    contamination at that AP among pilots unused by its co-mastered UEs.
    Returns a repaired copy of `pilots`.
    """
    pilots = pilots.copy()
    K = pilots.size
    for m in np.unique(masters):
        group = np.flatnonzero(masters == m)
        if group.size <= 1:
            continue
        for t in range(tau_p):
            colliders = group[pilots[group] == t]
            if colliders.size <= 1:
                continue
            keep = colliders[beta[colliders, m].argmax()]
            for u in colliders:
                if u == keep:
                    continue
                taken = {pilots[v] for v in group if v != u}
                best_t, best_c = -1, np.inf
                for cand in range(tau_p):
                    if cand in taken:
                        continue
                    others = np.flatnonzero(pilots == cand)
                    others = others[others != u]
                    c = beta[others, m].sum()
                    if c < best_c:
                        best_t, best_c = cand, c
                pilots[u] = best_t
    return pilots


# ---------------------------------------------------------------------------
# multi-AP association (MUMA)
# ---------------------------------------------------------------------------

def muma_associate(iar_values, pilots, masters, a, b, tau_p, goal):
    """Associate serving APs beyond the masters, driven by a fixed IAR table.

    Greedy stage (both goals): each AP additionally serves, on every pilot it
    is not already committed to as a master, the UE with the largest positive
    IAR on that pilot. Masters are never evicted.

    goal="min" then repeatedly improves the weakest eligible UE (smallest
    served IAR sum): it probes its best unmarked AP; a free pilot slot
    there is claimed outright (diversity add), while an occupied one is
    taken over from the same-pilot UE served there unless that UE would
    lose more than the probing UE currently has (or would lose its last
    AP). Every probe marks b, and a status quo additionally protects the
    incumbent's whole cluster from later takeovers.

    Evicting an incumbent is only justified when the slot actually raises
    the probing UE's own sum, so takeovers require a positive IAR at the
    probed AP; free-slot adds are allowed at any IAR since no one loses
    service (coherent diversity still helps the weak UE). A UE with no
    unmarked AP left drops out of the weakest-UE selection while the loop
    keeps serving the remaining UEs; the loop ends when no eligible UE
    remains. Each iteration marks at least one new b entry, which bounds
    the iteration count by K*L.

    Returns updated (a, b); inputs are not modified.
    """
    if goal not in ("sum", "min"):
        raise ValueError(f"goal must be 'sum' or 'min', got {goal!r}")
    K, L = iar_values.shape
    a = a.copy()
    b = b.copy()

    for t in range(tau_p):
        members = np.flatnonzero(pilots == t)
        if members.size == 0:
            continue
        sub = iar_values[members]                             # (g, L)
        best_val = sub.max(axis=0)
        best_ue = members[sub.argmax(axis=0)]
        master_held = np.zeros(L, dtype=bool)
        master_held[masters[members]] = True                  # slot owned by a master
        add = (~master_held) & (best_val > 0.0)
        a[best_ue[add], np.flatnonzero(add)] = 1

    if goal == "sum":
        return a, b

    while True:
        unmarked = b == 0
        eligible = unmarked.any(axis=1)
        if not eligible.any():
            break
        sums = (iar_values * a).sum(axis=1)
        kp = int(np.where(eligible, sums, np.inf).argmin())
        row = np.where(unmarked[kp], iar_values[kp], NEG_INF)
        lp = int(row.argmax())
        occupied = (a[:, lp] == 1) & (pilots == pilots[kp])
        cands = occupied & (b[:, lp] == 0)
        b[kp, lp] = 1
        if not occupied.any():
            a[kp, lp] = 1                     # pilot slot free: add without eviction
        elif iar_values[kp, lp] > 0.0 and cands.any():
            vals = np.where(cands, iar_values[:, lp], np.inf)
            ks = int(vals.argmin())
            keep_status_quo = sums[ks] - iar_values[ks, lp] <= sums[kp]
            if ks != kp and a[ks].sum() == 1:
                keep_status_quo = True        # never strip a UE's last AP
            if keep_status_quo:
                b[ks, a[ks] == 1] = 1
            else:
                b[kp, a[kp] == 1] = 1
                a[ks, lp] = 0
                a[kp, lp] = 1
        # occupied with nonpositive gain or a protected incumbent: wasted probe
    return a, b


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------

def iama(beta, config, rng, goal):
    """Full interference-aware access pipeline on one setup.

    goal="min" targets the weakest UE (fairness), goal="sum" the total reward.
    Pure function of (beta, rng state, goal); all randomness is the pilot
    initialization.

    IARs are computed on noise-normalized gains (beta / noise_power, i.e.
    per-unit-power SNRs). With mu < 2 the reward is not scale invariant, and
    only in SNR units does the interference product compete with the reward
    term the way the underlying treating-interference-as-noise condition
    intends. Stages that only rank gains are unaffected by the scaling.
    """
    if config.K > config.L * config.tau_p:
        raise ValueError("infeasible: K > L * tau_p")
    snr = beta / config.noise_power
    masters, a, b = select_masters(snr, config.tau_p)
    pa = assign_pilots(snr, masters, config, rng)
    pilots = repair_master_pilot_conflicts(snr, pa.pilots, masters, config.tau_p)
    table = iar_table(snr, pilots, a, config.kappa, config.mu, config.tau_p)
    a, b = muma_associate(table, pilots, masters, a, b, config.tau_p, goal)
    return AccessState(pilots=pilots, a=a, b=b, masters=masters)
