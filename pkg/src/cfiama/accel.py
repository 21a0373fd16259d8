"""Optional numba acceleration for the hot per-realization kernels.

The numerically heavy inner loop of the downlink evaluation is the per-AP
LP-MMSE combining solve, which does not map onto a single BLAS call. It is
compiled with numba when available; a pure-numpy fallback implementing the
identical contract is kept alongside and selected either automatically (numba
missing) or explicitly via the environment variable

    CFIAMA_BACKEND=numpy   (force the fallback)
    CFIAMA_BACKEND=numba   (default when numba imports)

`scripts/benchmark_kernels.py` times the two paths against each other.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        # pass-through decorator so the numba path degrades to plain python
        def wrap(func):
            return func
        if args and callable(args[0]):
            return args[0]
        return wrap


def _resolve_backend():
    choice = os.environ.get("CFIAMA_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"CFIAMA_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    if choice == "numba" and not HAS_NUMBA:
        raise ValueError("CFIAMA_BACKEND=numba but numba is not importable")
    return "numba" if HAS_NUMBA else "numpy"


BACKEND = _resolve_backend()


def served_csr(assoc):
    """Flatten the AP->UE service lists of a binary K x L matrix into CSR form.

    Returns (idx, ptr): UEs served by AP l are idx[ptr[l]:ptr[l+1]], ascending.
    """
    K, L = assoc.shape
    cols = []
    ptr = np.zeros(L + 1, dtype=np.int64)
    for l in range(L):
        ues = np.flatnonzero(assoc[:, l])
        cols.append(ues)
        ptr[l + 1] = ptr[l] + ues.size
    idx = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    return idx.astype(np.int64), ptr


def _lpmmse_numpy(hhat, C, served_idx, served_ptr, reg):
    K, L, N = hhat.shape
    w = np.zeros((K, L, N), dtype=np.complex128)
    eye = np.eye(N)
    for l in range(L):
        ues = served_idx[served_ptr[l]:served_ptr[l + 1]]
        if ues.size == 0:
            continue
        hl = hhat[ues, l, :]                                  # (S, N)
        A = hl.T @ hl.conj() + C[ues, l].sum(axis=0) + reg * eye
        w[ues, l, :] = np.linalg.solve(A, hl.T).T
    return w


@njit(cache=True)
def _lpmmse_numba(hhat, C, served_idx, served_ptr, reg):  # pragma: no cover - timed separately
    K, L, N = hhat.shape
    w = np.zeros((K, L, N), dtype=np.complex128)
    for l in range(L):
        s, e = served_ptr[l], served_ptr[l + 1]
        n_served = e - s
        if n_served == 0:
            continue
        A = np.zeros((N, N), dtype=np.complex128)
        for j in range(s, e):
            k = served_idx[j]
            for m in range(N):
                hm = hhat[k, l, m]
                for n in range(N):
                    A[m, n] += hm * np.conj(hhat[k, l, n]) + C[k, l, m, n]
        for m in range(N):
            A[m, m] += reg
        rhs = np.empty((N, n_served), dtype=np.complex128)
        for j in range(n_served):
            k = served_idx[s + j]
            for m in range(N):
                rhs[m, j] = hhat[k, l, m]
        sol = np.linalg.solve(A, rhs)
        for j in range(n_served):
            k = served_idx[s + j]
            for m in range(N):
                w[k, l, m] = sol[m, j]
    return w


def lpmmse_raw_precoders(hhat, C, served_idx, served_ptr, reg, backend=None):
    """Unnormalized local MMSE precoders for every (served UE, AP) pair.

    For AP l the precoder of a served UE k solves
        (sum_i (hhat_i hhat_i^H + C_i) + reg I) w = hhat_k
    with the sum over the UEs served by l. Unserved pairs stay zero.
    """
    backend = BACKEND if backend is None else backend
    hhat = np.ascontiguousarray(hhat, dtype=np.complex128)
    C = np.ascontiguousarray(C, dtype=np.complex128)
    if backend == "numba":
        return _lpmmse_numba(hhat, C, served_idx, served_ptr, float(reg))
    return _lpmmse_numpy(hhat, C, served_idx, served_ptr, float(reg))


@njit(cache=True)
def _capacity1_assign(w):  # pragma: no cover - parity-tested against musa_assign
    """Transcription of the capacity-1 case of the swap heuristic in
    access.musa_assign; must stay move-for-move identical to it."""
    n, m = w.shape
    assign = np.empty(n, dtype=np.int64)
    for i in range(n):
        best = 0
        for j in range(1, m):
            if w[i, j] > w[i, best]:
                best = j
        assign[i] = best
    marks = np.zeros((n, m), dtype=np.bool_)
    col_marks = np.zeros(m, dtype=np.int64)
    loads = np.zeros(m, dtype=np.int64)
    for i in range(n):
        loads[assign[i]] += 1
    while True:
        over = np.empty(m, dtype=np.int64)
        n_over = 0
        for j in range(m):
            if loads[j] > 1 and col_marks[j] < n:
                over[n_over] = j
                n_over += 1
        if n_over == 0:
            break
        moved = False
        for jj in range(n_over):
            l = over[jj]
            if loads[l] <= 1:
                continue
            best_i = -1
            best_dest = -1
            best_delta = np.inf
            for i in range(n):
                if assign[i] != l:
                    continue
                alt_j = -1
                alt_v = -np.inf
                for j in range(m):
                    if j == l or marks[i, j]:
                        continue
                    if w[i, j] > alt_v:
                        alt_v = w[i, j]
                        alt_j = j
                if alt_j < 0:
                    continue
                delta = w[i, l] - alt_v
                if delta < best_delta:
                    best_delta = delta
                    best_i = i
                    best_dest = alt_j
            if best_i < 0:
                continue
            assign[best_i] = best_dest
            marks[best_i, l] = True
            col_marks[l] += 1
            loads[l] -= 1
            loads[best_dest] += 1
            moved = True
        if not moved:
            break
    return assign


@njit(cache=True)
def pilot_sweep_numba(beta, pilots, masters, hoods, tau_p, kappa, mu):  # pragma: no cover
    """One in-place pilot reassignment sweep; mirrors the numpy loop in
    access.assign_pilots bit for bit (same maxima, same tie-breaks).

    Assumes strictly positive gains (true for pathloss times shadowing), so
    "no eligible interferer" and "interferer of zero gain" coincide at 0.
    """
    K, L = beta.shape
    n_members = hoods.shape[1]
    for k in range(K):
        l_k = masters[k]
        member_mask = np.zeros(K, dtype=np.bool_)
        for j in range(n_members):
            member_mask[hoods[k, j]] = True
        m_ue = np.zeros(tau_p)
        has_ue = np.zeros(tau_p, dtype=np.bool_)
        ap_on = np.zeros((tau_p, L), dtype=np.bool_)
        for u in range(K):
            if member_mask[u]:
                continue
            t = pilots[u]
            v = beta[u, l_k]
            if not has_ue[t] or v > m_ue[t]:
                m_ue[t] = v
                has_ue[t] = True
            ap_on[t, masters[u]] = True
        table = np.empty((n_members, tau_p))
        for i in range(n_members):
            u = hoods[k, i]
            reward = kappa * beta[u, l_k] ** mu
            for t in range(tau_p):
                m_ap = 0.0
                if has_ue[t]:
                    for l in range(L):
                        if ap_on[t, l] and l != masters[u] and beta[u, l] > m_ap:
                            m_ap = beta[u, l]
                table[i, t] = reward - m_ue[t] * m_ap
        sub = _capacity1_assign(table)
        for i in range(n_members):
            pilots[hoods[k, i]] = sub[i]
    return pilots
