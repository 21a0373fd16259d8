"""Uplink pilot transmission and MMSE channel estimation.

Estimates are produced from simulated pilot observations rather than drawn
from their marginal distribution, so the cross-correlation between co-pilot
UEs' estimates (pilot contamination) is preserved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class EstimateSet:
    """MMSE estimates hhat (K, L, N) and error covariances C (K, L, N, N)."""
    hhat: np.ndarray
    C: np.ndarray


@dataclass
class EstimationFilters:
    """Per-setup estimator state precomputed from (R, pilots).

    B:   (K, L, N, N) with hhat[k,l] = B[k,l] @ y[l, t_k]
    C:   (K, L, N, N) estimation error covariances R - tau_p rho_p R Psi^-1 R
    Q:   (K, L, N, N) estimate covariances tau_p rho_p R Psi^-1 R
    """
    B: np.ndarray
    C: np.ndarray
    Q: np.ndarray


def pilot_membership(pilots, tau_p):
    """(tau_p, K) boolean matrix, row t flags the UEs transmitting pilot t."""
    return pilots[None, :] == np.arange(tau_p)[:, None]


def received_pilots(h, pilots, config, rng):
    """Despread pilot observations y, shape (L, tau_p, N).

    y[l, t] = sqrt(tau_p rho_p) sum_{i: t_i = t} h[i, l] + noise,
    noise ~ CN(0, noise_power I_N) i.i.d. per (AP, pilot). The noise draw does
    not depend on the pilot assignment, so co-evaluated schemes see paired
    noise.
    """
    member = pilot_membership(pilots, config.tau_p)
    amp = np.sqrt(config.tau_p * config.rho_p)
    signal = amp * np.einsum("tk,kln->ltn", member.astype(float), h)
    shape = signal.shape
    noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    noise *= np.sqrt(config.noise_power / 2.0)
    return signal + noise


def psi_matrix(t, l, stats, pilots, config):
    """Covariance of the despread observation y[l, t]:
    sum over pilot-t UEs of tau_p rho_p R[i, l], plus noise_power I."""
    members = np.flatnonzero(pilots == t)
    N = stats.R.shape[-1]
    psi = config.noise_power * np.eye(N, dtype=complex)
    if members.size:
        psi = psi + config.tau_p * config.rho_p * stats.R[members, l].sum(axis=0)
    return psi


def estimation_filters(stats, pilots, config):
    """Precompute the linear MMSE estimator for a fixed pilot assignment.

    The inverse of Psi is never formed; B and Q come from Hermitian linear
    solves Psi X = R batched over all (UE, AP) pairs.
    """
    K, L = stats.beta.shape
    N = config.N
    tp_rho = config.tau_p * config.rho_p
    member = pilot_membership(pilots, config.tau_p)
    psi = tp_rho * np.einsum("tk,klmn->tlmn", member.astype(float), stats.R)
    psi += config.noise_power * np.eye(N)
    psi_k = psi[pilots]                                  # (K, L, N, N), Psi of own pilot
    X = np.linalg.solve(psi_k, stats.R)                  # Psi^-1 R
    B = np.sqrt(tp_rho) * np.conj(np.swapaxes(X, -1, -2))  # sqrt() R Psi^-1
    Q = np.sqrt(tp_rho) * B @ stats.R                    # tau_p rho_p R Psi^-1 R
    Q = 0.5 * (Q + np.conj(np.swapaxes(Q, -1, -2)))      # re-symmetrize roundoff
    C = stats.R - Q
    C = 0.5 * (C + np.conj(np.swapaxes(C, -1, -2)))
    return EstimationFilters(B=B, C=C, Q=Q)


def apply_filters(filters, y, pilots):
    """hhat[k, l] = B[k, l] @ y[l, t_k] for all pairs, shape (K, L, N)."""
    y_own = y[:, pilots, :].transpose(1, 0, 2)           # (K, L, N)
    return np.einsum("klmn,kln->klm", filters.B, y_own)


def mmse_estimate(y, stats, pilots, config):
    """Full MMSE estimation pass returning an EstimateSet."""
    filters = estimation_filters(stats, pilots, config)
    return EstimateSet(hhat=apply_filters(filters, y, pilots), C=filters.C)
