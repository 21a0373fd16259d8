"""Downlink precoding (MR and local MMSE) and fractional power allocation.

Raw precoders are computed per channel realization; the unit-average-energy
normalization E{||w||^2} = 1 is estimated per setup by sample averaging over
the realization batch (uniformly for both precoders), so evaluation makes two
passes: accumulate energies, then scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import lpmmse_raw_precoders, served_csr


@dataclass
class PrecoderScaling:
    """Per-(UE, AP) normalization constants and degenerate-link diagnostics."""
    scale: np.ndarray          # (K, L), multiply raw precoders by this
    mean_energy: np.ndarray    # (K, L) sample mean of ||w_raw||^2
    dead_links: np.ndarray     # (K, L) bool, served links whose energy was 0


def mr_raw_precoders(hhat, assoc):
    """Maximum-ratio: the raw precoder is the channel estimate itself."""
    return hhat * assoc[:, :, None]


def lpmmse_precoders_for_ap(hhat_l, C_l, reg):
    """Reference LP-MMSE solve for a single AP serving the stacked UEs.

    hhat_l: (S, N) estimates of the served UEs, C_l: (S, N, N). Returns (S, N).
    Kept as the small readable form the accelerated kernel is tested against.
    """
    A = hhat_l.T @ hhat_l.conj() + C_l.sum(axis=0) + reg * np.eye(hhat_l.shape[1])
    return np.linalg.solve(A, hhat_l.T).T


def fractional_power_allocation(beta, assoc, nu, rho_dl):
    """rho[k, l] = rho_dl * beta[k,l]^nu / sum_{i served by l} beta[i,l]^nu.

    Every transmitting AP spends its full budget; APs serving nobody emit
    nothing. rho is positive exactly on the served pairs.
    """
    weights = np.where(assoc > 0, beta ** nu, 0.0)
    totals = weights.sum(axis=0, keepdims=True)
    with np.errstate(invalid="ignore"):
        rho = np.where(totals > 0, rho_dl * weights / totals, 0.0)
    return rho


def normalize_scaling(energy_sums, n_reals, assoc):
    """Turn accumulated ||w_raw||^2 sums into multiplicative scalings.

    Served pairs with zero accumulated energy cannot be normalized; they are
    flagged and their precoders stay zero.
    """
    if n_reals < 2:
        raise ValueError("precoder normalization needs at least 2 realizations")
    mean_energy = energy_sums / n_reals
    served = assoc > 0
    dead = served & (mean_energy <= 0.0)
    with np.errstate(divide="ignore"):
        scale = np.where(served & ~dead, 1.0 / np.sqrt(np.maximum(mean_energy, 1e-300)), 0.0)
    return PrecoderScaling(scale=scale, mean_energy=mean_energy, dead_links=dead)


def mr_analytic_energy(filters, assoc):
    """Closed-form E{||w_raw||^2} = trace(Q) for MR; cross-check for the
    sample-average normalization."""
    tr = np.trace(filters.Q, axis1=-2, axis2=-1).real
    return np.where(assoc > 0, tr, 0.0)


class RawPrecoderFactory:
    """Computes raw (unnormalized) precoders for one access state."""

    def __init__(self, assoc, config):
        self.assoc = assoc
        self.reg = config.noise_power / config.rho_dl
        self.served_idx, self.served_ptr = served_csr(assoc)

    def compute(self, kind, hhat, C):
        if kind == "mr":
            return mr_raw_precoders(hhat, self.assoc)
        if kind == "lpmmse":
            return lpmmse_raw_precoders(hhat, C, self.served_idx, self.served_ptr, self.reg)
        raise ValueError(f"unknown precoder '{kind}'")
