"""Vectorized recursion kernels, pure numpy.

Each function advances a block of independent realizations through n
measurement updates and records squared errors at requested step counts.
The arithmetic (operation order, division by the step count) is chosen to
match the compiled kernels bit for bit; keep both in sync.

State arrays (`mu_corr`, `delta_hat`) are updated in place.  `grid_k` holds
absolute step counts, strictly increasing; entries inside (k0, k0 + n] are
written to the error outputs at their grid positions.
"""

from __future__ import annotations

import numpy as np

__all__ = ["run_location_block", "run_scale_block", "run_joint_block"]


def run_location_block(y, mu_ref, known_delta, tau, gain_eta, mu_true,
                       k0, mu_corr, grid_k, err_mu):
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[1]
    ymr = y - mu_ref
    d0 = mu_ref - mu_true
    g = int(np.searchsorted(grid_k, k0, side="right"))
    n_grid = grid_k.shape[0]
    for j in range(n):
        k = k0 + j + 1
        r = ymr[:, j] - mu_corr
        u = r / known_delta
        idx = np.searchsorted(tau, u, side="right")
        mu_corr += gain_eta[idx] / k
        if g < n_grid and grid_k[g] == k:
            e = d0 + mu_corr
            err_mu[:, g] = e * e
            g += 1


def run_scale_block(y, known_mu, tau, gain_eta, delta_true, delta_floor,
                    k0, delta_hat, grid_k, err_delta):
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[1]
    ymr = y - known_mu
    g = int(np.searchsorted(grid_k, k0, side="right"))
    n_grid = grid_k.shape[0]
    for j in range(n):
        k = k0 + j + 1
        u = ymr[:, j] / delta_hat
        idx = np.searchsorted(tau, u, side="right")
        # Per-step shrink clamp at exactly 1/4 keeps overshooting updates
        # positive; the factor is a power of two, so the clamp is exact.
        np.maximum(delta_hat + delta_hat * (gain_eta[idx] / k),
                   0.25 * delta_hat, out=delta_hat)
        np.maximum(delta_hat, delta_floor, out=delta_hat)
        if g < n_grid and grid_k[g] == k:
            e = delta_hat - delta_true
            err_delta[:, g] = e * e
            g += 1


def run_joint_block(y, mu_ref, tau, gain_eta_mu, gain_eta_delta, mu_true,
                    delta_true, delta_floor, k0, mu_corr, delta_hat,
                    grid_k, err_mu, err_delta):
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[1]
    ymr = y - mu_ref
    d0 = mu_ref - mu_true
    g = int(np.searchsorted(grid_k, k0, side="right"))
    n_grid = grid_k.shape[0]
    for j in range(n):
        k = k0 + j + 1
        r = ymr[:, j] - mu_corr
        u = r / delta_hat
        idx = np.searchsorted(tau, u, side="right")
        # Both updates use the scale estimate from before this step.
        upd_mu = delta_hat * (gain_eta_mu[idx] / k)
        upd_dh = delta_hat * (gain_eta_delta[idx] / k)
        mu_corr += upd_mu
        np.maximum(delta_hat + upd_dh, 0.25 * delta_hat, out=delta_hat)
        np.maximum(delta_hat, delta_floor, out=delta_hat)
        if g < n_grid and grid_k[g] == k:
            e = d0 + mu_corr
            err_mu[:, g] = e * e
            e = delta_hat - delta_true
            err_delta[:, g] = e * e
            g += 1
