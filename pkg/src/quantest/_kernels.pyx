# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled recursion kernels.

Same contracts and bit-for-bit the same arithmetic as the numpy fallback;
keep the operation order of both in sync.  Loops run realization-outer,
step-inner, which keeps each realization's state in registers.
"""

import numpy as np

cimport numpy as cnp


cdef inline Py_ssize_t _bisect_right(const double[::1] a, double v) noexcept nogil:
    # Matches numpy searchsorted side="right".
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = a.shape[0]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _grid_start(const cnp.int64_t[::1] grid_k, long k0) noexcept nogil:
    cdef Py_ssize_t g = 0
    while g < grid_k.shape[0] and grid_k[g] <= k0:
        g += 1
    return g


def run_location_block(const double[:, ::1] y, double mu_ref, double known_delta,
                       const double[::1] tau, const double[::1] gain_eta,
                       double mu_true, long k0, double[::1] mu_corr,
                       const cnp.int64_t[::1] grid_k, double[:, ::1] err_mu):
    cdef Py_ssize_t n_real = y.shape[0]
    cdef Py_ssize_t n = y.shape[1]
    cdef Py_ssize_t g0 = _grid_start(grid_k, k0)
    cdef Py_ssize_t n_grid = grid_k.shape[0]
    cdef Py_ssize_t r, j, g, i
    cdef long k
    cdef double corr, u, e
    cdef double d0 = mu_ref - mu_true
    with nogil:
        for r in range(n_real):
            corr = mu_corr[r]
            g = g0
            for j in range(n):
                k = k0 + j + 1
                u = ((y[r, j] - mu_ref) - corr) / known_delta
                i = _bisect_right(tau, u)
                corr = corr + gain_eta[i] / k
                if g < n_grid and grid_k[g] == k:
                    e = d0 + corr
                    err_mu[r, g] = e * e
                    g += 1
            mu_corr[r] = corr


def run_scale_block(const double[:, ::1] y, double known_mu,
                    const double[::1] tau, const double[::1] gain_eta,
                    double delta_true, double delta_floor, long k0,
                    double[::1] delta_hat, const cnp.int64_t[::1] grid_k,
                    double[:, ::1] err_delta):
    cdef Py_ssize_t n_real = y.shape[0]
    cdef Py_ssize_t n = y.shape[1]
    cdef Py_ssize_t g0 = _grid_start(grid_k, k0)
    cdef Py_ssize_t n_grid = grid_k.shape[0]
    cdef Py_ssize_t r, j, g, i
    cdef long k
    cdef double dh, dh_new, u, e
    with nogil:
        for r in range(n_real):
            dh = delta_hat[r]
            g = g0
            for j in range(n):
                k = k0 + j + 1
                u = (y[r, j] - known_mu) / dh
                i = _bisect_right(tau, u)
                # Shrink clamp at exactly 1/4 per step; matches the fallback.
                dh_new = dh + dh * (gain_eta[i] / k)
                if dh_new < 0.25 * dh:
                    dh_new = 0.25 * dh
                dh = dh_new
                if dh < delta_floor:
                    dh = delta_floor
                if g < n_grid and grid_k[g] == k:
                    e = dh - delta_true
                    err_delta[r, g] = e * e
                    g += 1
            delta_hat[r] = dh


def run_joint_block(const double[:, ::1] y, double mu_ref,
                    const double[::1] tau, const double[::1] gain_eta_mu,
                    const double[::1] gain_eta_delta, double mu_true,
                    double delta_true, double delta_floor, long k0,
                    double[::1] mu_corr, double[::1] delta_hat,
                    const cnp.int64_t[::1] grid_k, double[:, ::1] err_mu,
                    double[:, ::1] err_delta):
    cdef Py_ssize_t n_real = y.shape[0]
    cdef Py_ssize_t n = y.shape[1]
    cdef Py_ssize_t g0 = _grid_start(grid_k, k0)
    cdef Py_ssize_t n_grid = grid_k.shape[0]
    cdef Py_ssize_t r, j, g, i
    cdef long k
    cdef double corr, dh, dh_new, u, e, upd_mu, upd_dh
    cdef double d0 = mu_ref - mu_true
    with nogil:
        for r in range(n_real):
            corr = mu_corr[r]
            dh = delta_hat[r]
            g = g0
            for j in range(n):
                k = k0 + j + 1
                u = ((y[r, j] - mu_ref) - corr) / dh
                i = _bisect_right(tau, u)
                # Both updates use the scale estimate from before this step.
                upd_mu = dh * (gain_eta_mu[i] / k)
                upd_dh = dh * (gain_eta_delta[i] / k)
                corr = corr + upd_mu
                dh_new = dh + upd_dh
                if dh_new < 0.25 * dh:
                    dh_new = 0.25 * dh
                dh = dh_new
                if dh < delta_floor:
                    dh = delta_floor
                if g < n_grid and grid_k[g] == k:
                    e = d0 + corr
                    err_mu[r, g] = e * e
                    e = dh - delta_true
                    err_delta[r, g] = e * e
                    g += 1
            mu_corr[r] = corr
            delta_hat[r] = dh
