"""Quantizer design: optimal interval densities, threshold maps, asymptotic
Fisher information, and exhaustive/uniform search baselines.

The high-resolution analysis yields an optimal cell density
lambda*(y) proportional to (dS/dy)^(2/3) * f(y)^(1/3) and an asymptotic
information I_c - 2^(-2*N_B)/12 * C^3, with C the normalization constant of
lambda*.  Closed-form threshold maps invert the CDF of lambda* through
incomplete gamma/beta inverses; a numeric inversion covers the shapes without
a closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad as _scipy_quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq, minimize, minimize_scalar

from . import specfun
from ._quad import split_quad
from .distributions import (
    Distribution,
    FamilyTag,
    ParamKind,
    cdf,
    continuous_fi,
    pdf,
    truncation_window,
)
from .errors import DomainError, NumericalError
from .quantizer import DegenerateCellWarning, Quantizer, quantized_fi

__all__ = [
    "IntervalDensity",
    "DesignSpec",
    "optimal_density",
    "practical_thresholds",
    "thresholds_from_density_numeric",
    "asymptotic_fi",
    "asymptotic_fi_general",
    "exhaustive_optimal_thresholds",
    "optimal_uniform_quantizer",
]

_EXHAUSTIVE_MAX_BITS = 3
_GRID_STEP = 0.01
_GRID_SPAN = 8.0


def _quad_integrate(fn, a: float, b: float, pts):
    return _scipy_quad(fn, a, b, points=pts or None, epsabs=1e-13, epsrel=1e-12,
                       limit=400)


@dataclass(frozen=True)
class DesignSpec:
    dist: Distribution
    kind: ParamKind
    n_bits: int

    def __post_init__(self):
        if int(self.n_bits) != self.n_bits or self.n_bits < 1:
            raise DomainError(f"n_bits must be a positive integer, got {self.n_bits}")
        if (self.dist.tag is FamilyTag.GGD and self.kind is ParamKind.LOCATION
                and self.dist.beta <= 1.0):
            raise DomainError(
                "GGD location designs require beta > 1: the score derivative "
                f"does not exist at y = mu for beta = {self.dist.beta}"
            )

    @property
    def n_intervals(self) -> int:
        return 2 ** self.n_bits


@dataclass(frozen=True)
class IntervalDensity:
    """Normalized cell density lambda(y) over the measurement axis.

    `normalizer` is the integral of the un-normalized shape kernel in the
    standardized variable u = (y - mu)/delta; the asymptotic information loss
    is 2^(-2*N_B)/12 * normalizer^3 / delta^2 for the optimal density.
    `support` bounds the density if it is not full-line; `kinks` lists points
    where the density is not smooth.
    """

    dist: Distribution
    kind: ParamKind
    normalizer: float
    density_fn: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float] | None = None
    kinks: tuple[float, ...] = field(default=())


def _kernel_u(tag: FamilyTag, beta: float, kind: ParamKind):
    """Un-normalized optimal-density kernel in u, plus its kink locations."""
    b = beta
    if tag is FamilyTag.GGD:
        if kind is ParamKind.LOCATION:
            if b <= 1.0:
                raise DomainError(
                    "GGD location designs require beta > 1: the score derivative "
                    f"does not exist at y = mu for beta = {b}"
                )
            c = (b * (b - 1.0)) ** (2.0 / 3.0) * (b / (2.0 * specfun.gamma_fn(1.0 / b))) ** (1.0 / 3.0)
            expo = (2.0 * b - 4.0) / 3.0
        else:
            c = (b * b) ** (2.0 / 3.0) * (b / (2.0 * specfun.gamma_fn(1.0 / b))) ** (1.0 / 3.0)
            expo = (2.0 * b - 2.0) / 3.0

        def kernel(u):
            au = np.abs(u)
            with np.errstate(divide="ignore"):
                p = np.where(au > 0, au, 1.0) ** expo
                p = np.where(au > 0, p, np.inf if expo < 0 else (0.0 if expo > 0 else 1.0))
            return c * p * np.exp(-(au ** b) / 3.0)

        return kernel, (0.0,)

    base = 1.0 / (math.sqrt(b) * specfun.beta_fn(b / 2.0, 0.5))
    if kind is ParamKind.LOCATION:
        c = (b + 1.0) ** (2.0 / 3.0) * b ** (-4.0 / 3.0) * base ** (1.0 / 3.0)

        def kernel(u):
            u2b = u * u / b
            return c * np.abs(b - u * u) ** (2.0 / 3.0) * (1.0 + u2b) ** (-(b + 9.0) / 6.0)

        rb = math.sqrt(b)
        return kernel, (-rb, 0.0, rb)

    c = (2.0 * b * (b + 1.0)) ** (2.0 / 3.0) * b ** (-4.0 / 3.0) * base ** (1.0 / 3.0)

    def kernel(u):
        u2b = u * u / b
        return c * np.abs(u) ** (2.0 / 3.0) * (1.0 + u2b) ** (-(b + 9.0) / 6.0)

    return kernel, (0.0,)


def optimal_density(spec: DesignSpec) -> IntervalDensity:
    """The information-loss-minimizing interval density for a design spec."""
    d = spec.dist
    kernel, kinks_u = _kernel_u(d.tag, d.beta, spec.kind)
    c1 = split_quad(lambda u: float(kernel(u)), breakpoints=kinks_u)
    if not (c1 > 0 and math.isfinite(c1)):
        raise NumericalError(f"density normalizer came out as {c1}")
    mu, dl = d.mu, d.delta

    def density_fn(y):
        return kernel((np.asarray(y, dtype=float) - mu) / dl) / (c1 * dl)

    return IntervalDensity(
        dist=d,
        kind=spec.kind,
        normalizer=c1,
        density_fn=density_fn,
        support=None,
        kinks=tuple(mu + dl * k for k in kinks_u),
    )


def _sym_from_offsets(mu: float, delta: float, offsets: np.ndarray) -> np.ndarray:
    """Interior thresholds mu -+ delta*offsets with the central one at mu."""
    off = np.asarray(offsets, dtype=float)
    return np.concatenate((mu - delta * off[::-1], [mu], mu + delta * off))


def _ggd_alpha(x: np.ndarray, beta: float, kind: ParamKind) -> np.ndarray:
    """Closed-form quantile map of the GGD optimal density, x in [0, 1)."""
    a = (2.0 - 1.0 / beta) / 3.0 if kind is ParamKind.LOCATION else (2.0 + 1.0 / beta) / 3.0
    total = specfun.gamma_fn(a)
    out = np.empty(len(x))
    for j, xv in enumerate(x):
        g = specfun.inverse_lower_incomplete_gamma(a, float(xv) * total)
        out[j] = (3.0 * g) ** (1.0 / beta)
    return out


def _cauchy_location_alpha(x: np.ndarray) -> np.ndarray:
    """Closed-form quantile map of the Cauchy location optimal density.

    x = 2i/N_I - 1 in (0, 1); the two branches meet continuously at x = 1/2
    where the map passes through u = 1.
    """
    b0 = specfun.beta_fn(5.0 / 6.0, 0.5)
    out = np.empty(len(x))
    for j, xv in enumerate(x):
        xv = float(xv)
        if xv <= 0.5:
            z = specfun.inverse_incomplete_beta(b0 * (1.0 - 2.0 * xv), 5.0 / 6.0, 0.5)
            rz = math.sqrt(z)
            out[j] = math.sqrt((1.0 - rz) / (1.0 + rz))
        else:
            z = specfun.inverse_incomplete_beta(b0 * (2.0 * xv - 1.0), 5.0 / 6.0, 0.5)
            rz = math.sqrt(z)
            out[j] = math.sqrt((1.0 + rz) / (1.0 - rz))
    return out


def _std_scale_alpha(x: np.ndarray, beta: float) -> np.ndarray:
    """Closed-form quantile map of the STD scale optimal density, x in [0, 1)."""
    m = (beta + 4.0) / 6.0
    b1 = specfun.beta_fn(m, 5.0 / 6.0)
    out = np.empty(len(x))
    for j, xv in enumerate(x):
        eps = specfun.inverse_incomplete_beta(b1 * (1.0 - float(xv)), m, 5.0 / 6.0)
        out[j] = math.sqrt(beta * (1.0 / eps - 1.0))
    return out


def practical_thresholds(spec: DesignSpec) -> Quantizer:
    """Thresholds tau_i = F_lambda^{-1}(i / N_I) of the optimal density.

    Closed-form maps cover GGD (both kinds), Cauchy location, and STD scale;
    other STD location shapes fall back to numeric CDF inversion.  The result
    is symmetric about mu by construction.
    """
    d = spec.dist
    ni = spec.n_intervals
    half = np.arange(ni // 2 + 1, ni)  # upper-half indices i > N_I/2
    x = 2.0 * half / ni - 1.0

    if d.tag is FamilyTag.GGD:
        off = _ggd_alpha(x, d.beta, spec.kind)
    elif spec.kind is ParamKind.SCALE:
        off = _std_scale_alpha(x, d.beta)
    elif d.beta == 1.0:
        off = _cauchy_location_alpha(x)
    else:
        dens = optimal_density(spec)
        full = thresholds_from_density_numeric(dens, ni).interior_thresholds
        off = (full[ni // 2:] - d.mu) / d.delta

    return Quantizer(_sym_from_offsets(d.mu, d.delta, off))


def _theta_edges(kinks_theta: np.ndarray) -> np.ndarray:
    """Integration grid over (-pi/2, pi/2): dense linear core, geometric ends."""
    eps = 1e-9
    cut = 0.15
    tail = []
    t = eps
    while t < cut:
        tail.append(t)
        t *= 1.3
    tail = np.asarray(tail)
    upper = math.pi / 2.0 - tail[::-1]
    core = np.linspace(-(math.pi / 2.0 - cut), math.pi / 2.0 - cut, 257)
    edges = np.concatenate((-upper[::-1], core, upper))
    edges = np.union1d(edges, kinks_theta)
    return np.unique(edges)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _segment_integrals(fn, edges: np.ndarray) -> np.ndarray:
    """Fixed-order Gauss-Legendre integral of fn over each consecutive segment."""
    a = edges[:-1]
    b = edges[1:]
    mid = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    pts = mid[:, None] + hw[:, None] * _GL_NODES[None, :]
    vals = fn(pts)
    return hw * (vals @ _GL_WEIGHTS)


def thresholds_from_density_numeric(density: IntervalDensity, n_intervals: int) -> Quantizer:
    """Invert the CDF of an interval density on a quadrature grid.

    Full-line densities are integrated through y = mu + delta*tan(theta),
    which compactifies heavy tails; bounded densities use their support
    directly.  The CDF is interpolated monotonically and inverted at the
    targets i/N_I.
    """
    if n_intervals < 2:
        raise DomainError(f"n_intervals must be at least 2, got {n_intervals}")
    d = density.dist

    if density.support is not None:
        lo, hi = density.support
        edges = np.linspace(lo, hi, 1025)
        if density.kinks:
            edges = np.unique(np.union1d(edges, [k for k in density.kinks if lo < k < hi]))
        seg = _segment_integrals(lambda y: density.density_fn(y), edges)
        grid = edges
    else:
        mu, dl = d.mu, d.delta
        kinks_t = np.arctan((np.asarray(density.kinks, dtype=float) - mu) / dl)
        edges = _theta_edges(kinks_t)

        def g(theta):
            y = mu + dl * np.tan(theta)
            sec2 = 1.0 / np.cos(theta) ** 2
            return density.density_fn(y) * dl * sec2

        seg = _segment_integrals(g, edges)
        grid = edges

    cdfv = np.concatenate(([0.0], np.cumsum(seg)))
    total = cdfv[-1]
    if not (total > 0 and np.isfinite(total)):
        raise NumericalError(f"density mass {total} is unusable")
    cdfv /= total
    keep = np.concatenate(([True], np.diff(cdfv) > 0))
    cdfv = cdfv[keep]
    grid = grid[keep]
    if np.any(np.diff(cdfv) <= 0):
        raise NumericalError("CDF grid is not strictly increasing; refine the grid")
    interp = PchipInterpolator(grid, cdfv)

    targets = np.arange(1, n_intervals) / n_intervals
    out = np.empty(n_intervals - 1)
    for j, t in enumerate(targets):
        kk = int(np.searchsorted(cdfv, t))
        kk = min(max(kk, 1), len(grid) - 1)
        lo_b, hi_b = grid[kk - 1], grid[kk]
        out[j] = brentq(lambda s: float(interp(s)) - t, lo_b, hi_b, xtol=1e-14, rtol=1e-15)

    if density.support is None:
        out = d.mu + d.delta * np.tan(out)
    if np.any(np.diff(out) <= 0):
        raise NumericalError("inverted thresholds are not increasing; refine the grid")
    return Quantizer(out)


def _closed_asymptotic(spec: DesignSpec) -> float | None:
    """Closed-form asymptotic information, or None when no closed form exists."""
    d = spec.dist
    b = d.beta
    dl2 = d.delta ** 2
    loss_scale = 2.0 ** (-2 * spec.n_bits)
    if d.tag is FamilyTag.GGD:
        g1b = specfun.gamma_fn(1.0 / b)
        if spec.kind is ParamKind.LOCATION:
            g3 = specfun.gamma_fn((2.0 - 1.0 / b) / 3.0) ** 3
            return (b - 1.0) / (dl2 * g1b) * (
                b * specfun.gamma_fn(1.0 - 1.0 / b)
                - loss_scale * (b - 1.0) * 3.0 ** (1.0 - 1.0 / b) * g3
            )
        g3 = specfun.gamma_fn((2.0 + 1.0 / b) / 3.0) ** 3
        return b / dl2 * (1.0 - loss_scale * 3.0 ** (1.0 + 1.0 / b) * b * g3 / g1b)
    if spec.kind is ParamKind.SCALE:
        b3 = specfun.beta_fn(5.0 / 6.0, (b + 4.0) / 6.0) ** 3
        return (1.0 / dl2) * (
            3.0 * (b + 1.0) / (b + 3.0) - 1.0
            - loss_scale * (b + 1.0) ** 2 * b3 / (3.0 * specfun.beta_fn(0.5, b / 2.0))
        )
    if b == 1.0:
        b3 = specfun.beta_fn(0.5, 5.0 / 6.0) ** 3
        return (1.0 / (2.0 * dl2)) * (1.0 - b3 / (3.0 * math.pi) * 2.0 ** (1 - 2 * spec.n_bits))
    return None


def asymptotic_fi(spec: DesignSpec, method: str = "auto") -> float:
    """High-resolution approximation of the maximal quantized information.

    method: "closed" (error if no closed form), "quadrature", or "auto".
    """
    if method not in ("auto", "closed", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    if method in ("auto", "closed"):
        val = _closed_asymptotic(spec)
        if val is not None:
            return val
        if method == "closed":
            raise DomainError(
                "no closed-form asymptotic information for STD location with "
                f"beta = {spec.dist.beta}"
            )
    d = spec.dist
    kernel, kinks_u = _kernel_u(d.tag, d.beta, spec.kind)
    c1 = split_quad(lambda u: float(kernel(u)), breakpoints=kinks_u)
    loss = 2.0 ** (-2 * spec.n_bits) / (12.0 * d.delta ** 2) * c1 ** 3
    return continuous_fi(d, spec.kind) - loss


def asymptotic_fi_general(q_density: IntervalDensity, spec: DesignSpec) -> float:
    """Asymptotic information for an arbitrary interval density.

    Evaluates I_c - 1/(12*N_I^2) * integral of (dS/dy)^2 f / lambda^2.  Raises
    if lambda vanishes somewhere the integrand does not (after truncating the
    far tails).
    """
    from .distributions import score_y_derivative

    d = spec.dist
    lam = q_density.density_fn
    if q_density.support is not None:
        lo, hi = q_density.support
    else:
        lo, hi = truncation_window(d, 1e-12)

    # divergence scan on a core + log-tail grid
    core = np.linspace(max(lo, d.mu - 8 * d.delta), min(hi, d.mu + 8 * d.delta), 1025)
    scan = [core]
    for sgn, edge in ((-1.0, lo), (1.0, hi)):
        far = abs(edge - d.mu) / d.delta
        if far > 8.0:
            r = np.geomspace(8.0, far, 257)
            scan.append(d.mu + sgn * d.delta * r)
    ys = np.unique(np.concatenate(scan))
    ys = ys[(ys > lo) & (ys < hi)]
    bad = np.array([*q_density.kinks, d.mu], dtype=float)
    near_kink = np.min(np.abs(ys[:, None] - bad[None, :]), axis=1) < 1e-9 * d.delta
    ys = ys[~near_kink]
    lam_v = np.asarray(lam(ys), dtype=float)
    num_v = np.asarray(score_y_derivative(d, spec.kind, ys), dtype=float) ** 2 * pdf(d, ys)
    if np.any((lam_v < 1e-280) & (num_v > 1e-280)):
        raise NumericalError(
            "interval density vanishes where the loss integrand does not"
        )

    # integrate through y = mu + delta*tan(theta); heavy tails stay tame
    mu, dl = d.mu, d.delta

    def integrand(theta):
        y = mu + dl * math.tan(theta)
        lv = float(np.asarray(lam(y)))
        if lv <= 0.0 or not (lo <= y <= hi):
            return 0.0
        s = float(np.asarray(score_y_derivative(d, spec.kind, y)))
        sec2 = 1.0 / math.cos(theta) ** 2
        return s * s * float(pdf(d, y)) / (lv * lv) * dl * sec2

    breaks = {lo, hi, d.mu, *q_density.kinks}
    if d.tag is FamilyTag.STD and spec.kind is ParamKind.LOCATION:
        rb = math.sqrt(d.beta) * d.delta
        breaks.update((d.mu - rb, d.mu + rb))
    pts = sorted(
        math.atan((bk - mu) / dl) for bk in breaks if math.isfinite(bk)
    )
    pts = [p for p in pts if -math.pi / 2 < p < math.pi / 2]
    integral, _ = _quad_integrate(integrand, -math.pi / 2, math.pi / 2, pts)
    ni = spec.n_intervals
    return continuous_fi(d, spec.kind) - integral / (12.0 * ni * ni)


def _batch_fi(T: np.ndarray, d: Distribution, kind: ParamKind) -> np.ndarray:
    """Quantized information for each row of candidate interior thresholds.

    Rows whose thresholds are not strictly increasing score -inf.
    """
    T = np.atleast_2d(T)
    F = np.asarray(cdf(d, T), dtype=float)
    w = np.asarray(pdf(d, T), dtype=float)
    if kind is ParamKind.SCALE:
        w = w * (T - d.mu) / d.delta
    m = T.shape[0]
    zeros = np.zeros((m, 1))
    Fe = np.hstack((zeros, F, np.ones((m, 1))))
    we = np.hstack((zeros, w, zeros))
    P = np.diff(Fe, axis=1)
    dP = we[:, :-1] - we[:, 1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        contrib = np.where(P > 0, dP * dP / np.where(P > 0, P, 1.0), 0.0)
    fi = contrib.sum(axis=1)
    if T.shape[1] > 1:
        fi = np.where(np.all(np.diff(T, axis=1) > 0, axis=1), fi, -np.inf)
    return fi


def _coordinate_ascent(obj_batch, x0: np.ndarray, lo: float, hi: float,
                       grid_step: float) -> np.ndarray:
    """Maximize obj_batch(X) over coordinates with ordering preserved.

    Per coordinate: full grid sweep at grid_step resolution, then a bounded
    scalar refinement between the neighboring coordinates.
    """
    x = np.array(x0, dtype=float)
    m = x.size
    grid = np.arange(lo + grid_step, hi, grid_step)
    for _ in range(100):
        moved = 0.0
        for j in range(m):
            cand = np.repeat(x[None, :], grid.size, axis=0)
            cand[:, j] = grid
            vals = obj_batch(cand)
            best = int(np.argmax(vals))
            cur = obj_batch(x[None, :])[0]
            if vals[best] > cur:
                x = cand[best].copy()
            blo = x[j - 1] + 1e-9 if j > 0 else lo + 1e-9
            bhi = x[j + 1] - 1e-9 if j < m - 1 else hi
            if bhi > blo:
                res = minimize_scalar(
                    lambda t: -obj_batch(np.concatenate((x[:j], [t], x[j + 1:]))[None, :])[0],
                    bounds=(blo, bhi), method="bounded",
                    options={"xatol": 1e-9},
                )
                if -res.fun > obj_batch(x[None, :])[0]:
                    moved = max(moved, abs(res.x - x[j]))
                    x[j] = res.x
        if moved < 1e-8:
            break
    return x


def _polish_simplex(obj_batch, x0: np.ndarray) -> np.ndarray:
    res = minimize(
        lambda p: -obj_batch(p[None, :])[0], x0, method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 8000, "maxfev": 8000},
    )
    if -res.fun > obj_batch(x0[None, :])[0]:
        return np.asarray(res.x, dtype=float)
    return x0


def _search_starts(spec: DesignSpec, m: int) -> list[np.ndarray]:
    """Deterministic multi-start offsets (in delta units) for the searches."""
    starts = [np.linspace(0.5, 2.0, m)]
    try:
        pt = practical_thresholds(spec).interior_thresholds
        off = (pt[spec.n_intervals // 2:] - spec.dist.mu) / spec.dist.delta
        if off.size == m and np.all(off > 0):
            starts.extend([off, 0.5 * off, 1.5 * off])
    except (DomainError, NumericalError):
        pass
    starts.append(np.linspace(0.25, 4.0, m))
    uniq = []
    for s in starts:
        if not any(np.allclose(s, u) for u in uniq):
            uniq.append(np.asarray(s, dtype=float))
    return uniq


def exhaustive_optimal_thresholds(spec: DesignSpec, symmetric: bool = True):
    """Search for the information-maximizing thresholds (N_B <= 3).

    Location and multi-bit scale designs search symmetric threshold sets when
    `symmetric` is true; scale with N_B = 1 always uses the asymmetric
    single-threshold search, since the symmetric solution carries no scale
    information.  Returns (quantizer, fi).
    """
    if spec.n_bits > _EXHAUSTIVE_MAX_BITS:
        raise DomainError(
            f"exhaustive search is limited to n_bits <= {_EXHAUSTIVE_MAX_BITS}"
        )
    d = spec.dist
    ni = spec.n_intervals
    mu, dl = d.mu, d.delta

    if spec.kind is ParamKind.SCALE and spec.n_bits == 1:
        return _asymmetric_search(spec, 1)
    if not symmetric:
        return _asymmetric_search(spec, ni - 1)

    m = ni // 2 - 1
    if m == 0:
        q = Quantizer(np.array([mu]))
        return q, _safe_fi(q, d, spec.kind)

    def obj(offsets_batch):
        rows = [
            _sym_from_offsets(mu, dl, row) for row in np.atleast_2d(offsets_batch)
        ]
        return _batch_fi(np.array(rows), d, spec.kind)

    candidates = []
    for x0 in _search_starts(spec, m):
        x = _coordinate_ascent(obj, x0, 0.0, _GRID_SPAN, _GRID_STEP)
        if m >= 2:
            x = _polish_simplex(obj, x)
        fi = obj(x[None, :])[0]
        candidates.append((fi, tuple(np.sort(x))))
    fi_best, off_best = max(candidates, key=lambda c: (c[0], tuple(-v for v in c[1])))
    q = Quantizer(_sym_from_offsets(mu, dl, np.array(off_best)))
    return q, _safe_fi(q, d, spec.kind)


def _safe_fi(q: Quantizer, d: Distribution, kind: ParamKind) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateCellWarning)
        return quantized_fi(q, d, kind)


def _asymmetric_search(spec: DesignSpec, k: int):
    """Coordinate-ascent search over k unconstrained ordered thresholds."""
    d = spec.dist
    mu, dl = d.mu, d.delta

    def obj(rows):
        return _batch_fi(mu + dl * np.atleast_2d(rows), d, spec.kind)

    starts = [np.linspace(-1.5, 1.5, k)]
    if k == 1:
        starts = [np.array([1.0]), np.array([-1.0]), np.array([2.5])]
    else:
        try:
            pt = practical_thresholds(spec).interior_thresholds
            starts.append((pt - mu) / dl)
        except (DomainError, NumericalError):
            pass
    candidates = []
    for x0 in starts:
        x = _coordinate_ascent(obj, np.sort(x0), -_GRID_SPAN, _GRID_SPAN, _GRID_STEP)
        if k >= 2:
            x = _polish_simplex(obj, x)
        candidates.append((obj(x[None, :])[0], tuple(np.sort(x))))
    fi_best, xb = max(candidates, key=lambda c: (c[0], tuple(-v for v in c[1])))
    q = Quantizer(mu + dl * np.array(xb))
    return q, _safe_fi(q, d, spec.kind)


def optimal_uniform_quantizer(spec: DesignSpec):
    """Best uniform quantizer centered on mu; returns (quantizer, fi).

    The step search starts on (0, 16*delta/N_I] and doubles the bracket
    whenever the optimum presses against its upper end, which happens for
    heavy tails at high bit counts.  Scale with N_B = 1 delegates to the
    asymmetric single-threshold search.
    """
    d = spec.dist
    ni = spec.n_intervals
    if spec.kind is ParamKind.SCALE and spec.n_bits == 1:
        return _asymmetric_search(spec, 1)

    offsets = np.arange(1, ni) - ni / 2.0

    def fi_of_steps(steps):
        rows = d.mu + offsets[None, :] * (np.asarray(steps, dtype=float)[:, None] * d.delta)
        return _batch_fi(rows, d, spec.kind)

    hi = 16.0 / ni
    for _ in range(8):
        grid = np.linspace(hi / 2000.0, hi, 2000)
        vals = fi_of_steps(grid)
        best = int(np.argmax(vals))
        if grid[best] < 0.98 * hi:
            break
        hi *= 2.0
    res = minimize_scalar(
        lambda s: -float(fi_of_steps([s])[0]),
        bounds=(max(grid[best] - 2 * (grid[1] - grid[0]), grid[0] / 2.0),
                min(grid[best] + 2 * (grid[1] - grid[0]), hi)),
        method="bounded", options={"xatol": 1e-9},
    )
    step = float(res.x) if -res.fun >= vals[best] else float(grid[best])
    q = Quantizer(d.mu + offsets * step * d.delta)
    return q, _safe_fi(q, d, spec.kind)
