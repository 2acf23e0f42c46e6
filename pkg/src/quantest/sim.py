"""Monte Carlo harness for the adaptive estimators.

Runs independent realizations of the recursive algorithms, aggregates mean
squared error on a logarithmic step grid, and attaches the matching
Cramer-Rao reference curve 1/(k * I_q), where I_q is the exact quantized
information of the deployed static design at the true parameters.

Every realization draws its own random stream from the root seed and its
realization index, so results are independent of chunking and worker
scheduling.  Aggregation sums per-chunk error totals in fixed order with
pairwise summation.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._version import __version__
from .adaptive import Mode, make_static_quantizer
from .design import DesignSpec, optimal_uniform_quantizer
from .distributions import Distribution, ParamKind, sample
from .errors import DomainError
from .quantizer import Quantizer, quantized_fi, score_coefficients

__all__ = [
    "SimConfig",
    "SimResult",
    "run_simulation",
    "reproduce_table",
    "default_log_grid",
]

_CHUNK = 128
_GRID_POINTS_PER_DECADE = 32


def default_log_grid(block_length: int, per_decade: int = _GRID_POINTS_PER_DECADE) -> tuple[int, ...]:
    """Strictly increasing step counts, roughly log-spaced, ending at block_length."""
    if block_length < 1:
        raise DomainError(f"block length must be >= 1, got {block_length}")
    if block_length == 1:
        return (1,)
    decades = math.log10(block_length)
    count = int(math.ceil(decades * per_decade)) + 1
    ks = np.unique(np.rint(np.logspace(0.0, decades, count)).astype(np.int64))
    ks = ks[(ks >= 1) & (ks <= block_length)]
    out = [int(v) for v in ks]
    if out[-1] != block_length:
        out.append(block_length)
    return tuple(out)


@dataclass(frozen=True)
class SimConfig:
    """Truth, estimator mode, and run shape for one Monte Carlo experiment.

    `log_grid` of None means the default logarithmic grid.  A positive
    `warm_start_switch` runs the first that many steps on the matching
    uniform-threshold design before switching to the practical design.
    `realization_offset` shifts the per-realization stream indices so that
    disjoint runs can be merged into one larger experiment.
    """

    dist: Distribution
    mode: Mode
    n_bits: int
    realizations: int
    block_length: int
    initial_mu_hat: float = 0.0
    initial_delta_hat: float = 1.0
    seed: int = 0
    log_grid: tuple[int, ...] | None = None
    warm_start_switch: int | None = None
    threads: int = 1
    realization_offset: int = 0

    def __post_init__(self):
        if not isinstance(self.dist, Distribution):
            raise DomainError("dist must be a Distribution")
        if not isinstance(self.mode, Mode):
            raise DomainError("mode must be a Mode")
        if self.n_bits < 1:
            raise DomainError(f"n_bits must be >= 1, got {self.n_bits}")
        if self.realizations < 1:
            raise DomainError(f"realizations must be >= 1, got {self.realizations}")
        if self.block_length < 1:
            raise DomainError(f"block_length must be >= 1, got {self.block_length}")
        if not (math.isfinite(self.initial_mu_hat)):
            raise DomainError("initial_mu_hat must be finite")
        if not (self.initial_delta_hat > 0 and math.isfinite(self.initial_delta_hat)):
            raise DomainError("initial_delta_hat must be positive")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError("seed must fit in an unsigned 64-bit integer")
        if self.log_grid is not None:
            grid = tuple(int(k) for k in self.log_grid)
            if len(grid) == 0:
                raise DomainError("log_grid must not be empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise DomainError("log_grid must be strictly increasing")
            if grid[0] < 1 or grid[-1] > self.block_length:
                raise DomainError("log_grid entries must lie in [1, block_length]")
            object.__setattr__(self, "log_grid", grid)
        if self.warm_start_switch is not None:
            if not (1 <= self.warm_start_switch <= self.block_length):
                raise DomainError("warm_start_switch must lie in [1, block_length]")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        if self.realization_offset < 0:
            raise DomainError("realization_offset must be >= 0")

    @property
    def resolved_log_grid(self) -> tuple[int, ...]:
        if self.log_grid is not None:
            return self.log_grid
        return default_log_grid(self.block_length)

    def to_config_dict(self) -> dict:
        return {
            "family": self.dist.family.tag.value,
            "beta": self.dist.family.beta,
            "mu": self.dist.mu,
            "delta": self.dist.delta,
            "mode": self.mode.value,
            "bits": self.n_bits,
            "realizations": self.realizations,
            "block": self.block_length,
            "mu0": self.initial_mu_hat,
            "delta0": self.initial_delta_hat,
            "seed": self.seed,
            "grid": list(self.log_grid) if self.log_grid is not None else None,
            "warm_switch": self.warm_start_switch,
            "threads": self.threads,
            "offset": self.realization_offset,
        }

    @classmethod
    def from_config_dict(cls, d: dict) -> "SimConfig":
        from .distributions import Family, FamilyTag

        known = {"family", "beta", "mu", "delta", "mode", "bits", "realizations",
                 "block", "mu0", "delta0", "seed", "grid", "warm_switch",
                 "threads", "offset"}
        extra = set(d) - known
        if extra:
            raise DomainError(f"unknown config keys: {sorted(extra)}")
        missing = {"family", "beta", "mode", "bits", "realizations", "block"} - set(d)
        if missing:
            raise DomainError(f"missing config keys: {sorted(missing)}")
        dist = Distribution(Family(FamilyTag(d["family"]), float(d["beta"])),
                            float(d.get("mu", 0.0)), float(d.get("delta", 1.0)))
        grid = d.get("grid")
        return cls(
            dist=dist,
            mode=Mode(d["mode"]),
            n_bits=int(d["bits"]),
            realizations=int(d["realizations"]),
            block_length=int(d["block"]),
            initial_mu_hat=float(d.get("mu0", 0.0)),
            initial_delta_hat=float(d.get("delta0", 1.0)),
            seed=int(d.get("seed", 0)),
            log_grid=tuple(int(k) for k in grid) if grid is not None else None,
            warm_start_switch=(int(d["warm_switch"])
                               if d.get("warm_switch") is not None else None),
            threads=int(d.get("threads", 1)),
            realization_offset=int(d.get("offset", 0)),
        )


@dataclass(frozen=True)
class SimResult:
    """Aggregated MSE trajectories and the matching Cramer-Rao curves."""

    config: SimConfig
    k: np.ndarray
    mse_mu: np.ndarray | None
    mse_delta: np.ndarray | None
    crb_mu: np.ndarray | None
    crb_delta: np.ndarray | None
    wall_time_s: float
    backend: str
    version: str = __version__

    def write_csv(self, path) -> None:
        cols = (self.mse_mu, self.mse_delta, self.crb_mu, self.crb_delta)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "mse_mu", "mse_delta", "crb_mu", "crb_delta"])
            for i, k in enumerate(self.k):
                row = [int(k)]
                for c in cols:
                    row.append(repr(float(c[i])) if c is not None else "")
                w.writerow(row)

    def manifest_dict(self) -> dict:
        return {
            "version": f"quantest-{self.version}",
            "backend": self.backend,
            "wall_time_s": self.wall_time_s,
            "config": self.config.to_config_dict(),
            "grid_points": int(self.k.size),
        }

    def write_manifest(self, path) -> None:
        import json

        with open(path, "w") as fh:
            json.dump(self.manifest_dict(), fh, indent=2)
            fh.write("\n")

    def write_svg(self, path) -> None:
        from matplotlib.figure import Figure

        fig = Figure(figsize=(7.0, 5.0))
        ax = fig.add_subplot(111)
        series = [
            (self.mse_mu, "MSE location", "C0", "-"),
            (self.crb_mu, "CRB location", "C0", "--"),
            (self.mse_delta, "MSE scale", "C1", "-"),
            (self.crb_delta, "CRB scale", "C1", "--"),
        ]
        for vals, label, color, style in series:
            if vals is not None:
                ax.loglog(self.k, vals, style, color=color, label=label)
        ax.set_xlabel("k")
        ax.set_ylabel("MSE")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.savefig(path, format="svg")


@dataclass(frozen=True)
class _Segment:
    """One contiguous stretch of steps driven by a single static design."""

    start: int
    stop: int
    tau: np.ndarray
    gain_mu: np.ndarray | None
    gain_delta: np.ndarray | None


@dataclass(frozen=True)
class _Plan:
    grid: np.ndarray
    segments: tuple[_Segment, ...]
    crb_fi_mu: float | None
    crb_fi_delta: float | None


def _uniform_static(spec: DesignSpec):
    """Uniform-threshold counterpart of the practical static design, normalized."""
    d0 = Distribution(spec.dist.family, 0.0, 1.0)
    spec0 = DesignSpec(d0, spec.kind, spec.n_bits)
    q, _ = optimal_uniform_quantizer(spec0)
    return q, d0


def _segment_designs(cfg: SimConfig, kind: ParamKind, want_scale: bool):
    """(tau, gain_mu, gain_delta) for the main design and the warm design."""
    spec = DesignSpec(cfg.dist, kind, cfg.n_bits)
    s = make_static_quantizer(spec, include_scale_coefficients=want_scale)
    out = []
    if cfg.warm_start_switch is not None:
        q_w, d0 = _uniform_static(spec)
        eta_w = score_coefficients(q_w, d0, kind)
        fi_w = quantized_fi(q_w, d0, kind)
        if not fi_w > 0:
            raise DomainError("warm-start design carries no information")
        if want_scale:
            eta_wd = score_coefficients(q_w, d0, ParamKind.SCALE)
            fi_wd = quantized_fi(q_w, d0, ParamKind.SCALE)
            out.append((q_w.interior_thresholds, eta_w / fi_w, eta_wd / fi_wd))
        elif kind is ParamKind.LOCATION:
            out.append((q_w.interior_thresholds,
                        (cfg.dist.delta / fi_w) * eta_w, None))
        else:
            out.append((q_w.interior_thresholds, None, eta_w / fi_w))
    if want_scale:
        main = (s.normalized_thresholds, s.coefficients / s.fi_ref,
                s.scale_coefficients / s.scale_fi_ref)
    elif kind is ParamKind.LOCATION:
        main = (s.normalized_thresholds,
                (cfg.dist.delta / s.fi_ref) * s.coefficients, None)
    else:
        main = (s.normalized_thresholds, None, s.coefficients / s.fi_ref)
    out.append(main)
    return out, s


def _true_units_quantizer(cfg: SimConfig, tau_norm: np.ndarray) -> Quantizer:
    return Quantizer(cfg.dist.mu + cfg.dist.delta * tau_norm)


def _build_plan(cfg: SimConfig) -> _Plan:
    grid = np.asarray(cfg.resolved_log_grid, dtype=np.int64)
    kind = ParamKind.SCALE if cfg.mode is Mode.SCALE_ONLY else ParamKind.LOCATION
    want_scale = cfg.mode is Mode.JOINT
    designs, s = _segment_designs(cfg, kind, want_scale)

    segments = []
    if cfg.warm_start_switch is not None:
        sw = min(cfg.warm_start_switch, cfg.block_length)
        tau, gm, gd = designs[0]
        segments.append(_Segment(0, sw, tau, gm, gd))
        if sw < cfg.block_length:
            tau, gm, gd = designs[1]
            segments.append(_Segment(sw, cfg.block_length, tau, gm, gd))
    else:
        tau, gm, gd = designs[0]
        segments.append(_Segment(0, cfg.block_length, tau, gm, gd))

    q_true = _true_units_quantizer(cfg, s.normalized_thresholds)
    crb_fi_mu = None
    crb_fi_delta = None
    if cfg.mode in (Mode.LOCATION_ONLY, Mode.JOINT):
        crb_fi_mu = quantized_fi(q_true, cfg.dist, ParamKind.LOCATION)
    if cfg.mode in (Mode.SCALE_ONLY, Mode.JOINT):
        crb_fi_delta = quantized_fi(q_true, cfg.dist, ParamKind.SCALE)
    return _Plan(grid=grid, segments=tuple(segments),
                 crb_fi_mu=crb_fi_mu, crb_fi_delta=crb_fi_delta)


def _run_chunk(args):
    cfg, plan, lo, hi = args
    rows = hi - lo
    n = cfg.block_length
    y = np.empty((rows, n), dtype=np.float64)
    for t, r in enumerate(range(lo, hi)):
        ss = np.random.SeedSequence(cfg.seed,
                                    spawn_key=(cfg.realization_offset + r,))
        rng = np.random.Generator(np.random.PCG64(ss))
        y[t] = sample(cfg.dist, rng, n)

    grid = plan.grid
    n_grid = grid.size
    floor = 1e-9 * cfg.initial_delta_hat
    err_mu = err_delta = None
    if cfg.mode is Mode.LOCATION_ONLY:
        mu_corr = np.zeros(rows)
        err_mu = np.zeros((rows, n_grid))
        for seg in plan.segments:
            _backend.run_location_block(
                np.ascontiguousarray(y[:, seg.start:seg.stop]),
                cfg.initial_mu_hat, cfg.dist.delta, seg.tau, seg.gain_mu,
                cfg.dist.mu, seg.start, mu_corr, grid, err_mu)
    elif cfg.mode is Mode.SCALE_ONLY:
        delta_hat = np.full(rows, cfg.initial_delta_hat)
        err_delta = np.zeros((rows, n_grid))
        for seg in plan.segments:
            _backend.run_scale_block(
                np.ascontiguousarray(y[:, seg.start:seg.stop]),
                cfg.dist.mu, seg.tau, seg.gain_delta, cfg.dist.delta, floor,
                seg.start, delta_hat, grid, err_delta)
    else:
        mu_corr = np.zeros(rows)
        delta_hat = np.full(rows, cfg.initial_delta_hat)
        err_mu = np.zeros((rows, n_grid))
        err_delta = np.zeros((rows, n_grid))
        for seg in plan.segments:
            _backend.run_joint_block(
                np.ascontiguousarray(y[:, seg.start:seg.stop]),
                cfg.initial_mu_hat, seg.tau, seg.gain_mu, seg.gain_delta,
                cfg.dist.mu, cfg.dist.delta, floor, seg.start, mu_corr,
                delta_hat, grid, err_mu, err_delta)

    sum_mu = np.sum(err_mu, axis=0) if err_mu is not None else None
    sum_delta = np.sum(err_delta, axis=0) if err_delta is not None else None
    return sum_mu, sum_delta


def run_simulation(cfg: SimConfig) -> SimResult:
    t0 = time.perf_counter()
    plan = _build_plan(cfg)
    R = cfg.realizations
    bounds = [(lo, min(lo + _CHUNK, R)) for lo in range(0, R, _CHUNK)]
    jobs = [(cfg, plan, lo, hi) for lo, hi in bounds]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]

    def _mean(idx):
        cols = [p[idx] for p in parts]
        if cols[0] is None:
            return None
        return np.sum(np.stack(cols, axis=0), axis=0) / R

    mse_mu = _mean(0)
    mse_delta = _mean(1)
    kk = plan.grid.astype(np.float64)
    crb_mu = 1.0 / (kk * plan.crb_fi_mu) if plan.crb_fi_mu else None
    crb_delta = 1.0 / (kk * plan.crb_fi_delta) if plan.crb_fi_delta else None
    return SimResult(config=cfg, k=plan.grid.copy(), mse_mu=mse_mu,
                     mse_delta=mse_delta, crb_mu=crb_mu, crb_delta=crb_delta,
                     wall_time_s=time.perf_counter() - t0,
                     backend=_backend.BACKEND)


def reproduce_table(which) -> dict:
    """Fisher information tables for Gaussian and Cauchy designs, N_B = 1..8.

    `which` selects location (1, "I", "location") or scale (2, "II", "scale").
    Per distribution the columns are: optimal (exhaustive search up to 3 bits,
    asymptotic formula beyond), uniform, practical, and the asymptotic formula
    evaluated at every bit count.
    """
    from .design import exhaustive_optimal_thresholds, practical_thresholds, asymptotic_fi
    from .distributions import cauchy, gaussian
    from .reference_tables import N_BITS

    key = str(which).strip().lower()
    if key in ("1", "i", "tablei", "location"):
        kind = ParamKind.LOCATION
    elif key in ("2", "ii", "tableii", "scale"):
        kind = ParamKind.SCALE
    else:
        raise DomainError(f"unknown table selector: {which!r}")

    out = {"kind": kind.value, "n_bits": list(N_BITS)}
    for name, dist in (("gaussian", gaussian()), ("cauchy", cauchy())):
        cols = {"optimal": [], "uniform": [], "practical": [], "asymptotic": []}
        for nb in N_BITS:
            spec = DesignSpec(dist, kind, nb)
            if nb <= 3:
                _, fi_opt = exhaustive_optimal_thresholds(spec)
            else:
                fi_opt = asymptotic_fi(spec)
            cols["optimal"].append(float(fi_opt))
            _, fi_unif = optimal_uniform_quantizer(spec)
            cols["uniform"].append(float(fi_unif))
            q = practical_thresholds(spec)
            cols["practical"].append(float(quantized_fi(q, dist, kind)))
            cols["asymptotic"].append(float(asymptotic_fi(spec)))
        out[name] = cols
    return out
