"""Recursive estimation through a static normalized quantizer.

Each algorithm keeps a normalized threshold set fixed and adapts the input
offset (location), the input gain (scale), or both (joint).  Updates follow a
stochastic-approximation rule with decreasing gain 1/k and the quantizer's
per-cell score coefficients.

The location estimate is stored as a fixed reference plus an accumulated
correction; the residual entering the quantizer is computed as
(y - reference) - correction.  With that arithmetic a shift of the data and
of the initial estimate by the same constant reproduces the correction
sequence bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, ParamKind
from .errors import DomainError
from .quantizer import Quantizer, quantized_fi, score_coefficients

__all__ = [
    "Mode",
    "StaticQuantizerSpec",
    "EstimatorState",
    "make_static_quantizer",
    "step_location",
    "step_scale",
    "step_joint",
    "run_trajectory",
    "export_trajectories_csv",
    "DELTA_FLOOR_FRACTION",
]

# Positivity floor for the scale estimate, as a fraction of its initial value.
DELTA_FLOOR_FRACTION = 1e-9

# The multiplicative scale update can overshoot below zero when a cell's
# coefficient exceeds the reference information in magnitude (Cauchy designs
# reach eta/I near -1.9, so the first step would go negative about half the
# time).  Each step may shrink the estimate by at most this factor; 0.25 is a
# power of two, so the clamped value is exact in floating point.  The clamp
# can only trigger while k < 2|eta|/I, i.e. the first few steps.
SCALE_STEP_MIN_FACTOR = 0.25


class Mode(enum.Enum):
    LOCATION_ONLY = "location"
    SCALE_ONLY = "scale"
    JOINT = "joint"


@dataclass(frozen=True)
class StaticQuantizerSpec:
    """Normalized thresholds with output coefficients and reference information.

    `coefficients` and `fi_ref` belong to the parameter the design targets.
    For the joint estimator the scale coefficients evaluated on the same
    (location-design) cells are carried alongside.
    """

    normalized_thresholds: np.ndarray
    coefficients: np.ndarray
    fi_ref: float
    scale_coefficients: np.ndarray | None = None
    scale_fi_ref: float | None = None

    def __post_init__(self):
        thr = np.asarray(self.normalized_thresholds, dtype=float)
        eta = np.asarray(self.coefficients, dtype=float)
        if thr.ndim != 1 or (thr.size > 1 and not np.all(np.diff(thr) > 0)):
            raise DomainError("normalized thresholds must be strictly increasing")
        if eta.shape != (thr.size + 1,):
            raise DomainError("need one coefficient per quantizer cell")
        if not (self.fi_ref > 0 and math.isfinite(self.fi_ref)):
            raise DomainError(f"reference information must be positive, got {self.fi_ref}")
        if (self.scale_coefficients is None) != (self.scale_fi_ref is None):
            raise DomainError("scale coefficients and scale fi_ref come together")
        if self.scale_fi_ref is not None and not self.scale_fi_ref > 0:
            raise DomainError("scale reference information must be positive")
        thr = thr.copy()
        thr.flags.writeable = False
        eta = eta.copy()
        eta.flags.writeable = False
        object.__setattr__(self, "normalized_thresholds", thr)
        object.__setattr__(self, "coefficients", eta)
        if self.scale_coefficients is not None:
            se = np.asarray(self.scale_coefficients, dtype=float).copy()
            if se.shape != (thr.size + 1,):
                raise DomainError("need one scale coefficient per quantizer cell")
            se.flags.writeable = False
            object.__setattr__(self, "scale_coefficients", se)

    @property
    def n_intervals(self) -> int:
        return self.normalized_thresholds.size + 1


@dataclass(frozen=True)
class EstimatorState:
    mode: Mode
    k: int
    mu_ref: float
    mu_corr: float
    delta_hat: float
    delta_floor: float

    @property
    def mu_hat(self) -> float:
        return self.mu_ref + self.mu_corr

    @classmethod
    def initial(cls, mode: Mode, mu_hat: float = 0.0,
                delta_hat: float = 1.0) -> "EstimatorState":
        if not (delta_hat > 0 and math.isfinite(delta_hat)):
            raise DomainError(f"initial delta estimate must be positive, got {delta_hat}")
        if not math.isfinite(mu_hat):
            raise DomainError(f"initial mu estimate must be finite, got {mu_hat}")
        return cls(mode=mode, k=0, mu_ref=float(mu_hat), mu_corr=0.0,
                   delta_hat=float(delta_hat),
                   delta_floor=DELTA_FLOOR_FRACTION * float(delta_hat))


def make_static_quantizer(spec, include_scale_coefficients: bool = False) -> StaticQuantizerSpec:
    """Static quantizer of a design evaluated at mu = 0, delta = 1.

    With `include_scale_coefficients` (the joint estimator), the scale
    coefficients and scale information are evaluated on the same cells.
    """
    from .design import DesignSpec, practical_thresholds

    d0 = Distribution(spec.dist.family, 0.0, 1.0)
    spec0 = DesignSpec(d0, spec.kind, spec.n_bits)
    q = practical_thresholds(spec0)
    eta = score_coefficients(q, d0, spec.kind)
    fi = quantized_fi(q, d0, spec.kind)
    if include_scale_coefficients:
        if spec.kind is not ParamKind.LOCATION:
            raise DomainError("joint estimation builds on a location design")
        eta_d = score_coefficients(q, d0, ParamKind.SCALE)
        fi_d = quantized_fi(q, d0, ParamKind.SCALE)
        return StaticQuantizerSpec(q.interior_thresholds, eta, fi,
                                   scale_coefficients=eta_d, scale_fi_ref=fi_d)
    return StaticQuantizerSpec(q.interior_thresholds, eta, fi)


def _cell(s: StaticQuantizerSpec, u: float) -> int:
    return int(np.searchsorted(s.normalized_thresholds, u, side="right"))


def step_location(state: EstimatorState, s: StaticQuantizerSpec, y: float,
                  known_delta: float) -> EstimatorState:
    """One measurement update of the location estimate with known scale."""
    if state.mode is not Mode.LOCATION_ONLY:
        raise DomainError(f"state mode is {state.mode}, not location-only")
    k = state.k + 1
    r = (y - state.mu_ref) - state.mu_corr
    u = r / known_delta
    i = _cell(s, u)
    gain0 = known_delta / s.fi_ref
    upd = (gain0 * s.coefficients[i]) / k
    return EstimatorState(mode=state.mode, k=k, mu_ref=state.mu_ref,
                          mu_corr=state.mu_corr + upd,
                          delta_hat=state.delta_hat,
                          delta_floor=state.delta_floor)


def step_scale(state: EstimatorState, s: StaticQuantizerSpec, y: float,
               known_mu: float) -> EstimatorState:
    """One measurement update of the scale estimate with known location."""
    if state.mode is not Mode.SCALE_ONLY:
        raise DomainError(f"state mode is {state.mode}, not scale-only")
    k = state.k + 1
    u = (y - known_mu) / state.delta_hat
    i = _cell(s, u)
    upd = state.delta_hat * ((s.coefficients[i] / s.fi_ref) / k)
    dh = state.delta_hat + upd
    if dh < SCALE_STEP_MIN_FACTOR * state.delta_hat:
        dh = SCALE_STEP_MIN_FACTOR * state.delta_hat
    if dh < state.delta_floor:
        dh = state.delta_floor
    return EstimatorState(mode=state.mode, k=k, mu_ref=state.mu_ref,
                          mu_corr=state.mu_corr, delta_hat=dh,
                          delta_floor=state.delta_floor)


def step_joint(state: EstimatorState, s: StaticQuantizerSpec, y: float) -> EstimatorState:
    """One measurement update of both estimates; both use the previous scale."""
    if state.mode is not Mode.JOINT:
        raise DomainError(f"state mode is {state.mode}, not joint")
    if s.scale_coefficients is None:
        raise DomainError("joint stepping needs a quantizer with scale coefficients")
    k = state.k + 1
    dh = state.delta_hat
    r = (y - state.mu_ref) - state.mu_corr
    u = r / dh
    i = _cell(s, u)
    upd_mu = dh * ((s.coefficients[i] / s.fi_ref) / k)
    upd_dh = dh * ((s.scale_coefficients[i] / s.scale_fi_ref) / k)
    dh_new = dh + upd_dh
    if dh_new < SCALE_STEP_MIN_FACTOR * dh:
        dh_new = SCALE_STEP_MIN_FACTOR * dh
    if dh_new < state.delta_floor:
        dh_new = state.delta_floor
    return EstimatorState(mode=state.mode, k=k, mu_ref=state.mu_ref,
                          mu_corr=state.mu_corr + upd_mu, delta_hat=dh_new,
                          delta_floor=state.delta_floor)


def run_trajectory(state: EstimatorState, s: StaticQuantizerSpec, ys,
                   known_delta: float | None = None,
                   known_mu: float | None = None) -> list[EstimatorState]:
    """Advance one realization sample by sample; returns the state after each step."""
    out = []
    for y in np.asarray(ys, dtype=float).ravel():
        if state.mode is Mode.LOCATION_ONLY:
            if known_delta is None:
                raise DomainError("location-only stepping needs known_delta")
            state = step_location(state, s, float(y), known_delta)
        elif state.mode is Mode.SCALE_ONLY:
            if known_mu is None:
                raise DomainError("scale-only stepping needs known_mu")
            state = step_scale(state, s, float(y), known_mu)
        else:
            state = step_joint(state, s, float(y))
        out.append(state)
    return out


def export_trajectories_csv(path, trajectories) -> None:
    """Write (realization_id, states) pairs as rows realization_id, k, mu_hat, delta_hat."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["realization_id", "k", "mu_hat", "delta_hat"])
        for rid, states in trajectories:
            for st in states:
                w.writerow([rid, st.k, repr(float(st.mu_hat)), repr(float(st.delta_hat))])
