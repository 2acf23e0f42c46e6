"""Scalar quantizers: cell probabilities, Fisher information, output coefficients.

Cells are left-closed/right-open; the two extreme cells are unbounded, so a
quantizer is fully described by its interior thresholds.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .distributions import Distribution, ParamKind, cdf, pdf
from .errors import DomainError

__all__ = [
    "Quantizer",
    "CellProbabilities",
    "DegenerateCellWarning",
    "quantize",
    "cell_probs",
    "quantized_fi",
    "score_coefficients",
    "export_cell_table_csv",
]


class DegenerateCellWarning(UserWarning):
    """Some quantizer cell carries (numerically) no probability mass."""


@dataclass(frozen=True)
class Quantizer:
    """Interior thresholds tau_1 < ... < tau_{N_I - 1}."""

    interior_thresholds: np.ndarray

    def __post_init__(self):
        thr = np.atleast_1d(np.asarray(self.interior_thresholds, dtype=float))
        if thr.ndim != 1 or thr.size < 1:
            raise DomainError("need at least one interior threshold")
        if not np.all(np.isfinite(thr)):
            raise DomainError("thresholds must be finite")
        if thr.size > 1 and not np.all(np.diff(thr) > 0):
            raise DomainError("thresholds must be strictly increasing")
        thr = thr.copy()
        thr.flags.writeable = False
        object.__setattr__(self, "interior_thresholds", thr)

    @property
    def n_intervals(self) -> int:
        return self.interior_thresholds.size + 1

    def to_json_list(self) -> list[float]:
        return [float(t) for t in self.interior_thresholds]

    @staticmethod
    def from_json_list(values) -> "Quantizer":
        return Quantizer(np.asarray(values, dtype=float))


@dataclass(frozen=True)
class CellProbabilities:
    probs: np.ndarray = field()

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < 0) or np.any(p > 1):
            raise DomainError("cell probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > 1e-12:
            raise DomainError(f"cell probabilities sum to {p.sum()!r}, not 1")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)


def quantize(q: Quantizer, y):
    """Cell index in 1..N_I; boundary values fall in the right cell."""
    idx = np.searchsorted(q.interior_thresholds, y, side="right") + 1
    return int(idx) if np.isscalar(y) else idx


def _edge_cdf(q: Quantizer, d: Distribution) -> np.ndarray:
    """CDF at -inf, tau_1, ..., tau_{N_I-1}, +inf."""
    inner = np.asarray(cdf(d, q.interior_thresholds), dtype=float)
    return np.concatenate(([0.0], inner, [1.0]))


def _edge_pdf_weights(q: Quantizer, d: Distribution, kind: ParamKind) -> np.ndarray:
    """Per-edge terms of the analytic derivative of the cell probabilities.

    Location: f(tau).  Scale: ((tau - mu)/delta) * f(tau).  Both vanish at the
    infinite edges.
    """
    thr = q.interior_thresholds
    f = np.asarray(pdf(d, thr), dtype=float)
    if kind is ParamKind.SCALE:
        f = f * (thr - d.mu) / d.delta
    return np.concatenate(([0.0], f, [0.0]))


def cell_probs(q: Quantizer, d: Distribution) -> CellProbabilities:
    """Probability mass of each cell under d."""
    p = np.diff(_edge_cdf(q, d))
    p = np.maximum(p, 0.0)
    if np.any(p < 1e-15):
        warnings.warn(
            "quantizer has cells with probability below 1e-15 "
            "(thresholds reach far into the tails)",
            DegenerateCellWarning,
            stacklevel=2,
        )
    return CellProbabilities(p)


def _fi_terms(q: Quantizer, d: Distribution, kind: ParamKind):
    edges = _edge_pdf_weights(q, d, kind)
    dp = edges[:-1] - edges[1:]
    p = np.maximum(np.diff(_edge_cdf(q, d)), 0.0)
    return dp, p


def quantized_fi(q: Quantizer, d: Distribution, kind: ParamKind) -> float:
    """Fisher information of the quantized measurement.

    Cells with zero probability contribute nothing and raise a diagnostic
    warning.
    """
    dp, p = _fi_terms(q, d, kind)
    ok = p > 0.0
    if not np.all(ok) and np.any(dp[~ok] != 0.0):
        warnings.warn(
            "zero-probability cells dropped from the Fisher information sum",
            DegenerateCellWarning,
            stacklevel=2,
        )
    return float(np.sum(dp[ok] * dp[ok] / p[ok]))


def score_coefficients(q: Quantizer, d: Distribution, kind: ParamKind) -> np.ndarray:
    """Per-cell score values eta(i) = dP_i / P_i, indexed 0..N_I-1.

    Evaluate with d at the reference parameters (mu = 0 for location designs,
    delta = 1 for scale designs) to obtain the static output coefficients.
    """
    dp, p = _fi_terms(q, d, kind)
    ok = p > 0.0
    if not np.all(ok):
        warnings.warn(
            "zero-probability cells get zero output coefficients",
            DegenerateCellWarning,
            stacklevel=2,
        )
    eta = np.zeros_like(dp)
    eta[ok] = dp[ok] / p[ok]
    return eta


def export_cell_table_csv(path, q: Quantizer, d: Distribution, kind: ParamKind):
    """Write rows (i, tau_i, P_i, eta_i) with tau_{N_I} = inf on the last row."""
    p = np.diff(_edge_cdf(q, d))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateCellWarning)
        eta = score_coefficients(q, d, kind)
    uppers = np.concatenate((q.interior_thresholds, [math.inf]))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "tau_i", "P_i", "eta_i"])
        for i in range(q.n_intervals):
            writer.writerow([i + 1, repr(float(uppers[i])), repr(float(p[i])),
                             repr(float(eta[i]))])
