"""Generalized Gaussian and Student-t noise families.

Both families are parameterized by a shape beta, a location mu, and a scale
delta.  All densities, scores, and Fisher informations are expressed through
the normalized variable u = (y - mu) / delta.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError

__all__ = [
    "FamilyTag",
    "Family",
    "Distribution",
    "ParamKind",
    "pdf",
    "cdf",
    "score",
    "score_y_derivative",
    "continuous_fi",
    "sample",
    "truncation_window",
    "gaussian",
    "cauchy",
]

_SQRT_PI = math.sqrt(math.pi)


class FamilyTag(enum.Enum):
    GGD = "ggd"
    STD = "std"


class ParamKind(enum.Enum):
    LOCATION = "location"
    SCALE = "scale"


@dataclass(frozen=True)
class Family:
    tag: FamilyTag
    beta: float

    def __post_init__(self):
        if not (isinstance(self.tag, FamilyTag)):
            raise DomainError(f"unknown family tag {self.tag!r}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"shape beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class Distribution:
    family: Family
    mu: float = 0.0
    delta: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise DomainError(f"delta must be positive, got {self.delta}")

    @property
    def beta(self) -> float:
        return self.family.beta

    @property
    def tag(self) -> FamilyTag:
        return self.family.tag

    def to_json_dict(self) -> dict:
        return {
            "family": self.family.tag.value,
            "beta": self.family.beta,
            "mu": self.mu,
            "delta": self.delta,
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "Distribution":
        try:
            tag = FamilyTag(str(obj["family"]).lower())
            beta = float(obj["beta"])
        except (KeyError, ValueError) as exc:
            raise DomainError(f"bad distribution object: {exc}") from exc
        return Distribution(
            Family(tag, beta),
            mu=float(obj.get("mu", 0.0)),
            delta=float(obj.get("delta", 1.0)),
        )


def gaussian(mu: float = 0.0, delta: float = 1.0) -> Distribution:
    """GGD with beta=2; variance is delta**2 / 2 in this parameterization."""
    return Distribution(Family(FamilyTag.GGD, 2.0), mu, delta)


def cauchy(mu: float = 0.0, delta: float = 1.0) -> Distribution:
    """STD with beta=1."""
    return Distribution(Family(FamilyTag.STD, 1.0), mu, delta)


def _norm_const(d: Distribution) -> float:
    """Multiplier of the shape kernel in the density."""
    b = d.beta
    if d.tag is FamilyTag.GGD:
        return b / (2.0 * d.delta * _sp.gamma(1.0 / b))
    return 1.0 / (d.delta * math.sqrt(b) * _sp.beta(b / 2.0, 0.5))


def pdf(d: Distribution, y):
    """Density at y (scalar or array)."""
    u = (np.asarray(y, dtype=float) - d.mu) / d.delta
    b = d.beta
    if d.tag is FamilyTag.GGD:
        out = _norm_const(d) * np.exp(-np.abs(u) ** b)
    else:
        out = _norm_const(d) * (1.0 + u * u / b) ** (-(b + 1.0) / 2.0)
    return float(out) if np.isscalar(y) else out


def cdf(d: Distribution, y):
    """CDF at y; accepts +-inf and arrays."""
    u = (np.asarray(y, dtype=float) - d.mu) / d.delta
    b = d.beta
    if d.tag is FamilyTag.GGD:
        if b == 2.0:
            out = 0.5 * (1.0 + _sp.erf(u))
        elif b == 1.0:
            out = np.where(u < 0, 0.5 * np.exp(-np.abs(u)), 1.0 - 0.5 * np.exp(-np.abs(u)))
        else:
            tail = 0.5 * _sp.gammainc(1.0 / b, np.abs(u) ** b)
            out = np.where(u < 0, 0.5 - tail, 0.5 + tail)
        out = np.where(np.isposinf(u), 1.0, np.where(np.isneginf(u), 0.0, out))
    else:
        if b == 1.0:
            out = 0.5 + np.arctan(u) / np.pi
        else:
            with np.errstate(invalid="ignore"):
                z = b / (b + u * u)
            tail = 0.5 * _sp.betainc(b / 2.0, 0.5, z)
            out = np.where(u < 0, tail, 1.0 - tail)
            out = np.where(np.isinf(u), np.where(u > 0, 1.0, 0.0), out)
    return float(out) if np.isscalar(y) else out


def _check_ggd_location_points(d: Distribution, u: np.ndarray, needs_beta_gt_1: bool):
    b = d.beta
    if needs_beta_gt_1 and b <= 1.0:
        raise DomainError(
            "GGD location score derivative requires beta > 1; it does not exist "
            f"at y = mu for beta = {b}"
        )
    if not needs_beta_gt_1 and b <= 1.0 and np.any(u == 0.0):
        raise DomainError(
            f"GGD location score is undefined at y = mu for beta = {b}"
        )


def score(d: Distribution, kind: ParamKind, y):
    """Derivative of log pdf with respect to mu (location) or delta (scale)."""
    u = (np.asarray(y, dtype=float) - d.mu) / d.delta
    b, dl = d.beta, d.delta
    if d.tag is FamilyTag.GGD:
        if kind is ParamKind.LOCATION:
            _check_ggd_location_points(d, u, needs_beta_gt_1=False)
            with np.errstate(divide="ignore"):
                out = (b / dl) * np.abs(u) ** (b - 1.0) * np.sign(u)
        else:
            out = (b * np.abs(u) ** b - 1.0) / dl
    else:
        if kind is ParamKind.LOCATION:
            out = (b + 1.0) * u / (dl * (b + u * u))
        else:
            out = ((b + 1.0) * u * u / (b + u * u) - 1.0) / dl
    return float(out) if np.isscalar(y) else out


def score_y_derivative(d: Distribution, kind: ParamKind, y):
    """Derivative of the score with respect to the measurement y."""
    u = (np.asarray(y, dtype=float) - d.mu) / d.delta
    b, dl = d.beta, d.delta
    if d.tag is FamilyTag.GGD:
        if kind is ParamKind.LOCATION:
            _check_ggd_location_points(d, u, needs_beta_gt_1=True)
            if b < 2.0 and np.any(u == 0.0):
                raise DomainError(
                    f"GGD location score derivative diverges at y = mu for beta = {b}"
                )
            out = b * (b - 1.0) * np.abs(u) ** (b - 2.0) / dl**2
        else:
            if b < 1.0 and np.any(u == 0.0):
                raise DomainError(
                    f"GGD scale score derivative diverges at y = mu for beta = {b}"
                )
            if b == 1.0 and np.any(u == 0.0):
                raise DomainError(
                    "GGD scale score derivative jumps at y = mu for beta = 1"
                )
            out = b * b * np.abs(u) ** (b - 1.0) * np.sign(u) / dl**2
    else:
        q = (b + u * u) ** 2
        if kind is ParamKind.LOCATION:
            out = (b + 1.0) * (b - u * u) / (dl**2 * q)
        else:
            out = 2.0 * b * (b + 1.0) * u / (dl**2 * q)
    return float(out) if np.isscalar(y) else out


def continuous_fi(d: Distribution, kind: ParamKind) -> float:
    """Fisher information of an unquantized measurement."""
    b, dl = d.beta, d.delta
    if d.tag is FamilyTag.GGD:
        if kind is ParamKind.LOCATION:
            if b <= 1.0:
                raise DomainError(
                    f"GGD location Fisher information requires beta > 1, got {b}"
                )
            return b * b * _sp.gamma(2.0 - 1.0 / b) / (dl**2 * _sp.gamma(1.0 / b))
        return b / dl**2
    if kind is ParamKind.LOCATION:
        return (b + 1.0) / ((b + 3.0) * dl**2)
    return 2.0 * b / ((b + 3.0) * dl**2)


def sample(d: Distribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n i.i.d. values from d using the supplied generator."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    b = d.beta
    if d.tag is FamilyTag.GGD:
        g = rng.standard_gamma(1.0 / b, size=n)
        sign = 2.0 * rng.integers(0, 2, size=n) - 1.0
        u = sign * g ** (1.0 / b)
    elif b == 1.0:
        u = np.tan(np.pi * (rng.random(n) - 0.5))
    else:
        z = rng.standard_normal(n)
        w = rng.chisquare(b, size=n)
        u = z / np.sqrt(w / b)
    return d.mu + d.delta * u


def truncation_window(d: Distribution, tail_mass: float = 1e-12) -> tuple[float, float]:
    """Symmetric interval [mu - T*delta, mu + T*delta] leaving < tail_mass outside."""
    if not 0.0 < tail_mass < 1.0:
        raise DomainError(f"tail_mass must be in (0, 1), got {tail_mass}")
    half = tail_mass / 2.0
    b = d.beta
    if d.tag is FamilyTag.GGD:
        # Per-side tail 0.5 * Q(1/b, T**b) == half
        t = float(_sp.gammainccinv(1.0 / b, 2.0 * half)) ** (1.0 / b)
    else:
        # Per-side tail 0.5 * I_{b/(b+T^2)}(b/2, 1/2) == half (regularized)
        z = float(_sp.betaincinv(b / 2.0, 0.5, 2.0 * half))
        t = math.sqrt(b * (1.0 - z) / z)
    return d.mu - t * d.delta, d.mu + t * d.delta
