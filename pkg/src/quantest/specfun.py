"""Gamma/beta special functions and their inverses with controlled accuracy.

The incomplete beta integral here is unregularized: incomplete_beta(1, x, y)
equals beta_fn(x, y), not 1.  Inverses are seeded from scipy and polished with
a bracketed Newton iteration so the residual honors the requested Accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sp

from .errors import ConvergenceError, DomainError

__all__ = [
    "Accuracy",
    "DEFAULT_ACCURACY",
    "gamma_fn",
    "lower_incomplete_gamma",
    "inverse_lower_incomplete_gamma",
    "beta_fn",
    "incomplete_beta",
    "inverse_incomplete_beta",
    "erf",
    "erf_inverse",
]


@dataclass(frozen=True)
class Accuracy:
    """Tolerances for iterative inversions."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")


DEFAULT_ACCURACY = Accuracy()


def _check_finite(value: float, name: str) -> float:
    value = float(value)
    if math.isnan(value):
        raise DomainError(f"{name} is NaN")
    return value


def gamma_fn(x: float) -> float:
    """Gamma function for positive real x."""
    x = _check_finite(x, "x")
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return float(_sp.gamma(x))


def lower_incomplete_gamma(a: float, y: float) -> float:
    """Lower incomplete gamma integral from 0 to y of w**(a-1)*exp(-w)."""
    a = _check_finite(a, "a")
    y = _check_finite(y, "y")
    if a <= 0:
        raise DomainError(f"lower_incomplete_gamma requires a > 0, got {a}")
    if y < 0:
        raise DomainError(f"lower_incomplete_gamma requires y >= 0, got {y}")
    return float(_sp.gammainc(a, y)) * gamma_fn(a)


def beta_fn(x: float, y: float) -> float:
    """Beta function B(x, y) for positive arguments."""
    x = _check_finite(x, "x")
    y = _check_finite(y, "y")
    if x <= 0 or y <= 0:
        raise DomainError(f"beta_fn requires positive arguments, got ({x}, {y})")
    return float(_sp.beta(x, y))


def incomplete_beta(z: float, x: float, y: float) -> float:
    """Unregularized incomplete beta integral from 0 to z of w**(x-1)*(1-w)**(y-1)."""
    z = _check_finite(z, "z")
    x = _check_finite(x, "x")
    y = _check_finite(y, "y")
    if x <= 0 or y <= 0:
        raise DomainError(f"incomplete_beta requires positive (x, y), got ({x}, {y})")
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"incomplete_beta requires z in [0, 1], got {z}")
    return float(_sp.betainc(x, y, z)) * beta_fn(x, y)


def erf(x: float) -> float:
    """Gaussian error function."""
    return float(_sp.erf(_check_finite(x, "x")))


def _polish(fn, dfn, x0: float, lo: float, hi: float, target: float,
            scale: float, acc: Accuracy) -> float:
    """Newton iteration on fn(x) - target, falling back to bisection on [lo, hi].

    `scale` sets the natural magnitude of fn for the relative test.
    """
    tol = max(acc.abs_tol, acc.rel_tol * abs(scale))
    x = min(max(x0, lo), hi)
    for _ in range(acc.max_iter):
        r = fn(x) - target
        if abs(r) <= tol:
            return x
        if r > 0:
            hi = min(hi, x)
        else:
            lo = max(lo, x)
        d = dfn(x)
        if d > 0 and math.isfinite(d):
            step = r / d
            cand = x - step
        else:
            cand = math.nan
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        if cand == x:
            # Bracket collapsed to one representable number; the residual is
            # as small as double precision allows.
            return x
        x = cand
    raise ConvergenceError(
        f"inversion did not reach tolerance {tol:g} in {acc.max_iter} iterations"
    )


def inverse_lower_incomplete_gamma(a: float, g: float,
                                   acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Solve lower_incomplete_gamma(a, y) == g for y."""
    a = _check_finite(a, "a")
    g = _check_finite(g, "g")
    if a <= 0:
        raise DomainError(f"inverse requires a > 0, got {a}")
    total = gamma_fn(a)
    if not 0.0 <= g < total:
        raise DomainError(f"need 0 <= g < Gamma(a)={total:g}, got {g}")
    if g == 0.0:
        return 0.0
    y0 = float(_sp.gammaincinv(a, g / total))

    def fwd(y):
        return float(_sp.gammainc(a, y)) * total

    def dfy(y):
        return math.exp((a - 1.0) * math.log(y) - y) if y > 0 else math.inf

    hi = max(2.0 * y0, 1.0)
    while fwd(hi) < g:
        hi *= 2.0
    return _polish(fwd, dfy, y0, 0.0, hi, g, total, acc)


def inverse_incomplete_beta(target: float, x: float, y: float,
                            acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Solve incomplete_beta(z, x, y) == target for z in [0, 1]."""
    target = _check_finite(target, "target")
    total = beta_fn(x, y)
    if not 0.0 <= target <= total:
        raise DomainError(f"need 0 <= target <= B(x,y)={total:g}, got {target}")
    if target == 0.0:
        return 0.0
    if target == total:
        return 1.0
    z0 = float(_sp.betaincinv(x, y, target / total))

    def fwd(z):
        return float(_sp.betainc(x, y, z)) * total

    def dfz(z):
        if z <= 0.0 or z >= 1.0:
            return math.inf
        return math.exp((x - 1.0) * math.log(z) + (y - 1.0) * math.log1p(-z))

    return _polish(fwd, dfz, z0, 0.0, 1.0, target, total, acc)


def erf_inverse(p: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Inverse of erf on (-1, 1)."""
    p = _check_finite(p, "p")
    if not -1.0 < p < 1.0:
        raise DomainError(f"erf_inverse requires p in (-1, 1), got {p}")
    if p == 0.0:
        return 0.0
    x0 = float(_sp.erfinv(p))

    def dfx(x):
        return 2.0 / math.sqrt(math.pi) * math.exp(-x * x)

    # |erf_inverse| < 6.5 for any double strictly inside (-1, 1)
    return _polish(erf, dfx, x0, -6.5, 6.5, p, 1.0, acc)
