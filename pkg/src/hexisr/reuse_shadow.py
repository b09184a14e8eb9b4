"""Frequency-reuse rescaling of the ISR, fractional frequency reuse, and
Log-normal shadowing moments via Fenton-Wilkinson matching."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hexgeom import Location, NetworkConfig
from .isr_omni import isr_closed_polar

__all__ = [
    "FfrPattern",
    "ShadowingParams",
    "isr_reuse",
    "isr_ffr",
    "shadowed_isr_moments",
    "lognormal_params",
]

_LN10_OVER_10 = math.log(10.0) / 10.0


@dataclass(frozen=True)
class FfrPattern:
    """Fractional frequency reuse: inner_v inside radius r0, outer_v beyond.

    r0 is in meters and must stay below the cell radius of the config the
    pattern is used with (checked at evaluation time).
    """

    inner_v: float
    outer_v: float
    r0: float

    def __post_init__(self) -> None:
        if not self.inner_v >= 1.0 or not self.outer_v >= 1.0:
            raise ValueError("reuse factors must be >= 1")
        if self.inner_v > self.outer_v:
            raise ValueError(
                f"inner reuse {self.inner_v} must not exceed outer {self.outer_v}"
            )
        if not self.r0 > 0.0:
            raise ValueError(f"threshold radius must be positive, got {self.r0}")


@dataclass(frozen=True)
class ShadowingParams:
    """First two moments of the per-link Log-normal shadowing factor chi."""

    mean_chi: float
    var_chi: float

    def __post_init__(self) -> None:
        if not self.mean_chi > 0.0:
            raise ValueError(f"mean_chi must be positive, got {self.mean_chi}")
        if self.var_chi < 0.0:
            raise ValueError(f"var_chi must be >= 0, got {self.var_chi}")

    @classmethod
    def from_sigma_db(cls, sigma_db: float) -> "ShadowingParams":
        """Moments of chi = 10^(X/10), X ~ Normal(0, sigma_db^2) (median 1)."""
        if sigma_db < 0.0:
            raise ValueError(f"sigma_db must be >= 0, got {sigma_db}")
        s2 = (_LN10_OVER_10 * sigma_db) ** 2
        mean = math.exp(0.5 * s2)
        var = math.exp(s2) * math.expm1(s2)
        return cls(mean, var)


def isr_reuse(m: Location, cfg: NetworkConfig, v: float) -> float:
    """ISR under frequency reuse v: the closed form at the scaled radius,

        f_hat(m, b, v) = f(m / sqrt(v), b)

    exact for any real v >= 1 (interferers move sqrt(v) times farther on
    the reuse-v sublattice). Rhombic-lattice-realizable reuse satisfies
    v = i^2 + ij + j^2, but any v >= 1 is accepted.
    """
    if not v >= 1.0:
        raise ValueError(f"reuse factor must be >= 1, got {v}")
    x = m.r / (math.sqrt(v) * cfg.delta)
    return isr_closed_polar(x, m.theta, cfg.b)


def isr_ffr(m: Location, cfg: NetworkConfig, ffr: FfrPattern) -> float:
    """ISR under a two-zone FFR pattern; |m| <= r0 selects inner_v."""
    if not ffr.r0 < cfg.R:
        raise ValueError(
            f"FFR threshold {ffr.r0} must lie inside the cell radius {cfg.R}"
        )
    v = ffr.inner_v if m.r <= ffr.r0 else ffr.outer_v
    return isr_reuse(m, cfg, v)


def shadowed_isr_moments(
    m: Location, cfg: NetworkConfig, sh: ShadowingParams
) -> tuple[float, float]:
    """(mean, variance) of the shadowed ISR.

    Independent per-interferer Log-normal factors scale each term of the
    lattice sum, so the mean is f(m,b) E[chi] and the variance collapses to
    f(m,2b) Var[chi] (the squared weights form the 2b-exponent sum). Both
    are exact; approximation enters only if the caller models the total as
    Log-normal via lognormal_params.
    """
    x = m.r / cfg.delta
    mean = isr_closed_polar(x, m.theta, cfg.b) * sh.mean_chi
    variance = isr_closed_polar(x, m.theta, 2.0 * cfg.b) * sh.var_chi
    return mean, variance


def lognormal_params(mean: float, variance: float) -> tuple[float, float]:
    """(mu, sigma) of the Log-normal with the given mean and variance."""
    if not mean > 0.0 or variance < 0.0:
        raise ValueError("need mean > 0 and variance >= 0")
    s2 = math.log1p(variance / (mean * mean))
    return math.log(mean) - 0.5 * s2, math.sqrt(s2)
