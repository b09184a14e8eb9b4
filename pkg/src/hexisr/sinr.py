"""Downlink SINR: noise normalization, the radial map g and its inverses,
and the SINR distribution for uniform-disk and Log-normal-radius traffic.

All SINR values are linear inside this module; dB conversion happens at
serialization boundaries only. The key identity is that for a user at
normalized radius x (angle averaged out), 1/SINR = g(x) is monotone, so
the CCDF reduces to evaluating the traffic CDF at a clamped inverse radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, TextIO

import numpy as np

from .hexgeom import Location, NetworkConfig
from .isr_omni import h0, isr_closed_polar, omega
from .specfun import std_normal_cdf

__all__ = [
    "TrafficKind",
    "TrafficModel",
    "CcdfCurve",
    "y0",
    "g",
    "g_inverse",
    "g_inverse_exact",
    "sinr_at",
    "lambda_y",
    "default_y_grid",
    "sinr_ccdf",
]

# Exact inversion brackets x in [0, _X_HI]; g is strictly increasing there
# (every series coefficient of H0 is positive). Saturating at _X_HI is
# harmless because the cell radius clamp sits far below it.
_X_HI = 0.985
_BISECT_STEPS = 48

INVERSE_KINDS = ("bisect", "prop3")


class TrafficKind(Enum):
    UNIFORM_DISK = "uniform"
    LOGNORMAL_RADIUS = "lognormal"


@dataclass(frozen=True)
class TrafficModel:
    """User-location distribution over the serving disk.

    The angular component is always uniform on [0, 2*pi). For
    LOGNORMAL_RADIUS, mu and sigma describe ln(r) with r measured in units
    of the inter-site distance (so mu = -2 puts mass near r = 0.135 delta),
    truncated to the cell disk.
    """

    kind: TrafficKind
    mu: Optional[float] = None
    sigma: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is TrafficKind.LOGNORMAL_RADIUS:
            if self.mu is None or self.sigma is None:
                raise ValueError("LognormalRadius traffic needs mu and sigma")
            if not self.sigma > 0.0:
                raise ValueError(f"sigma must be positive, got {self.sigma}")
        elif self.mu is not None or self.sigma is not None:
            raise ValueError("mu/sigma only apply to LognormalRadius traffic")

    @classmethod
    def uniform(cls) -> "TrafficModel":
        return cls(TrafficKind.UNIFORM_DISK)

    @classmethod
    def lognormal(cls, mu: float, sigma: float) -> "TrafficModel":
        return cls(TrafficKind.LOGNORMAL_RADIUS, mu, sigma)


@dataclass(frozen=True)
class CcdfCurve:
    """Tail distribution P(SINR > y) tabulated on an ascending y grid."""

    thresholds: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        y = np.asarray(self.thresholds, dtype=np.float64)
        p = np.asarray(self.probabilities, dtype=np.float64)
        if y.ndim != 1 or y.shape != p.shape or y.size == 0:
            raise ValueError("thresholds and probabilities must be matching 1-d")
        if np.any(y <= 0.0) or np.any(np.diff(y) <= 0.0):
            raise ValueError("thresholds must be positive and strictly ascending")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if np.any(np.diff(p) > 1e-12):
            raise ValueError("probabilities must be non-increasing in y")
        object.__setattr__(self, "thresholds", y)
        object.__setattr__(self, "probabilities", p)

    def to_csv(self, stream: TextIO, comments: tuple[str, ...] = ()) -> None:
        """Write `sinr_db,ccdf` rows (6 significant digits); comment lines
        are emitted first, prefixed with '#'."""
        for line in comments:
            stream.write(f"# {line}\n")
        stream.write("sinr_db,ccdf\n")
        for y, p in zip(self.thresholds, self.probabilities):
            stream.write(f"{10.0 * math.log10(y):.6g},{p:.6g}\n")


def y0(cfg: NetworkConfig) -> float:
    """Noise-normalization constant a*P_N/P * delta^(2b), dimensionless.

    The pathloss intercept a is referenced to 1 km, so delta enters in
    kilometers; with the defaults (a = 130 dB, P = 60 dBm, P_N = -93 dBm,
    delta = 1 km) this is 10^(-2.3).
    """
    return cfg.a * cfg.P_N / cfg.P * (cfg.delta / 1000.0) ** (2.0 * cfg.b)


def g(x: float, cfg: NetworkConfig) -> float:
    """1/SINR at normalized radius x, with the ISR angle-averaged:

        g(x) = eta * H0(x) + y0 * x^(2b)

    Strictly increasing on [0, 1), hence invertible.
    """
    if x == 0.0:
        return 0.0
    return cfg.eta * h0(x, cfg.b) + y0(cfg) * x ** (2.0 * cfg.b)


def g_inverse(y: float, cfg: NetworkConfig) -> float:
    """Closed-form approximate inverse of g:

        x = C / sqrt(1/2 + sqrt(1/4 + beta C^2))

    with C = (y / (6 eta omega(b) + y0))^(1/(2b)) and
    beta = 6 b eta omega(b+1) / (6 eta omega(b) + y0). Keeps the first two
    series orders of g, so it overshoots slightly toward the cell edge;
    g_inverse_exact quantifies the gap.
    """
    if y < 0.0:
        raise ValueError(f"g is nonnegative; cannot invert y = {y}")
    if y == 0.0:
        return 0.0
    b = cfg.b
    base = 6.0 * cfg.eta * omega(b) + y0(cfg)
    c = (y / base) ** (1.0 / (2.0 * b))
    beta = 6.0 * b * cfg.eta * omega(b + 1.0) / base
    return c / math.sqrt(0.5 + math.sqrt(0.25 + beta * c * c))


def g_inverse_exact(y: float, cfg: NetworkConfig) -> float:
    """Numerically exact inverse of g by bisection on [0, 0.985].

    Values of y beyond g(0.985) saturate at 0.985; every consumer clamps
    the result to the cell radius (0.525 delta) long before that.
    """
    if y < 0.0:
        raise ValueError(f"g is nonnegative; cannot invert y = {y}")
    if y == 0.0:
        return 0.0
    lo, hi = 0.0, _X_HI
    if g(hi, cfg) <= y:
        return hi
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if g(mid, cfg) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _inverter(inverse: str):
    if inverse not in INVERSE_KINDS:
        raise ValueError(f"inverse must be one of {INVERSE_KINDS}, got {inverse!r}")
    return g_inverse if inverse == "prop3" else g_inverse_exact


def sinr_at(m: Location, cfg: NetworkConfig) -> float:
    """Pointwise SINR 1/(eta*f(m,b) + y0*x^(2b)) with the full
    angle-dependent closed-form ISR. Returns +inf at the site center."""
    x = m.r / cfg.delta
    if x == 0.0:
        return math.inf
    denom = cfg.eta * isr_closed_polar(x, m.theta, cfg.b) + y0(cfg) * x ** (
        2.0 * cfg.b
    )
    return 1.0 / denom


def lambda_y(y: float, cfg: NetworkConfig, inverse: str = "bisect") -> float:
    """Inversion radius Lambda(y) = min(delta * g^{-1}(1/y), R) in meters."""
    if not y > 0.0:
        raise ValueError(f"SINR threshold must be positive, got {y}")
    inv = _inverter(inverse)
    return min(cfg.delta * inv(1.0 / y, cfg), cfg.R)


def default_y_grid() -> np.ndarray:
    """Linear SINR thresholds from -10 dB to 50 dB in 0.5 dB steps."""
    return 10.0 ** (np.linspace(-10.0, 50.0, 121) / 10.0)


def sinr_ccdf(
    y_grid,
    cfg: NetworkConfig,
    traffic: TrafficModel,
    inverse: str = "bisect",
) -> CcdfCurve:
    """P(SINR > y) over the threshold grid.

    SINR > y exactly when the user sits inside radius Lambda(y), so the
    tail probability is the (truncated) radial CDF there: Lambda^2/R^2 for
    the uniform disk, a normal-CDF ratio for the Log-normal radius.

    inverse selects the radial inverter: "bisect" (numerically exact,
    default) or "prop3" (the closed-form approximation).
    """
    y = np.asarray(y_grid, dtype=np.float64)
    if y.ndim != 1 or y.size == 0 or np.any(y <= 0.0):
        raise ValueError("y_grid must be a nonempty 1-d array of positive values")
    if np.any(np.diff(y) <= 0.0):
        raise ValueError("y_grid must be strictly ascending")
    lam = np.array([lambda_y(float(yi), cfg, inverse) for yi in y])
    if traffic.kind is TrafficKind.UNIFORM_DISK:
        psi = (lam / cfg.R) ** 2
    else:
        def cdf(r_m: float) -> float:
            z = (math.log(r_m / cfg.delta) - traffic.mu) / traffic.sigma
            return std_normal_cdf(z)

        norm = cdf(cfg.R)
        psi = np.array([cdf(float(l)) for l in lam]) / norm
    # Monotone by construction; clip float crumbs at the clamp boundary.
    np.minimum(psi, 1.0, out=psi)
    return CcdfCurve(y, psi)
