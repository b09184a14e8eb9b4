"""Tri-sectorized interference: antenna masks, the composite site mask and
its angular Fourier coefficients, and the sectorized ISR closed form.

Every site carries three sectors whose boresights sit at pi(2c-3)/3 for
c in {1,2,3}. A user at angle theta is served by the sector whose boresight
is pi/3, so all ratios are normalized by G(theta - pi/3).
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .hexgeom import Location, NetworkConfig
from .isr_omni import isr_closed_polar

__all__ = [
    "SECTOR_OFFSETS",
    "SERVING_BORESIGHT",
    "AntennaMask",
    "SiteMaskCoeffs",
    "site_mask",
    "mask_coeff",
    "mask_coeffs",
    "intersite_sector_isr",
    "isr_trisector",
]

# Boresight offsets pi(2c-3)/3 for sectors c = 1, 2, 3.
SECTOR_OFFSETS = (-math.pi / 3.0, math.pi / 3.0, math.pi)

# The served direction: sector 1's mask argument theta - pi/3 peaks here.
SERVING_BORESIGHT = math.pi / 3.0

_DEG_GRID = np.arange(-180.0, 180.0)


@dataclass(frozen=True, eq=False)
class AntennaMask:
    """Horizontal antenna mask G(phi) in (0, 1], relative to boresight.

    Stored as 360 attenuation samples (dB >= 0) on a 1-degree grid over
    [-180, 180); evaluation interpolates linearly in the dB domain with
    wrap-around. Attenuation is clamped at backlobe_db, which doubles as
    the divide-by-gain floor for the sectorized ISR.
    """

    atten_db: np.ndarray
    beamwidth_deg: float
    backlobe_db: float

    def __post_init__(self) -> None:
        att = np.asarray(self.atten_db, dtype=np.float64)
        if att.shape != (360,):
            raise ValueError(f"mask needs 360 one-degree samples, got {att.shape}")
        if att[180] != 0.0:
            raise ValueError("mask must have 0 dB attenuation at boresight")
        if np.any(att < 0.0):
            raise ValueError("attenuation samples must be >= 0 dB")
        object.__setattr__(self, "atten_db", np.minimum(att, self.backlobe_db))

    @classmethod
    def flat(cls) -> "AntennaMask":
        """Isotropic mask G = 1 everywhere."""
        return cls(np.zeros(360), beamwidth_deg=360.0, backlobe_db=0.0)

    @classmethod
    def parametric(
        cls, beamwidth_deg: float = 65.0, backlobe_db: float = 25.0
    ) -> "AntennaMask":
        """Quadratic-dB mask min(12 (phi/beamwidth)^2, backlobe) dB.

        With the 65-degree default the 3 dB points sit at +/-32.5 degrees.
        """
        if beamwidth_deg <= 0.0 or backlobe_db <= 0.0:
            raise ValueError("beamwidth and backlobe must be positive")
        att = np.minimum(12.0 * (_DEG_GRID / beamwidth_deg) ** 2, backlobe_db)
        att[180] = 0.0
        return cls(att, beamwidth_deg, backlobe_db)

    @classmethod
    def from_table(cls, path) -> "AntennaMask":
        """Load a mask from a two-column text table (angle_deg, atten_dB).

        Requires exactly the 360 integer angles covering [-180, 180).
        """
        data = np.loadtxt(path, dtype=np.float64, comments="#", ndmin=2)
        if data.ndim != 2 or data.shape != (360, 2):
            raise ValueError(
                f"mask table must be 360 rows x 2 columns, got {data.shape}"
            )
        order = np.argsort(data[:, 0])
        angles = data[order, 0]
        att = data[order, 1]
        if not np.array_equal(angles, _DEG_GRID):
            raise ValueError("mask table must cover the integer degrees [-180, 180)")
        return cls(att, _infer_beamwidth(att), float(att.max()))

    def linear(self, phi):
        """Gain G(phi) in (0, 1] at angle(s) phi in radians (any real)."""
        deg = np.degrees(phi)
        att = np.interp(deg, _DEG_GRID, self.atten_db, period=360.0)
        gain = 10.0 ** (-0.1 * att)
        return float(gain) if np.ndim(phi) == 0 else gain


def _infer_beamwidth(att: np.ndarray) -> float:
    """Nominal 3 dB width from the first crossings on either side of 0."""
    half = []
    for sign in (-1.0, 1.0):
        deg = 0.0
        while abs(deg) < 180.0 and np.interp(deg, _DEG_GRID, att) < 3.0:
            deg += sign
        half.append(abs(deg))
    width = half[0] + half[1]
    return width if width < 360.0 else 360.0


@dataclass(frozen=True)
class SiteMaskCoeffs:
    """Leading angular Fourier coefficients of the site mask G_s."""

    alpha0: float
    alpha1: float

    def __post_init__(self) -> None:
        if not self.alpha0 > 0.0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")


def site_mask(mask: AntennaMask, phi):
    """Composite site mask G_s(phi): the three sector gains summed.

    Periodic with period 2*pi/3. Accepts scalars or arrays.
    """
    phi_arr = np.asarray(phi, dtype=np.float64)
    total = np.zeros_like(phi_arr)
    for off in SECTOR_OFFSETS:
        total += mask.linear(phi_arr + off)
    return float(total) if np.ndim(phi) == 0 else total


def mask_coeff(mask: AntennaMask, p: int, panels: int = 1024) -> float:
    """Fourier projection alpha_p = (3/pi) * int_0^{pi/3} G_s(t) cos(3pt) dt.

    Composite Simpson quadrature; the integrand is smooth, so 1024 panels
    leave error far below 1e-6.
    """
    n = panels + (panels % 2)
    t = np.linspace(0.0, math.pi / 3.0, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    integrand = site_mask(mask, t) * np.cos(3.0 * p * t)
    integral = (t[1] - t[0]) / 3.0 * float(w @ integrand)
    return 3.0 / math.pi * integral


@functools.lru_cache(maxsize=32)
def mask_coeffs(mask: AntennaMask) -> SiteMaskCoeffs:
    """alpha_0 and alpha_1 of the site mask (the terms the closed form keeps)."""
    return SiteMaskCoeffs(mask_coeff(mask, 0), mask_coeff(mask, 1))


def _alpha1_ring_term(x: float, theta: float, b: float) -> float:
    # First-ring correction kernel: sum_l Re[(x e^{i theta} - e^{il pi/3})^3]
    #                                     / |x e^{i theta} - e^{il pi/3}|^{2b+3}
    z = x * cmath.exp(1j * theta)
    acc = 0.0
    for l in range(6):
        w = z - cmath.exp(1j * l * math.pi / 3.0)
        acc += (w**3).real / abs(w) ** (2.0 * b + 3.0)
    return acc


def intersite_sector_isr(
    m: Location, cfg: NetworkConfig, mask: AntennaMask
) -> float:
    """Inter-site part of the sectorized ISR (before serving-gain division):

        f_s ~= alpha0 * f(m,b) + 2 alpha1 x^(2b) * first-ring cubic kernel

    where f is the omnidirectional closed form. Periodic in theta with
    period 2*pi/3 at fixed radius.
    """
    x = m.r / cfg.delta
    c = mask_coeffs(mask)
    f = isr_closed_polar(x, m.theta, cfg.b)
    if c.alpha1 == 0.0:
        return c.alpha0 * f
    corr = 2.0 * c.alpha1 * x ** (2.0 * cfg.b) * _alpha1_ring_term(x, m.theta, cfg.b)
    return c.alpha0 * f + corr


def isr_trisector(m: Location, cfg: NetworkConfig, mask: AntennaMask) -> float:
    """Tri-sector ISR closed form:

        F = -1 + (G_s(theta) + f_s(m,b)) / G(theta - pi/3)

    The -1 plus site-mask term accounts for the two collocated non-serving
    sectors; f_s is the inter-site part. The backlobe floor built into the
    mask keeps the serving-gain denominator away from zero.
    """
    g_serving = mask.linear(m.theta - SERVING_BORESIGHT)
    gs = site_mask(mask, m.theta)
    fs = intersite_sector_isr(m, cfg, mask)
    return -1.0 + (gs + fs) / g_serving
