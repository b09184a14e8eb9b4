"""Hexagonal lattice geometry: site enumeration, positions, and sector angles.

Sites form an infinite triangular lattice with inter-site distance delta.
Ring k holds 6k sites, split into six rotational regions l = 0..5 with k
sites each; the site (l, k, j) sits at distance D_kj = delta*sqrt(k^2+j^2-jk)
and angle theta_kj + l*pi/3 with theta_kj = atan(j*sqrt(3)/(2k-j)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "SiteIndex",
    "Location",
    "NetworkConfig",
    "site_position",
    "enumerate_rings",
    "ring_count",
    "site_array",
    "sector_angle",
]

_TWO_PI = 2.0 * math.pi


class SiteIndex(NamedTuple):
    """Lattice site index: region l in 0..5, ring k >= 1, in-ring index j in 0..k-1."""

    l: int
    k: int
    j: int

    def validate(self) -> "SiteIndex":
        if not 0 <= self.l <= 5:
            raise ValueError(f"region index l must be in 0..5, got {self.l}")
        if self.k < 1:
            raise ValueError(f"ring index k must be >= 1, got {self.k}")
        if not 0 <= self.j <= self.k - 1:
            raise ValueError(f"in-ring index j must be in 0..k-1, got {self.j}")
        return self


@dataclass(frozen=True)
class Location:
    """A planar location in polar form with cached Cartesian components.

    The angle is normalized to [0, 2*pi) at construction so equality tests
    and antenna-mask lookups are deterministic.
    """

    r: float
    theta: float
    x: float = field(init=False, repr=False, compare=False)
    y: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.r < 0.0:
            raise ValueError(f"radius must be >= 0, got {self.r}")
        object.__setattr__(self, "theta", self.theta % _TWO_PI)
        object.__setattr__(self, "x", self.r * math.cos(self.theta))
        object.__setattr__(self, "y", self.r * math.sin(self.theta))

    @classmethod
    def from_xy(cls, x: float, y: float) -> "Location":
        return cls(math.hypot(x, y), math.atan2(y, x))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


# Linear pathloss constants are referenced to a distance of 1 km, the usual
# convention for macrocell intercepts quoted in dB; see sinr.y0.
def _db(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class NetworkConfig:
    """Static radio and geometry parameters of the hexagonal network.

    All powers are linear mW, the pathloss constant `a` is linear, distances
    are meters. `b` is the amplitude loss exponent: pathloss grows as d^(2b).
    """

    delta: float = 1000.0
    b: float = 1.5
    a: float = _db(130.0)
    P: float = _db(60.0)
    P_N: float = _db(-93.0)
    eta: float = 1.0
    R: float = 525.0
    reuse_v: float = 1.0

    def __post_init__(self) -> None:
        if not self.b > 1.0:
            raise ValueError(f"loss exponent b must be > 1, got {self.b}")
        if not 0.0 < self.R < self.delta:
            raise ValueError(f"cell radius must satisfy 0 < R < delta, got R={self.R}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"load eta must be in (0, 1], got {self.eta}")
        if self.reuse_v < 1.0:
            raise ValueError(f"reuse pattern v must be >= 1, got {self.reuse_v}")
        if self.a <= 0.0 or self.P <= 0.0 or self.P_N < 0.0:
            raise ValueError("a and P must be positive, P_N nonnegative")

    @classmethod
    def outdoor(cls, b: float = 1.5, **overrides) -> "NetworkConfig":
        """Macro outdoor profile: a = 130 dB at 1 km."""
        return cls(b=b, a=_db(130.0), **overrides)

    @classmethod
    def indoor(cls, b: float = 1.5, **overrides) -> "NetworkConfig":
        """Deep-indoor profile: a = 166 dB at 1 km (36 dB penetration margin)."""
        return cls(b=b, a=_db(166.0), **overrides)


def site_position(idx: SiteIndex, delta: float) -> Location:
    """Position of lattice site (l, k, j) for inter-site distance delta."""
    l, k, j = idx.validate()
    dist = delta * math.sqrt(k * k + j * j - j * k)
    # 2k - j > 0 always holds for j <= k-1, so atan covers the full range.
    ang = math.atan2(j * math.sqrt(3.0), 2.0 * k - j) + l * math.pi / 3.0
    return Location(dist, ang)


def enumerate_rings(k_max: int) -> Iterator[SiteIndex]:
    """Yield all site indices of rings 1..k_max in ascending ring order.

    Ring k contributes 6k sites; the total count is 3*k_max*(k_max+1).
    Ascending order matters downstream: lattice sums accumulate per ring.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    for k in range(1, k_max + 1):
        for l in range(6):
            for j in range(k):
                yield SiteIndex(l, k, j)


def ring_count(k_max: int) -> int:
    """Number of sites in rings 1..k_max."""
    return 3 * k_max * (k_max + 1)


def site_array(k_max: int, delta: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized site positions for rings 1..k_max.

    Returns
    -------
    pos : complex128 ndarray, shape (3*k_max*(k_max+1),)
        Site positions ordered exactly like enumerate_rings (ring-ascending,
        then region l, then in-ring index j).
    ring_start : int64 ndarray, shape (k_max+1,)
        ring_start[k-1]:ring_start[k] slices out ring k.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    chunks = []
    starts = np.empty(k_max + 1, dtype=np.int64)
    starts[0] = 0
    l_off = np.arange(6, dtype=np.float64)[:, None] * (math.pi / 3.0)
    for k in range(1, k_max + 1):
        j = np.arange(k, dtype=np.float64)
        dist = delta * np.sqrt(k * k + j * j - j * k)
        ang = np.arctan2(j * math.sqrt(3.0), 2.0 * k - j)
        # shape (6, k): region-major to match enumerate_rings ordering
        chunk = dist[None, :] * np.exp(1j * (ang[None, :] + l_off))
        chunks.append(chunk.reshape(-1))
        starts[k] = starts[k - 1] + 6 * k
    return np.concatenate(chunks), starts


def sector_angle(site: Location, m: Location, c: int) -> float:
    """Azimuth of location m in the frame of sector c of the given site.

    Sector c in 1..3 has boresight offset pi*(2c-3)/3; the returned angle is
    that offset plus arg(m - site).
    """
    if c not in (1, 2, 3):
        raise ValueError(f"sector index must be 1, 2, or 3, got {c}")
    dx = m.x - site.x
    dy = m.y - site.y
    if dx == 0.0 and dy == 0.0:
        raise ValueError("location coincides with the site; azimuth undefined")
    return math.pi * (2 * c - 3) / 3.0 + math.atan2(dy, dx)
