"""Trap geometry: conformal radius, the segment's exterior conformal map,
its Green's function with pole at infinity, and harmonic measure.

Two trap shapes are supported: an axis-aligned segment [a, b] x {0} and an
origin-centered disk.  A segment of length L has conformal radius L/4; the
normalized segment [-1, 1] has the explicit exterior map

    phi(z) = z + sqrt(z^2 - 1),   |phi(z)| > 1 off the segment,

with inverse (w + 1/w)/2, from which the Green's function is
H(z) = ln|phi(z)| / pi.  Rotated segments are out of scope: callers rotate
coordinates instead (the sampler in ``segment_sim`` is coordinate-aligned).
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from trapprob.errors import BoundaryError, DomainError
from trapprob.specfun import GAMMA

# Points closer to the segment than this are treated as on it: below this
# scale the square root in the map has no relative accuracy left.
BOUNDARY_TOL = 1e-12

_E_GAMMA = math.exp(GAMMA)


@dataclass(frozen=True)
class PlanePoint:
    """A point of the plane (Cartesian coordinates)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"non-finite coordinates ({self.x!r}, {self.y!r})")

    @property
    def as_complex(self):
        return complex(self.x, self.y)

    def __abs__(self):
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class TrapGeometry:
    """A segment or disk trap with its derived constants.

    Attributes
    ----------
    kind : str
        ``"segment"`` or ``"disk"``.
    a, b : float
        Segment endpoints on the horizontal axis (segment kind only).
    radius : float
        Disk radius (disk kind only).
    r_T : float
        Conformal radius: (b - a)/4 for a segment, the radius for a disk.
    r0 : float
        max over the trap of |w|.
    diam : float
        Diameter of the trap.
    d : float
        max(diam, e^gamma * r_T).
    tau0 : float
        (1/2) e^(2 gamma) r_T^2, the natural time scale of the trap.
    """

    kind: str
    a: float
    b: float
    radius: float
    r_T: float
    r0: float
    diam: float
    d: float
    tau0: float


def make_segment_trap(a, b):
    """Build the geometry record for the segment [a, b] x {0} (a < b)."""
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"degenerate trap: need a < b, got a={a!r}, b={b!r}")
    r_t = (b - a) / 4.0
    diam = b - a
    d = max(diam, _E_GAMMA * r_t)
    return TrapGeometry(
        kind="segment",
        a=a,
        b=b,
        radius=math.nan,
        r_T=r_t,
        r0=max(abs(a), abs(b)),
        diam=diam,
        d=d,
        tau0=0.5 * math.exp(2.0 * GAMMA) * r_t * r_t,
    )


def make_disk_trap(radius):
    """Build the geometry record for the origin-centered disk of given radius."""
    radius = float(radius)
    if not radius > 0.0:
        raise DomainError(f"disk radius must be positive, got {radius!r}")
    return TrapGeometry(
        kind="disk",
        a=math.nan,
        b=math.nan,
        radius=radius,
        r_T=radius,
        r0=radius,
        diam=2.0 * radius,
        d=2.0 * radius,  # 2 r_T > e^gamma r_T since e^gamma < 2
        tau0=0.5 * math.exp(2.0 * GAMMA) * radius * radius,
    )


def _segment_distance(z):
    """Distance from z to the normalized segment [-1, 1] x {0}."""
    if abs(z.x) <= 1.0:
        return abs(z.y)
    return math.hypot(abs(z.x) - 1.0, z.y)


def phi_segment(z):
    """Exterior conformal map z + sqrt(z^2 - 1) of the normalized segment.

    The branch is fixed by writing sqrt(z^2 - 1) = sqrt(z - 1) sqrt(z + 1)
    with principal square roots, which makes the product positive for
    z > 1 and negative for z < -1 and puts the cut exactly on the segment;
    |phi(z)| > 1 strictly off the segment.
    """
    if _segment_distance(z) <= BOUNDARY_TOL:
        raise BoundaryError(f"point ({z.x}, {z.y}) lies on the segment trap")
    zz = z.as_complex
    return zz + cmath.sqrt(zz - 1.0) * cmath.sqrt(zz + 1.0)


def green_segment(z):
    """Green's function with pole at infinity for the normalized segment.

    Returns ln|phi(z)|/pi, which is >= 0, vanishes as z approaches the
    segment, and grows like ln|z|/pi.  Points within BOUNDARY_TOL of the
    segment get exactly 0.
    """
    if _segment_distance(z) <= BOUNDARY_TOL:
        return 0.0
    val = math.log(abs(phi_segment(z))) / math.pi
    return val if val > 0.0 else 0.0


def harmonic_measure_nodes(n):
    """Quadrature nodes/weights for harmonic measure at infinity on [-1, 1].

    Harmonic measure of the segment (the law of the first trap point hit by
    a Brownian motion from infinity) is the arcsine distribution - the
    pushforward of the uniform law on the unit circle under (w + 1/w)/2.
    Its Gauss-Chebyshev discretization is n equal-weight nodes

        x_k = cos((2k - 1) pi / (2n)),  w_k = 1/n.

    Returns (nodes, weights) as float arrays.
    """
    if n != int(n) or n < 1:
        raise DomainError(f"need a positive integer node count, got {n!r}")
    n = int(n)
    k = np.arange(1, n + 1)
    nodes = np.cos((2 * k - 1) * np.pi / (2.0 * n))
    return nodes, np.full(n, 1.0 / n)


def r_z(trap, z):
    """max(sup over the trap of |w - z|, e^gamma r_T).

    For a segment the supremum is attained at an endpoint; for a disk it is
    |z| + radius.
    """
    if trap.kind == "segment":
        far = max(math.hypot(z.x - trap.a, z.y), math.hypot(z.x - trap.b, z.y))
    elif trap.kind == "disk":
        far = abs(z) + trap.radius
    else:
        raise DomainError(f"unknown trap kind {trap.kind!r}")
    return max(far, _E_GAMMA * trap.r_T)
