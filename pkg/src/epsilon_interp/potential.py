"""Node families on standard regions and the geometric rate machinery.

For a compact region E with logarithmic capacity kappa, the exterior
level function Phi (the exponential of the Green's function) controls
every convergence rate in the theory: nodal products over well-behaved
families satisfy |Psi_p(z)|^(1/p) -> kappa Phi(z), pole estimates
contract like Phi(z_m)/Phi(z_{k+1}), and interpolation errors like
Phi(z)/Phi(z_{k+1}).  Two concrete geometries are provided: the disk
|z| <= R (kappa = R, Phi = |z|/R) and the interval [-1, 1]
(kappa = 1/2, Phi = |z + sqrt(z^2-1)| with the outer branch).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import NodeMultiset, psi_scaled
from .errors import InsideRegionError


@dataclass(frozen=True)
class Geometry:
    """A node-bearing region: disk of given radius, [-1,1], or custom.

    Custom geometries carry nodes but no level function; rate bounds
    are unavailable for them.
    """

    kind: str
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in ("disk", "interval", "custom"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if self.kind == "disk" and not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def capacity(self) -> float:
        if self.kind == "disk":
            return self.radius
        if self.kind == "interval":
            return 0.5
        raise InsideRegionError("custom geometry has no known capacity")

    def contains(self, z) -> bool:
        z = complex(z)
        if self.kind == "disk":
            return abs(z) <= self.radius * (1 + 1e-12)
        if self.kind == "interval":
            return z.imag == 0 and abs(z.real) <= 1
        raise InsideRegionError("custom geometry has no membership test")


def disk(radius: float = 1.0) -> Geometry:
    return Geometry("disk", radius)


def interval() -> Geometry:
    return Geometry("interval")


def phi(geometry: Geometry, z) -> float:
    """Exterior level function; > 1 strictly outside E, 1 on its boundary."""
    z = complex(z)
    if geometry.kind == "disk":
        value = abs(z) / geometry.radius
        if value < 1 - 1e-12:
            raise InsideRegionError(f"{z} is inside the disk")
        return max(value, 1.0)
    if geometry.kind == "interval":
        if z.imag == 0 and abs(z.real) < 1:
            raise InsideRegionError(f"{z} is inside [-1, 1]")
        s = cmath.sqrt(z * z - 1)
        # the two candidates are reciprocal in modulus; take the outer one
        return max(abs(z + s), abs(z - s), 1.0)
    raise InsideRegionError("custom geometry has no level function")


def disk_nodes(L: int, radius: float = 1.0) -> NodeMultiset:
    """L equally spaced points on the circle of the given radius."""
    if L < 1:
        raise ValueError("need at least one node")
    return NodeMultiset(
        [radius * cmath.exp(2j * math.pi * i / L) for i in range(L)]
    )


def interval_nodes(L: int) -> NodeMultiset:
    """L Chebyshev points of the first kind on [-1, 1]."""
    if L < 1:
        raise ValueError("need at least one node")
    return NodeMultiset(
        [math.cos((2 * i - 1) * math.pi / (2 * L)) for i in range(1, L + 1)]
    )


@dataclass(frozen=True)
class NodeFamily:
    """A geometry together with its per-count node generator."""

    geometry: Geometry
    generator: callable

    def nodes(self, L: int) -> NodeMultiset:
        return self.generator(L)


def disk_family(radius: float = 1.0) -> NodeFamily:
    return NodeFamily(disk(radius), lambda L: disk_nodes(L, radius))


def interval_family() -> NodeFamily:
    return NodeFamily(interval(), interval_nodes)


def custom_family(nodes) -> NodeFamily:
    """Prefixes of a fixed user-supplied node list; no rate bounds."""
    fixed = NodeMultiset(nodes)

    def take(L: int) -> NodeMultiset:
        if L > len(fixed):
            raise ValueError(
                f"custom family holds {len(fixed)} nodes, {L} requested"
            )
        return NodeMultiset(fixed.points[:L])

    return NodeFamily(Geometry("custom"), take)


def node_asymptotics(family: NodeFamily, z, p_values, k: int = 0):
    """|Psi_p(z)|^(1/p) for each p, with Psi_p the full nodal product.

    The sequence tends to kappa * Phi(z); the scaled-product route keeps
    it finite far beyond the overflow point of the plain product.
    """
    if family.geometry.kind != "custom" and family.geometry.contains(z):
        raise InsideRegionError(f"probe {z} lies inside the node region")
    out = []
    for p in p_values:
        nodes = family.nodes(p + k)
        sp = psi_scaled(nodes, 1, p + k, z)
        if sp.is_zero:
            out.append(0.0)
        else:
            out.append(math.exp(sp.log_magnitude / p))
    return out


def _check_sorted(phis) -> None:
    for a, b in zip(phis, phis[1:]):
        if a > b * (1 + 1e-12):
            raise ValueError(
                "poles must be ordered by non-decreasing level value"
            )


def bound_pole_rate(geometry: Geometry, poles, m: int, k: int,
                    rho: float | None = None) -> float:
    """Geometric bound on |z_m^(p) - z_m| per step in p.

    Phi(z_m)/Phi(z_{k+1}) when fewer poles are modeled than exist;
    with k equal to the pole count, the region of meromorphy takes
    over and the bound is Phi(z_m)/rho (0 for entire remainders,
    rho = inf).
    """
    poles = [complex(a) for a in poles]
    if not 1 <= m <= k:
        raise ValueError(f"pole index m={m} outside 1..{k}")
    phis = [phi(geometry, a) for a in poles]
    _check_sorted(phis)
    if k < len(poles):
        return phis[m - 1] / phis[k]
    if rho is None:
        raise ValueError("rho is required when k equals the pole count")
    if math.isinf(rho):
        return 0.0
    return phis[m - 1] / rho


def bound_error_rate(geometry: Geometry, poles, k: int, z,
                     rho: float | None = None) -> float:
    """Geometric bound on ||F(z) - R(z)|| per step in p.

    Phi(z) in the numerator off the region (1 on it); Phi(z_{k+1}) in
    the denominator, replaced by rho when all poles are modeled.
    """
    poles = [complex(a) for a in poles]
    phis = [phi(geometry, a) for a in poles]
    _check_sorted(phis)
    numerator = 1.0 if geometry.contains(z) else phi(geometry, z)
    if k < len(poles):
        return numerator / phis[k]
    if rho is None:
        raise ValueError("rho is required when k equals the pole count")
    if math.isinf(rho):
        return 0.0
    return numerator / rho
