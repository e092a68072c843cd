"""Node multisets and the elementary scalar/vector operations.

Everything downstream (tableaus, the interpolant, the closed-form checks)
is written in terms of the nodal products ``psi``, the Vandermonde product,
and the inner product defined here.  Index arguments follow the 1-based
convention of the triangular recurrence tables, so ``psi(nodes, m, n, z)``
is the product of ``(z - node_r)`` for ``r = m..n``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonContiguousNodesError,
    NonFiniteValueError,
)


def ensure_finite(values, name="value"):
    """Raise :class:`NonFiniteValueError` if any entry is NaN or infinite."""
    arr = np.asarray(values)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError(f"{name} contains non-finite entries")
    return arr


def as_vector(v, dim=None, name="vector"):
    """Coerce to a 1-D complex array, optionally checking its length."""
    arr = np.asarray(v, dtype=complex).ravel()
    if arr.size == 0:
        raise DimensionMismatchError(f"{name} must have at least one component")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(
            f"{name} has dimension {arr.size}, expected {dim}"
        )
    ensure_finite(arr, name)
    return arr


def _same_point(a: complex, b: complex) -> bool:
    # Exact componentwise equality: confluent nodes come from deliberate
    # repetition, never from roundoff.
    return a.real == b.real and a.imag == b.imag


class NodeMultiset:
    """Ordered interpolation points with contiguous confluent runs.

    Equal nodes must be adjacent; a node list like ``[a, b, a]`` is
    rejected rather than silently reordered.  ``groups`` collects the
    distinct points with their multiplicities, in order of appearance.
    """

    __slots__ = ("_nodes", "_groups")

    def __init__(self, nodes):
        arr = np.asarray(nodes, dtype=complex).ravel()
        if arr.size == 0:
            raise ValueError("node list must be nonempty")
        ensure_finite(arr, "nodes")
        groups: list[tuple[complex, int]] = []
        seen: list[complex] = []
        for z in arr:
            z = complex(z)
            if groups and _same_point(groups[-1][0], z):
                groups[-1] = (groups[-1][0], groups[-1][1] + 1)
                continue
            for prev in seen:
                if _same_point(prev, z):
                    raise NonContiguousNodesError(
                        f"node {z} repeats non-contiguously"
                    )
            seen.append(z)
            groups.append((z, 1))
        arr.setflags(write=False)
        self._nodes = arr
        self._groups = tuple(groups)

    @property
    def groups(self) -> tuple[tuple[complex, int], ...]:
        return self._groups

    @property
    def points(self) -> np.ndarray:
        return self._nodes

    def node(self, i: int) -> complex:
        """Node ``xi_i`` with the 1-based index used in the recurrences."""
        if not 1 <= i <= self._nodes.size:
            raise IndexError(f"node index {i} out of range 1..{self._nodes.size}")
        return complex(self._nodes[i - 1])

    def has_confluence(self) -> bool:
        return any(r > 1 for _, r in self._groups)

    def __len__(self) -> int:
        return self._nodes.size

    def __iter__(self):
        return (complex(z) for z in self._nodes)

    def __getitem__(self, i):
        return complex(self._nodes[i])

    def __repr__(self) -> str:
        return f"NodeMultiset({list(self._nodes)!r})"


def _check_range(nodes: NodeMultiset, m: int, n: int) -> None:
    if m < 1:
        raise IndexError(f"m must be >= 1, got {m}")
    if n > len(nodes):
        raise IndexError(f"n={n} exceeds node count {len(nodes)}")
    if n < m - 1:
        raise IndexError(f"n={n} below the empty-product index m-1={m - 1}")


def psi(nodes: NodeMultiset, m: int, n: int, z):
    """Nodal product ``prod_{r=m..n} (z - xi_r)``; equals 1 when ``n = m-1``."""
    _check_range(nodes, m, n)
    result = 1.0 + 0.0j
    for r in range(m, n + 1):
        result = result * (z - nodes.node(r))
    return result


@dataclass(frozen=True)
class ScaledProduct:
    """A complex product kept as ``exp(log_magnitude) * phase``.

    Keeps long nodal products representable when the plain value would
    overflow or underflow double precision.  ``phase`` has unit modulus;
    ``is_zero`` flags a product with an exactly-zero factor.
    """

    log_magnitude: float
    phase: complex
    is_zero: bool = False

    @classmethod
    def one(cls) -> "ScaledProduct":
        return cls(0.0, 1.0 + 0.0j)

    @classmethod
    def from_value(cls, w) -> "ScaledProduct":
        w = complex(w)
        if w == 0:
            return cls(0.0, 1.0 + 0.0j, is_zero=True)
        mag = abs(w)
        return cls(math.log(mag), w / mag)

    def value(self) -> complex:
        if self.is_zero:
            return 0.0 + 0.0j
        return cmath.exp(self.log_magnitude) * self.phase

    def __mul__(self, other: "ScaledProduct") -> "ScaledProduct":
        if self.is_zero or other.is_zero:
            return ScaledProduct(0.0, 1.0 + 0.0j, is_zero=True)
        phase = self.phase * other.phase
        # renormalize so |phase| stays at 1 over long accumulations
        phase = phase / abs(phase)
        return ScaledProduct(self.log_magnitude + other.log_magnitude, phase)

    def __truediv__(self, other: "ScaledProduct") -> "ScaledProduct":
        if other.is_zero:
            raise ZeroDivisionError("division by an exactly-zero scaled product")
        if self.is_zero:
            return ScaledProduct(0.0, 1.0 + 0.0j, is_zero=True)
        phase = self.phase / other.phase
        phase = phase / abs(phase)
        return ScaledProduct(self.log_magnitude - other.log_magnitude, phase)


def psi_scaled(nodes: NodeMultiset, m: int, n: int, z) -> ScaledProduct:
    """As :func:`psi`, accumulated factor-by-factor in log magnitude."""
    _check_range(nodes, m, n)
    log_mag = 0.0
    phase = 1.0 + 0.0j
    for r in range(m, n + 1):
        w = complex(z) - nodes.node(r)
        if w == 0:
            return ScaledProduct(0.0, 1.0 + 0.0j, is_zero=True)
        a = abs(w)
        log_mag += math.log(a)
        phase *= w / a
    if phase != 0:
        phase = phase / abs(phase)
    return ScaledProduct(log_mag, phase)


def vandermonde(points) -> complex:
    """``prod_{i<j} (x_j - x_i)`` over the given points; 1 below two points."""
    pts = [complex(x) for x in np.asarray(points, dtype=complex).ravel()]
    result = 1.0 + 0.0j
    for j in range(len(pts)):
        for i in range(j):
            result *= pts[j] - pts[i]
    return result


def inner(q, v) -> complex:
    """Inner product ``sum_j conj(q_j) v_j`` (conjugation on the first slot)."""
    qa = as_vector(q, name="q")
    va = as_vector(v, dim=qa.size, name="v")
    return complex(np.vdot(qa, va))


def newton_to_monomial(coeffs, nodes: NodeMultiset) -> np.ndarray:
    """Expand ``sum_j c_j psi_{1,j}(z)`` into ascending monomial coefficients.

    Sequential synthetic multiplication by the linear factors; with
    ``c_k = 1`` the leading output coefficient is exactly 1.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    k = c.size - 1
    if k + 1 > len(nodes) + 1:
        raise IndexError("more coefficients than nodal factors available")
    poly = np.array([c[k]], dtype=complex)
    for j in range(k - 1, -1, -1):
        xi = nodes.node(j + 1)
        grown = np.zeros(poly.size + 1, dtype=complex)
        grown[1:] = poly
        grown[:-1] -= xi * poly
        grown[0] += c[j]
        poly = grown
    return poly
