"""Vector divided differences over node multisets with confluence.

The tableau is the standard triangular recurrence

    D[m][n] = (D[m+1][n] - D[m][n-1]) / (xi_n - xi_m)

applied componentwise, with the confluent rule: when ``xi_m == xi_n`` the
entry is the stored derivative ``F^(n-m)(xi_m) / (n-m)!``.  Samples carry
consecutive derivatives at each distinct point, so a multiplicity-r node
needs orders 0..r-1.
"""

from __future__ import annotations

import math

import numpy as np

from .core import NodeMultiset, as_vector
from .errors import DimensionMismatchError, MissingSampleError


class SampleSet:
    """Values and successive derivatives of a vector function at points.

    ``entries`` maps each distinct point to the list
    ``[F(a), F'(a), F''(a), ...]`` of length at least the node multiplicity.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise DimensionMismatchError("sample dimension must be positive")
        self.dim = int(dim)
        self.entries: dict[complex, list[np.ndarray]] = {}

    def _key(self, point: complex) -> complex:
        point = complex(point)
        for existing in self.entries:
            if existing.real == point.real and existing.imag == point.imag:
                return existing
        return point

    def add(self, point, values) -> "SampleSet":
        """Append derivative rows for ``point``; order 0 first, then 1, ..."""
        key = self._key(point)
        rows = self.entries.setdefault(key, [])
        values = np.atleast_2d(np.asarray(values, dtype=complex))
        for row in values:
            rows.append(as_vector(row, dim=self.dim, name="sample"))
        return self

    def derivative(self, point, order: int) -> np.ndarray:
        key = self._key(point)
        rows = self.entries.get(key)
        if rows is None:
            raise MissingSampleError(f"no samples at node {complex(point)}")
        if order >= len(rows):
            raise MissingSampleError(
                f"derivative order {order} missing at node {complex(point)}"
            )
        return rows[order]

    @classmethod
    def from_function(cls, func, nodes: NodeMultiset, dim=None) -> "SampleSet":
        """Sample a callable ``func(point, order) -> (N,) array`` at nodes."""
        probe = np.asarray(func(nodes.node(1), 0), dtype=complex).ravel()
        out = cls(dim if dim is not None else probe.size)
        for point, mult in nodes.groups:
            for order in range(mult):
                out.add(point, np.asarray(func(point, order), dtype=complex))
        return out


class DividedDifferenceTable:
    """Dense triangular table of vector divided differences.

    ``entry(m, n)`` is the difference over nodes ``xi_m..xi_n`` with the
    1-based indices of the recurrences; only ``m <= n`` is populated.
    """

    def __init__(self, nodes: NodeMultiset, data: np.ndarray):
        self.nodes = nodes
        self._data = data

    @property
    def dim(self) -> int:
        return self._data.shape[2]

    def entry(self, m: int, n: int) -> np.ndarray:
        L = len(self.nodes)
        if not (1 <= m <= n <= L):
            raise IndexError(f"table entry ({m},{n}) outside 1 <= m <= n <= {L}")
        return self._data[m - 1, n - 1]


def build_table(nodes: NodeMultiset, samples: SampleSet) -> DividedDifferenceTable:
    """Fill the triangular tableau, using stored derivatives on confluent runs."""
    L = len(nodes)
    N = samples.dim
    data = np.zeros((L, L, N), dtype=complex)
    for m in range(1, L + 1):
        data[m - 1, m - 1] = samples.derivative(nodes.node(m), 0)
    for width in range(1, L):
        for m in range(1, L - width + 1):
            n = m + width
            xm, xn = nodes.node(m), nodes.node(n)
            if xm.real == xn.real and xm.imag == xn.imag:
                s = n - m
                data[m - 1, n - 1] = samples.derivative(xm, s) / math.factorial(s)
            else:
                data[m - 1, n - 1] = (
                    data[m, n - 1] - data[m - 1, n - 2]
                ) / (xn - xm)
    return DividedDifferenceTable(nodes, data)


def newton_eval(table: DividedDifferenceTable, m: int, n: int, z) -> np.ndarray:
    """Evaluate the Newton interpolant G over nodes ``xi_m..xi_n`` at ``z``.

    Horner form over the nested factors:
    ``G(z) = D[m,m] + (z-xi_m)(D[m,m+1] + (z-xi_{m+1})(...))``.
    """
    nodes = table.nodes
    if not 1 <= m <= n <= len(nodes):
        raise IndexError(f"range ({m},{n}) outside 1 <= m <= n <= {len(nodes)}")
    acc = np.array(table.entry(m, n), dtype=complex)
    for i in range(n - 1, m - 1, -1):
        acc = table.entry(m, i) + (z - nodes.node(i)) * acc
    return acc


def scalar_table(nodes: NodeMultiset, func) -> DividedDifferenceTable:
    """Tableau of a scalar callable ``func(point, order)``; dim-1 vectors."""
    samples = SampleSet.from_function(
        lambda z, r: np.array([func(z, r)], dtype=complex), nodes, dim=1
    )
    return build_table(nodes, samples)


def confluent_limit_check(func, nodes: NodeMultiset, gap: float) -> float:
    """Max table discrepancy between confluent nodes and a spread-out copy.

    Each multiplicity-r run at a is replaced by r distinct points
    a, a+gap, ..., a+(r-1)gap, sampled at order 0 only.  A small return
    value certifies that the derivative rule is the distinct-node limit.
    """
    if not nodes.has_confluence():
        return 0.0
    spread = []
    for point, mult in nodes.groups:
        for t in range(mult):
            spread.append(point + t * gap)
    spread_nodes = NodeMultiset(spread)
    conf = build_table(nodes, SampleSet.from_function(func, nodes))
    pert = build_table(spread_nodes, SampleSet.from_function(func, spread_nodes))
    L = len(nodes)
    worst = 0.0
    for m in range(1, L + 1):
        for n in range(m, L + 1):
            diff = np.linalg.norm(conf.entry(m, n) - pert.entry(m, n))
            worst = max(worst, float(diff))
    return worst
