"""Vector-valued rational interpolant with a scalar denominator.

Given p+k nodes and samples of F: C -> C^N, the interpolant is

    R(z) = U(z)/V(z),
    V(z) = sum_{j=0..k} c_j psi_{1,j}(z),        c_k = 1,
    U(z) = sum_{j=0..k} c_j psi_{1,j}(z) G_{j+1,p}(z),

where G_{m,n} is the Newton interpolant of F over nodes m..n and the
coefficients c_j are fixed by k orthogonality constraints: the projection
of the defining divided differences onto a fixed direction q vanishes,

    sum_{j=0..k} c_j (q, D_{j+1, p+i}) = 0,   i = 1..k.

V is monic of degree k by construction, so its k roots estimate the poles
of F nearest the nodes.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator

from .core import NodeMultiset, as_vector, inner, newton_to_monomial
from .divided import DividedDifferenceTable, SampleSet, build_table, newton_eval
from .errors import DimensionMismatchError, EvalAtPoleError
from .linalg import PIVOT_RTOL, det_pivoted, solve_pivoted

EVAL_POLE_RTOL = 1e-13


def default_direction(dim: int) -> np.ndarray:
    """The fallback projection direction (1, ..., 1)/sqrt(N)."""
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)


def assemble_system(table: DividedDifferenceTable, k: int, q) -> np.ndarray:
    """The k x (k+1) matrix u[i][j] = (q, D[j+1][p+i]), p = L - k.

    Row i (1-based) collects the projections of the divided differences
    that the defining requirement forces to zero; column k corresponds to
    the normalized coefficient c_k = 1.
    """
    L = len(table.nodes)
    p = L - k
    if k < 0:
        raise ValueError("k must be non-negative")
    if p < 1:
        raise ValueError(f"need at least k+1 = {k + 1} nodes, got {L}")
    if p < k:
        raise ValueError(
            f"defining system needs p >= k, got p={p}, k={k}"
        )
    q = as_vector(q, dim=table.dim, name="q")
    u = np.zeros((k, k + 1), dtype=complex)
    for i in range(1, k + 1):
        for j in range(k + 1):
            u[i - 1, j] = inner(q, table.entry(j + 1, p + i))
    return u


def solve_coeffs(u: np.ndarray, rtol: float = PIVOT_RTOL):
    """Denominator coefficients (c_0, ..., c_k) with c_k = 1.

    Solves sum_{j<k} u[i][j] c_j = -u[i][k] by row-pivoted elimination.
    Returns (coefficients, smallest accepted pivot magnitude); raises
    SingularSystemError when the system is numerically rank-deficient.
    """
    u = np.asarray(u, dtype=complex)
    k = u.shape[0]
    if u.shape != (k, k + 1):
        raise ValueError(f"system must be k x (k+1), got {u.shape}")
    if k == 0:
        return np.ones(1, dtype=complex), math.inf
    x, min_pivot = solve_pivoted(u[:, :k], -u[:, k], rtol=rtol)
    return np.append(x, 1.0 + 0.0j), min_pivot


def cofactor_coeffs(u: np.ndarray) -> np.ndarray:
    """First-row cofactors M_j = (-1)^j det(u with column j removed).

    Cramer cross-check for solve_coeffs: whenever M_k is nonzero,
    c_j = M_j / M_k.  Zero determinants are returned as data.
    """
    u = np.asarray(u, dtype=complex)
    k = u.shape[0]
    if u.shape != (k, k + 1):
        raise ValueError(f"system must be k x (k+1), got {u.shape}")
    out = np.zeros(k + 1, dtype=complex)
    for j in range(k + 1):
        minor = np.delete(u, j, axis=1)
        out[j] = (-1) ** j * det_pivoted(minor)
    return out


def eval_denominator(coeffs, nodes: NodeMultiset, z) -> complex:
    """V(z) = sum_j c_j psi_{1,j}(z), by nested multiplication."""
    c = np.asarray(coeffs, dtype=complex)
    k = c.size - 1
    acc = c[k]
    for j in range(k - 1, -1, -1):
        acc = acc * (z - nodes.node(j + 1)) + c[j]
    return complex(acc)


class RationalInterpolant(BaseEstimator):
    """Rational interpolant estimator for vector-valued complex data.

    Parameters
    ----------
    k : int, default 1
        Denominator degree: the number of poles the model can carry.
    q : array-like or None, default None
        Projection direction defining the coefficient constraints.
        None selects (1, ..., 1)/sqrt(N) at fit time.
    pivot_rtol : float, default 1e-13
        Relative pivot threshold below which the defining system is
        declared singular.

    Attributes set by fit
    ---------------------
    nodes_ : NodeMultiset of the p+k interpolation points.
    table_ : divided-difference table over all nodes.
    system_ : the k x (k+1) defining matrix.
    coeffs_ : denominator coefficients (c_0, ..., c_k), c_k = 1.
    min_pivot_ : smallest pivot accepted while solving; inf when k = 0.
    p_ : number of leading interpolation conditions (len(nodes) - k).
    dim_ : component count N of the sampled function.
    """

    def __init__(self, k: int = 1, q=None, pivot_rtol: float = PIVOT_RTOL):
        self.k = k
        self.q = q
        self.pivot_rtol = pivot_rtol

    def fit(self, nodes, values) -> "RationalInterpolant":
        """Fit from nodes and per-node sample rows.

        ``nodes`` is a length-L complex sequence (L = p + k); repeated
        nodes must be adjacent.  ``values`` is an (L, N) array whose row
        for the t-th repetition of a node holds the t-th derivative
        F^(t) at that point (order 0 first).
        """
        node_set = NodeMultiset(nodes)
        vals = np.asarray(values, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape[0] != len(node_set):
            raise DimensionMismatchError(
                f"{vals.shape[0]} sample rows for {len(node_set)} nodes"
            )
        samples = SampleSet(vals.shape[1])
        row = 0
        for point, mult in node_set.groups:
            for _ in range(mult):
                samples.add(point, vals[row])
                row += 1
        return self._fit_from_samples(node_set, samples)

    def _fit_from_samples(self, nodes: NodeMultiset,
                          samples: SampleSet) -> "RationalInterpolant":
        k = int(self.k)
        self.dim_ = samples.dim
        self.q_ = (
            default_direction(samples.dim)
            if self.q is None
            else as_vector(self.q, dim=samples.dim, name="q")
        )
        self.nodes_ = nodes
        self.p_ = len(nodes) - k
        self.table_ = build_table(nodes, samples)
        self.system_ = assemble_system(self.table_, k, self.q_)
        self.coeffs_, self.min_pivot_ = solve_coeffs(
            self.system_, rtol=self.pivot_rtol
        )
        self.samples_ = samples
        return self

    def _check_fitted(self):
        if not hasattr(self, "coeffs_"):
            raise RuntimeError("estimator is not fitted; call fit first")

    def denominator(self, z):
        """V(z); follows the shape of ``z``."""
        self._check_fitted()
        z_arr = np.asarray(z, dtype=complex)
        flat = np.array(
            [eval_denominator(self.coeffs_, self.nodes_, w)
             for w in z_arr.ravel()]
        )
        return flat.reshape(z_arr.shape) if z_arr.ndim else complex(flat[0])

    def denominator_coefficients(self) -> np.ndarray:
        """Monomial coefficients of V, ascending; leading entry is 1."""
        self._check_fitted()
        return newton_to_monomial(self.coeffs_, self.nodes_)

    def _eval_numer(self, z) -> np.ndarray:
        c = self.coeffs_
        k = c.size - 1
        acc = np.zeros(self.dim_, dtype=complex)
        psi_val = 1.0 + 0.0j
        for j in range(k + 1):
            if j + 1 <= self.p_:
                acc = acc + c[j] * psi_val * newton_eval(
                    self.table_, j + 1, self.p_, z
                )
            # j+1 > p: the Newton sum over nodes j+1..p is empty
            if j < k:
                psi_val *= z - self.nodes_.node(j + 1)
        return acc

    def numerator(self, z):
        """U(z) stacked over the points of ``z``; (..., N) shaped."""
        self._check_fitted()
        z_arr = np.asarray(z, dtype=complex)
        flat = np.array([self._eval_numer(w) for w in z_arr.ravel()])
        if z_arr.ndim == 0:
            return flat[0]
        return flat.reshape(z_arr.shape + (self.dim_,))

    def _eval_point(self, z) -> np.ndarray:
        v = eval_denominator(self.coeffs_, self.nodes_, z)
        k = self.coeffs_.size - 1
        if abs(v) <= EVAL_POLE_RTOL * (1.0 + abs(z)) ** k:
            raise EvalAtPoleError(
                f"denominator magnitude {abs(v):.3e} at z={z} is below "
                f"the pole threshold"
            )
        return self._eval_numer(z) / v

    def predict(self, z):
        """R(z) = U(z)/V(z); (..., N) shaped over the points of ``z``.

        Raises EvalAtPoleError where |V(z)| falls under
        1e-13 (1+|z|)^k, the natural magnitude scale of a monic
        degree-k polynomial.
        """
        self._check_fitted()
        z_arr = np.asarray(z, dtype=complex)
        flat = np.array([self._eval_point(w) for w in z_arr.ravel()])
        if z_arr.ndim == 0:
            return flat[0]
        return flat.reshape(z_arr.shape + (self.dim_,))

    def poles(self) -> np.ndarray:
        """The k roots of V, the model's pole estimates."""
        self._check_fitted()
        from .analysis import denominator_roots

        return denominator_roots(self)

    def projection_residuals(self) -> np.ndarray:
        """(q, F - R) at the k trailing nodes; zero up to roundoff."""
        self._check_fitted()
        k = self.coeffs_.size - 1
        out = np.zeros(k, dtype=complex)
        for i in range(1, k + 1):
            node = self.nodes_.node(self.p_ + i)
            f_val = self.samples_.derivative(node, 0)
            out[i - 1] = inner(self.q_, f_val - self._eval_point(node))
        return out


def build_interpolant(nodes, samples: SampleSet, k: int,
                      q=None, pivot_rtol: float = PIVOT_RTOL
                      ) -> RationalInterpolant:
    """Fit a RationalInterpolant directly from a SampleSet."""
    node_set = nodes if isinstance(nodes, NodeMultiset) else NodeMultiset(nodes)
    est = RationalInterpolant(k=k, q=q, pivot_rtol=pivot_rtol)
    return est._fit_from_samples(node_set, samples)


def interpolate(nodes, func, k: int, q=None) -> RationalInterpolant:
    """Fit against a callable ``func(point, order) -> (N,) array``."""
    node_set = nodes if isinstance(nodes, NodeMultiset) else NodeMultiset(nodes)
    samples = SampleSet.from_function(func, node_set)
    return build_interpolant(node_set, samples, k, q=q)
