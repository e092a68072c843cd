"""Closed-form ground truth for functions with simple poles.

For F(z) = sum_s v_s/(z - z_s) + u(z) (+ an entire part), every quantity
the pipeline computes numerically has an explicit formula: divided
differences, the defining-system entries, the denominator determinant,
and the interpolation error itself.  These formulas share nothing with
the tableau/elimination code path, so agreement between the two is a
meaningful end-to-end check.

Notation used throughout: nodes xi_1..xi_{p+k}; psi_{m,n}(z) the nodal
product over positions m..n; PSI_p(z) = psi_{1,p+k}(z) the full product.
All divisions by PSI_p values route through scaled (log-magnitude)
arithmetic so identities survive large p.
"""

from __future__ import annotations

import cmath
import math
from itertools import combinations

import numpy as np

from .core import (
    NodeMultiset,
    ScaledProduct,
    inner,
    psi,
    psi_scaled,
    vandermonde,
)
from .divided import SampleSet, build_table
from .errors import EvalAtPoleError, SingularSystemError
from .functions import MeromorphicTestFunction
from .linalg import det_pivoted


def pole_kernel_dd(nodes: NodeMultiset, m: int, n: int, a) -> complex:
    """Divided difference of 1/(z-a) over nodes m..n: equals -1/psi_{m,n}(a).

    Holds for confluent nodes as well; ``a`` must avoid the nodes.
    """
    value = psi(nodes, m, n, a)
    if value == 0:
        raise ZeroDivisionError(f"kernel point {a} coincides with a node")
    return -1.0 / value


def _require_rational_depth(F: MeromorphicTestFunction, order: int) -> None:
    # the polynomial part is annihilated only beyond its degree
    if order <= F.poly_degree:
        raise ValueError(
            f"difference order {order} does not annihilate the degree-"
            f"{F.poly_degree} polynomial part"
        )


def rational_dd(F: MeromorphicTestFunction, nodes: NodeMultiset,
                m: int, n: int) -> np.ndarray:
    """D_{m,n} = -sum_s v_s / psi_{m,n}(z_s) for the pole-sum plus polynomial.

    Requires n - m to exceed the polynomial degree (so u drops out) and
    no entire part.
    """
    if F.entire is not None:
        raise ValueError("closed-form differences need a pole-only function")
    _require_rational_depth(F, n - m)
    out = np.zeros(F.dim, dtype=complex)
    for a, v in zip(F.poles, F.residues):
        out -= np.asarray(v, dtype=complex) / psi(nodes, m, n, a)
    return out


def newton_remainder(F: MeromorphicTestFunction, nodes: NodeMultiset,
                     m: int, n: int, z) -> np.ndarray:
    """F(z) - G_{m,n}(z) = psi_{m,n}(z) sum_s v_s/((z-z_s) psi_{m,n}(z_s))."""
    if F.entire is not None:
        raise ValueError("closed-form remainder needs a pole-only function")
    _require_rational_depth(F, n - m)
    F._check_not_pole(z)
    factor = psi(nodes, m, n, z)
    out = np.zeros(F.dim, dtype=complex)
    for a, v in zip(F.poles, F.residues):
        out += np.asarray(v, dtype=complex) / ((z - a) * psi(nodes, m, n, a))
    return factor * out


def residue_coupling(F: MeromorphicTestFunction, nodes: NodeMultiset,
                     p: int, k: int, q) -> np.ndarray:
    """alpha[i][s] = (q, v_s) psi_{p+i+1, p+k}(z_s), shape (k, mu).

    Couples each constraint row to each pole through the trailing nodes;
    the last row is plain (q, v_s).
    """
    mu = len(F.poles)
    alpha = np.zeros((k, mu), dtype=complex)
    for s, (a, v) in enumerate(zip(F.poles, F.residues)):
        qv = inner(q, v)
        for i in range(1, k + 1):
            alpha[i - 1, s] = qv * psi(nodes, p + i + 1, p + k, a)
    return alpha


def _theta_table(F: MeromorphicTestFunction, nodes: NodeMultiset):
    theta = F.theta_only()
    if theta is None:
        return None
    samples = SampleSet.from_function(
        lambda z, r: theta(z, r), nodes, dim=F.dim
    )
    return build_table(nodes, samples)


def _psi_ratio(nodes: NodeMultiset, j: int, a, L: int) -> complex:
    # psi_{1,j}(a) / psi_{1,L}(a) without forming the big product
    num = psi_scaled(nodes, 1, j, a)
    den = psi_scaled(nodes, 1, L, a)
    if den.is_zero:
        raise ZeroDivisionError(f"pole {a} coincides with a node")
    return (num / den).value()


def system_closed_form(F: MeromorphicTestFunction, nodes: NodeMultiset,
                       p: int, k: int, q) -> np.ndarray:
    """The defining matrix from the pole data instead of the tableau.

    u[i][j] = -sum_s alpha[i][s] psi_{1,j}(z_s)/PSI_p(z_s), plus the
    projected divided differences of the entire part when one exists.
    Needs p - k > deg(polynomial part).
    """
    if p - k <= F.poly_degree:
        raise ValueError(
            f"closed form needs p - k > polynomial degree "
            f"{F.poly_degree}, got p={p}, k={k}"
        )
    L = p + k
    if len(nodes) != L:
        raise ValueError(f"expected {L} nodes, got {len(nodes)}")
    alpha = residue_coupling(F, nodes, p, k, q)
    u = np.zeros((k, k + 1), dtype=complex)
    for j in range(k + 1):
        for s, a in enumerate(F.poles):
            ratio = _psi_ratio(nodes, j, a, L)
            for i in range(k):
                u[i, j] -= alpha[i, s] * ratio
    theta_tab = _theta_table(F, nodes)
    if theta_tab is not None:
        for i in range(1, k + 1):
            for j in range(k + 1):
                u[i - 1, j] += inner(q, theta_tab.entry(j + 1, p + i))
    return u


def coupling_minor(alpha: np.ndarray, columns) -> complex:
    """T for a pole subset: the determinant of the selected alpha columns.

    ``columns`` are 0-based pole indices; their count must equal the row
    count k.
    """
    cols = list(columns)
    k = alpha.shape[0]
    if len(cols) != k:
        raise ValueError(f"need exactly {k} columns, got {len(cols)}")
    return det_pivoted(alpha[:, cols])


def coupling_minor_factored(F: MeromorphicTestFunction, q, columns) -> complex:
    """T in factored form: sign * Vandermonde(poles) * prod (q, v_s).

    The sign is (-1)^(k(k-1)/2); equality with the determinant route is
    an identity of the theory, exercised by the self-tests.  The value
    carries no p dependence.
    """
    cols = list(columns)
    k = len(cols)
    sign = (-1) ** (k * (k - 1) // 2)
    points = [F.poles[s] for s in cols]
    prod = 1.0 + 0.0j
    for s in cols:
        prod *= inner(q, F.residues[s])
    return sign * vandermonde(points) * prod


def _scaled_terms_sum(terms):
    """Sum (ScaledProduct prefactor, payload) pairs with one log shift.

    Returns (log_shift, summed mantissa payload); payloads are complex
    scalars or vectors.  The true sum is exp(log_shift) * mantissa.
    """
    live = [(sp, w) for sp, w in terms if not sp.is_zero]
    if not live:
        return 0.0, 0.0 + 0.0j
    shift = max(sp.log_magnitude for sp, _ in live)
    total = None
    for sp, w in live:
        piece = cmath.exp(sp.log_magnitude - shift) * sp.phase * w
        total = piece if total is None else total + piece
    return shift, total


def _psi_big_scaled(nodes: NodeMultiset, a, L: int) -> ScaledProduct:
    sp = psi_scaled(nodes, 1, L, a)
    if sp.is_zero:
        raise ZeroDivisionError(f"pole {a} coincides with a node")
    return sp


def _denominator_terms(F, nodes, p, k, q, z, alpha):
    L = p + k
    big = {s: _psi_big_scaled(nodes, a, L) for s, a in enumerate(F.poles)}
    mu = len(F.poles)
    terms = []
    for subset in combinations(range(mu), k):
        T = coupling_minor(alpha, subset)
        points = [z] + [F.poles[s] for s in subset]
        weight = T * vandermonde(points)
        sp = ScaledProduct.from_value(weight)
        for s in subset:
            sp = sp / big[s]
        terms.append((sp, 1.0 + 0.0j))
    return terms


def denominator_expansion(F: MeromorphicTestFunction, nodes: NodeMultiset,
                          p: int, k: int, q, z) -> complex:
    """Q(z) as a sum over k-subsets of poles.

    Q(z) = (-1)^k sum T_{subset} V(z, poles of subset) / prod PSI_p;
    exactly equal to the (k+1) x (k+1) determinant with first row
    psi_{1,j}(z) over the defining matrix.  Pure rational F only.
    """
    if F.entire is not None:
        raise ValueError("expansion requires a pole-only function")
    if p - k <= F.poly_degree:
        raise ValueError("expansion needs p - k > polynomial degree")
    if k == 0:
        return 1.0 + 0.0j
    alpha = residue_coupling(F, nodes, p, k, q)
    shift, total = _scaled_terms_sum(
        _denominator_terms(F, nodes, p, k, q, z, alpha)
    )
    return (-1) ** k * cmath.exp(shift) * total


def _e_hat(F: MeromorphicTestFunction, nodes: NodeMultiset,
           p: int, k: int, s: int, z) -> np.ndarray:
    a = F.poles[s]
    v = np.asarray(F.residues[s], dtype=complex)
    return v * (psi(nodes, p + 1, p + k, a) / (z - a))


def coupling_minor_vector(F: MeromorphicTestFunction, nodes: NodeMultiset,
                          alpha: np.ndarray, p: int, k: int, subset,
                          z) -> np.ndarray:
    """The vector-valued minor with first row e_hat, expanded along it.

    T_hat = sum_j (-1)^j T_{subset minus j-th} e_hat_{s_j}(z) over a
    (k+1)-element pole subset.
    """
    subset = list(subset)
    if len(subset) != k + 1:
        raise ValueError(f"need k+1 = {k + 1} poles, got {len(subset)}")
    out = np.zeros(F.dim, dtype=complex)
    for j, s in enumerate(subset):
        rest = subset[:j] + subset[j + 1:]
        Ej = (-1) ** j * coupling_minor(alpha, rest)
        out += Ej * _e_hat(F, nodes, p, k, s, z)
    return out


def error_closed_form(F: MeromorphicTestFunction, nodes: NodeMultiset,
                      p: int, k: int, q, z) -> np.ndarray:
    """F(z) - R(z) without ever building R.

    psi_{1,p}(z) times a ratio of two pole-subset sums: (k+1)-subsets
    with vector minors over k-subsets with scalar minors.  With k equal
    to the pole count the numerator sum is empty and the error is
    exactly zero (the reproducing property).  Pure rational F only.
    """
    if F.entire is not None:
        raise ValueError("closed form requires a pole-only function")
    if p - k <= F.poly_degree:
        raise ValueError("closed form needs p - k > polynomial degree")
    F._check_not_pole(z)
    mu = len(F.poles)
    if k > mu:
        raise ValueError(f"k={k} exceeds the pole count {mu}")
    if k == mu:
        return np.zeros(F.dim, dtype=complex)
    L = p + k
    alpha = residue_coupling(F, nodes, p, k, q)
    big = {s: _psi_big_scaled(nodes, a, L) for s, a in enumerate(F.poles)}

    num_terms = []
    for subset in combinations(range(mu), k + 1):
        that = coupling_minor_vector(F, nodes, alpha, p, k, subset, z)
        points = [F.poles[s] for s in subset]
        sp = ScaledProduct.from_value(vandermonde(points))
        for s in subset:
            sp = sp / big[s]
        num_terms.append((sp, that))
    num_shift, num_total = _scaled_terms_sum(num_terms)

    den_shift, den_total = _scaled_terms_sum(
        _denominator_terms(F, nodes, p, k, q, z, alpha)
    )
    if den_total == 0:
        raise EvalAtPoleError(f"denominator expansion vanishes at z={z}")

    front = psi_scaled(nodes, 1, p, z)
    if front.is_zero:
        return np.zeros(F.dim, dtype=complex)
    log_total = front.log_magnitude + num_shift - den_shift
    return (
        cmath.exp(log_total) * front.phase * np.asarray(num_total) / den_total
    )


def error_determinant_form(F: MeromorphicTestFunction, nodes: NodeMultiset,
                           p: int, k: int, q, z) -> np.ndarray:
    """F(z) - R(z) as Delta(z)/Q(z), both built from pole data.

    Delta expands along its first row with the same cofactors that turn
    the defining matrix into Q: Delta = sum_j M_j Delta_j, with
    Delta_j(z) = psi_{1,p}(z) [sum_s e_hat_s(z) psi_{1,j}(z_s)/PSI_p(z_s)
    + theta correction].  Entire parts are supported through tableau
    corrections to both the matrix and Delta_j.
    """
    from .interpolant import cofactor_coeffs

    if p - k <= F.poly_degree:
        raise ValueError("determinant form needs p - k > polynomial degree")
    F._check_not_pole(z)
    L = p + k
    u = system_closed_form(F, nodes, p, k, q)
    M = cofactor_coeffs(u)
    Q = 0.0 + 0.0j
    for j in range(k + 1):
        Q += M[j] * psi(nodes, 1, j, z)
    scale = float(np.max(np.abs(M))) if k >= 0 else 1.0
    if abs(Q) <= 1e-13 * scale * (1 + abs(z)) ** k:
        raise EvalAtPoleError(f"denominator determinant vanishes at z={z}")

    theta = F.theta_only()
    theta_corr = None
    if theta is not None:
        # one tableau over [xi_1..xi_p, z] yields every Delta_j correction
        head = list(nodes.points[:p])
        ext = NodeMultiset(head + [complex(z)])
        tab = build_table(
            ext, SampleSet.from_function(lambda w, r: theta(w, r), ext)
        )
        theta_corr = [tab.entry(j + 1, p + 1) for j in range(k + 1)]

    front = psi(nodes, 1, p, z)
    delta = np.zeros(F.dim, dtype=complex)
    for j in range(k + 1):
        inner_sum = np.zeros(F.dim, dtype=complex)
        for s, a in enumerate(F.poles):
            inner_sum += _e_hat(F, nodes, p, k, s, z) * _psi_ratio(
                nodes, j, a, L
            )
        if theta_corr is not None:
            inner_sum = inner_sum + theta_corr[j]
        delta += M[j] * front * inner_sum
    return delta / Q


def refined_constants(F: MeromorphicTestFunction, nodes: NodeMultiset,
                      p: int, k: int, q, m: int, z):
    """The sharp asymptotic prefactors (C_m, B_p(z)).

    C_m scales the pole-estimate error: z_m^(p) - z_m ~ C_m
    PSI_p(z_m)/PSI_p(z_{k+1}); B_p scales the interpolation error:
    F(z) - R(z) ~ B_p(z) psi_{1,p}(z)/PSI_p(z_{k+1}).  Both need the
    leading k poles strictly closer than pole k+1 and T_{1..k} nonzero.
    """
    mu = len(F.poles)
    if not 1 <= m <= k:
        raise ValueError(f"pole index m={m} outside 1..{k}")
    if mu < k + 1:
        raise ValueError(f"need at least k+1 = {k + 1} poles, got {mu}")
    alpha = residue_coupling(F, nodes, p, k, q)
    T_lead = coupling_minor(alpha, range(k))
    scale = float(np.max(np.abs(alpha))) ** k if alpha.size else 1.0
    if abs(T_lead) <= 1e-13 * max(scale, 1e-300):
        raise SingularSystemError(
            "leading pole minor vanishes; refined constants undefined"
        )
    poles = [complex(a) for a in F.poles]

    drop_m = [i for i in range(k + 1) if i != m - 1]
    T_drop = coupling_minor(alpha, drop_m)
    c_m = (-1) ** (k - m) * (T_drop / T_lead) * (poles[k] - poles[m - 1])
    for i in range(k):
        if i != m - 1:
            c_m *= (poles[k] - poles[i]) / (poles[m - 1] - poles[i])

    that = coupling_minor_vector(F, nodes, alpha, p, k, range(k + 1), z)
    b_p = (-1) ** k * that / T_lead
    for i in range(k):
        b_p = b_p * ((poles[k] - poles[i]) / (z - poles[i]))
    return c_m, b_p
