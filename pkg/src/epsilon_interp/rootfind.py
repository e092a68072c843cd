"""Simultaneous polynomial root finding (Aberth iteration).

Self-contained alternative to a companion-matrix eigensolver; the
polynomials here are monic of small degree, where the simultaneous
iteration converges in a handful of sweeps.
"""

from __future__ import annotations

import cmath
import warnings

import numpy as np

from .errors import RootFindingStalled

ROOT_TOL = 1e-12
MAX_ITERATIONS = 200


def _horner_pair(coeffs: np.ndarray, z: complex):
    """Value and derivative of the polynomial at z (ascending coeffs)."""
    val = 0.0 + 0.0j
    der = 0.0 + 0.0j
    for c in coeffs[::-1]:
        der = der * z + val
        val = val * z + c
    return val, der


def aberth_roots(coeffs) -> np.ndarray:
    """All roots of a polynomial given by ascending complex coefficients.

    Simultaneous (Aberth) updates from initial guesses spread on a
    circle of radius 1 + max|coefficient|; stops when every correction
    is below ROOT_TOL relative to the iterate's magnitude.  Emits a
    :class:`RootFindingStalled` warning and returns the best iterates
    if the cap of MAX_ITERATIONS sweeps is reached.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    while c.size > 1 and c[-1] == 0:
        c = c[:-1]
    degree = c.size - 1
    if degree <= 0:
        return np.zeros(0, dtype=complex)
    c = c / c[-1]
    if degree == 1:
        return np.array([-c[0]], dtype=complex)

    radius = 1.0 + float(np.max(np.abs(c)))
    # phase offset keeps guesses off the real axis and off symmetry lines
    roots = np.array(
        [
            radius * cmath.exp(2j * cmath.pi * j / degree + 0.4j)
            for j in range(degree)
        ],
        dtype=complex,
    )
    for _ in range(MAX_ITERATIONS):
        worst = 0.0
        for j in range(degree):
            val, der = _horner_pair(c, roots[j])
            if val == 0:
                continue
            if der == 0:
                roots[j] += 1e-8 * (1 + abs(roots[j]))
                worst = np.inf
                continue
            newton = val / der
            repulsion = 0.0 + 0.0j
            for l in range(degree):
                if l != j:
                    gap = roots[j] - roots[l]
                    if gap == 0:
                        gap = 1e-14 * (1 + abs(roots[j]))
                    repulsion += 1.0 / gap
            denom = 1.0 - newton * repulsion
            if denom == 0:
                step = newton
            else:
                step = newton / denom
            roots[j] -= step
            worst = max(worst, abs(step) / (1.0 + abs(roots[j])))
        if worst <= ROOT_TOL:
            break
    else:
        warnings.warn(
            f"root iteration did not settle in {MAX_ITERATIONS} sweeps "
            f"(last correction {worst:.2e})",
            RootFindingStalled,
            stacklevel=2,
        )
    return roots
