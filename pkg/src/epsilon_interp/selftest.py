"""Randomized identity suite: oracle formulas against the pipeline.

Every identity here has an algebraic proof, so failures indicate real
defects (or exhausted double precision), never bad luck.  All draws
come from one seeded generator in a fixed order, which makes the
summary reproducible byte for byte at a given seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import NodeMultiset
from .divided import SampleSet, build_table
from .errors import EvalAtPoleError, SingularSystemError
from .functions import EntirePart, MeromorphicTestFunction, random_rational
from .interpolant import assemble_system, build_interpolant
from .oracles import (
    coupling_minor,
    coupling_minor_factored,
    error_closed_form,
    error_determinant_form,
    rational_dd,
    refined_constants,
    residue_coupling,
    system_closed_form,
)

TINY = 1e-300


@dataclass
class IdentityResult:
    name: str
    cases: int
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance


@dataclass
class SelfTestReport:
    seed: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> str:
        lines = [f"identity suite, seed {self.seed}"]
        for r in self.results:
            status = "pass" if r.passed else "FAIL"
            lines.append(
                f"  {status}  {r.name}: worst relative error "
                f"{r.worst:.3e} over {r.cases} cases (tolerance {r.tolerance:.0e})"
            )
        lines.append("result: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)


def _rel(a, b) -> float:
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), TINY)
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale


def _random_nodes(rng, count: int, confluent_ok: bool = False) -> NodeMultiset:
    # separation floor keeps the difference tableau from amplifying
    # roundoff past what the 1e-8-level identity checks can absorb
    pts: list[complex] = []
    while len(pts) < count:
        w = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        if abs(w) > 1:
            continue
        if all(abs(w - u) > 0.05 for u in pts):
            if confluent_ok and pts and rng.random() < 0.25:
                pts.insert(-1, pts[-1])  # double the previous node
                if len(pts) > count:
                    pts = pts[:count]
                continue
            pts.append(w)
    return NodeMultiset(pts[:count])


def _random_direction(rng, dim: int) -> np.ndarray:
    while True:
        q = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        if np.linalg.norm(q) > 0.3:
            return q


def _far_point(rng, F: MeromorphicTestFunction, nodes) -> complex:
    while True:
        z = rng.uniform(-2.5, 2.5) + 1j * rng.uniform(-2.5, 2.5)
        if all(abs(z - a) > 0.3 for a in F.poles) and all(
            abs(z - x) > 1e-2 for x in nodes
        ):
            return z


def _circle_nodes(rng, count: int) -> NodeMultiset:
    """Randomly rotated roots of unity: the well-conditioned family."""
    theta = rng.uniform(0, 2 * math.pi)
    step = 2 * math.pi / count
    return NodeMultiset(
        [cmath.exp(1j * (theta + step * i)) for i in range(count)]
    )


def _near_point(rng, F: MeromorphicTestFunction, nodes) -> complex:
    # stay close to the node circle: far outside it the Newton-basis
    # terms of U(z) dwarf their sum and the evaluation turns noisy
    while True:
        z = rng.uniform(-1.2, 1.2) + 1j * rng.uniform(-1.2, 1.2)
        if abs(z) > 1.2:
            continue
        if all(abs(z - a) > 0.3 for a in F.poles) and all(
            abs(z - x) > 0.15 for x in nodes
        ):
            return z


def _check_minor_factorization(rng, cases: int) -> IdentityResult:
    worst = 0.0
    for _ in range(cases):
        dim = int(rng.integers(1, 4))
        k = int(rng.integers(1, 5))
        mu = int(rng.integers(k, min(k + 3, 7)))
        p = int(rng.integers(max(k, 2), 11))
        F = random_rational(rng, dim, mu)
        nodes = _random_nodes(rng, p + k)
        q = _random_direction(rng, dim)
        cols = sorted(rng.choice(mu, size=k, replace=False).tolist())
        alpha = residue_coupling(F, nodes, p, k, q)
        t_det = coupling_minor(alpha, cols)
        t_fact = coupling_minor_factored(F, q, cols)
        worst = max(worst, _rel(t_det, t_fact))
    return IdentityResult("pole-minor factorization", cases, worst, 1e-10)


def _check_minor_p_independence(rng, cases: int) -> IdentityResult:
    worst = 0.0
    for _ in range(cases):
        dim = int(rng.integers(1, 4))
        k = int(rng.integers(1, 5))
        mu = int(rng.integers(k, min(k + 3, 7)))
        p1 = int(rng.integers(max(k, 2), 9))
        p2 = p1 + int(rng.integers(1, 5))
        F = random_rational(rng, dim, mu)
        q = _random_direction(rng, dim)
        cols = sorted(rng.choice(mu, size=k, replace=False).tolist())
        t1 = coupling_minor(
            residue_coupling(F, _random_nodes(rng, p1 + k), p1, k, q), cols
        )
        t2 = coupling_minor(
            residue_coupling(F, _random_nodes(rng, p2 + k), p2, k, q), cols
        )
        worst = max(worst, _rel(t1, t2))
    return IdentityResult("pole-minor p-independence", cases, worst, 1e-10)


def _check_dd_closed_form(rng, cases: int) -> IdentityResult:
    worst = 0.0
    for _ in range(cases):
        dim = int(rng.integers(1, 4))
        mu = int(rng.integers(1, 5))
        deg = int(rng.integers(-1, 3))
        F = random_rational(rng, dim, mu, poly_degree=deg)
        L = int(rng.integers(deg + 2, deg + 8))
        nodes = _random_nodes(rng, L, confluent_ok=True)
        table = build_table(nodes, SampleSet.from_function(F, nodes))
        # widest available ranges exceed the polynomial degree
        m = int(rng.integers(1, max(L - deg - 1, 2)))
        n_lo = m + deg + 1
        n = int(rng.integers(n_lo, L + 1)) if n_lo <= L else L
        worst = max(
            worst, _rel(table.entry(m, n), rational_dd(F, nodes, m, n))
        )
    return IdentityResult("divided-difference closed form", cases, worst, 1e-9)


def _check_system_closed_form(rng, cases: int) -> IdentityResult:
    worst = 0.0
    for case in range(cases):
        dim = int(rng.integers(1, 4))
        k = int(rng.integers(1, 4))
        mu = int(rng.integers(1, 5))
        deg = int(rng.integers(-1, 2))
        with_entire = case % 3 == 0
        F = random_rational(rng, dim, mu, poly_degree=deg)
        if with_entire:
            amp = tuple(rng.normal(size=dim) + 1j * rng.normal(size=dim))
            kind = "exp" if rng.random() < 0.5 else "sin"
            F = MeromorphicTestFunction(
                poles=F.poles, residues=F.residues, poly=F.poly,
                entire=EntirePart(kind, amp),
            )
        p = int(rng.integers(k + deg + 1 + 1, k + deg + 10))
        nodes = _circle_nodes(rng, p + k)
        q = _random_direction(rng, dim)
        table = build_table(nodes, SampleSet.from_function(F, nodes))
        u_pipeline = assemble_system(table, k, q)
        u_oracle = system_closed_form(F, nodes, p, k, q)
        worst = max(worst, _rel(u_pipeline, u_oracle))
    return IdentityResult("defining-system closed form", cases, worst, 1e-9)


def _check_triple_error(rng, cases: int) -> IdentityResult:
    # F(z) - R(z) subtracts two near-equal O(|F|) values, so it only
    # resolves the identity when the true error sits well above the
    # roundoff of the fitted R.  Draws are conditioned accordingly:
    # rotated roots-of-unity nodes (a stable difference tableau),
    # evaluation near the node circle, error at least 1e-5 of the
    # function scale, defining-system pivot at least 1e-4.  Redraws
    # outside that regime would measure roundoff, not the formulas;
    # the kept magnitudes still span several orders.
    worst = 0.0
    done = 0
    attempts = 0
    while done < cases and attempts < 60 * cases:
        attempts += 1
        dim = int(rng.integers(1, 4))
        mu = int(rng.integers(2, 5))
        k = int(rng.integers(1, mu))
        p = int(rng.integers(k + 2, 21))
        F = random_rational(rng, dim, mu)
        nodes = _circle_nodes(rng, p + k)
        q = _random_direction(rng, dim)
        z = _near_point(rng, F, nodes)
        try:
            interp = build_interpolant(
                nodes, SampleSet.from_function(F, nodes), k, q=q
            )
            if interp.min_pivot_ < 1e-4:
                continue
            direct = F.value(z) - interp.predict(z)
            closed = error_closed_form(F, nodes, p, k, q, z)
            determinant = error_determinant_form(F, nodes, p, k, q, z)
        except (SingularSystemError, EvalAtPoleError):
            continue  # degenerate draw; the study path reports these
        floor = 1e-5 * max(1.0, float(np.linalg.norm(F.value(z))))
        if float(np.linalg.norm(closed)) < floor:
            continue
        scale = max(
            float(np.linalg.norm(direct)),
            float(np.linalg.norm(closed)),
            TINY,
        )
        worst = max(
            worst,
            float(np.linalg.norm(direct - closed)) / scale,
            float(np.linalg.norm(direct - determinant)) / scale,
            float(np.linalg.norm(closed - determinant)) / scale,
        )
        done += 1
    return IdentityResult("triple error equivalence", done, worst, 1e-8)


def _check_q_scaling(rng, cases: int) -> IdentityResult:
    worst = 0.0
    done = 0
    while done < cases:
        dim = int(rng.integers(2, 4))
        mu = int(rng.integers(2, 4))
        k = int(rng.integers(1, mu))
        p = int(rng.integers(k + 2, 12))
        F = random_rational(rng, dim, mu)
        nodes = _random_nodes(rng, p + k)
        q = _random_direction(rng, dim)
        t = (0.5 + rng.random()) * np.exp(2j * math.pi * rng.random())
        z = _far_point(rng, F, nodes)
        samples = SampleSet.from_function(F, nodes)
        try:
            a = build_interpolant(nodes, samples, k, q=q)
            b = build_interpolant(nodes, samples, k, q=t * q)
            val = _rel(a.predict(z), b.predict(z))
            coeff = _rel(a.coeffs_, b.coeffs_)
            ca, _ = refined_constants(F, nodes, p, k, q, 1, z)
            cb, _ = refined_constants(F, nodes, p, k, t * q, 1, z)
        except (SingularSystemError, EvalAtPoleError, ValueError):
            continue
        worst = max(worst, val, coeff, _rel(ca, cb))
        done += 1
    return IdentityResult("q-scale invariance", cases, worst, 1e-10)


def _check_projection(rng, cases: int) -> IdentityResult:
    worst = 0.0
    done = 0
    while done < cases:
        dim = int(rng.integers(1, 4))
        mu = int(rng.integers(1, 5))
        k = int(rng.integers(1, min(mu + 2, 4)))
        p = int(rng.integers(max(k, 2), 13))
        F = random_rational(rng, dim, mu)
        nodes = _random_nodes(rng, p + k)
        samples = SampleSet.from_function(F, nodes)
        try:
            interp = build_interpolant(nodes, samples, k)
            res = interp.projection_residuals()
        except (SingularSystemError, EvalAtPoleError):
            continue
        scale = max(
            (float(np.max(np.abs(samples.derivative(a, 0))))
             for a, _ in nodes.groups),
            default=1.0,
        )
        worst = max(worst, float(np.max(np.abs(res))) / max(scale, TINY))
        done += 1
    return IdentityResult("projection residuals", cases, worst, 1e-10)


def run_identity_suite(seed: int) -> SelfTestReport:
    """Run every identity check with a fresh generator at the seed."""
    rng = np.random.default_rng(seed)
    results = [
        _check_minor_factorization(rng, 100),
        _check_minor_p_independence(rng, 40),
        _check_dd_closed_form(rng, 40),
        _check_system_closed_form(rng, 30),
        _check_triple_error(rng, 50),
        _check_q_scaling(rng, 20),
        _check_projection(rng, 25),
    ]
    return SelfTestReport(seed=int(seed), results=results)
