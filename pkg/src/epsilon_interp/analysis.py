"""Convergence measurement: pole estimates, rate fits, bound comparison.

A study sweeps p with k fixed, builds the interpolant at each step,
records pole-estimate errors and interpolation errors at probe points,
fits geometric ratios to the tails, and compares them against the
potential-theoretic bounds.  The refined check goes one step further
and compares against the sharp asymptotic prefactors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import NodeMultiset, newton_to_monomial, psi_scaled
from .divided import SampleSet
from .errors import SingularSystemError, StudyInconclusiveError
from .functions import MeromorphicTestFunction
from .interpolant import RationalInterpolant, build_interpolant
from .oracles import refined_constants
from .potential import NodeFamily, bound_error_rate, bound_pole_rate, phi
from .rootfind import aberth_roots

RATE_SLACK = 1.15
ABSOLUTE_TOL = 1e-9


def denominator_roots(interp: RationalInterpolant) -> np.ndarray:
    """The k pole estimates: roots of the denominator polynomial.

    Expands V from its Newton-product form to monomial coefficients
    (exactly monic, c_k = 1) and runs the simultaneous root iteration.
    """
    coeffs = newton_to_monomial(interp.coeffs_, interp.nodes_)
    return aberth_roots(coeffs)


def match_poles(roots, reference):
    """Greedy one-to-one pairing of estimates with reference poles.

    All pairwise distances are sorted globally; each root and each
    reference is consumed at most once.  Returns (root_index,
    reference_index, distance) triples ordered by root index.
    """
    roots = [complex(r) for r in roots]
    reference = [complex(a) for a in reference]
    if len(roots) > len(reference):
        raise ValueError(
            f"{len(roots)} estimates cannot match {len(reference)} references"
        )
    pairs = sorted(
        (abs(r - a), i, j)
        for i, r in enumerate(roots)
        for j, a in enumerate(reference)
    )
    used_roots: set[int] = set()
    used_refs: set[int] = set()
    matches = []
    for d, i, j in pairs:
        if i in used_roots or j in used_refs:
            continue
        used_roots.add(i)
        used_refs.add(j)
        matches.append((i, j, d))
        if len(used_roots) == len(roots):
            break
    return sorted(matches)


def fit_rate(p_values, magnitudes) -> float:
    """Geometric ratio fitted to the tail of a decay sequence.

    Least-squares slope of log(magnitude) against p over the last half
    of the sweep, exponentiated.  Magnitudes that underflow to zero
    (or go non-finite) truncate the sequence at that point.
    """
    p_arr = [float(p) for p in p_values]
    mags = [float(m) for m in magnitudes]
    if len(p_arr) != len(mags):
        raise ValueError("p values and magnitudes must align")
    usable = 0
    for m in mags:
        if not (math.isfinite(m) and m > 0):
            break
        usable += 1
    if usable < 4:
        raise ValueError(
            f"need at least 4 positive magnitudes, got {usable}"
        )
    p_arr, mags = p_arr[:usable], mags[:usable]
    half = usable // 2
    ps = np.array(p_arr[half:])
    ys = np.log(np.array(mags[half:]))
    p_bar = ps.mean()
    denom = float(np.sum((ps - p_bar) ** 2))
    if denom == 0:
        raise ValueError("tail contains a single distinct p value")
    slope = float(np.sum((ps - p_bar) * (ys - ys.mean()))) / denom
    return math.exp(slope)


@dataclass
class SweepRecord:
    """Everything measured at a single p."""

    p: int
    singular: bool = False
    detail: str = ""
    coeffs: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    pole_errors: list = field(default_factory=list)
    probe_errors: list = field(default_factory=list)
    min_pivot: float = math.nan


@dataclass
class QuantityResult:
    """One tracked decay sequence with its fit and verdict."""

    name: str
    magnitudes: list
    fitted_ratio: float | None
    bound: float | None
    verdict: str  # "pass" | "fail" | "n/a"


@dataclass
class RateReport:
    function: str
    geometry: str
    k: int
    mode: str
    slack: float
    absolute_tol: float
    p_values: list
    records: list
    quantities: list
    rho: float | None = None

    def passed(self) -> bool:
        return all(q.verdict != "fail" for q in self.quantities)


def _probe_label(z: complex) -> str:
    return f"probe_{z.real:g}{z.imag:+g}j"


def _sorted_poles(F: MeromorphicTestFunction, family: NodeFamily):
    poles = [complex(a) for a in F.poles]
    if family.geometry.kind == "custom":
        return poles
    return sorted(poles, key=lambda a: (phi(family.geometry, a), a.real, a.imag))


def run_convergence_study(F: MeromorphicTestFunction, family: NodeFamily,
                          k: int, p_values, q=None, probes=(),
                          rho: float | None = None, slack: float = RATE_SLACK,
                          mode: str = "auto",
                          absolute_tol: float = ABSOLUTE_TOL) -> RateReport:
    """Sweep p, measure decay, and return verdicts against the bounds.

    mode "auto" checks each fitted ratio against bound * slack where a
    bound exists, and falls back to an absolute error check (max
    magnitude <= absolute_tol) when the theory predicts arbitrarily
    fast decay (all poles modeled, no finite rho).  mode "absolute"
    forces the absolute check everywhere.  Singular systems at isolated
    p are recorded and skipped; fewer than 4 usable p values raise
    StudyInconclusiveError.
    """
    if mode not in ("auto", "absolute"):
        raise ValueError(f"unknown mode {mode!r}")
    probes = [complex(z) for z in probes]
    mu = len(F.poles)
    if k > mu:
        raise ValueError(f"k={k} exceeds the pole count {mu}")
    reference = _sorted_poles(F, family)

    records: list[SweepRecord] = []
    for p in p_values:
        p = int(p)
        nodes = family.nodes(p + k)
        samples = SampleSet.from_function(F, nodes)
        try:
            interp = build_interpolant(nodes, samples, k, q=q)
        except SingularSystemError as exc:
            records.append(SweepRecord(p=p, singular=True, detail=str(exc)))
            continue
        roots = denominator_roots(interp) if k else np.zeros(0, complex)
        matches = match_poles(roots, reference)
        by_ref = {j: d for _, j, d in matches}
        pole_errors = [by_ref.get(m, math.nan) for m in range(k)]
        probe_errors = [
            float(np.linalg.norm(F.value(z) - interp.predict(z)))
            for z in probes
        ]
        records.append(
            SweepRecord(
                p=p,
                coeffs=[complex(c) for c in interp.coeffs_],
                roots=[complex(r) for r in roots],
                pole_errors=pole_errors,
                probe_errors=probe_errors,
                min_pivot=float(interp.min_pivot_),
            )
        )

    good = [r for r in records if not r.singular]
    if len(good) < 4:
        raise StudyInconclusiveError(
            f"only {len(good)} of {len(records)} sweep points usable"
        )
    good_p = [r.p for r in good]

    bounds_known = family.geometry.kind != "custom"
    quantities: list[QuantityResult] = []

    def settle(name, magnitudes, bound):
        fitted = None
        try:
            fitted = fit_rate(good_p, magnitudes)
        except ValueError:
            pass
        if mode == "absolute" or (bound is None and k == mu and bounds_known):
            ok = max(magnitudes) <= absolute_tol
            verdict = "pass" if ok else "fail"
        elif bound is None:
            verdict = "n/a"
        elif bound == 0.0:
            verdict = "pass" if max(magnitudes) <= absolute_tol else "fail"
        elif fitted is None:
            verdict = "n/a"
        else:
            verdict = "pass" if fitted <= bound * slack else "fail"
        quantities.append(
            QuantityResult(name, list(magnitudes), fitted, bound, verdict)
        )

    for m in range(1, k + 1):
        mags = [r.pole_errors[m - 1] for r in good]
        bound = None
        if bounds_known and (k < mu or rho is not None):
            bound = bound_pole_rate(family.geometry, reference, m, k, rho=rho)
        settle(f"pole_{m}", mags, bound)
    for idx, z in enumerate(probes):
        mags = [r.probe_errors[idx] for r in good]
        bound = None
        if bounds_known and (k < mu or rho is not None):
            bound = bound_error_rate(family.geometry, reference, k, z, rho=rho)
        settle(_probe_label(z), mags, bound)

    return RateReport(
        function=F.name or "custom",
        geometry=family.geometry.kind,
        k=k,
        mode=mode,
        slack=slack,
        absolute_tol=absolute_tol,
        p_values=[r.p for r in records],
        records=records,
        quantities=quantities,
        rho=rho,
    )


def run_self_convergence_study(nodes: NodeMultiset, samples: SampleSet,
                               k: int, p_values, q=None,
                               probes=()) -> RateReport:
    """Prefix sweep over a fixed sample set, measured against its largest fit.

    With no underlying function available, the largest-p interpolant
    serves as the reference: pole quantities track root drift toward its
    roots, probe quantities track value drift.  No bounds exist, so all
    verdicts are "n/a"; the rates are still fitted and reported.
    """
    probes = [complex(z) for z in probes]
    p_values = sorted({int(p) for p in p_values if int(p) + k <= len(nodes)})
    if len(p_values) < 5:
        raise StudyInconclusiveError(
            "need at least 5 usable prefix sizes (reference plus 4 points)"
        )

    def prefix_fit(p: int) -> RationalInterpolant:
        head = NodeMultiset(nodes.points[: p + k])
        sub = SampleSet(samples.dim)
        for point, mult in head.groups:
            for order in range(mult):
                sub.add(point, samples.derivative(point, order))
        return build_interpolant(head, sub, k, q=q)

    ref_p = p_values[-1]
    reference = prefix_fit(ref_p)
    ref_roots = denominator_roots(reference) if k else np.zeros(0, complex)
    ref_values = [reference.predict(z) for z in probes]

    records: list[SweepRecord] = []
    for p in p_values[:-1]:
        try:
            interp = prefix_fit(p)
        except SingularSystemError as exc:
            records.append(SweepRecord(p=p, singular=True, detail=str(exc)))
            continue
        roots = denominator_roots(interp) if k else np.zeros(0, complex)
        matches = match_poles(roots, ref_roots) if k else []
        by_ref = {j: d for _, j, d in matches}
        pole_errors = [by_ref.get(m, math.nan) for m in range(k)]
        probe_errors = [
            float(np.linalg.norm(ref_values[i] - interp.predict(z)))
            for i, z in enumerate(probes)
        ]
        records.append(
            SweepRecord(
                p=p,
                coeffs=[complex(c) for c in interp.coeffs_],
                roots=[complex(r) for r in roots],
                pole_errors=pole_errors,
                probe_errors=probe_errors,
                min_pivot=float(interp.min_pivot_),
            )
        )

    good = [r for r in records if not r.singular]
    if len(good) < 4:
        raise StudyInconclusiveError(
            f"only {len(good)} of {len(records)} prefix fits usable"
        )
    good_p = [r.p for r in good]

    quantities: list[QuantityResult] = []

    def settle(name, magnitudes):
        try:
            fitted = fit_rate(good_p, magnitudes)
        except ValueError:
            fitted = None
        quantities.append(
            QuantityResult(name, list(magnitudes), fitted, None, "n/a")
        )

    for m in range(1, k + 1):
        settle(f"pole_{m}", [r.pole_errors[m - 1] for r in good])
    for idx, z in enumerate(probes):
        settle(_probe_label(z), [r.probe_errors[idx] for r in good])

    return RateReport(
        function="samples",
        geometry="custom",
        k=k,
        mode="auto",
        slack=RATE_SLACK,
        absolute_tol=ABSOLUTE_TOL,
        p_values=[r.p for r in records] + [ref_p],
        records=records,
        quantities=quantities,
    )


@dataclass
class RefinedReport:
    """Comparison against the sharp asymptotic prefactors."""

    applicable: bool
    reason: str = ""
    p_values: list = field(default_factory=list)
    c_m: complex | None = None
    pole_ratios: list = field(default_factory=list)
    pole_rel_errors: list = field(default_factory=list)
    b_measured_norms: list = field(default_factory=list)
    b_oracle_norms: list = field(default_factory=list)
    b_rel_errors: list = field(default_factory=list)

    def band_factor(self, measured: bool = False) -> float:
        """Spread (max over min) of the prefactor norms over the sweep.

        Defaults to the formula-evaluated sequence, which is the bounded
        object; the measured proxy inherits roundoff from the error
        measurement once the signal decays near machine scale, so its
        band is only meaningful over moderate p.
        """
        source = self.b_measured_norms if measured else self.b_oracle_norms
        vals = [v for v in source if v > 0 and math.isfinite(v)]
        if not vals:
            return math.inf
        return max(vals) / min(vals)


def refined_asymptotics_check(F: MeromorphicTestFunction, family: NodeFamily,
                              k: int, m: int, p_values, probe,
                              q=None) -> RefinedReport:
    """Track the normalized error sequences against C_m and B_p.

    The pole-error ratio (z_m^(p) - z_m) PSI_p(z_{k+1})/PSI_p(z_m)
    should settle at C_m; the error at the probe, normalized by
    psi_{1,p}(probe)/PSI_p(z_{k+1}), should track B_p(probe).  Needs a
    strict level gap around pole k+1 and a nonvanishing leading minor;
    when an assumption fails the report says so instead of asserting.
    """
    probe = complex(probe)
    mu = len(F.poles)
    geometry = family.geometry
    if geometry.kind == "custom":
        return RefinedReport(False, "custom geometry has no level function")
    if k >= mu:
        return RefinedReport(False, "no unmodeled pole remains (k = mu)")
    reference = _sorted_poles(F, family)
    levels = [phi(geometry, a) for a in reference]
    gap_low = k < 2 or levels[k - 1] < levels[k] * (1 - 1e-9)
    gap_high = k + 1 >= mu or levels[k] < levels[k + 1] * (1 - 1e-9)
    if not (gap_low and gap_high):
        return RefinedReport(
            False, "pole k+1 is not strictly separated in level"
        )

    sorted_F = MeromorphicTestFunction(
        poles=tuple(reference),
        residues=tuple(
            F.residues[[complex(a) for a in F.poles].index(zr)]
            for zr in reference
        ),
        poly=F.poly,
        entire=F.entire,
        name=F.name,
    )

    report = RefinedReport(True)
    z_m, z_next = reference[m - 1], reference[k]
    for p in p_values:
        p = int(p)
        nodes = family.nodes(p + k)
        samples = SampleSet.from_function(F, nodes)
        try:
            interp = build_interpolant(nodes, samples, k, q=q)
        except SingularSystemError:
            continue
        try:
            c_m, b_oracle = refined_constants(
                sorted_F, nodes, p, k, interp.q_, m, probe
            )
        except SingularSystemError as exc:
            return RefinedReport(False, str(exc))
        if report.c_m is None:
            report.c_m = complex(c_m)

        roots = denominator_roots(interp)
        matches = match_poles(roots, reference)
        root_for_m = next(
            (roots[i] for i, j, _ in matches if j == m - 1), None
        )
        big_m = psi_scaled(nodes, 1, p + k, z_m)
        big_next = psi_scaled(nodes, 1, p + k, z_next)
        norm_ratio = (big_next / big_m).value()

        report.p_values.append(p)
        if root_for_m is None:
            report.pole_ratios.append(complex(math.nan, 0.0))
            report.pole_rel_errors.append(math.nan)
        else:
            ratio = (root_for_m - z_m) * norm_ratio
            report.pole_ratios.append(complex(ratio))
            report.pole_rel_errors.append(abs(ratio - c_m) / abs(c_m))

        err = F.value(probe) - interp.predict(probe)
        small = psi_scaled(nodes, 1, p, probe)
        b_measured = err * (big_next / small).value()
        b_norm = float(np.linalg.norm(b_measured))
        o_norm = float(np.linalg.norm(b_oracle))
        report.b_measured_norms.append(b_norm)
        report.b_oracle_norms.append(o_norm)
        denom = max(o_norm, 1e-300)
        report.b_rel_errors.append(
            float(np.linalg.norm(b_measured - b_oracle)) / denom
        )
    if not report.p_values:
        return RefinedReport(False, "no usable sweep points")
    return report
