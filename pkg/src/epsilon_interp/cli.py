"""Command-line driver: interpolate sample files, run studies, self-test.

Exit codes: 0 success, 1 self-test failure, 2 malformed input,
3 singular defining system, 4 inconclusive study.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from .analysis import (
    denominator_roots,
    run_convergence_study,
    run_self_convergence_study,
)
from .core import NodeMultiset
from .errors import (
    EvalAtPoleError,
    SamplesFormatError,
    SingularSystemError,
    StudyInconclusiveError,
)
from .functions import CATALOG, from_catalog
from .interpolant import build_interpolant
from .io import (
    parse_complex_list,
    read_config,
    read_samples_csv,
    write_rates_csv,
    write_report_json,
)
from .potential import custom_family, disk_family, interval_family
from .selftest import run_identity_suite

MAX_P_ENV = "EPSILON_INTERP_MAX_P"
DEFAULT_MAX_P = 40

EXIT_SELFTEST = 1
EXIT_INPUT = 2
EXIT_SINGULAR = 3
EXIT_INCONCLUSIVE = 4


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _package_version() -> str:
    try:
        from importlib.metadata import version

        return version("epsilon-interp")
    except Exception:
        return "unknown"


def _max_p() -> int:
    raw = os.environ.get(MAX_P_ENV)
    if raw is None:
        return DEFAULT_MAX_P
    try:
        cap = int(raw)
    except ValueError:
        raise SamplesFormatError(
            f"{MAX_P_ENV} must be an integer, got {raw!r}"
        ) from None
    if cap < 1:
        raise SamplesFormatError(f"{MAX_P_ENV} must be positive, got {cap}")
    return cap


def cmd_interp(args) -> int:
    nodes, samples = read_samples_csv(args.samples)
    p, k = args.p, args.k
    if p < 1 or k < 0:
        raise SamplesFormatError(f"need p >= 1 and k >= 0, got p={p}, k={k}")
    if len(nodes) < p + k:
        raise SamplesFormatError(
            f"need p+k = {p + k} node rows, file provides {len(nodes)}"
        )
    head = NodeMultiset(nodes.points[: p + k])
    q = parse_complex_list(args.q) if args.q else None
    interp = build_interpolant(head, samples, k, q=q)

    print(f"fitted p={p}, k={k} over {p + k} nodes")
    if k:
        roots = denominator_roots(interp)
        for i, r in enumerate(sorted(roots, key=lambda w: (w.real, w.imag)),
                              start=1):
            print(f"denominator root {i}: {_fmt_complex(complex(r))}")
    else:
        print("denominator root: none (k=0, polynomial interpolant)")
    for z in parse_complex_list(args.eval) if args.eval else []:
        try:
            value = interp.predict(z)
        except EvalAtPoleError:
            print(f"z = {_fmt_complex(z)}  R = (at denominator zero)")
            continue
        parts = ", ".join(_fmt_complex(complex(c)) for c in value)
        print(f"z = {_fmt_complex(z)}  R = ({parts})")
    return 0


def _parse_study_config(raw: dict):
    known_prefixes = ("tolerances.",)
    known = {
        "function", "geometry.kind", "geometry.radius", "k",
        "p.min", "p.max", "p.step", "q", "probes", "output.dir",
        "rho", "mode",
    }
    for key in raw:
        if key not in known and not key.startswith(known_prefixes):
            raise SamplesFormatError(f"unknown config key {key!r}")
    if "function" not in raw:
        raise SamplesFormatError("config needs a function= entry")
    for need in ("k", "p.min", "p.max"):
        if need not in raw:
            raise SamplesFormatError(f"config needs a {need}= entry")

    def as_int(key, default=None):
        text = raw.get(key)
        if text is None:
            return default
        try:
            return int(text)
        except ValueError:
            raise SamplesFormatError(
                f"{key} must be an integer, got {text!r}"
            ) from None

    def as_float(key, default=None):
        text = raw.get(key)
        if text is None:
            return default
        if text.lower() in ("inf", "infinity"):
            return math.inf
        try:
            return float(text)
        except ValueError:
            raise SamplesFormatError(
                f"{key} must be a number, got {text!r}"
            ) from None

    cfg = {
        "function": raw["function"],
        "kind": raw.get("geometry.kind", "disk"),
        "radius": as_float("geometry.radius", 1.0),
        "k": as_int("k"),
        "p_min": as_int("p.min"),
        "p_max": as_int("p.max"),
        "p_step": as_int("p.step", 1),
        "mode": raw.get("mode", "auto"),
        "rho": as_float("rho"),
        "slack": as_float("tolerances.slack", 1.15),
        "absolute": as_float("tolerances.absolute", 1e-9),
        "out_dir": raw.get("output.dir", "study_out"),
    }
    if cfg["k"] < 0:
        raise SamplesFormatError("k must be non-negative")
    if cfg["p_step"] < 1 or cfg["p_min"] < 1 or cfg["p_max"] < cfg["p_min"]:
        raise SamplesFormatError("p range must satisfy 1 <= p.min <= p.max")
    q_text = raw.get("q", "default")
    cfg["q"] = None if q_text == "default" else parse_complex_list(q_text)
    cfg["probes"] = parse_complex_list(raw.get("probes", ""))
    return cfg


def cmd_study(args) -> int:
    raw = read_config(args.config)
    cfg = _parse_study_config(raw)
    cap = _max_p()
    p_values = [
        p for p in range(cfg["p_min"], cfg["p_max"] + 1, cfg["p_step"])
        if p <= cap
    ]

    fn = cfg["function"]
    if fn in CATALOG:
        F = from_catalog(fn)
        for z in cfg["probes"]:
            if any(abs(z - complex(a)) < 1e-6 for a in F.poles):
                raise SamplesFormatError(f"probe {z} sits on a declared pole")
        if cfg["kind"] == "disk":
            family = disk_family(cfg["radius"])
        elif cfg["kind"] == "interval":
            family = interval_family()
        else:
            raise SamplesFormatError(
                "custom geometry requires a samples-file function"
            )
        report = run_convergence_study(
            F, family, cfg["k"], p_values, q=cfg["q"], probes=cfg["probes"],
            rho=cfg["rho"], slack=cfg["slack"], mode=cfg["mode"],
            absolute_tol=cfg["absolute"],
        )
    elif os.path.exists(fn):
        nodes, samples = read_samples_csv(fn)
        report = run_self_convergence_study(
            nodes, samples, cfg["k"], p_values, q=cfg["q"],
            probes=cfg["probes"],
        )
    else:
        raise SamplesFormatError(
            f"function {fn!r} is neither a catalog entry ({sorted(CATALOG)}) "
            f"nor a readable samples file"
        )

    out_dir = args.out or cfg["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    rates_path = os.path.join(out_dir, "rates.csv")
    report_path = os.path.join(out_dir, "report.json")
    write_rates_csv(rates_path, report)
    metadata = {
        "seed": args.seed,
        "config": raw,
        "config_path": str(args.config),
        "package_version": _package_version(),
        "numpy_version": np.__version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "max_p_cap": cap,
    }
    write_report_json(report_path, report, metadata)

    for q in report.quantities:
        fitted = "none" if q.fitted_ratio is None else f"{q.fitted_ratio:.6g}"
        bound = "none" if q.bound is None else f"{q.bound:.6g}"
        peak = max(q.magnitudes) if q.magnitudes else math.nan
        print(
            f"{q.name}: fitted_ratio={fitted} bound={bound} "
            f"max_magnitude={peak:.6g} verdict={q.verdict}"
        )
    verdict = "pass" if report.passed() else "fail"
    print(f"study verdict: {verdict}")
    print(f"wrote {rates_path} and {report_path}")
    return 0


def cmd_selftest(args) -> int:
    report = run_identity_suite(args.seed)
    print(report.summary())
    return 0 if report.passed else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epsilon-interp",
        description=(
            "Vector-valued rational interpolation with pole estimation "
            "and convergence-rate studies."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_interp = sub.add_parser(
        "interp", help="fit one interpolant from a samples file"
    )
    p_interp.add_argument("--samples", required=True, help="samples CSV path")
    p_interp.add_argument("--p", type=int, required=True,
                          help="interpolation-condition count")
    p_interp.add_argument("--k", type=int, required=True,
                          help="denominator degree")
    p_interp.add_argument("--q", default=None,
                          help="projection direction, comma-separated complex")
    p_interp.add_argument("--eval", default=None,
                          help="evaluation points, comma-separated complex")
    p_interp.set_defaults(func=cmd_interp)

    p_study = sub.add_parser(
        "study", help="run a convergence study from a config file"
    )
    p_study.add_argument("--config", required=True, help="key=value config")
    p_study.add_argument("--out", default=None,
                         help="output directory (overrides output.dir)")
    p_study.add_argument("--seed", type=int, default=None,
                         help="seed recorded in report metadata")
    p_study.set_defaults(func=cmd_study)

    p_self = sub.add_parser(
        "selftest", help="run the randomized identity suite"
    )
    p_self.add_argument("--seed", type=int, default=42)
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SamplesFormatError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SingularSystemError as exc:
        print(f"error[singular]: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except StudyInconclusiveError as exc:
        print(f"error[inconclusive]: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
