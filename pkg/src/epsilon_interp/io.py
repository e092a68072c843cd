"""File formats: samples CSV, key-value config, rates CSV, JSON report.

The samples format is flat and diff-able: one row per derivative order
per node, complex numbers split into _re/_im column pairs.  rates.csv
is written with %.17g so identical studies produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict

import numpy as np

from .core import NodeMultiset
from .divided import SampleSet
from .errors import SamplesFormatError

SAMPLES_FIXED_COLUMNS = ("node_re", "node_im", "deriv_order")


def read_samples_csv(path):
    """Parse a samples file into (NodeMultiset, SampleSet).

    Header: node_re,node_im,deriv_order,c0_re,c0_im,...  Rows sharing a
    node must sit together with deriv_order counting 0,1,2,...; the
    node's multiplicity is its row count.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SamplesFormatError("file is empty") from None
        header = [h.strip() for h in header]
        if tuple(header[:3]) != SAMPLES_FIXED_COLUMNS:
            raise SamplesFormatError(
                f"header must start with {','.join(SAMPLES_FIXED_COLUMNS)}"
            )
        comp_cols = header[3:]
        if not comp_cols or len(comp_cols) % 2 != 0:
            raise SamplesFormatError(
                "component columns must be c0_re,c0_im,... pairs"
            )
        dim = len(comp_cols) // 2
        for i in range(dim):
            expected = (f"c{i}_re", f"c{i}_im")
            if tuple(comp_cols[2 * i: 2 * i + 2]) != expected:
                raise SamplesFormatError(
                    f"component columns must be named {expected[0]},{expected[1]}"
                )

        node_list: list[complex] = []
        rows: list[tuple[complex, int, np.ndarray]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3 + 2 * dim:
                raise SamplesFormatError(
                    f"expected {3 + 2 * dim} fields, got {len(row)}",
                    row=lineno,
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError as exc:
                raise SamplesFormatError(str(exc), row=lineno) from None
            node = complex(values[0], values[1])
            order = values[2]
            if order != int(order) or order < 0:
                raise SamplesFormatError(
                    f"deriv_order must be a non-negative integer, got {order}",
                    row=lineno,
                )
            order = int(order)
            vec = np.array(
                [complex(values[3 + 2 * i], values[4 + 2 * i])
                 for i in range(dim)]
            )
            if rows and rows[-1][0] == node:
                expected_order = rows[-1][1] + 1
            else:
                expected_order = 0
            if order != expected_order:
                raise SamplesFormatError(
                    f"deriv_order {order} out of sequence "
                    f"(expected {expected_order})",
                    row=lineno,
                )
            rows.append((node, order, vec))
            node_list.append(node)

    if not rows:
        raise SamplesFormatError("no data rows")
    try:
        nodes = NodeMultiset(node_list)
    except ValueError as exc:
        raise SamplesFormatError(str(exc)) from None
    samples = SampleSet(dim)
    for node, _, vec in rows:
        samples.add(node, vec)
    return nodes, samples


def write_samples_csv(path, nodes: NodeMultiset, samples: SampleSet) -> None:
    """Inverse of read_samples_csv, mostly for generating fixtures."""
    dim = samples.dim
    header = list(SAMPLES_FIXED_COLUMNS)
    for i in range(dim):
        header += [f"c{i}_re", f"c{i}_im"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for point, mult in nodes.groups:
            for order in range(mult):
                vec = samples.derivative(point, order)
                w = complex(point)
                row = [repr(w.real), repr(w.imag), order]
                for c in vec:
                    c = complex(c)
                    row += [repr(c.real), repr(c.imag)]
                writer.writerow(row)


def read_config(path) -> dict:
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SamplesFormatError(
                    f"expected key=value, got {line!r}", row=lineno
                )
            key, value = line.split("=", 1)
            key = key.strip()
            if not key:
                raise SamplesFormatError("empty key", row=lineno)
            if key in out:
                raise SamplesFormatError(f"duplicate key {key}", row=lineno)
            out[key] = value.strip()
    return out


def parse_complex_list(text: str) -> list[complex]:
    """Comma-separated complex values: "1.5, 1.2j, -2+0.5j"."""
    items = [piece.strip() for piece in text.split(",") if piece.strip()]
    out = []
    for piece in items:
        try:
            out.append(complex(piece.replace(" ", "")))
        except ValueError:
            raise SamplesFormatError(f"bad complex value {piece!r}") from None
    return out


def _fmt(x) -> str:
    if x is None:
        return ""
    return "%.17g" % float(x)


def write_rates_csv(path, report) -> None:
    """One row per (p, quantity); fit, bound and verdict repeat per row."""
    good = [r for r in report.records if not r.singular]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["p", "quantity", "magnitude", "fitted_ratio", "bound", "verdict"]
        )
        for q in report.quantities:
            for rec, mag in zip(good, q.magnitudes):
                writer.writerow(
                    [rec.p, q.name, _fmt(mag), _fmt(q.fitted_ratio),
                     _fmt(q.bound), q.verdict]
                )


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    if isinstance(obj, np.complexfloating):
        return _jsonable(complex(obj))
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_report_json(path, report, metadata: dict) -> None:
    """Full-fidelity study report plus run metadata."""
    payload = {
        "metadata": _jsonable(metadata),
        "study": _jsonable(asdict(report)),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
