"""Command-line front end: radius, bound, coeffs, verify, transform.

Tables are emitted as RFC-4180 CSV (header row mandatory) or JSON, with
every numeric value formatted to a fixed number of significant digits.
The environment variable BBR_ORDER overrides the default truncation
order.  Exit codes: 0 success, 1 verification failures, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .caratheodory import ClassParams, extremal_pk
from .harness import (
    DEFAULT_GRID,
    ParameterGrid,
    cases_to_jsonl,
    run_suite,
    sharpness_scan,
    summary_table,
)
from .series import TruncatedSeries
from .transforms import (
    TransformSpec,
    apply_transform,
    coeff_multiplier,
    radius_check_order,
    radius_closed_form,
    radius_numeric,
)

__all__ = ["main"]


def _default_order() -> int:
    raw = os.environ.get("BBR_ORDER")
    if raw is None:
        return 64
    try:
        value = int(raw)
        if value < 1:
            raise ValueError
    except ValueError:
        raise SystemExit(f"bbr: BBR_ORDER must be a positive integer, got {raw!r}")
    return value


def _format_value(value, precision: int) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    return str(value)


def _round_for_json(value, precision: int):
    if isinstance(value, bool) or not isinstance(value, float):
        return value
    return float(f"{value:.{precision}g}")


def emit_rows(rows: list[dict], fmt: str, precision: int) -> str:
    """Render rows as an RFC-4180 CSV table or a JSON array."""
    if fmt == "json":
        payload = [
            {key: _round_for_json(v, precision) for key, v in row.items()}
            for row in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    header = list(rows[0].keys()) if rows else []
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_value(row[key], precision) for key in header])
    return buffer.getvalue()


def parse_rows(text: str, fmt: str) -> list[dict]:
    """Inverse of :func:`emit_rows` up to numeric parsing."""
    if fmt == "json":
        return json.loads(text)
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for raw in reader:
        row = {}
        for key, value in raw.items():
            if value in ("true", "false"):
                row[key] = value == "true"
            else:
                try:
                    row[key] = float(value)
                except ValueError:
                    row[key] = value
        rows.append(row)
    return rows


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _class_params(parser: argparse.ArgumentParser, k: float, beta: float) -> ClassParams:
    if not k >= 2.0:
        parser.error(f"--k must satisfy k >= 2, got {k:g}")
    if not 0.0 <= beta < 1.0:
        parser.error(f"--beta must lie in [0, 1), got {beta:g}")
    return ClassParams(k, beta)


def _transform_spec(parser: argparse.ArgumentParser, j: int, sigma: float, n: int) -> TransformSpec:
    try:
        return TransformSpec(j, sigma, n)
    except ValueError as exc:
        parser.error(str(exc))


def _parse_r_grid(parser: argparse.ArgumentParser, text: str) -> list[float]:
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        parser.error(f"--r-grid must look like start:stop:step, got {text!r}")
    if step <= 0:
        parser.error("--r-grid step must be positive")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    radii = [round(start + i * step, 12) for i in range(max(count, 0))]
    if not radii or min(radii) < 0.0 or max(radii) > 0.95:
        parser.error("--r-grid radii must lie within [0, 0.95]")
    return radii


def _parse_grid(parser: argparse.ArgumentParser, text: str) -> ParameterGrid:
    if text == "default":
        return DEFAULT_GRID
    if os.path.exists(text):
        try:
            with open(text, encoding="utf-8") as fh:
                return ParameterGrid.from_mapping(json.load(fh))
        except (ValueError, json.JSONDecodeError) as exc:
            parser.error(f"bad grid file {text!r}: {exc}")
    if "=" in text:
        mapping = {}
        for clause in text.split(";"):
            key, _, values = clause.partition("=")
            mapping[key.strip()] = [float(v) for v in values.split(",") if v]
        try:
            return ParameterGrid.from_mapping(mapping)
        except ValueError as exc:
            parser.error(f"bad grid spec {text!r}: {exc}")
    parser.error(f"--grid must be 'default', a JSON file, or key=v1,v2;... (got {text!r})")


def _add_output_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--precision", type=int, default=12)
    sub.add_argument("--out", default=None, help="write output to this file")


def _check_precision(parser: argparse.ArgumentParser, precision: int) -> None:
    if not 1 <= precision <= 17:
        parser.error(f"--precision must lie in [1, 17], got {precision}")


def _cmd_radius(parser, args) -> int:
    params = _class_params(parser, args.k, args.beta)
    _check_precision(parser, args.precision)
    row = {"k": args.k, "beta": args.beta, "radius": radius_closed_form(params)}
    if args.numeric_check:
        order = max(args.order, radius_check_order(params))
        report = radius_numeric(extremal_pk(params, order), args.tol, params)
        row.update(
            {"lo": report.lo, "hi": report.hi, "discrepancy": report.discrepancy}
        )
    _write_output(emit_rows([row], args.format, args.precision), args.out)
    return 0


def _cmd_bound(parser, args) -> int:
    params = _class_params(parser, args.k, args.beta)
    spec = _transform_spec(parser, args.j, args.sigma, args.n)
    _check_precision(parser, args.precision)
    radii = _parse_r_grid(parser, args.r_grid)
    rows = [
        {
            "r": row["r"],
            "bound": row["bound"],
            "value_at_extremal": row["value_at_extremal"],
            "gap": row["gap"],
        }
        for row in sharpness_scan(params, spec, radii)
    ]
    _write_output(emit_rows(rows, args.format, args.precision), args.out)
    return 0


def _cmd_coeffs(parser, args) -> int:
    spec = _transform_spec(parser, args.j, args.sigma, args.n)
    _check_precision(parser, args.precision)
    if args.max_l < 1:
        parser.error("--max-l must be >= 1")
    rows = [{"l": l, "c": coeff_multiplier(spec, l)} for l in range(1, args.max_l + 1)]
    _write_output(emit_rows(rows, args.format, args.precision), args.out)
    return 0


def _cmd_verify(parser, args) -> int:
    grid = _parse_grid(parser, args.grid)
    if args.order < 1:
        parser.error("--order must be >= 1")
    try:
        cases = run_suite(grid, args.seed, args.order)
    except ValueError as exc:
        parser.error(str(exc))
    if args.format == "json":
        report = cases_to_jsonl(cases)
    else:
        rows = []
        for case in cases:
            data = case.to_json_dict()
            rows.append(
                {
                    "name": data["name"],
                    "k": "" if data["params"] is None else data["params"]["k"],
                    "beta": "" if data["params"] is None else data["params"]["beta"],
                    "j": "" if data["spec"] is None else data["spec"]["j"],
                    "sigma": "" if data["spec"] is None else data["spec"]["sigma"],
                    "n": "" if data["spec"] is None else data["spec"]["n"],
                    "tolerance": data["tolerance"],
                    "status": data["status"],
                    "witness": "" if data["witness"] is None else json.dumps(data["witness"]),
                }
            )
        report = emit_rows(rows, "csv", 17)
    _write_output(report, args.out)
    sys.stdout.write(summary_table(cases))
    return 0 if all(c.status != "fail" for c in cases) else 1


def _cmd_transform(parser, args) -> int:
    spec = _transform_spec(parser, args.j, args.sigma, args.n)
    _check_precision(parser, args.precision)
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
        re_part = np.asarray(data["coeffs_re"], dtype=np.float64)
        im_part = np.asarray(data.get("coeffs_im", np.zeros_like(re_part)), dtype=np.float64)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        parser.error(f"bad series input: {exc}")
    series = TruncatedSeries(re_part + 1j * im_part)
    try:
        result = apply_transform(spec, series)
    except ValueError as exc:
        parser.error(str(exc))
    payload = {
        "coeffs_re": [_round_for_json(float(v), args.precision) for v in result.coeffs.real],
        "coeffs_im": [_round_for_json(float(v), args.precision) for v in result.coeffs.imag],
        "order": result.order,
    }
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbr",
        description="Bounded boundary-rotation calculus: radii, bounds, "
        "coefficient multipliers, and the verification suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    radius = sub.add_parser("radius", help="sharp positivity radius r(k, beta)")
    radius.add_argument("--k", type=float, required=True)
    radius.add_argument("--beta", type=float, required=True)
    radius.add_argument("--numeric-check", action="store_true")
    radius.add_argument("--tol", type=float, default=1e-6)
    radius.add_argument("--order", type=int, default=_default_order())
    _add_output_options(radius)

    bound = sub.add_parser("bound", help="sharp lower-bound curve for a transform")
    bound.add_argument("--j", type=int, required=True)
    bound.add_argument("--sigma", type=float, required=True)
    bound.add_argument("--n", type=int, required=True)
    bound.add_argument("--k", type=float, required=True)
    bound.add_argument("--beta", type=float, required=True)
    bound.add_argument("--r-grid", default="0:0.9:0.1")
    _add_output_options(bound)

    coeffs = sub.add_parser("coeffs", help="transform coefficient multipliers")
    coeffs.add_argument("--j", type=int, required=True)
    coeffs.add_argument("--sigma", type=float, required=True)
    coeffs.add_argument("--n", type=int, required=True)
    coeffs.add_argument("--max-l", type=int, default=16)
    _add_output_options(coeffs)

    verify = sub.add_parser("verify", help="run the verification suite")
    verify.add_argument("--grid", default="default")
    verify.add_argument("--seed", type=int, default=7)
    verify.add_argument("--order", type=int, default=_default_order())
    verify.add_argument("--format", choices=("csv", "json"), default="json")
    verify.add_argument("--out", default=None)

    transform = sub.add_parser("transform", help="apply a transform to a JSON series")
    transform.add_argument("--j", type=int, required=True)
    transform.add_argument("--sigma", type=float, required=True)
    transform.add_argument("--n", type=int, required=True)
    transform.add_argument("--input", default="-", help="JSON file or '-' for stdin")
    _add_output_options(transform)

    return parser


_HANDLERS = {
    "radius": _cmd_radius,
    "bound": _cmd_bound,
    "coeffs": _cmd_coeffs,
    "verify": _cmd_verify,
    "transform": _cmd_transform,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return _HANDLERS[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())
