"""Command-line entry point: ``polaron-qdm {iv,cv,ct,trace,steady}``.

Exit status is 0 when every row is clean, 2 when some rows carry a flag and
1 on configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .config import load_config, parse_overrides
from .errors import ConfigError
from .experiments import COLUMNS, KINDS, make_spec, run

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2


def _format_value(value):
    """Text form shared by the CSV and JSON writers (17 significant digits)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return json.dumps(_format_value(value))
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    return json.dumps(str(value))


def to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_format_value(row[c]) for c in COLUMNS])
    return buf.getvalue()


def to_json(rows) -> str:
    # built by hand so floats keep exactly 17 significant digits
    objects = []
    for row in rows:
        fields = ", ".join(f"{json.dumps(c)}: {_json_value(row[c])}" for c in COLUMNS)
        objects.append("  {" + fields + "}")
    return "[\n" + ",\n".join(objects) + "\n]\n" if objects else "[]\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polaron-qdm", description=__doc__.splitlines()[0])
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--config", help="key = value settings file")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one setting; repeatable")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for the random initial state of traces")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_config(args.config) if args.config else {}
        settings.update(parse_overrides(args.set))
        if args.seed is not None:
            settings["seed"] = args.seed
        fmt = args.format or settings.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {fmt!r}")
        spec = make_spec(args.kind, settings)
        rows = run(spec)
    except ConfigError as exc:
        print(f"polaron-qdm: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = to_json(rows) if fmt == "json" else to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    flagged = sum(1 for r in rows if r["flag"])
    if flagged:
        print(f"polaron-qdm: {flagged} of {len(rows)} rows flagged", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK
