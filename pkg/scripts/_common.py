"""Shared helpers for the experiment scripts."""
from __future__ import annotations

import argparse
from pathlib import Path

from polaron_qdm.cli import to_csv


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    return p


def save(rows, out_dir: Path, name: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(to_csv(rows), encoding="utf-8", newline="")
    return path
