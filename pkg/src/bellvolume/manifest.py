"""Run provenance: a JSON manifest that captures everything needed to
reproduce a computation, plus the CSV result tables the manifest describes."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Mapping

from .volume import VolumeEstimate

MANIFEST_VERSION = 1
ARTIFACT_VERSION = "0.1.0"


def estimate_payload(est: VolumeEstimate) -> dict[str, Any]:
    return {
        "hits": est.hits,
        "samples": est.samples,
        "fraction": est.fraction,
        "stderr": est.stderr,
        "ci_low": est.ci95[0],
        "ci_high": est.ci95[1],
        "normalization": est.normalization,
        "value": est.value,
    }


def build_manifest(
    command: str,
    *,
    functional: str | None = None,
    state: Mapping[str, Any] | None = None,
    space: Mapping[str, Any] | None = None,
    samples: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
    normalization: str | None = None,
    estimates: Any = None,
    extra: Mapping[str, Any] | None = None,
    wall_time_s: float = 0.0,
) -> dict[str, Any]:
    manifest: dict[str, Any] = {
        "manifest_version": MANIFEST_VERSION,
        "artifact_version": ARTIFACT_VERSION,
        "command": command,
        "wall_time_s": wall_time_s,
    }
    for key, value in [
        ("functional", functional),
        ("state", state),
        ("space", space),
        ("samples", samples),
        ("seed", seed),
        ("workers", workers),
        ("normalization", normalization),
        ("estimates", estimates),
    ]:
        if value is not None:
            manifest[key] = value
    if extra:
        manifest.update(extra)
    return manifest


def dump_manifest(manifest: Mapping[str, Any]) -> str:
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def write_manifest(path: Path, manifest: Mapping[str, Any]) -> None:
    path.write_text(dump_manifest(manifest))


def read_manifest(path: Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text())


def _cell(value: Any) -> str:
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"refusing to serialize non-finite value {value!r}")
        return repr(float(value))  # plain-float repr even for numpy scalars
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list[Any]]) -> None:
    """RFC-4180-style CSV with full-precision floats; rejects NaN/Inf."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_mask_text(path: Path, mask) -> None:
    """Plain 0/1 grid, one mask row per line."""
    with open(path, "w") as fh:
        for row in mask:
            fh.write("".join("1" if v else "0" for v in row) + "\n")


def write_mask_rle(path: Path, mask) -> None:
    """Run-length encoding: per row, 'value:length' tokens separated by spaces."""
    with open(path, "w") as fh:
        fh.write(f"# rle mask rows={mask.shape[0]} cols={mask.shape[1]}\n")
        for row in mask:
            runs = []
            current = bool(row[0])
            length = 0
            for v in row:
                if bool(v) == current:
                    length += 1
                else:
                    runs.append(f"{int(current)}:{length}")
                    current = bool(v)
                    length = 1
            runs.append(f"{int(current)}:{length}")
            fh.write(" ".join(runs) + "\n")


def read_mask_rle(path: Path):
    """Inverse of ``write_mask_rle`` (returns a list of 0/1 lists)."""
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            continue
        row: list[int] = []
        for token in line.split():
            value, length = token.split(":")
            row.extend([int(value)] * int(length))
        rows.append(row)
    return rows
