"""Serialization of feature matrices and fitted models.

Feature matrices persist either as CSV (one row per image; a leading
comment line echoes the extraction config and the header names every
column) or as a compact binary format: magic ``CTXF``, little-endian u16
version, u32 row and column counts, then row-major little-endian float64
data. The binary file carries only the matrix; labels, groups, paths,
column names and the config ride in a JSON sidecar at ``<file>.json``.

Fitted discriminant models persist as magic ``CTXM`` blobs with the same
number layout plus a JSON sidecar holding labels and the regularization.
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .lda import LdaModel

FEATURES_MAGIC = b"CTXF"
MODEL_MAGIC = b"CTXM"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class FeatureSet:
    matrix: np.ndarray          # (n_images, n_features)
    paths: tuple[str, ...]
    labels: tuple[str, ...]
    groups: tuple[str | None, ...]
    columns: tuple[str, ...]
    config: dict


def write_features_csv(path: Path | str, features: FeatureSet) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# config={json.dumps(features.config, sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(["path", "label", "group", *features.columns])
        for row_path, label, group, row in zip(
                features.paths, features.labels, features.groups, features.matrix):
            writer.writerow([row_path, label, group or "", *[repr(float(v)) for v in row]])


def read_features_csv(path: Path | str) -> FeatureSet:
    path = Path(path)
    with path.open(newline="") as fh:
        first = fh.readline()
        config = {}
        if first.startswith("# config="):
            config = json.loads(first[len("# config="):])
            header_line = fh.readline()
        else:
            header_line = first
        header = next(csv.reader([header_line]))
        if header[:3] != ["path", "label", "group"]:
            raise DataError(f"{path}: not a feature CSV (bad header)")
        columns = tuple(header[3:])
        paths, labels, groups, rows = [], [], [], []
        for record in csv.reader(fh):
            if not record:
                continue
            paths.append(record[0])
            labels.append(record[1])
            groups.append(record[2] or None)
            rows.append([float(v) for v in record[3:]])
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), len(columns))
    return FeatureSet(matrix=matrix, paths=tuple(paths), labels=tuple(labels),
                      groups=tuple(groups), columns=columns, config=config)


def write_features_binary(path: Path | str, features: FeatureSet) -> None:
    path = Path(path)
    matrix = np.ascontiguousarray(features.matrix, dtype="<f8")
    rows, cols = matrix.shape
    with path.open("wb") as fh:
        fh.write(FEATURES_MAGIC)
        fh.write(struct.pack("<H", FORMAT_VERSION))
        fh.write(struct.pack("<II", rows, cols))
        fh.write(matrix.tobytes())
    sidecar = {
        "paths": list(features.paths),
        "labels": list(features.labels),
        "groups": [g or "" for g in features.groups],
        "columns": list(features.columns),
        "config": features.config,
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")


def read_features_binary(path: Path | str) -> FeatureSet:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != FEATURES_MAGIC:
        raise DataError(f"{path}: bad magic, not a feature matrix file")
    (version,) = struct.unpack_from("<H", raw, 4)
    if version != FORMAT_VERSION:
        raise DataError(f"{path}: unsupported feature format version {version}")
    rows, cols = struct.unpack_from("<II", raw, 6)
    expected = 14 + rows * cols * 8
    if len(raw) != expected:
        raise DataError(f"{path}: truncated feature file ({len(raw)} bytes, want {expected})")
    matrix = np.frombuffer(raw, dtype="<f8", offset=14).reshape(rows, cols).copy()
    sidecar_path = Path(str(path) + ".json")
    if not sidecar_path.exists():
        raise DataError(f"{path}: missing sidecar {sidecar_path}")
    meta = json.loads(sidecar_path.read_text())
    return FeatureSet(
        matrix=matrix,
        paths=tuple(meta["paths"]),
        labels=tuple(meta["labels"]),
        groups=tuple(g or None for g in meta["groups"]),
        columns=tuple(meta["columns"]),
        config=meta.get("config", {}),
    )


def write_features(path: Path | str, features: FeatureSet) -> None:
    """Dispatch on suffix: .csv is text, anything else the CTXF binary."""
    if Path(path).suffix.lower() == ".csv":
        write_features_csv(path, features)
    else:
        write_features_binary(path, features)


def read_features(path: Path | str) -> FeatureSet:
    if Path(path).suffix.lower() == ".csv":
        return read_features_csv(path)
    return read_features_binary(path)


def save_lda_model(path: Path | str, model: LdaModel) -> None:
    path = Path(path)
    projection = np.ascontiguousarray(model.projection, dtype="<f8")
    centroids = np.ascontiguousarray(model.centroids, dtype="<f8")
    with path.open("wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<H", FORMAT_VERSION))
        fh.write(struct.pack("<II", *projection.shape))
        fh.write(projection.tobytes())
        fh.write(struct.pack("<I", centroids.shape[0]))
        fh.write(centroids.tobytes())
    sidecar = {"labels": list(model.labels), "lambda": model.lam,
               "version": FORMAT_VERSION}
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")


def load_lda_model(path: Path | str) -> LdaModel:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != MODEL_MAGIC:
        raise DataError(f"{path}: bad magic, not a model file")
    (version,) = struct.unpack_from("<H", raw, 4)
    if version != FORMAT_VERSION:
        raise DataError(f"{path}: unsupported model version {version}")
    n_features, n_directions = struct.unpack_from("<II", raw, 6)
    offset = 14
    projection = np.frombuffer(raw, dtype="<f8", offset=offset,
                               count=n_features * n_directions)
    projection = projection.reshape(n_features, n_directions).copy()
    offset += n_features * n_directions * 8
    (n_classes,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    centroids = np.frombuffer(raw, dtype="<f8", offset=offset,
                              count=n_classes * n_directions)
    centroids = centroids.reshape(n_classes, n_directions).copy()
    meta = json.loads(Path(str(path) + ".json").read_text())
    return LdaModel(projection=projection, centroids=centroids,
                    labels=tuple(meta["labels"]), lam=float(meta["lambda"]))
