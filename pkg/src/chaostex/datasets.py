"""Dataset ingestion (directory-per-class) and train/test split protocols.

Layout: ``root/<class>/<image>`` with an optional second level of
acquisition-group folders, ``root/<class>/<group>/<image>``, as used by
collections where all images of one group must stay on the same side of a
split.

Two protocols:
  * grouped_one_train: one split per group id; the chosen group is the
    training set for every class, everything else is test.
  * random_half: stratified 50/50 splits drawn from a seeded generator,
    repeated for a requested number of rounds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DataError

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class ImageEntry:
    path: Path
    label: str
    group: str | None = None


@dataclass(frozen=True)
class DatasetIndex:
    root: Path
    entries: tuple[ImageEntry, ...]

    @property
    def labels(self) -> list[str]:
        return sorted({e.label for e in self.entries})

    def by_class(self) -> dict[str, list[ImageEntry]]:
        out: dict[str, list[ImageEntry]] = {label: [] for label in self.labels}
        for entry in self.entries:
            out[entry.label].append(entry)
        return out


def load_image(path: Path | str) -> np.ndarray:
    """Decode to grayscale float64 in [0,1].

    Color inputs are converted by luminance; 8-bit data is divided by 255
    and 16/32-bit integer grayscale by 65535.
    """
    try:
        with Image.open(path) as img:
            if img.mode.startswith("I"):
                arr = np.asarray(img, dtype=np.float64) / 65535.0
            elif img.mode == "L":
                arr = np.asarray(img, dtype=np.float64) / 255.0
            else:
                arr = np.asarray(img.convert("L"), dtype=np.float64) / 255.0
    except (OSError, UnidentifiedImageError, ValueError) as exc:
        raise DataError(f"cannot decode image {path}: {exc}") from exc
    return np.clip(arr, 0.0, 1.0)


def _image_files(directory: Path) -> list[Path]:
    return sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )


def ingest(root: Path | str, skip_bad: bool = False) -> DatasetIndex:
    """Build a deterministic index of a directory-per-class dataset.

    Every referenced file is checked to decode; unreadable files abort the
    run (all of them listed) unless ``skip_bad`` is set, in which case they
    are dropped with a warning.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"dataset root {root} is not a directory")
    class_dirs = sorted(d for d in root.iterdir() if d.is_dir())
    if len(class_dirs) < 2:
        raise DataError(f"dataset root {root} must contain at least 2 class directories, "
                        f"found {len(class_dirs)}")

    entries: list[ImageEntry] = []
    bad: list[str] = []
    for class_dir in class_dirs:
        label = class_dir.name
        class_entries: list[ImageEntry] = []
        for path in _image_files(class_dir):
            class_entries.append(ImageEntry(path=path, label=label))
        for group_dir in sorted(d for d in class_dir.iterdir() if d.is_dir()):
            for path in _image_files(group_dir):
                class_entries.append(ImageEntry(path=path, label=label, group=group_dir.name))
        if not class_entries:
            raise DataError(f"class directory {class_dir} contains no images")
        for entry in class_entries:
            try:
                with Image.open(entry.path) as img:
                    img.verify()
            except Exception as exc:  # PIL raises a zoo of types on bad files
                bad.append(f"{entry.path}: {exc}")
                continue
            entries.append(entry)

    if bad:
        listing = "\n  ".join(bad)
        if not skip_bad:
            raise DataError(f"unreadable image files:\n  {listing}")
        warnings.warn(f"skipping {len(bad)} unreadable file(s):\n  {listing}")
    return DatasetIndex(root=root, entries=tuple(entries))


def grouped_splits(labels, groups) -> list[tuple[np.ndarray, np.ndarray]]:
    """One split per group id: that group trains, the rest tests."""
    labels = np.asarray(labels)
    groups = np.asarray([g if g is not None else "" for g in groups])
    if np.any(groups == ""):
        raise DataError("grouped protocol requires a group id on every image")
    group_ids = sorted(set(groups.tolist()))
    if len(group_ids) < 2:
        raise DataError(f"grouped protocol needs at least 2 groups, found {len(group_ids)}")
    for label in sorted(set(labels.tolist())):
        present = set(groups[labels == label].tolist())
        missing = sorted(set(group_ids) - present)
        if missing:
            raise DataError(f"class {label!r} has no images in group(s) {missing}")
    splits = []
    all_idx = np.arange(len(labels))
    for gid in group_ids:
        train = all_idx[groups == gid]
        test = all_idx[groups != gid]
        splits.append((train, test))
    return splits


def random_half_splits(labels, rounds: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified 50/50 splits; odd class sizes give the extra image to test."""
    labels = np.asarray(labels)
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    classes = sorted(set(labels.tolist()))
    for c in classes:
        if np.sum(labels == c) < 2:
            raise DataError(f"class {c!r} needs at least 2 images for the half protocol")
    rng = np.random.default_rng(seed)
    splits = []
    for _ in range(rounds):
        train_parts, test_parts = [], []
        for c in classes:
            idx = np.flatnonzero(labels == c)
            shuffled = idx[rng.permutation(idx.size)]
            half = idx.size // 2
            train_parts.append(shuffled[:half])
            test_parts.append(shuffled[half:])
        splits.append((np.sort(np.concatenate(train_parts)),
                       np.sort(np.concatenate(test_parts))))
    return splits


def make_splits(index: DatasetIndex, protocol: str, rounds: int = 10,
                seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Index-level wrapper over the row-level split builders."""
    labels = [e.label for e in index.entries]
    groups = [e.group for e in index.entries]
    if protocol == "grouped_one_train":
        return grouped_splits(labels, groups)
    if protocol == "random_half":
        return random_half_splits(labels, rounds, seed)
    raise ValueError(f"unknown protocol {protocol!r}; "
                     f"expected 'grouped_one_train' or 'random_half'")
