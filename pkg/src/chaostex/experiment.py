"""End-to-end experiment orchestration.

Per split: features are extracted once per image (cached on disk by
content and config hash), PCA and the discriminant classifier are fit on
the training side only, the regularization is picked by stratified
cross-validation on the training side, and the test side is scored. Runs
are sequential and fully deterministic for a fixed seed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import DatasetIndex, grouped_splits, load_image, random_half_splits
from .descriptor import DescriptorConfig, apply_pca, extract, feature_names, fit_pca
from .errors import DataError
from .features_io import FeatureSet
from .lda import DEFAULT_LAMBDA_GRID, cross_validate_lambda, fit_lda, predict_batch

PROTOCOLS = ("grouped_one_train", "random_half")


@dataclass(frozen=True)
class ExperimentResult:
    per_round_accuracy: tuple[float, ...]
    mean_accuracy: float
    std_accuracy: float
    confusion: np.ndarray          # (C, C) int counts; rows = target class
    labels: tuple[str, ...]
    selected_lambdas: tuple[float, ...]
    config: dict

    def to_dict(self) -> dict:
        return {
            "per_round_accuracy": list(self.per_round_accuracy),
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "labels": list(self.labels),
            "confusion": self.confusion.tolist(),
            "selected_lambdas": list(self.selected_lambdas),
            "config": self.config,
        }


def _image_hash(image: np.ndarray) -> str:
    digest = hashlib.sha256()
    digest.update(str(image.shape).encode())
    digest.update(np.ascontiguousarray(image, dtype="<f8").tobytes())
    return digest.hexdigest()


def config_hash(config: DescriptorConfig) -> str:
    return hashlib.sha256(
        json.dumps(config.to_dict(), sort_keys=True).encode()
    ).hexdigest()[:16]


def extract_with_cache(image: np.ndarray, config: DescriptorConfig,
                       cache_dir: Path | None) -> np.ndarray:
    """Descriptor for one image, memoized on disk when cache_dir is given."""
    if cache_dir is None:
        return extract(image, config)
    cache_dir.mkdir(parents=True, exist_ok=True)
    key = f"{_image_hash(image)}_{config_hash(config)}"
    cache_file = cache_dir / f"{key}.npy"
    if cache_file.exists():
        return np.load(cache_file)
    vector = extract(image, config)
    np.save(cache_file, vector)
    return vector


def extract_feature_set(index: DatasetIndex, config: DescriptorConfig,
                        use_cache: bool = True,
                        cache_dir: Path | None = None) -> FeatureSet:
    """Feature matrix for every image of the index, in index order."""
    if use_cache and cache_dir is None:
        cache_dir = index.root / ".feature_cache"
    if not use_cache:
        cache_dir = None
    rows = []
    for entry in index.entries:
        image = load_image(entry.path)
        rows.append(extract_with_cache(image, config, cache_dir))
    matrix = np.vstack(rows)
    return FeatureSet(
        matrix=matrix,
        paths=tuple(str(e.path) for e in index.entries),
        labels=tuple(e.label for e in index.entries),
        groups=tuple(e.group for e in index.entries),
        columns=tuple(feature_names(config)),
        config=config.to_dict(),
    )


def _confusion_matrix(targets, predictions, labels) -> np.ndarray:
    position = {label: i for i, label in enumerate(labels)}
    matrix = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for target, predicted in zip(targets, predictions):
        matrix[position[target], position[predicted]] += 1
    return matrix


def run_rounds(matrix: np.ndarray, labels, groups, protocol: str,
               rounds: int = 10, seed: int = 0, pca: int | str = "auto",
               lambda_grid=DEFAULT_LAMBDA_GRID,
               config_echo: dict | None = None) -> ExperimentResult:
    """Evaluate a feature matrix under a split protocol."""
    matrix = np.asarray(matrix, dtype=np.float64)
    labels = np.asarray(labels)
    if protocol == "grouped_one_train":
        splits = grouped_splits(labels, groups)
    elif protocol == "random_half":
        splits = random_half_splits(labels, rounds, seed)
    else:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")

    class_labels = tuple(sorted(set(labels.tolist())))
    confusion = np.zeros((len(class_labels), len(class_labels)), dtype=np.int64)
    accuracies, lambdas = [], []
    for round_idx, (train, test) in enumerate(splits):
        overlap = np.intersect1d(train, test)
        if overlap.size:
            raise DataError(f"split {round_idx}: {overlap.size} images leak "
                            f"between train and test")
        x_train, y_train = matrix[train], labels[train]
        x_test, y_test = matrix[test], labels[test]

        cap = max(1, len(train) - len(class_labels))
        pca_model = fit_pca(x_train, n_components=pca,
                            cap=cap if pca == "auto" else None)
        z_train = apply_pca(pca_model, x_train)
        z_test = apply_pca(pca_model, x_test)

        lam = cross_validate_lambda(z_train, y_train, lambda_grid,
                                    seed=seed * 100003 + round_idx)
        model = fit_lda(z_train, y_train, lam)
        predictions = predict_batch(model, z_test)

        round_confusion = _confusion_matrix(y_test, predictions, class_labels)
        accuracy = float(np.trace(round_confusion) / round_confusion.sum())
        assert round_confusion.sum() == len(test)
        accuracies.append(accuracy)
        lambdas.append(lam)
        confusion += round_confusion

    return ExperimentResult(
        per_round_accuracy=tuple(accuracies),
        mean_accuracy=float(np.mean(accuracies)),
        std_accuracy=float(np.std(accuracies)),
        confusion=confusion,
        labels=class_labels,
        selected_lambdas=tuple(lambdas),
        config=dict(config_echo or {}),
    )


def run_experiment(index: DatasetIndex, config: DescriptorConfig, protocol: str,
                   rounds: int = 10, seed: int = 0, pca: int | str = "auto",
                   lambda_grid=DEFAULT_LAMBDA_GRID, use_cache: bool = True,
                   cache_dir: Path | None = None) -> ExperimentResult:
    """Extract features for the whole index, then evaluate."""
    features = extract_feature_set(index, config, use_cache=use_cache,
                                   cache_dir=cache_dir)
    echo = {"descriptor": features.config, "protocol": protocol,
            "rounds": rounds, "seed": seed, "pca": pca,
            "lambda_grid": list(lambda_grid)}
    return run_rounds(features.matrix, features.labels, features.groups,
                      protocol, rounds=rounds, seed=seed, pca=pca,
                      lambda_grid=lambda_grid, config_echo=echo)


def results_json(result: ExperimentResult) -> str:
    """Canonical results serialization; byte-stable for a fixed seed."""
    return json.dumps(result.to_dict(), sort_keys=True, indent=2) + "\n"


def write_results(path: Path | str, result: ExperimentResult) -> None:
    Path(path).write_text(results_json(result))
