"""Linear discriminant analysis with nearest-centroid prediction.

Fisher LDA: maximize between-class over within-class scatter, keep at most
C-1 discriminant directions, classify by the nearest projected class
centroid. The within-class scatter can be ridge-regularized (lambda added
to its diagonal), which matters for near-collinear histogram features.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError

DEFAULT_LAMBDA_GRID = (1e-6, 1e-4, 1e-2, 1.0)


@dataclass(frozen=True)
class LdaModel:
    projection: np.ndarray  # (n_features, n_directions), n_directions <= C-1
    centroids: np.ndarray   # (n_classes, n_directions), projected class means
    labels: tuple[str, ...]
    lam: float


def _class_partition(labels) -> tuple[list, list[np.ndarray]]:
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    index_sets = [np.flatnonzero(labels == c) for c in classes]
    return classes, index_sets


def fit_lda(features: np.ndarray, labels, lam: float = 1e-6) -> LdaModel:
    """Fit the discriminant model.

    Raises DataError when a class has fewer than 2 samples, when the
    within-class scatter is singular at lam=0, or when class means
    coincide (no discriminant direction exists).
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"features must be 2D, got shape {x.shape}")
    if lam < 0:
        raise ValueError(f"regularization must be >= 0, got {lam}")
    classes, index_sets = _class_partition(labels)
    if len(classes) < 2:
        raise DataError(f"need at least 2 classes, got {len(classes)}")
    for c, idx in zip(classes, index_sets):
        if idx.size < 2:
            raise DataError(f"class {c!r} has {idx.size} sample(s); need at least 2")

    n_features = x.shape[1]
    overall_mean = x.mean(axis=0)
    class_means = np.vstack([x[idx].mean(axis=0) for idx in index_sets])

    scatter_within = np.zeros((n_features, n_features))
    for mean_c, idx in zip(class_means, index_sets):
        centered = x[idx] - mean_c
        scatter_within += centered.T @ centered
    scatter_within[np.diag_indices_from(scatter_within)] += lam

    scatter_between = np.zeros((n_features, n_features))
    for mean_c, idx in zip(class_means, index_sets):
        diff = mean_c - overall_mean
        scatter_between += idx.size * np.outer(diff, diff)

    try:
        np.linalg.cholesky(scatter_within)
    except np.linalg.LinAlgError:
        raise DataError(
            "within-class scatter is singular; refit with regularization lam > 0"
        ) from None

    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(scatter_between, scatter_within)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"generalized eigenproblem failed: {exc}") from exc

    n_directions = min(len(classes) - 1, n_features)
    order = np.argsort(eigenvalues)[::-1][:n_directions]
    top = eigenvalues[order]
    tol = 1e-12 * max(1.0, float(np.trace(scatter_between)))
    if np.all(top <= tol):
        raise DataError("degenerate model: class means coincide, no class separation")

    projection = eigenvectors[:, order].copy()
    for col in projection.T:
        pivot = col[np.argmax(np.abs(col))]
        if pivot < 0:
            col *= -1.0

    centroids = class_means @ projection
    return LdaModel(projection=projection, centroids=centroids,
                    labels=tuple(classes), lam=float(lam))


def predict(model: LdaModel, vector: np.ndarray):
    """Label of the nearest projected centroid; ties go to the first label."""
    v = np.asarray(vector, dtype=np.float64)
    if v.ndim != 1 or v.size != model.projection.shape[0]:
        raise ValueError(
            f"vector length {v.shape} does not match model dimension "
            f"{model.projection.shape[0]}"
        )
    z = v @ model.projection
    distances = np.linalg.norm(model.centroids - z, axis=1)
    return model.labels[int(np.argmin(distances))]


def predict_batch(model: LdaModel, features: np.ndarray) -> list:
    x = np.asarray(features, dtype=np.float64)
    z = x @ model.projection
    distances = np.linalg.norm(z[:, None, :] - model.centroids[None, :, :], axis=2)
    return [model.labels[i] for i in np.argmin(distances, axis=1)]


def stratified_folds(labels, n_folds: int, seed: int = 0) -> list[np.ndarray]:
    """Shuffled round-robin fold assignment, stratified per class."""
    classes, index_sets = _class_partition(labels)
    min_class = min(idx.size for idx in index_sets)
    if min_class < n_folds:
        warnings.warn(
            f"smallest class has {min_class} samples; reducing folds "
            f"from {n_folds} to {min_class}"
        )
        n_folds = min_class
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    for idx in index_sets:
        shuffled = idx[rng.permutation(idx.size)]
        for position, sample in enumerate(shuffled):
            folds[position % n_folds].append(int(sample))
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


def cross_validate_lambda(features: np.ndarray, labels, grid=DEFAULT_LAMBDA_GRID,
                          n_folds: int = 5, seed: int = 0) -> float:
    """Pick the regularization with the best stratified CV accuracy.

    Ties resolve to the larger lambda. A lambda whose fit fails on some
    fold scores 0 on that fold.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    x = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    folds = stratified_folds(labels, n_folds, seed)
    best_lam, best_acc = None, -1.0
    for lam in sorted(grid):
        accuracies = []
        for held_out in folds:
            train = np.setdiff1d(np.arange(x.shape[0]), held_out)
            try:
                model = fit_lda(x[train], labels[train], lam)
            except (DataError, NumericalError):
                accuracies.append(0.0)
                continue
            predictions = predict_batch(model, x[held_out])
            accuracies.append(float(np.mean(predictions == labels[held_out])))
        accuracy = float(np.mean(accuracies))
        if accuracy >= best_acc:  # >= prefers the larger lambda on ties
            best_lam, best_acc = lam, accuracy
    return float(best_lam)
