"""Offline one-class classifiers: boundary (constant-target) and
reconstruction (autoassociative) training plus scoring.

Training solves (Omega + I/C) beta = T on the Gram matrix of the training
rows; boundary models set T to a constant column R (default 1) and score
deviation from R, reconstruction models set T to the input itself and score
squared reconstruction error. Scoring unseen rows uses the cross matrix
K(test, train) @ beta, which requires storing the training basis (hidden
activations for the random mapping, raw rows for explicit kernels).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, ZScoreStats, identity_stats, zscore_apply
from .errors import DimensionMismatch, Thr3NotApplicable
from .featuremap import (
    KernelSpec,
    hidden_apply,
    hidden_init,
    kernel_gram,
    random_kernel_gram,
)
from .linsolve import solve_regularized
from .threshold import (
    THR1,
    THR2,
    THR3,
    Decision,
    ThresholdSpec,
    apply_threshold,
    thr1_fit,
    thr2_fit,
    thr3_decide,
)

BOUNDARY = "boundary"
RECONSTRUCTION = "reconstruction"

DEFAULT_HIDDEN = 100


def _rows(X) -> np.ndarray:
    if isinstance(X, Dataset):
        return X.samples
    return np.atleast_2d(np.asarray(X, dtype=float))


@dataclass
class OfflineModel:
    """Trained offline classifier; immutable once built, safe to score
    from many threads."""

    family: str
    mapping: KernelSpec
    basis: np.ndarray
    beta: np.ndarray
    C: float
    tspec: ThresholdSpec
    thresh: float
    R: float
    zstats: ZScoreStats
    train_errors: np.ndarray

    @property
    def feature_count(self) -> int:
        return self.zstats.feature_count


def _materialize(
    mapping: KernelSpec, n: int, seed
) -> tuple[KernelSpec, np.ndarray | None]:
    """Concretize a random mapping's hidden layer; explicit kernels pass
    through unchanged."""
    if mapping.kind != "random":
        return mapping, None
    layer = mapping.layer
    if layer is None:
        layer = hidden_init(mapping.node_type, mapping.m or DEFAULT_HIDDEN, n, seed)
    elif layer.n != n:
        raise DimensionMismatch(
            f"layer expects {layer.n} features, data has {n}"
        )
    return KernelSpec("random", layer=layer, m=layer.m, node_type=layer.node_type), layer


def _gram_and_basis(
    mapping: KernelSpec, Xs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    if mapping.kind == "random":
        H = hidden_apply(mapping.layer, Xs)
        return random_kernel_gram(H), H
    return kernel_gram(mapping, Xs, Xs), Xs


def _boundary_errors(O: np.ndarray, R: float, kind: str) -> np.ndarray:
    dev = O.ravel() - R
    return np.abs(dev) if kind == THR1 else dev**2


def _reconstruction_errors(Xs: np.ndarray, O: np.ndarray) -> np.ndarray:
    return ((Xs - O) ** 2).sum(axis=1)


def _fit_thresh(errors: np.ndarray, tspec: ThresholdSpec, fracrej: float) -> float:
    if tspec.kind == THR1:
        return thr1_fit(errors, fracrej)
    if tspec.kind == THR2:
        return thr2_fit(errors, tspec.std_mult)
    return float("nan")  # thr3 decides per sample at score time


def _train(
    family: str,
    X,
    mapping: KernelSpec,
    C: float,
    tspec: ThresholdSpec,
    fracrej: float | None,
    seed,
    R: float,
    zstats: ZScoreStats | None,
) -> OfflineModel:
    raw = _rows(X)
    n = raw.shape[1]
    if zstats is None:
        zstats = identity_stats(n)
    Xs = zscore_apply(Dataset(raw), zstats).samples
    mapping, _ = _materialize(mapping, n, seed)
    omega, basis = _gram_and_basis(mapping, Xs)

    if family == BOUNDARY:
        T = np.full((Xs.shape[0], 1), float(R))
    else:
        T = Xs
    # C-order so scoring is bitwise identical before and after save/load
    beta = np.ascontiguousarray(solve_regularized(omega, T, C))
    O = omega @ beta

    if family == BOUNDARY:
        errors = _boundary_errors(O, R, tspec.kind)
    else:
        errors = _reconstruction_errors(Xs, O)
    use_fracrej = tspec.fracrej if fracrej is None else fracrej
    thresh = _fit_thresh(errors, tspec, use_fracrej)
    return OfflineModel(
        family=family,
        mapping=mapping,
        basis=basis,
        beta=beta,
        C=float(C),
        tspec=tspec,
        thresh=thresh,
        R=float(R),
        zstats=zstats,
        train_errors=errors,
    )


def train_boundary(
    X,
    mapping: KernelSpec,
    C: float,
    tspec: ThresholdSpec,
    fracrej: float | None = None,
    seed=0,
    R: float = 1.0,
    zstats: ZScoreStats | None = None,
) -> OfflineModel:
    """Train a boundary model on target rows (constant output R).

    Thr1 scores |o - R|, Thr2 scores (o - R)^2, both exactly as fitted at
    training time; thr3 is rejected for this family.
    """
    if tspec.kind == THR3:
        raise Thr3NotApplicable(
            "thr3 needs per-feature outputs; boundary models have one"
        )
    return _train(BOUNDARY, X, mapping, C, tspec, fracrej, seed, R, zstats)


def train_reconstruction(
    X,
    mapping: KernelSpec,
    C: float,
    tspec: ThresholdSpec,
    fracrej: float | None = None,
    seed=0,
    zstats: ZScoreStats | None = None,
) -> OfflineModel:
    """Train an autoassociative model on target rows (outputs reconstruct
    the normalized inputs); accepts any threshold kind."""
    return _train(RECONSTRUCTION, X, mapping, C, tspec, fracrej, seed, 1.0, zstats)


def _cross_matrix(model: OfflineModel, Ys: np.ndarray) -> np.ndarray:
    if model.mapping.kind == "random":
        return hidden_apply(model.mapping.layer, Ys) @ model.basis.T
    return kernel_gram(model.mapping, Ys, model.basis)


def decide_rows(model: OfflineModel, Xs: np.ndarray, O: np.ndarray) -> list[Decision]:
    """Decisions for already-normalized rows and their raw outputs."""
    if model.family == BOUNDARY:
        errors = _boundary_errors(O, model.R, model.tspec.kind)
        return [apply_threshold(e, model.thresh) for e in errors]
    if model.tspec.kind == THR3:
        return [
            thr3_decide(
                Xs[i], O[i], model.tspec.condn1, model.tspec.condn2_frac
            )
            for i in range(Xs.shape[0])
        ]
    errors = _reconstruction_errors(Xs, O)
    return [apply_threshold(e, model.thresh) for e in errors]


def score(model: OfflineModel, Y) -> list[Decision]:
    """Score rows given in the original (pre-normalization) feature space."""
    raw = _rows(Y)
    if raw.shape[1] != model.feature_count:
        raise DimensionMismatch(
            f"rows have {raw.shape[1]} features, model expects "
            f"{model.feature_count}"
        )
    Ys = zscore_apply(Dataset(raw), model.zstats).samples
    O = _cross_matrix(model, Ys) @ model.beta
    return decide_rows(model, Ys, O)


def timed_train(trainer, *args, **kwargs) -> tuple[OfflineModel, float]:
    """Run an offline trainer and report wall-clock seconds alongside."""
    start = time.perf_counter()
    model = trainer(*args, **kwargs)
    return model, time.perf_counter() - start
