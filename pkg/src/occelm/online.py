"""Online sequential one-class classifiers (boundary and reconstruction).

An OnlineModel is built from an initial chunk (os_init, which needs
N0 >= m), grown chunk-by-chunk with os_update, then closed with
os_finalize, which fits the threshold and freezes the model for scoring.
The sequential path is intentionally unregularized.

Threshold fitting defaults to recomputing every retained training row's
error under the final weights; constructing with retain_data=False keeps
only the running per-chunk errors instead (streaming-pure, at the cost of
thresholds reflecting interim weights).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, ZScoreStats, identity_stats, zscore_apply
from .errors import (
    AlreadyFinalized,
    DimensionMismatch,
    NotFinalized,
    Thr3NotApplicable,
    TooFewSamples,
)
from .featuremap import HiddenLayer, hidden_apply
from .linsolve import RlsState, rls_init, rls_update
from .offline import BOUNDARY, RECONSTRUCTION, _rows
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


@dataclass
class OnlineModel:
    """Sequentially trained classifier state.

    Single-writer: os_update/os_finalize mutate in place and must be
    serialized externally; once finalized the model is immutable and may
    be scored concurrently.
    """

    family: str
    layer: HiddenLayer
    rls: RlsState
    R: float
    zstats: ZScoreStats
    seen_count: int
    n0: int
    block: int
    retain: bool
    train_errors: list[float] = field(default_factory=list)
    retained_rows: list[np.ndarray] = field(default_factory=list)
    tspec: ThresholdSpec | None = None
    thresh: float | None = None

    @property
    def finalized(self) -> bool:
        return self.tspec is not None

    @property
    def feature_count(self) -> int:
        return self.layer.n


def _canonical_errors(model_family: str, O: np.ndarray, T: np.ndarray, R: float) -> np.ndarray:
    """Per-sample base error: |o - R| for boundary, sum((x - o)^2) for
    reconstruction. thr2 boundary squares the base at fit time."""
    if model_family == BOUNDARY:
        return np.abs(O.ravel() - R)
    return ((T - O) ** 2).sum(axis=1)


def os_init(
    family: str,
    layer: HiddenLayer,
    X0,
    R: float = 1.0,
    zstats: ZScoreStats | None = None,
    retain_data: bool = True,
    block: int | None = None,
) -> OnlineModel:
    """Initialization phase on the first chunk (N0 >= layer.m rows)."""
    if family not in (BOUNDARY, RECONSTRUCTION):
        raise ValueError(f"family must be {BOUNDARY!r} or {RECONSTRUCTION!r}")
    raw = _rows(X0)
    if zstats is None:
        zstats = identity_stats(raw.shape[1])
    if raw.shape[1] != zstats.feature_count:
        raise DimensionMismatch("X0 feature count does not match zstats")
    Xs = zscore_apply(Dataset(raw), zstats).samples
    H0 = hidden_apply(layer, Xs)
    T0 = np.full((Xs.shape[0], 1), float(R)) if family == BOUNDARY else Xs
    rls = rls_init(H0, T0)
    model = OnlineModel(
        family=family,
        layer=layer,
        rls=rls,
        R=float(R),
        zstats=zstats,
        seen_count=Xs.shape[0],
        n0=Xs.shape[0],
        block=block or Xs.shape[0],
        retain=retain_data,
    )
    errors = _canonical_errors(family, H0 @ rls.beta, T0, model.R)
    model.train_errors.extend(errors.tolist())
    if retain_data:
        model.retained_rows.append(Xs)
    return model


def os_update(model: OnlineModel, Xc) -> OnlineModel:
    """Sequential phase: fold one chunk (size >= 1) into the weights."""
    if model.finalized:
        raise AlreadyFinalized("no updates after finalize")
    raw = _rows(Xc)
    if raw.shape[1] != model.feature_count:
        raise DimensionMismatch(
            f"chunk has {raw.shape[1]} features, model expects "
            f"{model.feature_count}"
        )
    Xs = zscore_apply(Dataset(raw), model.zstats).samples
    Hc = hidden_apply(model.layer, Xs)
    Tc = np.full((Xs.shape[0], 1), model.R) if model.family == BOUNDARY else Xs
    model.rls = rls_update(model.rls, Hc, Tc)
    model.seen_count += Xs.shape[0]
    errors = _canonical_errors(model.family, Hc @ model.rls.beta, Tc, model.R)
    model.train_errors.extend(errors.tolist())
    if model.retain:
        model.retained_rows.append(Xs)
    return model


def _threshold_errors(model: OnlineModel, base: np.ndarray, kind: str) -> np.ndarray:
    if model.family == BOUNDARY and kind == THR2:
        return base**2
    return base


def os_finalize(
    model: OnlineModel, tspec: ThresholdSpec, fracrej: float | None = None
) -> OnlineModel:
    """Fit the threshold and freeze the model.

    With retained rows the per-sample errors are recomputed under the
    final weights; otherwise the running per-chunk errors are used.
    """
    if model.finalized:
        raise AlreadyFinalized("finalize may run once")
    if model.seen_count < 2:
        raise TooFewSamples("finalize needs at least 2 seen samples")
    if model.family == BOUNDARY and tspec.kind == THR3:
        raise Thr3NotApplicable(
            "thr3 needs per-feature outputs; boundary models have one"
        )
    if model.retain:
        Xs = np.vstack(model.retained_rows)
        H = hidden_apply(model.layer, Xs)
        T = (
            np.full((Xs.shape[0], 1), model.R)
            if model.family == BOUNDARY
            else Xs
        )
        base = _canonical_errors(model.family, H @ model.rls.beta, T, model.R)
        model.train_errors = base.tolist()
    else:
        base = np.asarray(model.train_errors)

    use_fracrej = tspec.fracrej if fracrej is None else fracrej
    if tspec.kind == THR1:
        model.thresh = thr1_fit(_threshold_errors(model, base, THR1), use_fracrej)
    elif tspec.kind == THR2:
        model.thresh = thr2_fit(_threshold_errors(model, base, THR2), tspec.std_mult)
    else:
        model.thresh = float("nan")
    model.tspec = tspec
    return model


def os_score(model: OnlineModel, Y) -> list[Decision]:
    """Score rows (original feature space) against the finalized model."""
    if not model.finalized:
        raise NotFinalized("call os_finalize before scoring")
    raw = _rows(Y)
    if raw.shape[1] != model.feature_count:
        raise DimensionMismatch(
            f"rows have {raw.shape[1]} features, model expects "
            f"{model.feature_count}"
        )
    Ys = zscore_apply(Dataset(raw), model.zstats).samples
    O = hidden_apply(model.layer, Ys) @ model.rls.beta
    tspec = model.tspec
    if model.family == BOUNDARY:
        dev = np.abs(O.ravel() - model.R)
        errors = dev if tspec.kind == THR1 else dev**2
        return [apply_threshold(e, model.thresh) for e in errors]
    if tspec.kind == THR3:
        return [
            thr3_decide(Ys[i], O[i], tspec.condn1, tspec.condn2_frac)
            for i in range(Ys.shape[0])
        ]
    errors = ((Ys - O) ** 2).sum(axis=1)
    return [apply_threshold(e, model.thresh) for e in errors]
