"""Benchmark harness: the multi-run one-class evaluation protocol.

Each run draws a fresh 50/50 target split, fits z-score stats on the
training targets, trains one classifier variant, and scores the held-out
targets plus every outlier. Hyperparameter selection, when requested,
happens on run 0 only and the chosen values are reused for the remaining
runs. Training wall-clock covers the final model fit only, never the
selection scan, and is reported through an optional sink so written
outputs stay byte-deterministic under a fixed seed.

Variant ids form a closed list of 15 (boundary/reconstruction x
offline random/offline kernel/online x applicable threshold rules);
thr3 exists only for reconstruction families. Random-feature ids accept
an optional _sig/_rbf suffix picking the hidden node type.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from . import modelsel
from .dataset import Dataset, SplitPlan, occ_split, zscore_apply, zscore_fit
from .errors import AllPointsIdentical, MissingLabels, NoOutliers
from .featuremap import (
    ADDITIVE_SIGMOID,
    NODE_TYPES,
    RBF_NODE,
    KernelSpec,
    hidden_init,
    linear_kernel,
    polynomial_kernel,
    rbf_kernel,
    wavelet_kernel,
)
from .metrics import EvalReport, aggregate, confuse, measures
from .modelsel import C_GRID, SelectionConfig, SelectionDiagnostics, sigma_grid
from .offline import (
    BOUNDARY,
    RECONSTRUCTION,
    _rows,
    score,
    train_boundary,
    train_reconstruction,
)
from .online import os_finalize, os_init, os_score, os_update
from .threshold import ThresholdSpec

KERNEL_ENGINE = "kernel"
RANDOM_ENGINE = "random"
ONLINE_ENGINE = "online"

HIDDEN_GRID = (20, 50, 100, 200)
DEFAULT_DEGREE = 2

# layer/fold seed streams, kept distinct from the split streams inside
# occ_split by the trailing constant
_LAYER_STREAM = 7
_FOLD_STREAM = 11
_SELECT_LAYER_STREAM = 13


@dataclass(frozen=True)
class Variant:
    """One row of the closed variant list."""

    vid: str
    base: str
    family: str
    engine: str
    tkind: str

    @property
    def label(self) -> str:
        return self.tkind.capitalize()


def _build_variants() -> dict[str, Variant]:
    table = [
        ("ocelm", "OCELM", BOUNDARY, RANDOM_ENGINE, ("thr1", "thr2")),
        ("ockelm", "OCKELM", BOUNDARY, KERNEL_ENGINE, ("thr1", "thr2")),
        ("aaelm", "AAELM", RECONSTRUCTION, RANDOM_ENGINE, ("thr1", "thr2", "thr3")),
        ("aakelm", "AAKELM", RECONSTRUCTION, KERNEL_ENGINE, ("thr1", "thr2", "thr3")),
        ("os_ocelm", "OS-OCELM", BOUNDARY, ONLINE_ENGINE, ("thr1", "thr2")),
        ("os_aaelm", "OS-AAELM", RECONSTRUCTION, ONLINE_ENGINE, ("thr1", "thr2", "thr3")),
    ]
    out: dict[str, Variant] = {}
    for stem, base, family, engine, kinds in table:
        for tkind in kinds:
            vid = f"{stem}_{tkind}"
            out[vid] = Variant(vid, base, family, engine, tkind)
    return out


VARIANTS: dict[str, Variant] = _build_variants()
VARIANT_IDS: tuple[str, ...] = tuple(VARIANTS)

_NODE_SUFFIXES = {"_sig": ADDITIVE_SIGMOID, "_rbf": RBF_NODE}


def parse_variant(text: str, node_type: str | None = None) -> tuple[Variant, str]:
    """Resolve a variant id, honoring an optional _sig/_rbf suffix.

    Returns the variant and the hidden node type to use (suffix wins over
    the default; a suffix conflicting with an explicit node_type is an
    error). Unknown ids raise KeyError.
    """
    vid = text.lower()
    suffix_type = None
    for suffix, kind in _NODE_SUFFIXES.items():
        stem = vid[: -len(suffix)]
        if vid.endswith(suffix) and stem in VARIANTS:
            if VARIANTS[stem].engine == KERNEL_ENGINE:
                raise KeyError(f"{text!r}: kernel variants take no node suffix")
            vid, suffix_type = stem, kind
            break
    if vid not in VARIANTS:
        raise KeyError(f"unknown variant id {text!r}")
    if node_type is not None and node_type not in NODE_TYPES:
        raise KeyError(f"unknown node type {node_type!r}")
    if suffix_type is not None and node_type is not None and suffix_type != node_type:
        raise KeyError(f"{text!r} conflicts with node type {node_type!r}")
    return VARIANTS[vid], suffix_type or node_type or ADDITIVE_SIGMOID


def classifier_name(variant: Variant, node_type: str, kernel_kind: str) -> str:
    """Classifier column text: base name plus a parenthetical for
    non-default mappings (RBF hidden nodes, non-rbf kernels)."""
    if variant.engine == KERNEL_ENGINE:
        return variant.base if kernel_kind == "rbf" else f"{variant.base}({kernel_kind})"
    return variant.base if node_type == ADDITIVE_SIGMOID else f"{variant.base}(RBF)"


def display_name(variant: Variant, node_type: str, kernel_kind: str) -> str:
    """Table-style name, e.g. AAKELM_Thr1 or OS-AAELM_Thr1(RBF)."""
    name = classifier_name(variant, node_type, kernel_kind)
    if "(" in name:
        base, suffix = name.split("(", 1)
        return f"{base}_{variant.label}({suffix}"
    return f"{name}_{variant.label}"


def median_pairwise(X) -> float:
    """Median nonzero pairwise distance; the no-selection kernel width."""
    d = pdist(_rows(X))
    d = d[d > 0]
    if d.size == 0:
        raise AllPointsIdentical("all rows coincide; no nonzero distance")
    return float(np.median(d))


def _mapping_from(
    engine: str, kernel_kind: str, params: dict, node_type: str, layer_seed
) -> KernelSpec:
    if engine == RANDOM_ENGINE:
        m = int(params["m"])
        return KernelSpec(RANDOM_ENGINE, m=m, node_type=node_type)
    if kernel_kind == "rbf":
        return rbf_kernel(float(params["sigma"]))
    if kernel_kind == "linear":
        return linear_kernel()
    if kernel_kind == "polynomial":
        return polynomial_kernel(int(params["degree"]))
    if kernel_kind == "wavelet":
        b_w = float(params["b_w"])
        return wavelet_kernel(1.0, b_w, b_w**2)
    raise ValueError(f"unknown kernel kind {kernel_kind!r}")


def default_params(
    engine: str,
    kernel_kind: str,
    Xz,
    kern_par: float | None = None,
    c_reg: float | None = None,
    hidden: int | None = None,
) -> dict:
    """Parameters used when selection is off: explicit values win, the
    kernel width falls back to the median pairwise distance of the run's
    normalized training targets, C to 1, the hidden width to 100."""
    C = 1.0 if c_reg is None else float(c_reg)
    if engine == KERNEL_ENGINE:
        if kernel_kind == "linear":
            return {"C": C}
        if kernel_kind == "polynomial":
            degree = DEFAULT_DEGREE if kern_par is None else int(kern_par)
            return {"degree": degree, "C": C}
        width = median_pairwise(Xz) if kern_par is None else float(kern_par)
        key = "sigma" if kernel_kind == "rbf" else "b_w"
        return {key: width, "C": C}
    rows = _rows(Xz)
    if engine == ONLINE_ENGINE:
        m = min(100, rows.shape[0]) if hidden is None else int(hidden)
        return {"m": m}
    return {"m": 100 if hidden is None else int(hidden), "C": C}


def _capped_hidden_grid(cap: int) -> list[int]:
    return sorted({min(v, cap) for v in HIDDEN_GRID if min(v, cap) >= 1})


def selection_grids(variant: Variant, kernel_kind: str, Xz, folds: int) -> dict:
    """Grid per engine: kernel widths x C, capped hidden widths x C, or
    capped hidden widths alone for the online engine."""
    rows = _rows(Xz)
    N = rows.shape[0]
    if variant.engine == KERNEL_ENGINE:
        if kernel_kind == "rbf":
            return {"sigma": [float(s) for s in sigma_grid(rows)], "C": list(C_GRID)}
        if kernel_kind == "linear":
            return {"C": list(C_GRID)}
        if kernel_kind == "polynomial":
            return {"degree": [2, 3], "C": list(C_GRID)}
        if kernel_kind == "wavelet":
            return {"b_w": [float(s) for s in sigma_grid(rows)], "C": list(C_GRID)}
        raise ValueError(f"unknown kernel kind {kernel_kind!r}")
    if variant.engine == ONLINE_ENGINE:
        largest_fold = (N + folds - 1) // folds
        return {"m": _capped_hidden_grid(N - largest_fold)}
    return {"m": _capped_hidden_grid(N), "C": list(C_GRID)}


def _train_online_model(
    rows,
    m: int,
    node_type: str,
    family: str,
    tspec: ThresholdSpec,
    fracrej: float | None,
    layer_seed,
    zstats=None,
    n0: int | None = None,
    block: int | None = None,
):
    raw = _rows(rows)
    N, n = raw.shape
    layer = hidden_init(node_type, m, n, layer_seed)
    step = max(m, N // 10)
    n0v = min(N, step if n0 is None else int(n0))
    blockv = step if block is None else int(block)
    model = os_init(
        family, layer, raw[:n0v], zstats=zstats, retain_data=True, block=blockv
    )
    for start in range(n0v, N, blockv):
        os_update(model, raw[start : start + blockv])
    return os_finalize(model, tspec, fracrej)


def _fold_trainer(
    variant: Variant,
    kernel_kind: str,
    node_type: str,
    tspec: ThresholdSpec,
    fracrej: float,
    seed: int,
):
    """Trainer closure for the selection scan; operates on already
    normalized rows (identity stats inside)."""

    def trainer(params: dict, train_rows):
        if variant.engine == ONLINE_ENGINE:
            model = _train_online_model(
                train_rows,
                int(params["m"]),
                node_type,
                variant.family,
                tspec,
                fracrej,
                layer_seed=[seed, 0, _SELECT_LAYER_STREAM, int(params["m"])],
            )
            return lambda rows: np.array(
                [d.is_target for d in os_score(model, rows)], dtype=bool
            )
        layer_seed = [seed, 0, _SELECT_LAYER_STREAM, int(params.get("m", 0))]
        mapping = _mapping_from(
            variant.engine, kernel_kind, params, node_type, layer_seed
        )
        train_fn = (
            train_boundary if variant.family == BOUNDARY else train_reconstruction
        )
        model = train_fn(
            train_rows, mapping, float(params["C"]), tspec, fracrej, seed=layer_seed
        )
        return lambda rows: np.array(
            [d.is_target for d in score(model, rows)], dtype=bool
        )

    return trainer


@dataclass
class BenchResult:
    """Everything one benchmark invocation produced."""

    dataset_name: str
    variant: Variant
    node_type: str
    kernel_kind: str
    report: EvalReport
    run_reports: list[EvalReport]
    train_seconds: list[float]
    run_params: list[dict]
    selection: SelectionDiagnostics | None = None

    @property
    def classifier(self) -> str:
        return classifier_name(self.variant, self.node_type, self.kernel_kind)

    @property
    def display(self) -> str:
        return display_name(self.variant, self.node_type, self.kernel_kind)

    def report_row(self) -> dict:
        return {
            "dataset": self.dataset_name,
            "classifier": self.classifier,
            "variant": self.variant.label,
            "report": self.report,
        }


def run_benchmark(
    data: Dataset,
    variant_id: str,
    *,
    dataset_name: str = "data",
    runs: int = 20,
    seed: int = 0,
    fracrej: float = 0.1,
    kernel_kind: str = "rbf",
    node_type: str | None = None,
    select_params: bool = False,
    folds: int = 5,
    sigma_thr: float = 2.0,
    kern_par: float | None = None,
    c_reg: float | None = None,
    hidden: int | None = None,
    n0: int | None = None,
    block: int | None = None,
    time_sink=None,
) -> BenchResult:
    """Run the full protocol for one variant and return the aggregate.

    data must carry labels with at least one outlier; runs repeats the
    split/train/score cycle with run-indexed seed streams. time_sink, when
    given, receives one human-readable line per run with the training
    wall-clock (selection excluded).
    """
    variant, node_type = parse_variant(variant_id, node_type)
    if data.labels is None:
        raise MissingLabels("benchmarking needs labeled data")
    if bool(np.all(data.labels)):
        raise NoOutliers("benchmarking needs at least one outlier row")
    if runs < 1:
        raise ValueError("runs must be >= 1")

    plan = SplitPlan(run_count=runs, target_train_fraction=0.5, rng_seed=seed)
    tspec = ThresholdSpec(kind=variant.tkind, fracrej=fracrej)
    chosen: dict | None = None
    diagnostics: SelectionDiagnostics | None = None
    run_reports: list[EvalReport] = []
    train_seconds: list[float] = []
    run_params: list[dict] = []

    for r in range(runs):
        train, test = occ_split(data, plan, r)
        zstats = zscore_fit(train)
        Xz = zscore_apply(train, zstats).samples

        if r == 0 and select_params:
            grids = selection_grids(variant, kernel_kind, Xz, folds)
            cfg = SelectionConfig(
                grids,
                folds=folds,
                sigma_thr=sigma_thr,
                fracrej=fracrej,
                rng_seed=[seed, 0, _FOLD_STREAM],
            )
            trainer = _fold_trainer(
                variant, kernel_kind, node_type, tspec, fracrej, seed
            )
            chosen, diagnostics = modelsel.select(trainer, Xz, cfg)

        if chosen is not None:
            params = dict(chosen)
        else:
            params = default_params(
                variant.engine, kernel_kind, Xz, kern_par, c_reg, hidden
            )
        run_params.append(dict(params))

        layer_seed = [seed, r, _LAYER_STREAM]
        if variant.engine == ONLINE_ENGINE:
            start = time.perf_counter()
            model = _train_online_model(
                train.samples,
                int(params["m"]),
                node_type,
                variant.family,
                tspec,
                fracrej,
                layer_seed,
                zstats=zstats,
                n0=n0,
                block=block,
            )
            elapsed = time.perf_counter() - start
            decisions = os_score(model, test.samples)
        else:
            mapping = _mapping_from(
                variant.engine, kernel_kind, params, node_type, layer_seed
            )
            train_fn = (
                train_boundary
                if variant.family == BOUNDARY
                else train_reconstruction
            )
            start = time.perf_counter()
            model = train_fn(
                train,
                mapping,
                float(params["C"]),
                tspec,
                fracrej,
                seed=layer_seed,
                zstats=zstats,
            )
            elapsed = time.perf_counter() - start
            decisions = score(model, test.samples)

        train_seconds.append(elapsed)
        run_reports.append(measures(confuse(decisions, test.labels)))
        if time_sink is not None:
            time_sink(f"run {r}: train {elapsed:.4f}s")

    return BenchResult(
        dataset_name=dataset_name,
        variant=variant,
        node_type=node_type,
        kernel_kind=kernel_kind,
        report=aggregate(run_reports),
        run_reports=run_reports,
        train_seconds=train_seconds,
        run_params=run_params,
        selection=diagnostics,
    )
