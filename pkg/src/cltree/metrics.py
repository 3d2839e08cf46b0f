"""Distances, prototypes, dispersion and the relative-error measure.

The distance is a weighted Euclidean metric over a fixed list of numeric
dimensions, with per-dimension normalization statistics frozen from the
training set.  Dimensions missing in either operand are skipped and the
squared sum is rescaled by |dims| / |defined dims| so distances stay
comparable under missing data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .dataset import MISSING, Dataset, Example


class MetricError(ValueError):
    """Distance machinery misuse (empty cluster, bad spec, ...)."""


class DistanceUndefined(MetricError):
    """Raised when two operands share no defined dimension."""


class REUndefined(MetricError):
    """Relative error with zero baseline error but nonzero prediction error."""


@dataclass(frozen=True)
class DistanceSpec:
    """Which dimensions enter the distance, and how they are scaled.

    ``offsets``/``scales`` are the frozen normalization statistics; they
    must be set (via :meth:`freeze`) before any distance is computed,
    except under ``normalization="none"`` where they are the identity.
    """

    dims: tuple[int, ...]
    weights: tuple[float, ...] | None = None
    normalization: str = "none"  # none | minmax | zscore
    offsets: tuple[float, ...] | None = None
    scales: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.dims:
            raise MetricError("distance spec needs at least one dimension")
        if self.normalization not in ("none", "minmax", "zscore"):
            raise MetricError(f"unknown normalization {self.normalization!r}")
        if self.weights is not None:
            if len(self.weights) != len(self.dims):
                raise MetricError("one weight per dimension required")
            if any(w <= 0 for w in self.weights):
                raise MetricError("weights must be positive")

    @property
    def is_frozen(self) -> bool:
        return self.normalization == "none" or self.offsets is not None

    def freeze(self, ds: Dataset, ids: Sequence[int] | None = None) -> "DistanceSpec":
        """Freeze normalization statistics from the given training examples."""
        for j in self.dims:
            if ds.schema[j].kind != "numeric":
                raise MetricError(
                    f"dimension {ds.schema[j].name!r} is {ds.schema[j].kind}; encode nominals first"
                )
        if self.normalization == "none":
            return replace(self, offsets=(0.0,) * len(self.dims), scales=(1.0,) * len(self.dims))
        ids = range(len(ds)) if ids is None else ids
        offsets, scales = [], []
        for j in self.dims:
            col = [float(ds.examples[i].values[j]) for i in ids if ds.examples[i].values[j] is not MISSING]
            if not col:
                offsets.append(0.0)
                scales.append(1.0)
            elif self.normalization == "minmax":
                lo, hi = min(col), max(col)
                offsets.append(lo)
                scales.append(hi - lo if hi > lo else 1.0)
            else:
                mean = sum(col) / len(col)
                var = sum((x - mean) ** 2 for x in col) / len(col)
                offsets.append(mean)
                scales.append(math.sqrt(var) if var > 0 else 1.0)
        return replace(self, offsets=tuple(offsets), scales=tuple(scales))

    def weight_array(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(len(self.dims))
        return np.asarray(self.weights, dtype=float)

    def describe(self, schema=None) -> str:
        names = ",".join(
            schema[j].name if schema is not None else str(j) for j in self.dims
        )
        weights = ",".join("%g" % w for w in self.weight_array())
        return f"dims={names} weights={weights} norm={self.normalization}"


@dataclass(frozen=True)
class Prototype:
    """Per-dimension mean of a cluster; a partial example description.

    ``means`` aligns with the distance spec's dims and holds None where
    no member had a defined cell (support 0); distances skip those
    dimensions.
    """

    means: tuple
    support: tuple[int, ...]

    def defined(self) -> tuple[bool, ...]:
        return tuple(s > 0 for s in self.support)


@dataclass(frozen=True)
class SplitStatistics:
    """Sufficient statistics of one binary split, for scoring and stopping."""

    n: int
    ss: float
    ss_l: float
    ss_r: float
    inter_distance: float
    score: float
    proto_l: Prototype
    proto_r: Prototype
    f: float | None = None  # filled when n >= 3


# ---------------------------------------------------------------------------
# Array plumbing.  All heavy computation works on (n, d) float matrices with
# NaN in undefined cells, in normalized space.


def _require_frozen(spec: DistanceSpec):
    if not spec.is_frozen:
        raise MetricError("normalization statistics not frozen; call spec.freeze() first")


def _offsets_scales(spec: DistanceSpec):
    if spec.offsets is None:
        d = len(spec.dims)
        return np.zeros(d), np.ones(d)
    return np.asarray(spec.offsets, dtype=float), np.asarray(spec.scales, dtype=float)


def _operand_row(x, spec: DistanceSpec) -> np.ndarray:
    """Raw-space row over spec.dims with NaN where undefined."""
    if isinstance(x, Prototype):
        return np.array(
            [float(m) if s > 0 else np.nan for m, s in zip(x.means, x.support)], dtype=float
        )
    return np.array(
        [np.nan if x.values[j] is MISSING else float(x.values[j]) for j in spec.dims], dtype=float
    )


def raw_matrix(cluster: Sequence[Example], spec: DistanceSpec) -> np.ndarray:
    return np.array([_operand_row(e, spec) for e in cluster], dtype=float).reshape(
        len(cluster), len(spec.dims)
    )


def _normalize(matrix: np.ndarray, spec: DistanceSpec) -> np.ndarray:
    offsets, scales = _offsets_scales(spec)
    return (matrix - offsets) / scales


def _masked_means(normed: np.ndarray):
    """Column means ignoring NaN; (means with NaN at support 0, support)."""
    defined = ~np.isnan(normed)
    support = defined.sum(axis=0)
    with np.errstate(invalid="ignore"):
        sums = np.where(defined, normed, 0.0).sum(axis=0)
        means = np.where(support > 0, sums / np.maximum(support, 1), np.nan)
    return means, support


def _row_sq_distances(normed: np.ndarray, center: np.ndarray, weights: np.ndarray):
    """Squared rescaled distance of each row to ``center``.

    Rows sharing no defined dimension with the center get NaN, which the
    caller must either reject (public API) or skip (induction policy).
    """
    d = normed.shape[1]
    common = ~np.isnan(normed) & ~np.isnan(center)
    k = common.sum(axis=1)
    diffs = np.where(common, normed - center, 0.0)
    sq = (weights * diffs * diffs).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(k > 0, sq * (d / np.maximum(k, 1)), np.nan)
    return out


def cluster_dispersion(normed: np.ndarray, weights: np.ndarray):
    """(sum of squared member-to-mean distances, means, support).

    Members with no dimension in common with the prototype contribute
    nothing; they carry no information about the cluster's spread.
    """
    means, support = _masked_means(normed)
    if normed.shape[0] == 0:
        return 0.0, means, support
    sq = _row_sq_distances(normed, means, weights)
    return float(np.nansum(sq)), means, support


# ---------------------------------------------------------------------------
# Public operations


def distance(a, b, spec: DistanceSpec) -> float:
    """Weighted Euclidean distance between examples and/or prototypes.

    Only dimensions defined in both operands enter; the squared sum is
    rescaled by |dims| / |defined dims|.
    """
    _require_frozen(spec)
    ra = _normalize(_operand_row(a, spec), spec)
    rb = _normalize(_operand_row(b, spec), spec)
    common = ~np.isnan(ra) & ~np.isnan(rb)
    k = int(common.sum())
    if k == 0:
        raise DistanceUndefined("operands share no defined dimension")
    w = spec.weight_array()
    diff = ra[common] - rb[common]
    return math.sqrt(float((w[common] * diff * diff).sum()) * len(spec.dims) / k)


def prototype(cluster: Sequence[Example], spec: DistanceSpec) -> Prototype:
    """Per-dimension mean over non-MISSING cells, with support counts."""
    if not cluster:
        raise MetricError("prototype of an empty cluster")
    raw = raw_matrix(cluster, spec)
    means, support = _masked_means(raw)
    return Prototype(
        means=tuple(None if s == 0 else float(m) for m, s in zip(means, support)),
        support=tuple(int(s) for s in support),
    )


def cluster_distance(c1: Sequence[Example], c2: Sequence[Example], spec: DistanceSpec) -> float:
    """Distance between the prototypes of two clusters."""
    if not c1 or not c2:
        raise MetricError("cluster_distance of an empty cluster")
    return distance(prototype(c1, spec), prototype(c2, spec), spec)


def sum_squares(cluster: Sequence[Example], spec: DistanceSpec) -> float:
    """Sum of squared member-to-prototype distances."""
    proto = prototype(cluster, spec)
    return sum(distance(e, proto, spec) ** 2 for e in cluster)


def relative_error(actuals, predictions, baseline: Prototype, spec: DistanceSpec) -> float:
    """Prediction error normalized by the predict-the-prototype baseline.

    1.0 means the predictions are no better than always answering the
    training prototype; 0/0 is defined as 0 (perfectly predicted
    constant data should not error).
    """
    if len(actuals) != len(predictions) or not actuals:
        raise MetricError("need one prediction per actual, at least one pair")
    num = sum(distance(e, p, spec) ** 2 for e, p in zip(actuals, predictions))
    den = sum(distance(e, baseline, spec) ** 2 for e in actuals)
    if den == 0.0:
        if num == 0.0:
            return 0.0
        raise REUndefined("baseline error is zero but predictions differ")
    return num / den
