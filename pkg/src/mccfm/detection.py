"""Single-class detection matching: boxes in, TP/FP/FN out.

True negatives are never produced.  Every box that was neither predicted
nor annotated is a true negative, and there are unboundedly many of them.
"""
from __future__ import annotations

import json
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Sequence

from mccfm.metrics import MetricReport, PartialCounts, metric_report


@dataclass(frozen=True)
class BBox:
    x_min: Fraction
    y_min: Fraction
    x_max: Fraction
    y_max: Fraction

    def __post_init__(self) -> None:
        for name in ("x_min", "y_min", "x_max", "y_max"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"box has no positive area: {self}")

    @property
    def area(self) -> Fraction:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


@dataclass(frozen=True)
class Detection:
    box: BBox
    score: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "score", Fraction(self.score))
        if not 0 <= self.score <= 1:
            raise ValueError(f"score must lie in [0, 1], got {self.score}")


@dataclass(frozen=True)
class MatchResult:
    tp: int
    fp: int
    fn: int
    pairs: tuple[tuple[int, int], ...] = field(default=())

    @property
    def counts(self) -> PartialCounts:
        return PartialCounts(self.tp, self.fp, self.fn)


def iou(a: BBox, b: BBox) -> Fraction:
    w = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    h = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if w <= 0 or h <= 0:
        return Fraction(0)
    inter = w * h
    return inter / (a.area + b.area - inter)


def _check_threshold(iou_threshold) -> Fraction:
    t = Fraction(iou_threshold)
    if not 0 < t <= 1:
        raise ValueError(f"IoU threshold must satisfy 0 < t <= 1, got {t}")
    return t


def greedy_match(preds: Sequence[Detection], gts: Sequence[BBox], iou_threshold) -> MatchResult:
    """Score-descending one-to-one matching.

    Predictions are visited by descending score (ties: lower input index
    first); each takes the still-unmatched ground truth of highest IoU, if
    that IoU reaches the threshold (ties: lower ground-truth index).
    """
    threshold = _check_threshold(iou_threshold)
    order = sorted(range(len(preds)), key=lambda i: (-preds[i].score, i))
    taken = [False] * len(gts)
    pairs = []
    for pi in order:
        best, best_iou = None, threshold
        for gi, gt in enumerate(gts):
            if taken[gi]:
                continue
            overlap = iou(preds[pi].box, gt)
            if overlap >= best_iou and (best is None or overlap > best_iou):
                best, best_iou = gi, overlap
        if best is not None:
            taken[best] = True
            pairs.append((pi, best))
    tp = len(pairs)
    return MatchResult(tp=tp, fp=len(preds) - tp, fn=len(gts) - tp, pairs=tuple(pairs))


def evaluate_detections(preds: Sequence[Detection], gts: Sequence[BBox], iou_threshold) -> MetricReport:
    return metric_report(greedy_match(preds, gts, iou_threshold).counts)


# -- multi-image documents ----------------------------------------------------


class DetectionInputError(ValueError):
    """Malformed detection document; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass
class Dataset:
    ground_truth: "OrderedDict[Hashable, list[BBox]]"
    predictions: "OrderedDict[Hashable, list[Detection]]"

    def image_ids(self) -> list[Hashable]:
        ids = list(self.ground_truth)
        ids += [i for i in self.predictions if i not in self.ground_truth]
        return ids


def _exact(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction, str)):
        raise DetectionInputError(f"{where}: expected a decimal number, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise DetectionInputError(f"{where}: not a decimal number: {value!r}") from None


def _box(value: Any, where: str) -> BBox:
    if not isinstance(value, list) or len(value) != 4:
        raise DetectionInputError(f"{where}: box must be a list [x_min, y_min, x_max, y_max]")
    coords = [_exact(v, f"{where}[{k}]") for k, v in enumerate(value)]
    try:
        return BBox(*coords)
    except ValueError as exc:
        raise DetectionInputError(f"{where}: {exc}") from None


def _image_id(entry: dict, where: str) -> Hashable:
    if "image_id" not in entry:
        raise DetectionInputError(f"{where}: missing 'image_id'")
    image_id = entry["image_id"]
    if not isinstance(image_id, (str, int)) or isinstance(image_id, bool):
        raise DetectionInputError(f"{where}: image_id must be a string or integer")
    return image_id


def parse_dataset(text: str) -> Dataset:
    """Parse a detection document.

    Numbers are read from their source text as exact rationals (no binary
    floating point), whether written as JSON numbers or as strings.
    """
    try:
        doc = json.loads(text, parse_float=Fraction, object_pairs_hook=OrderedDict)
    except json.JSONDecodeError as exc:
        raise DetectionInputError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise DetectionInputError("top level must be an object")
    for key in ("ground_truth", "predictions"):
        if not isinstance(doc.get(key), list):
            raise DetectionInputError(f"'{key}' must be a list")

    gts: OrderedDict[Hashable, list[BBox]] = OrderedDict()
    for k, entry in enumerate(doc["ground_truth"]):
        where = f"ground_truth[{k}]"
        if not isinstance(entry, dict):
            raise DetectionInputError(f"{where}: expected an object")
        image_id = _image_id(entry, where)
        gts.setdefault(image_id, []).append(_box(entry.get("box"), f"{where}.box"))

    preds: OrderedDict[Hashable, list[Detection]] = OrderedDict()
    for k, entry in enumerate(doc["predictions"]):
        where = f"predictions[{k}]"
        if not isinstance(entry, dict):
            raise DetectionInputError(f"{where}: expected an object")
        image_id = _image_id(entry, where)
        box = _box(entry.get("box"), f"{where}.box")
        if "score" not in entry:
            raise DetectionInputError(f"{where}: missing 'score'")
        score = _exact(entry["score"], f"{where}.score")
        try:
            det = Detection(box, score)
        except ValueError as exc:
            raise DetectionInputError(f"{where}: {exc}") from None
        preds.setdefault(image_id, []).append(det)
    return Dataset(gts, preds)


def evaluate_dataset(dataset: Dataset, iou_threshold) -> tuple[PartialCounts, MetricReport]:
    """Match each image separately, then pool the counts (micro-averaging)."""
    threshold = _check_threshold(iou_threshold)
    tp = fp = fn = 0
    for image_id in dataset.image_ids():
        r = greedy_match(dataset.predictions.get(image_id, []), dataset.ground_truth.get(image_id, []), threshold)
        tp, fp, fn = tp + r.tp, fp + r.fp, fn + r.fn
    counts = PartialCounts(tp, fp, fn)
    return counts, metric_report(counts)
