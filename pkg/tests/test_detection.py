import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mccfm.detection import (
    BBox,
    Detection,
    DetectionInputError,
    evaluate_dataset,
    evaluate_detections,
    greedy_match,
    iou,
    parse_dataset,
)
from mccfm.exact import Surd
from mccfm.metrics import NOT_COMPUTABLE


def unit(x, y=0):
    return BBox(x, y, x + 1, y + 1)


def cells(box):
    """Unit cells covered by a box with integer corners."""
    return {(i, j) for i in range(int(box.x_min), int(box.x_max)) for j in range(int(box.y_min), int(box.y_max))}


def cell_iou(a, b):
    ca, cb = cells(a), cells(b)
    return Fraction(len(ca & cb), len(ca | cb))


def oracle_match(preds, gts, threshold):
    """Greedy policy written independently: repeatedly pick the best remaining prediction."""
    remaining_preds = list(range(len(preds)))
    free_gts = set(range(len(gts)))
    tp = 0
    while remaining_preds:
        top = max(remaining_preds, key=lambda i: (preds[i].score, -i))
        remaining_preds.remove(top)
        candidates = [(cell_iou(preds[top].box, gts[g]), -g) for g in free_gts]
        candidates = [c for c in candidates if c[0] >= threshold]
        if candidates:
            free_gts.discard(-max(candidates)[1])
            tp += 1
    return tp, len(preds) - tp, len(gts) - tp


def random_box(rng):
    x0, y0 = rng.randint(0, 8), rng.randint(0, 8)
    return BBox(x0, y0, x0 + rng.randint(1, 4), y0 + rng.randint(1, 4))


def random_scene(rng):
    gts = [random_box(rng) for _ in range(rng.randint(0, 5))]
    preds = []
    for _ in range(rng.randint(0, 5)):
        if gts and rng.random() < 0.6:
            g = rng.choice(gts)
            box = BBox(g.x_min - rng.randint(0, 1), g.y_min - rng.randint(0, 1), g.x_max, g.y_max + rng.randint(0, 1))
        else:
            box = random_box(rng)
        preds.append(Detection(box, Fraction(rng.randint(0, 4), 4)))
    return preds, gts


def test_box_validation():
    with pytest.raises(ValueError):
        BBox(0, 0, 0, 1)
    with pytest.raises(ValueError):
        Detection(unit(0), Fraction(3, 2))


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (unit(0), unit(0), Fraction(1)),
        (unit(0), unit(5), Fraction(0)),
        (unit(0), BBox(Fraction(1, 2), 0, Fraction(3, 2), 1), Fraction(1, 3)),
        (unit(0), unit(1), Fraction(0)),
    ],
)
def test_iou(a, b, expected):
    assert iou(a, b) == expected == iou(b, a)


def test_iou_agrees_with_cell_counting():
    rng = random.Random(1)
    for _ in range(300):
        a, b = random_box(rng), random_box(rng)
        assert iou(a, b) == cell_iou(a, b)


box_strategy = st.tuples(
    st.fractions(0, 20, max_denominator=8), st.fractions(0, 20, max_denominator=8),
    st.fractions(Fraction(1, 8), 10, max_denominator=8), st.fractions(Fraction(1, 8), 10, max_denominator=8),
).map(lambda t: BBox(t[0], t[1], t[0] + t[2], t[1] + t[3]))


@given(box_strategy, box_strategy)
def test_iou_properties(a, b):
    assert iou(a, b) == iou(b, a)
    assert 0 <= iou(a, b) <= 1
    assert iou(a, a) == 1


def test_match_single_exact():
    r = greedy_match([Detection(unit(0), Fraction(9, 10))], [unit(0)], Fraction(1, 2))
    assert (r.tp, r.fp, r.fn, r.pairs) == (1, 0, 0, ((0, 0),))


def test_match_no_predictions():
    r = greedy_match([], [unit(0), unit(3)], Fraction(1, 2))
    assert (r.tp, r.fp, r.fn) == (0, 0, 2)


def test_higher_score_wins_competition():
    preds = [Detection(unit(0), Fraction(1, 2)), Detection(BBox(0, 0, 1, Fraction(11, 10)), Fraction(3, 4))]
    r = greedy_match(preds, [unit(0)], Fraction(1, 2))
    assert (r.tp, r.fp, r.fn) == (1, 1, 0)
    assert r.pairs == ((1, 0),)
    assert oracle_match(preds, [unit(0)], Fraction(1, 2)) == (1, 1, 0)


def test_ties_break_on_lower_index():
    preds = [Detection(unit(0), Fraction(1, 2)), Detection(unit(0), Fraction(1, 2))]
    r = greedy_match(preds, [unit(0), unit(0)], Fraction(1, 2))
    assert r.pairs == ((0, 0), (1, 1))


def test_threshold_is_inclusive_and_exact():
    # IoU exactly 1/3 meets a 1/3 threshold, no epsilon involved
    pred = [Detection(BBox(Fraction(1, 2), 0, Fraction(3, 2), 1), 1)]
    assert greedy_match(pred, [unit(0)], Fraction(1, 3)).tp == 1
    assert greedy_match(pred, [unit(0)], Fraction(1, 3) + Fraction(1, 10**30)).tp == 0


@pytest.mark.parametrize("threshold", [0, Fraction(-1, 2), Fraction(3, 2)])
def test_invalid_threshold(threshold):
    with pytest.raises(ValueError):
        greedy_match([], [], threshold)


def test_conservation_and_oracle_on_random_scenes():
    rng = random.Random(2024)
    for _ in range(300):
        preds, gts = random_scene(rng)
        threshold = Fraction(rng.choice([1, 2, 3]), 4)
        r = greedy_match(preds, gts, threshold)
        assert r.tp + r.fp == len(preds)
        assert r.tp + r.fn == len(gts)
        assert r.tp == len(r.pairs)
        assert len({p for p, _ in r.pairs}) == len({g for _, g in r.pairs}) == r.tp
        assert (r.tp, r.fp, r.fn) == oracle_match(preds, gts, threshold)


def test_permuting_equal_scores_keeps_counts():
    rng = random.Random(8)
    for _ in range(100):
        preds, gts = random_scene(rng)
        base = greedy_match(preds, gts, Fraction(1, 2))
        # random merge of the per-score groups: equal-score predictions keep their relative order
        groups = {}
        for p in preds:
            groups.setdefault(p.score, []).append(p)
        queues = list(groups.values())
        merged = []
        while queues:
            q = rng.choice(queues)
            merged.append(q.pop(0))
            queues = [q for q in queues if q]
        again = greedy_match(merged, gts, Fraction(1, 2))
        assert (again.tp, again.fp, again.fn) == (base.tp, base.fp, base.fn)
        assert sorted(g for _, g in again.pairs) == sorted(g for _, g in base.pairs)


def test_evaluate_detections():
    gts = [unit(0), unit(3), unit(6)]
    perfect = evaluate_detections([Detection(g, 1) for g in gts], gts, Fraction(1, 2))
    assert (perfect.ppv, perfect.tpr, perfect.f1, perfect.fm) == (1, 1, 1, Surd(1))
    assert perfect.mcc is NOT_COMPUTABLE

    mixed = evaluate_detections([Detection(unit(0), 1), Detection(unit(9), 1)], [unit(0), unit(3)], Fraction(1, 2))
    # counts (1, 1, 1): fm = 1/sqrt(2*2) = 1/2
    assert mixed.fm == Surd(Fraction(1, 2))
    assert mixed.f1 == Fraction(1, 2)

    empty = evaluate_detections([], [], Fraction(1, 2))
    assert (empty.ppv, empty.tpr, empty.f1, empty.fm) == (None,) * 4


def test_parse_dataset_is_exact():
    doc = {
        "ground_truth": [{"image_id": "a", "box": ["0.1", "0.2", "1.1", "1.2"]}],
        "predictions": [{"image_id": "a", "box": [0.1, 0.2, 1.1, 1.2], "score": "0.3"}],
    }
    ds = parse_dataset(json.dumps(doc))
    gt = ds.ground_truth["a"][0]
    assert gt.x_min == Fraction(1, 10)
    assert ds.predictions["a"][0].box == gt
    assert ds.predictions["a"][0].score == Fraction(3, 10)


@pytest.mark.parametrize(
    "text, line",
    [
        ('{"ground_truth": [}', 1),
        ('{\n "ground_truth": [],\n "predictions": [\n {"image_id": 1, "box": [0,0,1,1] "score": 1}]}', 4),
        ('{"ground_truth": []}', None),
        ('{"ground_truth": [{"image_id": 1, "box": [0,0,1]}], "predictions": []}', None),
        ('{"ground_truth": [{"image_id": 1, "box": [0,0,0,1]}], "predictions": []}', None),
        ('{"ground_truth": [], "predictions": [{"image_id": 1, "box": [0,0,1,1]}]}', None),
        ('{"ground_truth": [], "predictions": [{"image_id": 1, "box": [0,0,1,1], "score": "2"}]}', None),
        ('{"ground_truth": [{"box": [0,0,1,1]}], "predictions": []}', None),
        ('[1, 2]', None),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(DetectionInputError) as info:
        parse_dataset(text)
    assert info.value.line == line


def test_pooled_counts_match_recomputation():
    rng = random.Random(77)
    gt_entries, pred_entries = [], []
    expected = [0, 0, 0]
    for image in range(20):
        preds, gts = random_scene(rng)
        tp, fp, fn = oracle_match(preds, gts, Fraction(1, 2))
        expected = [expected[0] + tp, expected[1] + fp, expected[2] + fn]
        for g in gts:
            gt_entries.append({"image_id": image, "box": [str(v) for v in (g.x_min, g.y_min, g.x_max, g.y_max)]})
        for p in preds:
            b = p.box
            pred_entries.append({"image_id": image, "box": [str(v) for v in (b.x_min, b.y_min, b.x_max, b.y_max)],
                                 "score": str(p.score)})
    counts, report = evaluate_dataset(
        parse_dataset(json.dumps({"ground_truth": gt_entries, "predictions": pred_entries})), Fraction(1, 2)
    )
    assert [counts.tp, counts.fp, counts.fn] == expected
    tp, fp, fn = expected
    assert report.ppv == Fraction(tp, tp + fp)
    assert report.tpr == Fraction(tp, tp + fn)
    assert report.f1 == Fraction(2 * tp, 2 * tp + fp + fn)
    assert report.fm.square() == Fraction(tp * tp, (tp + fp) * (tp + fn))
