import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_label, random_detection_fixture
from oracles import interp_grid, oracle_ap_from_records, oracle_evaluate
from mono3daug.errors import (
    EmptySplit,
    IdMismatch,
    MissingClass,
    MissingScore,
    ZeroFrequency,
)
from mono3daug.eval import (
    CLASSES,
    KITTI_DIFFICULTIES,
    MatchStatus,
    R11,
    R40,
    average_precision,
    class_frequencies,
    difficulty_filter,
    evaluate,
    evaluate_dirs,
    icfw_map,
    icfw_weights,
    match_detections,
    mean_ap,
    pr_curve,
    validate_rules,
)
from mono3daug.eval.difficulty import EASY, HARD, MODERATE
from mono3daug.geometry import iou_2d_labels, iou_3d_labels, iou_bev_labels
from mono3daug.kitti_io import write_label_file

TP, FP, IGN = MatchStatus.TP, MatchStatus.FP, MatchStatus.IGNORED


def gt(cls="Car", box=(0, 0, 50, 50), **kw):
    return make_label(cls=cls, box=box, **kw)


def pred(cls="Car", box=(0, 0, 50, 50), score=0.5, **kw):
    return make_label(cls=cls, box=box, score=score, **kw)


class TestDifficultyFilter:
    def test_visible_tall_car_counted_as_easy(self):
        counted, ignored = difficulty_filter([gt(box=(0, 0, 40, 50))], EASY)
        assert len(counted) == 1 and not ignored

    def test_dontcare_always_ignored(self):
        for rule in KITTI_DIFFICULTIES:
            counted, ignored = difficulty_filter(
                [gt(cls="DontCare", box=(0, 0, 90, 90))], rule
            )
            assert not counted and len(ignored) == 1

    def test_thirty_pixel_box_easy_vs_moderate(self):
        labels = [gt(box=(0, 0, 30, 30))]
        counted_e, ignored_e = difficulty_filter(labels, EASY)
        counted_m, _ = difficulty_filter(labels, MODERATE)
        assert not counted_e and len(ignored_e) == 1
        assert len(counted_m) == 1

    def test_occlusion_and_truncation_thresholds(self):
        occluded = gt(box=(0, 0, 50, 50), occ=2)
        truncated = gt(box=(0, 0, 50, 50), trunc=0.4)
        assert not difficulty_filter([occluded], EASY)[0]
        assert not difficulty_filter([occluded], MODERATE)[0]
        assert difficulty_filter([occluded], HARD)[0]
        assert not difficulty_filter([truncated], MODERATE)[0]
        assert difficulty_filter([truncated], HARD)[0]

    def test_rule_monotonicity_validation(self):
        validate_rules(KITTI_DIFFICULTIES)
        with pytest.raises(ValueError):
            validate_rules([MODERATE, EASY])


class TestMatching:
    def test_single_perfect_match(self):
        results, fn = match_detections([gt()], [], [pred(score=0.9)], iou_2d_labels, 0.5)
        assert [s for _, s in results] == [TP] and fn == 0

    def test_single_use_of_ground_truth(self):
        preds = [pred(score=0.9), pred(score=0.8)]
        results, fn = match_detections([gt()], [], preds, iou_2d_labels, 0.5)
        assert [s for _, s in results] == [TP, FP] and fn == 0

    def test_ignored_absorbs_without_tp_or_fp(self):
        ignored = [gt(box=(0, 0, 30, 30))]  # fails the easy height bar elsewhere
        results, fn = match_detections(
            [], ignored, [pred(box=(0, 0, 30, 30))], iou_2d_labels, 0.5
        )
        assert [s for _, s in results] == [IGN] and fn == 0

    def test_ignored_also_matched_once(self):
        ignored = [gt(box=(0, 0, 30, 30))]
        preds = [pred(box=(0, 0, 30, 30), score=0.9), pred(box=(0, 0, 30, 30), score=0.8)]
        results, _ = match_detections([], ignored, preds, iou_2d_labels, 0.5)
        assert [s for _, s in results] == [IGN, FP]

    def test_highest_iou_candidate_wins(self):
        gts = [gt(box=(0, 0, 10, 10)), gt(box=(2, 2, 12, 12))]
        p = pred(box=(2, 2, 12, 12), score=0.9)
        results, fn = match_detections(gts, [], [p], iou_2d_labels, 0.3)
        assert results[0][1] == TP and fn == 1

    def test_score_order_with_ties_is_input_order(self):
        gts = [gt()]
        preds = [pred(score=0.5, box=(100, 100, 150, 150)), pred(score=0.5)]
        results, _ = match_detections(gts, [], preds, iou_2d_labels, 0.5)
        assert [s for _, s in results] == [FP, TP]

    def test_missing_score_raises(self):
        with pytest.raises(MissingScore):
            match_detections([gt()], [], [make_label()], iou_2d_labels, 0.5)

    def test_fn_counts_unmatched(self):
        results, fn = match_detections([gt(), gt(box=(60, 60, 90, 90))], [], [], iou_2d_labels, 0.5)
        assert results == [] and fn == 2


class TestAveragePrecision:
    def test_perfect_detector(self):
        assert average_precision([TP, TP, TP], 3, R40) == 1.0
        assert average_precision([TP, TP, TP], 3, R11) == 1.0

    def test_no_predictions(self):
        assert average_precision([], 5, R40) == 0.0

    def test_no_ground_truth_flagged_zero(self):
        assert average_precision([FP], 0, R40) == 0.0

    def test_known_three_prediction_curve(self):
        statuses = [TP, FP, TP]
        assert average_precision(statuses, 2, R11) == pytest.approx(28 / 33, abs=1e-12)
        assert average_precision(statuses, 2, R40) == pytest.approx(5 / 6, abs=1e-12)

    def test_matches_prefix_recount_oracle(self):
        rs = np.random.default_rng(0)
        for _ in range(200):
            n = int(rs.integers(0, 12))
            statuses = [
                (TP, "tp") if flip else (FP, "fp")
                for flip in rs.integers(0, 2, size=n)
            ]
            tp_count = sum(1 for s, _ in statuses if s is TP)
            positives = tp_count + int(rs.integers(0, 4))
            for mode in (R11, R40):
                got = average_precision([s for s, _ in statuses], positives, mode)
                want = oracle_ap_from_records(
                    [tag for _, tag in statuses], positives, interp_grid(mode)
                )
                assert got == pytest.approx(want, abs=1e-12)

    def test_ignored_statuses_do_not_affect_curve(self):
        assert average_precision([TP, IGN, FP, IGN, TP], 2, R40) == average_precision(
            [TP, FP, TP], 2, R40
        )

    def test_recall_monotone_in_curve(self):
        curve = pr_curve([TP, FP, TP, FP, TP], 5)
        assert list(curve.recalls) == sorted(curve.recalls)

    def test_prepending_high_scored_tp_never_decreases_ap(self):
        rs = np.random.default_rng(1)
        for _ in range(300):
            n = int(rs.integers(0, 10))
            statuses = [TP if flip else FP for flip in rs.integers(0, 2, size=n)]
            positives = sum(1 for s in statuses if s is TP) + int(rs.integers(0, 3))
            for mode in (R11, R40):
                before = average_precision(statuses, positives, mode)
                after = average_precision([TP] + statuses, positives + 1, mode)
                assert after >= before - 1e-15

    @pytest.mark.parametrize("scale", [0.5, 3.7, 1000.0])
    def test_ap_invariant_to_uniform_score_rescale(self, scale):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        rs = np.random.default_rng(9)
        preds = {
            fid: [replace(p, score=float(rs.uniform(0.1, 1.0))) for p in labs]
            for fid, labs in preds.items()
        }
        rescaled = {
            fid: [replace(p, score=p.score * scale) for p in labs]
            for fid, labs in preds.items()
        }
        base = evaluate(frames, preds)
        scaled = evaluate(frames, rescaled)
        for key, cell in base.cells.items():
            assert scaled.cells[key].ap == cell.ap


class TestClassAggregates:
    def test_mean_ap_simple(self):
        assert mean_ap({"Car": 0.10, "Pedestrian": 0.20, "Cyclist": 0.30}) == pytest.approx(0.20, abs=1e-12)

    def test_mean_ap_all_equal(self):
        assert mean_ap({c: 0.4321 for c in CLASSES}) == pytest.approx(0.4321, abs=1e-12)

    def test_mean_ap_fixture_value(self):
        aps = {"Car": 0.30, "Pedestrian": 0.328, "Cyclist": 0.35}
        assert mean_ap(aps) == pytest.approx(0.326, abs=1e-9)

    def test_mean_ap_missing_class(self):
        with pytest.raises(MissingClass):
            mean_ap({"Car": 0.5, "Pedestrian": 0.5})

    def test_frequencies_from_counts(self):
        frames = [[gt()] * 68 + [gt(cls="Pedestrian")] * 26 + [gt(cls="Cyclist")] * 7]
        freq = class_frequencies(frames, KITTI_DIFFICULTIES)
        easy = freq["easy"]
        assert easy["Car"] == pytest.approx(68 / 101)
        assert easy["Pedestrian"] == pytest.approx(26 / 101)
        assert easy["Cyclist"] == pytest.approx(7 / 101)
        assert math.fsum(easy.values()) == pytest.approx(1.0, abs=1e-12)

    def test_frequencies_exclude_other_classes_and_dontcare(self):
        frames = [[gt(), gt(cls="Van"), gt(cls="DontCare", box=(0, 0, 50, 50))]]
        freq = class_frequencies(frames, [EASY])
        assert freq["easy"]["Car"] == 1.0

    def test_single_class_split(self):
        freq = class_frequencies([[gt()]], [EASY])
        assert freq["easy"] == {"Car": 1.0, "Pedestrian": 0.0, "Cyclist": 0.0}
        with pytest.raises(ZeroFrequency):
            icfw_weights(freq["easy"])

    def test_equal_counts_uniform(self):
        frames = [[gt(), gt(cls="Pedestrian"), gt(cls="Cyclist")]]
        freq = class_frequencies(frames, [EASY])["easy"]
        assert freq == {c: pytest.approx(1 / 3) for c in CLASSES}

    def test_empty_split(self):
        with pytest.raises(EmptySplit):
            class_frequencies([], [EASY])
        with pytest.raises(EmptySplit):
            class_frequencies([[gt(box=(0, 0, 10, 10))]], [EASY])  # too short to count

    def test_weights_for_published_style_mix(self):
        w = icfw_weights({"Car": 0.68, "Pedestrian": 0.26, "Cyclist": 0.07})
        assert w["Car"] == pytest.approx(0.075021, abs=1e-6)
        assert w["Pedestrian"] == pytest.approx(0.196208, abs=1e-6)
        assert w["Cyclist"] == pytest.approx(0.728772, abs=1e-6)
        assert math.fsum(w.values()) == pytest.approx(1.0, abs=1e-12)

    def test_weights_derived_example(self):
        w = icfw_weights({"Car": 0.80, "Pedestrian": 0.16, "Cyclist": 0.04})
        assert w["Car"] == pytest.approx(0.038462, abs=1e-6)
        assert w["Pedestrian"] == pytest.approx(0.192308, abs=1e-6)
        assert w["Cyclist"] == pytest.approx(0.769231, abs=1e-6)

    def test_uniform_frequencies_give_uniform_weights(self):
        w = icfw_weights({c: 1 / 3 for c in CLASSES})
        assert all(v == pytest.approx(1 / 3, abs=1e-12) for v in w.values())

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.01, 0.98), st.floats(0.01, 0.98), st.floats(1e-6, 1e6))
    def test_weights_scale_invariant(self, a, b, k):
        c = max(0.01, 1.0 - a - b)
        base = {"Car": a, "Pedestrian": b, "Cyclist": c}
        scaled = {cls: k * f for cls, f in base.items()}
        w1 = icfw_weights(base)
        w2 = icfw_weights(scaled)
        for cls in CLASSES:
            assert w1[cls] == pytest.approx(w2[cls], abs=1e-12)

    def test_icfw_map_uniform_equals_mean_exactly(self):
        aps = {"Car": 0.1234, "Pedestrian": 0.777, "Cyclist": 0.333}
        uniform = {c: 1 / 3 for c in CLASSES}
        assert icfw_map(aps, uniform) == mean_ap(aps)

    def test_icfw_map_degenerate_weight(self):
        aps = {"Car": 0.9, "Pedestrian": 0.5, "Cyclist": 0.1}
        w = {"Car": 0.0, "Pedestrian": 0.0, "Cyclist": 1.0}
        assert icfw_map(aps, w) == pytest.approx(0.1, abs=1e-12)

    def test_icfw_map_dot_product_value(self):
        aps = {"Car": 10.0, "Pedestrian": 20.0, "Cyclist": 30.0}
        w = {"Car": 0.075, "Pedestrian": 0.196, "Cyclist": 0.729}
        assert icfw_map(aps, w) == pytest.approx(26.54, abs=1e-6)

    def test_icfw_map_missing_class(self):
        with pytest.raises(MissingClass):
            icfw_map({"Car": 1.0}, {c: 1 / 3 for c in CLASSES})


def _full_coverage_frames():
    """Two frames with every class counted at every difficulty."""
    frames = {
        "000000": [
            gt(box=(0, 0, 60, 60)),
            gt(cls="Pedestrian", box=(70, 0, 100, 55)),
            gt(cls="Cyclist", box=(110, 0, 150, 48), loc=(4.0, 1.6, 12.0)),
            gt(cls="DontCare", box=(200, 0, 230, 30), dims=(-1, -1, -1), occ=-1),
        ],
        "000001": [
            gt(box=(10, 10, 80, 70), loc=(-3.0, 1.7, 15.0)),
            gt(cls="Pedestrian", box=(90, 5, 120, 60), loc=(2.0, 1.6, 9.0)),
            gt(cls="Cyclist", box=(130, 5, 170, 50), loc=(-5.0, 1.6, 20.0)),
        ],
    }
    return frames


def _perfect_preds(frames):
    return {
        fid: [replace(lab, score=1.0) for lab in labs if lab.class_name != "DontCare"]
        for fid, labs in frames.items()
    }


class TestEvaluate:
    def test_perfect_detector_all_ones(self):
        frames = _full_coverage_frames()
        report = evaluate(frames, _perfect_preds(frames))
        for cell in report.cells.values():
            if cell.defined:
                assert cell.ap == 1.0
        for value in report.maps.values():
            assert value == 1.0
        for value in report.icfw_maps.values():
            assert value == 1.0

    def test_empty_predictions_all_zero(self):
        frames = _full_coverage_frames()
        report = evaluate(frames, {fid: [] for fid in frames})
        assert all(cell.ap == 0.0 for cell in report.cells.values())

    def test_id_mismatch(self):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        del preds["000001"]
        with pytest.raises(IdMismatch):
            evaluate(frames, preds)
        preds = _perfect_preds(frames)
        preds["999999"] = []
        with pytest.raises(IdMismatch):
            evaluate(frames, preds)

    def test_missing_score_surfaces(self):
        frames = _full_coverage_frames()
        preds = {fid: [replace(lab, score=None) for lab in labs]
                 for fid, labs in _perfect_preds(frames).items()}
        with pytest.raises(MissingScore):
            evaluate(frames, preds)

    def test_pred_over_dontcare_absorbed_in_3d_metric(self):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        # a spurious detection exactly over the DontCare region: 3D geometry
        # of the region is sentinel, so absorption must use the 2D boxes
        preds["000000"] = preds["000000"] + [
            pred(box=(200, 0, 230, 30), score=0.99, loc=(50.0, 1.7, 90.0))
        ]
        report = evaluate(frames, preds)
        for value in report.maps.values():
            assert value == 1.0

    def test_high_scored_spurious_fp_lowers_ap(self):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        # an FP ranked above every TP drags interpolated precision down;
        # one ranked below full recall would not
        preds["000000"] = preds["000000"] + [pred(box=(300, 100, 340, 140), score=2.0)]
        report = evaluate(frames, preds)
        assert report.ap("Car", "easy", "3d") < 1.0

    def test_threshold_override_changes_cells(self):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        report = evaluate(frames, preds, class_thresholds={"Car": 0.5})
        assert report.cells[("Car", "easy", "3d")].threshold == 0.5
        assert report.thresholds["Pedestrian"] == 0.25

    def test_report_consistency_recompute(self):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        report = evaluate(frames, preds)
        for (diff, metric), stored in report.maps.items():
            recomputed_map, recomputed_icfw = report.recompute_summary(diff, metric)
            assert stored == recomputed_map
            assert report.icfw_maps[(diff, metric)] == recomputed_icfw

    def test_records_and_json(self):
        frames = _full_coverage_frames()
        report = evaluate(frames, _perfect_preds(frames))
        records = report.to_records()
        kinds = {r["kind"] for r in records}
        assert kinds == {"ap", "map", "icfw_map", "class_stats"}
        ap_records = [r for r in records if r["kind"] == "ap"]
        assert len(ap_records) == 3 * 3 * 2  # class x difficulty x metric
        parsed = json.loads(report.to_json())
        assert parsed["records"]

    def test_text_table_shape(self):
        frames = _full_coverage_frames()
        text = evaluate(frames, _perfect_preds(frames)).to_text()
        assert "AP_3d" in text and "AP_bev" in text
        assert "mAP" in text and "ICFW mAP" in text
        assert "100.00" in text


class TestEvaluateAgainstOracle:
    @pytest.mark.parametrize("mode", [R11, R40])
    def test_matches_brute_force_reference(self, mode):
        rs = np.random.default_rng(42)
        thresholds = {"Car": 0.7, "Pedestrian": 0.25, "Cyclist": 0.25}
        for trial in range(5):
            gt_by_id, pred_by_id = random_detection_fixture(rs)
            report = evaluate(gt_by_id, pred_by_id, interp=mode)
            want = oracle_evaluate(
                gt_by_id, pred_by_id, CLASSES, thresholds, KITTI_DIFFICULTIES,
                {"3d": iou_3d_labels, "bev": iou_bev_labels}, mode,
            )
            for key, expected in want.items():
                assert report.cells[key].ap == pytest.approx(expected, abs=1e-9), key


class TestEvaluateDirs:
    def test_round_trip_through_files(self, tmp_path):
        frames = _full_coverage_frames()
        preds = _perfect_preds(frames)
        (tmp_path / "gt").mkdir()
        (tmp_path / "pred").mkdir()
        for fid, labs in frames.items():
            write_label_file(tmp_path / "gt" / f"{fid}.txt", labs)
        for fid, labs in preds.items():
            write_label_file(tmp_path / "pred" / f"{fid}.txt", labs)
        report = evaluate_dirs(tmp_path / "gt", tmp_path / "pred")
        assert all(v == 1.0 for v in report.maps.values())

    def test_empty_gt_dir(self, tmp_path):
        (tmp_path / "gt").mkdir()
        (tmp_path / "pred").mkdir()
        with pytest.raises(EmptySplit):
            evaluate_dirs(tmp_path / "gt", tmp_path / "pred")
