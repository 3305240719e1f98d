"""Insertion and deletion curves and their areas."""

import numpy as np
import pytest

from eac.bundle import predict
from eac.coalition import Coalition
from eac.concepts import complete_with_background
from eac.curves import Curve, auc, deletion_curve, insertion_curve
from eac.masking import apply_coalition
from eac.synth import three_rects


@pytest.fixture(scope="module")
def case(toy_bundle):
    image, cs3 = three_rects()
    cs = complete_with_background(cs3)
    target = int(np.argmax(predict(toy_bundle, image)))
    return toy_bundle, image, cs, target


class TestCurveShape:
    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            Curve(np.zeros(3), np.zeros(4), "insertion")

    def test_two_dimensional_rejected(self):
        with pytest.raises(ValueError):
            Curve(np.zeros((2, 2)), np.zeros((2, 2)), "insertion")


class TestAuc:
    def test_constant_curve(self):
        c = Curve(np.linspace(0, 1, 5), np.full(5, 0.4), "insertion")
        assert auc(c) == pytest.approx(0.4)

    def test_linear_ramp(self):
        c = Curve(np.linspace(0, 1, 11), np.linspace(0, 1, 11), "insertion")
        assert auc(c) == pytest.approx(0.5)

    def test_three_point_hand_value(self):
        # trapezoids: (0.1 + 0.5) / 2 * 0.5 + (0.5 + 1.0) / 2 * 0.5 = 0.525
        c = Curve(np.array([0.0, 0.5, 1.0]), np.array([0.1, 0.5, 1.0]), "insertion")
        assert auc(c) == pytest.approx(0.525)

    def test_duplicate_x_contributes_zero_width(self):
        c = Curve(np.array([0.0, 0.5, 0.5, 1.0]), np.array([0.2, 0.2, 0.9, 0.9]), "insertion")
        assert auc(c) == pytest.approx(0.5 * 0.2 + 0.5 * 0.9)


class TestInsertion:
    def test_endpoints_and_length(self, case, fill):
        bundle, image, cs, target = case
        curve = insertion_curve(bundle, image, cs, [1, 0, 2, 3], target, fill)
        assert curve.kind == "insertion"
        assert curve.x.shape == (cs.n + 1,)
        np.testing.assert_allclose(curve.x, [0.0, 0.25, 0.5, 0.75, 1.0])
        empty_score = predict(bundle, apply_coalition(image, cs, Coalition.empty(cs.n), fill))
        assert curve.y[0] == pytest.approx(float(empty_score[target]))
        assert curve.y[-1] == pytest.approx(float(predict(bundle, image)[target]))

    def test_scores_follow_direct_model(self, case, fill):
        bundle, image, cs, target = case
        ranking = [2, 3, 0, 1]
        curve = insertion_curve(bundle, image, cs, ranking, target, fill)
        bits = 0
        for step, cid in enumerate(ranking, start=1):
            bits |= 1 << cid
            masked = apply_coalition(image, cs, Coalition(bits, cs.n), fill)
            assert curve.y[step] == pytest.approx(float(predict(bundle, masked)[target]))

    def test_partial_ranking_allowed(self, case, fill):
        bundle, image, cs, target = case
        curve = insertion_curve(bundle, image, cs, [1], target, fill)
        assert curve.x.shape == (2,)
        np.testing.assert_allclose(curve.x, [0.0, 1.0])

    def test_empty_ranking_rejected(self, case, fill):
        bundle, image, cs, target = case
        with pytest.raises(ValueError):
            insertion_curve(bundle, image, cs, [], target, fill)

    def test_pixel_axis_tracks_revealed_area(self, case, fill):
        bundle, image, cs, target = case
        curve = insertion_curve(bundle, image, cs, [0, 1, 2, 3], target, fill, pixel_axis=True)
        # areas: left 256, right 256, bar 768, background completes to 4096
        np.testing.assert_allclose(
            curve.x, [0.0, 256 / 4096, 512 / 4096, 1280 / 4096, 1.0]
        )
        assert np.all(np.diff(curve.x) >= 0)


class TestDeletion:
    def test_endpoints(self, case, fill):
        bundle, image, cs, target = case
        curve = deletion_curve(bundle, image, cs, [3, 2, 1, 0], target, fill)
        assert curve.kind == "deletion"
        assert curve.y[0] == pytest.approx(float(predict(bundle, image)[target]))
        empty_score = predict(bundle, apply_coalition(image, cs, Coalition.empty(cs.n), fill))
        assert curve.y[-1] == pytest.approx(float(empty_score[target]))

    def test_concept_axis_runs_low_to_high(self, case, fill):
        bundle, image, cs, target = case
        curve = deletion_curve(bundle, image, cs, [0, 1, 2, 3], target, fill)
        np.testing.assert_allclose(curve.x, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_pixel_axis_tracks_removed_area(self, case, fill):
        bundle, image, cs, target = case
        curve = deletion_curve(bundle, image, cs, [0, 1, 2, 3], target, fill, pixel_axis=True)
        np.testing.assert_allclose(
            curve.x, [0.0, 256 / 4096, 512 / 4096, 1280 / 4096, 1.0]
        )
        assert np.all(np.diff(curve.x) >= 0)

    def test_mirrors_insertion_of_reversed_ranking(self, case, fill):
        # removing best first visits the same coalitions as revealing
        # worst first, in opposite order
        bundle, image, cs, target = case
        ranking = [1, 0, 2, 3]
        dele = deletion_curve(bundle, image, cs, ranking, target, fill)
        ins = insertion_curve(bundle, image, cs, ranking[::-1], target, fill)
        np.testing.assert_allclose(dele.y, ins.y[::-1], atol=1e-12)


class TestFaithfulRankingBeatsAdversarial:
    def test_on_synthetic_scene(self, case, fill):
        bundle, image, cs, target = case
        from eac.shapley import DirectUtility, exact_shapley

        u = DirectUtility(bundle, image, cs, fill, target)
        values = exact_shapley(u, cs.n).values
        best = [int(i) for i in np.argsort(-values)]
        worst = best[::-1]
        ins_best = auc(insertion_curve(bundle, image, cs, best, target, fill))
        ins_worst = auc(insertion_curve(bundle, image, cs, worst, target, fill))
        del_best = auc(deletion_curve(bundle, image, cs, best, target, fill))
        del_worst = auc(deletion_curve(bundle, image, cs, worst, target, fill))
        assert ins_best > ins_worst
        assert del_best < del_worst
