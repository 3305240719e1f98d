"""Acceptance gate: one numbered criterion per test, one printed verdict line each.

Every criterion prints ``[criterion N] PASS`` or ``FAIL`` with the measured
quantities, then asserts.  Criterion 10 is skipped (with a printed SKIP line)
until the exporter's artifacts are checked in.
"""

import hashlib
import json
import time
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest
from PIL import Image
from scipy.stats import kendalltau

from eac.bundle import builtin_toy_model, load_bundle, logits, predict
from eac.cli import EXIT_OK, main
from eac.coalition import Coalition
from eac.concepts import complete_with_background, decode_rle, encode_rle, load_concepts
from eac.curves import Curve, auc, deletion_curve, insertion_curve
from eac.explain import rank_concepts
from eac.masking import BaselineFill, utility_direct
from eac.pipeline import resolve_target
from eac.rand import Xorshift64Star, probe_image
from eac.shapley import (
    DirectUtility,
    SurrogateUtility,
    TableGame,
    exact_shapley,
    mc_shapley,
)
from eac.surrogate import PieConfig, sample_dataset, surrogate_predict, train_surrogate
from eac.synth import concept_set_from_bitmaps, random_scene, rect_mask

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'} {detail}", flush=True)
    assert ok, f"criterion {num}: {detail}"


def _fc_digest(weight: np.ndarray, bias: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(weight.tobytes())
    h.update(bias.tobytes())
    return h.hexdigest()


def test_criterion_01_shapley_axioms():
    t0 = time.perf_counter()
    n = 8
    worst = {"efficiency": 0.0, "dummy": 0.0, "symmetry": 0.0, "linearity": 0.0}
    for k in range(100):
        u = np.random.default_rng([1000, k]).uniform(0.0, 1.0, 1 << n)
        game = TableGame(u, n)
        values = exact_shapley(game, n).values
        gap = abs(values.sum() - (u[-1] - u[0]))
        worst["efficiency"] = max(worst["efficiency"], gap)

        # player 0 contributes the constant c to every coalition
        c = 0.25 + 0.5 * float(u[1])
        bits = np.arange(1 << n)
        dummy_table = u[: 1 << (n - 1)][bits >> 1] + c * (bits & 1)
        dummy_values = exact_shapley(TableGame(dummy_table, n), n).values
        worst["dummy"] = max(worst["dummy"], abs(dummy_values[0] - c))

        # players 0 and 1 are interchangeable: payoff depends on the rest of
        # the coalition and on how many of the pair are present
        lookup = u[: 3 << (n - 2)].reshape(1 << (n - 2), 3)
        pair = (bits & 1) + ((bits >> 1) & 1)
        sym_table = lookup[bits >> 2, pair]
        sym_values = exact_shapley(TableGame(sym_table, n), n).values
        worst["symmetry"] = max(worst["symmetry"], abs(sym_values[0] - sym_values[1]))

        u2 = np.random.default_rng([1001, k]).uniform(0.0, 1.0, 1 << n)
        v2 = exact_shapley(TableGame(u2, n), n).values
        v_sum = exact_shapley(TableGame(u + u2, n), n).values
        worst["linearity"] = max(worst["linearity"], np.abs(v_sum - values - v2).max())
    elapsed = time.perf_counter() - t0
    ok = (
        worst["efficiency"] < 1e-9
        and worst["dummy"] < 1e-12
        and worst["symmetry"] < 1e-9
        and worst["linearity"] < 1e-9
        and elapsed < 10.0
    )
    _verdict(
        1,
        ok,
        f"axioms on 100 games: efficiency {worst['efficiency']:.2e}, "
        f"dummy {worst['dummy']:.2e}, symmetry {worst['symmetry']:.2e}, "
        f"linearity {worst['linearity']:.2e}, {elapsed:.1f}s",
    )


def test_criterion_02_two_player_hand_oracle():
    game = TableGame(np.array([0.0, 0.6, 0.2, 1.0]), 2)
    values = exact_shapley(game, 2).values
    gap = np.abs(values - np.array([0.7, 0.3])).max()
    ok = gap <= 1e-15
    _verdict(2, ok, f"two-player values {values.tolist()}, gap {gap:.1e}")


def test_criterion_03_mc_estimator():
    t0 = time.perf_counter()
    n = 8
    game = TableGame(np.random.default_rng([5000]).uniform(0.0, 1.0, 1 << n), n)
    truth = exact_shapley(game, n).values

    covered = 0
    for seed in range(100):
        res = mc_shapley(game, n, num_samples=3200, seed=seed)
        if np.all(np.abs(res.values - truth) < 3.0 * res.stderr):
            covered += 1

    sq200, sq3200 = [], []
    for seed in range(200, 250):
        sq200.append((mc_shapley(game, n, num_samples=200, seed=seed).values - truth) ** 2)
        sq3200.append((mc_shapley(game, n, num_samples=3200, seed=seed).values - truth) ** 2)
    ratio = float(np.sqrt(np.mean(sq200) / np.mean(sq3200)))
    elapsed = time.perf_counter() - t0
    ok = covered >= 95 and 2.0 <= ratio <= 8.0 and elapsed < 60.0
    _verdict(
        3,
        ok,
        f"3-sigma coverage {covered}/100, rms ratio K=200/K=3200 = {ratio:.2f} "
        f"(target 4 within 2x), {elapsed:.1f}s",
    )


def test_criterion_04_surrogate_mechanics():
    bundle = builtin_toy_model(7, 4, 5)
    image = np.asarray(Image.open(FIXTURES / "three_rects.png").convert("RGB"))
    cs = complete_with_background(load_concepts(FIXTURES / "three_rects.json"))
    config = PieConfig(seed=0)
    digest_before = _fc_digest(bundle.fc_weight, bundle.fc_bias)
    samples = sample_dataset(bundle, image, cs, BaselineFill(), config)
    surr, report = train_surrogate(samples, bundle, "pie", config)
    digest_after = _fc_digest(bundle.fc_weight, bundle.fc_bias)
    digest_copy = _fc_digest(surr.fc_weight, surr.fc_bias)
    ok = (
        digest_before == digest_after == digest_copy
        and cs.n == 4
        and report.holdout_top1 >= 0.9
    )
    _verdict(
        4,
        ok,
        f"fc checksum stable {digest_before == digest_after == digest_copy}, "
        f"n={cs.n}, holdout top1 {report.holdout_top1:.3f} (floor 0.9)",
    )


def test_criterion_05_surrogate_speed():
    bundle = builtin_toy_model(7, 4, 5)
    side = 1024
    vals = Xorshift64Star(99).fill_pm1((side, side, 3))
    image = ((vals + 1.0) * 127.5).astype(np.uint8)
    bitmaps = [
        rect_mask(side, side, 100 * i, 100 * i + 300, 50 * i, 50 * i + 400)
        for i in range(6)
    ]
    cs = concept_set_from_bitmaps(bitmaps)
    fill = BaselineFill()
    target, _ = resolve_target(bundle, image, None)
    config = PieConfig(seed=3, num_samples=64, epochs=5)
    samples = sample_dataset(bundle, image, cs, fill, config)
    surr, _ = train_surrogate(samples, bundle, "pie", config)

    coalitions = [Coalition(int(b), cs.n) for b in np.random.default_rng(0).integers(0, 1 << cs.n, 100)]

    t0 = time.perf_counter()
    for i in range(10_000):
        surrogate_predict(surr, coalitions[i % 100])
    surrogate_seconds = time.perf_counter() - t0

    t0 = time.perf_counter()
    for s in coalitions:
        utility_direct(bundle, image, cs, s, target, fill)
    direct_seconds = time.perf_counter() - t0

    ok = surrogate_seconds < direct_seconds
    _verdict(
        5,
        ok,
        f"10000 surrogate calls {surrogate_seconds:.3f}s vs "
        f"100 direct calls {direct_seconds:.3f}s ({direct_seconds / surrogate_seconds:.1f}x)",
    )


@pytest.fixture(scope="module")
def ablation_cases():
    """Twenty synthetic scenes whose surrogates clear the fidelity floor.

    Candidate scenes are generated from a fixed seed sequence and kept when
    the pie-mode surrogate reaches holdout top-1 >= 0.9, so every criterion
    reading these cases sees the same deterministic collection.
    """
    bundle = builtin_toy_model(7, 4, 5)
    fill = BaselineFill()
    t0 = time.perf_counter()
    cases = []
    tried = 0
    while len(cases) < 20 and tried < 50:
        n = (6, 7, 8)[len(cases) % 3]
        image, cs = random_scene([6000, tried], n_concepts=n)
        config = PieConfig(seed=100 + tried, num_samples=400)
        samples = sample_dataset(bundle, image, cs, fill, config)
        surr, report = train_surrogate(samples, bundle, "pie", config)
        tried += 1
        if report.holdout_top1 < 0.9:
            continue
        target, _ = resolve_target(bundle, image, None)
        pie_values = exact_shapley(SurrogateUtility(surr, target), cs.n).values
        cases.append(
            SimpleNamespace(
                index=len(cases),
                image=image,
                cs=cs,
                config=config,
                samples=samples,
                target=target,
                pie_report=report,
                pie_values=pie_values,
            )
        )
    assert len(cases) == 20, f"only {len(cases)} of 20 fixtures cleared the floor"
    return SimpleNamespace(bundle=bundle, fill=fill, cases=cases,
                           build_seconds=time.perf_counter() - t0)


def test_criterion_06_faithfulness_direction(ablation_cases):
    t0 = time.perf_counter()
    bundle, fill = ablation_cases.bundle, ablation_cases.fill
    insertion_wins = deletion_wins = 0
    for case in ablation_cases.cases:
        ranking = rank_concepts(case.pie_values)
        ins = auc(insertion_curve(bundle, case.image, case.cs, ranking, case.target, fill))
        dele = auc(deletion_curve(bundle, case.image, case.cs, ranking, case.target, fill))
        rng = np.random.default_rng([6001, case.index])
        random_ins, random_del = [], []
        for _ in range(100):
            order = [int(j) for j in rng.permutation(case.cs.n)]
            random_ins.append(
                auc(insertion_curve(bundle, case.image, case.cs, order, case.target, fill))
            )
            random_del.append(
                auc(deletion_curve(bundle, case.image, case.cs, order, case.target, fill))
            )
        insertion_wins += ins > float(np.mean(random_ins))
        deletion_wins += dele < float(np.mean(random_del))
    elapsed = ablation_cases.build_seconds + time.perf_counter() - t0
    ok = insertion_wins >= 18 and deletion_wins >= 18 and elapsed < 300.0
    _verdict(
        6,
        ok,
        f"ranking beats 100 random orders: insertion {insertion_wins}/20, "
        f"deletion {deletion_wins}/20 (need 18), {elapsed:.0f}s",
    )


def test_criterion_07_ablation_trend(ablation_cases):
    bundle, fill = ablation_cases.bundle, ablation_cases.fill
    fid_pie, fid_ns, tau_lin_pie, tau_pie_exact = [], [], [], []
    for case in ablation_cases.cases:
        _, ns_report = train_surrogate(case.samples, bundle, "pie_no_sharing", case.config)
        lin_surr, _ = train_surrogate(case.samples, bundle, "linear", case.config)
        fid_pie.append(case.pie_report.holdout_top1)
        fid_ns.append(ns_report.holdout_top1)

        lin_values = exact_shapley(SurrogateUtility(lin_surr, case.target), case.cs.n).values
        direct = DirectUtility(bundle, case.image, case.cs, fill, case.target)
        exact_values = exact_shapley(direct, case.cs.n).values
        tau_lin_pie.append(kendalltau(lin_values, case.pie_values).statistic)
        tau_pie_exact.append(kendalltau(case.pie_values, exact_values).statistic)

    mean_fid_pie, mean_fid_ns = float(np.mean(fid_pie)), float(np.mean(fid_ns))
    mean_lin_pie = float(np.mean(tau_lin_pie))
    mean_pie_exact = float(np.mean(tau_pie_exact))
    ok = mean_fid_pie >= mean_fid_ns and mean_lin_pie < mean_pie_exact
    _verdict(
        7,
        ok,
        f"holdout fidelity pie {mean_fid_pie:.4f} >= no-sharing {mean_fid_ns:.4f}; "
        f"tau(linear, pie) {mean_lin_pie:.4f} < tau(pie, exact) {mean_pie_exact:.4f}",
    )


def test_criterion_08_determinism(tmp_path):
    args = [
        "explain",
        "--image", str(FIXTURES / "three_rects.png"),
        "--masks", str(FIXTURES / "three_rects.json"),
        "--toy-model", "7,4,5",
        "--add-background",
        "--seed", "21",
        "--num-samples", "200",
        "--epochs", "40",
        "--K", "300",
        "--eval",
    ]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out_a)]) == EXIT_OK
    assert main(args + ["--out", str(out_b)]) == EXIT_OK
    identical = (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()

    ev = json.loads((out_a / "eval.json").read_text())
    ins_x, ins_y = ev["insertion"]["x"], ev["insertion"]["y"]
    del_x, del_y = ev["deletion"]["x"], ev["deletion"]["y"]
    endpoints = (
        ins_x[0] == 0.0 and ins_x[-1] == 1.0
        and del_x[0] == 0.0 and del_x[-1] == 1.0
        and ins_y[0] == del_y[-1]
        and ins_y[-1] == del_y[0]
    )
    ok = identical and endpoints
    _verdict(8, ok, f"byte-identical reports {identical}, curve endpoints shared {endpoints}")


def test_criterion_09_auc_hand_values():
    constant = auc(Curve(np.linspace(0.0, 1.0, 5), np.full(5, 0.4), "insertion"))
    ramp = auc(Curve(np.linspace(0.0, 1.0, 11), np.linspace(0.0, 1.0, 11), "insertion"))
    three = auc(Curve(np.array([0.0, 0.5, 1.0]), np.array([0.1, 0.5, 1.0]), "insertion"))
    ok = (
        abs(constant - 0.4) < 1e-12
        and abs(ramp - 0.5) < 1e-12
        and abs(three - 0.525) < 1e-12
    )
    _verdict(9, ok, f"constant {constant:.6f}, ramp {ramp:.6f}, three-point {three:.6f}")


def test_criterion_10_exporter_round_trip():
    exported = FIXTURES / "exported"
    if not (exported / "masks.json").exists():
        print("\n[criterion 10] SKIP exporter artifacts not checked in yet", flush=True)
        pytest.skip("exporter artifacts not present under fixtures/exported/")

    cs = load_concepts(exported / "masks.json")
    raw = json.loads((exported / "masks.json").read_text())
    rle_ok = True
    for rec in raw["concepts"]:
        counts = rec["rle"]["counts"]
        decoded = decode_rle(counts, cs.image_height, cs.image_width)
        rle_ok = rle_ok and encode_rle(decoded) == counts

    bundle = load_bundle(exported / "bundle")
    probes = json.loads((exported / "bundle" / "probe.json").read_text())
    worst = 0.0
    for rec in probes[:10]:
        img = probe_image(int(rec["seed"]), int(rec["height"]), int(rec["width"]))
        got = logits(bundle, img)
        worst = max(worst, float(np.abs(got - np.asarray(rec["logits"])).max()))
    ok = rle_ok and len(probes) >= 10 and worst < 1e-3
    _verdict(
        10,
        ok,
        f"manifest loads n={cs.n}, rle identity {rle_ok}, "
        f"{len(probes)} probes, worst logit gap {worst:.2e}",
    )
