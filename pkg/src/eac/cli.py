"""Command-line front end.

Subcommands:

* ``explain``        estimate per-concept attribution for one image, write
                     ``report.json`` and ``explanation.png``.
* ``eval``           insertion and deletion curves plus areas for a ranking.
* ``exact-shapley``  exact values by full enumeration, for a payoff-table
                     game file or a small image case.
* ``pie-fit``        train the per-input surrogate only and report the fit.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 missing or
malformed input files, 4 runtime failure inside the engine.

The EAC_THREADS environment variable caps worker parallelism; this build
evaluates sequentially, so any value >= 1 is accepted and recorded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np
from PIL import Image, UnidentifiedImageError

from .bundle import ModelBundle, builtin_toy_model, load_bundle
from .concepts import ConceptSet, complete_with_background, load_concepts
from .errors import (
    BackendFailure,
    DimensionMismatch,
    EacError,
    EmptyConceptSet,
    IoFailure,
    MalformedManifest,
    MissingArtifact,
    NonFiniteLoss,
    ProbeFailure,
    ShapeMismatch,
    TooManyConcepts,
)
from .explain import read_report, render_explanation, write_report
from .masking import BaselineFill
from .pipeline import (
    RUN_MODES,
    RunConfig,
    resolve_target,
    run_eval,
    run_explain,
    run_pie_fit,
)
from .shapley import SAMPLERS, DirectUtility, SurrogateUtility, TableGame, exact_shapley
from .surrogate import MODES

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_RUNTIME = 4

CONFIG_ERRORS = (TooManyConcepts, ValueError, IndexError)
INPUT_ERRORS = (
    MalformedManifest,
    EmptyConceptSet,
    DimensionMismatch,
    MissingArtifact,
    ShapeMismatch,
    IoFailure,
    FileNotFoundError,
    IsADirectoryError,
    UnidentifiedImageError,
)
RUNTIME_ERRORS = (ProbeFailure, BackendFailure, NonFiniteLoss, EacError)


def _hidden_width(text: str):
    if text.lower() in ("none", "0"):
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid hidden width {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("hidden width must be >= 1 or none")
    return value


def _threads_cap() -> int:
    raw = os.environ.get("EAC_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"EAC_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ValueError("EAC_THREADS must be >= 1")
    return cap


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model bundle directory")
    p.add_argument(
        "--toy-model",
        metavar="SEED,GRID,CLASSES",
        help="built-in toy classifier instead of a bundle directory",
    )


def _add_case_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--image", required=True, help="input image (PNG or anything PIL reads)")
    p.add_argument("--masks", required=True, help="concept mask manifest JSON")
    _add_model_args(p)
    p.add_argument("--fill", default="channel_mean", choices=("zero", "channel_mean", "blur"))
    p.add_argument("--blur-radius", type=int, default=5)
    p.add_argument(
        "--add-background",
        action="store_true",
        help="append a complement concept when the masks do not cover the image",
    )


def _add_surrogate_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--num-samples", type=int, default=1000,
                   help="training coalitions sampled for the surrogate")
    p.add_argument("--hidden-width", type=_hidden_width, default=32,
                   help="width of the surrogate hidden layer, or 'none' for affine")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--learning-rate", type=float, default=1e-2)
    p.add_argument("--holdout-fraction", type=float, default=0.2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eac",
        description="Concept-level attribution for image classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="attribute one prediction to concepts")
    _add_case_args(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", default="pie", choices=RUN_MODES)
    p.add_argument("--K", type=int, default=1000, help="Monte-Carlo samples per concept")
    p.add_argument("--exact", action="store_true", help="enumerate instead of sampling")
    p.add_argument("--sampler", default="size_uniform", choices=SAMPLERS)
    p.add_argument("--target-class", type=int, default=None)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--eval", action="store_true", dest="with_eval",
                   help="also write eval.json with insertion and deletion curves")
    p.add_argument("--pixel-axis", action="store_true",
                   help="use pixel fraction instead of concept fraction on curve x axes")
    _add_surrogate_args(p)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("eval", help="insertion and deletion curves for a ranking")
    _add_case_args(p)
    p.add_argument("--report", help="report.json with the ranking to grade")
    p.add_argument("--ranking", help="comma-separated concept ids, best first")
    p.add_argument("--target-class", type=int, default=None)
    p.add_argument("--pixel-axis", action="store_true")
    p.add_argument("--out", default="eval.json", help="output JSON path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("exact-shapley", help="exact values by full enumeration")
    p.add_argument("--game", help="payoff table JSON with fields n and table")
    p.add_argument("--image", help="input image (with --masks and a model)")
    p.add_argument("--masks", help="concept mask manifest JSON")
    _add_model_args(p)
    p.add_argument("--fill", default="channel_mean", choices=("zero", "channel_mean", "blur"))
    p.add_argument("--blur-radius", type=int, default=5)
    p.add_argument("--add-background", action="store_true")
    p.add_argument("--mode", default="direct", choices=RUN_MODES)
    p.add_argument("--seed", type=int, default=None,
                   help="required when a surrogate is trained (mode other than direct)")
    p.add_argument("--target-class", type=int, default=None)
    _add_surrogate_args(p)
    p.add_argument("--out", default="exact_shapley.json", help="output JSON path")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("pie-fit", help="train the per-input surrogate and report fit")
    _add_case_args(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", default="pie", choices=MODES)
    _add_surrogate_args(p)
    p.add_argument("--out", default="fit.json", help="output JSON path")
    p.set_defaults(func=cmd_pie_fit)
    return parser


def _load_image(path: str) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8)


def _load_case(args) -> tuple[ModelBundle, np.ndarray, ConceptSet]:
    bundle = _load_model(args)
    image = _load_image(args.image)
    cs = load_concepts(args.masks)
    if (cs.image_height, cs.image_width) != image.shape[:2]:
        raise DimensionMismatch(
            f"masks are {cs.image_width}x{cs.image_height}, "
            f"image is {image.shape[1]}x{image.shape[0]}"
        )
    if getattr(args, "add_background", False):
        cs = complete_with_background(cs)
    return bundle, image, cs


def _load_model(args) -> ModelBundle:
    if args.model and args.toy_model:
        raise ValueError("give either --model or --toy-model, not both")
    if args.toy_model:
        parts = args.toy_model.split(",")
        if len(parts) != 3:
            raise ValueError("--toy-model takes SEED,GRID,CLASSES")
        try:
            seed, grid, classes = (int(p) for p in parts)
        except ValueError:
            raise ValueError("--toy-model takes three integers")
        return builtin_toy_model(seed, grid, classes)
    if args.model:
        return load_bundle(args.model)
    raise ValueError("a model is required: --model DIR or --toy-model SEED,GRID,CLASSES")


def _round6(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: _round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round6(v) for v in obj]
    return obj


def _write_json(path: str, payload: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(_round6(payload), fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def _run_config(args, mode: str, seed: int) -> RunConfig:
    return RunConfig(
        seed=seed,
        mode=mode,
        K=getattr(args, "K", 1000),
        exact=getattr(args, "exact", False),
        sampler=getattr(args, "sampler", "size_uniform"),
        num_samples=args.num_samples,
        hidden_width=args.hidden_width,
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        holdout_fraction=args.holdout_fraction,
        fill_mode=args.fill,
        blur_radius=args.blur_radius,
        top_k=getattr(args, "top_k", None),
    )


def cmd_explain(args) -> int:
    bundle, image, cs = _load_case(args)
    config = _run_config(args, args.mode, args.seed)
    result = run_explain(
        bundle, image, cs, config,
        target_class=args.target_class,
        image_name=os.path.basename(args.image),
    )
    exp = result.explanation
    os.makedirs(args.out, exist_ok=True)
    report_path = os.path.join(args.out, "report.json")
    png_path = os.path.join(args.out, "explanation.png")
    write_report(report_path, exp)
    render_explanation(image, cs, exp.selected, config.fill(), png_path)
    print(f"target class {exp.target_class} ({exp.label})")
    for row in sorted(exp.shapley, key=lambda r: -r["value"]):
        err = "" if row["stderr"] is None else f" +/- {row['stderr']:.4f}"
        print(f"  concept {row['id']}: {row['value']:+.4f}{err}")
    print(f"selected: {exp.selected}")
    print(f"wrote {report_path} and {png_path}")
    if args.with_eval:
        ev = run_eval(bundle, image, cs, exp.ranking, exp.target_class,
                      config.fill(), args.pixel_axis)
        eval_path = os.path.join(args.out, "eval.json")
        _write_eval(eval_path, args, exp.target_class, ev)
        print(f"insertion auc {ev.insertion_auc:.4f}, deletion auc {ev.deletion_auc:.4f}")
        print(f"wrote {eval_path}")
    return EXIT_OK


def _write_eval(path: str, args, target: int, ev) -> None:
    _write_json(path, {
        "image": os.path.basename(args.image),
        "target_class": target,
        "x_axis": "pixel_fraction" if args.pixel_axis else "concept_fraction",
        "insertion_auc": ev.insertion_auc,
        "deletion_auc": ev.deletion_auc,
        "insertion": {"x": ev.insertion.x.tolist(), "y": ev.insertion.y.tolist()},
        "deletion": {"x": ev.deletion.x.tolist(), "y": ev.deletion.y.tolist()},
    })


def cmd_eval(args) -> int:
    bundle, image, cs = _load_case(args)
    if bool(args.report) == bool(args.ranking):
        raise ValueError("give exactly one of --report or --ranking")
    if args.report:
        exp = read_report(args.report)
        ranking = [int(i) for i in exp.ranking]
        target = exp.target_class if args.target_class is None else args.target_class
    else:
        try:
            ranking = [int(tok) for tok in args.ranking.split(",")]
        except ValueError:
            raise ValueError("--ranking takes comma-separated integers")
        target, _ = resolve_target(bundle, image, args.target_class)
    if sorted(set(ranking)) != sorted(ranking) or any(not 0 <= i < cs.n for i in ranking):
        raise ValueError(f"ranking must be distinct concept ids in 0..{cs.n - 1}")
    fill = BaselineFill(args.fill, args.blur_radius)
    ev = run_eval(bundle, image, cs, ranking, target, fill, args.pixel_axis)
    _write_eval(args.out, args, target, ev)
    print(f"insertion auc {ev.insertion_auc:.4f}, deletion auc {ev.deletion_auc:.4f}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_exact(args) -> int:
    if args.game:
        if args.image or args.masks:
            raise ValueError("--game excludes --image/--masks")
        try:
            with open(args.game) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise IoFailure(f"cannot read game file: {exc}") from exc
        if not isinstance(raw, dict) or "n" not in raw or "table" not in raw:
            raise IoFailure("game file needs fields 'n' and 'table'")
        game = TableGame(np.asarray(raw["table"], dtype=np.float64), int(raw["n"]))
        result = exact_shapley(game, game.n)
        n = game.n
    else:
        if not args.image or not args.masks:
            raise ValueError("need --game, or --image with --masks and a model")
        bundle, image, cs = _load_case(args)
        target, _ = resolve_target(bundle, image, args.target_class)
        if args.mode == "direct":
            utility = DirectUtility(bundle, image, cs, BaselineFill(args.fill, args.blur_radius),
                                    target)
        else:
            if args.seed is None:
                raise ValueError("--seed is required when training a surrogate")
            config = _run_config(args, args.mode, args.seed)
            surrogate, _ = run_pie_fit(bundle, image, cs, config)
            utility = SurrogateUtility(surrogate, target)
        result = exact_shapley(utility, cs.n)
        n = cs.n
    _write_json(args.out, {
        "n": n,
        "method": "exact",
        "utility_kind": result.utility_kind,
        "values": result.values.tolist(),
    })
    for i, v in enumerate(result.values):
        print(f"  concept {i}: {v:+.6f}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_pie_fit(args) -> int:
    bundle, image, cs = _load_case(args)
    config = _run_config(args, args.mode, args.seed)
    _, report = run_pie_fit(bundle, image, cs, config)
    _write_json(args.out, {
        "mode": args.mode,
        "seed": args.seed,
        "n_concepts": cs.n,
        "n_train": report.n_train,
        "n_holdout": report.n_holdout,
        "steps": report.steps,
        "final_loss": report.epoch_losses[-1],
        "epoch_losses": report.epoch_losses,
        "holdout_top1": report.holdout_top1,
        "holdout_mean_abs_gap": report.holdout_mean_abs_gap,
    })
    print(f"final loss {report.epoch_losses[-1]:.6f}, "
          f"holdout top1 {report.holdout_top1:.3f}, "
          f"holdout gap {report.holdout_mean_abs_gap:.5f}")
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads_cap()
        return args.func(args)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
