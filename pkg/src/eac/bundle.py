"""Target classifier access: bundle loading, feature extraction, prediction.

A model bundle is a directory holding the classifier split into a feature
backbone plus its terminal linear layer as plain data:

* ``backbone.onnx``    float32 [1,3,H,W] input named "input", float32 [1,m]
  output named "features" (needs the optional onnxruntime dependency), OR
* ``builtin.json``     marker selecting the built-in closed-form backbone,
* ``fc.json``          {"weight": [[...]], "bias": [...], "labels": [...]},
* ``preprocess.json``  {"resize": [H, W], "mean": [r,g,b], "std": [r,g,b]},
* ``probe.json``       optional [{"seed", "height", "width", "logits"}, ...]
  records checked at load time against the loaded pipeline.

The split exposes the final fully-connected layer as numbers, which the
surrogate trainer reuses as frozen parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BackendFailure, MissingArtifact, ProbeFailure, ShapeMismatch
from .rand import Xorshift64Star, probe_image

PROBE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class PreprocessSpec:
    resize_height: int
    resize_width: int
    channel_mean: tuple[float, float, float]
    channel_std: tuple[float, float, float]

    def __post_init__(self):
        if any(s <= 0 for s in self.channel_std):
            raise ValueError("channel_std entries must be strictly positive")


class GridMeanBackbone:
    """Closed-form toy backbone: per-cell mean of each channel.

    The preprocessed image is partitioned into grid x grid cells with
    boundaries floor(k * size / grid); feature (r * grid + c) * 3 + ch is the
    mean of channel ch over cell (r, c), so m = 3 * grid**2.
    """

    kind = "grid_mean"

    def __init__(self, grid: int):
        if grid < 2:
            raise ValueError("grid must be >= 2")
        self.grid = grid
        self.m = 3 * grid * grid

    def run(self, x: np.ndarray) -> np.ndarray:
        h, w = x.shape[:2]
        g = self.grid
        rows = [(h * r) // g for r in range(g + 1)]
        cols = [(w * c) // g for c in range(g + 1)]
        out = np.empty(self.m, dtype=np.float64)
        for r in range(g):
            for c in range(g):
                cell = x[rows[r] : rows[r + 1], cols[c] : cols[c + 1], :]
                out[(r * g + c) * 3 : (r * g + c) * 3 + 3] = cell.mean(axis=(0, 1))
        return out


class OnnxBackbone:
    """Backbone executed by onnxruntime from an interchange graph file."""

    kind = "onnx"

    def __init__(self, path: Path):
        try:
            import onnxruntime  # noqa: PLC0415  (optional dependency)
        except ImportError as exc:
            raise BackendFailure(
                "backbone.onnx requires the optional onnxruntime dependency "
                "(pip install eac[onnx])"
            ) from exc
        opts = onnxruntime.SessionOptions()
        opts.inter_op_num_threads = 1
        opts.intra_op_num_threads = 1
        self._session = onnxruntime.InferenceSession(str(path), sess_options=opts)
        out_shape = self._session.get_outputs()[0].shape
        self.m = int(out_shape[-1])

    def run(self, x: np.ndarray) -> np.ndarray:
        nchw = np.ascontiguousarray(x.transpose(2, 0, 1)[None]).astype(np.float32)
        try:
            (features,) = self._session.run(["features"], {"input": nchw})
        except Exception as exc:
            raise BackendFailure(f"backbone execution failed: {exc}") from exc
        return features.reshape(-1).astype(np.float64)


@dataclass(frozen=True)
class ModelBundle:
    backbone: object
    fc_weight: np.ndarray
    fc_bias: np.ndarray
    labels: tuple[str, ...]
    preprocess: PreprocessSpec

    @property
    def m(self) -> int:
        return int(self.fc_weight.shape[1])

    @property
    def num_classes(self) -> int:
        return int(self.fc_weight.shape[0])


def softmax(logits: np.ndarray) -> np.ndarray:
    """Max-subtracted softmax; stable for logits up to ~1e4 in magnitude."""
    z = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _resize_nearest(image: np.ndarray, height: int, width: int) -> np.ndarray:
    h, w = image.shape[:2]
    if (h, w) == (height, width):
        return image
    rows = (np.arange(height) * h) // height
    cols = (np.arange(width) * w) // width
    return image[rows][:, cols]


def preprocess_image(image: np.ndarray, spec: PreprocessSpec) -> np.ndarray:
    """uint8 RGB -> float array in model space: resize, scale to [0,1], normalize."""
    resized = _resize_nearest(image, spec.resize_height, spec.resize_width)
    x = resized.astype(np.float64) / 255.0
    mean = np.asarray(spec.channel_mean, dtype=np.float64)
    std = np.asarray(spec.channel_std, dtype=np.float64)
    return (x - mean) / std


def features(bundle: ModelBundle, image: np.ndarray) -> np.ndarray:
    """Length-m feature vector of the backbone on one image."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.dtype != np.uint8:
        raise BackendFailure(
            f"expected uint8 HxWx3 RGB image, got shape {arr.shape} dtype {arr.dtype}"
        )
    return bundle.backbone.run(preprocess_image(arr, bundle.preprocess))


def logits(bundle: ModelBundle, image: np.ndarray) -> np.ndarray:
    return bundle.fc_weight @ features(bundle, image) + bundle.fc_bias


def predict(bundle: ModelBundle, image: np.ndarray) -> np.ndarray:
    """Class probability vector: softmax over the linear head on the features."""
    return softmax(logits(bundle, image))


def builtin_toy_model(seed: int, grid: int, num_classes: int) -> ModelBundle:
    """Fully specified deterministic classifier for desk-scale runs.

    Features are per-cell channel means over a grid x grid partition
    (m = 3 * grid**2); head weights and bias are drawn from the portable
    xorshift64* stream (see :mod:`eac.rand`) as uniform [-1, 1) values,
    weight rows first (class by class), then the bias.  Same seed, same
    model, in every implementation.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    backbone = GridMeanBackbone(grid)
    gen = Xorshift64Star(seed)
    weight = gen.fill_pm1((num_classes, backbone.m))
    bias = gen.fill_pm1((num_classes,))
    return ModelBundle(
        backbone=backbone,
        fc_weight=weight,
        fc_bias=bias,
        labels=tuple(f"class_{i}" for i in range(num_classes)),
        preprocess=PreprocessSpec(64, 64, (0.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
    )


def save_bundle(bundle: ModelBundle, directory: str | Path, probes: int = 1) -> Path:
    """Serialize a bundle directory; only closed-form backbones are writable.

    Writes fc.json, preprocess.json, builtin.json, and ``probes`` probe
    records with expected logits so a later load can verify consistency.
    """
    if not isinstance(bundle.backbone, GridMeanBackbone):
        raise ValueError("only grid_mean backbones can be serialized by save_bundle")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "builtin.json").write_text(
        json.dumps({"backbone": "grid_mean", "grid": bundle.backbone.grid}, indent=2)
    )
    (directory / "fc.json").write_text(
        json.dumps(
            {
                "weight": bundle.fc_weight.tolist(),
                "bias": bundle.fc_bias.tolist(),
                "labels": list(bundle.labels),
            }
        )
    )
    (directory / "preprocess.json").write_text(
        json.dumps(
            {
                "resize": [bundle.preprocess.resize_height, bundle.preprocess.resize_width],
                "mean": list(bundle.preprocess.channel_mean),
                "std": list(bundle.preprocess.channel_std),
            },
            indent=2,
        )
    )
    records = []
    for seed in range(1, probes + 1):
        img = probe_image(seed)
        records.append(
            {"seed": seed, "height": 64, "width": 64, "logits": logits(bundle, img).tolist()}
        )
    (directory / "probe.json").write_text(json.dumps(records))
    return directory


def _load_json(directory: Path, name: str) -> dict | list:
    path = directory / name
    if not path.is_file():
        raise MissingArtifact(f"bundle {directory} is missing {name}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise MissingArtifact(f"bundle file {path} is not valid JSON: {exc}") from exc


def load_bundle(directory: str | Path) -> ModelBundle:
    """Load and probe a bundle directory.

    Raises:
        MissingArtifact: a required file is absent or unreadable.
        ShapeMismatch: head parameters disagree with the backbone output size.
        ProbeFailure: the probe image contradicts the declared logits.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingArtifact(f"bundle directory {directory} does not exist")

    fc = _load_json(directory, "fc.json")
    pp = _load_json(directory, "preprocess.json")
    try:
        weight = np.asarray(fc["weight"], dtype=np.float64)
        bias = np.asarray(fc["bias"], dtype=np.float64)
        labels = tuple(str(x) for x in fc["labels"])
        spec = PreprocessSpec(
            int(pp["resize"][0]),
            int(pp["resize"][1]),
            tuple(float(v) for v in pp["mean"]),
            tuple(float(v) for v in pp["std"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MissingArtifact(f"bundle {directory}: malformed parameter file ({exc})") from exc

    if weight.ndim != 2 or bias.ndim != 1:
        raise ShapeMismatch(f"fc weight/bias have shapes {weight.shape}/{bias.shape}")
    if weight.shape[0] != bias.shape[0] or weight.shape[0] != len(labels):
        raise ShapeMismatch(
            f"class count disagrees: weight {weight.shape[0]} rows, "
            f"bias {bias.shape[0]}, {len(labels)} labels"
        )

    builtin_path = directory / "builtin.json"
    if builtin_path.is_file():
        marker = _load_json(directory, "builtin.json")
        if marker.get("backbone") != "grid_mean":
            raise MissingArtifact(f"unknown builtin backbone {marker.get('backbone')!r}")
        backbone = GridMeanBackbone(int(marker["grid"]))
    elif (directory / "backbone.onnx").is_file():
        backbone = OnnxBackbone(directory / "backbone.onnx")
    else:
        raise MissingArtifact(f"bundle {directory} has neither builtin.json nor backbone.onnx")

    if weight.shape[1] != backbone.m:
        raise ShapeMismatch(
            f"fc weight has {weight.shape[1]} columns, backbone outputs {backbone.m}"
        )

    bundle = ModelBundle(
        backbone=backbone,
        fc_weight=weight,
        fc_bias=bias,
        labels=labels,
        preprocess=spec,
    )

    probs = predict(bundle, probe_image(1))
    if not np.all(np.isfinite(probs)) or abs(float(probs.sum()) - 1.0) > 1e-6:
        raise ProbeFailure(f"bundle {directory}: probe prediction is not a distribution")

    probe_path = directory / "probe.json"
    if probe_path.is_file():
        for rec in _load_json(directory, "probe.json"):
            img = probe_image(int(rec["seed"]), int(rec["height"]), int(rec["width"]))
            got = logits(bundle, img)
            want = np.asarray(rec["logits"], dtype=np.float64)
            if got.shape != want.shape:
                raise ProbeFailure(
                    f"bundle {directory}: probe logits length {want.shape} vs {got.shape}"
                )
            err = float(np.max(np.abs(got - want)))
            if not err <= PROBE_TOLERANCE:
                raise ProbeFailure(
                    f"bundle {directory}: probe seed {rec['seed']} logits off by {err:.3e}"
                )
    return bundle
