"""Turning attribution values into a deliverable: subset, picture, report.

The selected subset maximizes the summed attribution value, which for
additive selection means every concept with a strictly positive value.  The
rendered explanation keeps exactly the selected concepts visible and paints
everything else with the baseline fill.

Reports serialize to JSON with floats rounded to six significant digits and
a fixed field order, so two runs with the same seed produce byte-identical
files.  Writes go through a temp file and an atomic replace.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from .coalition import Coalition
from .concepts import ConceptSet
from .errors import IoFailure
from .masking import BaselineFill, apply_coalition

REPORT_FIELDS = (
    "image",
    "n_concepts",
    "target_class",
    "label",
    "shapley",
    "ranking",
    "selected",
    "mode",
    "utility_kind",
    "K",
    "seed",
    "config",
    "timings",
)


@dataclass(frozen=True)
class Explanation:
    image: str
    n_concepts: int
    target_class: int
    label: str
    shapley: list[dict]
    ranking: list[int]
    selected: list[int]
    mode: str
    utility_kind: str
    K: int | None
    seed: int
    config: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)


def rank_concepts(values: np.ndarray) -> list[int]:
    """Concept ids from highest value to lowest; ties broken by lower id."""
    order = sorted(range(len(values)), key=lambda i: (-float(values[i]), i))
    return order


def select_explanation(values: np.ndarray, top_k: int | None = None) -> list[int]:
    """Ids whose value exceeds zero, in ranking order; the whole set may qualify.

    ``top_k`` additionally caps the subset at the k best.
    """
    if top_k is not None and top_k < 1:
        raise ValueError("top_k must be None or >= 1")
    chosen = [i for i in rank_concepts(values) if float(values[i]) > 0.0]
    if top_k is not None:
        chosen = chosen[:top_k]
    return chosen


def render_explanation(
    image: np.ndarray,
    cs: ConceptSet,
    selected: list[int],
    fill: BaselineFill,
    path: str | os.PathLike | None = None,
) -> np.ndarray:
    """Masked image showing only the selected concepts; optionally saved as PNG."""
    coalition = Coalition.from_indices(selected, cs.n)
    rendered = apply_coalition(image, cs, coalition, fill)
    if path is not None:
        try:
            Image.fromarray(rendered, mode="RGB").save(os.fspath(path), format="PNG")
        except OSError as exc:
            raise IoFailure(f"cannot write rendered explanation: {exc}") from exc
    return rendered


def _round_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (np.floating, float)):
        return float(f"{float(obj):.6g}")
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round_floats(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def report_dict(explanation: Explanation) -> dict:
    """Report payload with canonical field order and rounded floats."""
    raw = {name: getattr(explanation, name) for name in REPORT_FIELDS}
    return {name: _round_floats(raw[name]) for name in REPORT_FIELDS}


def write_report(path: str | os.PathLike, explanation: Explanation) -> None:
    """Serialize atomically; identical explanations yield identical bytes."""
    payload = json.dumps(report_dict(explanation), indent=2) + "\n"
    target = os.fspath(path)
    directory = os.path.dirname(target) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, target)
    except OSError as exc:
        raise IoFailure(f"cannot write report {target}: {exc}") from exc


def read_report(path: str | os.PathLike) -> Explanation:
    try:
        with open(os.fspath(path)) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoFailure(f"cannot read report {os.fspath(path)}: {exc}") from exc
    missing = [name for name in REPORT_FIELDS if name not in raw]
    if missing:
        raise IoFailure(f"report missing fields: {missing}")
    return Explanation(**{name: raw[name] for name in REPORT_FIELDS})
