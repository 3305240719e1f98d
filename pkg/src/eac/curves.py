"""Faithfulness curves: reveal or remove concepts in ranked order, watch the score.

Both curves always query the real model on masked images, never a surrogate,
so they grade the ranking against the thing being explained.  Insertion
starts from the fully filled baseline and reveals concepts best first; a
faithful ranking pushes the target probability up early, giving a high area
under the curve.  Deletion starts from the intact image and removes concepts
best first; a faithful ranking gives a low area.

The x axis is the fraction of concepts processed by default.  With
``pixel_axis=True`` it becomes the fraction of image pixels revealed
(insertion) or removed (deletion), so it still runs low to high.  With
overlapping concepts the pixel axis can repeat an x value; the trapezoid
rule treats that segment as zero width.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundle import ModelBundle, predict
from .coalition import Coalition
from .concepts import ConceptSet
from .masking import BaselineFill, apply_coalition, visible_pixels


@dataclass(frozen=True)
class Curve:
    x: np.ndarray
    y: np.ndarray
    kind: str

    def __post_init__(self):
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("curve x and y must be 1-D and equal length")


def _score(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    coalition: Coalition,
    fill: BaselineFill,
    target_class: int,
) -> float:
    masked = apply_coalition(image, cs, coalition, fill)
    return float(predict(bundle, masked)[target_class])


def _x_value(
    step: int,
    total: int,
    cs: ConceptSet,
    coalition: Coalition,
    pixel_axis: bool,
    removing: bool,
) -> float:
    """Fraction of concepts processed, or of pixels revealed (removed when deleting)."""
    if not pixel_axis:
        return step / total
    visible = visible_pixels(cs, coalition)
    fraction = float(visible.sum()) / visible.size
    return 1.0 - fraction if removing else fraction


def insertion_curve(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    ranking: list[int],
    target_class: int,
    fill: BaselineFill,
    pixel_axis: bool = False,
) -> Curve:
    """Reveal ranked concepts one at a time over the baseline fill."""
    if not ranking:
        raise ValueError("ranking must be non-empty")
    coalition = Coalition.empty(cs.n)
    xs = [_x_value(0, len(ranking), cs, coalition, pixel_axis, removing=False)]
    ys = [_score(bundle, image, cs, coalition, fill, target_class)]
    for step, cid in enumerate(ranking, start=1):
        coalition = coalition.add(cid)
        xs.append(_x_value(step, len(ranking), cs, coalition, pixel_axis, removing=False))
        ys.append(_score(bundle, image, cs, coalition, fill, target_class))
    return Curve(np.array(xs), np.array(ys), "insertion")


def deletion_curve(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    ranking: list[int],
    target_class: int,
    fill: BaselineFill,
    pixel_axis: bool = False,
) -> Curve:
    """Remove ranked concepts one at a time from the full coalition."""
    if not ranking:
        raise ValueError("ranking must be non-empty")
    coalition = Coalition.full(cs.n)
    xs = [_x_value(0, len(ranking), cs, coalition, pixel_axis, removing=True)]
    ys = [_score(bundle, image, cs, coalition, fill, target_class)]
    for step, cid in enumerate(ranking, start=1):
        coalition = coalition.remove(cid)
        xs.append(_x_value(step, len(ranking), cs, coalition, pixel_axis, removing=True))
        ys.append(_score(bundle, image, cs, coalition, fill, target_class))
    return Curve(np.array(xs), np.array(ys), "deletion")


def auc(curve: Curve) -> float:
    """Area under the curve by the trapezoid rule on the stored x grid."""
    return float(np.trapezoid(curve.y, curve.x))
