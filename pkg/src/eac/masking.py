"""Coalition masking: render an image with only the chosen concepts visible.

A pixel survives when at least one visible concept covers it (OR semantics
over overlapping masks); every other pixel takes the baseline fill value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .bundle import ModelBundle, predict
from .coalition import Coalition
from .concepts import ConceptSet
from .errors import CoalitionSizeMismatch, DimensionMismatch

FILL_MODES = ("zero", "channel_mean", "blur")


@dataclass(frozen=True)
class BaselineFill:
    """Replacement for masked pixels: black, per-channel image mean, or blur."""

    mode: str = "channel_mean"
    blur_radius: int = 5

    def __post_init__(self):
        if self.mode not in FILL_MODES:
            raise ValueError(f"fill mode must be one of {FILL_MODES}, got {self.mode!r}")
        if self.mode == "blur" and self.blur_radius < 1:
            raise ValueError("blur_radius must be >= 1")


def fill_image(image: np.ndarray, fill: BaselineFill) -> np.ndarray:
    """The all-masked baseline for ``image`` under ``fill``."""
    if fill.mode == "zero":
        return np.zeros_like(image)
    if fill.mode == "channel_mean":
        mean = np.round(image.reshape(-1, image.shape[2]).mean(axis=0))
        return np.broadcast_to(mean.astype(image.dtype), image.shape).copy()
    size = 2 * fill.blur_radius + 1
    blurred = ndimage.uniform_filter(
        image.astype(np.float64), size=(size, size, 1), mode="reflect"
    )
    return np.round(blurred).astype(image.dtype)


def visible_pixels(cs: ConceptSet, s: Coalition) -> np.ndarray:
    """Boolean H x W map of pixels covered by at least one member of ``s``."""
    if s.n != cs.n:
        raise CoalitionSizeMismatch(f"coalition has n={s.n}, concept set has n={cs.n}")
    out = np.zeros((cs.image_height, cs.image_width), dtype=bool)
    for i in s.members():
        np.logical_or(out, cs.concepts[i].bitmap, out=out)
    return out


def apply_coalition(
    image: np.ndarray, cs: ConceptSet, s: Coalition, fill: BaselineFill
) -> np.ndarray:
    """Keep pixels covered by the coalition, replace the rest with the fill."""
    if image.shape[:2] != (cs.image_height, cs.image_width):
        raise DimensionMismatch(
            f"image {image.shape[:2]} does not match concept grid "
            f"{(cs.image_height, cs.image_width)}"
        )
    visible = visible_pixels(cs, s)
    if visible.all():
        return image.copy()
    return np.where(visible[:, :, None], image, fill_image(image, fill))


def utility_direct(
    bundle: ModelBundle,
    image: np.ndarray,
    cs: ConceptSet,
    s: Coalition,
    target_class: int,
    fill: BaselineFill,
) -> float:
    """Target-class probability of the classifier on the coalition-masked image.

    This is the exact game utility: mask everything outside the coalition,
    run the full model, read off one softmax entry.  Not monotone in the
    coalition; adding a concept can lower the probability.
    """
    if not 0 <= target_class < len(bundle.labels):
        raise IndexError(f"target_class {target_class} out of range")
    masked = apply_coalition(image, cs, s, fill)
    return float(predict(bundle, masked)[target_class])
