"""Synthetic scenes with known concept geometry, for demos and validation.

Everything here is deterministic given the seed.  Scenes are flat or noisy
backgrounds with solid colored rectangles; the concept masks are the exact
rectangles, so ground truth about coverage, overlap and nesting is available
by construction.  Overlapping and nested rectangles matter: a region stays
visible when any covering concept is present, which makes model output a
genuinely non-additive function of the concept indicator.
"""

from __future__ import annotations

import numpy as np

from .concepts import ConceptMask, ConceptSet

PALETTE = (
    (220, 40, 40),
    (40, 200, 60),
    (50, 80, 220),
    (230, 200, 30),
    (200, 50, 200),
    (40, 200, 200),
    (240, 130, 30),
    (130, 60, 200),
)


def rect_mask(height: int, width: int, r0: int, r1: int, c0: int, c1: int) -> np.ndarray:
    """Bool bitmap that is True on rows r0..r1-1 and cols c0..c1-1."""
    if not (0 <= r0 < r1 <= height and 0 <= c0 < c1 <= width):
        raise ValueError("rectangle out of bounds")
    bitmap = np.zeros((height, width), dtype=bool)
    bitmap[r0:r1, c0:c1] = True
    return bitmap


def concept_set_from_bitmaps(
    bitmaps: list[np.ndarray], names: list[str] | None = None
) -> ConceptSet:
    """Wrap bool bitmaps as a concept set; ids follow list order."""
    if not bitmaps:
        raise ValueError("need at least one bitmap")
    height, width = bitmaps[0].shape
    concepts = []
    for i, bitmap in enumerate(bitmaps):
        if bitmap.shape != (height, width):
            raise ValueError("all bitmaps must share one shape")
        frozen = bitmap.astype(bool).copy()
        frozen.setflags(write=False)
        concepts.append(
            ConceptMask(
                id=i,
                bitmap=frozen,
                area=int(frozen.sum()),
                name=names[i] if names else None,
            )
        )
    return ConceptSet(image_width=width, image_height=height, concepts=tuple(concepts))


def three_rects(height: int = 64, width: int = 64) -> tuple[np.ndarray, ConceptSet]:
    """Fixed scene: two small squares up top, one wide bar below, gray backdrop."""
    image = np.full((height, width, 3), 120, dtype=np.uint8)
    layout = [
        (8, 24, 8, 24, (200, 40, 40)),
        (8, 24, 40, 56, (40, 180, 60)),
        (40, 56, 8, 56, (40, 60, 200)),
    ]
    bitmaps = []
    for r0, r1, c0, c1, color in layout:
        image[r0:r1, c0:c1] = color
        bitmaps.append(rect_mask(height, width, r0, r1, c0, c1))
    cs = concept_set_from_bitmaps(bitmaps, names=["left_square", "right_square", "bar"])
    return image, cs


def random_scene(
    seed,
    n_concepts: int = 5,
    height: int = 64,
    width: int = 64,
    overlap: bool = True,
) -> tuple[np.ndarray, ConceptSet]:
    """Noisy backdrop plus n colored rectangles, some nested or overlapping.

    With ``overlap`` enabled roughly half of the later rectangles are placed
    inside or across an earlier one.  Later rectangles paint over earlier
    ones, so pixel content and mask membership can disagree in the overlap,
    exactly as with real occlusion.
    """
    if n_concepts < 1:
        raise ValueError("n_concepts must be >= 1")
    rng = np.random.default_rng(seed)
    image = rng.integers(90, 166, size=(height, width, 3)).astype(np.uint8)
    rects: list[tuple[int, int, int, int]] = []
    bitmaps = []
    for j in range(n_concepts):
        placement = "free"
        if rects and overlap:
            roll = rng.random()
            if roll < 0.35:
                placement = "nested"
            elif roll < 0.6:
                placement = "overlapping"

        if placement == "nested":
            pr0, pr1, pc0, pc1 = rects[int(rng.integers(len(rects)))]
            if pr1 - pr0 >= 8 and pc1 - pc0 >= 8:
                hh = int(rng.integers(4, pr1 - pr0 - 2))
                ww = int(rng.integers(4, pc1 - pc0 - 2))
                r0 = pr0 + int(rng.integers(0, pr1 - pr0 - hh + 1))
                c0 = pc0 + int(rng.integers(0, pc1 - pc0 - ww + 1))
            else:
                placement = "free"
        if placement == "overlapping":
            pr0, pr1, pc0, pc1 = rects[int(rng.integers(len(rects)))]
            hh = int(rng.integers(8, 21))
            ww = int(rng.integers(8, 21))
            r0 = int(np.clip(pr0 + int(rng.integers(-hh // 2, (pr1 - pr0))), 0, height - hh))
            c0 = int(np.clip(pc0 + int(rng.integers(-ww // 2, (pc1 - pc0))), 0, width - ww))
        if placement == "free":
            hh = int(rng.integers(10, 25))
            ww = int(rng.integers(10, 25))
            r0 = int(rng.integers(0, height - hh + 1))
            c0 = int(rng.integers(0, width - ww + 1))

        rects.append((r0, r0 + hh, c0, c0 + ww))
        color = np.array(PALETTE[int(rng.integers(len(PALETTE)))], dtype=np.int64)
        jitter = rng.integers(-12, 13, size=3)
        image[r0 : r0 + hh, c0 : c0 + ww] = np.clip(color + jitter, 0, 255).astype(np.uint8)
        bitmaps.append(rect_mask(height, width, r0, r0 + hh, c0, c0 + ww))

    cs = concept_set_from_bitmaps(bitmaps, names=[f"region_{j}" for j in range(n_concepts)])
    return image, cs


def random_game_table(n: int, seed) -> np.ndarray:
    """Dense payoff table over all 2**n coalitions, standard normal entries."""
    if n > 20:
        raise ValueError("table games supported up to n = 20")
    rng = np.random.default_rng(seed)
    return rng.normal(size=1 << n)
