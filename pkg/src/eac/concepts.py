"""Concept mask ingestion: manifest parsing, RLE codec, background completion.

A concept set is a list of binary pixel masks over one image, produced by an
external instance-segmentation tool and shipped as a JSON manifest:

    {"image": {"width": W, "height": H, "path": "optional.png"},
     "concepts": [{"id": 0, "name": "optional", "rle": {"size": [H, W], "counts": [...]}},
                  ...]}

``counts`` are uncompressed column-major run lengths, first run counting
zeros (the COCO uncompressed convention).  Masks may overlap; visibility
semantics for overlaps live in :mod:`eac.masking`, not here.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyConceptSet,
    MalformedManifest,
    NegativeRun,
    RleLengthMismatch,
)


@dataclass(frozen=True)
class ConceptMask:
    """One binary mask: ``bitmap[r, c]`` is True where the concept owns the pixel."""

    id: int
    bitmap: np.ndarray
    area: int
    name: str | None = None


@dataclass(frozen=True)
class ConceptSet:
    """Ordered, immutable collection of concept masks over one image."""

    image_width: int
    image_height: int
    concepts: tuple[ConceptMask, ...]
    has_background: bool = False

    @property
    def n(self) -> int:
        return len(self.concepts)

    def union(self) -> np.ndarray:
        """Pixel-wise OR of all masks."""
        out = np.zeros((self.image_height, self.image_width), dtype=bool)
        for c in self.concepts:
            np.logical_or(out, c.bitmap, out=out)
        return out

    def stacked(self) -> np.ndarray:
        """All bitmaps as one (n, H, W) boolean array."""
        return np.stack([c.bitmap for c in self.concepts])


def decode_rle(counts: list[int], height: int, width: int) -> np.ndarray:
    """Expand column-major run lengths (first run zeros) into an H x W bool grid."""
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts):
        raise NegativeRun(f"negative run length in {counts!r}")
    total = sum(counts)
    if total != height * width:
        raise RleLengthMismatch(
            f"run lengths sum to {total}, expected {height}*{width}={height * width}"
        )
    values = np.zeros(len(counts), dtype=bool)
    values[1::2] = True
    flat = np.repeat(values, counts)
    return flat.reshape((height, width), order="F")


def encode_rle(bitmap: np.ndarray) -> list[int]:
    """Inverse of :func:`decode_rle`: column-major run lengths, zero run first."""
    flat = np.asarray(bitmap, dtype=bool).reshape(-1, order="F")
    if flat.size == 0:
        return []
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], changes, [flat.size]))
    counts = np.diff(bounds).tolist()
    if flat[0]:
        counts.insert(0, 0)
    return [int(c) for c in counts]


def _mask_from_record(rec: dict, index: int, height: int, width: int) -> ConceptMask:
    try:
        rle = rec["rle"]
        size = [int(v) for v in rle["size"]]
        counts = rle["counts"]
        concept_id = int(rec["id"])
        name = rec.get("name")
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedManifest(f"concept #{index}: bad record ({exc})") from exc
    if concept_id != index:
        raise MalformedManifest(
            f"concept #{index}: id {concept_id} out of order (ids must be 0..n-1)"
        )
    if size != [height, width]:
        raise DimensionMismatch(
            f"concept #{index}: rle size {size} != image size {[height, width]}"
        )
    bitmap = decode_rle(counts, height, width)
    area = int(bitmap.sum())
    if area < 1:
        raise MalformedManifest(f"concept #{index}: empty mask")
    bitmap.setflags(write=False)
    return ConceptMask(id=concept_id, bitmap=bitmap, area=area, name=name)


def load_concepts(manifest_path: str | Path) -> ConceptSet:
    """Load and validate a concept manifest file.

    Raises:
        MalformedManifest: unparseable file or schema violation.
        EmptyConceptSet: manifest lists zero concepts.
        DimensionMismatch: a mask size disagrees with the declared image size.
    """
    path = Path(manifest_path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedManifest(f"cannot read manifest {path}: {exc}") from exc
    try:
        width = int(raw["image"]["width"])
        height = int(raw["image"]["height"])
        records = raw["concepts"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedManifest(f"manifest {path}: missing field ({exc})") from exc
    if width < 1 or height < 1:
        raise MalformedManifest(f"manifest {path}: bad image size {width}x{height}")
    if not isinstance(records, list):
        raise MalformedManifest(f"manifest {path}: 'concepts' is not a list")
    if len(records) == 0:
        raise EmptyConceptSet(f"manifest {path} declares zero concepts")
    masks = tuple(
        _mask_from_record(rec, i, height, width) for i, rec in enumerate(records)
    )
    return ConceptSet(image_width=width, image_height=height, concepts=masks)


def complete_with_background(cs: ConceptSet) -> ConceptSet:
    """Append one background concept covering every pixel no mask owns.

    If the union of masks already covers the grid, the set is returned with
    only the ``has_background`` flag raised.  After completion the grand
    coalition always reconstructs the original image exactly.
    """
    union = cs.union()
    if union.all():
        return dataclasses.replace(cs, has_background=True)
    complement = ~union
    complement.setflags(write=False)
    background = ConceptMask(
        id=cs.n, bitmap=complement, area=int(complement.sum()), name="background"
    )
    return ConceptSet(
        image_width=cs.image_width,
        image_height=cs.image_height,
        concepts=cs.concepts + (background,),
        has_background=True,
    )


def concept_set_to_manifest(cs: ConceptSet, image_path: str | None = None) -> dict:
    """Serialize a ConceptSet back into the manifest schema (round-trip aid)."""
    image: dict = {"width": cs.image_width, "height": cs.image_height}
    if image_path is not None:
        image["path"] = image_path
    return {
        "image": image,
        "concepts": [
            {
                "id": c.id,
                **({"name": c.name} if c.name is not None else {}),
                "rle": {
                    "size": [cs.image_height, cs.image_width],
                    "counts": encode_rle(c.bitmap),
                },
            }
            for c in cs.concepts
        ],
    }
