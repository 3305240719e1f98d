"""Regenerate the checked-in fixtures from their seeds.

Run from the repository root:

    python3 scripts/gen_fixtures.py

Every artifact is deterministic, so regeneration is byte-stable; a diff after
running means the library's behavior changed and the goldens need review.
"""

import json
import os
import sys

import numpy as np
from PIL import Image

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from eac.bundle import builtin_toy_model, save_bundle
from eac.concepts import concept_set_to_manifest
from eac.synth import three_rects

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def main() -> None:
    os.makedirs(FIXTURES, exist_ok=True)

    image, cs = three_rects()
    Image.fromarray(image, mode="RGB").save(os.path.join(FIXTURES, "three_rects.png"))
    manifest = concept_set_to_manifest(cs)
    with open(os.path.join(FIXTURES, "three_rects.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")

    save_bundle(builtin_toy_model(7, 4, 5), os.path.join(FIXTURES, "toy_bundle"), probes=3)

    with open(os.path.join(FIXTURES, "two_player_game.json"), "w") as fh:
        json.dump({"n": 2, "table": [0.0, 0.6, 0.2, 1.0]}, fh, indent=2)
        fh.write("\n")

    print("fixtures written to", os.path.abspath(FIXTURES))


if __name__ == "__main__":
    main()
