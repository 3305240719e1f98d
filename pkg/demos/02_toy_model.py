"""
The built-in toy classifier and the model bundle format
=======================================================

Real runs explain an ONNX classifier, but everything in this package can be
exercised against a tiny self-contained model: per-cell channel means over a
grid, followed by a fixed fully connected layer whose weights come from a
portable xorshift64* stream.  The same model reconstructs bit-for-bit from
three integers on any platform, which is what makes reports reproducible.
"""

from pathlib import Path

import numpy as np

from eac import (
    Xorshift64Star,
    builtin_toy_model,
    load_bundle,
    predict,
    probe_image,
    save_bundle,
)

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

# three integers fully determine the model: weight seed, grid, class count
bundle = builtin_toy_model(seed=7, grid=4, num_classes=5)
print("feature dim", bundle.m, "classes", bundle.num_classes)
print("labels", list(bundle.labels))

# the FC weights are drawn from the xorshift64* stream, so the first few
# draws of a fresh generator reproduce the first weight row
gen = Xorshift64Star(7)
print("weight[0, :3]", bundle.fc_weight[0, :3])
print("stream[:3]   ", [gen.uniform_pm1() for _ in range(3)])

# probe images come from the byte stream of the same generator family;
# they act as portable test cards for checking a bundle after transport
img = probe_image(seed=1)
probs = predict(bundle, img)
print("probe prediction", np.argmax(probs), probs.round(3))

# a bundle round-trips through a directory of four JSON artifacts; loading
# re-runs the probe and refuses bundles whose logits drifted
bundle_dir = out_dir / "toy_bundle"
save_bundle(bundle, bundle_dir, probes=3)
reloaded = load_bundle(bundle_dir)
print("reloaded logits match:",
      bool(np.allclose(predict(reloaded, img), probs, atol=1e-12)))
print("bundle files:", sorted(p.name for p in bundle_dir.iterdir()))
