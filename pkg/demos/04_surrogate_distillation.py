"""
Distilling the classifier into a per-input surrogate
====================================================

Estimating attribution values needs utilities for many coalitions, and each
direct evaluation renders a masked image and runs the full model.  The
surrogate replaces that: a small network maps the coalition indicator vector
straight to class probabilities, trained for this one image on model-labeled
coalitions.  In ``pie`` mode the surrogate ends in the classifier's own FC
layer, copied in and frozen, so only the indicator-to-feature map is learned.
"""

import numpy as np

from eac import (
    BaselineFill,
    Coalition,
    PieConfig,
    builtin_toy_model,
    complete_with_background,
    fidelity,
    sample_dataset,
    surrogate_predict,
    three_rects,
    train_surrogate,
)

bundle = builtin_toy_model(7, 4, 5)
image, cs = three_rects()
cs = complete_with_background(cs)
fill = BaselineFill()

# label random coalitions with the real model's output distribution; the
# empty and full coalitions are always included
config = PieConfig(seed=11, num_samples=200, epochs=60)
samples = sample_dataset(bundle, image, cs, fill, config)
print("dataset:", len(samples), "samples,",
      len({t.coalition.bits for t in samples}), "distinct coalitions")

# train each mode on the same data
for mode in ("pie", "pie_no_sharing", "linear"):
    surrogate, report = train_surrogate(samples, bundle, mode, config)
    print(f"{mode:15} loss {report.epoch_losses[0]:.4f} -> {report.epoch_losses[-1]:.4f}"
          f"  holdout top1 {report.holdout_top1:.3f}"
          f"  gap {report.holdout_mean_abs_gap:.5f}")

# the pie surrogate keeps the classifier's FC weights untouched
surrogate, _ = train_surrogate(samples, bundle, "pie", config)
print("fc frozen:", bool(np.array_equal(surrogate.fc_weight, bundle.fc_weight)))

# grade it against the direct model on every coalition
holdout = [Coalition(bits, cs.n) for bits in range(1 << cs.n)]
rep = fidelity(surrogate, bundle, image, cs, fill, holdout)
print(f"fidelity over all {len(holdout)} coalitions:"
      f" top1 {rep.top1_agreement:.3f}, mean prob gap {rep.mean_abs_prob_gap:.5f}")

# and it answers coalition queries without touching pixels
probs = surrogate_predict(surrogate, Coalition.from_indices([0, 1], cs.n))
print("surrogate p(class) for {0,1}:", probs.round(4))
