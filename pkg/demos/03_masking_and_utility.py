"""
Coalitions, baseline fills, and the utility of a subset
=======================================================

A coalition is the subset of concepts left visible; every other concept's
pixels are replaced by a baseline fill.  The utility of a coalition is the
model's probability for the explained class on that masked image.  This is
the payoff function every attribution method in the package works from.
"""

import numpy as np

from eac import (
    BaselineFill,
    Coalition,
    builtin_toy_model,
    complete_with_background,
    apply_coalition,
    predict,
    three_rects,
    utility_direct,
)

bundle = builtin_toy_model(7, 4, 5)
image, cs = three_rects()
cs = complete_with_background(cs)

# three fill styles; channel_mean keeps global statistics, blur keeps coarse
# structure, zero is the bluntest
for mode in ("zero", "channel_mean", "blur"):
    fill = BaselineFill(mode)
    masked = apply_coalition(image, cs, Coalition.empty(cs.n), fill)
    print(f"{mode:13} empty-coalition pixel[0,0] = {masked[0, 0]}")

fill = BaselineFill("channel_mean")

# the explained class is the model's own top prediction on the clean image
target = int(np.argmax(predict(bundle, image)))
print("target class", target)

# walk all 16 coalitions of the 4 concepts and print their utilities;
# bit i of the mask means concept i stays visible
print("bits  members          utility")
for bits in range(1 << cs.n):
    s = Coalition(bits, cs.n)
    u = utility_direct(bundle, image, cs, s, target, fill)
    print(f"{bits:4b}  {str(s.members()):16} {u:.4f}")

# the full coalition shows the original image, so its utility equals the
# clean prediction
full = utility_direct(bundle, image, cs, Coalition.full(cs.n), target, fill)
clean = float(predict(bundle, image)[target])
print("full == clean:", abs(full - clean) < 1e-12)
