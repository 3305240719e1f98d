"""
Grading a ranking with insertion and deletion curves
====================================================

A ranking is faithful when revealing its top concepts first drives the
prediction up quickly (high insertion area) and removing them first drives
it down quickly (low deletion area).  Both curves always query the real
model, never the surrogate, so they grade the explanation against the thing
being explained.
"""

import numpy as np

from eac import (
    BaselineFill,
    DirectUtility,
    auc,
    deletion_curve,
    exact_shapley,
    insertion_curve,
    builtin_toy_model,
    complete_with_background,
    rank_concepts,
    random_scene,
    resolve_target,
)

bundle = builtin_toy_model(7, 4, 5)
image, cs = random_scene([42, 0], n_concepts=6)
fill = BaselineFill()
target, label = resolve_target(bundle, image, None)
print("scene with", cs.n, "concepts, explaining", label)

# the reference ranking: exact values on the direct model (feasible at n=6)
utility = DirectUtility(bundle, image, cs, fill, target)
values = exact_shapley(utility, cs.n).values
ranking = rank_concepts(values)
print("values ", values.round(4))
print("ranking", ranking, f"({utility.model_calls} model calls)")

# curves under the value ranking
ins = insertion_curve(bundle, image, cs, ranking, target, fill)
dele = deletion_curve(bundle, image, cs, ranking, target, fill)
print(f"insertion auc {auc(ins):.4f}   deletion auc {auc(dele):.4f}")
print("insertion y:", ins.y.round(3))

# compare against shuffled orders: a faithful ranking should beat nearly
# all of them on both curves
rng = np.random.default_rng(0)
random_ins, random_del = [], []
for _ in range(50):
    order = [int(j) for j in rng.permutation(cs.n)]
    random_ins.append(auc(insertion_curve(bundle, image, cs, order, target, fill)))
    random_del.append(auc(deletion_curve(bundle, image, cs, order, target, fill)))
print(f"random orders: insertion {np.mean(random_ins):.4f}"
      f" +/- {np.std(random_ins):.4f}, deletion {np.mean(random_del):.4f}"
      f" +/- {np.std(random_del):.4f}")
print("beats random insertion:", auc(ins) > np.mean(random_ins),
      " beats random deletion:", auc(dele) < np.mean(random_del))

# the pixel axis replaces concept count with the fraction of image area
# revealed, which matters when concept sizes differ a lot
ins_px = insertion_curve(bundle, image, cs, ranking, target, fill, pixel_axis=True)
print("pixel-axis x:", ins_px.x.round(3))
