"""Walk through the metrics suite on hand-checkable fixtures.

Covers the confusion matrix / mIoU path, boundary F-score under a
distance tolerance, and the two superpixel measures (undersegmentation
error, boundary recall).
"""

import numpy as np

from spxkit import (
    boundary_fscore,
    confusion_matrix,
    evaluate_segmentation,
    miou,
    relabel_contiguous,
    spx_boundary_recall,
    undersegmentation_error,
)

# ---- mIoU on a 1x4 strip ---------------------------------------------------
pred = np.array([[0, 0, 1, 1]])
gt = np.array([[0, 1, 1, 1]])
cm = confusion_matrix(pred, gt, 2)
mean, per_class = miou(cm)
print("confusion (rows gt, cols pred):")
print(cm)
print(f"IoU per class: {per_class}  ->  mIoU {mean:.6f} (= 7/12)")

# ---- boundary F-score vs tolerance ----------------------------------------
base = ((np.arange(8)[None, :] >= 4) * np.ones((8, 1))).astype(np.int64)
shifted = ((np.arange(8)[None, :] >= 6) * np.ones((8, 1))).astype(np.int64)
print("\nedge shifted by 2 columns:")
for tol in (0, 1, 2):
    p, r, f = boundary_fscore(shifted, base, tol)
    print(f"  tolerance {tol}px: precision {p:.2f} recall {r:.2f} F {f:.2f}")

# ---- superpixel quality ----------------------------------------------------
print("\nsuperpixel quality against a vertical two-segment ground truth:")
nested = np.zeros((8, 8), dtype=np.int64)
nested[:4, 4:] = 1
nested[4:, :4] = 2
nested[4:, 4:] = 3
for name, labels in (
    ("4 nested blocks", nested),
    ("1 block straddling", np.zeros((8, 8), dtype=np.int64)),
    ("64 singletons", np.arange(64).reshape(8, 8)),
):
    part = relabel_contiguous(labels)
    ue = undersegmentation_error(part, base)
    br = spx_boundary_recall(part, base, 2)
    print(f"  {name:20s}: UE {ue:.2f}  boundary recall {br:.2f}")

# ---- one-call report -------------------------------------------------------
rng = np.random.default_rng(0)
noisy = base.copy()
flips = rng.uniform(size=base.shape) < 0.05
noisy[flips] = 1 - noisy[flips]
report = evaluate_segmentation(noisy, base, 2, boundary_tolerance_px=1)
print("\nfull report on a 5%-corrupted prediction:")
for key, value in report.to_dict().items():
    print(f"  {key}: {value}")
