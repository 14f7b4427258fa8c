"""Generate superpixels with SLIC and Quick Shift on a synthetic scene.

Writes boundary and mean-color overlays to demo_out/ so the block
geometry can be inspected with any PPM viewer.
"""

import os

import numpy as np

from spxkit import (
    QuickShiftParams,
    SlicParams,
    quickshift_segment,
    render_overlay,
    slic_segment,
    srgb_to_lab,
    write_ppm,
)

OUT = "demo_out"
os.makedirs(OUT, exist_ok=True)

# A 128x128 scene: sky gradient, a green field, and an orange disk.
h = w = 128
yy, xx = np.mgrid[0:h, 0:w]
img = np.zeros((h, w, 3), np.uint8)
img[..., 2] = (180 + 40 * yy / h).astype(np.uint8)      # bluish sky
img[..., 0] = 60
field = yy > 80
img[field] = (70, 160, 60)
disk = (yy - 40) ** 2 + (xx - 88) ** 2 < 18**2
img[disk] = (240, 150, 40)
write_ppm(img, f"{OUT}/scene.ppm")

lab = srgb_to_lab(img)

print("SLIC at three scales (more blocks = finer tessellation):")
for n in (16, 64, 150):
    part = slic_segment(lab, SlicParams(num_superpixels=n, compactness=10.0))
    sizes = part.block_sizes
    print(f"  requested {n:4d}  ->  {part.num_blocks:4d} blocks, "
          f"sizes {sizes.min()}..{sizes.max()}")
    write_ppm(render_overlay(img, part, "boundaries"), f"{OUT}/slic_{n}_edges.ppm")
    write_ppm(render_overlay(img, part, "mean-color"), f"{OUT}/slic_{n}_mean.ppm")

print("\nQuick Shift at two bandwidths (no direct block-count control):")
for sigma in (6.0, 3.0):
    part = quickshift_segment(lab, QuickShiftParams(sigma=sigma, tau=3 * sigma))
    print(f"  sigma {sigma:4.1f}  ->  {part.num_blocks:4d} blocks")
    write_ppm(
        render_overlay(img, part, "boundaries"),
        f"{OUT}/quickshift_s{int(sigma)}_edges.ppm",
    )

print(f"\nOverlays written to {OUT}/")
