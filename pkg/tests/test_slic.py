import numpy as np
import pytest

from spxkit import (
    SlicParams,
    enforce_connectivity,
    slic_segment,
    spx_boundary_recall,
    srgb_to_lab,
    validate_partition,
)


def flood_fill_components(labels):
    """Independent 4-connected component labeling by explicit BFS."""
    h, w = labels.shape
    comp = np.full((h, w), -1, dtype=np.int64)
    nid = 0
    for sy in range(h):
        for sx in range(w):
            if comp[sy, sx] >= 0:
                continue
            v = labels[sy, sx]
            stack = [(sy, sx)]
            comp[sy, sx] = nid
            while stack:
                y, x = stack.pop()
                for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                    if 0 <= ny < h and 0 <= nx < w:
                        if comp[ny, nx] < 0 and labels[ny, nx] == v:
                            comp[ny, nx] = nid
                            stack.append((ny, nx))
            nid += 1
    return comp, nid


def smooth_random_image(seed, size=64):
    rng = np.random.default_rng(seed)
    coarse = rng.integers(0, 256, (size // 8, size // 8, 3)).astype(np.float64)
    img = np.kron(coarse, np.ones((8, 8, 1)))
    # light blur so gradients are gentle rather than blocky
    from scipy.ndimage import uniform_filter

    img = uniform_filter(img, size=(5, 5, 1))
    return np.clip(img, 0, 255).astype(np.uint8)


class TestSlicSegment:
    def test_uniform_image_gives_exact_grid(self):
        lab = srgb_to_lab(np.full((64, 64, 3), 90, np.uint8))
        part = slic_segment(lab, SlicParams(num_superpixels=16))
        assert part.num_blocks == 16
        assert part.block_sizes.tolist() == [256] * 16
        for i in range(4):
            for j in range(4):
                square = part.labels[16 * i : 16 * (i + 1), 16 * j : 16 * (j + 1)]
                assert np.unique(square).size == 1

    def test_single_cluster_covers_image(self):
        lab = srgb_to_lab(np.full((10, 14, 3), 30, np.uint8))
        part = slic_segment(lab, SlicParams(num_superpixels=1))
        assert part.num_blocks == 1
        assert part.block_sizes.tolist() == [140]

    def test_bicolor_blocks_respect_the_edge(self):
        img = np.zeros((128, 128, 3), np.uint8)
        img[:, :64] = (255, 0, 0)
        img[:, 64:] = (0, 0, 255)
        part = slic_segment(srgb_to_lab(img), SlicParams(num_superpixels=16))
        for k in range(part.num_blocks):
            xs = np.nonzero(part.labels == k)[1]
            assert xs.min() > 63 or xs.max() < 64, f"block {k} straddles the edge"
        gt = (np.arange(128)[None, :] >= 64) * np.ones((128, 1), dtype=np.int64)
        assert spx_boundary_recall(part, gt.astype(np.int64), 2) >= 0.95

    def test_lambda_above_pixel_count_rejected(self):
        lab = srgb_to_lab(np.full((4, 4, 3), 10, np.uint8))
        with pytest.raises(ValueError, match="exceeds"):
            slic_segment(lab, SlicParams(num_superpixels=17))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            SlicParams(num_superpixels=0)
        with pytest.raises(ValueError):
            SlicParams(num_superpixels=5, compactness=0.0)
        with pytest.raises(ValueError):
            SlicParams(num_superpixels=5, max_iterations=0)

    def test_deterministic(self):
        img = smooth_random_image(11)
        lab = srgb_to_lab(img)
        a = slic_segment(lab, SlicParams(num_superpixels=20))
        b = slic_segment(lab, SlicParams(num_superpixels=20))
        assert np.array_equal(a.labels, b.labels)

    def test_valid_on_random_inputs(self):
        for seed in range(6):
            rng = np.random.default_rng(seed)
            h, w = (int(v) for v in rng.integers(8, 33, 2))
            lam = int(rng.integers(1, max(2, h * w // 16)))
            img = rng.integers(0, 256, (h, w, 3)).astype(np.uint8)
            part = slic_segment(srgb_to_lab(img), SlicParams(num_superpixels=lam))
            assert validate_partition(part).ok, (seed, h, w, lam)

    def test_block_count_tolerance_on_smooth_images(self):
        for seed in range(5):
            img = smooth_random_image(seed)
            lam = 25  # <= (64*64)/64
            part = slic_segment(srgb_to_lab(img), SlicParams(num_superpixels=lam))
            assert abs(part.num_blocks - lam) <= 0.5 * lam

    def test_blocks_fit_4s_window_around_centroid(self):
        for seed in (0, 1):
            img = smooth_random_image(seed)
            lam = 25
            part = slic_segment(srgb_to_lab(img), SlicParams(num_superpixels=lam))
            s = np.sqrt(64 * 64 / lam)
            for k in range(part.num_blocks):
                ys, xs = np.nonzero(part.labels == k)
                assert np.abs(ys - ys.mean()).max() <= 2 * s
                assert np.abs(xs - xs.mean()).max() <= 2 * s


class TestEnforceConnectivity:
    def test_orphan_absorbed(self):
        labels = np.ones((3, 3), dtype=np.int64)
        labels[1, 1] = 0
        part = enforce_connectivity(labels, min_size=2)
        assert part.num_blocks == 1
        assert part.block_sizes.tolist() == [9]

    def test_noop_when_regions_large_enough(self):
        labels = np.array([[3, 3, 8, 8], [3, 3, 8, 8]])
        part = enforce_connectivity(labels, min_size=2)
        assert part.labels.tolist() == [[0, 0, 1, 1], [0, 0, 1, 1]]

    def test_disconnected_label_splits(self):
        # label 0 appears as two 4-px components separated by label 1
        labels = np.array(
            [
                [0, 0, 1, 0, 0],
                [0, 0, 1, 0, 0],
                [1, 1, 1, 1, 1],
            ]
        )
        part = enforce_connectivity(labels, min_size=2)
        comp, ncomp = flood_fill_components(labels)
        assert part.num_blocks == ncomp == 3
        # every output block is 4-connected per the oracle
        for k in range(part.num_blocks):
            mask_ids = np.unique(comp[part.labels == k])
            assert mask_ids.size == 1

    def test_merge_prefers_longest_border(self):
        # small center region (2 px) touches label 1 on 3 sides (border 6)
        # and label 2 along one side (border 2)
        labels = np.array(
            [
                [1, 1, 1, 1],
                [1, 0, 0, 2],
                [1, 1, 1, 2],
                [2, 2, 2, 2],
            ]
        )
        part = enforce_connectivity(labels, min_size=3)
        # the zeros must join label 1's region
        zero_label = part.labels[1, 1]
        one_label = part.labels[0, 0]
        assert zero_label == one_label

    def test_all_outputs_connected_on_random_inputs(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            h, w = (int(v) for v in rng.integers(4, 12, 2))
            labels = rng.integers(0, 4, (h, w))
            part = enforce_connectivity(labels, min_size=int(rng.integers(1, 5)))
            assert validate_partition(part).ok
            comp, _ = flood_fill_components(part.labels)
            for k in range(part.num_blocks):
                assert np.unique(comp[part.labels == k]).size == 1
