import numpy as np
import pytest
from numpy.testing import assert_array_equal

from hysim_inpaint.config import FIXTURE_NAMES
from hysim_inpaint.core import InpaintMask, RasterImage
from hysim_inpaint.errors import DimensionMismatchError, FixtureError, ImageValidationError
from hysim_inpaint.tools import RegionSpec, generate_fixture, psnr, region_bleed, render_regions


class TestPSNR:
    def test_identical_is_capped(self, rng):
        image = RasterImage(rng.uniform(0, 255, (8, 8, 3)))
        assert psnr(image, image) == 99.0

    def test_full_scale_error_is_zero_db(self):
        assert psnr(RasterImage(np.zeros((4, 4))), RasterImage(np.full((4, 4), 255.0))) == pytest.approx(0.0)

    def test_one_pixel_off(self):
        a = np.zeros((16, 16))
        b = a.copy()
        b[3, 3] = 16.0
        assert psnr(RasterImage(a), RasterImage(b)) == pytest.approx(48.1308, abs=1e-4)

    def test_symmetric_and_decreasing(self, rng):
        a = RasterImage(rng.uniform(50, 200, (8, 8)))
        near = RasterImage(a.data + 1.0)
        far = RasterImage(a.data + 20.0)
        assert psnr(a, near) == psnr(near, a)
        assert psnr(a, far) < psnr(a, near)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            psnr(RasterImage(np.zeros((4, 4))), RasterImage(np.zeros((4, 5))))


class TestRegionBleed:
    @pytest.fixture
    def flat(self):
        spec = RegionSpec(labels=np.zeros((10, 10), dtype=int), palette={0: (10.0, 10.0, 10.0)})
        mask = np.zeros((10, 10), dtype=np.uint8)
        mask[2:8, :] = 1
        return spec, InpaintMask(mask)

    def test_perfect_fill(self, flat):
        spec, mask = flat
        assert region_bleed(render_regions(spec), spec, mask) == 0.0

    def test_all_wrong(self, flat):
        spec, mask = flat
        assert region_bleed(RasterImage(np.full((10, 10, 3), 200.0)), spec, mask) == 1.0

    def test_three_of_sixty_wrong(self, flat):
        spec, mask = flat
        result = render_regions(spec).data
        result[2, 0:3] = 100.0
        assert region_bleed(RasterImage(result), spec, mask) == pytest.approx(0.05)

    def test_tolerance_is_inclusive(self, flat):
        spec, mask = flat
        result = render_regions(spec).data
        result[mask.target] += 10.0
        assert region_bleed(RasterImage(result), spec, mask) == 0.0

    def test_empty_target(self, flat):
        spec, _ = flat
        empty = InpaintMask(np.zeros((10, 10), dtype=np.uint8))
        assert region_bleed(render_regions(spec), spec, empty) == 0.0

    def test_palette_must_cover_labels(self):
        with pytest.raises(ImageValidationError):
            RegionSpec(labels=np.array([[0, 1]]), palette={0: (0.0, 0.0, 0.0)})


class TestFixtures:
    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_deterministic_and_self_labeled(self, name):
        image, mask, regions = generate_fixture(name, 64)
        again, again_mask, _ = generate_fixture(name, 64)
        assert_array_equal(image.data, again.data)
        assert_array_equal(mask.data, again_mask.data)

        assert image.data.shape == (64, 64, 3)
        assert regions.labels.shape == (64, 64)
        assert 0 < mask.target_count() < 64 * 64
        known = mask.source
        assert_array_equal(render_regions(regions).data[known], image.data[known])

    @pytest.mark.parametrize("name", ["two_tone_dot", "curve_gap", "two_region_straddle"])
    def test_hole_color_is_foreign(self, name):
        image, mask, regions = generate_fixture(name, 64)
        assert region_bleed(image, regions, mask) == 1.0

    def test_two_tone_dot_layout(self):
        image, mask, regions = generate_fixture("two_tone_dot", 64)
        assert_array_equal(image.data[0, 0], [128.0, 128.0, 128.0])
        assert_array_equal(image.data[63, 63], [0.0, 0.0, 0.0])
        # Lattice points inside a radius-6 disk.
        assert mask.target_count() == 113
        assert mask.data[32, 32] == 1
        assert set(np.unique(regions.labels)) == {0, 1}

    def test_two_region_straddle_has_three_regions(self):
        _, mask, regions = generate_fixture("two_region_straddle", 64)
        assert set(np.unique(regions.labels)) == {0, 1, 2}
        assert set(np.unique(regions.labels[mask.target])) == {0, 1}

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_palette_matches_labels(self, name):
        _, _, regions = generate_fixture(name, 64)
        assert set(regions.palette) == set(np.unique(regions.labels).tolist())

    def test_size_scales(self):
        image, _, _ = generate_fixture("curve_gap", 96)
        assert image.shape == (96, 96)

    def test_too_small(self):
        with pytest.raises(FixtureError):
            generate_fixture("two_tone_dot", 31)

    def test_unknown_name(self):
        with pytest.raises(FixtureError):
            generate_fixture("mona_lisa", 64)
