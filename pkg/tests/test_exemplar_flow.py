import time

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from hysim_inpaint.config import FIXTURE_NAMES, EngineConfig, MeasureConfig
from hysim_inpaint.core import InpaintMask, PatchRef, RasterImage
from hysim_inpaint.errors import (
    DimensionMismatchError,
    EmptyFrontError,
    FullMaskError,
    NoSourceCandidateError,
    PatchSizeError,
)
from hysim_inpaint.flows import (
    ExemplarFlow,
    FillState,
    confidence_term,
    data_term,
    inpaint,
    priority,
    search_best,
    select_target,
    target_frame,
    transfer,
)
from hysim_inpaint.measures import MaskedPair, evaluate
from hysim_inpaint.tools import generate_fixture, region_bleed

SSD = MeasureConfig(family="ssd")
HYSIM = MeasureConfig(family="hysim", alpha=1.0, beta=1.0, p_exponent=2.0)
CHEBYSHEV = MeasureConfig(family="chebyshev")

ORACLE_MEASURES = [
    SSD,
    CHEBYSHEV,
    MeasureConfig(family="minkowski", p_exponent=3.0),
    HYSIM,
]


def _state(image, pixels=()):
    image = np.asarray(image, dtype=np.float64)
    mask = np.zeros(image.shape[:2], dtype=np.uint8)
    for r, c in pixels:
        mask[r, c] = 1
    return FillState.start(RasterImage(image), InpaintMask(mask))


def _oracle(state, target, measure):
    """Brute-force double loop over every source window."""
    frame, known = target_frame(state, target)
    known_vec = np.repeat(known.ravel(), state.image.channels)
    height, width = state.mask.shape
    h = target.half
    best, best_distance = None, np.inf
    for r in range(h, height - h):
        for c in range(h, width - h):
            if state.mask.data[r - h:r + h + 1, c - h:c + h + 1].any():
                continue
            window = state.image.data[r - h:r + h + 1, c - h:c + h + 1]
            distance = evaluate(MaskedPair(frame.ravel(), window.ravel(), known_vec), measure)
            if distance < best_distance:
                best, best_distance = (r, c), distance
    return best, best_distance


@pytest.fixture(scope="module")
def fixture_fills():
    """Every fixture at 64x64 filled under SSD, Chebyshev and HySim."""
    results = {}
    for name in FIXTURE_NAMES:
        image, mask, regions = generate_fixture(name, 64)
        for measure in (SSD, CHEBYSHEV, HYSIM):
            original = image.data.copy()
            filled, report = inpaint(image, mask, EngineConfig(measure=measure, threads=2))
            results[name, measure.family] = {
                "image": image,
                "original": original,
                "mask": mask,
                "regions": regions,
                "filled": filled,
                "report": report,
            }
    return results


class TestPriority:
    def test_confidence_of_fresh_isolated_pixel(self):
        state = _state(np.full((12, 12), 50.0), [(6, 6)])
        assert confidence_term(state, (6, 6), 3) == pytest.approx(8 / 9)
        assert confidence_term(state, (6, 6), 9) == pytest.approx(80 / 81)

    def test_confidence_counts_clipped_windows_over_full_area(self):
        state = _state(np.full((12, 12), 50.0), [(0, 0)])
        assert confidence_term(state, (0, 0), 3) == pytest.approx(3 / 9)

    def test_data_term_edge_crossing_the_front(self):
        image = np.zeros((20, 20))
        image[:, :10] = 100.0
        state = _state(image, [(r, c) for r in range(12, 20) for c in range(20)])
        assert data_term(state, (12, 10), 9) == pytest.approx(50.0 / 255.0)

    def test_data_term_edge_parallel_to_the_front(self):
        image = np.zeros((20, 20))
        image[10:, :] = 100.0
        state = _state(image, [(r, c) for r in range(12, 20) for c in range(20)])
        assert data_term(state, (12, 10), 9) == 1e-3

    def test_data_term_floor_on_flat_image(self):
        state = _state(np.full((12, 12), 50.0), [(6, 6)])
        assert data_term(state, (6, 6), 3) == 1e-3
        assert data_term(state, (6, 6), 3, floor=0.01) == 0.01

    def test_priority_is_the_product(self):
        state = _state(np.full((12, 12), 50.0), [(6, 6)])
        assert priority(state, (6, 6), 3) == pytest.approx(8 / 9 * 1e-3)

    def test_select_single_front_pixel(self):
        state = _state(np.full((12, 12), 50.0), [(4, 7)])
        assert select_target(state, 3) == PatchRef((4, 7), 3)

    def test_select_prefers_higher_confidence(self):
        # The pair comes first in row-major order but each of its pixels sees one less known neighbor.
        state = _state(np.full((12, 12), 50.0), [(3, 3), (3, 4), (8, 8)])
        assert select_target(state, 3).center == (8, 8)

    def test_select_tie_goes_to_first_in_row_major(self):
        state = _state(np.full((12, 12), 50.0), [(8, 8), (2, 2)])
        assert select_target(state, 3).center == (2, 2)

    def test_select_on_empty_front(self):
        state = _state(np.full((12, 12), 50.0))
        with pytest.raises(EmptyFrontError):
            select_target(state, 3)


class TestSearch:
    def test_finds_exact_copy(self, rng):
        image = rng.uniform(0, 255, (20, 20, 3))
        image[1:10, 1:10] = image[10:19, 10:19]
        state = _state(image, [(5, 5)])
        target = select_target(state, 9)
        source, distance = search_best(state, target, EngineConfig(measure=SSD, threads=1))
        assert source.center == (14, 14)
        assert distance == 0.0

    def test_uniform_image_takes_first_candidate(self):
        state = _state(np.full((12, 12), 50.0), [(9, 9)])
        target = select_target(state, 3)
        source, distance = search_best(state, target, EngineConfig(patch_side=3, threads=1))
        assert source.center == (1, 1)
        assert distance == 0.0

    def test_no_candidate(self):
        state = _state(np.full((10, 10), 50.0), [(5, 5)])
        with pytest.raises(NoSourceCandidateError):
            search_best(state, PatchRef((5, 5), 9), EngineConfig(threads=1))

    @pytest.mark.parametrize("measure", ORACLE_MEASURES, ids=lambda m: m.label())
    def test_matches_brute_force(self, rng, measure):
        cfg = EngineConfig(patch_side=7, measure=measure, threads=3)
        for _ in range(20):
            image = rng.uniform(0, 255, (32, 32, 3))
            hole_h, hole_w = rng.integers(5, 10, size=2)
            top, left = rng.integers(0, 32 - hole_h + 1), rng.integers(0, 32 - hole_w + 1)
            pixels = [(r, c) for r in range(top, top + hole_h) for c in range(left, left + hole_w)]
            state = _state(image, pixels)
            target = select_target(state, cfg.patch_side)

            source, distance = search_best(state, target, cfg)
            expected_center, expected_distance = _oracle(state, target, measure)
            assert source.center == expected_center
            assert distance == pytest.approx(expected_distance, rel=1e-12)


class TestTransfer:
    def test_fully_known_target_is_a_no_op(self, rng):
        state = _state(rng.uniform(0, 255, (10, 10)), [(5, 5), (5, 6), (6, 5), (6, 6)])
        before = state.image.data.copy()
        transfer(state, PatchRef((1, 1), 3), PatchRef((8, 8), 3))
        assert_array_equal(state.image.data, before)
        assert state.mask.target_count() == 4

    def test_fills_only_unknown_pixels(self, rng):
        state = _state(rng.uniform(0, 255, (10, 10)), [(5, 5), (5, 6), (6, 5), (6, 6)])
        before = state.image.data.copy()
        transfer(state, PatchRef((5, 5), 3), PatchRef((1, 1), 3))

        assert state.mask.target_count() == 0
        for (r, c), (sr, sc) in {(5, 5): (1, 1), (5, 6): (1, 2), (6, 5): (2, 1), (6, 6): (2, 2)}.items():
            assert_array_equal(state.image.data[r, c], before[sr, sc])
            assert state.confidence.values[r, c] == pytest.approx(5 / 9)
        untouched = np.ones((10, 10), dtype=bool)
        untouched[5:7, 5:7] = False
        assert_array_equal(state.image.data[untouched], before[untouched])


class TestInpaint:
    def test_empty_mask_returns_input(self, rng):
        image = RasterImage(rng.uniform(0, 255, (16, 16)))
        filled, report = inpaint(image, InpaintMask(np.zeros((16, 16), dtype=np.uint8)))
        assert_array_equal(filled.data, image.data)
        assert report.iterations == 0

    def test_single_pixel_in_constant_image(self):
        image = RasterImage(np.full((24, 24), 90.0))
        mask = np.zeros((24, 24), dtype=np.uint8)
        mask[8, 8] = 1
        filled, report = inpaint(image, InpaintMask(mask), EngineConfig(threads=1))
        assert_array_equal(filled.data, image.data)
        assert report.iterations == 1
        assert report.remaining_target == 0

    def test_full_mask(self):
        with pytest.raises(FullMaskError):
            inpaint(RasterImage(np.zeros((16, 16))), InpaintMask(np.ones((16, 16), dtype=np.uint8)))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            inpaint(RasterImage(np.zeros((16, 16))), InpaintMask(np.zeros((12, 12), dtype=np.uint8)))

    def test_patch_larger_than_image(self):
        with pytest.raises(PatchSizeError):
            inpaint(RasterImage(np.zeros((8, 8))), InpaintMask(np.zeros((8, 8), dtype=np.uint8)))

    def test_no_source_window(self):
        mask = np.zeros((10, 10), dtype=np.uint8)
        mask[5, 5] = 1
        with pytest.raises(NoSourceCandidateError):
            inpaint(RasterImage(np.full((10, 10), 50.0)), InpaintMask(mask), EngineConfig(threads=1))

    def test_iteration_cap(self):
        image, mask, _ = generate_fixture("two_tone_dot", 64)
        _, report = inpaint(image, mask, EngineConfig(max_iterations=1, threads=1))
        assert report.iterations == 1
        assert 0 < report.remaining_target < report.initial_target

    def test_snapshots(self):
        image, mask, _ = generate_fixture("two_tone_dot", 32)
        _, report = inpaint(image, mask, EngineConfig(snapshot_every=1, threads=1))
        assert len(report.snapshots) == report.iterations
        assert [s.iteration for s in report.snapshots] == list(range(1, report.iterations + 1))

    def test_step_by_step(self):
        image, mask, _ = generate_fixture("curve_gap", 32)
        flow = ExemplarFlow(image, mask, EngineConfig(threads=1))
        record = flow.step()
        assert record.iteration == 1
        assert record.filled == mask.target_count() - flow.state.mask.target_count()

    def test_deterministic_across_thread_counts(self):
        image, mask, _ = generate_fixture("two_tone_dot", 48)
        one, one_report = inpaint(image, mask, EngineConfig(threads=1))
        four, four_report = inpaint(image, mask, EngineConfig(threads=4))
        again, _ = inpaint(image, mask, EngineConfig(threads=4))
        assert_array_equal(one.data, four.data)
        assert_array_equal(four.data, again.data)
        assert one_report.records == four_report.records

    def test_default_size_finishes_quickly(self):
        image, mask, _ = generate_fixture("two_tone_dot", 128)
        started = time.perf_counter()
        _, report = inpaint(image, mask)
        assert report.remaining_target == 0
        assert time.perf_counter() - started < 60.0


class TestFixtureFills:
    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    @pytest.mark.parametrize("family", ["ssd", "chebyshev", "hysim"])
    def test_terminates_and_keeps_known_pixels(self, fixture_fills, name, family):
        run = fixture_fills[name, family]
        report, known = run["report"], run["mask"].source

        assert report.remaining_target == 0
        assert report.iterations <= report.initial_target
        assert all(record.filled >= 1 for record in report.records)
        assert_array_equal(run["filled"].data[known], run["original"][known])
        # The caller's image is never written to.
        assert_array_equal(run["image"].data, run["original"])

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_first_target_ignores_the_measure(self, fixture_fills, name):
        targets = {fixture_fills[name, family]["report"].records[0].target for family in ("ssd", "chebyshev", "hysim")}
        assert len(targets) == 1

    @pytest.mark.parametrize("family", ["ssd", "hysim"])
    def test_two_tone_first_match_is_exact(self, fixture_fills, family):
        assert fixture_fills["two_tone_dot", family]["report"].records[0].distance == 0.0

    @pytest.mark.parametrize("name", ["two_tone_dot", "two_region_straddle"])
    def test_hysim_keeps_regions_apart(self, fixture_fills, name):
        run = fixture_fills[name, "hysim"]
        assert region_bleed(run["filled"], run["regions"], run["mask"]) <= 0.02

    def test_hysim_bleeds_no_more_than_ssd(self, fixture_fills):
        def mean_bleed(family):
            runs = [fixture_fills[name, family] for name in FIXTURE_NAMES]
            return np.mean([region_bleed(r["filled"], r["regions"], r["mask"]) for r in runs])

        assert mean_bleed("hysim") <= mean_bleed("ssd")
