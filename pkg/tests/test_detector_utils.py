"""Tests for nearest-point detection and error counting."""

import numpy as np
import pytest

from functions.constellation_utils import ConstellationUtils
from functions.detector_utils import DetectorUtils
from functions.errors import DomainError
from functions.models import Constellation

N_RANDOM = 100_000


class TestDetect:

    def test_bpsk_sign_rule(self, bpsk: Constellation) -> None:
        decided = DetectorUtils.detect(bpsk, np.array([0.3, -0.01, 2.0, -5.0]))
        np.testing.assert_array_equal(bpsk.points[decided].real, [1.0, -1.0, 1.0, -1.0])

    def test_pam_midpoint_tie_goes_to_lower_index(self, pam4: Constellation) -> None:
        # midpoint between the raw levels -1 and +1 is 0
        decided = DetectorUtils.detect(pam4, np.array([0.0 + 0j]))
        candidates = np.flatnonzero(np.isclose(np.abs(pam4.points), pam4.scale))
        assert decided[0] == candidates.min()

    def test_exact_points(self, qam16: Constellation) -> None:
        np.testing.assert_array_equal(DetectorUtils.detect(qam16, qam16.points), np.arange(16))

    @pytest.mark.parametrize("builder", [
        ConstellationUtils.build_bpsk,
        lambda: ConstellationUtils.build_pam(4),
        lambda: ConstellationUtils.build_pam(8),
        lambda: ConstellationUtils.build_qam(4),
        lambda: ConstellationUtils.build_qam(16),
        lambda: ConstellationUtils.build_qam(64),
    ])
    def test_noiseless_round_trip(self, builder) -> None:
        c = builder()
        bits = np.random.default_rng(11).integers(0, 2, size=600 * c.bits_per_symbol, dtype=np.uint8)
        recovered = DetectorUtils.demap_symbols(c, ConstellationUtils.map_bits(c, bits))
        np.testing.assert_array_equal(recovered, bits)


class TestThresholdEquivalence:

    def test_four_pam_explicit_thresholds(self, pam4: Constellation) -> None:
        y = np.random.default_rng(5).uniform(-2.0, 2.0, N_RANDOM)
        thresholds = np.array([-2.0, 0.0, 2.0]) * pam4.scale
        level_pos = np.searchsorted(thresholds, y)
        by_threshold = level_pos ^ (level_pos >> 1)
        np.testing.assert_array_equal(DetectorUtils.detect(pam4, y), by_threshold)

    @pytest.mark.parametrize("M", [4, 16, 64])
    def test_qam_rails_match_joint_detection(self, M: int) -> None:
        c = ConstellationUtils.build_qam(M)
        rng = np.random.default_rng(M)
        y = rng.uniform(-1.6, 1.6, N_RANDOM) + 1j * rng.uniform(-1.6, 1.6, N_RANDOM)
        np.testing.assert_array_equal(DetectorUtils.detect_by_rails(c, y), DetectorUtils.detect(c, y))

    def test_pam_rails_match_joint_detection(self) -> None:
        c = ConstellationUtils.build_pam(8)
        y = np.random.default_rng(8).uniform(-2.0, 2.0, N_RANDOM)
        np.testing.assert_array_equal(DetectorUtils.detect_by_rails(c, y), DetectorUtils.detect(c, y))


class TestCountErrors:

    def test_identical_streams(self, qam16: Constellation) -> None:
        sent = np.arange(16).repeat(3)
        counts = DetectorUtils.count_errors(qam16, sent, sent)
        assert (counts.symbols, counts.symbol_errors, counts.bits, counts.bit_errors) == (48, 0, 192, 0)

    def test_adjacent_neighbour_costs_one_bit(self, qam16: Constellation) -> None:
        by_position = {tuple(p): i for i, p in enumerate(qam16.positions)}
        sent, decided = by_position[(1, 1)], by_position[(2, 1)]
        counts = DetectorUtils.count_errors(qam16, [sent], [decided])
        assert counts.symbol_errors == 1
        assert counts.bit_errors == 1

    def test_all_wrong_bpsk(self, bpsk: Constellation) -> None:
        sent = np.array([0, 1, 1, 0, 1])
        counts = DetectorUtils.count_errors(bpsk, sent, 1 - sent)
        assert counts.bit_errors == 5
        assert counts.symbol_errors == 5

    def test_length_mismatch(self, bpsk: Constellation) -> None:
        with pytest.raises(DomainError):
            DetectorUtils.count_errors(bpsk, [0, 1], [0])

    def test_counts_add_field_wise(self, qpsk: Constellation) -> None:
        a = DetectorUtils.count_errors(qpsk, [0, 1], [0, 2])
        b = DetectorUtils.count_errors(qpsk, [3], [0])
        total = a + b
        assert (total.symbols, total.symbol_errors, total.bits) == (3, 2, 6)
        assert total.bit_errors == a.bit_errors + b.bit_errors
