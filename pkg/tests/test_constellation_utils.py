"""Tests for the BPSK, M-PAM and square M-QAM builders and the bit mapping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from functions.constellation_utils import ConstellationUtils
from functions.errors import DomainError
from functions.models import Constellation, Region, Scheme

QAM_ORDERS = [4, 16, 64]
PAM_ORDERS = [4, 8, 16]


def hamming(a: str, b: str) -> int:
    return sum(x != y for x, y in zip(a, b))


class TestBuildBpsk:

    def test_points_and_labels(self, bpsk: Constellation) -> None:
        np.testing.assert_array_equal(bpsk.points, np.array([-1 + 0j, 1 + 0j]))
        assert bpsk.labels == ("0", "1")
        assert bpsk.bits_per_symbol == 1
        assert bpsk.is_real

    def test_map_bits(self, bpsk: Constellation) -> None:
        np.testing.assert_array_equal(ConstellationUtils.map_bits(bpsk, [1, 0]), np.array([1 + 0j, -1 + 0j]))


class TestBuildPam:

    def test_four_pam_alphabet(self, pam4: Constellation) -> None:
        assert pam4.raw_energy == 5.0
        np.testing.assert_array_equal(np.sort(pam4.raw_points.real), np.array([-3.0, -1.0, 1.0, 3.0]))
        assert pam4.scale == pytest.approx(1 / np.sqrt(5.0))

    def test_eight_pam_energy_is_brute_force_mean(self) -> None:
        c = ConstellationUtils.build_pam(8)
        assert c.raw_energy == 21.0
        assert np.mean(np.abs(c.raw_points) ** 2) == pytest.approx(21.0, abs=1e-12)

    @pytest.mark.parametrize("M", PAM_ORDERS)
    def test_gray_along_level_axis(self, M: int) -> None:
        c = ConstellationUtils.build_pam(M)
        order = np.argsort(c.points.real)
        for a, b in zip(order[:-1], order[1:]):
            assert hamming(c.labels[a], c.labels[b]) == 1

    @pytest.mark.parametrize("M", [1, 2, 3, 6, 12])
    def test_invalid_order(self, M: int) -> None:
        with pytest.raises(DomainError):
            ConstellationUtils.build_pam(M)


class TestBuildQam:

    def test_qpsk_points(self, qpsk: Constellation) -> None:
        assert qpsk.raw_energy == 2.0
        expected = {complex(i, q) for i in (-1, 1) for q in (-1, 1)}
        assert set(qpsk.raw_points.tolist()) == expected

    def test_reference_energies(self, qam16: Constellation, qam64: Constellation) -> None:
        assert qam16.raw_energy == 10.0
        assert qam64.raw_energy == 42.0

    @pytest.mark.parametrize("M", QAM_ORDERS + [256])
    def test_brute_force_energy(self, M: int) -> None:
        c = ConstellationUtils.build_qam(M)
        assert np.mean(np.abs(c.raw_points) ** 2) == pytest.approx(2.0 * (M - 1) / 3.0, abs=1e-12)

    @pytest.mark.parametrize("M", QAM_ORDERS)
    def test_gray_adjacency(self, M: int) -> None:
        c = ConstellationUtils.build_qam(M)
        by_position = {tuple(p): i for i, p in enumerate(c.positions)}
        for (i_pos, q_pos), idx in by_position.items():
            for neighbour in ((i_pos + 1, q_pos), (i_pos, q_pos + 1)):
                if neighbour in by_position:
                    assert hamming(c.labels[idx], c.labels[by_position[neighbour]]) == 1

    def test_first_half_of_bits_is_i_rail(self, qam16: Constellation) -> None:
        # points sharing the two leading bits share the in-phase level
        for prefix in ("00", "01", "10", "11"):
            reals = {round(p.real, 12) for p, lab in zip(qam16.points, qam16.labels) if lab.startswith(prefix)}
            assert len(reals) == 1

    @pytest.mark.parametrize("M", [2, 8, 32, 128, 12])
    def test_invalid_order(self, M: int) -> None:
        with pytest.raises(DomainError):
            ConstellationUtils.build_qam(M)

    def test_points_are_read_only(self, qam16: Constellation) -> None:
        with pytest.raises(ValueError):
            qam16.points[0] = 0


@pytest.mark.parametrize("builder", [
    ConstellationUtils.build_bpsk,
    lambda: ConstellationUtils.build_pam(4),
    lambda: ConstellationUtils.build_pam(8),
    lambda: ConstellationUtils.build_qam(4),
    lambda: ConstellationUtils.build_qam(16),
    lambda: ConstellationUtils.build_qam(64),
    lambda: ConstellationUtils.build_qam(256),
])
def test_normalized_energy(builder) -> None:
    assert abs(ConstellationUtils.mean_energy(builder()) - 1.0) <= 1e-12


def test_label_index_convention(qam64: Constellation) -> None:
    for i, label in enumerate(qam64.labels):
        assert int(label, 2) == i


class TestClassifyPoints:

    @pytest.mark.parametrize("M, counts", [(4, (4, 0, 0)), (16, (4, 8, 4)), (64, (4, 24, 36))])
    def test_counts(self, M: int, counts: tuple) -> None:
        pc = ConstellationUtils.classify_points(ConstellationUtils.build_qam(M))
        assert pc.counts == counts
        assert sum(pc.counts) == M
        assert pc.counts == ConstellationUtils.expected_counts(M)

    def test_corner_tags_are_the_largest_points(self, qam16: Constellation) -> None:
        pc = ConstellationUtils.classify_points(qam16)
        corners = [i for i, t in enumerate(pc.tags) if t == Region.CORNER]
        energies = np.abs(qam16.raw_points) ** 2
        assert all(energies[i] == 18.0 for i in corners)

    def test_rejects_non_qam(self, pam4: Constellation) -> None:
        with pytest.raises(DomainError):
            ConstellationUtils.classify_points(pam4)


class TestMapBits:

    def test_arity(self, qam16: Constellation) -> None:
        bits = np.random.default_rng(3).integers(0, 2, size=4 * 25)
        assert ConstellationUtils.map_bits(qam16, bits).shape == (25,)

    def test_length_mismatch(self, qam16: Constellation) -> None:
        with pytest.raises(DomainError):
            ConstellationUtils.map_bits(qam16, [0, 1, 1])

    @settings(max_examples=50)
    @given(st.lists(st.integers(min_value=0, max_value=1), min_size=6, max_size=120))
    def test_indices_round_trip(self, bits) -> None:
        c = ConstellationUtils.build_qam(64)
        bits = bits[: len(bits) - len(bits) % 6]
        idx = ConstellationUtils.bits_to_indices(c, bits)
        np.testing.assert_array_equal(ConstellationUtils.indices_to_bits(c, idx), np.array(bits, dtype=np.uint8))

    def test_scheme_tags(self, bpsk: Constellation, pam4: Constellation, qam16: Constellation) -> None:
        assert (bpsk.scheme, pam4.scheme, qam16.scheme) == (Scheme.BPSK, Scheme.MPAM, Scheme.MQAM)
        assert (bpsk.name, pam4.name, qam16.name) == ("BPSK", "4-PAM", "16-QAM")
