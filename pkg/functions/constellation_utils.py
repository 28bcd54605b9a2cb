import math
from typing import List, Sequence

import numpy as np

from functions.errors import DomainError
from functions.models import Constellation, PointClass, Region, Scheme


class ConstellationUtils:
    """
    Builders for BPSK, M-PAM and square M-QAM.

    Labels are binary-reflected Gray per rail; for QAM the I-rail bits come
    first, then the Q-rail bits. The point index equals the label's integer
    value, so `points[int(label, 2)]` is the labeled point.
    """

    @staticmethod
    def gray(n: int) -> int:
        return n ^ (n >> 1)

    @staticmethod
    def _pam_levels(levels: int) -> np.ndarray:
        # {-(L-1), ..., -1, +1, ..., +(L-1)} ascending
        return np.arange(-(levels - 1), levels, 2, dtype=float)

    @staticmethod
    def _is_power_of_two(m: int) -> bool:
        return isinstance(m, (int, np.integer)) and m >= 1 and (m & (m - 1)) == 0

    @staticmethod
    def build_bpsk() -> Constellation:
        # bit 0 -> -1, bit 1 -> +1
        raw = np.array([-1.0 + 0j, 1.0 + 0j])
        return Constellation(
            scheme=Scheme.BPSK,
            order=2,
            points=raw.copy(),
            labels=("0", "1"),
            raw_energy=1.0,
            scale=1.0,
            raw_points=raw,
            positions=np.array([[0, 0], [1, 0]]),
        )

    @staticmethod
    def build_pam(M: int) -> Constellation:
        if not ConstellationUtils._is_power_of_two(M) or M < 4:
            raise DomainError(f"M-PAM needs M a power of two >= 4 (got {M})")
        q = int(math.log2(M))
        levels = ConstellationUtils._pam_levels(M)
        raw_energy = (M * M - 1) / 3.0
        scale = 1.0 / math.sqrt(raw_energy)

        raw = np.zeros(M, dtype=complex)
        positions = np.zeros((M, 2), dtype=int)
        for pos, level in enumerate(levels):
            idx = ConstellationUtils.gray(pos)
            raw[idx] = level
            positions[idx] = (pos, 0)

        return Constellation(
            scheme=Scheme.MPAM,
            order=M,
            points=raw * scale,
            labels=tuple(format(i, f"0{q}b") for i in range(M)),
            raw_energy=raw_energy,
            scale=scale,
            raw_points=raw,
            positions=positions,
        )

    @staticmethod
    def build_qam(M: int) -> Constellation:
        if not ConstellationUtils._is_power_of_two(M) or M < 4:
            raise DomainError(f"M-QAM needs M a power of two >= 4 (got {M})")
        q = int(math.log2(M))
        if q % 2:
            raise DomainError(f"M-QAM needs an even number of bits per symbol; {M}-QAM is a cross constellation")
        side = int(round(math.sqrt(M)))
        half = q // 2
        levels = ConstellationUtils._pam_levels(side)
        raw_energy = 2.0 * (M - 1) / 3.0
        scale = 1.0 / math.sqrt(raw_energy)

        raw = np.zeros(M, dtype=complex)
        positions = np.zeros((M, 2), dtype=int)
        for i_pos, i_level in enumerate(levels):
            for q_pos, q_level in enumerate(levels):
                idx = (ConstellationUtils.gray(i_pos) << half) | ConstellationUtils.gray(q_pos)
                raw[idx] = complex(i_level, q_level)
                positions[idx] = (i_pos, q_pos)

        return Constellation(
            scheme=Scheme.MQAM,
            order=M,
            points=raw * scale,
            labels=tuple(format(i, f"0{q}b") for i in range(M)),
            raw_energy=raw_energy,
            scale=scale,
            raw_points=raw,
            positions=positions,
        )

    @staticmethod
    def classify_points(c: Constellation) -> PointClass:
        """Tag each QAM point as corner, side or inside by its lattice position."""
        if c.scheme != Scheme.MQAM:
            raise DomainError(f"classify_points needs an M-QAM constellation (got {c.name})")
        last = int(round(math.sqrt(c.order))) - 1
        tags: List[Region] = []
        for i_pos, q_pos in c.positions:
            on_edge = int(i_pos in (0, last)) + int(q_pos in (0, last))
            tags.append((Region.INSIDE, Region.SIDE, Region.CORNER)[on_edge])
        counts = (tags.count(Region.CORNER), tags.count(Region.SIDE), tags.count(Region.INSIDE))
        return PointClass(tags=tuple(tags), counts=counts)

    @staticmethod
    def expected_counts(M: int) -> tuple:
        side = int(round(math.sqrt(M)))
        return 4, 4 * (side - 2), (side - 2) ** 2

    @staticmethod
    def bits_to_indices(c: Constellation, bits: Sequence[int]) -> np.ndarray:
        q = c.bits_per_symbol
        bits = np.asarray(bits, dtype=np.uint8).ravel()
        if bits.size % q:
            raise DomainError(f"{bits.size} bits do not split into {q}-bit symbols for {c.name}")
        groups = bits.reshape(-1, q)
        weights = 1 << np.arange(q - 1, -1, -1)
        return groups.astype(np.int64) @ weights

    @staticmethod
    def indices_to_bits(c: Constellation, indices: Sequence[int]) -> np.ndarray:
        return c.label_bits[np.asarray(indices, dtype=np.int64)].ravel()

    @staticmethod
    def map_bits(c: Constellation, bits: Sequence[int]) -> np.ndarray:
        """Consecutive log2(M)-bit groups -> labeled points."""
        return c.points[ConstellationUtils.bits_to_indices(c, bits)]

    @staticmethod
    def mean_energy(c: Constellation) -> float:
        return float(np.mean(np.abs(c.points) ** 2))
