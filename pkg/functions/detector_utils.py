import math
from typing import Sequence

import numpy as np

from functions.constellation_utils import ConstellationUtils
from functions.errors import DomainError
from functions.models import Constellation, ErrorCount, Scheme

# rows per chunk when building the distance matrix
_CHUNK = 16384


class DetectorUtils:
    """
    Hard-decision maximum-likelihood detection (nearest point) and error counting.
    Exact midpoint ties go to the smaller symbol index.
    """

    @staticmethod
    def detect(c: Constellation, received: np.ndarray) -> np.ndarray:
        y = np.asarray(received, dtype=complex).ravel()
        pr, pi = c.points.real, c.points.imag
        out = np.empty(y.size, dtype=np.int64)
        for start in range(0, y.size, _CHUNK):
            chunk = y[start:start + _CHUNK]
            dist = (chunk.real[:, None] - pr[None, :]) ** 2 + (chunk.imag[:, None] - pi[None, :]) ** 2
            # argmin returns the first minimum, i.e. the smaller index on ties
            out[start:start + _CHUNK] = np.argmin(dist, axis=1)
        return out

    @staticmethod
    def _rail_decide(values: np.ndarray, levels: int, scale: float) -> np.ndarray:
        """Slice one rail against midpoint thresholds; returns lattice position 0..L-1."""
        # thresholds sit at even raw amplitudes between adjacent odd levels
        raw = values / scale
        pos = np.floor((raw + levels) / 2.0).astype(np.int64)
        return np.clip(pos, 0, levels - 1)

    @staticmethod
    def detect_by_rails(c: Constellation, received: np.ndarray) -> np.ndarray:
        """
        Independent I/Q slicing for PAM/QAM grids. Agrees with `detect` except
        on exact threshold ties, which have probability zero.
        """
        y = np.asarray(received, dtype=complex).ravel()
        if c.scheme == Scheme.MQAM:
            side = int(round(math.sqrt(c.order)))
            half = c.bits_per_symbol // 2
            i_pos = DetectorUtils._rail_decide(y.real, side, c.scale)
            q_pos = DetectorUtils._rail_decide(y.imag, side, c.scale)
            gray_i = i_pos ^ (i_pos >> 1)
            gray_q = q_pos ^ (q_pos >> 1)
            return (gray_i << half) | gray_q
        pos = DetectorUtils._rail_decide(y.real, c.order, c.scale)
        return pos ^ (pos >> 1)

    @staticmethod
    def count_errors(c: Constellation, sent: Sequence[int], decided: Sequence[int]) -> ErrorCount:
        sent = np.asarray(sent, dtype=np.int64).ravel()
        decided = np.asarray(decided, dtype=np.int64).ravel()
        if sent.size != decided.size:
            raise DomainError(f"sent ({sent.size}) and decided ({decided.size}) lengths differ")
        q = c.bits_per_symbol
        bits = c.label_bits
        bit_errors = int(np.count_nonzero(bits[sent] != bits[decided]))
        return ErrorCount(
            symbols=int(sent.size),
            symbol_errors=int(np.count_nonzero(sent != decided)),
            bits=int(sent.size) * q,
            bit_errors=bit_errors,
        )

    @staticmethod
    def demap_symbols(c: Constellation, received: np.ndarray) -> np.ndarray:
        """Nearest point -> its label bits, the inverse of map_bits on noiseless input."""
        return ConstellationUtils.indices_to_bits(c, DetectorUtils.detect(c, received))
