import logging
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from functions.errors import DomainError, NumericError
from functions.models import ChannelKind, ChannelRealization, SnrPoint

logger = logging.getLogger(__name__)

SeedLike = Union[int, Sequence[int], np.random.SeedSequence, np.random.Generator]


class ChannelUtils:
    """
    AWGN and flat Rayleigh fading for unit-energy constellations (Es = 1, N0 = 1/(Es/N0)).

    All randomness comes from Philox (a counter-based generator) keyed by a
    SeedSequence, so streams are identical across platforms. A tuple seed
    such as (seed, block) selects an independent substream.
    """

    @staticmethod
    def make_rng(seed: SeedLike) -> np.random.Generator:
        if isinstance(seed, np.random.Generator):
            return seed
        if isinstance(seed, np.random.SeedSequence):
            seq = seed
        elif isinstance(seed, (int, np.integer)):
            seq = np.random.SeedSequence(int(seed))
        else:
            parts = [int(s) for s in seed]
            if not parts:
                raise DomainError("seed tuple must not be empty")
            seq = np.random.SeedSequence(parts[0], spawn_key=tuple(parts[1:]))
        return np.random.Generator(np.random.Philox(seq))

    @staticmethod
    def _sigma(snr: SnrPoint) -> float:
        # per-dimension standard deviation sqrt(N0/2)
        n0 = snr.n0
        if math.isinf(n0):
            raise DomainError("Es/N0 = 0 gives unbounded noise")
        return math.sqrt(n0 / 2.0)

    @staticmethod
    def draw_noise(n: int, snr: SnrPoint, rng: np.random.Generator, real: bool) -> np.ndarray:
        sigma = ChannelUtils._sigma(snr)
        if real:
            return (sigma * rng.standard_normal(n)).astype(complex)
        return sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

    @staticmethod
    def draw_fades(n: int, rng: np.random.Generator) -> np.ndarray:
        """h = h_re + j h_im with each component N(0, 1/2), so E|h|^2 = 1."""
        return math.sqrt(0.5) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

    @staticmethod
    def awgn(symbols: np.ndarray, snr: SnrPoint, seed: SeedLike, real: Optional[bool] = None) -> np.ndarray:
        """
        y = x + n. Real constellations (real=True, inferred when None) get
        one-dimensional noise of variance N0/2; complex ones get N0/2 per quadrature.
        """
        x = np.asarray(symbols, dtype=complex)
        if real is None:
            real = bool(np.all(x.imag == 0))
        rng = ChannelUtils.make_rng(seed)
        return x + ChannelUtils.draw_noise(x.size, snr, rng, real)

    @staticmethod
    def rayleigh(symbols: np.ndarray, snr: SnrPoint, seed: SeedLike,
                 realization: Optional[ChannelRealization] = None) -> Tuple[np.ndarray, np.ndarray]:
        """
        y = h x + n with i.i.d. per-symbol complex fades and complex noise.
        Returns (received, fades). A given `realization` replaces the random draws.
        """
        x = np.asarray(symbols, dtype=complex)
        if realization is None:
            rng = ChannelUtils.make_rng(seed)
            fade = ChannelUtils.draw_fades(x.size, rng)
            noise = ChannelUtils.draw_noise(x.size, snr, rng, real=False)
        else:
            noise = np.asarray(realization.noise, dtype=complex)
            fade = np.ones(x.size, dtype=complex) if realization.fade is None \
                else np.asarray(realization.fade, dtype=complex)
            if noise.size != x.size or fade.size != x.size:
                raise DomainError("injected realization length does not match the symbol stream")
        return fade * x + noise, fade

    @staticmethod
    def equalize(received: np.ndarray, fade: np.ndarray) -> np.ndarray:
        """Perfect-CSI zero-forcing: y / h = x + n / h."""
        y = np.asarray(received, dtype=complex)
        h = np.asarray(fade, dtype=complex)
        if y.shape != h.shape:
            raise DomainError(f"received {y.shape} and fade {h.shape} lengths differ")
        if np.any(h == 0):
            raise NumericError("zero fade coefficient, cannot equalize")
        return y / h

    @staticmethod
    def instantaneous_snr(fade: np.ndarray, snr: SnrPoint) -> np.ndarray:
        """gamma = |h|^2 * Es/N0 for each symbol."""
        return np.abs(np.asarray(fade)) ** 2 * snr.esn0_linear

    @staticmethod
    def rayleigh_pdf(r: float) -> float:
        """Magnitude pdf for E|h|^2 = 1: 2 r exp(-r^2)."""
        if r < 0:
            return 0.0
        return 2.0 * r * math.exp(-r * r)

    @staticmethod
    def rayleigh_cdf(r: float) -> float:
        if r < 0:
            return 0.0
        return 1.0 - math.exp(-r * r)

    @staticmethod
    def apply(kind: ChannelKind, symbols: np.ndarray, snr: SnrPoint, seed: SeedLike,
              real: bool) -> np.ndarray:
        """Run one channel and hand back what the detector sees (equalized for Rayleigh)."""
        if kind == ChannelKind.IDENTITY:
            return np.asarray(symbols, dtype=complex)
        if kind == ChannelKind.AWGN:
            return ChannelUtils.awgn(symbols, snr, seed, real=real)
        if kind == ChannelKind.RAYLEIGH:
            received, fade = ChannelUtils.rayleigh(symbols, snr, seed)
            return ChannelUtils.equalize(received, fade)
        raise DomainError(f"unknown channel kind {kind!r}")

    @staticmethod
    def apply_blocked(kind: ChannelKind, symbols: np.ndarray, snr: SnrPoint, seed: int,
                      real: bool, block_size: int) -> np.ndarray:
        """Block k of the stream uses substream (seed, k); output is the concatenation."""
        if block_size < 1:
            raise DomainError(f"block_size must be >= 1 (got {block_size})")
        x = np.asarray(symbols, dtype=complex)
        blocks = [
            ChannelUtils.apply(kind, x[start:start + block_size], snr, (seed, k), real)
            for k, start in enumerate(range(0, x.size, block_size))
        ]
        return np.concatenate(blocks) if blocks else x.copy()
