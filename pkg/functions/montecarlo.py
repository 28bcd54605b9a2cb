import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from functions.channel_utils import ChannelUtils
from functions.constellation_utils import ConstellationUtils
from functions.detector_utils import DetectorUtils
from functions.errors import DomainError
from functions.models import ChannelKind, Constellation, ErrorCount, MonteCarloResult, SnrPoint, StoppingRule

logger = logging.getLogger(__name__)

Z95 = 1.96


def wald_halfwidth(p_hat: float, n: int) -> float:
    """95% Wald half-width 1.96 sqrt(p(1-p)/n), clamped to [0, 1]."""
    if n <= 0:
        return 1.0
    hw = Z95 * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)
    return min(max(hw, 0.0), 1.0)


def run_batch(c: Constellation, channel: ChannelKind, snr: SnrPoint, n: int,
              seed: int, key: Tuple[int, ...]) -> ErrorCount:
    """
    One batch: uniform bits -> map -> channel (equalized for Rayleigh) -> detect -> count.
    All draws come from substream (seed, *key).
    """
    rng = ChannelUtils.make_rng((seed, *key))
    bits = rng.integers(0, 2, size=n * c.bits_per_symbol, dtype=np.uint8)
    sent = ConstellationUtils.bits_to_indices(c, bits)
    received = ChannelUtils.apply(channel, c.points[sent], snr, rng, real=c.is_real)
    decided = DetectorUtils.detect(c, received)
    return DetectorUtils.count_errors(c, sent, decided)


def _batch_size(rule: StoppingRule, b: int) -> int:
    return min(rule.batch_size, rule.max_symbols - b * rule.batch_size)


def run(c: Constellation, channel: ChannelKind, snr: SnrPoint, rule: StoppingRule, seed: int,
        workers: int = 1, stream: Tuple[int, ...] = (0,)) -> MonteCarloResult:
    """
    Simulate until `rule.min_symbol_errors` symbol errors or `rule.max_symbols` symbols.

    Batch b draws from substream (seed, *stream, b). A standalone run is point 0
    of a sweep. With workers=1 the result is fully deterministic; with more
    workers batches run in rounds and the last round may overshoot the stop.
    """
    if seed < 0:
        raise DomainError(f"seed must be >= 0 (got {seed})")
    if workers < 1:
        raise DomainError(f"workers must be >= 1 (got {workers})")
    if snr.bits_per_symbol != c.bits_per_symbol:
        snr = SnrPoint(snr.ebn0_db, c.bits_per_symbol)

    logger.debug("run %s/%s at %.2f dB Eb/N0, seed=%d stream=%s", c.name, channel.value, snr.ebn0_db, seed, stream)
    started = time.perf_counter()
    total = ErrorCount()
    n_batches = -(-rule.max_symbols // rule.batch_size)

    if workers == 1:
        for b in range(n_batches):
            total = total + run_batch(c, channel, snr, _batch_size(rule, b), seed, (*stream, b))
            if total.symbol_errors >= rule.min_symbol_errors:
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for first in range(0, n_batches, workers):
                futures = [
                    pool.submit(run_batch, c, channel, snr, _batch_size(rule, b), seed, (*stream, b))
                    for b in range(first, min(first + workers, n_batches))
                ]
                # merge in batch order
                for fut in futures:
                    total = total + fut.result()
                if total.symbol_errors >= rule.min_symbol_errors:
                    break

    elapsed = time.perf_counter() - started
    ser_hat = total.symbol_errors / total.symbols
    ber_hat = total.bit_errors / total.bits
    low_confidence = total.symbol_errors < rule.min_symbol_errors
    if low_confidence:
        logger.warning("%s/%s at %.2f dB: only %d symbol errors in %d symbols (wanted %d)",
                       c.name, channel.value, snr.ebn0_db, total.symbol_errors, total.symbols,
                       rule.min_symbol_errors)

    return MonteCarloResult(
        scheme=c.name,
        channel=channel,
        snr=snr,
        counts=total,
        ser_hat=ser_hat,
        ber_hat=ber_hat,
        ci95_ser=wald_halfwidth(ser_hat, total.symbols),
        ci95_ber=wald_halfwidth(ber_hat, total.bits),
        seed=seed,
        elapsed=elapsed,
        low_confidence=low_confidence,
        stream=tuple(stream),
    )


def sweep(c: Constellation, channel: ChannelKind, snr_grid: Sequence[SnrPoint], rule: StoppingRule,
          seed: int, workers: int = 1, progress: bool = False) -> List[MonteCarloResult]:
    """One run per grid point; point i uses substream (seed, i). Results follow grid order."""
    grid = list(snr_grid)
    if not grid:
        raise DomainError("snr grid must not be empty")
    results: List[MonteCarloResult] = []
    for i, snr in enumerate(tqdm(grid, desc=f"{c.name}/{channel.value}", disable=not progress, leave=False)):
        results.append(run(c, channel, snr, rule, seed, workers=workers, stream=(i,)))
    return results
