import math


def mc_band(ci95: float, p: float, n: int) -> float:
    """
    Three times the larger of the estimated 95% half-width and the one implied
    by the reference probability, so a point with zero observed errors still
    gets a band.
    """
    return 3.0 * max(ci95, 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / n))
