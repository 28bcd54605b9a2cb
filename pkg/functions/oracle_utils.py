import logging
import math
import sys
from typing import Callable, Iterable, Optional

import pandas as pd

from functions.errors import DomainError
from functions.models import FadingIntegrand, QuadratureSpec, SnrPoint
from functions.specfun_utils import SpecFunUtils
from functions.theory_utils import TheoryUtils

logger = logging.getLogger(__name__)

_TINY = sys.float_info.min


class OracleUtils:
    """
    Numerical routes to the same error probabilities the closed forms give:

    - gamma domain: average a conditional error probability over the exponential
      SNR pdf, after mapping [0, inf) onto (0, 1] with gamma = -gamma_bar ln(u);
    - theta domain: swap the order of integration in the Craig forms so the
      inner SNR average collapses to the MGF 1/(1 + S gamma_bar).
    """

    @staticmethod
    def _coefficient(M: int) -> float:
        side = int(round(math.sqrt(M)))
        if side * side != M or M < 4 or int(math.log2(M)) % 2:
            raise DomainError(f"M-QAM needs M = 4, 16, 64, ... (got {M})")
        return (side - 1) / side

    @staticmethod
    def _positive(gamma_bar: float) -> float:
        gamma_bar = float(gamma_bar)
        if not gamma_bar > 0 or math.isnan(gamma_bar):
            raise DomainError(f"mean SNR must be > 0 (got {gamma_bar})")
        return gamma_bar

    # --------------------------
    # gamma domain
    # --------------------------
    @staticmethod
    def fading_average(f: FadingIntegrand, gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        """int_0^inf f(g) (1/gamma_bar) exp(-g/gamma_bar) dg, computed as int_0^1 f(-gamma_bar ln u) du."""
        gamma_bar = OracleUtils._positive(gamma_bar)

        def integrand(u: float) -> float:
            return f(-gamma_bar * math.log(max(u, _TINY)))

        return SpecFunUtils.adaptive_quad(integrand, 0.0, 1.0, spec, what="fading_average")

    @staticmethod
    def average_over_pdf(f: FadingIntegrand, pdf: Callable[[float], float], lower: float, upper: float,
                         spec: Optional[QuadratureSpec] = None) -> float:
        """Plain int f(g) pdf(g) dg on a finite window, for test densities other than the exponential."""
        if not upper > lower:
            raise DomainError(f"empty integration window [{lower}, {upper}]")
        return SpecFunUtils.adaptive_quad(lambda g: f(g) * pdf(g), lower, upper, spec, what="average_over_pdf")

    # --------------------------
    # theta domain
    # --------------------------
    @staticmethod
    def _mgf_integrand(M: int, gamma_bar: float) -> Callable[[float], float]:
        # 1 / (1 + a / (2 sin^2 t)) written as 2 sin^2 t / (2 sin^2 t + a), which is 0 at t = 0
        a = 3.0 * gamma_bar / (M - 1)

        def integrand(theta: float) -> float:
            s2 = 2.0 * math.sin(theta) ** 2
            return s2 / (s2 + a)

        return integrand

    @staticmethod
    def exact_p1(M: int, gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        """(4/pi) c int_0^{pi/2} MGF dtheta."""
        c = OracleUtils._coefficient(M)
        gamma_bar = OracleUtils._positive(gamma_bar)
        integral = SpecFunUtils.adaptive_quad(OracleUtils._mgf_integrand(M, gamma_bar), 0.0, math.pi / 2,
                                              spec, what="mqam_rayleigh part 1")
        return 4.0 / math.pi * c * integral

    @staticmethod
    def exact_p2(M: int, gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        """(4/pi) c^2 int_0^{pi/4} MGF dtheta."""
        c = OracleUtils._coefficient(M)
        gamma_bar = OracleUtils._positive(gamma_bar)
        integral = SpecFunUtils.adaptive_quad(OracleUtils._mgf_integrand(M, gamma_bar), 0.0, math.pi / 4,
                                              spec, what="mqam_rayleigh part 2")
        return 4.0 / math.pi * c * c * integral

    @staticmethod
    def mqam_rayleigh_oracle(M: int, gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        """Fading-averaged M-QAM SER as the difference of the two theta integrals, no approximation."""
        if math.isinf(gamma_bar):
            OracleUtils._coefficient(M)
            return 0.0
        return OracleUtils.exact_p1(M, gamma_bar, spec) - OracleUtils.exact_p2(M, gamma_bar, spec)

    @staticmethod
    def p1_closed_form(M: int, gamma_bar: float) -> float:
        """2c [1 - sqrt(a/(2 + a))], a = 3 gamma_bar / (M - 1)."""
        c = OracleUtils._coefficient(M)
        gamma_bar = OracleUtils._positive(gamma_bar)
        a = 3.0 * gamma_bar / (M - 1)
        return 2.0 * c * (1.0 - math.sqrt(a / (2.0 + a)))

    @staticmethod
    def p2_closed_form(M: int, gamma_bar: float) -> float:
        """c^2 [1 - sqrt(a/(2 + a)) (4/pi) atan(sqrt((2 + a)/a))]."""
        c = OracleUtils._coefficient(M)
        gamma_bar = OracleUtils._positive(gamma_bar)
        a = 3.0 * gamma_bar / (M - 1)
        r = math.sqrt(a / (2.0 + a))
        return c * c * (1.0 - r * 4.0 / math.pi * math.atan(1.0 / r))

    # --------------------------
    # AWGN through the Craig forms
    # --------------------------
    @staticmethod
    def bpsk_awgn_ber_craig(snr: SnrPoint, spec: Optional[QuadratureSpec] = None) -> float:
        return SpecFunUtils.q_craig(math.sqrt(2.0 * snr.ebn0_linear), spec)

    @staticmethod
    def mpam_awgn_ser_craig(M: int, snr: SnrPoint, spec: Optional[QuadratureSpec] = None) -> float:
        x = math.sqrt(6.0 * snr.esn0_linear / (M * M - 1))
        return 2.0 * (M - 1) / M * SpecFunUtils.q_craig(x, spec)

    @staticmethod
    def mqam_awgn_ser_craig(M: int, snr: SnrPoint, spec: Optional[QuadratureSpec] = None) -> float:
        c = OracleUtils._coefficient(M)
        x = math.sqrt(3.0 * snr.esn0_linear / (M - 1))
        return 4.0 * c * SpecFunUtils.q_craig(x, spec) - 4.0 * c * c * SpecFunUtils.q_squared_craig(x, spec)

    # --------------------------
    # fading averages of the AWGN formulas
    # --------------------------
    @staticmethod
    def bpsk_rayleigh_ber_oracle(gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        return OracleUtils.fading_average(lambda g: 0.5 * SpecFunUtils.erfc(math.sqrt(g)), gamma_bar, spec)

    @staticmethod
    def mpam_rayleigh_ser_oracle(M: int, gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        q = int(math.log2(M))
        return OracleUtils.fading_average(
            lambda g: TheoryUtils.mpam_awgn_ser(M, SnrPoint.from_esn0_linear(g, q)), gamma_bar, spec)

    @staticmethod
    def mqam_rayleigh_ser_gamma_route(M: int, gamma_bar: float, spec: Optional[QuadratureSpec] = None) -> float:
        q = int(math.log2(M))
        return OracleUtils.fading_average(
            lambda g: TheoryUtils.mqam_awgn_ser(M, SnrPoint.from_esn0_linear(g, q)), gamma_bar, spec)

    # --------------------------
    # reporting
    # --------------------------
    @staticmethod
    def deviation_table(orders: Iterable[int], gamma_bars: Iterable[float],
                        spec: Optional[QuadratureSpec] = None) -> pd.DataFrame:
        """
        Closed form vs. both quadrature routes for each (M, gamma_bar).
        Deviations are reported, not asserted.
        """
        rows = []
        gamma_bars = list(gamma_bars)
        for M in orders:
            for gamma_bar in gamma_bars:
                closed = TheoryUtils.mqam_rayleigh_ser(M, gamma_bar)
                theta_route = OracleUtils.mqam_rayleigh_oracle(M, gamma_bar, spec)
                gamma_route = OracleUtils.mqam_rayleigh_ser_gamma_route(M, gamma_bar, spec)
                p1_closed = OracleUtils.p1_closed_form(M, gamma_bar)
                p1_exact = OracleUtils.exact_p1(M, gamma_bar, spec)
                rows.append({
                    "M": M,
                    "gamma_bar": gamma_bar,
                    "closed_form": closed,
                    "oracle_theta": theta_route,
                    "oracle_gamma": gamma_route,
                    "route_gap": theta_route - gamma_route,
                    "deviation": closed - theta_route,
                    "relative_deviation": (closed - theta_route) / theta_route if theta_route else 0.0,
                    "p1_closed": p1_closed,
                    "p1_exact": p1_exact,
                })
                logger.debug("M=%d gamma_bar=%g closed=%.6e oracle=%.6e", M, gamma_bar, closed, theta_route)
        return pd.DataFrame(rows)
