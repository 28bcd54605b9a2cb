import math
from typing import Dict, Iterable, Optional

import numpy as np

from functions.constellation_utils import ConstellationUtils
from functions.errors import DomainError
from functions.models import FormulaId, Region, SnrPoint, TheoryCurve
from functions.specfun_utils import SpecFunUtils

erfc = SpecFunUtils.erfc
Q = SpecFunUtils.q_func


class TheoryUtils:
    """
    Closed-form SER/BER for BPSK, M-PAM and square M-QAM over AWGN and flat Rayleigh fading.

    Convention: an `SnrPoint` carries Eb/N0 and q; Es/N0 = q * Eb/N0. Functions
    documented as taking Es/N0 read `snr.esn0_linear`, those taking Eb/N0 read
    `snr.ebn0_linear`. For `mqam_rayleigh_ser` the mean SNR is the average
    *symbol* SNR, since the formula averages the Es-domain AWGN SER.
    """

    # --------------------------
    # argument checks
    # --------------------------
    @staticmethod
    def _check_pam(M: int) -> None:
        if not isinstance(M, (int, np.integer)) or M < 2 or M & (M - 1):
            raise DomainError(f"M-PAM needs M a power of two >= 2 (got {M})")

    @staticmethod
    def _check_qam(M: int) -> int:
        if not isinstance(M, (int, np.integer)) or M < 4 or M & (M - 1) or int(math.log2(M)) % 2:
            raise DomainError(f"M-QAM needs M = 4, 16, 64, ... (got {M})")
        return int(round(math.sqrt(M)))

    @staticmethod
    def _esn0(snr: SnrPoint) -> float:
        return snr.esn0_linear

    # --------------------------
    # BPSK
    # --------------------------
    @staticmethod
    def bpsk_awgn_ber(snr: SnrPoint) -> float:
        return 0.5 * erfc(math.sqrt(snr.ebn0_linear))

    @staticmethod
    def bpsk_rayleigh_ber(snr: SnrPoint) -> float:
        g = snr.ebn0_linear
        if g < 0:
            raise DomainError(f"mean SNR must be >= 0 (got {g})")
        return 0.5 * (1.0 - math.sqrt(g / (1.0 + g)))

    @staticmethod
    def bpsk_rayleigh_asymptote(snr: SnrPoint) -> float:
        """High-SNR behaviour 1/(4 gamma_bar)."""
        return 1.0 / (4.0 * snr.ebn0_linear)

    # --------------------------
    # M-PAM
    # --------------------------
    @staticmethod
    def mpam_awgn_ser(M: int, snr: SnrPoint) -> float:
        """((M-1)/M) erfc(sqrt(3 Es / ((M^2-1) N0))); for M=4 this is (3/4) erfc(sqrt(Es/(5 N0)))."""
        TheoryUtils._check_pam(M)
        if M < 4:
            raise DomainError(f"M-PAM formulas start at M = 4 (got {M})")
        es_n0 = TheoryUtils._esn0(snr)
        return (M - 1) / M * erfc(math.sqrt(3.0 * es_n0 / (M * M - 1)))

    @staticmethod
    def mpam_awgn_ser_distance(M: int, d: float, sigma: float) -> float:
        """Distance form ((M-1)/M) erfc(d / (2 sqrt(2) sigma)) with d the level spacing."""
        TheoryUtils._check_pam(M)
        if d <= 0 or sigma <= 0:
            raise DomainError(f"d and sigma must be > 0 (got d={d}, sigma={sigma})")
        return (M - 1) / M * erfc(d / (2.0 * math.sqrt(2.0) * sigma))

    @staticmethod
    def mpam_awgn_ber(M: int, snr: SnrPoint) -> float:
        """SER at Es = log2(M) Eb divided by log2(M); M=4 gives (3/8) erfc(sqrt(2 Eb/(5 N0)))."""
        TheoryUtils._check_pam(M)
        q = int(math.log2(M))
        es = SnrPoint(snr.ebn0_db, q)
        return TheoryUtils.mpam_awgn_ser(M, es) / q

    @staticmethod
    def mpam_rayleigh_ser(M: int, snr: SnrPoint) -> float:
        """
        Fading average of the M-PAM SER in closed form, the BPSK integration
        by parts with erfc argument scaled by g = 3/(M^2-1).
        """
        TheoryUtils._check_pam(M)
        g = 3.0 * TheoryUtils._esn0(snr) / (M * M - 1)
        return (M - 1) / M * (1.0 - math.sqrt(g / (1.0 + g)))

    # --------------------------
    # QPSK / M-QAM over AWGN
    # --------------------------
    @staticmethod
    def qpsk_awgn_ser(snr: SnrPoint, exact: bool = True) -> float:
        e = erfc(math.sqrt(TheoryUtils._esn0(snr) / 2.0))
        return e - 0.25 * e * e if exact else e

    @staticmethod
    def mqam_awgn_ser(M: int, snr: SnrPoint) -> float:
        """4 c Q(x) - 4 c^2 Q^2(x), c = (sqrt(M)-1)/sqrt(M), x = sqrt(3 Es / (N0 (M-1)))."""
        side = TheoryUtils._check_qam(M)
        c = (side - 1) / side
        qx = Q(math.sqrt(3.0 * TheoryUtils._esn0(snr) / (M - 1)))
        return 4.0 * c * qx - 4.0 * c * c * qx * qx

    @staticmethod
    def mqam_awgn_ser_erfc(M: int, snr: SnrPoint) -> float:
        """2(1 - 1/sqrt(M)) e - (1 - 2/sqrt(M) + 1/M) e^2 with e = erfc(k sqrt(Es/N0))."""
        side = TheoryUtils._check_qam(M)
        k = math.sqrt(3.0 / (2.0 * (M - 1)))
        e = erfc(k * math.sqrt(TheoryUtils._esn0(snr)))
        return 2.0 * (1.0 - 1.0 / side) * e - (1.0 - 2.0 / side + 1.0 / M) * e * e

    @staticmethod
    def mqam_region_ser(M: int, snr: SnrPoint) -> Dict[Region, float]:
        """Conditional error probability of an inside, corner and side point."""
        TheoryUtils._check_qam(M)
        k = math.sqrt(3.0 / (2.0 * (M - 1)))
        e = erfc(k * math.sqrt(TheoryUtils._esn0(snr)))
        return {
            Region.INSIDE: 2.0 * e - e * e,
            Region.CORNER: e - 0.25 * e * e,
            Region.SIDE: 1.5 * e - 0.5 * e * e,
        }

    @staticmethod
    def mqam_region_weighted_ser(M: int, snr: SnrPoint) -> float:
        """(1/M) [N_inside p_inside + N_corner p_corner + N_side p_side]."""
        n_corner, n_side, n_inside = ConstellationUtils.expected_counts(M)
        p = TheoryUtils.mqam_region_ser(M, snr)
        return (n_inside * p[Region.INSIDE] + n_corner * p[Region.CORNER] + n_side * p[Region.SIDE]) / M

    @staticmethod
    def mqam_awgn_ber(M: int, snr: SnrPoint, leading: bool = False) -> float:
        """
        BER with Gray labels, BER ~ SER / log2(M) at Es = log2(M) Eb.
        leading=True keeps only the erfc term, which for 16-QAM is (3/8) erfc(sqrt(2 Eb/(5 N0))).
        """
        side = TheoryUtils._check_qam(M)
        q = int(math.log2(M))
        es = SnrPoint(snr.ebn0_db, q)
        if leading:
            k = math.sqrt(3.0 / (2.0 * (M - 1)))
            return 2.0 * (1.0 - 1.0 / side) * erfc(k * math.sqrt(es.esn0_linear)) / q
        return TheoryUtils.mqam_awgn_ser(M, es) / q

    # --------------------------
    # M-QAM over Rayleigh
    # --------------------------
    @staticmethod
    def mqam_rayleigh_ser(M: int, gamma_bar: float) -> float:
        """
        2c[1 - r] - c^2[1 - r (4/pi) atan(1/r)], r = sqrt(1.5 g / (M - 1 + 1.5 g)),
        with g the mean symbol SNR (linear).
        """
        side = TheoryUtils._check_qam(M)
        if not gamma_bar > 0:
            raise DomainError(f"mean SNR must be > 0 (got {gamma_bar})")
        c = (side - 1) / side
        if math.isinf(gamma_bar):
            return 0.0
        r = math.sqrt(1.5 * gamma_bar / (M - 1 + 1.5 * gamma_bar))
        return 2.0 * c * (1.0 - r) - c * c * (1.0 - r * 4.0 / math.pi * math.atan(1.0 / r))

    # --------------------------
    # curves
    # --------------------------
    @staticmethod
    def evaluate(formula_id: FormulaId, snr: SnrPoint, M: Optional[int] = None) -> float:
        f = FormulaId(formula_id)
        if f == FormulaId.BPSK_AWGN_BER:
            return TheoryUtils.bpsk_awgn_ber(snr)
        if f == FormulaId.BPSK_RAYLEIGH_BER:
            return TheoryUtils.bpsk_rayleigh_ber(snr)
        if f == FormulaId.QPSK_AWGN_SER:
            return TheoryUtils.qpsk_awgn_ser(snr, exact=True)
        if f == FormulaId.QPSK_AWGN_SER_APPROX:
            return TheoryUtils.qpsk_awgn_ser(snr, exact=False)
        if M is None:
            raise DomainError(f"{f.value} needs a constellation size M")
        if f == FormulaId.MPAM_AWGN_SER:
            return TheoryUtils.mpam_awgn_ser(M, snr)
        if f == FormulaId.MPAM_AWGN_BER:
            return TheoryUtils.mpam_awgn_ber(M, snr)
        if f == FormulaId.MPAM_RAYLEIGH_SER:
            return TheoryUtils.mpam_rayleigh_ser(M, snr)
        if f == FormulaId.MQAM_AWGN_SER:
            return TheoryUtils.mqam_awgn_ser(M, snr)
        if f == FormulaId.MQAM_AWGN_BER:
            return TheoryUtils.mqam_awgn_ber(M, snr)
        if f == FormulaId.MQAM_AWGN_BER_LEADING:
            return TheoryUtils.mqam_awgn_ber(M, snr, leading=True)
        if f == FormulaId.MQAM_RAYLEIGH_SER:
            return TheoryUtils.mqam_rayleigh_ser(M, snr.esn0_linear)
        raise DomainError(f"unknown formula {formula_id!r}")

    @staticmethod
    def theory_curve(formula_id: FormulaId, snr_grid: Iterable[SnrPoint], M: Optional[int] = None) -> TheoryCurve:
        points = []
        for snr in snr_grid:
            value = TheoryUtils.evaluate(formula_id, snr, M)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{formula_id}: value {value} outside [0, 1] at {snr.ebn0_db} dB")
            points.append((snr, value))
        return TheoryCurve(formula_id=FormulaId(formula_id), points=tuple(points))
