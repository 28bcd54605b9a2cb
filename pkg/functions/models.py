import math
from dataclasses import dataclass, field, asdict
from functools import cached_property
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from functions.errors import DomainError


# --------------------------
# Enumerations
# --------------------------
class Scheme(str, Enum):
    BPSK = "BPSK"
    MPAM = "MPAM"
    MQAM = "MQAM"


class Region(str, Enum):
    CORNER = "corner"
    SIDE = "side"
    INSIDE = "inside"


class ChannelKind(str, Enum):
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"
    # noiseless pass-through, only reachable from code and tests
    IDENTITY = "identity"


class Modulation(str, Enum):
    BPSK = "bpsk"
    PAM4 = "pam4"
    QPSK = "qpsk"
    QAM16 = "qam16"
    QAM64 = "qam64"


class Source(str, Enum):
    THEORY = "theory"
    ORACLE = "oracle"
    SIM = "sim"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    XLSX = "xlsx"


class FormulaId(str, Enum):
    BPSK_AWGN_BER = "bpsk_awgn_ber"
    BPSK_RAYLEIGH_BER = "bpsk_rayleigh_ber"
    MPAM_AWGN_SER = "mpam_awgn_ser"
    MPAM_AWGN_BER = "mpam_awgn_ber"
    MPAM_RAYLEIGH_SER = "mpam_rayleigh_ser"
    QPSK_AWGN_SER = "qpsk_awgn_ser"
    QPSK_AWGN_SER_APPROX = "qpsk_awgn_ser_approx"
    MQAM_AWGN_SER = "mqam_awgn_ser"
    MQAM_AWGN_BER = "mqam_awgn_ber"
    MQAM_AWGN_BER_LEADING = "mqam_awgn_ber_leading"
    MQAM_RAYLEIGH_SER = "mqam_rayleigh_ser"


# --------------------------
# Config-like models (validated)
# --------------------------
class QuadratureSpec(BaseModel):
    """Tolerances handed to the adaptive Gauss-Kronrod integrator."""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-12, gt=0)
    rel_tol: float = Field(default=1e-10, gt=0)
    max_subdivisions: int = Field(default=200, ge=1)
    # multiple of the tolerance still accepted when QUADPACK reports roundoff
    roundoff_slack: float = Field(default=10.0, ge=1.0)


class StoppingRule(BaseModel):
    model_config = ConfigDict(frozen=True)

    min_symbol_errors: int = Field(default=100, ge=1)
    max_symbols: int = Field(default=10**8, ge=1)
    batch_size: int = Field(default=10**5, ge=1)

    @model_validator(mode="after")
    def _batch_fits(self) -> "StoppingRule":
        if self.batch_size > self.max_symbols:
            raise ValueError(f"batch_size ({self.batch_size}) exceeds max_symbols ({self.max_symbols})")
        return self


class SweepConfig(BaseModel):
    """
    Everything one sweep needs. `ebn0_db` is (start, stop, step), inclusive of stop.
    """

    model_config = ConfigDict(frozen=True)

    modulation: Modulation = Modulation.BPSK
    channel: ChannelKind = ChannelKind.AWGN
    ebn0_db: Tuple[float, float, float] = (0.0, 10.0, 2.0)
    sources: Tuple[Source, ...] = (Source.THEORY,)
    rule: StoppingRule = StoppingRule()
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    output: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV
    plot: Optional[Path] = None

    @field_validator("channel")
    @classmethod
    def _public_channel(cls, v: ChannelKind) -> ChannelKind:
        if v == ChannelKind.IDENTITY:
            raise ValueError("channel must be 'awgn' or 'rayleigh'")
        return v

    @field_validator("ebn0_db")
    @classmethod
    def _range_ok(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        start, stop, step = v
        if not all(math.isfinite(x) for x in v):
            raise ValueError("range values must be finite")
        if step <= 0:
            raise ValueError(f"step must be > 0 (got {step})")
        if start > stop:
            raise ValueError(f"start ({start}) must not exceed stop ({stop})")
        return v

    @field_validator("sources")
    @classmethod
    def _sources_ok(cls, v: Tuple[Source, ...]) -> Tuple[Source, ...]:
        if not v:
            raise ValueError("at least one source is required")
        # keep first occurrence order, drop repeats
        return tuple(dict.fromkeys(v))

    def ebn0_grid(self) -> List[float]:
        start, stop, step = self.ebn0_db
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(count)]


# --------------------------
# Numerical containers
# --------------------------
@dataclass(frozen=True)
class SnrPoint:
    """
    An operating point. Eb/N0 is primary; Es/N0 = q * Eb/N0 with q = log2(M).
    `ebn0_db = +inf` is the noiseless sentinel (N0 = 0).
    """

    ebn0_db: float
    bits_per_symbol: int = 1

    def __post_init__(self):
        if math.isnan(self.ebn0_db):
            raise DomainError("ebn0_db must not be NaN")
        if self.bits_per_symbol < 1:
            raise DomainError(f"bits_per_symbol must be >= 1 (got {self.bits_per_symbol})")

    @classmethod
    def from_esn0_db(cls, esn0_db: float, bits_per_symbol: int = 1) -> "SnrPoint":
        return cls(esn0_db - 10.0 * math.log10(bits_per_symbol), bits_per_symbol)

    @classmethod
    def from_ebn0_linear(cls, ebn0: float, bits_per_symbol: int = 1) -> "SnrPoint":
        if ebn0 < 0:
            raise DomainError(f"linear SNR must be >= 0 (got {ebn0})")
        db = -math.inf if ebn0 == 0 else 10.0 * math.log10(ebn0)
        return cls(db, bits_per_symbol)

    @classmethod
    def from_esn0_linear(cls, esn0: float, bits_per_symbol: int = 1) -> "SnrPoint":
        return cls.from_ebn0_linear(esn0 / bits_per_symbol, bits_per_symbol)

    @property
    def ebn0_linear(self) -> float:
        return 10.0 ** (self.ebn0_db / 10.0)

    @property
    def esn0_linear(self) -> float:
        return self.bits_per_symbol * self.ebn0_linear

    @property
    def esn0_db(self) -> float:
        return self.ebn0_db + 10.0 * math.log10(self.bits_per_symbol)

    @property
    def n0(self) -> float:
        """Noise density for a unit-energy constellation (Es = 1)."""
        if self.esn0_linear == 0:
            return math.inf
        return 1.0 / self.esn0_linear


@dataclass(frozen=True, eq=False)
class Constellation:
    """
    Normalized alphabet. `points[i]` carries label `labels[i]`, and i is the
    integer value of that label. `positions[i]` is the (I, Q) lattice position,
    Q is always 0 for one-dimensional schemes.
    """

    scheme: Scheme
    order: int
    points: np.ndarray
    labels: Tuple[str, ...]
    raw_energy: float
    scale: float
    raw_points: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        for arr in (self.points, self.raw_points, self.positions):
            arr.setflags(write=False)

    @property
    def bits_per_symbol(self) -> int:
        return int(round(math.log2(self.order)))

    @property
    def is_real(self) -> bool:
        return self.scheme in (Scheme.BPSK, Scheme.MPAM)

    @cached_property
    def label_bits(self) -> np.ndarray:
        """(M, q) uint8 matrix of label bits, row i is labels[i]."""
        return np.array([[int(b) for b in lab] for lab in self.labels], dtype=np.uint8)

    @property
    def name(self) -> str:
        if self.scheme == Scheme.BPSK:
            return "BPSK"
        return f"{self.order}-{'PAM' if self.scheme == Scheme.MPAM else 'QAM'}"


@dataclass(frozen=True)
class PointClass:
    tags: Tuple[Region, ...]
    counts: Tuple[int, int, int]  # (corner, side, inside)

    @property
    def n_corner(self) -> int:
        return self.counts[0]

    @property
    def n_side(self) -> int:
        return self.counts[1]

    @property
    def n_inside(self) -> int:
        return self.counts[2]


@dataclass(frozen=True)
class ChannelRealization:
    noise: np.ndarray
    fade: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ErrorCount:
    symbols: int = 0
    symbol_errors: int = 0
    bits: int = 0
    bit_errors: int = 0

    def __post_init__(self):
        if self.symbol_errors > self.symbols or self.bit_errors > self.bits:
            raise DomainError(f"error count exceeds trial count: {self}")

    def __add__(self, other: "ErrorCount") -> "ErrorCount":
        return ErrorCount(
            self.symbols + other.symbols,
            self.symbol_errors + other.symbol_errors,
            self.bits + other.bits,
            self.bit_errors + other.bit_errors,
        )


@dataclass(frozen=True)
class TheoryCurve:
    formula_id: FormulaId
    points: Tuple[Tuple[SnrPoint, float], ...]

    @property
    def values(self) -> List[float]:
        return [v for _, v in self.points]


# maps instantaneous SNR (linear) to a conditional error probability
FadingIntegrand = Callable[[float], float]


@dataclass(frozen=True)
class MonteCarloResult:
    scheme: str
    channel: ChannelKind
    snr: SnrPoint
    counts: ErrorCount
    ser_hat: float
    ber_hat: float
    ci95_ser: float
    ci95_ber: float
    seed: int
    elapsed: float
    low_confidence: bool = False
    stream: Tuple[int, ...] = field(default=())

    def to_record(self, include_timing: bool = False) -> Dict[str, Any]:
        record = {
            "scheme": self.scheme,
            "channel": self.channel.value,
            "ebn0_db": self.snr.ebn0_db,
            "bits_per_symbol": self.snr.bits_per_symbol,
            **asdict(self.counts),
            "ser_hat": self.ser_hat,
            "ber_hat": self.ber_hat,
            "ci95_ser": self.ci95_ser,
            "ci95_ber": self.ci95_ber,
            "seed": self.seed,
            "stream": list(self.stream),
            "low_confidence": self.low_confidence,
        }
        if include_timing:
            record["elapsed"] = self.elapsed
        return record
