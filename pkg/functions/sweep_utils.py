import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import pandas as pd
from pydantic import ValidationError

from functions import montecarlo
from functions.constellation_utils import ConstellationUtils
from functions.errors import ConfigError
from functions.models import (ChannelKind, Constellation, Modulation, QuadratureSpec, SnrPoint, Source,
                              SweepConfig)
from functions.oracle_utils import OracleUtils
from functions.theory_utils import TheoryUtils

logger = logging.getLogger(__name__)

COLUMNS = ["modulation", "channel", "source", "ebn0_db", "esn0_db", "ser", "ber",
           "ci95_ser", "ci95_ber", "symbols", "errors", "seed"]

# modulation -> (builder, M)
MODULATIONS: Dict[Modulation, Tuple[Callable[[], Constellation], int]] = {
    Modulation.BPSK: (ConstellationUtils.build_bpsk, 2),
    Modulation.PAM4: (lambda: ConstellationUtils.build_pam(4), 4),
    Modulation.QPSK: (lambda: ConstellationUtils.build_qam(4), 4),
    Modulation.QAM16: (lambda: ConstellationUtils.build_qam(16), 16),
    Modulation.QAM64: (lambda: ConstellationUtils.build_qam(64), 64),
}

# config field -> command-line flag, used to name the offending flag in errors
FIELD_FLAGS = {
    "modulation": "--mod",
    "channel": "--channel",
    "ebn0_db": "--ebn0",
    "sources": "--sources",
    "min_symbol_errors": "--min-errors",
    "max_symbols": "--max-symbols",
    "batch_size": "--batch-size",
    "seed": "--seed",
    "workers": "--workers",
    "output": "--out",
    "format": "--format",
    "plot": "--plot",
    "rule": "--batch-size",
}


class SweepUtils:

    # --------------------------
    # configuration
    # --------------------------
    @staticmethod
    def parse_range(text: str) -> Tuple[float, float, float]:
        """'start:step:stop' -> (start, stop, step)."""
        parts = str(text).split(":")
        if len(parts) != 3:
            raise ConfigError(f"expected start:step:stop, got {text!r}", flag="--ebn0")
        try:
            start, step, stop = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"non-numeric range {text!r}", flag="--ebn0")
        return start, stop, step

    @staticmethod
    def _enum_value(enum_cls, value: Any, flag: str):
        try:
            return enum_cls(str(value).strip().lower())
        except ValueError:
            allowed = ", ".join(e.value for e in enum_cls if e != ChannelKind.IDENTITY)
            raise ConfigError(f"unknown value {value!r} (choose from {allowed})", flag=flag)

    @staticmethod
    def validate_config(raw: Mapping[str, Any], config_file: Optional[Path] = None) -> SweepConfig:
        """
        Merge a JSON config file (optional) with flag values and validate.
        Flags win over the file; a None flag value means "not given".
        An unreadable file raises OSError unchanged.
        """
        data: Dict[str, Any] = {}
        if config_file is not None:
            try:
                data = json.loads(Path(config_file).read_text(encoding="utf-8"))
            except UnicodeDecodeError as e:
                raise ConfigError(f"{config_file} is not UTF-8 text: {e}", flag="--config")
            except json.JSONDecodeError as e:
                raise ConfigError(f"invalid JSON in {config_file}: {e}", flag="--config")
            if not isinstance(data, dict):
                raise ConfigError("config file must hold a JSON object", flag="--config")
        rule = dict(data.get("rule") or {})

        given = {k: v for k, v in raw.items() if v is not None}
        if "mod" in given:
            data["modulation"] = SweepUtils._enum_value(Modulation, given["mod"], "--mod")
        elif "modulation" in data:
            data["modulation"] = SweepUtils._enum_value(Modulation, data["modulation"], "--mod")
        if "channel" in given or "channel" in data:
            value = SweepUtils._enum_value(ChannelKind, given.get("channel", data.get("channel")), "--channel")
            if value == ChannelKind.IDENTITY:
                raise ConfigError("unknown value 'identity' (choose from awgn, rayleigh)", flag="--channel")
            data["channel"] = value
        if "ebn0" in given:
            data["ebn0_db"] = SweepUtils.parse_range(given["ebn0"])
        if "sources" in given:
            names = given["sources"]
            if isinstance(names, str):
                names = [s for s in names.split(",") if s.strip()]
            data["sources"] = names
        if isinstance(data.get("sources"), str):
            data["sources"] = [s for s in data["sources"].split(",") if s.strip()]
        if "sources" in data:
            data["sources"] = [SweepUtils._enum_value(Source, s, "--sources") for s in data["sources"]]

        for flag_key, field_name in (("min_errors", "min_symbol_errors"), ("max_symbols", "max_symbols"),
                                     ("batch_size", "batch_size")):
            if flag_key in given:
                rule[field_name] = given[flag_key]
        # a small symbol budget shrinks the default batch instead of failing validation
        if "max_symbols" in rule and "batch_size" not in rule:
            rule["batch_size"] = min(int(rule["max_symbols"]), 10**5)
        if rule:
            data["rule"] = rule

        for flag_key, field_name in (("seed", "seed"), ("workers", "workers"), ("out", "output"),
                                     ("format", "format"), ("plot", "plot")):
            if flag_key in given:
                data[field_name] = given[flag_key]

        try:
            return SweepConfig.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            field_name = str(first["loc"][-1]) if first["loc"] else ""
            if field_name.isdigit() and len(first["loc"]) > 1:
                field_name = str(first["loc"][-2])
            raise ConfigError(first["msg"], flag=FIELD_FLAGS.get(field_name, field_name or None))

    # --------------------------
    # rows
    # --------------------------
    @staticmethod
    def constellation_for(mod: Modulation) -> Constellation:
        builder, _ = MODULATIONS[mod]
        return builder()

    @staticmethod
    def theory_values(mod: Modulation, channel: ChannelKind, snr: SnrPoint) -> Tuple[float, float]:
        """(SER, BER) from the closed forms; BER = SER/q except where a BER formula exists."""
        M = MODULATIONS[mod][1]
        q = snr.bits_per_symbol
        if mod == Modulation.BPSK:
            ber = TheoryUtils.bpsk_awgn_ber(snr) if channel == ChannelKind.AWGN else TheoryUtils.bpsk_rayleigh_ber(snr)
            return ber, ber
        if mod == Modulation.PAM4:
            if channel == ChannelKind.AWGN:
                return TheoryUtils.mpam_awgn_ser(M, snr), TheoryUtils.mpam_awgn_ber(M, snr)
            ser = TheoryUtils.mpam_rayleigh_ser(M, snr)
            return ser, ser / q
        if channel == ChannelKind.AWGN:
            return TheoryUtils.mqam_awgn_ser(M, snr), TheoryUtils.mqam_awgn_ber(M, snr)
        ser = TheoryUtils.mqam_rayleigh_ser(M, snr.esn0_linear)
        return ser, ser / q

    @staticmethod
    def oracle_values(mod: Modulation, channel: ChannelKind, snr: SnrPoint,
                      spec: Optional[QuadratureSpec] = None) -> Tuple[float, float]:
        """(SER, BER) by quadrature: Craig forms for AWGN, fading averages for Rayleigh."""
        M = MODULATIONS[mod][1]
        q = snr.bits_per_symbol
        rayleigh = channel == ChannelKind.RAYLEIGH
        if mod == Modulation.BPSK:
            ber = OracleUtils.bpsk_rayleigh_ber_oracle(snr.ebn0_linear, spec) if rayleigh \
                else OracleUtils.bpsk_awgn_ber_craig(snr, spec)
            return ber, ber
        if mod == Modulation.PAM4:
            ser = OracleUtils.mpam_rayleigh_ser_oracle(M, snr.esn0_linear, spec) if rayleigh \
                else OracleUtils.mpam_awgn_ser_craig(M, snr, spec)
        else:
            ser = OracleUtils.mqam_rayleigh_oracle(M, snr.esn0_linear, spec) if rayleigh \
                else OracleUtils.mqam_awgn_ser_craig(M, snr, spec)
        return ser, ser / q

    @staticmethod
    def _row(cfg: SweepConfig, source: Source, snr: SnrPoint, ser: float, ber: float, **extra) -> Dict[str, Any]:
        row = {
            "modulation": cfg.modulation.value,
            "channel": cfg.channel.value,
            "source": source.value,
            "ebn0_db": snr.ebn0_db,
            "esn0_db": snr.esn0_db,
            "ser": ser,
            "ber": ber,
            "ci95_ser": None,
            "ci95_ber": None,
            "symbols": None,
            "errors": None,
            "seed": None,
        }
        row.update(extra)
        return row

    @staticmethod
    def build_rows(cfg: SweepConfig, spec: Optional[QuadratureSpec] = None, progress: bool = False) -> pd.DataFrame:
        """One row per (SNR point, source), SNR-major, sources in the configured order."""
        c = SweepUtils.constellation_for(cfg.modulation)
        q = c.bits_per_symbol
        grid = [SnrPoint(x, q) for x in cfg.ebn0_grid()]
        logger.info("sweep %s/%s over %d points, sources=%s", cfg.modulation.value, cfg.channel.value,
                    len(grid), ",".join(s.value for s in cfg.sources))

        per_source: Dict[Source, List[Dict[str, Any]]] = {}
        for source in cfg.sources:
            if source == Source.THEORY:
                per_source[source] = [
                    SweepUtils._row(cfg, source, snr, *SweepUtils.theory_values(cfg.modulation, cfg.channel, snr))
                    for snr in grid
                ]
            elif source == Source.ORACLE:
                per_source[source] = [
                    SweepUtils._row(cfg, source, snr,
                                    *SweepUtils.oracle_values(cfg.modulation, cfg.channel, snr, spec))
                    for snr in grid
                ]
            else:
                results = montecarlo.sweep(c, cfg.channel, grid, cfg.rule, cfg.seed,
                                           workers=cfg.workers, progress=progress)
                per_source[source] = [
                    SweepUtils._row(cfg, source, r.snr, r.ser_hat, r.ber_hat,
                                    ci95_ser=r.ci95_ser, ci95_ber=r.ci95_ber, symbols=r.counts.symbols,
                                    errors=r.counts.symbol_errors, seed=r.seed)
                    for r in results
                ]

        rows = [per_source[s][i] for i in range(len(grid)) for s in cfg.sources]
        frame = pd.DataFrame(rows, columns=COLUMNS)
        return frame.astype({"symbols": "Int64", "errors": "Int64", "seed": "Int64"})

    @staticmethod
    def relative_gaps(frame: pd.DataFrame, a: Source = Source.THEORY, b: Source = Source.ORACLE) -> pd.Series:
        """|ser_a - ser_b| / ser_b per SNR point, for paired theory/oracle rows."""
        left = frame[frame["source"] == a.value].set_index("ebn0_db")["ser"]
        right = frame[frame["source"] == b.value].set_index("ebn0_db")["ser"]
        return ((left - right).abs() / right).dropna()

