import logging
import sys
from pathlib import Path
from typing import Optional

import click

from functions.chart_utils import ChartUtils
from functions.errors import ConfigError, DomainError, ErrLabError, NumericError
from functions.export_utils import ExportUtils
from functions.models import ChannelKind, Modulation, OutputFormat, SweepConfig
from functions.oracle_utils import OracleUtils
from functions.sweep_utils import SweepUtils

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def run_sweep(cfg: SweepConfig, progress: bool = False) -> int:
    """
    Compute the rows for `cfg`, write them (stdout when no output path is set)
    and the optional plot. Returns the process exit status.
    """
    try:
        frame = SweepUtils.build_rows(cfg, progress=progress)
        if cfg.output is None:
            text = ExportUtils.to_json_text(frame) if cfg.format == OutputFormat.JSON else ExportUtils.to_csv_text(frame)
            click.echo(text, nl=False)
        else:
            ExportUtils.write(frame, cfg.output, cfg.format)
        if cfg.plot is not None:
            title = f"{SweepUtils.constellation_for(cfg.modulation).name} over {cfg.channel.value.upper()}"
            ChartUtils.save_plot(frame, cfg.plot, title=title)
    except NumericError as e:
        logger.error("numeric failure: %s", e)
        return EXIT_NUMERIC
    except DomainError as e:
        logger.error("invalid input: %s", e)
        return EXIT_USAGE
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return EXIT_IO
    return EXIT_OK


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG.")
def cli(verbose: int):
    """Error-rate lab: closed forms, quadrature oracles and Monte Carlo for BPSK, PAM and QAM."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


@cli.command()
@click.option("--mod", type=str, default=None, help=f"One of {', '.join(m.value for m in Modulation)}.")
@click.option("--channel", type=str, default=None,
              help=f"One of {ChannelKind.AWGN.value}, {ChannelKind.RAYLEIGH.value}.")
@click.option("--ebn0", type=str, default=None, help="Eb/N0 grid in dB as start:step:stop.")
@click.option("--sources", type=str, default=None, help="Comma-separated subset of theory,oracle,sim.")
@click.option("--min-errors", type=int, default=None, help="Stop a point after this many symbol errors.")
@click.option("--max-symbols", type=int, default=None, help="Symbol budget per point.")
@click.option("--batch-size", type=int, default=None, help="Symbols per simulation batch.")
@click.option("--seed", type=int, default=None, help="Root seed (default 0).")
@click.option("--workers", type=int, default=None, help="Threads per simulation point.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Output file; stdout when omitted.")
@click.option("--format", "fmt", type=str, default=None, help="csv, json or xlsx.")
@click.option("--plot", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Waterfall plot path (.svg or .png).")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="JSON config; flags override its values.")
@click.option("--quiet", is_flag=True, help="Hide the progress bar.")
@click.pass_context
def sweep(ctx: click.Context, mod, channel, ebn0, sources, min_errors, max_symbols, batch_size, seed, workers,
          out, fmt, plot, config_file: Optional[Path], quiet: bool):
    """Sweep Eb/N0 and tabulate SER/BER per source."""
    raw = {
        "mod": mod, "channel": channel, "ebn0": ebn0, "sources": sources, "min_errors": min_errors,
        "max_symbols": max_symbols, "batch_size": batch_size, "seed": seed, "workers": workers,
        "out": out, "format": fmt, "plot": plot,
    }
    try:
        cfg = SweepUtils.validate_config(raw, config_file)
    except ConfigError as e:
        raise click.UsageError(str(e), ctx=ctx)
    except OSError as e:
        logger.error("cannot read %s: %s", config_file, e)
        ctx.exit(EXIT_IO)
    if cfg.format == OutputFormat.XLSX and cfg.output is None:
        raise click.UsageError("--format: xlsx needs --out", ctx=ctx)

    progress = not quiet and sys.stderr.isatty()
    ctx.exit(run_sweep(cfg, progress=progress))


@cli.command()
@click.option("--orders", type=str, default="4,16,64", show_default=True, help="Comma-separated QAM orders.")
@click.option("--snr-db", type=str, default="0:5:30", show_default=True,
              help="Mean symbol SNR grid in dB as start:step:stop.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="CSV output; stdout when omitted.")
@click.pass_context
def report(ctx: click.Context, orders: str, snr_db: str, out: Optional[Path]):
    """Closed-form M-QAM Rayleigh SER against both quadrature routes."""
    try:
        ms = [int(m) for m in orders.split(",") if m.strip()]
    except ValueError:
        raise click.UsageError(f"--orders: not a list of integers: {orders!r}", ctx=ctx)
    if not ms:
        raise click.UsageError("--orders: at least one order is required", ctx=ctx)
    try:
        start, stop, step = SweepUtils.parse_range(snr_db)
        grid = SweepConfig(ebn0_db=(start, stop, step)).ebn0_grid()
    except (ConfigError, ValueError) as e:
        raise click.UsageError(f"--snr-db: {e}", ctx=ctx)

    try:
        table = OracleUtils.deviation_table(ms, [10 ** (g / 10.0) for g in grid])
        table.insert(2, "gamma_bar_db", grid * len(ms))
        text = table.to_csv(index=False, lineterminator="\n", float_format="%.6e")
        if out is None:
            click.echo(text, nl=False)
        else:
            out.write_text(text, encoding="utf-8", newline="")
    except NumericError as e:
        logger.error("numeric failure: %s", e)
        ctx.exit(EXIT_NUMERIC)
    except ErrLabError as e:
        raise click.UsageError(str(e), ctx=ctx)
    except OSError as e:
        logger.error("I/O failure: %s", e)
        ctx.exit(EXIT_IO)


if __name__ == "__main__":
    cli()
