import logging
import os
from pathlib import Path
from typing import Any, Dict
from uuid import uuid4

from fastapi import APIRouter, HTTPException

from functions.chart_utils import ChartUtils
from functions.errors import ErrLabError, NumericError
from functions.export_utils import ExportUtils
from functions.models import SweepConfig
from functions.oracle_utils import OracleUtils
from functions.sweep_utils import SweepUtils

logger = logging.getLogger(__name__)

router = APIRouter()
OUTPUT_DIR = Path(os.getenv("ERRLAB_OUTPUT_DIR", "processed_results"))


@router.post("/run")
def run_sweep(cfg: SweepConfig) -> Dict[str, Any]:
    """
    Run one sweep. Output paths in the body are ignored; the CSV and an SVG
    waterfall land in a fresh directory under OUTPUT_DIR.
    """
    job_id = uuid4().hex
    job_dir = OUTPUT_DIR / job_id
    try:
        frame = SweepUtils.build_rows(cfg)
        job_dir.mkdir(parents=True, exist_ok=True)
        csv_path = ExportUtils.write_csv(frame, job_dir / "results.csv")
        plot_path = ChartUtils.save_plot(frame, job_dir / "waterfall.svg",
                                         title=SweepUtils.constellation_for(cfg.modulation).name)
    except NumericError as e:
        logger.error("sweep %s failed: %s", job_id, e)
        raise HTTPException(status_code=500, detail=f"numeric failure: {e}")
    except ErrLabError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except OSError as e:
        logger.error("sweep %s could not write results: %s", job_id, e)
        raise HTTPException(status_code=500, detail=f"I/O failure: {e}")

    rows = ExportUtils.format_frame(frame).to_dict(orient="records")
    return {
        "job_id": job_id,
        "csv": str(csv_path),
        "plot": plot_path,
        "rows": rows,
    }


@router.get("/report")
def deviation_report(M: int = 16, snr_db: float = 20.0) -> Dict[str, Any]:
    """Closed form against both quadrature routes at one (M, mean symbol SNR in dB)."""
    try:
        table = OracleUtils.deviation_table([M], [10 ** (snr_db / 10.0)])
    except NumericError as e:
        raise HTTPException(status_code=500, detail=f"numeric failure: {e}")
    except ErrLabError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return table.to_dict(orient="records")[0]
