"""CSV export of run records in reporting units."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterator, TextIO

from src.core.params import ParamSet
from src.core.simulation import RunRecord
from src.core.units import mass_flow_to_normal_volumetric, pa_to_bar, w_to_kw
from src.utils.constants import CSV_COLUMNS, CSV_KAPPA_COLUMN
from src.utils.logger import get_logger

logger = get_logger(__name__)


def csv_header(record: RunRecord) -> tuple[str, ...]:
    if record.kappa is not None:
        return (*CSV_COLUMNS, CSV_KAPPA_COLUMN)
    return CSV_COLUMNS


def record_rows(record: RunRecord, params: ParamSet) -> Iterator[list[str]]:
    """Rows of the CSV export; floats use the shortest exact representation."""
    m_h2 = params.m_h2
    for k in range(record.samples):
        row = [
            record.t[k],
            w_to_kw(record.requested_power[k]),
            w_to_kw(record.applied_power[k]),
            pa_to_bar(record.p_h2[k]),
            pa_to_bar(record.p_o2[k]),
            mass_flow_to_normal_volumetric(record.w_h2_out[k], m_h2),
            mass_flow_to_normal_volumetric(record.w_h2_gen[k], m_h2),
            record.u_exh[k],
        ]
        if record.kappa is not None:
            row.append(record.kappa[k])
        yield [repr(float(value)) for value in row]


def write_csv_stream(record: RunRecord, params: ParamSet, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(csv_header(record))
    writer.writerows(record_rows(record, params))


def write_csv(record: RunRecord, params: ParamSet, path: Path) -> None:
    """Write a run record to a CSV file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        write_csv_stream(record, params, f)
    logger.info(f"Wrote {record.samples} samples to {path}")


def csv_text(record: RunRecord, params: ParamSet) -> str:
    buffer = io.StringIO()
    write_csv_stream(record, params, buffer)
    return buffer.getvalue()
