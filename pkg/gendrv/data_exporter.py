import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from gendrv.errors import ExportError
from gendrv.sweep_runner import RECORD_COLUMNS, SummaryStats, SweepRecord

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "gendrv-sweep-v1"
FLOAT_FORMAT = "%.12g"


class DataExporter:
    """Handles exporting sweep results to CSV and JSON"""

    def to_csv_text(self, records: Sequence[SweepRecord]) -> str:
        """
        Render records as CSV

        Args:
            records: Sweep records, already ordered by method then x0

        Returns:
            CSV text with header `method,x0,status,x_star,y_star,iterations`,
            12 significant digits and LF line endings
        """
        frame = pd.DataFrame(
            {
                "method": [r.method.value for r in records],
                "x0": pd.Series([r.x0 for r in records], dtype="float64"),
                "status": [r.status.value for r in records],
                "x_star": pd.Series([r.x_star for r in records], dtype="float64"),
                "y_star": pd.Series([r.y_star for r in records], dtype="float64"),
                "iterations": pd.Series([r.iterations for r in records], dtype="int64"),
            },
            columns=RECORD_COLUMNS,
        )
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
        return buffer.getvalue()

    def to_json_text(self, records: Sequence[SweepRecord], stats: Sequence[SummaryStats],
                     spec_echo: Optional[Dict[str, Any]] = None) -> str:
        """
        Render records, statistics and the originating SweepSpec as JSON

        Returns:
            JSON object text with keys schema, spec_echo, records, stats
        """
        export_data = {
            "schema": SCHEMA_VERSION,
            "spec_echo": spec_echo or {},
            "records": [r.to_dict() for r in records],
            "stats": [s.to_dict() for s in stats],
        }
        return json.dumps(export_data, indent=2, ensure_ascii=False, allow_nan=False)

    def emit_csv(self, records: Sequence[SweepRecord], stats: Sequence[SummaryStats], path) -> Path:
        """Write the CSV rendering of records to path; stats are not part of the CSV"""
        return self._write(path, self.to_csv_text(records))

    def emit_json(self, records: Sequence[SweepRecord], stats: Sequence[SummaryStats], path,
                  spec_echo: Optional[Dict[str, Any]] = None) -> Path:
        return self._write(path, self.to_json_text(records, stats, spec_echo))

    def load_json(self, path) -> Tuple[List[SweepRecord], List[SummaryStats], Dict[str, Any]]:
        """
        Read a file produced by emit_json

        Returns:
            (records, stats, spec_echo)

        Raises:
            ExportError: unreadable file, invalid JSON or unknown schema
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ExportError(path, exc) from exc
        if data.get("schema") != SCHEMA_VERSION:
            raise ExportError(path, reason=f"unsupported schema {data.get('schema')!r}")
        records = [SweepRecord.from_dict(r) for r in data["records"]]
        stats = [SummaryStats.from_dict(s) for s in data["stats"]]
        return records, stats, data.get("spec_echo", {})

    def _write(self, path, text: str) -> Path:
        path = Path(path)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        except OSError as exc:
            raise ExportError(path, exc) from exc
        logger.info("Wrote %s", path)
        return path


_exporter = DataExporter()


def emit_csv(records, stats, path) -> Path:
    return _exporter.emit_csv(records, stats, path)


def emit_json(records, stats, path, spec_echo=None) -> Path:
    return _exporter.emit_json(records, stats, path, spec_echo)


def load_json(path):
    return _exporter.load_json(path)
