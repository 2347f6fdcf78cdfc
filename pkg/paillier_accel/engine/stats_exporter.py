"""Queue statistics export."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
from loguru import logger

from paillier_accel.engine.batch_engine import QueueStats


class StatsExporter:
    """Writes QueueStats documents (JSON, CSV, Excel) into one directory."""

    def __init__(self, output_directory: Union[str, Path], run_id: str = "engine"):
        self.output_dir = Path(output_directory)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.run_id = run_id

    def export(self, stats: QueueStats, format_type: str = "json",
               extra: Optional[Dict[str, Any]] = None) -> Path:
        """Export in the given format and return the written path."""
        try:
            format_lower = format_type.lower()
            if format_lower == "json":
                return self._export_json(stats, extra)
            if format_lower == "csv":
                return self._export_csv(stats)
            if format_lower in ["excel", "xlsx"]:
                return self._export_excel(stats)
            raise ValueError(f"Unsupported export format: {format_type}")
        except Exception as e:
            logger.error(f"Failed to export queue stats as {format_type}: {e}")
            raise

    def _export_json(self, stats: QueueStats, extra: Optional[Dict[str, Any]]) -> Path:
        export_file = self.output_dir / f"{self.run_id}_stats.json"
        document = stats.to_dict()
        if extra:
            document["metadata"] = extra
        with open(export_file, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2, default=str)
        logger.info(f"JSON stats written: {export_file}")
        return export_file

    @staticmethod
    def _summary_rows(stats: QueueStats) -> List[Dict[str, Any]]:
        summary = stats.to_dict()
        return [{"metric": key, "value": value} for key, value in summary.items()
                if key not in ("batches", "depth_samples")]

    def _export_csv(self, stats: QueueStats) -> Path:
        batches_file = self.output_dir / f"{self.run_id}_batches.csv"
        pd.DataFrame([r.to_dict() for r in stats.records]).to_csv(batches_file, index=False)
        summary_file = self.output_dir / f"{self.run_id}_summary.csv"
        pd.DataFrame(self._summary_rows(stats)).to_csv(summary_file, index=False)
        logger.info(f"CSV stats written: {batches_file}, {summary_file}")
        return batches_file

    def _export_excel(self, stats: QueueStats) -> Path:
        """Excel export; needs openpyxl."""
        excel_file = self.output_dir / f"{self.run_id}_stats.xlsx"
        try:
            with pd.ExcelWriter(excel_file, engine="openpyxl") as writer:
                pd.DataFrame(self._summary_rows(stats)).to_excel(writer, sheet_name="Summary", index=False)
                pd.DataFrame([r.to_dict() for r in stats.records]).to_excel(writer, sheet_name="Batches", index=False)
                pd.DataFrame(stats.depth_samples, columns=["time", "depth"]).to_excel(
                    writer, sheet_name="Queue Depth", index=False)
        except ImportError:
            logger.warning("openpyxl required for Excel export")
            raise
        logger.info(f"Excel stats written: {excel_file}")
        return excel_file
