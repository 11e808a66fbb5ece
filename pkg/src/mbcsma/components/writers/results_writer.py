import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

from haystack import component, default_from_dict, default_to_dict, logging

from mbcsma.components.sweep.planner import OutputFormat
from mbcsma.components.sweep.tabulator import EXPORT_COLUMNS, GAIN_COLUMNS

logger = logging.getLogger(__name__)


def format_value(value: Any) -> Any:
    """Floats with 6 significant digits; None stays absent."""
    if isinstance(value, float):
        return float(f"{value:.6g}")
    return value


def gains_path(output: Path) -> Path:
    """`results.csv` -> `results.gains.csv`."""
    return output.with_name(f"{output.stem}.gains{output.suffix}")


def dumps_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else _csv_cell(row[c]) for c in columns])
    return buffer.getvalue()


def _csv_cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def dumps_json(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    table = [{c: format_value(row.get(c)) for c in columns} for row in rows]
    return json.dumps(table, indent=2) + "\n"


@component
class ResultsWriter:
    """
    Writes the export table (per-run rows, then the mean rows) as CSV or JSON, and the gain
    rows next to it as `<stem>.gains.<ext>`.

    ### Usage example
    ```python
    writer = ResultsWriter(output_path="out/table2.csv")
    paths = writer.run(records=records, aggregates=aggregates, gains=gains)["paths"]
    ```
    """

    def __init__(self, output_path: str = "results.csv", file_format: str = OutputFormat.CSV.value):
        """
        Initialize the component.

        :param output_path: Main output file
        :param file_format: "csv" or "json"
        """
        self.output_path = output_path
        self.file_format = OutputFormat(file_format)

    def to_dict(self) -> Dict[str, Any]:
        return default_to_dict(  # type: ignore
            self, output_path=self.output_path, file_format=self.file_format.value
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ResultsWriter":
        return default_from_dict(cls, data)  # type: ignore

    def _dumps(self, rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
        if self.file_format is OutputFormat.JSON:
            return dumps_json(rows, columns)
        return dumps_csv(rows, columns)

    def _write(self, path: Path, content: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
        logger.info("Wrote {path}", path=str(path))

    @component.output_types(paths=List[str])
    def run(
        self,
        records: List[Dict[str, Any]],
        aggregates: List[Dict[str, Any]],
        gains: List[Dict[str, Any]],
    ) -> dict:
        """
        Write the tables.

        :param records: Per-run rows
        :param aggregates: Mean rows appended after the per-run rows
        :param gains: Gain rows; no gains file is written when empty
        :return: Dictionary with the paths written
        :raises OSError: If a path cannot be written
        """
        output = Path(self.output_path)
        self._write(output, self._dumps(list(records) + list(aggregates), EXPORT_COLUMNS))
        paths = [str(output)]
        if gains:
            path = gains_path(output)
            self._write(path, self._dumps(gains, GAIN_COLUMNS))
            paths.append(str(path))
        return {"paths": paths}
