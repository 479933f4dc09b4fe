"""
CSV and JSON serialization of result records.
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

TOOL_NAME = "eup-coulomb"
TOOL_VERSION = "0.1.0"

SIGNIFICANT_DIGITS = 17


def format_value(value: Any) -> str:
    """Fixed formatting so identical runs give byte-identical files."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "to_dict"):
        return _jsonable(value.to_dict())
    return value


class RecordSerializer:
    """Writes flat records as '#'-headed CSV or as a JSON document."""

    def __init__(self, indent: int = 2, ensure_ascii: bool = False):
        """
        Initialize serializer.

        Args:
            indent: JSON indentation level
            ensure_ascii: Whether to ensure ASCII encoding
        """
        self.indent = indent
        self.ensure_ascii = ensure_ascii

    def metadata(
        self, command: str, config: Mapping[str, Any], extra: Optional[Mapping[str, Any]] = None
    ) -> Dict[str, Any]:
        meta: Dict[str, Any] = {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": command,
            "config": _jsonable(config),
        }
        if extra:
            meta.update(_jsonable(extra))
        return meta

    def to_csv_string(
        self,
        records: Sequence[Mapping[str, Any]],
        metadata: Mapping[str, Any],
        columns: Optional[List[str]] = None,
        footer: Optional[Iterable[str]] = None,
    ) -> str:
        """
        Records as CSV with '#' header lines carrying the metadata.

        Args:
            records: Flat mappings, one per row
            metadata: Echoed as '# key: value' lines
            columns: Column order; defaults to the keys of the first record
            footer: Extra '#' lines written after the rows
        """
        buffer = io.StringIO()
        for key, value in metadata.items():
            rendered = (
                json.dumps(value, sort_keys=True)
                if isinstance(value, (dict, list))
                else format_value(value)
            )
            buffer.write(f"# {key}: {rendered}\n")

        if columns is None:
            columns = list(records[0].keys()) if records else []
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            writer.writerow([format_value(record.get(column)) for column in columns])
        for line in footer or ():
            buffer.write(f"# {line}\n")
        return buffer.getvalue()

    def to_json_string(
        self, records: Sequence[Mapping[str, Any]], metadata: Mapping[str, Any]
    ) -> str:
        data = {"_metadata": _jsonable(metadata), "records": _jsonable(list(records))}
        return json.dumps(data, indent=self.indent, ensure_ascii=self.ensure_ascii)

    def render(
        self,
        fmt: str,
        records: Sequence[Mapping[str, Any]],
        metadata: Mapping[str, Any],
        columns: Optional[List[str]] = None,
        footer: Optional[Iterable[str]] = None,
    ) -> str:
        if fmt == "csv":
            return self.to_csv_string(records, metadata, columns, footer)
        if fmt == "json":
            meta = dict(metadata)
            if footer:
                meta["footer"] = list(footer)
            return self.to_json_string(records, meta)
        raise ValueError(f"Unsupported format: {fmt}")

    def write(self, text: str, file_path: str) -> None:
        """Write rendered output, creating parent directories as needed."""
        output_path = Path(file_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
