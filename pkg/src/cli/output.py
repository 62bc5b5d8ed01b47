"""
Rendering of command results.

CSV goes through pandas (``,`` separator, LF line endings), JSON through
pydantic, markdown through a jinja2 template. Everything is written as UTF-8
to the requested file or to stdout.
"""

import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import pandas as pd
from jinja2 import DictLoader, Environment, StrictUndefined
from pydantic import BaseModel

from src.cli.schemas import OutputFormat

logger = logging.getLogger(__name__)

_TEMPLATES = {
    "records.md.j2": (
        "{% if title %}## {{ title }}\n\n{% endif %}"
        "| {{ columns | join(' | ') }} |\n"
        "|{% for _ in columns %}---|{% endfor %}\n"
        "{% for row in rows %}| {{ row | join(' | ') }} |\n{% endfor %}"
    ),
    "level_table.md.j2": (
        "## {{ title }}\n\n"
        "| m | r_i | beta | levels |\n"
        "|---|---|---|---|\n"
        "{% for row in rows %}"
        "| {{ row.m }} | {{ row.r_i }} | {{ row.beta }} | {{ row.display | join(', ') }} |\n"
        "{% endfor %}"
    ),
}

_environment = Environment(
    loader=DictLoader(_TEMPLATES),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    autoescape=False,
)


def _format_cell(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ", ".join(_format_cell(v) for v in value)
    return "" if value is None else str(value)


def records_to_csv(records: Sequence[BaseModel], columns: Sequence[str]) -> str:
    """CSV with a header row; header only when there are no records."""
    frame = pd.DataFrame([r.model_dump() for r in records], columns=list(columns))
    return frame.to_csv(index=False, lineterminator="\n")


def records_to_markdown(
    records: Sequence[BaseModel], columns: Sequence[str], title: Optional[str] = None
) -> str:
    rows = [[_format_cell(r.model_dump()[c]) for c in columns] for r in records]
    return _environment.get_template("records.md.j2").render(
        title=title, columns=list(columns), rows=rows
    )


def level_table_markdown(title: str, rows: Sequence[BaseModel]) -> str:
    return _environment.get_template("level_table.md.j2").render(title=title, rows=rows)


def render(
    records: Sequence[BaseModel],
    columns: Sequence[str],
    fmt: OutputFormat,
    *,
    document: Optional[BaseModel] = None,
    title: Optional[str] = None,
) -> str:
    """
    Serialize ``records`` in the requested format.

    Args:
        records: Flat rows for CSV and markdown
        columns: Column order
        fmt: Output format
        document: Model dumped for JSON (defaults to the list of records)
        title: Markdown heading
    """
    if fmt is OutputFormat.CSV:
        return records_to_csv(records, columns)
    if fmt is OutputFormat.MARKDOWN:
        return records_to_markdown(records, columns, title)
    if document is not None:
        return document.model_dump_json(indent=2) + "\n"
    return json.dumps([r.model_dump(mode="json") for r in records], indent=2) + "\n"


def emit(text: str, output_path: Optional[str] = None) -> None:
    """Write to ``output_path`` (UTF-8, LF) or to stdout."""
    if output_path:
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info("Output written", extra={"path": str(path), "bytes": len(text)})
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
