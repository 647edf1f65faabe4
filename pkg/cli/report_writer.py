import csv
import io
import json
import sys

import jax
import numpy as np
import scipy

from _config.app_config import get_config

FORMATS = ("json", "csv")


def versions() -> dict:
    app = get_config().get_app_config()
    return {
        app.get("name", "elastica"): app.get("version"),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "jax": jax.__version__,
    }


def make_header(command: str, inputs: dict, seed) -> dict:
    """
    Header block carried by every artifact: the command, its inputs, library versions and the seed.
    Thread counts are not echoed so the artifacts do not depend on them.
    """
    return {"command": command, "inputs": inputs, "versions": versions(), "seed": seed}


def resolve_format(fmt: str, out: str) -> str:
    if fmt is not None:
        return fmt
    return "csv" if out is not None and out.lower().endswith(".csv") else "json"


def flatten(record: dict, prefix: str = "") -> dict:
    """
    Scalar fields of a nested record under dotted names; lists are dropped.
    """
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        elif not isinstance(value, list):
            flat[name] = value
    return flat


def render_json(header: dict, record: dict) -> str:
    return json.dumps({"header": header, **record}, indent=2) + "\n"


def render_csv(header: dict, record: dict, rows: list = None, columns=None) -> str:
    """
    "# key: value" comment lines for the header, then the rows under the given columns.
    Without rows the record itself is flattened into a single row.
    """
    buffer = io.StringIO()
    for key, value in header.items():
        buffer.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    if rows is None:
        rows = [flatten(record)]
        columns = list(rows[0])
    elif columns is None:
        columns = list(rows[0]) if rows else []
    writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def write_report(out: str, fmt: str, header: dict, record: dict, rows: list = None, columns=None) -> None:
    """
    Write one artifact to out, or to stdout when out is None.

    :param out: Output path or None.
    :param fmt: "json", "csv" or None to infer it from the file extension.
    :param header: Header block from make_header.
    :param record: Result fields.
    :param rows: Table rows for the csv format.
    :param columns: Column order of the rows.
    """
    fmt = resolve_format(fmt, out)
    text = render_json(header, record) if fmt == "json" else render_csv(header, record, rows, columns)
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as file:
        file.write(text)
