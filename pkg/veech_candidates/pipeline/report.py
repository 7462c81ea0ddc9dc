"""
Output of candidate records as JSON lines, CSV or text.
"""
import csv
import enum
import json
import logging

import veech_candidates

from .record import CandidateRecord

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "genus",
    "roots",
    "relative_period",
    "winding",
    "torsion_order",
    "moduli",
    "matrix",
    "params",
    "vertical_circumferences",
    "vertical_heights",
    "trace",
    "flags",
)


class ReportFormat(enum.Enum):
    JSONL = "jsonl"
    CSV = "csv"
    TEXT = "text"


def _dumps(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _header(records):
    return f"# veech-candidates {veech_candidates.__version__}: {len(records)} candidates\n"


def _text_block(record):
    p = record.params
    lines = [
        f"roots: {', '.join(str(x) for x in record.roots)}",
        f"  N = {record.torsion_order}, moduli = {record.moduli}",
        f"  trace field: degree {record.trace.degree}, conductor {record.trace.conductor}, "
        f"discriminant {record.trace.discriminant}",
        f"  widths: {', '.join(str(b) for b in p.widths)}",
        f"  heights: {', '.join(str(h) for h in p.heights)}",
        f"  slits: {', '.join(str(w) for w in p.slit_widths)}",
        f"  twists: {', '.join(str(t) for t in p.twists)}",
        f"  intersection matrix: {record.matrix.to_json()}",
    ]
    return "\n".join(lines) + "\n"


def write_report(candidates, stream, format="jsonl"):
    """
    Write records in canonical order (trace field conductor, then roots) to a text stream.

    Every format starts with a comment line. In CSV every cell holds the compact JSON of the
    corresponding field of the JSON lines format.
    """
    format = ReportFormat(format)
    records = sorted(candidates, key=CandidateRecord.sort_key)
    stream.write(_header(records))
    if format == ReportFormat.JSONL:
        for record in records:
            stream.write(_dumps(record.to_json()) + "\n")
    elif format == ReportFormat.CSV:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            data = record.to_json()
            writer.writerow([_dumps(data[column]) for column in CSV_COLUMNS])
    else:
        for record in records:
            stream.write("\n" + _text_block(record))
    logger.debug("Wrote %d records as %s", len(records), format.value)


def _data_lines(stream):
    return (line for line in stream if line.strip() and not line.startswith("#"))


def read_jsonl(stream):
    """Records from a JSON lines stream written by ``write_report``."""
    return [CandidateRecord.from_json(json.loads(line)) for line in _data_lines(stream)]


def read_csv(stream):
    """Records from a CSV stream written by ``write_report``."""
    reader = csv.DictReader(_data_lines(stream))
    return [CandidateRecord.from_json({k: json.loads(v) for k, v in row.items()}) for row in reader]


def load_records(path_to_file):
    """
    Load records from a JSON lines or CSV file (chosen by the extension).

    Raises
    ------
    IOError
        The file is missing or contains invalid records.
    """
    try:
        with open(path_to_file, "r", newline="") as stream:
            if path_to_file.endswith(".csv"):
                return read_csv(stream)
            return read_jsonl(stream)
    except Exception as ex:
        raise IOError(f"Error while loading candidate records from file '{path_to_file}': {ex}") from ex
