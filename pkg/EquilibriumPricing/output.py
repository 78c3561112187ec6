"""
Serialization of result records to CSV or JSON.

CSV output flattens nested records with '.' separated column names, writes a header row, uses LF line endings and
renders floats with their shortest round-trip representation. JSON output keeps the nesting.
"""

from logging import getLogger
from typing import List, Literal

from .exceptions import ConfigurationException

logger = getLogger('eqp')

OutputFormat = Literal['csv', 'json']
FORMATS = ('csv', 'json')


def determine_format(path: str, default: OutputFormat = 'csv') -> str:
    """
    Determines the output format from a file extension.
    """

    supported_extensions_and_formats = {
        'csv': 'csv',
        'json': 'json'
    }

    if not path or path == '-' or '.' not in path:
        return default

    return supported_extensions_and_formats.get(path.rsplit('.', 1)[-1].lower(), default)


def flatten_records(records: List[dict]) -> List[dict]:
    from flatten_json import flatten

    return [flatten(record, separator='.') for record in records]


def render_records(records: List[dict], format: OutputFormat = 'csv') -> str:
    """
    Renders records as CSV or JSON text.

    Args:
        records (List[dict]): The records; nested dictionaries are allowed.
        format (str): 'csv' or 'json'.

    Returns:
        str: The rendered text, ending in a newline.
    """

    if format == 'json':
        import json

        return json.dumps(records, default=str, indent=4) + '\n'

    if format != 'csv':
        raise ConfigurationException(f'unsupported output format {format}; expected one of {FORMATS}')

    from csv import DictWriter
    from io import StringIO

    rows = flatten_records(records)

    # union of keys in first-seen order keeps the header stable across runs
    fieldnames = list(dict.fromkeys(key for row in rows for key in row))

    buffer = StringIO()
    writer = DictWriter(buffer, fieldnames=fieldnames, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)

    return buffer.getvalue()


def write_text(text: str, path: str = None) -> None:
    """
    Writes UTF-8 text with LF line endings to `path`, or to standard output when `path` is None or '-'.
    """

    if not path or path == '-':
        import sys

        sys.stdout.write(text)
        sys.stdout.flush()
        return

    from pathlib import Path

    target = Path(path).expanduser()

    with open(target, 'w', encoding='utf-8', newline='') as file:
        file.write(text)

    logger.debug(f'wrote {len(text)} characters to {target}')


def write_records(records: List[dict], format: OutputFormat = 'csv', path: str = None) -> None:
    write_text(render_records(records, format), path)
