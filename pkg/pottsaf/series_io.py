# python 2 backwards compatibility
from __future__ import print_function
from six import string_types

# external imports
import io
import logging

import unicodecsv

# package imports
from .errors import MergeError, ParseError, ValidationError
from .models import PolygonTable, Provenance, SeriesFormat

logger = logging.getLogger(__name__)


def _parse_count(token, line_number):
    try:
        value = int(token.strip())
    except ValueError:
        raise ParseError("value {!r} is not an integer".format(token), line_number)
    if value < 0:
        raise ParseError("value {} is negative".format(value), line_number)
    return value


def _add_entry(entries, L, value, line_number):
    if L in entries:
        raise ParseError("duplicate L = {}".format(L), line_number)
    if L % 2:
        raise ParseError("odd length L = {}".format(L), line_number)
    if L < 6:
        raise ParseError("L = {} is below the shortest circuit length 6".format(L), line_number)
    if L == 6 and value != 1:
        raise ParseError("q_6 must be 1, got {}".format(value), line_number)
    if L == 8 and value != 0:
        raise ParseError("q_8 must be 0, got {}".format(value), line_number)
    entries[L] = value


def _parse_canonical(text):
    entries = {}
    reader = unicodecsv.reader(io.BytesIO(text.encode('utf-8')), encoding='utf-8')
    for row in reader:
        line_number = reader.line_num
        if not row or all(not field.strip() for field in row):
            continue
        if len(row) != 2:
            raise ParseError("expected 'L,q_L', got {} fields".format(len(row)), line_number)
        L = _parse_count(row[0], line_number)
        _add_entry(entries, L, _parse_count(row[1], line_number), line_number)
    return entries


def _parse_moment_series(text):
    entries = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith('#'):
            continue
        try:
            L = int(tokens[0])
        except ValueError:
            # header lines of published series files
            logger.debug("skipping non-numeric line %d", line_number)
            continue
        if len(tokens) < 2:
            raise ParseError("expected 'L value'", line_number)
        _add_entry(entries, L, _parse_count(tokens[1], line_number), line_number)
    return entries


def parse_polygon_table(text, format=SeriesFormat.CANONICAL):
    """
    Parse a table of ``q_L`` counts.

    :param text: the file contents
    :param format: ``"canonical"`` (lines ``L,q_L``) or ``"moment-series"`` (whitespace-separated ``L value`` pairs,
        ``#`` comments and non-numeric header lines skipped)
    :return: the validated :class:`PolygonTable`
    :raises ParseError: naming the offending line
    """

    format = SeriesFormat.parse(format)
    if isinstance(text, bytes):
        text = text.decode('utf-8')
    if not text or not text.strip():
        raise ParseError("empty input")

    if format == SeriesFormat.CANONICAL:
        entries = _parse_canonical(text)
    else:
        entries = _parse_moment_series(text)
    if not entries:
        raise ParseError("no entries found")

    provenance = Provenance.INGESTED
    logger.debug("parsed %d entries up to L = %d", len(entries), max(entries))
    return PolygonTable(entries, provenance=provenance)


def read_polygon_table(path, format=None):
    """
    Read a table from disk.  Without an explicit format, ``.csv`` files are canonical and anything else is read as a
    moment series.
    """

    if format is None:
        format = SeriesFormat.CANONICAL if path.lower().endswith('.csv') else SeriesFormat.MOMENT_SERIES
    with io.open(path, 'rb') as f:
        data = f.read()
    table = parse_polygon_table(data, format)
    logger.info("Read %d polygon counts (L <= %d) from %s", len(table.entries), table.max_L, path)
    return table


def _csv_text(header, rows):
    buffer = io.BytesIO()
    writer = unicodecsv.writer(buffer, encoding='utf-8', lineterminator='\n')
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue().decode('utf-8')


def write_polygon_table(table):
    """
    Render a table in the canonical format: ``L,q_L`` lines sorted by ``L``, LF-terminated, no header.
    """

    return _csv_text(None, ((L, table.entries[L]) for L in sorted(table.entries)))


def merge_tables(enumerated, ingested):
    """
    Merge a self-enumerated table with an ingested one.  Shared lengths must agree exactly.

    :raises MergeError: listing every mismatched ``L``
    """

    shared = set(enumerated.entries) & set(ingested.entries)
    mismatched = [L for L in shared if enumerated.entries[L] != ingested.entries[L]]
    if mismatched:
        raise MergeError(mismatched)

    entries = dict(ingested.entries)
    entries.update(enumerated.entries)
    p_entries = None
    if enumerated.p_entries is not None or ingested.p_entries is not None:
        p_entries = dict(ingested.p_entries or {})
        p_entries.update(enumerated.p_entries or {})
    logger.debug("merged tables agree on %d shared lengths", len(shared))
    return PolygonTable(entries, p_entries=p_entries, provenance=Provenance.MERGED)


def write_timing_report(rows):
    """
    :param rows: iterable of ``(L, count, seconds)``
    :return: CSV text with header ``L,count,seconds``
    """

    return _csv_text(('L', 'count', 'seconds'), ((L, count, "{:.6f}".format(seconds)) for L, count, seconds in rows))


def write_csv(header, rows):
    """Generic CSV rendering used for time series and beta scans."""
    if isinstance(header, string_types):
        raise ValidationError("header must be a sequence of column names")
    return _csv_text(header, rows)
