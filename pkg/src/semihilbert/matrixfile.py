"""Reader and writer for the ``shmat v1`` text matrix format.

::

    shmat v1
    field real            # or: field complex
    rows 2 cols 2
    1 0
    0 0

Complex entries are written as ``re im`` pairs. ``#`` starts a comment.
Values are written with 17 significant digits so a write/read cycle is
bit-exact.
"""

import math

import numpy as np

from .errors import DimensionError, NonFiniteEntry, ParseError

HEADER = "shmat v1"


def format_float(x):
    x = float(x)
    if x == 0.0:
        return "-0" if math.copysign(1.0, x) < 0 else "0"
    return format(x, ".17g")


def _tokens(line):
    """Yield ``(column, token)`` pairs, 1-based columns."""
    i = 0
    n = len(line)
    while i < n:
        while i < n and line[i].isspace():
            i += 1
        if i >= n:
            break
        j = i
        while j < n and not line[j].isspace():
            j += 1
        yield i + 1, line[i:j]
        i = j


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _number(tok, lineno, col):
    try:
        value = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", lineno, col) from None
    if not math.isfinite(value):
        raise NonFiniteEntry(f"non-finite entry {tok!r}", lineno, col)
    return value


def parse_matrix_text(text):
    lines = _content_lines(text)

    def expect(what):
        try:
            return next(lines)
        except StopIteration:
            raise ParseError(f"unexpected end of file, expected {what}") from None

    lineno, line = expect("header")
    if line.split() != HEADER.split():
        raise ParseError(f"expected header {HEADER!r}", lineno, 1)

    lineno, line = expect("field line")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "field" or parts[1] not in ("real", "complex"):
        raise ParseError("expected 'field real' or 'field complex'", lineno, 1)
    field = parts[1]

    lineno, line = expect("dimension line")
    toks = list(_tokens(line))
    words = [t for _, t in toks]
    if len(words) != 4 or words[0] != "rows" or words[2] != "cols":
        raise ParseError("expected 'rows R cols C'", lineno, 1)
    try:
        rows, cols = int(words[1]), int(words[3])
    except ValueError:
        raise ParseError("row and column counts must be integers", lineno, 1) from None
    if rows < 1 or cols < 1:
        raise DimensionError("row and column counts must be positive", lineno, 1)

    per_row = cols if field == "real" else 2 * cols
    out = np.zeros((rows, cols), dtype=float if field == "real" else complex)
    for i in range(rows):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise DimensionError(f"expected {rows} rows, found {i}") from None
        toks = list(_tokens(line))
        if len(toks) != per_row:
            col = toks[per_row][0] if len(toks) > per_row else len(line) + 1
            raise ParseError(f"expected {per_row} values, found {len(toks)}", lineno, col)
        vals = [_number(tok, lineno, col) for col, tok in toks]
        if field == "real":
            out[i] = vals
        else:
            # assign parts separately; complex arithmetic drops signed zeros
            out.real[i] = vals[0::2]
            out.imag[i] = vals[1::2]
    extra = next(lines, None)
    if extra is not None:
        raise DimensionError(f"more than {rows} rows of entries", extra[0], 1)
    return out


def parse_matrix_file(path):
    """Read a ``shmat v1`` file; the dtype (float or complex) carries the field tag."""
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_text(fh.read())


def emit_matrix(m, field=None):
    m = np.atleast_2d(np.asarray(m))
    if field is None:
        field = "complex" if np.iscomplexobj(m) else "real"
    rows, cols = m.shape
    lines = [HEADER, f"field {field}", f"rows {rows} cols {cols}"]
    for row in m:
        if field == "real":
            lines.append(" ".join(format_float(np.real(v)) for v in row))
        else:
            lines.append(" ".join(f"{format_float(v.real)} {format_float(v.imag)}" for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_file(path, m, field=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_matrix(m, field))
