"""Plain-text code files: a versioned header, then one line per row.

Format::

    # z2k-code v1
    # free-form comment lines are allowed anywhere
    modulus: 8
    length: 32
    rows: 17
    1 0 0 ... (space-separated digits, one generator row per line)

Parsing is strict: every error names the line and column it points at,
digits must lie in [0, modulus), and serialize/parse round-trips the
matrix bit-exactly.
"""

from typing import Iterable, List, Optional, Tuple

import numpy as np

from .model import GeneratorMatrix
from .rings import DomainError, Modulus

FORMAT_LINE = "# z2k-code v1"

_HEADER_KEYS = ("modulus", "length", "rows")


class CodeFileError(DomainError):
    """Parse failure with a 1-based line/column location."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__("line %d, column %d: %s" % (line, column, message))
        self.line = line
        self.column = column


def _parse_header_value(key: str, raw: str, lineno: int, column: int) -> int:
    if not raw.isdigit():
        raise CodeFileError("%s wants a non-negative integer, got %r"
                            % (key, raw), lineno, column)
    return int(raw)


def parse_code_file(text: str) -> GeneratorMatrix:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_LINE:
        raise CodeFileError("first line must be %r" % FORMAT_LINE, 1)

    header = {}
    body_start: Optional[int] = None
    for idx in range(1, len(lines)):
        line = lines[idx]
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if ":" not in stripped:
            body_start = idx
            break
        key, _, raw = stripped.partition(":")
        key = key.strip()
        if key not in _HEADER_KEYS:
            raise CodeFileError("unknown header key %r" % key, idx + 1,
                                line.index(key) + 1)
        if key in header:
            raise CodeFileError("duplicate header key %r" % key, idx + 1)
        value_text = raw.strip()
        if value_text:
            column = line.index(value_text, line.index(":") + 1) + 1
        else:
            column = line.index(":") + 2
        header[key] = _parse_header_value(key, value_text, idx + 1, column)
    else:
        body_start = len(lines)

    for key in _HEADER_KEYS:
        if key not in header:
            raise CodeFileError("missing header key %r" % key, len(lines))
    if header["modulus"] < 2:
        raise CodeFileError("modulus must be at least 2", 1)

    modulus = Modulus(header["modulus"])
    n, expected_rows = header["length"], header["rows"]
    rows: List[List[int]] = []
    lineno = body_start
    while lineno < len(lines) and len(rows) < expected_rows:
        line = lines[lineno]
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            lineno += 1
            continue
        row: List[int] = []
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            end = pos
            while end < len(line) and not line[end].isspace():
                end += 1
            token = line[pos:end]
            if len(row) == n:
                raise CodeFileError("row has more than %d entries" % n,
                                    lineno + 1, pos + 1)
            if not token.isdigit():
                raise CodeFileError("expected a digit, got %r" % token,
                                    lineno + 1, pos + 1)
            value = int(token)
            if value >= modulus.two_k:
                raise CodeFileError(
                    "digit %d out of range for modulus %d"
                    % (value, modulus.two_k), lineno + 1, pos + 1)
            row.append(value)
            pos = end
        if len(row) < n:
            raise CodeFileError("row has %d entries, expected %d"
                                % (len(row), n), lineno + 1, len(line) + 1)
        rows.append(row)
        lineno += 1

    if len(rows) < expected_rows:
        raise CodeFileError("expected %d rows, found %d"
                            % (expected_rows, len(rows)), len(lines) + 1)
    for idx in range(lineno, len(lines)):
        stripped = lines[idx].strip()
        if stripped and not stripped.startswith("#"):
            raise CodeFileError("unexpected content after %d rows"
                                % expected_rows, idx + 1)

    data = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    return GeneratorMatrix(modulus, data)


def serialize_code_file(matrix: GeneratorMatrix,
                        comments: Iterable[str] = ()) -> str:
    out = [FORMAT_LINE]
    for comment in comments:
        out.append("# %s" % comment if comment else "#")
    out.append("modulus: %d" % matrix.modulus.two_k)
    out.append("length: %d" % matrix.n)
    out.append("rows: %d" % matrix.num_rows)
    for row in matrix.array:
        out.append(" ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"
