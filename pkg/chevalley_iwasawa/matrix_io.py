"""Matrix text format: a header line "p m n", then n rows of n entries.

Entries are p-adic digit strings ("1,0,1:^4") or plain integers, read modulo p^m.
"""

import logging
from pathlib import Path

from chevalley_iwasawa.errors import ParseError, PrecisionError
from chevalley_iwasawa.group_model import GroupElement
from chevalley_iwasawa.padic import format_digits, parse_digits

logger = logging.getLogger(__name__)


def _entry(token: str, p: int, precision: int) -> int:
    if ":^" in token:
        value = parse_digits(token, p)
        if value.precision < precision:
            raise PrecisionError(
                f"entry {token} has precision {value.precision}, header asks for {precision}", required=precision
            )
        return value.residue % p**precision
    try:
        return int(token) % p**precision
    except ValueError as e:
        raise ParseError(f"cannot read matrix entry {token!r}") from e


def parse_matrix(text: str) -> GroupElement:
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        p, precision, n = (int(x) for x in lines[0].split())
    except ValueError as e:
        raise ParseError(f"matrix header must be 'p m n', got {lines[0]!r}") from e
    if len(lines) - 1 != n:
        raise ParseError(f"header announces {n} rows, found {len(lines) - 1}")
    rows = []
    for k, line in enumerate(lines[1:], start=1):
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"row {k} has {len(tokens)} entries, expected {n}")
        rows.append(tuple(_entry(t, p, precision) for t in tokens))
    logger.debug("read %dx%d matrix over Z/%d^%d", n, n, p, precision)
    return GroupElement(p, precision, tuple(rows))


def read_matrix(path) -> GroupElement:
    return parse_matrix(Path(path).read_text())


def format_matrix(g: GroupElement) -> str:
    lines = [f"{g.p} {g.precision} {g.size}"]
    for i in range(g.size):
        lines.append(" ".join(format_digits(g.entry(i, j)) for j in range(g.size)))
    return "\n".join(lines) + "\n"
