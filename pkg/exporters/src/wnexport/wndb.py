"""Reader for the standard WordNet database files (data.noun, data.verb).

Each non-header line of a data.pos file describes one synset:

    offset lex_filenum ss_type w_cnt word lex_id [word lex_id ...]
    p_cnt [ptr ...] [frame data] | gloss

where w_cnt is two-digit hex, p_cnt three-digit decimal and every pointer
is the four tokens ``symbol offset pos source/target``.  Verb frame data
between the pointers and the gloss is skipped.  Synset identity here is
the corpus's own: the part-of-speech letter plus the 8-digit offset,
e.g. ``n02084071``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

POS_FILES = {"noun": "data.noun", "verb": "data.verb"}


class WndbError(ValueError):
    """Malformed WordNet database content."""


@dataclass(frozen=True)
class Pointer:
    symbol: str
    target: str  # pos letter + 8-digit offset


@dataclass(frozen=True)
class SynsetRecord:
    id: str  # pos letter + 8-digit offset
    words: tuple[str, ...]
    pointers: tuple[Pointer, ...]


def parse_data_line(line: str, lineno: int) -> SynsetRecord:
    head = line.split(" | ", 1)[0]
    fields = head.split()
    try:
        offset = fields[0]
        ss_type = fields[2]
        if len(offset) != 8 or not offset.isdigit():
            raise WndbError(f"bad synset offset {offset!r} at line {lineno}")
        w_cnt = int(fields[3], 16)
        words = tuple(fields[4 + 2 * i] for i in range(w_cnt))
        at = 4 + 2 * w_cnt
        p_cnt = int(fields[at], 10)
        pointers = []
        for i in range(p_cnt):
            symbol, ptr_offset, ptr_pos, _source_target = fields[at + 1 + 4 * i : at + 5 + 4 * i]
            pointers.append(Pointer(symbol, f"{ptr_pos}{ptr_offset}"))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, WndbError):
            raise
        raise WndbError(f"malformed synset record at line {lineno}: {exc}") from None
    # satellite adjectives ('s') share the 'a' identity space
    pos_letter = "a" if ss_type == "s" else ss_type
    return SynsetRecord(f"{pos_letter}{offset}", words, tuple(pointers))


def read_data_file(path: Path) -> Iterator[SynsetRecord]:
    """Yield every synset of one data.pos file; header lines start '  '."""
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("  "):
                continue
            yield parse_data_line(line, lineno)
