"""Prepare merge-module aux.tsv term files from a simple CSV.

Input rows are ``id, prefLabel, synonym, synonym, ...`` (any number of
trailing synonym columns).  Rows without any synonym are dropped with a
warning, since matching requires both attributes; labels that cannot be
represented in the tab/pipe-separated output are errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path


class AuxError(ValueError):
    pass


_RESERVED = ("\t", "\n", "|")


def _check(text: str, kind: str, row: int) -> str:
    if any(ch in text for ch in _RESERVED):
        raise AuxError(f"{kind} {text!r} contains a reserved character at row {row}")
    return text


def export_aux_sample(in_path: str | Path, out_path: str | Path) -> dict:
    """Convert the CSV to aux.tsv; returns {'rows':…, 'written':…, 'skipped':…}."""
    rows = written = skipped = 0
    lines = []
    seen: set[str] = set()
    with open(in_path, encoding="utf-8", newline="") as fh:
        for row_no, fields in enumerate(csv.reader(fh), start=1):
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            rows += 1
            if len(fields) < 2 or not fields[0].strip() or not fields[1].strip():
                raise AuxError(f"expected at least id and prefLabel at row {row_no}")
            concept_id = _check(fields[0].strip(), "concept id", row_no)
            if concept_id in seen:
                raise AuxError(f"duplicate concept id {concept_id!r} at row {row_no}")
            seen.add(concept_id)
            pref_label = _check(fields[1].strip(), "prefLabel", row_no)
            synonyms = [_check(s.strip(), "synonym", row_no) for s in fields[2:] if s.strip()]
            if not synonyms:
                skipped += 1
                print(f"warning: row {row_no} ({concept_id}) has no synonyms; skipped", file=sys.stderr)
                continue
            lines.append(f"{concept_id}\t{pref_label}\t{'|'.join(synonyms)}\n")
            written += 1
    Path(out_path).write_text("".join(lines), encoding="utf-8")
    return {"rows": rows, "written": written, "skipped": skipped}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="Convert a term CSV into the merge aux.tsv format.")
    ap.add_argument("--input", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)
    try:
        stats = export_aux_sample(args.input, args.out)
    except (AuxError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"rows={stats['rows']} written={stats['written']} skipped={stats['skipped']} out={args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
