"""Export WordNet relations into the ordersketch nodes/edges TSV formats.

One node per synset of the chosen parts of speech (id = pos letter +
offset, lemmas = the synset's words); one edge per relation instance,
oriented child -> parent so that upper sets climb toward hypernyms and
wholes:

    hypernym           @ and @i pointers, synset -> its hypernym
    part_meronym       part -> whole (from both %p and #p, deduplicated)
    substance_meronym  substance -> whole (from %s and #s)

Verbs are excluded by default (their hypernym graph is not loop-free);
pass --pos noun,verb to include them and repair loops downstream.  A
manifest.json records the corpus files (size + sha256) and output counts,
since absolute numbers are corpus-version dependent.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .wndb import POS_FILES, SynsetRecord, WndbError, read_data_file

# relation -> pointer symbol -> True when the pointer target is the parent
RELATIONS: dict[str, dict[str, bool]] = {
    "hypernym": {"@": True, "@i": True},
    "part_meronym": {"#p": True, "%p": False},
    "substance_meronym": {"#s": True, "%s": False},
}

_RESERVED = ("\t", "\n", "|")

_SEARCH_DIRS = (
    "/usr/share/wordnet",
    "/usr/local/WordNet-3.0/dict",
    "/usr/local/share/wordnet",
    "~/nltk_data/corpora/wordnet",
    "/usr/share/nltk_data/corpora/wordnet",
    "/usr/local/share/nltk_data/corpora/wordnet",
)


@dataclass(frozen=True)
class ExportConfig:
    relation: str
    parts_of_speech: tuple[str, ...] = ("noun",)

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}; choose from {sorted(RELATIONS)}")
        bad = [p for p in self.parts_of_speech if p not in POS_FILES]
        if bad or not self.parts_of_speech:
            raise ValueError(f"parts_of_speech must be a nonempty subset of {sorted(POS_FILES)}")


def locate_wordnet(explicit: str | None = None) -> Path:
    """Find a directory containing data.noun, or fail with install hints."""
    candidates = [explicit] if explicit else [os.environ.get("ORDERSKETCH_WORDNET_DIR"), *_SEARCH_DIRS]
    for candidate in candidates:
        if not candidate:
            continue
        path = Path(candidate).expanduser()
        if (path / "data.noun").is_file():
            return path
    raise FileNotFoundError(
        "no WordNet database found: point --wordnet-dir (or ORDERSKETCH_WORDNET_DIR) "
        "at a directory containing data.noun, e.g. the dict/ directory of the "
        "WNdb-3.0 tarball from wordnet.princeton.edu or an unzipped "
        "nltk_data/corpora/wordnet"
    )


def _check_label(text: str, kind: str) -> str:
    if not text or any(ch in text for ch in _RESERVED) or text.startswith("#"):
        raise WndbError(f"{kind} {text!r} cannot be represented in the TSV format")
    return text


def export_wordnet(
    config: ExportConfig, wordnet_dir: Path, out_prefix: str | Path
) -> dict:
    """Write <prefix>.nodes.tsv / .edges.tsv / .manifest.json; return the manifest."""
    symbol_map = RELATIONS[config.relation]
    records: list[SynsetRecord] = []
    files: dict[str, dict] = {}
    for pos in sorted(config.parts_of_speech):
        path = wordnet_dir / POS_FILES[pos]
        if not path.is_file():
            raise FileNotFoundError(
                f"WordNet database at {wordnet_dir} has no {POS_FILES[pos]} "
                f"(required for --pos {pos})"
            )
        records.extend(read_data_file(path))
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        files[path.name] = {"bytes": path.stat().st_size, "sha256": digest}

    known = {record.id for record in records}
    edges: set[tuple[str, str]] = set()
    dropped_self = 0
    lemma_names: set[str] = set()
    node_lines = []
    for record in sorted(records, key=lambda r: r.id):
        seen: set[str] = set()
        words = []
        for word in record.words:
            _check_label(word, "lemma")
            if word not in seen:
                seen.add(word)
                words.append(word)
        lemma_names.update(words)
        node_lines.append(f"{record.id}\t{'|'.join(words)}\n")
        for pointer in record.pointers:
            parent_is_target = symbol_map.get(pointer.symbol)
            if parent_is_target is None or pointer.target not in known:
                continue
            edge = (record.id, pointer.target) if parent_is_target else (pointer.target, record.id)
            if edge[0] == edge[1]:
                dropped_self += 1
                continue
            edges.add(edge)

    out_prefix = str(out_prefix)
    nodes_path = Path(f"{out_prefix}.nodes.tsv")
    edges_path = Path(f"{out_prefix}.edges.tsv")
    nodes_path.parent.mkdir(parents=True, exist_ok=True)
    nodes_path.write_text("".join(node_lines), encoding="utf-8")
    edges_path.write_text("".join(f"{c}\t{p}\n" for c, p in sorted(edges)), encoding="utf-8")

    manifest = {
        "wordnet_dir": str(wordnet_dir),
        "files": files,
        "relation": config.relation,
        "parts_of_speech": list(sorted(config.parts_of_speech)),
        "synsets": len(records),
        "edges": len(edges),
        "distinct_lemma_names": len(lemma_names),
        "dropped_self_edges": dropped_self,
    }
    Path(f"{out_prefix}.manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="Export WordNet into nodes/edges TSV files.")
    ap.add_argument("--wordnet-dir", default=None, help="directory containing data.noun")
    ap.add_argument("--relation", default="hypernym", choices=sorted(RELATIONS))
    ap.add_argument("--pos", default="noun", help="comma-separated: noun,verb (default noun)")
    ap.add_argument("--out-prefix", required=True)
    args = ap.parse_args(argv)
    try:
        config = ExportConfig(args.relation, tuple(p for p in args.pos.split(",") if p))
        manifest = export_wordnet(config, locate_wordnet(args.wordnet_dir), args.out_prefix)
    except (WndbError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"relation={manifest['relation']} synsets={manifest['synsets']} "
        f"edges={manifest['edges']} out_prefix={args.out_prefix}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
