"""Subcommand front end wiring the library into batch pipelines.

Every pipeline is a pure function of its input files and flags: outputs
are written atomically (temp file + rename, nothing partial on failure)
and re-running reproduces them byte-identically.  Exit codes: 0 success,
1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .bench import format_bench_tsv, run_bench
from .closure import NotADagError, compute_upper_sets
from .dagify import condensation_report, condense, is_acyclic
from .evaluation import (
    evaluate,
    generate_pairs,
    serialize_roc,
    serialize_scores,
    serialize_summary,
    sweep_dimension,
)
from .merge import default_stopwords, load_stopwords, merge_ontologies, parse_aux, serialize_merge_records
from .ontology import FormatError, build_lemma_index, load_ontology, serialize_edges, serialize_nodes
from .sketch import (
    DegenerateDenominatorError,
    HashSpec,
    derive_hash_spec,
    embed_all,
    read_embedding,
    score,
    classify,
    write_embedding,
)
from .synth import SynthConfig, generate


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require_files(*paths: str) -> None:
    missing = [p for p in paths if not Path(p).is_file()]
    if missing:
        raise FileNotFoundError(f"missing input file(s): {', '.join(missing)}")


def _summary_line(**keyvals) -> None:
    print(" ".join(f"{k}={v}" for k, v in keyvals.items()))


def _hash_spec(args) -> HashSpec:
    if args.seed1 is not None or args.seed2 is not None:
        if args.seed1 is None or args.seed2 is None:
            raise ValueError("--seed1 and --seed2 must be given together")
        return HashSpec(args.seed1, args.seed2, args.dim)
    return derive_hash_spec(args.seed, args.dim)


def _load_stopwords(path: str | None) -> frozenset[str]:
    return load_stopwords(path) if path else default_stopwords()


def cmd_gen(args) -> int:
    config = SynthConfig(
        nodes=args.nodes,
        multi_lemma=args.multi_lemma,
        fanin_max=args.fanin_max,
        cycle_injections=args.cycles,
        seed=args.seed,
    )
    ontology = generate(config)
    _atomic_write_text(Path(f"{args.out_prefix}.nodes.tsv"), serialize_nodes(ontology.synsets))
    _atomic_write_text(Path(f"{args.out_prefix}.edges.tsv"), serialize_edges(ontology))
    _summary_line(
        command="gen",
        nodes=len(ontology.synsets),
        edges=len(ontology.edges),
        acyclic=is_acyclic(ontology),
        out_prefix=args.out_prefix,
    )
    return 0


def cmd_fix_loops(args) -> int:
    _require_files(args.nodes, args.edges)
    ontology = load_ontology(args.nodes, args.edges)
    dag, mapping = condense(ontology)
    _atomic_write_text(Path(f"{args.out_prefix}.nodes.tsv"), serialize_nodes(dag.synsets))
    _atomic_write_text(Path(f"{args.out_prefix}.edges.tsv"), serialize_edges(dag))
    _atomic_write_text(Path(f"{args.out_prefix}.loops.tsv"), condensation_report(mapping))
    _summary_line(
        command="fix-loops",
        loops_fixed=mapping.loop_count,
        nodes_in=len(ontology.synsets),
        nodes_out=len(dag.synsets),
        out_prefix=args.out_prefix,
    )
    return 0


def cmd_embed(args) -> int:
    _require_files(args.nodes, args.edges)
    ontology = load_ontology(args.nodes, args.edges)
    index = compute_upper_sets(ontology)
    lemmas = build_lemma_index(ontology)
    spec = _hash_spec(args)
    emb = embed_all(index, lemmas, spec, threads=args.threads)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out.parent, prefix=f".{out.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            write_embedding(emb, fh)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    _summary_line(
        command="embed",
        keys=len(emb),
        d=spec.d,
        seed1=f"{spec.seed1:016x}",
        seed2=f"{spec.seed2:016x}",
        out=args.out,
    )
    return 0


def cmd_query(args) -> int:
    _require_files(args.emb)
    emb = read_embedding(args.emb)
    for key in (args.x, args.y):
        if key not in emb:
            raise KeyError(f"key {key!r} not present in the embedding")
    result = score(args.x, args.y, emb)
    decision = classify(args.x, args.y, emb, args.threshold, args.direction_corrected)
    _summary_line(
        command="query",
        x=args.x,
        y=args.y,
        r=repr(result.r),
        r_hat=repr(result.r_hat),
        direction_ok=result.direction_ok,
        threshold=args.threshold,
        direction_corrected=args.direction_corrected,
        decision=decision,
    )
    return 0


def cmd_eval(args) -> int:
    _require_files(args.nodes, args.edges)
    ontology = load_ontology(args.nodes, args.edges)
    index = compute_upper_sets(ontology)
    lemmas = build_lemma_index(ontology)
    spec = _hash_spec(args)
    emb = embed_all(index, lemmas, spec, threads=args.threads)
    records = generate_pairs(index, lemmas, args.negatives_k, args.seed)
    summary = evaluate(records, emb)
    _atomic_write_text(Path(args.out_scores), serialize_scores(records))
    _atomic_write_text(Path(args.out_roc), serialize_roc(summary))
    extra = {
        "d": spec.d,
        "seed": args.seed,
        "negatives_k": args.negatives_k,
        "nodes": len(ontology.synsets),
    }
    _atomic_write_text(Path(args.out_summary), serialize_summary(summary, extra))
    _summary_line(
        command="eval",
        n_pos=summary.n_pos,
        n_neg=summary.n_neg,
        auroc=repr(summary.auroc),
        mean_abs_dev_pos=repr(summary.mean_abs_dev_pos),
        mean_abs_dev_neg=repr(summary.mean_abs_dev_neg),
        degenerate_excluded=summary.degenerate_excluded,
    )
    return 0


def cmd_sweep(args) -> int:
    _require_files(args.nodes, args.edges)
    d_values = [int(v) for v in args.dims.split(",") if v]
    ontology = load_ontology(args.nodes, args.edges)
    index = compute_upper_sets(ontology)
    lemmas = build_lemma_index(ontology)
    results = sweep_dimension(index, lemmas, d_values, args.negatives_k, args.seed, threads=args.threads)
    text = "d,auroc\n" + "".join(f"{d},{repr(auroc)}\n" for d, auroc in results)
    _atomic_write_text(Path(args.out), text)
    _summary_line(command="sweep", dims=args.dims, out=args.out)
    return 0


def cmd_merge(args) -> int:
    _require_files(args.source_nodes, args.source_edges, args.aux)
    if args.stopwords:
        _require_files(args.stopwords)
    ontology = load_ontology(args.source_nodes, args.source_edges)
    with open(args.aux, encoding="utf-8") as fh:
        aux = parse_aux(fh)
    stopwords = _load_stopwords(args.stopwords)
    merged, records = merge_ontologies(ontology, aux, stopwords, fold_plurals=args.fold_plurals)
    _atomic_write_text(Path(f"{args.out_prefix}.nodes.tsv"), serialize_nodes(merged.synsets))
    _atomic_write_text(Path(f"{args.out_prefix}.merge_report.tsv"), serialize_merge_records(records))
    _summary_line(
        command="merge",
        synsets=len(merged.synsets),
        augmented=len(records),
        aux_concepts=len(aux),
        out_prefix=args.out_prefix,
    )
    return 0


def cmd_bench(args) -> int:
    sizes = [int(v) for v in args.sizes.split(",") if v]
    d_values = [int(v) for v in args.dims.split(",") if v]
    reports = run_bench(sizes, d_values, args.multi_fraction, args.seed, fanin_max=args.fanin_max)
    _atomic_write_text(Path(args.out), format_bench_tsv(reports))
    _summary_line(command="bench", configs=len(reports), out=args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordersketch",
        description="Order embeddings for ontologies via upper sets and countsketch.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_hash_flags(p):
        p.add_argument("--dim", type=int, default=100, help="embedding dimension d")
        p.add_argument("--seed", type=int, default=0, help="base seed (hash seeds derived)")
        p.add_argument("--seed1", type=lambda v: int(v, 0), default=None, help="explicit h1 seed")
        p.add_argument("--seed2", type=lambda v: int(v, 0), default=None, help="explicit h2 seed")
        p.add_argument("--threads", type=int, default=1, help="worker cap; output is thread-count independent")

    p = sub.add_parser("gen", help="generate a seeded synthetic ontology")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--multi-lemma", type=int, default=0)
    p.add_argument("--fanin-max", type=int, default=2)
    p.add_argument("--cycles", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fix-loops", help="condense strongly connected components")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_fix_loops)

    p = sub.add_parser("embed", help="sketch every synset and lemma")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    add_hash_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("query", help="score one pair from an embedding file")
    p.add_argument("--emb", required=True)
    p.add_argument("--x", required=True, help="namespaced key, e.g. l:dog")
    p.add_argument("--y", required=True, help="namespaced key, e.g. s:n42")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--direction-corrected", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="pair generation, scores, ROC and AUROC")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    add_hash_flags(p)
    p.add_argument("--negatives-k", type=int, default=20)
    p.add_argument("--out-scores", required=True)
    p.add_argument("--out-roc", required=True)
    p.add_argument("--out-summary", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="AUROC as a function of embedding dimension")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--dims", required=True, help="comma-separated, e.g. 10,50,100")
    p.add_argument("--negatives-k", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("merge", help="augment synsets from an auxiliary term file")
    p.add_argument("--source-nodes", required=True)
    p.add_argument("--source-edges", required=True)
    p.add_argument("--aux", required=True)
    p.add_argument("--stopwords", default=None)
    p.add_argument("--fold-plurals", action="store_true")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("bench", help="profile the pipeline on synthetic data")
    p.add_argument("--sizes", required=True, help="comma-separated node counts")
    p.add_argument("--dims", required=True, help="comma-separated dimensions")
    p.add_argument("--multi-fraction", type=float, default=0.2)
    p.add_argument("--fanin-max", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        FormatError,
        NotADagError,
        DegenerateDenominatorError,
        FileNotFoundError,
        KeyError,
        ValueError,
    ) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
