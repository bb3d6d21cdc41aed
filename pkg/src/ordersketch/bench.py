"""Wall-clock profiling of the embedding pipeline on synthetic ontologies.

One configuration = (node count, dimension).  The pipeline runs exactly
as the CLI would (read files, fix loops, build upper sets, hash, create
vectors, write the embedding file), single-threaded so component times
are comparable; the per-stage clocks live inside the end-to-end clock,
so their sum is below the total (parsing and output I/O are only in the
total).
"""

from __future__ import annotations

import gc
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .closure import compute_upper_sets
from .dagify import condense
from .ontology import build_lemma_index, load_ontology
from .sketch import build_embedding, derive_hash_spec, hash_nodes, write_embedding
from .synth import SynthConfig, write_synthetic


@dataclass(frozen=True)
class BenchReport:
    nodes: int
    multi_lemma: int
    d: int
    loop_count: int
    hypernym_chains_s: float
    fix_loops_s: float
    hash_functions_s: float
    create_vectors_s: float
    end_to_end_s: float


def run_config(
    nodes: int,
    d: int,
    multi_fraction: float,
    fanin_max: int,
    cycles: int,
    seed: int,
    workdir: Path,
) -> BenchReport:
    multi = int(nodes * multi_fraction)
    config = SynthConfig(
        nodes=nodes,
        multi_lemma=multi,
        fanin_max=fanin_max,
        cycle_injections=cycles,
        seed=seed,
    )
    nodes_path = workdir / f"bench_{nodes}_{d}.nodes.tsv"
    edges_path = workdir / f"bench_{nodes}_{d}.edges.tsv"
    emb_path = workdir / f"bench_{nodes}_{d}.emb.tsv"
    write_synthetic(config, nodes_path, edges_path)

    gc.collect()  # start each timed run from a clean heap
    t_total0 = time.perf_counter()
    ontology = load_ontology(nodes_path, edges_path)

    t0 = time.perf_counter()
    dag, mapping = condense(ontology)
    fix_loops_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    index = compute_upper_sets(dag)
    hypernym_chains_s = time.perf_counter() - t0

    lemmas = build_lemma_index(dag)
    spec = derive_hash_spec(seed, d)

    t0 = time.perf_counter()
    hashed = hash_nodes(index.ids, spec)
    hash_functions_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    emb = build_embedding(index, lemmas, spec, hashed, threads=1)
    create_vectors_s = time.perf_counter() - t0

    write_embedding(emb, emb_path)
    end_to_end_s = time.perf_counter() - t_total0

    return BenchReport(
        nodes=nodes,
        multi_lemma=multi,
        d=d,
        loop_count=mapping.loop_count,
        hypernym_chains_s=hypernym_chains_s,
        fix_loops_s=fix_loops_s,
        hash_functions_s=hash_functions_s,
        create_vectors_s=create_vectors_s,
        end_to_end_s=end_to_end_s,
    )


def run_bench(
    dag_sizes: list[int],
    d_values: list[int],
    multi_lemma_fraction: float,
    rng_seed: int,
    fanin_max: int = 1,
    workdir: str | Path | None = None,
) -> list[BenchReport]:
    """One report per (size, d) pair; cycle injections scale with size."""
    reports = []
    with tempfile.TemporaryDirectory() as tmp:
        base = Path(workdir) if workdir is not None else Path(tmp)
        base.mkdir(parents=True, exist_ok=True)
        for nodes in dag_sizes:
            for d in d_values:
                cycles = nodes // 2000
                reports.append(
                    run_config(nodes, d, multi_lemma_fraction, fanin_max, cycles, rng_seed, base)
                )
    return reports


def format_bench_tsv(reports: list[BenchReport]) -> str:
    """Profiling table rows: ``<n_synsets>\\t<component>\\t<secs>``."""
    lines = []
    for r in reports:
        loops = "No loops seen" if r.loop_count == 0 else f"Fix {r.loop_count} loops"
        lines.append(f"{r.nodes}\tHypernym chains\t{r.hypernym_chains_s:.3f}\n")
        lines.append(f"{r.nodes}\t{loops}\t{r.fix_loops_s:.3f}\n")
        lines.append(f"{r.nodes}\tTwo hash functions\t{r.hash_functions_s:.3f}\n")
        lines.append(f"{r.nodes}\tCreate vectors\t{r.create_vectors_s:.3f}\n")
        lines.append(f"{r.nodes}\tEnd-to-end d={r.d}\t{r.end_to_end_s:.3f}\n")
    return "".join(lines)
