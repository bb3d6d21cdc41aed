"""Seeded synthetic ontology generator for tests and the profiling bench.

Nodes are attached in index order to 1..fanin_max randomly chosen earlier
nodes, which yields a connected-ish DAG with shallow upper sets; a chosen
number of nodes carries 2-4 lemmas (occasionally drawn from a small shared
pool, so some lemmas get several senses); optional back-edges from an
ancestor down to a descendant inject strongly connected components for the
loop-repair path.  Everything is driven by one RNG seed, so regenerating
with equal parameters is byte-identical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ontology import Ontology, Synset


@dataclass(frozen=True)
class SynthConfig:
    nodes: int
    multi_lemma: int = 0
    fanin_max: int = 2
    cycle_injections: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.nodes < 0 or self.multi_lemma < 0 or self.cycle_injections < 0:
            raise ValueError("counts must be >= 0")
        if self.multi_lemma > self.nodes:
            raise ValueError("multi_lemma cannot exceed the node count")
        if self.fanin_max < 1:
            raise ValueError("fanin_max must be >= 1")


def _near_ancestors(node: int, parents: list[list[int]]) -> list[int]:
    """Parents and grandparents: real-world loops are local mistakes."""
    near = set(parents[node])
    for p in parents[node]:
        near.update(parents[p])
    near.discard(node)
    return sorted(near)


def generate(config: SynthConfig) -> Ontology:
    rng = random.Random(config.seed)
    n = config.nodes
    width = max(7, len(str(max(n - 1, 0))))
    ids = [f"n{i:0{width}d}" for i in range(n)]

    parents: list[list[int]] = [[] for _ in range(n)]
    edges: list[tuple[str, str]] = []
    for i in range(1, n):
        # halving weights over 1..fanin_max parents: realistic is-a graphs
        # are forest-like, with multi-parent nodes the exception
        fanin = 1
        while fanin < min(config.fanin_max, i) and rng.random() < 0.25:
            fanin += 1
        for p in sorted(rng.sample(range(i), fanin)):
            parents[i].append(p)
            edges.append((ids[i], ids[p]))

    multi = set(rng.sample(range(n), config.multi_lemma)) if n else set()
    pool_size = max(4, n // 50)
    synsets: dict[str, Synset] = {}
    for i in range(n):
        lemmas = [f"w{i:0{width}d}"]
        if i in multi:
            have = set(lemmas)
            for j in range(rng.randint(1, 3)):
                if rng.random() < 0.25:
                    lemma = f"shared{rng.randrange(pool_size):04d}"
                else:
                    lemma = f"w{i:0{width}d}x{j}"
                if lemma not in have:
                    have.add(lemma)
                    lemmas.append(lemma)
        synsets[ids[i]] = Synset(ids[i], tuple(lemmas))

    # back-edges ancestor -> descendant close directed cycles
    edge_set = set(edges)
    injected = 0
    attempts = 0
    while injected < config.cycle_injections:
        attempts += 1
        if attempts > 1000 * max(1, config.cycle_injections):
            raise ValueError("could not place the requested cycle injections")
        x = rng.randrange(1, n) if n > 1 else 0
        if n <= 1:
            raise ValueError("cycle injection needs at least 2 nodes")
        ancestors = _near_ancestors(x, parents)
        if not ancestors:
            continue
        y = ancestors[rng.randrange(len(ancestors))]
        edge = (ids[y], ids[x])
        if edge in edge_set:
            continue
        edge_set.add(edge)
        edges.append(edge)
        injected += 1

    return Ontology(synsets, tuple(edges))


def write_synthetic(config: SynthConfig, nodes_path, edges_path) -> Ontology:
    from .ontology import write_ontology

    ontology = generate(config)
    write_ontology(ontology, nodes_path, edges_path)
    return ontology
