"""Cycle repair: condense every strongly connected component into one synset.

Ontologies built from real-world is-a data contain occasional loops.  We
detect SCCs with an iterative Tarjan (no recursion, so half-million-node
graphs are fine) and replace each nontrivial component by a single merged
synset whose id is the lexicographically smallest member id and whose
lemma list is the sorted union of the members' lemmas.  Edges are rewritten
through the member -> representative map and deduplicated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .ontology import Ontology, Synset


@dataclass(frozen=True)
class CondensationMap:
    """Provenance of a condensation.

    ``original_to_merged`` is total over the input nodes, ``merged_members``
    partitions them (singletons included), and ``loop_count`` counts the
    nontrivial components (size >= 2).
    """

    original_to_merged: dict[str, str]
    merged_members: dict[str, tuple[str, ...]]
    loop_count: int


def topological_order(ontology: Ontology) -> list[str] | None:
    """Kahn's algorithm over child->parent edges; None if a cycle exists.

    The returned order puts every child before all of its parents.
    """
    indegree = {nid: 0 for nid in ontology.synsets}
    for _child, parent in ontology.edges:
        indegree[parent] += 1
    queue = deque(nid for nid in ontology.node_ids if indegree[nid] == 0)
    parents = ontology.parents
    order: list[str] = []
    while queue:
        nid = queue.popleft()
        order.append(nid)
        for parent in parents[nid]:
            indegree[parent] -= 1
            if indegree[parent] == 0:
                queue.append(parent)
    if len(order) != len(ontology.synsets):
        return None
    return order


def is_acyclic(ontology: Ontology) -> bool:
    """True iff the ontology has no directed cycle."""
    return topological_order(ontology) is not None


def strongly_connected_components(ontology: Ontology) -> list[list[str]]:
    """All SCCs (including singletons) via iterative Tarjan."""
    parents = ontology.parents
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in ontology.node_ids:
        if root in index:
            continue
        # work items: (node, index into its successor tuple)
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, succ_i = work.pop()
            if succ_i == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            succ = parents[node]
            while succ_i < len(succ):
                nxt = succ[succ_i]
                succ_i += 1
                if nxt not in index:
                    work.append((node, succ_i))
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent_node = work[-1][0]
                lowlink[parent_node] = min(lowlink[parent_node], lowlink[node])
    return components


def condense(ontology: Ontology) -> tuple[Ontology, CondensationMap]:
    """Merge every SCC into one synset; acyclic input is the identity.

    Singleton components keep their synset untouched; merged synsets take
    the lexicographically smallest member id and the deduplicated, sorted
    union of member lemmas.  Rewritten self-edges are dropped, remaining
    edges deduplicated.
    """
    components = strongly_connected_components(ontology)
    original_to_merged: dict[str, str] = {}
    merged_members: dict[str, tuple[str, ...]] = {}
    loop_count = 0
    synsets: dict[str, Synset] = {}
    for component in components:
        members = tuple(sorted(component))
        rep = members[0]
        merged_members[rep] = members
        for member in members:
            original_to_merged[member] = rep
        if len(members) == 1:
            synsets[rep] = ontology.synsets[rep]
        else:
            loop_count += 1
            lemmas = sorted({l for m in members for l in ontology.synsets[m].lemmas})
            synsets[rep] = Synset(rep, tuple(lemmas))
    edges = sorted(
        {
            (original_to_merged[c], original_to_merged[p])
            for c, p in ontology.edges
            if original_to_merged[c] != original_to_merged[p]
        }
    )
    dag = Ontology(synsets, tuple(edges))
    return dag, CondensationMap(original_to_merged, merged_members, loop_count)


def condensation_report(mapping: CondensationMap) -> str:
    """TSV report of nontrivial components: ``<merged_id>\\t<m1>|<m2>|...``."""
    lines = []
    for rep in sorted(mapping.merged_members):
        members = mapping.merged_members[rep]
        if len(members) >= 2:
            lines.append(f"{rep}\t{'|'.join(members)}\n")
    return "".join(lines)
