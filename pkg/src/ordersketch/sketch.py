"""Seeded hashing, countsketch embeddings of upper sets, and order scores.

The embedding of a key (synset or lemma name) is the countsketch of the
characteristic vector of its upper set: coordinate i of OS(x) is the sum
of the sign flips h2(y) over the members y of the set with h1(y) = i.
Dot products of sketches are unbiased estimators of set-intersection
sizes, and are exact whenever h1 is injective on the union of the two
member sets.  The order score

    r     = OS(x) . OS(y) / (OS(y) . OS(y))
    r_hat = OS(x) . OS(y) / N_y            (N_y = |up[y]|, stored exactly)

is close to 1 when x lies below y and close to 0 for unrelated pairs;
``direction_ok`` (N_y < N_x) additionally rules out reversed reports,
independent of sketch noise.

Hashing is FNV-1a 64 over the UTF-8 key bytes, XORed with a seed and
finished with the SplitMix64 avalanche, so embeddings are bit-identical
across runs, platforms and thread counts.  Hash inputs are always synset
id strings: a lemma is sketched from the union of its senses' upper sets
and has no hash identity of its own.  Vectors hold signed integers and
dot products are computed in exact integer arithmetic.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .closure import UpperSetIndex
from .ontology import LemmaIndex

MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

SYNSET_PREFIX = "s:"
LEMMA_PREFIX = "l:"

_HEADER_MAGIC = "#ordersketch"


class DegenerateDenominatorError(ZeroDivisionError):
    """The signs of OS(y) cancelled completely, so OS(y).OS(y) = 0."""


def synset_key(node_id: str) -> str:
    return SYNSET_PREFIX + node_id


def lemma_key(name: str) -> str:
    return LEMMA_PREFIX + name


def fnv1a64(text: str) -> int:
    """Standard 64-bit FNV-1a over the UTF-8 bytes of ``text``."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


def mix64(value: int) -> int:
    """SplitMix64 finalizer: three xor-shift-multiply rounds, no increment."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class HashSpec:
    """Embedding dimension plus the two 64-bit hash seeds."""

    seed1: int
    seed2: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"embedding dimension must be >= 1, got {self.d}")
        for name in ("seed1", "seed2"):
            seed = getattr(self, name)
            if not 0 <= seed <= MASK64:
                raise ValueError(f"{name} must be an unsigned 64-bit value")


def derive_hash_spec(base_seed: int, d: int) -> HashSpec:
    """Deterministic (base_seed, d)-keyed seeds, for sweeps and the CLI."""
    base = mix64(base_seed)
    return HashSpec(mix64(base ^ mix64(2 * d)), mix64(base ^ mix64(2 * d + 1)), d)


def h1(key: str, spec: HashSpec) -> int:
    """Bucket hash U -> [0, d)."""
    return mix64(fnv1a64(key) ^ spec.seed1) % spec.d


def h2(key: str, spec: HashSpec) -> int:
    """Sign hash U -> {-1, +1}: +1 when the low bit of the mix is 0."""
    return -1 if mix64(fnv1a64(key) ^ spec.seed2) & 1 else 1


def h1_is_injective(keys: Iterable[str], spec: HashSpec) -> bool:
    """True when no two distinct keys share a bucket (collision-free)."""
    keys = set(keys)
    return len({h1(k, spec) for k in keys}) == len(keys)


def sketch_set(members: Iterable[str], spec: HashSpec) -> np.ndarray:
    """Countsketch of a set: coordinate i sums h2(y) over members with h1(y)=i."""
    vec = np.zeros(spec.d, dtype=np.int64)
    n = 0
    for key in members:
        vec[h1(key, spec)] += h2(key, spec)
        n += 1
    if n == 0:
        warnings.warn("sketching an empty set yields the zero vector", stacklevel=2)
    return vec


def hash_nodes(ids: Sequence[str], spec: HashSpec) -> tuple[np.ndarray, np.ndarray]:
    """h1/h2 of every node id, as aligned (bucket, sign) arrays.

    Split out from :func:`embed_all` so the bench can time the hashing
    stage separately from vector creation.
    """
    buckets = np.empty(len(ids), dtype=np.int64)
    signs = np.empty(len(ids), dtype=np.int64)
    for i, nid in enumerate(ids):
        h = fnv1a64(nid)
        buckets[i] = mix64(h ^ spec.seed1) % spec.d
        signs[i] = -1 if mix64(h ^ spec.seed2) & 1 else 1
    return buckets, signs


class SketchEmbedding:
    """OS vectors plus exact upper-set cardinalities, keyed ``s:<id>`` / ``l:<name>``."""

    def __init__(self, spec: HashSpec, keys: list[str], matrix: np.ndarray, counts: np.ndarray):
        if matrix.shape != (len(keys), spec.d):
            raise ValueError("matrix shape does not match keys and dimension")
        self.spec = spec
        self.keys = keys
        self.matrix = matrix
        self._counts = counts
        self._row = {key: i for i, key in enumerate(keys)}

    def __contains__(self, key: str) -> bool:
        return key in self._row

    def __len__(self) -> int:
        return len(self.keys)

    def row(self, key: str) -> int:
        return self._row[key]

    def vector(self, key: str) -> np.ndarray:
        return self.matrix[self._row[key]]

    def count(self, key: str) -> int:
        """Exact N for the key: |up[s]| for synsets, |union over senses| for lemmas."""
        return int(self._counts[self._row[key]])


_BLOCK_ROWS = 16384


def build_embedding(
    index: UpperSetIndex,
    lemmas: LemmaIndex,
    spec: HashSpec,
    hashed: tuple[np.ndarray, np.ndarray],
    threads: int = 1,
) -> SketchEmbedding:
    """Vector-creation stage: sketch every synset and lemma member set.

    Lemma sets are the union of the sense sets (union first, then sketch:
    shared ancestors contribute once).  Rows are accumulated in blocks
    with one grouped bincount per block (row-offset trick), which keeps
    the stage a handful of numpy calls per 16k keys.  Keys come out
    sorted, and every row depends only on immutable inputs, so the result
    is identical for any thread count.
    """
    buckets, signs = hashed
    ids = index.ids
    sorted_lemmas = sorted(lemmas)
    # "l:" < "s:", so the concatenation of the two sorted blocks is sorted
    keys = [LEMMA_PREFIX + name for name in sorted_lemmas] + [SYNSET_PREFIX + nid for nid in ids]
    n_lemmas = len(sorted_lemmas)
    matrix = np.zeros((len(keys), spec.d), dtype=np.int32)
    counts = np.zeros(len(keys), dtype=np.int64)
    d = spec.d
    signs_f = signs.astype(np.float64)

    def member_positions(k: int) -> np.ndarray:
        if k >= n_lemmas:
            return index.member_positions(ids[k - n_lemmas])
        senses = lemmas[sorted_lemmas[k]]
        if len(senses) == 1:
            return index.member_positions(senses[0])
        return np.unique(np.concatenate([index.member_positions(s) for s in senses]))

    def fill(lo: int, hi: int) -> None:
        for block_lo in range(lo, hi, _BLOCK_ROWS):
            block_hi = min(block_lo + _BLOCK_ROWS, hi)
            member_lists = [member_positions(k) for k in range(block_lo, block_hi)]
            lengths = np.fromiter((len(m) for m in member_lists), dtype=np.int64, count=len(member_lists))
            counts[block_lo:block_hi] = lengths
            flat_members = np.concatenate(member_lists) if member_lists else np.empty(0, np.int64)
            # every member lands at (its row within the block) * d + bucket
            flat_idx = buckets[flat_members] + d * np.repeat(
                np.arange(block_hi - block_lo, dtype=np.int64), lengths
            )
            block = np.bincount(
                flat_idx, weights=signs_f[flat_members], minlength=(block_hi - block_lo) * d
            )
            # float64 sums of +-1 are exact; cast back to integer storage
            matrix[block_lo:block_hi] = block.reshape(-1, d)

    if threads <= 1:
        fill(0, len(keys))
    else:
        step = max(1, -(-len(keys) // threads))
        ranges = [(lo, min(lo + step, len(keys))) for lo in range(0, len(keys), step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for future in [pool.submit(fill, lo, hi) for lo, hi in ranges]:
                future.result()
    return SketchEmbedding(spec, keys, matrix, counts)


def embed_all(
    dag_index: UpperSetIndex,
    lemmas: LemmaIndex,
    spec: HashSpec,
    threads: int = 1,
) -> SketchEmbedding:
    """One OS vector per synset and per lemma name, plus exact counts."""
    hashed = hash_nodes(dag_index.ids, spec)
    return build_embedding(dag_index, lemmas, spec, hashed, threads=threads)


@dataclass(frozen=True)
class OrderScore:
    r: float
    r_hat: float
    direction_ok: bool


def _pair(emb: SketchEmbedding, x_key: str, y_key: str) -> tuple[int, int, int, int]:
    vx = emb.vector(x_key).astype(np.int64)
    vy = emb.vector(y_key).astype(np.int64)
    return int(vx @ vy), int(vy @ vy), emb.count(x_key), emb.count(y_key)


def score(x_key: str, y_key: str, emb: SketchEmbedding) -> OrderScore:
    """R, R-hat and the exact direction check for an embedded pair."""
    dot, norm_sq, n_x, n_y = _pair(emb, x_key, y_key)
    if norm_sq == 0:
        raise DegenerateDenominatorError(
            f"degenerate denominator: OS({y_key!r}) sketched to the zero vector"
        )
    return OrderScore(r=dot / norm_sq, r_hat=dot / n_y, direction_ok=n_y < n_x)


def classify(
    x_key: str,
    y_key: str,
    emb: SketchEmbedding,
    threshold: float,
    direction_corrected: bool = False,
) -> bool:
    """Decision rule for "x below y".

    Plain mode: r >= threshold (raises on a degenerate denominator).
    Direction-corrected mode: r_hat >= threshold and N_y < N_x; never
    divides by a sketch norm, so it cannot degenerate.
    """
    dot, norm_sq, n_x, n_y = _pair(emb, x_key, y_key)
    if direction_corrected:
        return n_y < n_x and dot / n_y >= threshold
    if norm_sq == 0:
        raise DegenerateDenominatorError(
            f"degenerate denominator: OS({y_key!r}) sketched to the zero vector"
        )
    return dot / norm_sq >= threshold


def write_embedding(emb: SketchEmbedding, destination) -> None:
    """Serialize to the embedding TSV (re-reading round-trips bit-exactly).

    ``destination`` is a path or a writable text file object.
    """
    if hasattr(destination, "write"):
        _write_embedding_to(emb, destination)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            _write_embedding_to(emb, fh)


def _write_embedding_to(emb: SketchEmbedding, fh) -> None:
    spec = emb.spec
    fh.write(f"{_HEADER_MAGIC}\td={spec.d}\tseed1={spec.seed1:016x}\tseed2={spec.seed2:016x}\n")
    for i, key in enumerate(emb.keys):
        coords = ",".join(map(str, emb.matrix[i].tolist()))
        fh.write(f"{key}\t{emb._counts[i]}\t{coords}\n")


def read_embedding(path: str | Path) -> SketchEmbedding:
    """Parse an embedding TSV written by :func:`write_embedding`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        fields = header.split("\t")
        if not fields or fields[0] != _HEADER_MAGIC:
            raise ValueError(f"not an embedding file (missing {_HEADER_MAGIC!r} header)")
        meta = dict(field.split("=", 1) for field in fields[1:])
        spec = HashSpec(int(meta["seed1"], 16), int(meta["seed2"], 16), int(meta["d"]))
        keys: list[str] = []
        rows: list[list[int]] = []
        counts: list[int] = []
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line:
                continue
            key, n_text, coord_text = line.split("\t")
            coords = [int(c) for c in coord_text.split(",")]
            if len(coords) != spec.d:
                raise ValueError(f"expected {spec.d} coordinates at line {lineno}, found {len(coords)}")
            keys.append(key)
            counts.append(int(n_text))
            rows.append(coords)
    matrix = np.array(rows, dtype=np.int32) if rows else np.zeros((0, spec.d), dtype=np.int32)
    return SketchEmbedding(spec, keys, matrix, np.array(counts, dtype=np.int64))
