"""Pair generation, deviation statistics, ROC/AUROC and dimension sweeps.

Positives are every (lemma x, synset y) pair where some sense of x lies
strictly below y; negatives draw, per synset y, k lemmas uniformly
without replacement from the lemmas with no sense below y (reflexively:
a lemma naming y itself is not a negative).  Labels are exact, taken from
the closure index rather than the sketches.

The ROC sweeps the decision threshold over all distinct scores (plus
+/-inf sentinels); tied scores move true and false positives together,
so ties contribute diagonal segments and the trapezoidal area equals the
Mann-Whitney statistic with ties counted one half.
"""

from __future__ import annotations

import csv
import io
import logging
import random
from dataclasses import dataclass

import numpy as np

from .closure import UpperSetIndex
from .ontology import LemmaIndex
from .sketch import (
    LEMMA_PREFIX,
    SYNSET_PREFIX,
    SketchEmbedding,
    derive_hash_spec,
    embed_all,
)

logger = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(slots=True)
class EvalRecord:
    x_key: str
    y_key: str
    label: str
    r: float = float("nan")


@dataclass(frozen=True)
class EvalSummary:
    n_pos: int
    n_neg: int
    mean_abs_dev_pos: float
    mean_abs_dev_neg: float
    thresholds: tuple[float, ...]
    roc_points: tuple[tuple[float, float], ...]
    auroc: float
    degenerate_excluded: int = 0


def generate_pairs(
    index: UpperSetIndex,
    lemmas: LemmaIndex,
    negatives_per_synset: int,
    rng_seed: int,
) -> list[EvalRecord]:
    """Labelled (lemma, synset) pair stubs; scores are filled by evaluate().

    Deterministic for a given seed.  When a synset has fewer eligible
    negative lemmas than requested, all of them are taken (logged once).
    """
    if negatives_per_synset < 1:
        raise ValueError("negatives_per_synset must be >= 1")
    if not lemmas:
        raise ValueError("lemma index is empty")
    ids = index.ids
    sorted_lemmas = sorted(lemmas)

    records: list[EvalRecord] = []
    # strict ancestors per lemma: union over senses of up[s] minus s itself
    below: list[set[int]] = []
    for name in sorted_lemmas:
        strict: set[int] = set()
        for sense in lemmas[name]:
            pos = index.position(sense)
            for anc in index.member_positions(sense).tolist():
                if anc != pos:
                    strict.add(anc)
        below.append(strict)
        for anc in sorted(strict):
            records.append(EvalRecord(LEMMA_PREFIX + name, SYNSET_PREFIX + ids[anc], POSITIVE))

    # reflexive descent for the negative-eligibility check
    reach: list[set[int]] = [set(s) for s in below]
    for li, name in enumerate(sorted_lemmas):
        for sense in lemmas[name]:
            reach[li].add(index.position(sense))

    rng = random.Random(rng_seed)
    n_lemmas = len(sorted_lemmas)
    short = 0
    for y_pos, y_id in enumerate(ids):
        taken = 0
        # lazy Fisher-Yates: walk a uniform permutation of the lemma list
        # and keep the first k eligible entries
        overlay: dict[int, int] = {}
        for t in range(n_lemmas):
            if taken == negatives_per_synset:
                break
            j = rng.randrange(t, n_lemmas)
            pick = overlay.get(j, j)
            overlay[j] = overlay.get(t, t)
            if y_pos in reach[pick]:
                continue
            records.append(
                EvalRecord(LEMMA_PREFIX + sorted_lemmas[pick], SYNSET_PREFIX + y_id, NEGATIVE)
            )
            taken += 1
        if taken < negatives_per_synset:
            short += 1
    if short:
        logger.warning(
            "%d synsets had fewer than %d eligible negative lemmas; took all available",
            short,
            negatives_per_synset,
        )
    return records


def roc_curve(
    scores: np.ndarray, labels: np.ndarray
) -> tuple[tuple[float, ...], tuple[tuple[float, float], ...]]:
    """Threshold sweep over distinct scores with +/-inf sentinels.

    Returns (thresholds, (fpr, tpr) points), monotone from (0,0) to (1,1).
    """
    n_pos = int(labels.sum())
    n_neg = int(len(labels) - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs at least one positive and one negative")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    cum_tp = np.cumsum(sorted_labels)
    cum_fp = np.cumsum(~sorted_labels)
    # last index of each run of equal scores = state after sweeping past it
    boundary = np.nonzero(np.diff(sorted_scores) != 0)[0]
    idx = np.concatenate([boundary, [len(sorted_scores) - 1]])
    thresholds = (float("inf"), *sorted_scores[idx].tolist(), float("-inf"))
    tpr = np.concatenate([[0.0], cum_tp[idx] / n_pos, [1.0]])
    fpr = np.concatenate([[0.0], cum_fp[idx] / n_neg, [1.0]])
    points = tuple(zip(fpr.tolist(), tpr.tolist()))
    return thresholds, points


def trapezoid_area(points: tuple[tuple[float, float], ...]) -> float:
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def evaluate(records: list[EvalRecord], emb: SketchEmbedding) -> EvalSummary:
    """Fill each record's r and summarize deviations, ROC and AUROC.

    Pairs with a degenerate denominator (zero-norm OS(y)) keep r = NaN and
    are excluded from the statistics; their count is reported.
    """
    if not records:
        raise ValueError("no records to evaluate")
    x_rows = np.fromiter((emb.row(r.x_key) for r in records), dtype=np.int64, count=len(records))
    y_rows = np.fromiter((emb.row(r.y_key) for r in records), dtype=np.int64, count=len(records))
    labels = np.fromiter((r.label == POSITIVE for r in records), dtype=bool, count=len(records))

    matrix = emb.matrix
    dots = np.empty(len(records), dtype=np.int64)
    norms_sq = np.einsum("ij,ij->i", matrix.astype(np.int64), matrix.astype(np.int64))
    chunk = 100_000
    for lo in range(0, len(records), chunk):
        hi = min(lo + chunk, len(records))
        x64 = matrix[x_rows[lo:hi]].astype(np.int64)
        y64 = matrix[y_rows[lo:hi]].astype(np.int64)
        dots[lo:hi] = np.einsum("ij,ij->i", x64, y64)

    denom = norms_sq[y_rows]
    ok = denom != 0
    r = np.full(len(records), np.nan)
    r[ok] = dots[ok] / denom[ok]
    for rec, value in zip(records, r.tolist()):
        rec.r = value

    degenerate = int((~ok).sum())
    pos = labels & ok
    neg = ~labels & ok
    if not pos.any() or not neg.any():
        raise ValueError("need scored records of both labels")
    mean_abs_dev_pos = float(np.mean(np.abs(r[pos] - 1.0)))
    mean_abs_dev_neg = float(np.mean(np.abs(r[neg])))
    thresholds, points = roc_curve(r[ok], labels[ok])
    return EvalSummary(
        n_pos=int(pos.sum()),
        n_neg=int(neg.sum()),
        mean_abs_dev_pos=mean_abs_dev_pos,
        mean_abs_dev_neg=mean_abs_dev_neg,
        thresholds=thresholds,
        roc_points=points,
        auroc=trapezoid_area(points),
        degenerate_excluded=degenerate,
    )


def sweep_dimension(
    index: UpperSetIndex,
    lemmas: LemmaIndex,
    d_values: list[int],
    negatives_per_synset: int,
    rng_seed: int,
    threads: int = 1,
) -> list[tuple[int, float]]:
    """AUROC per embedding dimension, seeds derived from (rng_seed, d).

    The pair set depends only on rng_seed, so every d scores the same
    pairs under a fresh hash spec.
    """
    if not d_values:
        raise ValueError("d_values is empty")
    records = generate_pairs(index, lemmas, negatives_per_synset, rng_seed)
    out: list[tuple[int, float]] = []
    for d in d_values:
        emb = embed_all(index, lemmas, derive_hash_spec(rng_seed, d), threads=threads)
        summary = evaluate(records, emb)
        out.append((d, summary.auroc))
    return out


def serialize_scores(records: list[EvalRecord]) -> str:
    """scores.csv text with header x,y,label,r (quotes only when needed)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "label", "r"])
    for rec in records:
        writer.writerow([rec.x_key, rec.y_key, rec.label, repr(rec.r)])
    return buf.getvalue()


def serialize_roc(summary: EvalSummary) -> str:
    lines = ["threshold,fpr,tpr\n"]
    for threshold, (fpr, tpr) in zip(summary.thresholds, summary.roc_points):
        lines.append(f"{repr(threshold)},{repr(fpr)},{repr(tpr)}\n")
    return "".join(lines)


def serialize_summary(summary: EvalSummary, extra: dict | None = None) -> str:
    rows = dict(extra or {})
    rows.update(
        n_pos=summary.n_pos,
        n_neg=summary.n_neg,
        mean_abs_dev_pos=repr(summary.mean_abs_dev_pos),
        mean_abs_dev_neg=repr(summary.mean_abs_dev_neg),
        auroc=repr(summary.auroc),
        degenerate_excluded=summary.degenerate_excluded,
    )
    return "".join(f"{k}\t{v}\n" for k, v in rows.items())
