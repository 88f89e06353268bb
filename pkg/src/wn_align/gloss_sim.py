"""
Gloss-based similarity of word pairs with pluggable scorers, unrelated pair sampling and
group comparisons.
"""

import itertools
import logging

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from wn_align.elicitation import Relation
from wn_align.exceptions import (
    InsufficientPairsError,
    MalformedScoreFileError,
    MissingFileError,
    MissingPairError,
    UnknownWordError,
)
from wn_align.matcher import ClassifiedTriplet, StatusKind, documented_relations
from wn_align.metrics import MannWhitneyResult, analysed, mann_whitney_u
from wn_align.utils import tokenize
from wn_align.wn_store import SynsetId, WordNetGraph, canonical_name, synsets_of


logger = logging.getLogger(__name__)

SCORE_COLUMNS = ["synset_a", "synset_b", "score"]
GROUPS = ("matched", "missing", "unrelated")
COMPARISONS = {
    "unrelated_vs_matched": ("unrelated", "matched"),
    "unrelated_vs_missing": ("unrelated", "missing"),
    "matched_vs_missing": ("matched", "missing"),
}
ENUMERATION_LIMIT = 200_000
_STUDY_GROUPS = {StatusKind.MATCHED: "matched", StatusKind.MISSING: "missing"}


@dataclass(frozen=True)
class GlossPair:
    """
    One gloss of each word of a pair.

    Attributes:
        gloss_w: Gloss of the target word's synset.
        gloss_v: Gloss of the relatum's synset.
        synset_w: The target word's synset.
        synset_v: The relatum's synset.
        name_w: 'lemma.n.NN' name of synset_w.
        name_v: 'lemma.n.NN' name of synset_v.
    """

    gloss_w: str
    gloss_v: str
    synset_w: SynsetId
    synset_v: SynsetId
    name_w: str = ""
    name_v: str = ""


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    scorer_id: str

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"Similarity must lie in [0, 1], got {self.value}.")


class Scorer(Protocol):
    """Scores a gloss pair in [0, 1]; implementations are read-only once built."""

    scorer_id: str

    def score(self, pair: GlossPair) -> float: ...


def baseline_scorer(gloss_a: str, gloss_b: str) -> float:
    """
    Token-matching F1 between two glosses with exact-match token similarity.

    Each token can be matched once. Precision is the share of matched tokens of `gloss_b`,
    recall the share of matched tokens of `gloss_a`.

    Args:
        gloss_a: First text.
        gloss_b: Second text.

    Returns:
        The F1 in [0, 1]; 1 for two empty texts and 0 when only one is empty.
    """
    tokens_a, tokens_b = tokenize(gloss_a), tokenize(gloss_b)
    if not tokens_a and not tokens_b:
        return 1.0
    if not tokens_a or not tokens_b:
        return 0.0
    common = sum((Counter(tokens_a) & Counter(tokens_b)).values())
    if common == 0:
        return 0.0
    precision = common / len(tokens_b)
    recall = common / len(tokens_a)
    return 2 * precision * recall / (precision + recall)


class BaselineScorer:
    scorer_id = "baseline"

    def score(self, pair: GlossPair) -> float:
        return baseline_scorer(pair.gloss_w, pair.gloss_v)


class ExternalScorer:
    """
    Looks up precomputed scores by synset names, in either order.

    A synset paired with itself scores 1 without lookup.
    """

    def __init__(self, scores: Mapping[Tuple[str, str], float], source: str = "external") -> None:
        self._scores = dict(scores)
        self.scorer_id = f"external:{source}"

    def __len__(self) -> int:
        return len(self._scores)

    def score(self, pair: GlossPair) -> float:
        if pair.synset_w == pair.synset_v:
            return 1.0
        key = _pair_key(pair.name_w, pair.name_v)
        try:
            return self._scores[key]
        except KeyError:
            raise MissingPairError((pair.name_w, pair.name_v))


def _pair_key(a: str, b: str) -> Tuple[str, str]:
    first, second = sorted((a.strip().lower(), b.strip().lower()))
    return (first, second)


def load_external_scores(file: Union[str, Path]) -> ExternalScorer:
    """
    Load a CSV of precomputed gloss similarities with columns synset_a, synset_b, score.

    Args:
        file: Path to the CSV.

    Returns:
        A scorer answering in either pair order.

    Raises:
        MissingFileError: If the file does not exist.
        MalformedScoreFileError: On missing columns, non-numeric or out-of-range scores, or
            one pair given two different scores.
    """
    path = Path(file)
    if not path.is_file():
        raise MissingFileError(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise MalformedScoreFileError(f"Score file '{path}' is empty.")
    missing = [column for column in SCORE_COLUMNS if column not in frame.columns]
    if missing:
        raise MalformedScoreFileError(
            f"Score file '{path}' lacks column(s) {', '.join(missing)}."
        )
    scores: Dict[Tuple[str, str], float] = {}
    for row_number, row in enumerate(frame.itertuples(index=False), start=2):
        try:
            value = float(row.score)
        except ValueError:
            raise MalformedScoreFileError(f"Row {row_number}: score '{row.score}' is not a number.")
        if not 0.0 <= value <= 1.0:
            raise MalformedScoreFileError(f"Row {row_number}: score {value} is outside [0, 1].")
        key = _pair_key(row.synset_a, row.synset_b)
        if key in scores and scores[key] != value:
            raise MalformedScoreFileError(f"Row {row_number}: conflicting score for {key}.")
        scores[key] = value
    logger.info("Loaded %d external scores from %s.", len(scores), path)
    return ExternalScorer(scores, source=path.name)


def gloss_pairs(graph: WordNetGraph, w: str, v: str) -> List[GlossPair]:
    """
    Every pairing of a gloss of `w` with a gloss of `v`.

    Raises:
        UnknownWordError: If a word has no noun synset.
    """
    sw, sv = synsets_of(graph, w), synsets_of(graph, v)
    for word, synsets in ((w, sw), (v, sv)):
        if not synsets:
            raise UnknownWordError(f"'{word}' is not a noun of the WordNet graph.")
    return [
        GlossPair(
            gloss_w=graph[a].gloss,
            gloss_v=graph[b].gloss,
            synset_w=a,
            synset_v=b,
            name_w=canonical_name(graph, a),
            name_v=canonical_name(graph, b),
        )
        for a in sw
        for b in sv
    ]


def gloss_similarity(graph: WordNetGraph, w: str, v: str, scorer: Scorer) -> SimilarityScore:
    """
    Maximum scorer value over all gloss pairs of two words.

    Args:
        graph: The WordNet graph.
        w: Target word.
        v: Relatum.
        scorer: The gloss pair scorer.

    Returns:
        The similarity.

    Raises:
        UnknownWordError: If a word has no noun synset.
    """
    best = max(scorer.score(pair) for pair in gloss_pairs(graph, w, v))
    return SimilarityScore(value=min(max(float(best), 0.0), 1.0), scorer_id=scorer.scorer_id)


def _related(graph: WordNetGraph, a: str, b: str) -> bool:
    return bool(documented_relations(graph, a, b) or documented_relations(graph, b, a))


def sample_unrelated(
    graph: WordNetGraph, vocabulary: Iterable[str], n: int, seed: int
) -> List[Tuple[str, str]]:
    """
    Draw distinct unordered pairs of different words with no documented relation.

    Every pair is returned in alphabetical order and is rejected when WordNet documents a
    relation in either direction. Small vocabularies are enumerated and sampled without
    replacement; larger ones are sampled by rejection with a bounded number of draws.

    Args:
        graph: The WordNet graph.
        vocabulary: Noun words to pair.
        n: Number of pairs.
        seed: Seed of the generator.

    Returns:
        The pairs, identical for identical inputs and seed.

    Raises:
        UnknownWordError: If a vocabulary word is not a noun.
        InsufficientPairsError: If fewer than `n` unrelated pairs can be found.
    """
    words = sorted(set(vocabulary))
    for word in words:
        if not synsets_of(graph, word):
            raise UnknownWordError(f"'{word}' is not a noun of the WordNet graph.")
    rng = np.random.default_rng(seed)
    m = len(words)
    if m * (m - 1) // 2 <= ENUMERATION_LIMIT:
        candidates = [
            (a, b)
            for a, b in itertools.combinations(words, 2)
            if not _related(graph, a, b)
        ]
        if len(candidates) < n:
            raise InsufficientPairsError(
                f"Only {len(candidates)} unrelated pairs available, {n} requested."
            )
        chosen = rng.choice(len(candidates), size=n, replace=False)
        return [candidates[int(i)] for i in chosen]

    pairs: List[Tuple[str, str]] = []
    seen: Set[Tuple[str, str]] = set()
    max_draws = max(100 * n, 10_000)
    for _ in range(max_draws):
        if len(pairs) == n:
            break
        i, j = sorted(int(k) for k in rng.integers(m, size=2))
        if i == j or (words[i], words[j]) in seen:
            continue
        pair = (words[i], words[j])
        seen.add(pair)
        if not _related(graph, *pair):
            pairs.append(pair)
    if len(pairs) < n:
        raise InsufficientPairsError(
            f"Found {len(pairs)} unrelated pairs in {max_draws} draws, {n} requested."
        )
    return pairs


@dataclass(frozen=True)
class GroupComparison:
    """Group means and sizes with the three pairwise Mann-Whitney tests."""

    means: Dict[str, Optional[float]]
    sizes: Dict[str, int]
    tests: Dict[str, Optional[MannWhitneyResult]]


def group_comparison(
    matched: Sequence[float],
    missing: Sequence[float],
    unrelated: Sequence[float],
    alpha: float = 0.05,
) -> GroupComparison:
    """
    Compare the similarity of matched, missing and unrelated pairs.

    A test involving an empty group is reported as None, as is the mean of an empty group.
    """
    groups = {"matched": list(matched), "missing": list(missing), "unrelated": list(unrelated)}
    tests = {
        name: mann_whitney_u(groups[a], groups[b], alpha) if groups[a] and groups[b] else None
        for name, (a, b) in COMPARISONS.items()
    }
    return GroupComparison(
        means={g: float(np.mean(values)) if values else None for g, values in groups.items()},
        sizes={g: len(values) for g, values in groups.items()},
        tests=tests,
    )


@dataclass(frozen=True)
class GlossReport:
    scorer_id: str
    comparisons: Dict[Relation, GroupComparison]
    unrelated_pairs: List[Tuple[str, str]]

    def groups_frame(self) -> pd.DataFrame:
        rows = []
        for relation, comparison in self.comparisons.items():
            for group in GROUPS:
                rows.append(
                    {
                        "relation": relation.value,
                        "group": group,
                        "mean": comparison.means[group],
                        "n": comparison.sizes[group],
                    }
                )
        return pd.DataFrame(rows, columns=["relation", "group", "mean", "n"])

    def tests_frame(self) -> pd.DataFrame:
        rows = []
        for relation, comparison in self.comparisons.items():
            for name, result in comparison.tests.items():
                rows.append(
                    {
                        "relation": relation.value,
                        "comparison": name,
                        "u": result.u if result else None,
                        "p_value": result.p_value if result else None,
                        "reject": result.reject if result else None,
                    }
                )
        return pd.DataFrame(rows, columns=["relation", "comparison", "u", "p_value", "reject"])


def run_gloss_study(
    graph: WordNetGraph,
    classified: Sequence[ClassifiedTriplet],
    scorer: Scorer,
    n_unrelated: int,
    seed: int,
    alpha: float = 0.05,
    allowlist: Optional[Set[str]] = None,
) -> GlossReport:
    """
    Score non-hapax matched and missing triplets of every relation against unrelated pairs.

    Unrelated pairs are sampled once from the noun words of the analysed triplets, restricted
    to the allowlist when given, and shared by all relations.

    Args:
        graph: The WordNet graph.
        classified: Classified triplets.
        scorer: The gloss pair scorer.
        n_unrelated: Number of unrelated pairs.
        seed: Sampling seed.
        alpha: Significance level.
        allowlist: Optional restriction of the sampling vocabulary.

    Returns:
        Per-relation group comparisons.
    """
    kept = [c for c in analysed(classified) if not c.triplet.is_hapax]
    cache: Dict[Tuple[str, str], float] = {}

    def similarity(w: str, v: str) -> Optional[float]:
        if (w, v) not in cache:
            try:
                cache[(w, v)] = gloss_similarity(graph, w, v, scorer).value
            except UnknownWordError:
                logger.warning("Skipping pair (%s, %s) without noun synsets.", w, v)
                return None
        return cache[(w, v)]

    vocabulary = {
        word
        for c in analysed(classified)
        for word in (c.triplet.target, c.triplet.relatum)
        if synsets_of(graph, word) and (allowlist is None or word in allowlist)
    }
    unrelated_pairs = sample_unrelated(graph, vocabulary, n_unrelated, seed)
    unrelated_scores = (similarity(w, v) for w, v in unrelated_pairs)
    unrelated = [value for value in unrelated_scores if value is not None]

    comparisons = {}
    for relation in Relation:
        groups: Dict[str, List[float]] = {"matched": [], "missing": []}
        for c in kept:
            if c.triplet.relation != relation:
                continue
            group = _STUDY_GROUPS.get(c.status.kind)
            if group is None:
                continue
            value = similarity(c.triplet.target, c.triplet.relatum)
            if value is not None:
                groups[group].append(value)
        comparisons[relation] = group_comparison(
            groups["matched"], groups["missing"], unrelated, alpha
        )
    logger.info("Scored %d distinct pairs with %s.", len(cache), scorer.scorer_id)
    return GlossReport(
        scorer_id=scorer.scorer_id, comparisons=comparisons, unrelated_pairs=unrelated_pairs
    )
