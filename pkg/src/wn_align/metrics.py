"""
Quantitative measures over classified triplets: elicitation frequency, match-rate curves,
mismatch likelihoods, template association, distance correlation and group tests.
"""

import itertools
import logging
import math

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
import pandas as pd

from scipy.stats import chi2_contingency, entropy, mannwhitneyu, rankdata, spearmanr

from wn_align.elicitation import ElicitationRecord, Relation
from wn_align.exceptions import (
    ConfigError,
    DegenerateInputError,
    DegenerateTableError,
    UnknownAnchorError,
    UnknownNameError,
)
from wn_align.matcher import ClassifiedTriplet, StatusKind, Triplet
from wn_align.wn_store import WordNetGraph, SynsetId, is_descendant, synset_by_name, synsets_of


logger = logging.getLogger(__name__)

ABSTRACT_ANCHOR = "abstraction.n.06"
PHYSICAL_ANCHOR = "physical_entity.n.01"
EXACT_TEST_LIMIT = 20
REPORTED_STATUSES = (StatusKind.MATCHED, StatusKind.MISSING, StatusKind.MISMATCHED)

TripletKey = Tuple[str, Relation, str]


class FrequencyTable:
    """
    Elicitation frequency of every triplet: its count over the total count of its
    (target, relation) group.
    """

    def __init__(self, entries: Mapping[TripletKey, float]) -> None:
        self._entries = dict(entries)

    def __getitem__(self, key: TripletKey) -> float:
        return self._entries[key]

    def __contains__(self, key: object) -> bool:
        return key in self._entries

    def __iter__(self) -> Iterator[TripletKey]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def of(self, t: Triplet) -> float:
        return self._entries[t.key]

    def groups(self) -> Dict[Tuple[str, Relation], Dict[str, float]]:
        """Frequencies by (target, relation), keyed by relatum."""
        grouped: Dict[Tuple[str, Relation], Dict[str, float]] = defaultdict(dict)
        for (target, relation, relatum), value in self._entries.items():
            grouped[(target, relation)][relatum] = value
        return dict(grouped)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"target": t, "relation": r.value, "relatum": v, "frequency": value}
                for (t, r, v), value in self._entries.items()
            ],
            columns=["target", "relation", "relatum", "frequency"],
        )


def elicitation_frequency(triplets: Iterable[Triplet]) -> FrequencyTable:
    """
    Compute the elicitation frequency of every triplet.

    Args:
        triplets: Aggregated triplets with positive counts.

    Returns:
        The frequency table; every (target, relation) group sums to one.
    """
    triplets = list(triplets)
    totals: Counter = Counter()
    for t in triplets:
        totals[(t.target, t.relation)] += t.count
    return FrequencyTable({t.key: t.count / totals[(t.target, t.relation)] for t in triplets})


def analysed(classified: Iterable[ClassifiedTriplet]) -> List[ClassifiedTriplet]:
    """Keep the triplets that were not excluded."""
    return [c for c in classified if not c.status.is_excluded]


def frequency_of(classified: Iterable[ClassifiedTriplet]) -> FrequencyTable:
    """Elicitation frequencies computed over the non-excluded triplets."""
    return elicitation_frequency(c.triplet for c in analysed(classified))


class CurvePoint(NamedTuple):
    threshold: float
    match_rate: float
    n_retained: int


def threshold_grid(step: float = 0.01) -> List[float]:
    """Evenly spaced thresholds from 0 to 1 included."""
    if not 0 < step <= 1:
        raise ConfigError(f"Threshold step must lie in (0, 1], got {step}.")
    count = int(math.floor(1 / step + 1e-9))
    grid = [round(i * step, 10) for i in range(count + 1)]
    if grid[-1] < 1.0:
        grid.append(1.0)
    return grid


def match_rate_curve(
    classified: Sequence[ClassifiedTriplet],
    freq: FrequencyTable,
    relation: Relation,
    thresholds: Sequence[float],
) -> List[CurvePoint]:
    """
    Share of matched triplets among those elicited more often than each threshold.

    Args:
        classified: Classified triplets; excluded ones are ignored.
        freq: Elicitation frequencies.
        relation: The elicited relation to trace.
        thresholds: Strictly increasing values in [0, 1].

    Returns:
        One point per threshold retaining at least one triplet.

    Raises:
        ConfigError: If the thresholds are not strictly increasing values in [0, 1].
    """
    if any(not 0 <= x <= 1 for x in thresholds) or any(
        b <= a for a, b in zip(thresholds, thresholds[1:])
    ):
        raise ConfigError("Thresholds must be strictly increasing values in [0, 1].")
    pool = [
        (freq.of(c.triplet), c.status.kind == StatusKind.MATCHED)
        for c in analysed(classified)
        if c.triplet.relation == relation
    ]
    points = []
    for threshold in thresholds:
        retained = [matched for value, matched in pool if value > threshold]
        if retained:
            points.append(CurvePoint(threshold, sum(retained) / len(retained), len(retained)))
    return points


@dataclass(frozen=True)
class MismatchMatrix:
    """
    Mismatch likelihood of each documented relation s given each elicited relation r.

    Attributes:
        cells: Likelihood per (documented, elicited) pair; the diagonal is absent.
        mass: Summed elicitation frequency per (documented, elicited) pair before
            normalization.
    """

    cells: Mapping[Tuple[Relation, Relation], float]
    mass: Mapping[Tuple[Relation, Relation], float]

    def likelihood(self, documented: Relation, elicited: Relation) -> float:
        """
        Raises:
            KeyError: On the undefined diagonal.
        """
        return self.cells[(documented, elicited)]

    def column(self, elicited: Relation) -> Dict[Relation, float]:
        return {s: self.cells[(s, elicited)] for s in Relation if s != elicited}

    def is_populated(self, elicited: Relation) -> bool:
        return any(value > 0 for value in self.column(elicited).values())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "documented": s.value,
                    "elicited": r.value,
                    "likelihood": self.cells[(s, r)],
                    "mass": self.mass[(s, r)],
                }
                for r in Relation
                for s in Relation
                if s != r
            ],
            columns=["documented", "elicited", "likelihood", "mass"],
        )


def mismatch_matrix(
    classified: Iterable[ClassifiedTriplet], freq: FrequencyTable
) -> MismatchMatrix:
    """
    Normalized frequency mass of mismatched triplets per (documented, elicited) pair.

    For each elicited relation r the masses over the five other relations are normalized
    to sum to one; a column without mismatches stays all zero.

    Args:
        classified: Classified triplets.
        freq: Elicitation frequencies.

    Returns:
        The mismatch likelihood matrix.
    """
    mass: Dict[Tuple[Relation, Relation], float] = {
        (s, r): 0.0 for r in Relation for s in Relation if s != r
    }
    for c in classified:
        if c.status.kind == StatusKind.MISMATCHED and c.status.documented is not None:
            mass[(c.status.documented, c.triplet.relation)] += freq.of(c.triplet)
    cells = {}
    for r in Relation:
        total = math.fsum(mass[(t, r)] for t in Relation if t != r)
        for s in Relation:
            if s != r:
                cells[(s, r)] = mass[(s, r)] / total if total > 0 else 0.0
    return MismatchMatrix(cells=cells, mass=mass)


def _as_distributions(distributions: Sequence[Sequence[float]]) -> np.ndarray:
    array = np.asarray(distributions, dtype=float)
    if array.ndim != 2 or array.shape[0] < 2:
        raise DegenerateInputError("At least two distributions over a shared support needed.")
    if np.any(array < 0) or not np.allclose(array.sum(axis=1), 1.0, atol=1e-6):
        raise DegenerateInputError("Every distribution must be non-negative and sum to one.")
    return array


def gjsd(distributions: Sequence[Sequence[float]]) -> float:
    """
    Generalized Jensen-Shannon divergence of k distributions with uniform weights.

    Base-2 entropies, divided by log2(k) so that the value lies in [0, 1].

    Args:
        distributions: At least two distributions over the same support.

    Returns:
        0 for identical distributions, 1 for k point masses on distinct outcomes.

    Raises:
        DegenerateInputError: For fewer than two distributions or invalid ones.
    """
    array = _as_distributions(distributions)
    k = array.shape[0]
    mixture_entropy = entropy(array.mean(axis=0), base=2)
    mean_entropy = float(np.mean([entropy(row, base=2) for row in array]))
    value = (mixture_entropy - mean_entropy) / math.log2(k)
    return float(min(max(value, 0.0), 1.0))


def cramers_v(table: Sequence[Sequence[float]]) -> float:
    """
    Cramér's V of a contingency table, from Pearson's chi-squared without continuity
    correction and min(rows - 1, columns - 1) degrees in the denominator.

    Empty rows and columns are dropped first.

    Args:
        table: Counts, rows = templates, columns = relata.

    Returns:
        The association in [0, 1].

    Raises:
        DegenerateTableError: If fewer than two rows or columns hold counts.
    """
    counts = np.asarray(table, dtype=float)
    if counts.ndim != 2:
        raise DegenerateTableError("A contingency table must be two-dimensional.")
    counts = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
    if counts.shape[0] < 2 or counts.shape[1] < 2:
        raise DegenerateTableError(
            f"A {counts.shape[0]}x{counts.shape[1]} table has no association to measure."
        )
    chi2 = chi2_contingency(counts, correction=False)[0]
    n = counts.sum()
    value = math.sqrt(chi2 / (n * (min(counts.shape) - 1)))
    return float(min(value, 1.0))


@dataclass(frozen=True)
class AssociationScores:
    """Mean template association of a relation over its scorable target words."""

    relation: Relation
    gjsd_mean: Optional[float]
    cramers_v_mean: Optional[float]
    n_targets: int


def template_association(records: Iterable[ElicitationRecord]) -> List[AssociationScores]:
    """
    Measure how consistently the templates of each relation elicit the same relata.

    For every target word a template x relatum table is built; targets answered through a
    single template or with a single distinct relatum are skipped.

    Args:
        records: Raw responses.

    Returns:
        One entry per relation; means are None when no target word could be scored.
    """
    tables: Dict[Relation, Dict[str, Dict[str, Counter]]] = defaultdict(
        lambda: defaultdict(lambda: defaultdict(Counter))
    )
    for record in records:
        tables[record.relation][record.target][record.template][record.relatum] += 1

    scores = []
    for relation in Relation:
        gjsd_values, v_values = [], []
        for target in sorted(tables[relation]):
            per_template = tables[relation][target]
            templates = sorted(per_template)
            relata = sorted({v for counter in per_template.values() for v in counter})
            if len(templates) < 2 or len(relata) < 2:
                continue
            table = np.array(
                [[per_template[t][v] for v in relata] for t in templates], dtype=float
            )
            gjsd_values.append(gjsd(table / table.sum(axis=1, keepdims=True)))
            v_values.append(cramers_v(table))
        scores.append(
            AssociationScores(
                relation=relation,
                gjsd_mean=float(np.mean(gjsd_values)) if gjsd_values else None,
                cramers_v_mean=float(np.mean(v_values)) if v_values else None,
                n_targets=len(gjsd_values),
            )
        )
        logger.debug("Template association for %s over %d targets.", relation.value, len(v_values))
    return scores


def spearman_rho(pairs: Sequence[Tuple[float, float]]) -> float:
    """
    Spearman rank correlation, ties given their average rank.

    Args:
        pairs: (x, y) observations.

    Returns:
        The correlation in [-1, 1].

    Raises:
        DegenerateInputError: With fewer than two pairs or a constant coordinate.
    """
    if len(pairs) < 2:
        raise DegenerateInputError("Spearman's rho needs at least two observations.")
    x = np.asarray([p[0] for p in pairs], dtype=float)
    y = np.asarray([p[1] for p in pairs], dtype=float)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateInputError("Spearman's rho is undefined for a constant variable.")
    return float(spearmanr(x, y)[0])


class MannWhitneyResult(NamedTuple):
    u: float
    p_value: float
    reject: bool


def _exact_p_value(ranks: np.ndarray, n1: int, u: float) -> float:
    n = len(ranks)
    center = n1 * (n - n1) / 2
    observed = abs(u - center)
    offset = n1 * (n1 + 1) / 2
    extreme = total = 0
    for chosen in itertools.combinations(range(n), n1):
        total += 1
        if abs(ranks[list(chosen)].sum() - offset - center) >= observed - 1e-9:
            extreme += 1
    return extreme / total


def mann_whitney_u(
    sample_a: Sequence[float], sample_b: Sequence[float], alpha: float = 0.05
) -> MannWhitneyResult:
    """
    Two-sided Mann-Whitney U test.

    Below EXACT_TEST_LIMIT pooled observations the p-value comes from enumerating every
    assignment of the pooled ranks to the first sample; above, from the normal
    approximation with tie and continuity corrections.

    Args:
        sample_a: First sample.
        sample_b: Second sample.
        alpha: Significance level.

    Returns:
        U of the first sample, the p-value and whether the null hypothesis is rejected.

    Raises:
        DegenerateInputError: If a sample is empty.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if not len(a) or not len(b):
        raise DegenerateInputError("Both Mann-Whitney samples must be non-empty.")
    pooled = np.concatenate([a, b])
    ranks = rankdata(pooled)
    n1 = len(a)
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2)
    if np.all(pooled == pooled[0]):
        p_value = 1.0
    elif len(pooled) < EXACT_TEST_LIMIT:
        p_value = _exact_p_value(ranks, n1, u)
    else:
        result = mannwhitneyu(
            a, b, alternative="two-sided", method="asymptotic", use_continuity=True
        )
        p_value = float(result.pvalue)
    p_value = min(max(p_value, 0.0), 1.0)
    return MannWhitneyResult(u=u, p_value=p_value, reject=p_value < alpha)


class WordCategorizer:
    """
    Tells abstract words (every synset under abstraction.n.06) from physical words (every
    synset under physical_entity.n.01). The anchors themselves count as their own category.
    """

    def __init__(self, graph: WordNetGraph) -> None:
        try:
            self._anchors = {
                "abstract": synset_by_name(graph, ABSTRACT_ANCHOR),
                "physical": synset_by_name(graph, PHYSICAL_ANCHOR),
            }
        except UnknownNameError as error:
            raise UnknownAnchorError(f"Anchor synset not found: {error.format_message()}")
        self._graph = graph
        self._cache: Dict[str, Optional[str]] = {}

    def _under(self, s: SynsetId, anchor: SynsetId) -> bool:
        return s == anchor or is_descendant(self._graph, s, anchor)

    def category(self, word: str) -> Optional[str]:
        """'abstract', 'physical' or None for unknown and mixed words."""
        if word not in self._cache:
            synsets = synsets_of(self._graph, word)
            found = None
            for name, anchor in self._anchors.items():
                if synsets and all(self._under(s, anchor) for s in synsets):
                    found = name
                    break
            self._cache[word] = found
        return self._cache[word]


@dataclass(frozen=True)
class SplitResult:
    abstract: List[ClassifiedTriplet]
    physical: List[ClassifiedTriplet]
    abstract_matrix: MismatchMatrix
    physical_matrix: MismatchMatrix


def abstract_physical_split(
    graph: WordNetGraph,
    classified: Sequence[ClassifiedTriplet],
    freq: Optional[FrequencyTable] = None,
) -> SplitResult:
    """
    Split triplets whose two words are both abstract or both physical, and compute a
    mismatch matrix per partition. Other triplets are discarded.

    Args:
        graph: The WordNet graph.
        classified: Classified triplets; excluded ones are ignored.
        freq: Elicitation frequencies, computed from `classified` when omitted.

    Returns:
        The two partitions and their matrices.

    Raises:
        UnknownAnchorError: If an anchor synset is missing from the graph.
    """
    categorizer = WordCategorizer(graph)
    freq = freq if freq is not None else frequency_of(classified)
    parts: Dict[str, List[ClassifiedTriplet]] = {"abstract": [], "physical": []}
    for c in analysed(classified):
        category = categorizer.category(c.triplet.target)
        if category is not None and categorizer.category(c.triplet.relatum) == category:
            parts[category].append(c)
    logger.info(
        "Found %d abstract and %d physical triplets.",
        len(parts["abstract"]),
        len(parts["physical"]),
    )
    return SplitResult(
        abstract=parts["abstract"],
        physical=parts["physical"],
        abstract_matrix=mismatch_matrix(parts["abstract"], freq),
        physical_matrix=mismatch_matrix(parts["physical"], freq),
    )


@dataclass(frozen=True)
class PolysemyComparison:
    abstract_mean: Optional[float]
    physical_mean: Optional[float]
    n_abstract: int
    n_physical: int
    test: Optional[MannWhitneyResult]


def polysemy_comparison(
    graph: WordNetGraph, classified: Sequence[ClassifiedTriplet], alpha: float = 0.05
) -> PolysemyComparison:
    """
    Compare the number of synsets of abstract and physical target words.

    Args:
        graph: The WordNet graph.
        classified: Classified triplets; their distinct targets are compared.
        alpha: Significance level of the Mann-Whitney test.

    Returns:
        Mean synset counts per category and the test, None when a category is empty.
    """
    categorizer = WordCategorizer(graph)
    counts: Dict[str, List[int]] = {"abstract": [], "physical": []}
    for target in sorted({c.triplet.target for c in analysed(classified)}):
        category = categorizer.category(target)
        if category is not None:
            counts[category].append(len(synsets_of(graph, target)))
    abstract, physical = counts["abstract"], counts["physical"]
    test = mann_whitney_u(abstract, physical, alpha) if abstract and physical else None
    return PolysemyComparison(
        abstract_mean=float(np.mean(abstract)) if abstract else None,
        physical_mean=float(np.mean(physical)) if physical else None,
        n_abstract=len(abstract),
        n_physical=len(physical),
        test=test,
    )


def status_distribution(
    classified: Iterable[ClassifiedTriplet], hapax: Optional[bool] = None
) -> pd.DataFrame:
    """
    Count and share of each match status per elicited relation.

    Args:
        classified: Classified triplets; excluded ones are ignored.
        hapax: Restrict to hapaxes (True), non-hapaxes (False) or keep all (None).

    Returns:
        A table with columns subset, relation, status, count, share.
    """
    subset = "all" if hapax is None else ("hapax" if hapax else "non_hapax")
    counts: Counter = Counter()
    for c in analysed(classified):
        if hapax is None or c.triplet.is_hapax == hapax:
            counts[(c.triplet.relation, c.status.kind)] += 1
    rows = []
    for relation in Relation:
        total = sum(counts[(relation, kind)] for kind in REPORTED_STATUSES)
        for kind in REPORTED_STATUSES:
            count = counts[(relation, kind)]
            rows.append(
                {
                    "subset": subset,
                    "relation": relation.value,
                    "status": kind.value,
                    "count": count,
                    "share": count / total if total else 0.0,
                }
            )
    return pd.DataFrame(rows, columns=["subset", "relation", "status", "count", "share"])


def triplet_counts(
    classified: Sequence[ClassifiedTriplet],
    records: Optional[Sequence[ElicitationRecord]] = None,
) -> pd.DataFrame:
    """
    Per-relation target words, templates, analysed triplets and hapaxes, with a total row.

    Target words and templates are counted from the raw records when given, otherwise
    target words come from the triplets and templates are left at zero.
    """
    targets: Dict[Relation, set] = defaultdict(set)
    templates: Dict[Relation, set] = defaultdict(set)
    if records is not None:
        for record in records:
            targets[record.relation].add(record.target)
            templates[record.relation].add(record.template)
    else:
        for c in classified:
            targets[c.triplet.relation].add(c.triplet.target)
    kept = analysed(classified)
    rows = []
    for relation in Relation:
        rows.append(
            {
                "relation": relation.value,
                "target_words": len(targets[relation]),
                "templates": len(templates[relation]),
                "triplets": sum(c.triplet.relation == relation for c in kept),
                "hapaxes": sum(c.triplet.relation == relation and c.triplet.is_hapax for c in kept),
                "excluded": sum(
                    c.triplet.relation == relation and c.status.is_excluded for c in classified
                ),
            }
        )
    rows.append(
        {
            "relation": "TOTAL",
            "target_words": len(set().union(*targets.values())) if targets else 0,
            "templates": sum(len(t) for t in templates.values()),
            "triplets": len(kept),
            "hapaxes": sum(c.triplet.is_hapax for c in kept),
            "excluded": len(classified) - len(kept),
        }
    )
    frame = pd.DataFrame(rows)
    frame["non_hapaxes"] = frame["triplets"] - frame["hapaxes"]
    return frame


def distance_points(
    classified: Iterable[ClassifiedTriplet], freq: FrequencyTable
) -> pd.DataFrame:
    """Distance and elicitation frequency of every directly or indirectly matched triplet."""
    rows = [
        {
            "relation": c.triplet.relation.value,
            "target": c.triplet.target,
            "relatum": c.triplet.relatum,
            "distance": c.distance,
            "frequency": freq.of(c.triplet),
            "direct": c.status.kind == StatusKind.MATCHED,
        }
        for c in analysed(classified)
        if c.distance is not None
    ]
    return pd.DataFrame(
        rows, columns=["relation", "target", "relatum", "distance", "frequency", "direct"]
    )


def distance_summary(
    classified: Sequence[ClassifiedTriplet], freq: FrequencyTable
) -> pd.DataFrame:
    """
    Per taxonomic relation: direct and indirect match counts, the share of missing
    triplets recovered through the hierarchy, the share of indirect matches at distances 2
    to 4, and Spearman's rho between distance and elicitation frequency.
    """
    rows = []
    for relation in (Relation.HYP, Relation.HPO):
        group = [c for c in analysed(classified) if c.triplet.relation == relation]
        direct = [c for c in group if c.status.kind == StatusKind.MATCHED]
        missing = [c for c in group if c.status.kind == StatusKind.MISSING]
        indirect = [c for c in missing if c.distance is not None]
        pairs = [(float(c.distance), freq.of(c.triplet)) for c in direct + indirect]
        try:
            rho = spearman_rho(pairs)
        except DegenerateInputError:
            rho = float("nan")
        mid_range = sum(2 <= c.distance <= 4 for c in indirect if c.distance is not None)
        rows.append(
            {
                "relation": relation.value,
                "direct": len(direct),
                "missing": len(missing),
                "indirect": len(indirect),
                "recovery_share": len(indirect) / len(missing) if missing else 0.0,
                "share_distance_2_to_4": mid_range / len(indirect) if indirect else 0.0,
                "spearman_rho": rho,
                "n_points": len(pairs),
            }
        )
    return pd.DataFrame(rows)
