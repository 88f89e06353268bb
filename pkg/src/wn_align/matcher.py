"""
Aggregation of elicited responses into triplets and their classification against WordNet.
"""

import logging

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import pandas as pd

from wn_align.elicitation import ElicitationRecord, Relation
from wn_align.exceptions import MalformedRowError, MissingFileError, WrongRelationError
from wn_align.wn_store import (
    HOLONYM_KINDS,
    MERONYM_KINDS,
    RelationKind,
    SynsetId,
    WordNetGraph,
    direct_relata,
    hypernym_distances,
    synsets_of,
)


logger = logging.getLogger(__name__)

CLASSIFIED_COLUMNS = [
    "target",
    "relation",
    "relatum",
    "count",
    "is_hapax",
    "status",
    "documented_relation",
    "exclusion_reason",
    "distance",
    "is_self_pair",
]


@dataclass(frozen=True)
class Triplet:
    """An elicited (target, relation, relatum) triplet with its elicitation count."""

    target: str
    relation: Relation
    relatum: str
    count: int = 1

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"Triplet count must be positive, got {self.count}.")

    @property
    def is_hapax(self) -> bool:
        return self.count == 1

    @property
    def key(self) -> Tuple[str, Relation, str]:
        return (self.target, self.relation, self.relatum)


class StatusKind(str, Enum):
    MATCHED = "matched"
    MISSING = "missing"
    MISMATCHED = "mismatched"
    EXCLUDED = "excluded"


class ExclusionReason(str, Enum):
    MULTI_RELATION = "multi_relation"
    RELATUM_NOT_NOUN = "relatum_not_noun"


@dataclass(frozen=True)
class MatchStatus:
    """
    Outcome of comparing a triplet with WordNet.

    Attributes:
        kind: Matched, missing, mismatched or excluded.
        documented: The relation WordNet documents, for mismatched triplets.
        reason: Why the triplet was excluded, for excluded triplets.
        relations: The documented relations behind a multi-relation exclusion.
    """

    kind: StatusKind
    documented: Optional[Relation] = None
    reason: Optional[ExclusionReason] = None
    relations: FrozenSet[Relation] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if (self.kind == StatusKind.MISMATCHED) != (self.documented is not None):
            raise ValueError("Only mismatched statuses carry a documented relation.")
        if (self.kind == StatusKind.EXCLUDED) != (self.reason is not None):
            raise ValueError("Only excluded statuses carry an exclusion reason.")
        if self.reason == ExclusionReason.MULTI_RELATION and len(self.relations) < 2:
            raise ValueError("A multi-relation exclusion needs at least two relations.")

    @classmethod
    def matched(cls) -> "MatchStatus":
        return cls(StatusKind.MATCHED)

    @classmethod
    def missing(cls) -> "MatchStatus":
        return cls(StatusKind.MISSING)

    @classmethod
    def mismatched(cls, documented: Relation) -> "MatchStatus":
        return cls(StatusKind.MISMATCHED, documented=documented)

    @classmethod
    def excluded(
        cls, reason: ExclusionReason, relations: Iterable[Relation] = ()
    ) -> "MatchStatus":
        return cls(StatusKind.EXCLUDED, reason=reason, relations=frozenset(relations))

    @property
    def is_excluded(self) -> bool:
        return self.kind == StatusKind.EXCLUDED


@dataclass(frozen=True)
class ClassifiedTriplet:
    """A triplet with its match status and, for HYP/HPO, its hierarchy distance."""

    triplet: Triplet
    status: MatchStatus
    distance: Optional[int] = None
    is_self_pair: bool = False

    def __post_init__(self) -> None:
        if self.distance is not None and not self.triplet.relation.is_taxonomic:
            raise ValueError("Only HYP and HPO triplets carry a distance.")

    @property
    def is_indirectly_matched(self) -> bool:
        return self.status.kind == StatusKind.MISSING and self.distance is not None


def aggregate(records: Iterable[ElicitationRecord]) -> List[Triplet]:
    """
    Count how often each (target, relation, relatum) was elicited.

    Args:
        records: Raw responses.

    Returns:
        One triplet per distinct key, counts summed over templates, participants and ranks,
        in first-seen order.
    """
    counts: Counter = Counter()
    for record in records:
        counts[(record.target, record.relation, record.relatum)] += 1
    return [
        Triplet(target=target, relation=relation, relatum=relatum, count=count)
        for (target, relation, relatum), count in counts.items()
    ]


def _any_target(
    graph: WordNetGraph, sources: Sequence[SynsetId], kinds: Iterable[RelationKind], goal: Set
) -> bool:
    return any(
        target in goal
        for s in sources
        for kind in kinds
        for target in direct_relata(graph, s, kind)
    )


def _antonym_linked(graph: WordNetGraph, sources: Sequence[SynsetId], goal: Set) -> bool:
    return any(
        edge.kind == RelationKind.ANTONYM and edge.target in goal
        for s in sources
        for edge in graph[s].lemma_edges
    )


def documented_relations(graph: WordNetGraph, w: str, v: str) -> FrozenSet[Relation]:
    """
    Relations WordNet documents directly between two words, over all their synsets.

    Args:
        graph: The WordNet graph.
        w: The target word.
        v: The relatum.

    Returns:
        The subset of the six studied relations holding from `w` to `v`.
    """
    sw, sv = synsets_of(graph, w), synsets_of(graph, v)
    if not sw or not sv:
        return frozenset()
    set_w, set_v = set(sw), set(sv)
    found = set()
    if set_w & set_v:
        found.add(Relation.SYN)
    if _any_target(graph, sw, [RelationKind.HYPERNYM], set_v):
        found.add(Relation.HYP)
    if _any_target(graph, sw, [RelationKind.HYPONYM], set_v):
        found.add(Relation.HPO)
    if _any_target(graph, sw, HOLONYM_KINDS, set_v):
        found.add(Relation.HOL)
    if _any_target(graph, sw, MERONYM_KINDS, set_v):
        found.add(Relation.MER)
    if _antonym_linked(graph, sw, set_v) or _antonym_linked(graph, sv, set_w):
        found.add(Relation.ANT)
    return frozenset(found)


def classify(graph: WordNetGraph, t: Triplet) -> MatchStatus:
    """
    Classify a triplet as matched, missing, mismatched or excluded.

    Args:
        graph: The WordNet graph.
        t: The triplet; its target is expected to be a noun of the graph.

    Returns:
        The match status.
    """
    if not synsets_of(graph, t.relatum):
        return MatchStatus.excluded(ExclusionReason.RELATUM_NOT_NOUN)
    documented = documented_relations(graph, t.target, t.relatum)
    if len(documented) >= 2:
        return MatchStatus.excluded(ExclusionReason.MULTI_RELATION, documented)
    if not documented:
        return MatchStatus.missing()
    (relation,) = documented
    if relation == t.relation:
        return MatchStatus.matched()
    return MatchStatus.mismatched(relation)


def indirect_distance(graph: WordNetGraph, t: Triplet) -> Optional[int]:
    """
    Shortest hypernym-path distance between a taxonomic triplet's words.

    HYP triplets climb from the target to the relatum, HPO triplets from the relatum to the
    target. All synset pairs are tried and identical synsets do not count.

    Args:
        graph: The WordNet graph.
        t: A HYP or HPO triplet.

    Returns:
        The smallest distance (1 for a direct link), None when no path exists.

    Raises:
        WrongRelationError: If the triplet is not HYP or HPO.
    """
    if not t.relation.is_taxonomic:
        raise WrongRelationError(f"No hierarchy distance for {t.relation.value} triplets.")
    lower, upper = (t.target, t.relatum) if t.relation == Relation.HYP else (t.relatum, t.target)
    goal = set(synsets_of(graph, upper))
    best: Optional[int] = None
    for s in synsets_of(graph, lower):
        for ancestor, length in hypernym_distances(graph, s).items():
            if length > 0 and ancestor in goal and (best is None or length < best):
                best = length
    return best


def classify_all(graph: WordNetGraph, triplets: Sequence[Triplet]) -> List[ClassifiedTriplet]:
    """
    Classify every triplet and attach distances to matched and missing HYP/HPO triplets.

    Args:
        graph: The WordNet graph.
        triplets: Aggregated triplets.

    Returns:
        Classified triplets in input order.
    """
    classified = []
    for t in triplets:
        status = classify(graph, t)
        distance = None
        if t.relation.is_taxonomic and status.kind in (StatusKind.MATCHED, StatusKind.MISSING):
            distance = indirect_distance(graph, t)
        classified.append(
            ClassifiedTriplet(
                triplet=t, status=status, distance=distance, is_self_pair=t.target == t.relatum
            )
        )
    logger.info("Classified %d triplets.", len(classified))
    return classified


def _exclusion_code(status: MatchStatus) -> str:
    if status.reason is None:
        return ""
    if status.reason == ExclusionReason.MULTI_RELATION:
        ordered = [relation.value for relation in Relation if relation in status.relations]
        return f"{status.reason.value}:{'+'.join(ordered)}"
    return status.reason.value


def classified_to_frame(classified: Iterable[ClassifiedTriplet]) -> pd.DataFrame:
    """Tabulate classified triplets with the columns of the classified CSV output."""
    rows = [
        {
            "target": c.triplet.target,
            "relation": c.triplet.relation.value,
            "relatum": c.triplet.relatum,
            "count": c.triplet.count,
            "is_hapax": c.triplet.is_hapax,
            "status": c.status.kind.value,
            "documented_relation": c.status.documented.value if c.status.documented else "",
            "exclusion_reason": _exclusion_code(c.status),
            "distance": c.distance if c.distance is not None else "",
            "is_self_pair": c.is_self_pair,
        }
        for c in classified
    ]
    return pd.DataFrame(rows, columns=CLASSIFIED_COLUMNS)


def write_classified(path: Union[str, Path], classified: Iterable[ClassifiedTriplet]) -> Path:
    """Write classified triplets as CSV and return the written path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    classified_to_frame(classified).to_csv(path, index=False, lineterminator="\n")
    return path


def read_classified(path: Union[str, Path]) -> List[ClassifiedTriplet]:
    """
    Read back a CSV written by write_classified.

    Raises:
        MissingFileError: If the file does not exist.
        MalformedRowError: If a row cannot be decoded.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(path)
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [column for column in CLASSIFIED_COLUMNS if column not in frame.columns]
    if missing:
        raise MalformedRowError(1, f"missing column(s) {', '.join(missing)} in header.")
    classified = []
    for row_number, row in enumerate(frame.itertuples(index=False), start=2):
        try:
            triplet = Triplet(
                target=row.target,
                relation=Relation.parse(row.relation),
                relatum=row.relatum,
                count=int(row.count),
            )
            kind = StatusKind(row.status)
            if kind == StatusKind.MISMATCHED:
                status = MatchStatus.mismatched(Relation.parse(row.documented_relation))
            elif kind == StatusKind.EXCLUDED:
                reason_code, _, relation_codes = row.exclusion_reason.partition(":")
                relations = [Relation.parse(code) for code in relation_codes.split("+") if code]
                status = MatchStatus.excluded(ExclusionReason(reason_code), relations)
            else:
                status = MatchStatus(kind)
            distance = int(row.distance) if row.distance else None
            classified.append(
                ClassifiedTriplet(
                    triplet=triplet,
                    status=status,
                    distance=distance,
                    is_self_pair=row.is_self_pair.strip().lower() == "true",
                )
            )
        except ValueError as error:
            raise MalformedRowError(row_number, str(error))
    return classified
