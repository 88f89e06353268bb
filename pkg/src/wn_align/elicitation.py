"""
Relation inventory, cloze templates, target words, task sentences and raw responses.
"""

import logging

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from wn_align.exceptions import (
    BadTargetError,
    DuplicateRowError,
    EmptyResultError,
    InfeasiblePartitionError,
    MalformedRowError,
    MissingFileError,
)
from wn_align.utils import stable_digest


logger = logging.getLogger(__name__)

TARGET_SLOT = "{W}"
RELATUM_SLOT = "{V}"
RESPONSE_COLUMNS = ["participant_id", "template_id", "relation", "target", "rank", "relatum"]
SEED_COLUMNS = ["target", "relation", "relatum"]


class Relation(str, Enum):
    """The six studied semantic relations."""

    HYP = "HYP"
    HPO = "HPO"
    HOL = "HOL"
    MER = "MER"
    ANT = "ANT"
    SYN = "SYN"

    @property
    def reverse(self) -> "Relation":
        """The relation read in the other direction; ANT and SYN are their own reverse."""
        return _REVERSE.get(self, self)

    @property
    def is_taxonomic(self) -> bool:
        return self in (Relation.HYP, Relation.HPO)

    @classmethod
    def parse(cls, value: str) -> "Relation":
        """
        Parse a relation code, ignoring case and surrounding whitespace.

        Raises:
            ValueError: If the value is not one of the six codes.
        """
        try:
            return cls(value.strip().upper())
        except ValueError:
            msg = f"'{value}' is not a relation, use one of {', '.join(r.value for r in cls)}."
            raise ValueError(msg)


_REVERSE = {
    Relation.HYP: Relation.HPO,
    Relation.HPO: Relation.HYP,
    Relation.HOL: Relation.MER,
    Relation.MER: Relation.HOL,
}


@dataclass(frozen=True)
class Template:
    """A cloze template verbalizing one relation, with a target slot and a relatum slot."""

    id: str
    relation: Relation
    text: str

    def __post_init__(self) -> None:
        if self.text.count(TARGET_SLOT) != 1 or self.text.count(RELATUM_SLOT) != 1:
            raise ValueError(f"Template '{self.id}' must hold exactly one {{W}} and one {{V}}.")


@dataclass(frozen=True, order=True)
class TaskSentence:
    """A template rendered for one target word, relatum slot left open."""

    relation: Relation
    template: str
    target: str
    rendered: str


@dataclass(frozen=True)
class ElicitationRecord:
    """One relatum given by one participant for one task sentence."""

    participant: str
    template: str
    relation: Relation
    target: str
    rank: int
    relatum: str


@dataclass(frozen=True)
class SeedTriplet:
    """A human-confirmed triplet from an existing corpus, used to pick target words."""

    target: str
    relation: Relation
    relatum: str


_TEMPLATE_TEXTS: Dict[Relation, Tuple[str, ...]] = {
    Relation.HYP: (
        "a {W} is a type of a {V}",
        "a {W} is a kind of a {V}",
        "the word {W} has a more specific meaning than the word {V}",
        "a {W} is a {V}",
        "a {W} is a specific case of a {V}",
        "a {W} is a subordinate type of a {V}",
        "the word {W} has a more specific sense than the word {V}",
    ),
    Relation.HPO: (
        "my favorite {W} is a {V}",
        "a {W}, such as a {V}",
        "the word {W} has a more general meaning than the word {V}",
        "the word {W} has a more general sense than the word {V}",
    ),
    Relation.HOL: (
        "a {W} is a component of a {V}",
        "a {W} is a part of a {V}",
        "a {W} is contained in a {V}",
        "a {W} belongs to constituents of a {V}",
        "a {W} belongs to parts of a {V}",
        "a {W} belongs to components of a {V}",
        "a {W} is a constituent of a {V}",
    ),
    Relation.MER: (
        "constituents of a {W} include a {V}",
        "components of a {W} include a {V}",
        "parts of a {W} include a {V}",
        "a {W} consists of a {V}",
        "a {W} has a {V}",
        "a {W} contains a {V}",
    ),
    Relation.ANT: (
        "it is not likely to be both a {W} and a {V}",
        "a {W} is the opposite of a {V}",
        "the word {W} has an opposite sense of the word {V}",
        "it is impossible to be both a {W} and a {V}",
        "the word {W} has a meaning that negates the meaning of the word {V}",
        "it is a {W} so it is not a {V}",
        "the word {W} has an opposite meaning of the word {V}",
        "if something is a {W}, then it can not also be a {V}",
        "the word {W} has a sense that negates the sense of the word {V}",
    ),
    Relation.SYN: (
        "a {W} is also known as a {V}",
        "a {W} is often referred to as a {V}",
        "the word {W} has a similar meaning as the word {V}",
        "a {W} is similar to a {V}",
        "the word {W} means nearly the same as the word {V}",
        "a {W} is indistinguishable from a {V}",
        "a {W} is also called a {V}",
    ),
}

_BUILTIN_TEMPLATES = tuple(
    Template(id=f"{relation.value}-{number}", relation=relation, text=text)
    for relation, texts in _TEMPLATE_TEXTS.items()
    for number, text in enumerate(texts, start=1)
)


_TEMPLATE_RELATIONS = {template.id: template.relation for template in _BUILTIN_TEMPLATES}


def builtin_templates() -> List[Template]:
    """Get the 40 elicitation templates, ordered by relation then template number."""
    return list(_BUILTIN_TEMPLATES)


def templates_by_relation(templates: Iterable[Template]) -> Dict[Relation, List[Template]]:
    """Group templates by relation, every relation present even without templates."""
    grouped: Dict[Relation, List[Template]] = {relation: [] for relation in Relation}
    for template in templates:
        grouped[template.relation].append(template)
    return grouped


def template_checksum(templates: Sequence[Template] = _BUILTIN_TEMPLATES) -> str:
    """Digest of a template table, stable across runs."""
    return stable_digest([[t.id, t.relation.value, t.text] for t in templates])


def _check_single_token(word: str) -> str:
    if not word or len(word.split()) != 1:
        raise BadTargetError(f"'{word}' is not a single non-empty token.")
    return word


def render(t: Template, target: str) -> TaskSentence:
    """
    Fill the target slot of a template.

    The text is kept verbatim, so "a {W}" stays "a" whatever the target's first letter.

    Args:
        t: The template.
        target: The target word.

    Returns:
        The task sentence with the relatum slot still open.

    Raises:
        BadTargetError: If the target is empty or holds whitespace.
    """
    _check_single_token(target)
    return TaskSentence(
        relation=t.relation,
        template=t.id,
        target=target,
        rendered=t.text.replace(TARGET_SLOT, target),
    )


def extract_target_words(
    seeds: Iterable[SeedTriplet], allowlist: Set[str]
) -> Dict[Relation, List[str]]:
    """
    Derive the target words of every relation from seed triplets.

    Seeds with a word outside the allowlist are dropped. For ANT and SYN both words become
    targets of the relation; for the other relations the seed's target goes to its relation
    and the seed's relatum to the reverse relation.

    Args:
        seeds: Seed triplets, in corpus order.
        allowlist: Accepted words (lowercase).

    Returns:
        Target words per relation without duplicates, first-seen order kept.

    Raises:
        EmptyResultError: If no seed survives the filter.
    """
    allowed = {word.lower() for word in allowlist}
    targets: Dict[Relation, Dict[str, None]] = {relation: {} for relation in Relation}
    survivors = 0
    for seed in seeds:
        target, relatum = seed.target.lower(), seed.relatum.lower()
        if target not in allowed or relatum not in allowed:
            continue
        survivors += 1
        targets[seed.relation][target] = None
        targets[seed.relation.reverse][relatum] = None
    if not survivors:
        raise EmptyResultError("No seed triplet has both words in the allowlist.")
    logger.info("Kept %d seed triplets.", survivors)
    return {relation: list(words) for relation, words in targets.items()}


def generate_tasks(
    targets: Mapping[Relation, Sequence[str]], templates: Sequence[Template]
) -> List[TaskSentence]:
    """
    Render every template of a relation for every target word of that relation.

    Args:
        targets: Target words per relation.
        templates: Templates to render.

    Returns:
        The task sentences, grouped by relation, then target, then template.
    """
    grouped = templates_by_relation(templates)
    return [
        render(template, target)
        for relation in Relation
        for target in targets.get(relation, ())
        for template in grouped[relation]
    ]


def partition_tasks(
    sentences: Sequence[TaskSentence], n_subsets: int, seed: int
) -> List[List[TaskSentence]]:
    """
    Split task sentences into subsets where no two sentences share relation and target.

    Groups of sentences with the same (relation, target) are placed largest first, ties in
    a seeded random order; each group is spread over the currently smallest subsets.

    Args:
        sentences: The task sentences.
        n_subsets: Number of subsets to build.
        seed: Seed of the tie-breaking order.

    Returns:
        The subsets, each in placement order.

    Raises:
        InfeasiblePartitionError: If a (relation, target) group is larger than n_subsets.
    """
    if n_subsets < 1:
        raise InfeasiblePartitionError("At least one subset is required.")
    groups: Dict[Tuple[Relation, str], List[TaskSentence]] = defaultdict(list)
    for sentence in sentences:
        groups[(sentence.relation, sentence.target)].append(sentence)
    largest = max((len(group) for group in groups.values()), default=0)
    if largest > n_subsets:
        raise InfeasiblePartitionError(
            f"A relation/target pair has {largest} sentences but only {n_subsets} subsets exist."
        )

    keys = sorted(groups)
    order = np.random.default_rng(seed).permutation(len(keys))
    shuffled = [keys[i] for i in order]
    shuffled.sort(key=lambda key: -len(groups[key]))

    subsets: List[List[TaskSentence]] = [[] for _ in range(n_subsets)]
    for key in shuffled:
        group = groups[key]
        smallest = sorted(range(n_subsets), key=lambda i: (len(subsets[i]), i))[: len(group)]
        for index, sentence in zip(smallest, group):
            subsets[index].append(sentence)
    return subsets


def load_seed_triplets(path: Union[str, Path]) -> List[SeedTriplet]:
    """
    Read seed triplets from a CSV file with columns target, relation, relatum.

    Raises:
        MissingFileError: If the file does not exist.
        MalformedRowError: If a row is incomplete or names an unknown relation.
    """
    frame = _read_table(path, sep=",", columns=SEED_COLUMNS)
    seeds = []
    for row_number, row in enumerate(frame.itertuples(index=False), start=2):
        target, relatum = row.target.strip(), row.relatum.strip()
        if not target or not relatum:
            raise MalformedRowError(row_number, "empty target or relatum.")
        try:
            relation = Relation.parse(row.relation)
        except ValueError as error:
            raise MalformedRowError(row_number, str(error))
        seeds.append(SeedTriplet(target=target, relation=relation, relatum=relatum))
    return seeds


def load_allowlist(path: Union[str, Path]) -> Set[str]:
    """Read a one-word-per-line allowlist, lowercased; blank lines and '#' comments skipped."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(path)
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return words


def _read_table(path: Union[str, Path], sep: str, columns: List[str]) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(path)
    try:
        frame = pd.read_csv(path, sep=sep, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise MalformedRowError(1, "the file is empty, a header row is required.")
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise MalformedRowError(1, f"missing column(s) {', '.join(missing)} in header.")
    return frame


def ingest_responses(file: Union[str, Path]) -> List[ElicitationRecord]:
    """
    Read raw elicited responses from a tab-separated file.

    Targets and relata are lowercased and stripped; no other normalization is applied.

    Args:
        file: Path to a TSV with the header participant_id, template_id, relation, target,
            rank, relatum.

    Returns:
        One record per row, in file order.

    Raises:
        MissingFileError: If the file does not exist.
        MalformedRowError: If a row has an invalid relation, rank, or a multi-token relatum,
            or names a built-in template of another relation.
        DuplicateRowError: If participant, template, target and rank repeat an earlier row.
    """
    frame = _read_table(file, sep="\t", columns=RESPONSE_COLUMNS)
    records = []
    seen: Dict[Tuple[str, str, str, int], int] = {}
    for row_number, row in enumerate(frame.itertuples(index=False), start=2):
        target = row.target.strip().lower()
        relatum = row.relatum.strip().lower()
        try:
            relation = Relation.parse(row.relation)
        except ValueError as error:
            raise MalformedRowError(row_number, str(error))
        template_relation = _TEMPLATE_RELATIONS.get(row.template_id.strip())
        if template_relation is not None and template_relation != relation:
            raise MalformedRowError(
                row_number,
                f"template '{row.template_id.strip()}' elicits {template_relation.value}, "
                f"not {relation.value}.",
            )
        try:
            rank = int(row.rank)
        except ValueError:
            raise MalformedRowError(row_number, f"rank '{row.rank}' is not an integer.")
        if not 1 <= rank <= 5:
            raise MalformedRowError(row_number, f"rank {rank} is outside [1, 5].")
        if not target or len(target.split()) != 1:
            raise MalformedRowError(row_number, f"target '{target}' is not a single token.")
        if not relatum or len(relatum.split()) != 1:
            raise MalformedRowError(row_number, f"relatum '{relatum}' is not a single token.")
        key = (row.participant_id.strip(), row.template_id.strip(), target, rank)
        if key in seen:
            raise DuplicateRowError(row_number, seen[key])
        seen[key] = row_number
        records.append(
            ElicitationRecord(
                participant=key[0],
                template=key[1],
                relation=relation,
                target=target,
                rank=rank,
                relatum=relatum,
            )
        )
    logger.info("Ingested %d elicited responses from %s.", len(records), file)
    return records
