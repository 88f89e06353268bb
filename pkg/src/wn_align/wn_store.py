"""
Reader for the Princeton WordNet noun database (wndb format) and the immutable relation graph
built from it.

Only index.noun and data.noun are read. Semantic pointers become synset edges, lexical
pointers (non-zero source/target field) become lemma edges. Mirror edges missing from the
files (hyponym for hypernym, meronym for holonym, ...) are synthesized so the graph is always
symmetric.
"""

import json
import logging
import re

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

import networkx as nx

from wn_align.exceptions import (
    DanglingPointerError,
    MalformedRecordError,
    MissingFileError,
    UnknownNameError,
)


logger = logging.getLogger(__name__)

NOUN = "n"
INDEX_FILE = "index.noun"
DATA_FILE = "data.noun"

_NAME_PATTERN = re.compile(r"^(?P<lemma>.+)\.(?P<pos>[nvasr])\.(?P<sense>\d{2,})$")


class SynsetId(NamedTuple):
    """Identifier of a synset: part of speech and byte offset in the data file."""

    pos: str
    offset: int

    def __str__(self) -> str:
        return f"{self.offset:08d}-{self.pos}"


class RelationKind(str, Enum):
    """Pointer types of the noun database, valued by their wndb pointer symbol."""

    HYPERNYM = "@"
    INSTANCE_HYPERNYM = "@i"
    HYPONYM = "~"
    INSTANCE_HYPONYM = "~i"
    MEMBER_HOLONYM = "#m"
    PART_HOLONYM = "#p"
    SUBSTANCE_HOLONYM = "#s"
    MEMBER_MERONYM = "%m"
    PART_MERONYM = "%p"
    SUBSTANCE_MERONYM = "%s"
    ANTONYM = "!"

    @property
    def symbol(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class OtherRelation:
    """Any pointer type outside the studied ones, kept with its raw symbol."""

    symbol: str


PointerKind = Union[RelationKind, OtherRelation]

HYPERNYM_KINDS = frozenset({RelationKind.HYPERNYM, RelationKind.INSTANCE_HYPERNYM})
HYPONYM_KINDS = frozenset({RelationKind.HYPONYM, RelationKind.INSTANCE_HYPONYM})
HOLONYM_KINDS = frozenset(
    {RelationKind.MEMBER_HOLONYM, RelationKind.PART_HOLONYM, RelationKind.SUBSTANCE_HOLONYM}
)
MERONYM_KINDS = frozenset(
    {RelationKind.MEMBER_MERONYM, RelationKind.PART_MERONYM, RelationKind.SUBSTANCE_MERONYM}
)

MIRRORS: Mapping[RelationKind, RelationKind] = MappingProxyType(
    {
        RelationKind.HYPERNYM: RelationKind.HYPONYM,
        RelationKind.HYPONYM: RelationKind.HYPERNYM,
        RelationKind.INSTANCE_HYPERNYM: RelationKind.INSTANCE_HYPONYM,
        RelationKind.INSTANCE_HYPONYM: RelationKind.INSTANCE_HYPERNYM,
        RelationKind.MEMBER_HOLONYM: RelationKind.MEMBER_MERONYM,
        RelationKind.MEMBER_MERONYM: RelationKind.MEMBER_HOLONYM,
        RelationKind.PART_HOLONYM: RelationKind.PART_MERONYM,
        RelationKind.PART_MERONYM: RelationKind.PART_HOLONYM,
        RelationKind.SUBSTANCE_HOLONYM: RelationKind.SUBSTANCE_MERONYM,
        RelationKind.SUBSTANCE_MERONYM: RelationKind.SUBSTANCE_HOLONYM,
    }
)

_KINDS_BY_SYMBOL = {kind.value: kind for kind in RelationKind}


def pointer_kind(symbol: str) -> PointerKind:
    """
    Map a wndb pointer symbol to its relation kind.

    Args:
        symbol: The raw pointer symbol, e.g. '@' or '%p'.

    Returns:
        The matching RelationKind, or an OtherRelation carrying the symbol.
    """
    kind = _KINDS_BY_SYMBOL.get(symbol)
    return kind if kind is not None else OtherRelation(symbol)


class LemmaEdge(NamedTuple):
    """Lexical pointer between a lemma of one synset and a lemma of another (0-based indexes)."""

    source_lemma: int
    kind: PointerKind
    target: SynsetId
    target_lemma: int


@dataclass(frozen=True)
class Synset:
    """
    A noun synset as read from data.noun.

    Attributes:
        id: Identifier of the synset.
        lemmas: Lemmas in file order, underscores kept for multi-word lemmas.
        gloss: Definition text, example sentences included. Empty when the record has none.
        edges: Semantic (synset-level) pointers.
        lemma_edges: Lexical (lemma-level) pointers.
    """

    id: SynsetId
    lemmas: Tuple[str, ...]
    gloss: str
    edges: Tuple[Tuple[PointerKind, SynsetId], ...]
    lemma_edges: Tuple[LemmaEdge, ...] = ()


class WordNetGraph:
    """
    Immutable relation graph over the noun synsets.

    Attributes:
        synsets: Synsets by identifier.
        lemma_index: Sense-ordered synsets by (lowercased lemma, part of speech).
        name_index: Synsets by 'lemma.pos.NN' name.
        hierarchy: Frozen directed graph with one edge per (instance) hypernym link, pointing
            from the hyponym to the hypernym.
    """

    def __init__(
        self,
        synsets: Dict[SynsetId, Synset],
        lemma_index: Dict[Tuple[str, str], Tuple[SynsetId, ...]],
    ) -> None:
        self.synsets: Mapping[SynsetId, Synset] = MappingProxyType(dict(synsets))
        self.lemma_index: Mapping[Tuple[str, str], Tuple[SynsetId, ...]] = MappingProxyType(
            dict(lemma_index)
        )
        name_index = {}
        for (lemma, pos), ids in self.lemma_index.items():
            for sense, sid in enumerate(ids, start=1):
                name_index[f"{lemma}.{pos}.{sense:02d}"] = sid
        self.name_index: Mapping[str, SynsetId] = MappingProxyType(name_index)

        hierarchy = nx.DiGraph()
        hierarchy.add_nodes_from(sorted(self.synsets))
        for sid in sorted(self.synsets):
            for kind, target in self.synsets[sid].edges:
                if kind in HYPERNYM_KINDS:
                    hierarchy.add_edge(sid, target)
        self.hierarchy = nx.freeze(hierarchy)

    def __len__(self) -> int:
        return len(self.synsets)

    def __contains__(self, sid: object) -> bool:
        return sid in self.synsets

    def __getitem__(self, sid: SynsetId) -> Synset:
        return self.synsets[sid]


def _read_lines(path: Path) -> Iterator[Tuple[int, str]]:
    with path.open(encoding="utf-8") as file:
        for line_number, line in enumerate(file, start=1):
            # License header lines start with two spaces.
            if line.startswith("  ") or not line.strip():
                continue
            yield line_number, line.rstrip("\n")


def _parse_data_line(
    path: Path, line_number: int, line: str
) -> Tuple[SynsetId, Tuple[str, ...], str, List[Tuple[str, int, str, int, int]]]:
    head, sep, gloss = line.partition(" | ")
    if not sep and line.rstrip().endswith(" |"):
        head = line.rstrip()[:-2]
    fields = head.split()
    try:
        offset = int(fields[0])
        ss_type = fields[2]
        w_cnt = int(fields[3], 16)
        words = fields[4 : 4 + 2 * w_cnt : 2]
        if len(words) != w_cnt or w_cnt == 0:
            raise ValueError(f"expected {w_cnt} words")
        p_pos = 4 + 2 * w_cnt
        p_cnt = int(fields[p_pos])
        pointer_fields = fields[p_pos + 1 : p_pos + 1 + 4 * p_cnt]
        if len(pointer_fields) != 4 * p_cnt:
            raise ValueError(f"expected {p_cnt} pointers")
        pointers = []
        for i in range(p_cnt):
            symbol, target, target_pos, source_target = pointer_fields[4 * i : 4 * i + 4]
            if len(source_target) != 4:
                raise ValueError(f"bad source/target field '{source_target}'")
            pointers.append(
                (
                    symbol,
                    int(target),
                    target_pos,
                    int(source_target[:2], 16),
                    int(source_target[2:], 16),
                )
            )
    except (IndexError, ValueError) as error:
        raise MalformedRecordError(path, line_number, f"invalid data record ({error}).")
    if ss_type != NOUN:
        raise MalformedRecordError(path, line_number, f"unexpected synset type '{ss_type}'.")
    return SynsetId(NOUN, offset), tuple(words), gloss.strip(), pointers


def _parse_index_line(path: Path, line_number: int, line: str) -> Tuple[str, List[int]]:
    fields = line.split()
    try:
        lemma, pos = fields[0], fields[1]
        synset_cnt = int(fields[2])
        p_cnt = int(fields[3])
        offsets = [int(field) for field in fields[4 + p_cnt + 2 :]]
    except (IndexError, ValueError) as error:
        raise MalformedRecordError(path, line_number, f"invalid index entry ({error}).")
    if pos != NOUN:
        raise MalformedRecordError(path, line_number, f"unexpected part of speech '{pos}'.")
    if len(offsets) != synset_cnt:
        raise MalformedRecordError(
            path, line_number, f"expected {synset_cnt} synset offsets, found {len(offsets)}."
        )
    return lemma.lower(), offsets


def parse_wordnet(directory_path: Union[str, Path]) -> WordNetGraph:
    """
    Parse index.noun and data.noun from a WordNet database directory.

    Args:
        directory_path: Directory holding the wndb files (usually 'dict/').

    Returns:
        The relation graph over all noun synsets.

    Raises:
        MissingFileError: If a required file is absent.
        MalformedRecordError: If a line does not follow the wndb grammar.
        DanglingPointerError: If a pointer or index entry targets an unknown offset.
    """
    directory = Path(directory_path)
    index_path, data_path = directory / INDEX_FILE, directory / DATA_FILE
    for path in (index_path, data_path):
        if not path.is_file():
            raise MissingFileError(path)

    lemmas: Dict[SynsetId, Tuple[str, ...]] = {}
    glosses: Dict[SynsetId, str] = {}
    edges: Dict[SynsetId, List[Tuple[PointerKind, SynsetId]]] = {}
    lemma_edges: Dict[SynsetId, List[LemmaEdge]] = {}
    for line_number, line in _read_lines(data_path):
        sid, words, gloss, pointers = _parse_data_line(data_path, line_number, line)
        if sid in lemmas:
            raise MalformedRecordError(data_path, line_number, f"duplicate offset {sid.offset}.")
        lemmas[sid], glosses[sid] = words, gloss
        edges[sid], lemma_edges[sid] = [], []
        for symbol, target, target_pos, source, target_lemma in pointers:
            if target_pos != NOUN:
                # Cross part-of-speech pointers lead outside the parsed files.
                continue
            kind = pointer_kind(symbol)
            target_id = SynsetId(NOUN, target)
            if source == 0 and target_lemma == 0:
                edges[sid].append((kind, target_id))
            else:
                lemma_edges[sid].append(LemmaEdge(source - 1, kind, target_id, target_lemma - 1))
    logger.debug("Read %d synset records from %s.", len(lemmas), data_path)

    for sid in lemmas:
        for _, target in edges[sid]:
            if target not in lemmas:
                raise DanglingPointerError(f"Synset {sid} points to unknown offset {target}.")
        for edge in lemma_edges[sid]:
            if edge.target not in lemmas:
                raise DanglingPointerError(f"Synset {sid} points to unknown offset {edge.target}.")

    _add_mirror_edges(edges)

    lemma_index: Dict[Tuple[str, str], Tuple[SynsetId, ...]] = {}
    for line_number, line in _read_lines(index_path):
        lemma, offsets = _parse_index_line(index_path, line_number, line)
        ids = tuple(SynsetId(NOUN, offset) for offset in offsets)
        for sid in ids:
            if sid not in lemmas:
                raise DanglingPointerError(
                    f"{index_path}:{line_number}: lemma '{lemma}' lists unknown offset {sid}."
                )
        lemma_index[(lemma, NOUN)] = ids

    synsets = {
        sid: Synset(
            id=sid,
            lemmas=lemmas[sid],
            gloss=glosses[sid],
            edges=tuple(edges[sid]),
            lemma_edges=tuple(lemma_edges[sid]),
        )
        for sid in lemmas
    }
    graph = WordNetGraph(synsets, lemma_index)
    logger.info("Parsed %d noun synsets and %d lemmas.", len(synsets), len(lemma_index))
    return graph


def _add_mirror_edges(edges: Dict[SynsetId, List[Tuple[PointerKind, SynsetId]]]) -> None:
    present: Set[Tuple[SynsetId, PointerKind, SynsetId]] = {
        (sid, kind, target) for sid, out in edges.items() for kind, target in out
    }
    missing = sorted(
        {
            (target, MIRRORS[kind], sid)
            for sid, kind, target in present
            if isinstance(kind, RelationKind)
            and kind in MIRRORS
            and (target, MIRRORS[kind], sid) not in present
        },
        key=lambda item: (item[0], item[1].value, item[2]),
    )
    for source, kind, target in missing:
        edges[source].append((kind, target))
    if missing:
        logger.debug("Synthesized %d mirror edges.", len(missing))


def synsets_of(graph: WordNetGraph, word: str) -> List[SynsetId]:
    """
    Get the sense-ordered noun synsets of a word.

    Args:
        graph: The WordNet graph.
        word: A lemma; case is ignored and spaces are read as underscores.

    Returns:
        The synsets in index-file order, empty when the word is not a noun in WordNet.
    """
    key = word.strip().lower().replace(" ", "_")
    return list(graph.lemma_index.get((key, NOUN), ()))


def synset_by_name(graph: WordNetGraph, name: str) -> SynsetId:
    """
    Resolve a 'lemma.pos.NN' synset name.

    Args:
        graph: The WordNet graph.
        name: The name, e.g. 'abstraction.n.06'.

    Returns:
        The synset holding the lemma at that sense number.

    Raises:
        UnknownNameError: If the name is malformed or not in the graph.
    """
    match = _NAME_PATTERN.match(name)
    if match is None:
        raise UnknownNameError(f"'{name}' is not a valid synset name, use 'lemma.pos.NN'.")
    key = f"{match['lemma'].lower()}.{match['pos']}.{int(match['sense']):02d}"
    try:
        return graph.name_index[key]
    except KeyError:
        raise UnknownNameError(f"No synset named '{name}'.")


def canonical_name(graph: WordNetGraph, sid: SynsetId) -> str:
    """Name a synset after its first lemma and that lemma's sense number."""
    lemma = graph[sid].lemmas[0].lower()
    senses = graph.lemma_index.get((lemma, sid.pos), ())
    sense = senses.index(sid) + 1 if sid in senses else 1
    return f"{lemma}.{sid.pos}.{sense:02d}"


def direct_relata(graph: WordNetGraph, s: SynsetId, kind: PointerKind) -> List[SynsetId]:
    """
    Get the direct targets of a synset's edges of one kind.

    Instance hypernyms are folded into hypernym queries and instance hyponyms into hyponym
    queries.

    Args:
        graph: The WordNet graph.
        s: The source synset.
        kind: The pointer kind to follow.

    Returns:
        The targets, in edge order and without duplicates.
    """
    if kind in HYPERNYM_KINDS:
        kinds: Set[PointerKind] = set(HYPERNYM_KINDS)
    elif kind in HYPONYM_KINDS:
        kinds = set(HYPONYM_KINDS)
    else:
        kinds = {kind}
    targets: Dict[SynsetId, None] = {}
    for edge_kind, target in graph[s].edges:
        if edge_kind in kinds:
            targets[target] = None
    return list(targets)


def hypernym_distances(graph: WordNetGraph, s: SynsetId) -> Dict[SynsetId, int]:
    """Get every synset reachable upwards from `s` with its shortest hypernym distance."""
    return dict(nx.single_source_shortest_path_length(graph.hierarchy, s))


def hypernym_path_length(graph: WordNetGraph, source: SynsetId, target: SynsetId) -> Optional[int]:
    """
    Length of the shortest upward hypernym path between two synsets.

    Args:
        graph: The WordNet graph.
        source: The start synset.
        target: The ancestor to reach.

    Returns:
        The number of hypernym edges, 0 for identical synsets, None when unreachable.
    """
    try:
        return int(nx.shortest_path_length(graph.hierarchy, source, target))
    except nx.NetworkXNoPath:
        return None


def is_descendant(graph: WordNetGraph, s: SynsetId, ancestor: SynsetId) -> bool:
    """Whether `ancestor` is reachable from `s` through one or more hypernym edges."""
    return s != ancestor and nx.has_path(graph.hierarchy, s, ancestor)


def coverage(graph: WordNetGraph) -> Dict[str, float]:
    """
    Share of synsets with at least one hypernym, holonym and meronym.

    Args:
        graph: The WordNet graph.

    Returns:
        A mapping with the synset count and the three shares in [0, 1].
    """
    total = len(graph)
    counts = {"hypernym": 0, "holonym": 0, "meronym": 0}
    for synset in graph.synsets.values():
        kinds = {kind for kind, _ in synset.edges}
        counts["hypernym"] += bool(kinds & HYPERNYM_KINDS)
        counts["holonym"] += bool(kinds & HOLONYM_KINDS)
        counts["meronym"] += bool(kinds & MERONYM_KINDS)
    shares = {name: count / total if total else 0.0 for name, count in counts.items()}
    return {"synsets": float(total), **shares}


def serialize_graph(graph: WordNetGraph) -> str:
    """Canonical JSON serialization of the graph, sorted by synset and lemma."""
    synsets = [
        {
            "id": str(sid),
            "lemmas": list(synset.lemmas),
            "gloss": synset.gloss,
            "edges": [[kind.symbol, str(target)] for kind, target in synset.edges],
            "lemma_edges": [
                [edge.source_lemma, edge.kind.symbol, str(edge.target), edge.target_lemma]
                for edge in synset.lemma_edges
            ],
        }
        for sid, synset in sorted(graph.synsets.items())
    ]
    index = {
        f"{lemma}.{pos}": [str(sid) for sid in ids]
        for (lemma, pos), ids in sorted(graph.lemma_index.items())
    }
    return json.dumps({"synsets": synsets, "lemma_index": index}, sort_keys=True)
