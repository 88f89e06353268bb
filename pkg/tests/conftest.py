import json

from collections import deque
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pytest

from click.testing import CliRunner, Result

from wn_align.cli import cli
from wn_align.elicitation import ElicitationRecord, ingest_responses
from wn_align.matcher import ClassifiedTriplet, aggregate, classify_all
from wn_align.wn_store import SynsetId, WordNetGraph, parse_wordnet


def run_cmd_and_assert_exit_code(
    cmd: str, exit_code: int = 0, input: Optional[str] = None, env: Optional[Dict[str, str]] = None
) -> Result:
    cmd = cmd.split()
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = runner.invoke(cli, cmd, input=input, env=env)
        # Debugging: Print the result details
        print(f"Command: {cmd}")
        print(f"Result Output: {result.output}")
        print(f"Result Exit Code: {result.exit_code}")
        if result.exception:
            print(f"Exception: {result.exception}")
    assert result.exit_code == exit_code
    return result


def reformat_cmd_output(output: str, deserialize: bool = False) -> str:
    output = output.replace("\n", "")
    output = " ".join(output.split())
    if deserialize:
        return json.loads(output)
    return output


LICENSE_HEADER = [
    "  1 This toy database follows the WordNet database file format.",
    "  2 It only exists to exercise the parser and the analyses.",
]

Pointer = Tuple[str, str, int, int]


def hyper(key: str) -> Pointer:
    return ("@", key, 0, 0)


# (key, lemmas, gloss, pointers); pointers are (symbol, target key, source lemma, target lemma)
# with 0/0 for synset-level pointers. Hyponym and most holonym pointers are left out so the
# parser has to synthesize them.
TOY_SYNSETS: List[Tuple[str, Sequence[str], str, Sequence[Pointer]]] = [
    ("entity", ["entity"], "that which is perceived to have its own distinct existence", []),
    ("physical_entity", ["physical_entity"], "an entity that has physical existence", [
        hyper("entity")
    ]),
    ("abstraction_1", ["abstraction"], "the process of formulating general concepts", [
        hyper("abstract_entity")
    ]),
    ("abstraction_2", ["abstraction"], "a concept not associated with any instance", [
        hyper("abstract_entity")
    ]),
    ("abstraction_3", ["abstraction"], "preoccupation with something to the exclusion of all", [
        hyper("abstract_entity")
    ]),
    ("abstraction_4", ["abstraction"], "an abstract painting", [hyper("abstract_entity")]),
    ("abstraction_5", ["abstraction"], "the act of withdrawing or removing something", [
        hyper("abstract_entity")
    ]),
    ("abstract_entity", ["abstraction", "abstract_entity"], "a general concept", [
        hyper("entity")
    ]),
    ("object", ["object", "physical_object"], "a tangible and visible entity", [
        hyper("physical_entity")
    ]),
    ("food", ["food", "solid_food"], "any solid substance used as a source of nourishment", [
        hyper("physical_entity")
    ]),
    ("fruit", ["fruit"], "the ripened reproductive body of a seed plant", [hyper("food")]),
    ("orange_fruit", ["orange"], "round yellow to orange fruit of citrus trees", [
        hyper("fruit")
    ]),
    ("color", ["color", "colour"], "a visual attribute of things", [hyper("abstract_entity")]),
    ("orange_color", ["orange"], "orange color or pigment", [hyper("color")]),
    ("apple", ["apple"], "fruit with red or yellow or green skin and sweet flesh", [
        hyper("fruit")
    ]),
    ("tree", ["tree"], "a tall perennial woody plant having a main trunk", [hyper("object")]),
    ("vehicle", ["vehicle"], "a conveyance that transports people or objects", [
        hyper("object")
    ]),
    ("motor_vehicle", ["motor_vehicle", "automotive_vehicle"], "a self-propelled vehicle", [
        hyper("vehicle")
    ]),
    ("car", ["car", "auto", "automobile"], "a motor vehicle with four wheels", [
        hyper("motor_vehicle"),
        ("%p", "wheel", 0, 0),
    ]),
    ("wheel", ["wheel"], "a simple machine consisting of a circular frame", [hyper("object")]),
    ("sun", ["sun"], "the star that is the source of light and heat for the planets", [
        ("@i", "object", 0, 0)
    ]),
    ("time_period", ["time_period", "period"], "an amount of time", [
        hyper("abstract_entity")
    ]),
    ("day", ["day", "twenty-four_hours"], "time for Earth to make a complete rotation", [
        hyper("time_period"),
        ("%p", "daytime", 0, 0),
        ("%p", "night", 0, 0),
    ]),
    ("daytime", ["daytime", "day", "daylight"], "the time after sunrise and before sunset", [
        hyper("time_period"),
        ("!", "night", 1, 1),
    ]),
    ("night", ["night", "nighttime"], "the time after sunset and before sunrise", [
        hyper("time_period"),
        ("!", "daytime", 1, 1),
    ]),
]

TOY_IDS: Dict[str, SynsetId] = {
    key: SynsetId("n", 1000 + 100 * i) for i, (key, _, _, _) in enumerate(TOY_SYNSETS)
}


def _data_line(key: str, lemmas: Sequence[str], gloss: str, pointers: Sequence[Pointer]) -> str:
    words = " ".join(f"{lemma} 0" for lemma in lemmas)
    ptrs = " ".join(
        f"{symbol} {TOY_IDS[target].offset:08d} n {source:02x}{target_lemma:02x}"
        for symbol, target, source, target_lemma in pointers
    )
    head = f"{TOY_IDS[key].offset:08d} 03 n {len(lemmas):02x} {words} {len(pointers):03d}"
    return f"{head} {ptrs} | {gloss}" if ptrs else f"{head} | {gloss}"


def write_wordnet(directory: Path, synsets=TOY_SYNSETS) -> Path:
    """Write index.noun and data.noun in wndb format for the given synsets."""
    directory.mkdir(parents=True, exist_ok=True)
    senses: Dict[str, List[str]] = {}
    for key, lemmas, _, _ in synsets:
        for lemma in lemmas:
            senses.setdefault(lemma.lower(), []).append(key)
    data = LICENSE_HEADER + [_data_line(*synset) for synset in synsets]
    index = LICENSE_HEADER + [
        f"{lemma} n {len(keys)} 1 @ {len(keys)} 0 "
        + " ".join(f"{TOY_IDS[key].offset:08d}" for key in keys)
        for lemma, keys in sorted(senses.items())
    ]
    (directory / "data.noun").write_text("\n".join(data) + "\n", encoding="utf-8")
    (directory / "index.noun").write_text("\n".join(index) + "\n", encoding="utf-8")
    return directory


RandomHierarchy = Tuple[
    List[Tuple[str, Sequence[str], str, Sequence[Pointer]]], Dict[str, List[str]]
]


def random_hierarchy(seed: int) -> RandomHierarchy:
    """
    Build a random hypernym DAG over the toy synset keys.

    Every synset after the first gets one or two hypernyms among the earlier ones, some of them
    instance hypernyms, and half of the synsets share a polysemous lemma 'wordN'. Returns the
    synsets in write_wordnet form and the hypernym keys of every synset.
    """
    rng = np.random.default_rng(seed)
    keys = list(TOY_IDS)
    synsets = []
    parents: Dict[str, List[str]] = {}
    for i, key in enumerate(keys):
        chosen = rng.choice(i, size=min(i, int(rng.integers(1, 3))), replace=False) if i else []
        parents[key] = [keys[int(j)] for j in sorted(chosen)]
        pointers = [("@i" if rng.random() < 0.2 else "@", p, 0, 0) for p in parents[key]]
        lemmas = [key] + ([f"word{int(rng.integers(5))}"] if rng.random() < 0.5 else [])
        synsets.append((key, lemmas, f"random synset number {i}", pointers))
    return synsets, parents


def upward_distances(parents: Dict[str, List[str]], key: str) -> Dict[str, int]:
    """Breadth-first hypernym distances from `key`, itself included at 0."""
    distances = {key: 0}
    queue = deque([key])
    while queue:
        current = queue.popleft()
        for parent in parents[current]:
            if parent not in distances:
                distances[parent] = distances[current] + 1
                queue.append(parent)
    return distances


RESPONSES = [
    ("p1", "HYP-1", "HYP", "apple", 1, "fruit"),
    ("p2", "HYP-2", "HYP", "apple", 1, "fruit"),
    ("p3", "HYP-1", "HYP", "apple", 1, "food"),
    ("p1", "HYP-1", "HYP", "car", 1, "vehicle"),
    ("p2", "HYP-2", "HYP", "car", 1, "vehicle"),
    ("p3", "HYP-2", "HYP", "car", 1, "motor_vehicle"),
    ("p1", "HYP-1", "HYP", "car", 2, "wheel"),
    ("p1", "HYP-1", "HYP", "tree", 1, "plant"),
    ("p1", "HPO-1", "HPO", "fruit", 1, "apple"),
    ("p2", "HPO-2", "HPO", "fruit", 1, "apple"),
    ("p3", "HPO-1", "HPO", "fruit", 1, "orange"),
    ("p1", "MER-1", "MER", "car", 1, "wheel"),
    ("p2", "MER-1", "MER", "car", 1, "wheel"),
    ("p1", "HOL-1", "HOL", "wheel", 1, "car"),
    ("p2", "HOL-2", "HOL", "wheel", 1, "car"),
    ("p1", "ANT-1", "ANT", "night", 1, "day"),
    ("p2", "ANT-2", "ANT", "night", 1, "daytime"),
    ("p3", "ANT-1", "ANT", "night", 1, "daytime"),
    ("p1", "SYN-1", "SYN", "car", 1, "auto"),
    ("p2", "SYN-2", "SYN", "car", 1, "automobile"),
    ("p3", "SYN-1", "SYN", "car", 1, "auto"),
]

SEEDS = [
    ("apple", "HYP", "fruit"),
    ("car", "MER", "wheel"),
    ("night", "ANT", "daytime"),
    ("car", "SYN", "auto"),
    ("tree", "HYP", "plant"),
]

ALLOWLIST = ["apple", "fruit", "car", "wheel", "night", "daytime", "auto"]


def write_responses(path: Path, rows=RESPONSES) -> Path:
    lines = ["participant_id\ttemplate_id\trelation\ttarget\trank\trelatum"]
    lines += ["\t".join(str(value) for value in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def wordnet_dir(tmp_path_factory) -> Path:
    return write_wordnet(tmp_path_factory.mktemp("wordnet"))


@pytest.fixture(scope="session")
def graph(wordnet_dir) -> WordNetGraph:
    return parse_wordnet(wordnet_dir)


@pytest.fixture(scope="session")
def random_wordnet(
    tmp_path_factory,
) -> Tuple[WordNetGraph, Dict[str, List[str]], Dict[str, List[str]]]:
    synsets, parents = random_hierarchy(seed=20)
    graph = parse_wordnet(write_wordnet(tmp_path_factory.mktemp("random_wordnet"), synsets))
    senses: Dict[str, List[str]] = {}
    for key, lemmas, _, _ in synsets:
        for lemma in lemmas:
            senses.setdefault(lemma, []).append(key)
    return graph, parents, senses


@pytest.fixture
def inputs_dir(tmp_path) -> Path:
    write_responses(tmp_path / "responses.tsv")
    (tmp_path / "seeds.csv").write_text(
        "target,relation,relatum\n" + "\n".join(",".join(seed) for seed in SEEDS) + "\n",
        encoding="utf-8",
    )
    (tmp_path / "allowlist.txt").write_text("\n".join(ALLOWLIST) + "\n", encoding="utf-8")
    return tmp_path


@pytest.fixture(scope="session")
def records(tmp_path_factory) -> List[ElicitationRecord]:
    return ingest_responses(write_responses(tmp_path_factory.mktemp("responses") / "responses.tsv"))


@pytest.fixture(scope="session")
def classified(graph, records) -> List[ClassifiedTriplet]:
    return classify_all(graph, aggregate(records))


def by_key(classified: Sequence[ClassifiedTriplet]) -> Dict[Tuple[str, ...], ClassifiedTriplet]:
    return {(c.triplet.target, c.triplet.relation.value, c.triplet.relatum): c for c in classified}
