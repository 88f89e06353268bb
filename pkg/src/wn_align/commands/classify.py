import rich_click as click

from collections import Counter
from pathlib import Path
from typing import Optional

from wn_align.commands.options import (
    effective_config,
    filter_option,
    out_option,
    responses_option,
    wordnet_dir_option,
)
from wn_align.core import base_command, console
from wn_align.core.filters import TripletFilter
from wn_align.elicitation import Relation, ingest_responses
from wn_align.matcher import StatusKind, aggregate, classify_all, write_classified
from wn_align.wn_store import parse_wordnet


CLASSIFIED_FILE = "classified.csv"
STATUS_TABLE_COLS = [("Relation", "relation")] + [
    (kind.value.capitalize(), kind.value) for kind in StatusKind
]


@click.command(name="classify")
@wordnet_dir_option
@responses_option
@filter_option
@out_option
@base_command
def classify(
    config: Optional[str],
    format: str,
    wordnet_dir: Optional[str],
    responses: Optional[str],
    filter_with: Optional[TripletFilter],
    out: Optional[str],
    debug: bool,
) -> None:
    """Aggregate the responses into triplets and classify them against WordNet."""
    run_config = effective_config(config, wordnet_dir=wordnet_dir, responses=responses, out=out)
    run_config.require("wordnet_dir", "responses_file")
    graph = parse_wordnet(run_config.wordnet_dir)
    classified = classify_all(graph, aggregate(ingest_responses(run_config.responses_file)))
    if filter_with is not None:
        classified = filter_with.apply(classified)
    write_classified(Path(run_config.output_dir) / CLASSIFIED_FILE, classified)

    counts = Counter((c.triplet.relation, c.status.kind) for c in classified)
    summary = [
        {"relation": r.value, **{k.value: counts[(r, k)] for k in StatusKind}} for r in Relation
    ]
    console.formatted_print(summary, format=format, table_cols=STATUS_TABLE_COLS)
