import rich_click as click

from typing import Optional

from wn_align.commands.options import effective_config, wordnet_dir_option
from wn_align.core import base_command, console
from wn_align.wn_store import coverage, parse_wordnet


COVERAGE_TABLE_COLS = [
    ("Synsets", "synsets"),
    ("Lemmas", "lemmas"),
    ("Hypernym", "hypernym"),
    ("Holonym", "holonym"),
    ("Meronym", "meronym"),
]


@click.command(name="parse-check")
@wordnet_dir_option
@base_command
def parse_check(
    config: Optional[str], format: str, wordnet_dir: Optional[str], debug: bool
) -> None:
    """Parse the WordNet noun files and report relation coverage."""
    run_config = effective_config(config, wordnet_dir=wordnet_dir)
    run_config.require("wordnet_dir")
    graph = parse_wordnet(run_config.wordnet_dir)
    shares = coverage(graph)
    summary = {
        "synsets": len(graph),
        "lemmas": len(graph.lemma_index),
        **{name: round(shares[name], 4) for name in ("hypernym", "holonym", "meronym")},
    }
    console.formatted_print(summary, format=format, table_cols=COVERAGE_TABLE_COLS)
