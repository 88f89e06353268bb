import rich_click as click

from pathlib import Path
from typing import Optional

import pandas as pd

from wn_align.commands.options import allowlist_option, effective_config, out_option, seed_option
from wn_align.core import base_command, console
from wn_align.elicitation import (
    Relation,
    builtin_templates,
    extract_target_words,
    generate_tasks,
    load_allowlist,
    load_seed_triplets,
    partition_tasks,
)


TASKS_FILE = "tasks.csv"
TARGETS_FILE = "target_words.csv"
TASKS_TABLE_COLS = [("Relation", "relation"), ("Targets", "targets"), ("Sentences", "sentences")]


@click.command(name="generate-tasks")
@click.option(
    "--seeds",
    type=click.Path(dir_okay=False),
    default=None,
    help="CSV of seed triplets with columns target, relation, relatum.",
    metavar="FILE",
)
@allowlist_option
@click.option(
    "--n-subsets",
    type=click.IntRange(min=1),
    default=None,
    help="Number of task subsets.  [default: 276]",
    metavar="N",
)
@seed_option
@out_option
@base_command
def generate_tasks_command(
    config: Optional[str],
    format: str,
    seeds: Optional[str],
    allowlist: Optional[str],
    n_subsets: Optional[int],
    seed: Optional[int],
    out: Optional[str],
    debug: bool,
) -> None:
    """Derive target words from seed triplets and write the partitioned task sentences."""
    run_config = effective_config(
        config, seeds=seeds, allowlist=allowlist, n_subsets=n_subsets, seed=seed, out=out
    )
    run_config.require("seeds_file", "allowlist_file")
    targets = extract_target_words(
        load_seed_triplets(run_config.seeds_file), load_allowlist(run_config.allowlist_file)
    )
    sentences = generate_tasks(targets, builtin_templates())
    subsets = partition_tasks(sentences, run_config.n_subsets, run_config.seed)

    output_dir = Path(run_config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(
        [
            {
                "subset": index,
                "relation": s.relation.value,
                "template": s.template,
                "target": s.target,
                "sentence": s.rendered,
            }
            for index, subset in enumerate(subsets, start=1)
            for s in subset
        ],
        columns=["subset", "relation", "template", "target", "sentence"],
    ).to_csv(output_dir / TASKS_FILE, index=False, lineterminator="\n")
    pd.DataFrame(
        [{"relation": r.value, "target": word} for r in Relation for word in targets[r]],
        columns=["relation", "target"],
    ).to_csv(output_dir / TARGETS_FILE, index=False, lineterminator="\n")

    summary = [
        {
            "relation": r.value,
            "targets": len(targets[r]),
            "sentences": sum(s.relation == r for s in sentences),
        }
        for r in Relation
    ]
    console.formatted_print(summary, format=format, table_cols=TASKS_TABLE_COLS)
