"""
End-to-end run: parse WordNet, ingest responses, classify, analyze, score glosses, report.
"""

import logging
import time

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Set

import rich_click as click

from wn_align.core.configuration import RunConfig
from wn_align.elicitation import ingest_responses, load_allowlist
from wn_align.exceptions import StageError
from wn_align.gloss_sim import BaselineScorer, Scorer, load_external_scores, run_gloss_study
from wn_align.matcher import aggregate, classify_all, read_classified
from wn_align.plots import emit_plots
from wn_align.report import AnalysisReport, build_report
from wn_align.wn_store import parse_wordnet


logger = logging.getLogger(__name__)


@contextmanager
def stage(name: str) -> Iterator[None]:
    """
    Run a block as a named pipeline stage, timing it and tagging its errors.

    Raises:
        StageError: Wrapping any error raised inside the block.
    """
    logger.info("Stage %s started.", name)
    start = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except (click.ClickException, OSError, ValueError) as error:
        raise StageError(name, error) from error
    logger.info("Stage %s finished in %.2fs.", name, time.perf_counter() - start)


def make_scorer(config: RunConfig) -> Scorer:
    if config.scorer.kind == "external" and config.scorer.path is not None:
        return load_external_scores(config.scorer.path)
    return BaselineScorer()


def run_pipeline(config: RunConfig, with_plots: bool = True) -> AnalysisReport:
    """
    Run every stage and write the report under the configured output directory.

    The classified triplets are read from `classified_file` when set, otherwise computed
    from `responses_file`.

    Args:
        config: The run configuration.
        with_plots: Also render the figures.

    Returns:
        The report, gloss study included when `n_unrelated` is positive.

    Raises:
        ConfigError: If a required setting is missing.
        StageError: If a stage fails.
    """
    config.require("wordnet_dir")
    if config.classified_file is None:
        config.require("responses_file")

    with stage("parse_wordnet"):
        graph = parse_wordnet(config.wordnet_dir)
    allowlist: Optional[Set[str]] = None
    if config.allowlist_file is not None:
        with stage("load_allowlist"):
            allowlist = load_allowlist(config.allowlist_file)

    records = None
    if config.classified_file is not None:
        with stage("read_classified"):
            classified = read_classified(config.classified_file)
    else:
        with stage("ingest_responses"):
            records = ingest_responses(config.responses_file)
        with stage("aggregate"):
            triplets = aggregate(records)
        with stage("classify"):
            classified = classify_all(graph, triplets)

    with stage("analyze"):
        report = build_report(graph, classified, config, records)
    if config.n_unrelated > 0:
        with stage("gloss"):
            study = run_gloss_study(
                graph,
                classified,
                make_scorer(config),
                config.n_unrelated,
                config.seed,
                config.alpha,
                allowlist,
            )
            report = report.with_gloss(study)

    with stage("report"):
        files: List[Path] = report.write(config.output_dir)
    if with_plots:
        with stage("plots"):
            files += emit_plots(report, config.output_dir)
    logger.info("Run complete, %d files written.", len(files))
    return report
