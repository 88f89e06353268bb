"""
Analysis report: every table of a run, written as CSV files and one JSON document.
"""

import json
import logging

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from wn_align import __version__
from wn_align.core.configuration import RunConfig
from wn_align.core.serialize import WnAlignJSONEncoder
from wn_align.elicitation import ElicitationRecord, Relation, template_checksum
from wn_align.gloss_sim import GlossReport
from wn_align.matcher import ClassifiedTriplet, classified_to_frame
from wn_align.metrics import (
    abstract_physical_split,
    distance_points,
    distance_summary,
    frequency_of,
    match_rate_curve,
    mismatch_matrix,
    polysemy_comparison,
    status_distribution,
    template_association,
    threshold_grid,
    triplet_counts,
)
from wn_align.utils import round_float
from wn_align.wn_store import WordNetGraph


logger = logging.getLogger(__name__)

DECIMALS = 6
FLOAT_FORMAT = "%.6f"
REPORT_FILE = "report.json"
HAPAX_READING = "a hapax is a triplet elicited exactly once over all participants and templates"


def _rounded(frame: pd.DataFrame) -> pd.DataFrame:
    return frame.round(DECIMALS).reset_index(drop=True)


def _records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    return [
        {key: round_float(value, DECIMALS) for key, value in row.items()}
        for row in json.loads(json.dumps(frame.to_dict(orient="records"), cls=WnAlignJSONEncoder))
    ]


@dataclass(frozen=True)
class AnalysisReport:
    """
    Tables produced by a run.

    Attributes:
        table1: Per-relation target words, templates, triplets and hapaxes.
        status_dist: Match status shares, over all triplets and split by hapax.
        frequency: Elicitation frequency of every analysed triplet.
        curves: Match rate against the frequency threshold, per relation.
        matrix: Mismatch likelihoods over all analysed triplets.
        matrix_abstract: Mismatch likelihoods over abstract word pairs.
        matrix_physical: Mismatch likelihoods over physical word pairs.
        association: Mean template association per relation.
        distance_corr: Indirect match recovery and distance correlation per relation.
        distances: Distance and frequency of every directly or indirectly matched triplet.
        polysemy: Synset counts of abstract and physical target words with their test.
        classified: The classified triplets.
        gloss: Gloss similarity group means, when the gloss study ran.
        tests: Gloss similarity Mann-Whitney tests, when the gloss study ran.
        provenance: Configuration digest, tool version, template checksum and hapax counts.
    """

    table1: pd.DataFrame
    status_dist: pd.DataFrame
    frequency: pd.DataFrame
    curves: Dict[Relation, pd.DataFrame]
    matrix: pd.DataFrame
    matrix_abstract: pd.DataFrame
    matrix_physical: pd.DataFrame
    association: pd.DataFrame
    distance_corr: pd.DataFrame
    distances: pd.DataFrame
    polysemy: pd.DataFrame
    classified: pd.DataFrame
    provenance: Dict[str, Any]
    gloss: Optional[pd.DataFrame] = None
    tests: Optional[pd.DataFrame] = None

    def tables(self) -> Dict[str, pd.DataFrame]:
        """Every table keyed by its CSV file name."""
        tables = {
            "table1.csv": self.table1,
            "status_distribution.csv": self.status_dist,
            "frequency.csv": self.frequency,
            **{f"curve_{r.value}.csv": frame for r, frame in self.curves.items()},
            "mismatch_matrix.csv": self.matrix,
            "mismatch_matrix_abstract.csv": self.matrix_abstract,
            "mismatch_matrix_physical.csv": self.matrix_physical,
            "association.csv": self.association,
            "distance_corr.csv": self.distance_corr,
            "distances.csv": self.distances,
            "polysemy.csv": self.polysemy,
            "classified.csv": self.classified,
        }
        if self.gloss is not None:
            tables["gloss_sim.csv"] = self.gloss
        if self.tests is not None:
            tables["tests.csv"] = self.tests
        return tables

    def to_json(self) -> str:
        document = {
            "provenance": self.provenance,
            "tables": {Path(name).stem: _records(frame) for name, frame in self.tables().items()},
        }
        return json.dumps(document, cls=WnAlignJSONEncoder, indent=2, sort_keys=True) + "\n"

    def with_gloss(self, study: GlossReport) -> "AnalysisReport":
        provenance = {**self.provenance, "scorer": study.scorer_id}
        return replace(
            self,
            gloss=_rounded(study.groups_frame()),
            tests=_rounded(study.tests_frame()),
            provenance=provenance,
        )

    def write(self, output_dir: Union[str, Path]) -> List[Path]:
        """
        Write every table as CSV and the whole report as report.json.

        Returns:
            The written files, report.json last.
        """
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, frame in self.tables().items():
            path = output_dir / name
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
            written.append(path)
        path = output_dir / REPORT_FILE
        path.write_text(self.to_json(), encoding="utf-8")
        written.append(path)
        logger.info("Wrote %d report files to %s.", len(written), output_dir)
        return written


def build_report(
    graph: WordNetGraph,
    classified: Sequence[ClassifiedTriplet],
    config: RunConfig,
    records: Optional[Sequence[ElicitationRecord]] = None,
) -> AnalysisReport:
    """
    Compute every analysis table from classified triplets.

    Template association needs the raw records and is left empty without them.

    Args:
        graph: The WordNet graph.
        classified: Classified triplets.
        config: The run configuration.
        records: Raw responses, when available.

    Returns:
        The report, without gloss study tables.
    """
    freq = frequency_of(classified)
    grid = threshold_grid(config.threshold_step)
    curves = {
        relation: _rounded(
            pd.DataFrame(
                match_rate_curve(classified, freq, relation, grid),
                columns=["threshold", "match_rate", "n_retained"],
            )
        )
        for relation in Relation
    }
    split = abstract_physical_split(graph, classified, freq)
    polysemy = polysemy_comparison(graph, classified, config.alpha)
    association = pd.DataFrame(
        [
            {
                "relation": scores.relation.value,
                "gjsd_mean": scores.gjsd_mean,
                "cramers_v_mean": scores.cramers_v_mean,
                "n_targets": scores.n_targets,
            }
            for scores in (template_association(records) if records is not None else [])
        ],
        columns=["relation", "gjsd_mean", "cramers_v_mean", "n_targets"],
    )
    kept = [c for c in classified if not c.status.is_excluded]
    hapaxes = sum(c.triplet.is_hapax for c in kept)
    provenance = {
        "tool_version": __version__,
        "config": config.to_dict(),
        "config_digest": config.digest(),
        "template_checksum": template_checksum(),
        "hapax_reading": HAPAX_READING,
        "hapax_triplets": hapaxes,
        "non_hapax_triplets": len(kept) - hapaxes,
        "excluded_triplets": len(classified) - len(kept),
        "records": len(records) if records is not None else None,
    }
    return AnalysisReport(
        table1=_rounded(triplet_counts(classified, records)),
        status_dist=_rounded(
            pd.concat(
                [status_distribution(classified, hapax) for hapax in (None, True, False)],
                ignore_index=True,
            )
        ),
        frequency=_rounded(freq.to_frame()),
        curves=curves,
        matrix=_rounded(mismatch_matrix(classified, freq).to_frame()),
        matrix_abstract=_rounded(split.abstract_matrix.to_frame()),
        matrix_physical=_rounded(split.physical_matrix.to_frame()),
        association=_rounded(association),
        distance_corr=_rounded(distance_summary(classified, freq)),
        distances=_rounded(distance_points(classified, freq)),
        polysemy=_rounded(
            pd.DataFrame(
                [
                    {
                        "abstract_mean": polysemy.abstract_mean,
                        "physical_mean": polysemy.physical_mean,
                        "n_abstract": polysemy.n_abstract,
                        "n_physical": polysemy.n_physical,
                        "u": polysemy.test.u if polysemy.test else None,
                        "p_value": polysemy.test.p_value if polysemy.test else None,
                        "reject": polysemy.test.reject if polysemy.test else None,
                    }
                ]
            )
        ),
        classified=classified_to_frame(classified),
        provenance=provenance,
    )
