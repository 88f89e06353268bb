from pathlib import Path
from typing import Iterable, Optional, Union

import rich_click as click


class WnAlignError(click.ClickException):
    """Base exception for wn-align errors."""

    def __init__(self, message: str) -> None:
        super().__init__(message)


class InternalError(WnAlignError):
    """Error raised when an unknown internal error occured."""


class ConfigError(WnAlignError):
    """Error raised when the run configuration is incomplete or invalid."""


class StageError(WnAlignError):
    """Error raised by the pipeline when one of its stages fails.

    Attributes:
        stage: Name of the failing stage.
        cause: The original error.
    """

    def __init__(self, stage: str, cause: Exception) -> None:
        message = cause.format_message() if isinstance(cause, click.ClickException) else str(cause)
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.cause = cause


class MissingFileError(WnAlignError):
    """Error raised when a required input file is absent."""

    def __init__(self, path: Union[str, Path]) -> None:
        super().__init__(f"Required file '{path}' does not exist.")
        self.path = Path(path)


class MalformedRecordError(WnAlignError):
    """Error raised when a WordNet database line does not follow the wndb grammar."""

    def __init__(self, path: Union[str, Path], line_number: int, reason: str) -> None:
        super().__init__(f"{path}:{line_number}: {reason}")
        self.path = Path(path)
        self.line_number = line_number


class DanglingPointerError(WnAlignError):
    """Error raised when a pointer or index entry targets an offset absent from the data file."""


class UnknownNameError(WnAlignError):
    """Error raised when a 'lemma.pos.NN' synset name cannot be resolved."""


class UnknownAnchorError(WnAlignError):
    """Error raised when the abstract/physical anchor synsets are not in the graph."""


class UnknownWordError(WnAlignError):
    """Error raised when a word has no noun synset."""


class BadTargetError(WnAlignError):
    """Error raised when a target word is empty or spans several tokens."""


class EmptyResultError(WnAlignError):
    """Error raised when no seed triplet survives filtering."""


class InfeasiblePartitionError(WnAlignError):
    """Error raised when task sentences cannot be split under the subset constraint."""


class MalformedRowError(WnAlignError):
    """Error raised when a response row violates the input format."""

    def __init__(self, row_number: int, reason: str) -> None:
        super().__init__(f"Row {row_number}: {reason}")
        self.row_number = row_number


class DuplicateRowError(WnAlignError):
    """Error raised when a response row repeats participant, template, target and rank."""

    def __init__(self, row_number: int, first_row: int) -> None:
        super().__init__(f"Row {row_number} duplicates row {first_row}.")
        self.row_number = row_number
        self.first_row = first_row


class WrongRelationError(WnAlignError):
    """Error raised when a taxonomic operation receives a non-taxonomic triplet."""


class DegenerateInputError(WnAlignError):
    """Error raised when a statistic is undefined for its input."""


class DegenerateTableError(WnAlignError):
    """Error raised when a contingency table has a single row or column."""


class MalformedScoreFileError(WnAlignError):
    """Error raised when an external similarity score file is invalid."""


class MissingPairError(WnAlignError):
    """Error raised when an external scorer has no score for a synset pair."""

    def __init__(self, names: Iterable[Optional[str]]) -> None:
        super().__init__(f"No external score for synset pair {tuple(names)}.")


class InsufficientPairsError(WnAlignError):
    """Error raised when the vocabulary does not hold enough unrelated word pairs."""
