from wn_align.core.console import console
from wn_align.core.decorators import base_command
from wn_align.core.params import FilterParam, ScorerParam


__all__ = ["base_command", "FilterParam", "ScorerParam", "console"]
