from .parse_check import parse_check
from .generate_tasks import generate_tasks_command
from .classify import classify
from .analyze import analyze
from .gloss import gloss
from .report import report


__all__ = ["parse_check", "generate_tasks_command", "classify", "analyze", "gloss", "report"]
