import hashlib
import json
import math
import re

from typing import Any, List


_TOKEN_PATTERN = re.compile(r"[^0-9a-z]+")


def remove_string_delimiters(s: str) -> str:
    """Remove delimiters ' or " from a string.

    Args:
        s: A string.

    Returns:
        The same string without delimiters if it has some.
    """
    if len(s) >= 2 and (s[0] == s[-1] == '"' or s[0] == s[-1] == "'"):
        return s[1:-1]
    return s


def tokenize(text: str) -> List[str]:
    """Lowercase a text and split it on runs of non-alphanumeric characters.

    Args:
        text: The text to tokenize.

    Returns:
        The list of non-empty tokens, in text order.
    """
    return [token for token in _TOKEN_PATTERN.split(text.lower()) if token]


def stable_digest(obj: Any) -> str:
    """
    Compute a sha256 hex digest of the canonical JSON representation of an object.

    Args:
        obj: A JSON serializable object.

    Returns:
        The hexadecimal digest.
    """
    payload = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def round_float(value: Any, ndigits: int = 6) -> Any:
    """Round floats for serialization, mapping NaN to None and leaving other values untouched."""
    if isinstance(value, float):
        if math.isnan(value):
            return None
        return round(value, ndigits)
    return value
