import dataclasses
import json
import math

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd

from wn_align.core.configuration import ScorerSpec


class WnAlignJSONEncoder(json.JSONEncoder):
    """
    A custom JSON encoder for the domain objects printed by the commands and stored in reports.
    """

    def default(self, obj: object) -> Union[str, int, float, bool, None, Dict[str, Any], List[Any]]:
        """
        Override the `default` method to serialize non-serializable objects to JSON.

        Args:
            The object to be serialized.

        Returns:
            The object serialized.
        """
        if isinstance(obj, Enum):
            return obj.value
        elif isinstance(obj, (Path, ScorerSpec)):
            return str(obj)
        elif isinstance(obj, (set, frozenset)):
            return sorted(obj, key=str)
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            value = float(obj)
            return None if math.isnan(value) else value
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, pd.DataFrame):
            return json.loads(obj.to_json(orient="records"))
        elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
        else:
            return super().default(obj)
