"""Deterministic run reports: ``key: value`` text or ``key=value`` lines plus a JSON summary."""
import json
from fractions import Fraction

import numpy as np


def _plain(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    return v


def _text(v):
    v = _plain(v)
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ",".join(_text(x) for x in v)
    if isinstance(v, float):
        return repr(round(v, 6))
    return str(v)


class Report:
    def __init__(self):
        self.items = []

    def add(self, key, value):
        self.items.append((key, value))

    def update(self, prefix, mapping):
        for k, v in mapping.items():
            self.add(f"{prefix}{k}", v)

    def render(self, fmt="text"):
        if fmt == "text":
            width = max((len(k) for k, _ in self.items), default=0)
            return "".join(f"{k.ljust(width)} : {_text(v)}\n" for k, v in self.items)
        lines = [f"{k}={_text(v)}\n" for k, v in self.items]
        summary = {k: _plain(v) for k, v in self.items}
        lines.append("summary=" + json.dumps(summary, sort_keys=True, separators=(",", ":")) + "\n")
        return "".join(lines)
