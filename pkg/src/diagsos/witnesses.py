"""Extremal witnesses: forms that are not SOS but whose prolongation is.

    f = (x1 - x2 + x3)^2/2 + x2^2/2 + (x1 + x3)^2/2               (n = 3)
    g = (x1 - x2 - x3 + x4)^2/2 + (x1 + x4)^2/2 + (x2 + x3)^2/2   (n = 4)

expanded in the left-lexicographic degree-2 basis.
"""

from __future__ import annotations

import json
from pathlib import Path

from .prolongation import CoeffVector

KNOWN = {
    "f": {"n": 3, "d": 2, "coeffs": ["1", "-1", "2", "1", "-1", "1"], "rank": 5},
    "g": {"n": 4, "d": 2, "coeffs": ["1", "-1", "-1", "2", "1", "2", "-1", "1", "-1", "1"], "rank": 8},
}


def load(path: str | Path | None = None) -> dict:
    """Built-in witnesses, or the same schema read from a JSON file."""
    if path is None:
        return {k: dict(v) for k, v in KNOWN.items()}
    return json.loads(Path(path).read_text())


def vector(name: str, store: dict | None = None) -> CoeffVector:
    store = store if store is not None else KNOWN
    if name not in store:
        raise KeyError(f"unknown witness {name!r}; choose from {sorted(store)}")
    w = store[name]
    return CoeffVector.of(w["n"], w["d"], w["coeffs"])
