"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import os
from pathlib import Path
from typing import Mapping

import numpy as np

from .substitution import Substitution, SubstitutionError, load_substitution, parse_substitution


BUNDLED = ("rsl", "rs")


def check_substitution(X) -> Substitution:
    """Coerce ``X`` to a :class:`Substitution`.

    Accepts a ``Substitution``, a decoded mapping, JSON text, a path to a
    JSON file, or the name of a bundled example (``"rsl"``, ``"rs"``).
    """
    if isinstance(X, Substitution):
        return X
    if isinstance(X, Mapping):
        return parse_substitution(X)
    if isinstance(X, (os.PathLike, Path)):
        return load_substitution(X)
    if isinstance(X, str):
        if X.lstrip().startswith("{"):
            return parse_substitution(X)
        if X in BUNDLED and not os.path.exists(X):
            from importlib.resources import files

            return load_substitution(files("substitution_spectra") / "data" / f"{X}.json")
        return load_substitution(X)
    raise SubstitutionError(f"cannot interpret {type(X).__name__} as a substitution")


def check_sequences(X, *, min_length: int = 1) -> np.ndarray:
    """Validate a batch of real sequences as a 2-D float array (one per row)."""
    a = np.asarray(X, dtype=np.float64)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise ValueError(f"expected 1-D or 2-D input, got {a.ndim}-D")
    if a.shape[1] < min_length:
        raise ValueError(f"sequences need at least {min_length} terms, got {a.shape[1]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("sequences contain NaN or infinity")
    return a


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
