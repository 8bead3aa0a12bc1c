"""Input validation helpers for the estimator-facing API."""

from __future__ import annotations

import numpy as np


def _reject_non_single_characters(arr: np.ndarray, name: str) -> None:
    lengths = np.char.str_len(arr)
    if (lengths != 1).any():
        bad = arr.ravel()[int(np.flatnonzero(lengths.ravel() != 1)[0])]
        raise ValueError(f"{name}: every value must be exactly one character, got {bad!r}")


def as_pattern_matrix(X, arity: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce a 2-D collection of single-character symbols to an array.

    Accepts lists of sequences (including strings treated as one symbol per
    character) and numpy arrays. Returns an (n_rows, arity) array of dtype
    ``<U1``; values longer than one character are rejected, never truncated.
    """
    if isinstance(X, np.ndarray) and X.ndim == 2:
        mat = X
    else:
        rows = [list(row) for row in X]
        if not rows:
            raise ValueError(f"{name} is empty")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError(f"{name}: rows have differing lengths {sorted(widths)}")
        mat = np.array(rows)
    if mat.size == 0:
        raise ValueError(f"{name} is empty")
    if mat.dtype.kind != "U":
        mat = mat.astype(str)
    if arity is not None and mat.shape[1] != arity:
        raise ValueError(f"{name}: expected arity {arity}, got {mat.shape[1]}")
    _reject_non_single_characters(mat, name)
    return mat.astype("<U1")


def as_label_vector(y, n_rows: int | None = None, name: str = "y") -> np.ndarray:
    """Coerce class labels to a 1-D ``<U1`` array."""
    arr = np.asarray(list(y) if not isinstance(y, np.ndarray) else y)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if arr.dtype.kind != "U":
        arr = arr.astype(str)
    if n_rows is not None and arr.shape[0] != n_rows:
        raise ValueError(f"{name}: expected {n_rows} labels, got {arr.shape[0]}")
    _reject_non_single_characters(arr, name)
    return arr.astype("<U1")


def as_bit_matrix(B, name: str = "bits") -> np.ndarray:
    """Coerce to a 2-D 0/1 integer array."""
    arr = np.asarray(B)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D or 2-D bit array")
    arr = arr.astype(np.int8)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 and 1")
    return arr


def check_rng(rng) -> np.random.Generator:
    """Normalize an int seed, Generator or None to a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
