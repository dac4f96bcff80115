"""Input coercion shared by the estimator and the command line."""

from __future__ import annotations

import numpy as np

from .graph import Graph
from .partial import PartialHermitianMatrix


def check_partial_matrix(X) -> PartialHermitianMatrix:
    """Coerce ``X`` to a :class:`PartialHermitianMatrix`.

    Accepts a PartialHermitianMatrix as is, or a square array-like where
    NaN marks an unspecified entry (the usual missing-value convention).
    """
    if isinstance(X, PartialHermitianMatrix):
        return X
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a nonempty square 2-D array, got shape {arr.shape}")
    if not (np.issubdtype(arr.dtype, np.number) or arr.dtype == object):
        raise TypeError(f"expected numeric entries, got dtype {arr.dtype}")
    arr = arr.astype(complex)
    finite = np.isfinite(arr) | np.isnan(arr)
    if not finite.all():
        raise ValueError("entries must be finite or NaN")
    return PartialHermitianMatrix.from_dense(arr)


def check_graph(g) -> Graph:
    """Accept a Graph, or ``(n, edges)``."""
    if isinstance(g, Graph):
        return g
    try:
        n, edges = g
    except (TypeError, ValueError):
        raise TypeError("expected a Graph or an (n, edges) pair") from None
    return Graph(int(n), edges)
