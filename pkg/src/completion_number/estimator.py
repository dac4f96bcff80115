"""scikit-learn style front end: fit plans a schedule, transform fills the gaps.

The completer behaves like an imputer for Hermitian matrices: NaN marks an
unspecified entry, ``fit`` learns the insertion schedule for that sparsity
pattern, and ``transform`` returns a Hermitian completion whose number of
negative eigenvalues is bounded by ``upper_bound_``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .engine import execute_schedule, plan_schedule
from .exceptions import CompletionError
from .graph import DEFAULT_CLIQUE_CAP
from .linalg import ABS_TOL, REL_TOL, Tolerance
from .partial import check_partial_positive
from .validation import check_partial_matrix


class HermitianCompleter(TransformerMixin, BaseEstimator):
    """Complete partial positive Hermitian matrices with few negative eigenvalues.

    Parameters
    ----------
    strategy : str
        Schedule search: ``"auto"``, ``"exhaustive"``, ``"greedy"`` or
        ``"beam=N"``.
    rule : str
        Ledger rule, ``"distance"`` (default) or ``"subset"``.
    abs_tol, rel_tol : float
        Zero-eigenvalue threshold ``abs_tol + rel_tol * gershgorin``.
    clique_cap : int
        Refuse patterns with more maximal cliques than this.
    require_certified : bool
        Raise from ``transform`` if any completion step misses its bound.

    Attributes
    ----------
    pattern_ : Graph
    schedule_ : Schedule
    upper_bound_ : int
    n_features_in_ : int
    """

    def __init__(self, strategy="auto", rule="distance", abs_tol=ABS_TOL, rel_tol=REL_TOL,
                 clique_cap=DEFAULT_CLIQUE_CAP, require_certified=False):
        self.strategy = strategy
        self.rule = rule
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.clique_cap = clique_cap
        self.require_certified = require_certified

    def _tol(self):
        return Tolerance(self.abs_tol, self.rel_tol)

    def fit(self, X, y=None):
        a = check_partial_matrix(X)
        report = check_partial_positive(a, "semidefinite", self._tol(), self.clique_cap)
        if not report.ok:
            raise ValueError(f"input is not partial positive (clique {list(report.failing_clique)})")
        self.pattern_ = a.pattern
        self.schedule_ = plan_schedule(a.pattern, self.strategy, self.clique_cap, self.rule)
        self.upper_bound_ = self.schedule_.final_bound
        self.n_features_in_ = a.n
        return self

    def transform(self, X):
        if not hasattr(self, "schedule_"):
            raise NotFittedError("HermitianCompleter is not fitted yet; call fit first")
        a = check_partial_matrix(X)
        if a.pattern != self.pattern_:
            raise ValueError("X has a different sparsity pattern than the one seen in fit")
        result = execute_schedule(a, self.schedule_, self._tol(), self.clique_cap)
        if self.require_certified and not result.certified:
            raise CompletionError("a completion step did not reach its predicted bound")
        m = result.matrix
        return m.real.copy() if not np.any(m.imag) else m

    def inertia(self, X):
        """Inertia of the completion of ``X``."""
        from .linalg import inertia
        return inertia(self.transform(X), self._tol())
