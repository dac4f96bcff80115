"""Partial Hermitian matrices, partial positivity and clique inertia profiles."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np

from .exceptions import InvalidGraphError, ParseError
from .graph import DEFAULT_CLIQUE_CAP, Graph, clique_key, maximal_cliques
from .linalg import (Inertia, as_tolerance, check_hermitian, inertia, inertia_satisfies,
                     normalize_mode)


@dataclass(frozen=True)
class PartialHermitianMatrix:
    """Specified real diagonal plus complex values on the edges of ``pattern``.

    ``offdiag`` maps each edge ``(i, j)`` with ``i < j`` (1-based) to the
    value at row ``i``, column ``j``; the ``(j, i)`` entry is its conjugate.
    """

    pattern: Graph
    diag: tuple[float, ...]
    offdiag: Mapping[tuple[int, int], complex]

    def __init__(self, pattern: Graph, diag: Iterable[float], offdiag: Mapping):
        # + 0.0 folds signed zeros so that text round trips are bit exact
        diag = tuple(float(d) + 0.0 for d in diag)
        if len(diag) != pattern.n:
            raise ValueError(f"expected {pattern.n} diagonal entries, got {len(diag)}")
        if not all(math.isfinite(d) for d in diag):
            raise ValueError("diagonal entries must be finite reals")
        values = {}
        for (i, j), v in offdiag.items():
            v = complex(v)
            if i > j:
                i, j, v = j, i, v.conjugate()
            values[(i, j)] = complex(v.real + 0.0, v.imag + 0.0)
        if set(values) != set(pattern.edges):
            extra = sorted(set(values) - pattern.edges)
            missing = sorted(pattern.edges - set(values))
            raise InvalidGraphError(
                f"off-diagonal values must cover exactly the pattern edges "
                f"(extra {extra[:3]}, missing {missing[:3]})"
            )
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", dict(sorted(values.items())))

    @property
    def n(self) -> int:
        return self.pattern.n

    def __eq__(self, other):
        if not isinstance(other, PartialHermitianMatrix):
            return NotImplemented
        return (self.pattern == other.pattern and self.diag == other.diag
                and self.offdiag == other.offdiag)

    def __hash__(self):
        return hash((self.pattern, self.diag, tuple(self.offdiag.items())))

    @classmethod
    def from_dense(cls, m, pattern: Optional[Graph] = None) -> "PartialHermitianMatrix":
        """Build from a dense array.

        Without ``pattern``, NaN entries are unspecified. With ``pattern``,
        entries off the pattern are dropped whatever they hold.
        """
        m = np.asarray(m, dtype=complex)
        n = m.shape[0]
        if m.shape != (n, n) or n == 0:
            raise ValueError(f"expected a nonempty square array, got shape {m.shape}")
        if pattern is None:
            known = ~np.isnan(m)
            if not np.array_equal(known, known.T):
                raise ValueError("specified entries must be symmetric in position")
            if not known.diagonal().all():
                raise ValueError("every diagonal entry must be specified")
            pattern = Graph(n, [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n)
                                if known[i, j]])
        if np.any(np.abs(m.diagonal().imag) > 0):
            raise ValueError("diagonal entries must be real")
        off = {}
        for i, j in pattern.edges:
            v, w = m[i - 1, j - 1], m[j - 1, i - 1]
            if v != np.conj(w):
                raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not conjugate")
            off[(i, j)] = complex(v)
        return cls(pattern, m.diagonal().real, off)

    def to_dense(self, fill=np.nan) -> np.ndarray:
        m = np.full((self.n, self.n), fill, dtype=complex)
        np.fill_diagonal(m, self.diag)
        for (i, j), v in self.offdiag.items():
            m[i - 1, j - 1] = v
            m[j - 1, i - 1] = v.conjugate()
        return m

    def entry(self, i: int, j: int) -> Optional[complex]:
        if i == j:
            return complex(self.diag[i - 1])
        if i < j:
            return self.offdiag.get((i, j))
        v = self.offdiag.get((j, i))
        return None if v is None else v.conjugate()

    def submatrix(self, vertices: Iterable[int]) -> np.ndarray:
        """Dense principal submatrix on ``vertices`` (sorted); must be a clique."""
        vs = sorted(vertices)
        if not self.pattern.is_clique(vs):
            raise ValueError(f"{vs} is not a clique of the pattern")
        idx = np.array(vs) - 1
        return self.to_dense(0)[np.ix_(idx, idx)]

    def with_entry(self, i: int, j: int, value: complex) -> "PartialHermitianMatrix":
        """Specify one new off-diagonal pair, extending the pattern."""
        g = self.pattern.add_edge((i, j))
        off = dict(self.offdiag)
        off[(i, j)] = value
        return PartialHermitianMatrix(g, self.diag, off)

    def scaled(self, factor: float) -> "PartialHermitianMatrix":
        return PartialHermitianMatrix(self.pattern, [factor * d for d in self.diag],
                                      {e: factor * v for e, v in self.offdiag.items()})


def graph_of(a: PartialHermitianMatrix) -> Graph:
    return a.pattern


def mask(m, pattern: Graph) -> PartialHermitianMatrix:
    """Forget every entry of the full Hermitian ``m`` that is off ``pattern``.

    ``m`` is replaced by its Hermitian part first, which absorbs round-off.
    """
    return PartialHermitianMatrix.from_dense(check_hermitian(m), pattern)


# -- positivity and profiles ------------------------------------------------


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    mode: str
    failing_clique: Optional[tuple[int, ...]] = None
    failing_inertia: Optional[Inertia] = None

    def __bool__(self):
        return self.ok


def check_partial_positive(a: PartialHermitianMatrix, mode: str = "semidefinite", tol=None,
                           clique_cap: int = DEFAULT_CLIQUE_CAP) -> PositivityReport:
    """Check every maximal-clique submatrix; sub-cliques follow by inclusion."""
    mode = normalize_mode(mode)
    tol = as_tolerance(tol)
    for k in maximal_cliques(a.pattern, clique_cap):
        ine = inertia(a.submatrix(k), tol)
        if not inertia_satisfies(ine, mode):
            return PositivityReport(False, mode, clique_key(k), ine)
    return PositivityReport(True, mode)


@dataclass(frozen=True)
class CliqueInertiaProfile:
    """Inertia of ``A(K)`` for every maximal clique ``K``, plus the two maxima."""

    entries: tuple[tuple[tuple[int, ...], Inertia], ...]

    @property
    def i_minus(self) -> int:
        return max((ine.minus for _, ine in self.entries), default=0)

    @property
    def i_zero_minus(self) -> int:
        return max((ine.minus + ine.zero for _, ine in self.entries), default=0)

    def to_dict(self) -> dict:
        return {
            "cliques": [{"clique": list(k), **ine.to_dict()} for k, ine in self.entries],
            "i_minus": self.i_minus,
            "i_zero_minus": self.i_zero_minus,
        }


def clique_inertia_profile(a: PartialHermitianMatrix, tol=None,
                           clique_cap: int = DEFAULT_CLIQUE_CAP) -> CliqueInertiaProfile:
    tol = as_tolerance(tol)
    return CliqueInertiaProfile(tuple(
        (clique_key(k), inertia(a.submatrix(k), tol))
        for k in maximal_cliques(a.pattern, clique_cap)
    ))


# -- text format ------------------------------------------------------------

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_UREAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(rf"^({_REAL})(?:([+-])({_UREAL})i)?$")


def parse_entry(token: str) -> Optional[complex]:
    """``?`` -> None; ``a``, ``a+bi``, ``a-bi`` -> complex. Raises ValueError."""
    if token == "?":
        return None
    mt = _TOKEN.match(token)
    if not mt:
        raise ValueError(f"malformed entry {token!r}")
    re_part = float(mt.group(1))
    if mt.group(2) is None:
        return complex(re_part, 0.0)
    im = float(mt.group(3))
    return complex(re_part, -im if mt.group(2) == "-" else im)


def format_entry(v: Optional[complex]) -> str:
    if v is None:
        return "?"
    re_s = repr(float(v.real) + 0.0)
    if v.imag == 0:
        return re_s
    sign = "-" if v.imag < 0 else "+"
    return f"{re_s}{sign}{repr(abs(v.imag))}i"


def parse_partial_matrix(text: str) -> PartialHermitianMatrix:
    """Parse ``n`` followed by ``n`` rows of ``n`` tokens.

    Errors carry 1-based line and column (column counts tokens).
    """
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file", line=1)
    lineno, header = lines[0]
    try:
        n = int(header.strip())
    except ValueError:
        raise ParseError(f"expected the dimension, got {header.strip()!r}", line=lineno,
                         column=1) from None
    if n < 1:
        raise ParseError("dimension must be positive", line=lineno, column=1)
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", line=lineno)
    vals: list[list[Optional[complex]]] = []
    linenos = []
    for lineno, ln in rows:
        toks = ln.split()
        if len(toks) != n:
            raise ParseError(f"expected {n} entries, found {len(toks)}", line=lineno)
        row = []
        for col, tok in enumerate(toks, start=1):
            try:
                row.append(parse_entry(tok))
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, column=col) from None
            if row[-1] is not None and not (math.isfinite(row[-1].real)
                                            and math.isfinite(row[-1].imag)):
                raise ParseError(f"non-finite entry {tok!r}", line=lineno, column=col)
        vals.append(row)
        linenos.append(lineno)
    for i in range(n):
        d = vals[i][i]
        if d is None:
            raise ParseError(f"diagonal entry ({i+1},{i+1}) must be specified",
                             line=linenos[i], column=i + 1)
        if d.imag != 0:
            raise ParseError(f"diagonal entry ({i+1},{i+1}) must be real",
                             line=linenos[i], column=i + 1)
    edges, off = [], {}
    for i in range(n):
        for j in range(i + 1, n):
            u, l = vals[i][j], vals[j][i]
            if (u is None) != (l is None) or (u is not None and u != l.conjugate()):
                raise ParseError(
                    f"entries ({i+1},{j+1}) and ({j+1},{i+1}) are not Hermitian-consistent",
                    line=linenos[j], column=i + 1)
            if u is not None:
                edges.append((i + 1, j + 1))
                off[(i + 1, j + 1)] = u
    return PartialHermitianMatrix(Graph(n, edges), [vals[i][i].real for i in range(n)], off)


def format_partial_matrix(a: PartialHermitianMatrix) -> str:
    out = [str(a.n)]
    for i in range(1, a.n + 1):
        out.append(" ".join(format_entry(a.entry(i, j)) for j in range(1, a.n + 1)))
    return "\n".join(out) + "\n"


def format_dense(m) -> str:
    """Fully specified Hermitian matrix in the partial-matrix text format."""
    m = np.asarray(m, dtype=complex)
    out = [str(m.shape[0])]
    for i, row in enumerate(m):
        toks = []
        for j, v in enumerate(row):
            toks.append(format_entry(complex(v.real, 0.0) if i == j else complex(v)))
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"
