"""Edge-insertion schedules with interlacing bound ledgers, and their execution.

A schedule inserts the non-edges of a graph one at a time until the graph is
complete. Each insertion of ``{i, j}`` creates new maximal cliques, all of
which contain ``i`` and ``j``. One of them is *designated*: its single
unknown entry is chosen so that its negative count is the larger of the
counts of its two parents ``K - {i}`` and ``K - {j}``. Every other new
clique ``K`` can only be bounded by one more than the better parent, since
deleting one row and column moves each inertia count by at most one.

Bounds of other cliques follow from the ledger by the same interlacing
argument (see :class:`BoundLedger`). The bound of the complete vertex set at the end is an
upper bound on the number of negative eigenvalues that some completion of
any partial positive matrix with that graph attains.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import NotPartialPositiveError, ParseError, ScheduleError
from .graph import (DEFAULT_CLIQUE_CAP, Graph, clique_key, disjoint_gadget_packing,
                    is_chordal, maximal_cliques, new_maximal_cliques_after_edge)
from .linalg import (Inertia, SingleUnknownProblem, as_tolerance, inertia,
                     single_unknown_completion)
from .partial import PartialHermitianMatrix, check_partial_positive

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 8
DEFAULT_BEAM_WIDTH = 64

RULES = ("distance", "subset")


class BoundLedger:
    """Upper bounds on achievable negative counts, keyed by maximal clique.

    Under the ``"subset"`` rule the bound of an arbitrary clique ``C`` is the
    least ledger value of a maximal clique containing it. The default
    ``"distance"`` rule also charges one per vertex of ``C`` outside ``K``,
    i.e. ``min_K ledger[K] + |C - K|``: deleting and appending single rows
    moves the negative count by at most one each time. For ``C`` inside some
    ``K`` the two rules agree.
    """

    __slots__ = ("_bounds", "_key", "rule")

    def __init__(self, bounds, rule: str = "distance"):
        if rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}")
        self._bounds = {frozenset(k): int(v) for k, v in dict(bounds).items()}
        self._key = None
        self.rule = rule

    @classmethod
    def zeros(cls, cliques: Iterable, rule: str = "distance") -> "BoundLedger":
        return cls({frozenset(k): 0 for k in cliques}, rule)

    def __getitem__(self, clique) -> int:
        return self._bounds[frozenset(clique)]

    def __contains__(self, clique) -> bool:
        return frozenset(clique) in self._bounds

    def __len__(self) -> int:
        return len(self._bounds)

    def __iter__(self):
        return iter(sorted(self._bounds, key=clique_key))

    def items(self):
        return [(k, self._bounds[k]) for k in self]

    def bound(self, clique) -> int:
        c = frozenset(clique)
        if self.rule == "distance":
            return min(v + len(c - k) for k, v in self._bounds.items())
        vals = [v for k, v in self._bounds.items() if c <= k]
        if not vals:
            raise KeyError(f"{sorted(c)} is not contained in any ledger clique")
        return min(vals)

    def max(self) -> int:
        return max(self._bounds.values(), default=0)

    def total(self) -> int:
        return sum(self._bounds.values())

    def key(self):
        if self._key is None:
            self._key = frozenset(self._bounds.items())
        return self._key

    def __eq__(self, other):
        return (isinstance(other, BoundLedger) and self.rule == other.rule
                and self._bounds == other._bounds)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = ", ".join(f"{sorted(k)}: {v}" for k, v in self.items())
        return f"BoundLedger({{{body}}}, rule={self.rule!r})"


def _norm(e):
    i, j = e
    return (i, j) if i < j else (j, i)


def propagate_bounds(ledger: BoundLedger, edge, designated, new_cliques
                     ) -> tuple[BoundLedger, tuple[tuple[tuple[int, ...], int], ...]]:
    """Ledger after inserting ``edge`` with ``designated`` as the solved clique.

    ``new_cliques`` must be the output of
    :func:`~completion_number.graph.new_maximal_cliques_after_edge`. Returns
    the new ledger and the ``(clique, bound)`` pairs of the new cliques in
    canonical order.
    """
    i, j = _norm(edge)
    k0 = frozenset(designated)
    if not {i, j} <= k0:
        raise ScheduleError(f"designated clique {sorted(k0)} misses inserted edge {i} {j}")
    new = [frozenset(k) for k in new_cliques]
    if k0 not in new:
        raise ScheduleError(f"designated clique {sorted(k0)} is not a new maximal clique")
    predicted = []
    for k in new:
        bi, bj = ledger.bound(k - {i}), ledger.bound(k - {j})
        predicted.append((k, max(bi, bj) if k == k0 else min(bi, bj) + 1))
    bounds = {k: v for k, v in ledger._bounds.items() if not any(k <= c for c in new)}
    bounds.update(predicted)
    if ledger.rule == "distance":
        # one pass suffices: |K - K''| <= |K - K'| + |K' - K''|
        bounds = {k: min(v, min(w + len(k - c) for c, w in bounds.items()))
                  for k, v in bounds.items()}
        predicted = [(k, bounds[k]) for k, _ in predicted]
    out = BoundLedger.__new__(BoundLedger)
    out._bounds = bounds
    out._key = None
    out.rule = ledger.rule
    preds = sorted(predicted, key=lambda kv: clique_key(kv[0]))
    return out, tuple((clique_key(k), v) for k, v in preds)


@dataclass(frozen=True)
class ScheduleStep:
    edge: tuple[int, int]
    designated: tuple[int, ...]
    new_cliques: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def predicted_bound(self) -> int:
        return dict(self.new_cliques)[self.designated]

    def to_dict(self) -> dict:
        return {"edge": list(self.edge), "designated": list(self.designated),
                "new_cliques": [{"clique": list(k), "bound": b} for k, b in self.new_cliques]}


@dataclass(frozen=True)
class Schedule:
    n: int
    steps: tuple[ScheduleStep, ...]
    final_bound: int
    strategy: str = field(default="", compare=False)
    rule: str = "distance"

    def start_graph(self) -> Graph:
        return Graph.from_non_edges(self.n, [s.edge for s in self.steps])

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [s.edge for s in self.steps]

    def to_dict(self) -> dict:
        return {"n": self.n, "final_bound": self.final_bound, "strategy": self.strategy,
                "rule": self.rule, "steps": [s.to_dict() for s in self.steps]}


# -- search ------------------------------------------------------------------


class _Planner:
    """Shared move generation with cached clique computations."""

    def __init__(self, g: Graph, clique_cap: int, rule: str):
        self.g = g
        self.cap = clique_cap
        self.rule = rule
        self._new = {}

    def start(self) -> BoundLedger:
        return BoundLedger.zeros(maximal_cliques(self.g, self.cap), self.rule)

    def new_cliques(self, edges: frozenset, e):
        key = (edges, e)
        hit = self._new.get(key)
        if hit is None:
            hit = tuple(new_maximal_cliques_after_edge(Graph(self.g.n, edges), e, self.cap))
            self._new[key] = hit
        return hit

    def moves(self, edges: frozenset, ledger: BoundLedger, remaining: Sequence):
        """All ``(edge, designated, new ledger, step)`` in canonical order."""
        for e in remaining:
            new = self.new_cliques(edges, e)
            for k0 in new:
                led, preds = propagate_bounds(ledger, e, k0, new)
                yield e, ledger_step(e, k0, preds), led


def ledger_step(e, k0, preds) -> ScheduleStep:
    return ScheduleStep(tuple(e), clique_key(k0), preds)


def _final_bound(ledger: BoundLedger) -> int:
    return ledger.max()


def _chordal_move(pl: _Planner, edges: frozenset, ledger: BoundLedger, remaining):
    """First insertion, in index order, that keeps a chordal graph chordal.

    In a chordal graph the common neighborhood of a non-edge is a clique (two
    nonadjacent common neighbors would close an induced 4-cycle), so the
    insertion creates a single new clique whose bound is the max of its
    parents, and the ledger maximum cannot grow. Returns None when the graph
    is not chordal.
    """
    g = Graph(pl.g.n, edges)
    if not is_chordal(g):
        return None
    for e in remaining:
        if is_chordal(g.add_edge(e)):
            (k0,) = pl.new_cliques(edges, e)
            led, preds = propagate_bounds(ledger, e, k0, (k0,))
            return e, ledger_step(e, k0, preds), led
    return None


def _greedy(pl: _Planner):
    edges, ledger = pl.g.edges, pl.start()
    remaining = list(pl.g.non_edges)
    steps = []
    while remaining:
        move = _chordal_move(pl, edges, ledger, remaining)
        if move is None:
            best = None
            for e, step, led in pl.moves(edges, ledger, remaining):
                key = (led.max(), e, step.designated)
                if best is None or key < best[0]:
                    best = (key, (e, step, led))
            move = best[1]
        e, step, ledger = move
        steps.append(step)
        remaining.remove(e)
        edges = edges | {e}
    return steps, _final_bound(ledger)


def _beam(pl: _Planner, width: int):
    beam = [((), pl.g.edges, pl.start(), tuple(pl.g.non_edges))]
    for _ in range(len(pl.g.non_edges)):
        pool = {}
        for steps, edges, ledger, remaining in beam:
            move = _chordal_move(pl, edges, ledger, remaining)
            moves = [move] if move is not None else pl.moves(edges, ledger, remaining)
            for e, step, led in moves:
                new_edges = edges | {e}
                sig = (new_edges, led.key())
                path = steps + (step,)
                rank = (led.max(), led.total(), _path_key(path))
                if sig not in pool or rank < pool[sig][0]:
                    pool[sig] = (rank, (path, new_edges, led,
                                        tuple(x for x in remaining if x != e)))
        ranked = sorted(pool.values(), key=lambda t: t[0])
        beam = [state for _, state in ranked[:width]]
    steps, _, ledger, _ = beam[0]
    return list(steps), _final_bound(ledger)


def _path_key(path):
    return tuple((s.edge, s.designated) for s in path)


def _exhaustive(pl: _Planner, lower: int = 0):
    """Minimum final bound over all orders and designations (memoized DFS).

    Stops early once a schedule meets ``lower``, a proven lower bound on the
    completion number (which no valid ledger can undercut).
    """
    memo = {}
    found_lower = False

    def solve(edges, ledger, remaining):
        nonlocal found_lower
        if not remaining:
            return _final_bound(ledger), ()
        sig = (edges, ledger.key())
        if sig in memo:
            return memo[sig]
        best = None
        children = sorted(pl.moves(edges, ledger, remaining),
                          key=lambda m: (m[2].max(), m[0], m[1].designated))
        for e, step, led in children:
            value, tail = solve(edges | {e}, led, tuple(x for x in remaining if x != e))
            if best is None or value < best[0]:
                best = (value, (step,) + tail)
            if found_lower or value <= lower:
                found_lower = True
                break
        memo[sig] = best
        return best

    value, steps = solve(pl.g.edges, pl.start(), tuple(pl.g.non_edges))
    return list(steps), value


def parse_strategy(strategy) -> tuple[str, int]:
    """``'exhaustive'``, ``'greedy'``, ``'auto'``, ``'beam'``, ``'beam=N'`` or ``('beam', N)``."""
    if isinstance(strategy, tuple):
        name, width = strategy
        return name, int(width)
    s = str(strategy).strip().lower()
    if s.startswith("beam"):
        rest = s[4:].lstrip("=(").rstrip(")")
        width = int(rest) if rest else DEFAULT_BEAM_WIDTH
        if width < 1:
            raise ValueError("beam width must be positive")
        return "beam", width
    if s not in ("exhaustive", "greedy", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    return s, 0


def plan_schedule(g: Graph, strategy="auto", clique_cap: int = DEFAULT_CLIQUE_CAP,
                  rule: str = "distance") -> Schedule:
    """Plan an insertion schedule minimizing the final ledger bound.

    ``auto`` runs the exhaustive search when there are at most eight
    non-edges; otherwise it runs greedy, and falls back to ``beam=64`` unless
    greedy already matches the gadget-packing lower bound.
    """
    name, width = parse_strategy(strategy)
    pl = _Planner(g, clique_cap, rule)
    if name == "auto":
        if len(g.non_edges) <= EXHAUSTIVE_LIMIT:
            name = "exhaustive"
        else:
            lower = len(disjoint_gadget_packing(g))
            steps, bound = _greedy(pl)
            used = "greedy"
            if bound > lower:
                b_steps, b_bound = _beam(pl, DEFAULT_BEAM_WIDTH)
                if b_bound < bound:
                    steps, bound, used = b_steps, b_bound, f"beam={DEFAULT_BEAM_WIDTH}"
            return Schedule(g.n, tuple(steps), bound, f"auto:{used}", rule)
    if name == "exhaustive":
        lower = len(disjoint_gadget_packing(g))
        steps, bound = _exhaustive(pl, lower)
        label = "exhaustive"
    elif name == "greedy":
        steps, bound = _greedy(pl)
        label = "greedy"
    else:
        steps, bound = _beam(pl, width)
        label = f"beam={width}"
    return Schedule(g.n, tuple(steps), bound, label, rule)


def completion_number_upper_bound(g: Graph, strategy="auto",
                                  clique_cap: int = DEFAULT_CLIQUE_CAP,
                                  rule: str = "distance") -> int:
    return plan_schedule(g, strategy, clique_cap, rule).final_bound


def replay_schedule(g: Graph, steps: Iterable, clique_cap: int = DEFAULT_CLIQUE_CAP,
                    rule: str = "distance") -> Schedule:
    """Rebuild a schedule from ``(edge, designated)`` pairs, recomputing the ledger.

    Raises ScheduleError unless the edges are exactly the non-edges of ``g``.
    """
    ledger = BoundLedger.zeros(maximal_cliques(g, clique_cap), rule)
    cur = g
    out = []
    for edge, designated in steps:
        e = _norm(edge)
        if cur.has_edge(*e):
            raise ScheduleError(f"edge {e[0]} {e[1]} is already present")
        new = new_maximal_cliques_after_edge(cur, e, clique_cap)
        ledger, preds = propagate_bounds(ledger, e, designated, new)
        out.append(ledger_step(e, designated, preds))
        cur = cur.add_edge(e)
    if not cur.is_complete():
        raise ScheduleError("schedule leaves non-edges uninserted")
    return Schedule(g.n, tuple(out), _final_bound(ledger), "replayed", rule)


# -- execution -----------------------------------------------------------------


@dataclass(frozen=True)
class StepCertificate:
    edge: tuple[int, int]
    designated: tuple[int, ...]
    value: complex
    source: str
    solver_certified: bool
    predicted: tuple[tuple[tuple[int, ...], int], ...]
    achieved: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def holds(self) -> bool:
        pred = dict(self.predicted)
        return self.solver_certified and all(a <= pred[k] for k, a in self.achieved)

    def to_dict(self) -> dict:
        pred = dict(self.predicted)
        return {
            "edge": list(self.edge),
            "designated": list(self.designated),
            "value": [self.value.real, self.value.imag],
            "source": self.source,
            "solver_certified": self.solver_certified,
            "holds": self.holds,
            "cliques": [{"clique": list(k), "predicted_minus": pred[k], "achieved_minus": a}
                        for k, a in self.achieved],
        }


@dataclass(frozen=True)
class CompletionResult:
    matrix: np.ndarray
    inertia: Inertia
    certificates: tuple[StepCertificate, ...]
    predicted_bound: int

    @property
    def certified(self) -> bool:
        return all(c.holds for c in self.certificates)


def execute_schedule(a: PartialHermitianMatrix, schedule: Schedule, tol=None,
                     clique_cap: int = DEFAULT_CLIQUE_CAP) -> CompletionResult:
    """Fill the unknown entries of ``a`` one at a time along ``schedule``."""
    tol = as_tolerance(tol)
    if a.pattern != schedule.start_graph():
        raise ScheduleError("schedule does not start from the graph of the matrix")
    report = check_partial_positive(a, "semidefinite", tol, clique_cap)
    if not report.ok:
        raise NotPartialPositiveError(
            f"matrix is not partial positive: clique {list(report.failing_clique)} has "
            f"inertia {report.failing_inertia.as_tuple()}")
    m = a.to_dense(0)
    certs = []
    for step in schedule.steps:
        i, j = step.edge
        idx = np.array(step.designated) - 1
        p, q = list(step.designated).index(i), list(step.designated).index(j)
        res = single_unknown_completion(SingleUnknownProblem(m[np.ix_(idx, idx)], p, q), tol)
        m[j - 1, i - 1] = res.value
        m[i - 1, j - 1] = np.conj(res.value)
        achieved = tuple((k, inertia(m[np.ix_(np.array(k) - 1, np.array(k) - 1)], tol).minus)
                         for k, _ in step.new_cliques)
        cert = StepCertificate(step.edge, step.designated, res.value, res.source,
                               res.certified, step.new_cliques, achieved)
        if not cert.holds:
            log.warning("step %s is not certified (source %s)", step.edge, res.source)
        certs.append(cert)
    specified = ~np.isnan(a.to_dense())
    if not np.array_equal(m[specified], a.to_dense()[specified]):
        raise AssertionError("a specified entry changed during completion")
    return CompletionResult(m, inertia(m, tol), tuple(certs), schedule.final_bound)


# -- text format ----------------------------------------------------------------


def format_schedule(s: Schedule) -> str:
    """Line-oriented schedule: a header, then one ``step`` line per insertion."""
    out = [f"schedule n={s.n} final_bound={s.final_bound} steps={len(s.steps)} rule={s.rule}"]
    for st in s.steps:
        cl = " ".join(f"{','.join(map(str, k))}:{b}" for k, b in st.new_cliques)
        out.append(f"step {st.edge[0]} {st.edge[1]} designated "
                   f"{','.join(map(str, st.designated))} new {cl}")
    return "\n".join(out) + "\n"


def parse_schedule(text: str) -> Schedule:
    lines = [(k + 1, ln.split()) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines or lines[0][1][0] != "schedule":
        raise ParseError("schedule must begin with a 'schedule' header", line=1, column=1)
    lineno, head = lines[0]
    try:
        fields = dict(tok.split("=", 1) for tok in head[1:])
        n, final, count = int(fields["n"]), int(fields["final_bound"]), int(fields["steps"])
        rule = fields.get("rule", "distance")
        if rule not in RULES:
            raise ValueError
    except (KeyError, ValueError):
        raise ParseError("header must be 'schedule n=N final_bound=B steps=S [rule=R]'",
                         line=lineno) from None
    steps = []
    for lineno, toks in lines[1:]:
        try:
            if toks[0] != "step" or toks[3] != "designated" or toks[5] != "new":
                raise ValueError
            edge = (int(toks[1]), int(toks[2]))
            designated = tuple(int(v) for v in toks[4].split(","))
            new = []
            for tok in toks[6:]:
                cl, b = tok.split(":")
                new.append((tuple(int(v) for v in cl.split(",")), int(b)))
        except (IndexError, ValueError):
            raise ParseError("malformed step line", line=lineno, column=1) from None
        steps.append(ScheduleStep(edge, designated, tuple(new)))
    if len(steps) != count:
        raise ParseError(f"header announces {count} steps, found {len(steps)}", line=1)
    return Schedule(n, tuple(steps), final, "file", rule)


def check_schedule(g: Graph, s: Schedule, clique_cap: int = DEFAULT_CLIQUE_CAP) -> Schedule:
    """Replay ``s`` on ``g`` and insist the recorded ledger matches."""
    replayed = replay_schedule(g, [(st.edge, st.designated) for st in s.steps], clique_cap,
                               s.rule)
    if replayed.steps != s.steps or replayed.final_bound != s.final_bound:
        raise ScheduleError("schedule bounds disagree with the replayed ledger")
    return s
