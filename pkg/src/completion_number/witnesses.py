"""Lower-bound witnesses: the 4-cycle gadget, the G_n family and their certificates.

The gadget is the partial matrix

    [[ 1,  1,  ?, -1],
     [ 1,  1,  1,  ?],
     [ ?,  1,  1,  1],
     [-1,  ?,  1,  1]]

on the chordless 4-cycle 1-2-3-4. Positive semidefiniteness of the triangle
{1, 2, 3} pins the unknown (1, 3) entry to +1, and of {1, 3, 4} pins it to -1,
so every completion has a 3x3 principal submatrix with a negative eigenvalue.
Gadgets placed on vertex-disjoint, mutually fully adjacent 4-cycles with zero
cross entries give block diagonal restrictions, and the negative counts add.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .exceptions import WitnessError
from .graph import (Graph, cross_pairs_are_edges, disjoint_gadget_packing,
                    four_cycle_order)
from .linalg import Inertia, as_tolerance, inertia, inertia_counts
from .partial import PartialHermitianMatrix, check_partial_positive

GADGET_VALUES = {(0, 1): 1.0, (1, 2): 1.0, (2, 3): 1.0, (0, 3): -1.0}
DEFAULT_RESOLUTION = 64
DEFAULT_PHASES = 4
FORCING_STEPS = 60


def gadget_partial_matrix() -> PartialHermitianMatrix:
    return PartialHermitianMatrix(
        Graph.cycle(4), [1.0] * 4, {(i + 1, j + 1): v for (i, j), v in GADGET_VALUES.items()}
    )


def embed_gadgets(g: Graph, blocks) -> PartialHermitianMatrix:
    """Unit diagonal, gadget values on each block, zero on every other edge."""
    off = {e: 0.0 for e in g.edges}
    for block in blocks:
        order = four_cycle_order(g, block)
        for (s, t), v in GADGET_VALUES.items():
            a, b = order[s], order[t]
            off[(min(a, b), max(a, b))] = v
    return PartialHermitianMatrix(g, [1.0] * g.n, off)


def gn_graph(n: int) -> Graph:
    """Graph on ``4n`` vertices whose non-edges are ``(4k+1, 4k+3)`` and ``(4k+2, 4k+4)``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    non = [(4 * k + 1, 4 * k + 3) for k in range(n)] + [(4 * k + 2, 4 * k + 4) for k in range(n)]
    return Graph.from_non_edges(4 * n, non)


def family_Gn(n: int) -> tuple[Graph, PartialHermitianMatrix]:
    g = gn_graph(n)
    blocks = [tuple(range(4 * k + 1, 4 * k + 5)) for k in range(n)]
    return g, embed_gadgets(g, blocks)


# -- forcing --------------------------------------------------------------------


@dataclass(frozen=True)
class Disc:
    """Feasible set ``|x - center| <= radius`` of a one-unknown PSD 3x3 block."""

    center: complex
    radius: float
    empty: bool = False


def psd_disc(p, u, q, v, r, threshold) -> Disc:
    """Values ``x`` making ``[[p, u, x], [u*, q, v], [x*, v*, r]]`` semidefinite.

    For ``q > 0`` this is the Schur complement condition
    ``|x - u v / q|^2 <= (p - |u|^2/q)(r - |v|^2/q)``.
    """
    if q > threshold:
        s1, s2 = p - abs(u) ** 2 / q, r - abs(v) ** 2 / q
        if s1 < -threshold or s2 < -threshold:
            return Disc(0j, 0.0, empty=True)
        return Disc(complex(u * v / q), float(np.sqrt(max(s1, 0.0) * max(s2, 0.0))))
    if q < -threshold or abs(u) > threshold or abs(v) > threshold:
        return Disc(0j, 0.0, empty=True)
    if p < -threshold or r < -threshold:
        return Disc(0j, 0.0, empty=True)
    return Disc(0j, float(np.sqrt(max(p, 0.0) * max(r, 0.0))))


@dataclass(frozen=True)
class ForcingEvidence:
    """Why the unknown across the first diagonal cannot satisfy both triangles."""

    discs: tuple[Disc, Disc]
    separation: float
    scan_points: int
    feasible_counts: tuple[int, int]
    joint_feasible: int
    forced: bool

    def to_dict(self) -> dict:
        return {
            "discs": [{"center": [d.center.real, d.center.imag], "radius": d.radius,
                       "empty": d.empty} for d in self.discs],
            "separation": self.separation if np.isfinite(self.separation) else None,
            "scan_points": self.scan_points,
            "feasible_counts": list(self.feasible_counts),
            "joint_feasible": self.joint_feasible,
            "forced": self.forced,
        }


def gadget_forcing_evidence(block: Optional[np.ndarray] = None, tol=None) -> ForcingEvidence:
    """Forcing analysis for a 4x4 block given in cycle order ``(a, b, c, d)``.

    ``block`` is dense with arbitrary values at the unknown positions
    ``(a, c)`` and ``(b, d)``. Only the ``(a, c)`` unknown matters: it appears
    in the triangles ``{a, b, c}`` and ``{a, d, c}``. The two semidefinite
    discs are computed in closed form, and a square grid of complex values is
    scanned to corroborate that no value satisfies both triangles.
    """
    tol = as_tolerance(tol)
    m = gadget_partial_matrix().to_dense(0) if block is None else np.array(block, dtype=complex)
    thr = float(tol.threshold(m))
    a, b, c, d = 0, 1, 2, 3
    disc1 = psd_disc(m[a, a].real, m[a, b], m[b, b].real, m[b, c], m[c, c].real, thr)
    disc2 = psd_disc(m[a, a].real, m[a, d], m[d, d].real, m[d, c], m[c, c].real, thr)
    if disc1.empty or disc2.empty:
        separation = np.inf
    else:
        separation = abs(disc1.center - disc2.center) - disc1.radius - disc2.radius

    scale = max(float(np.abs(m).max()), 1.0)
    axis = scale * np.arange(-FORCING_STEPS, FORCING_STEPS + 1) * (3.0 / FORCING_STEPS)
    xs = (axis[:, None] + 1j * axis[None, :]).ravel()
    tri1 = np.broadcast_to(m[np.ix_([a, b, c], [a, b, c])], xs.shape + (3, 3)).copy()
    tri1[:, 0, 2], tri1[:, 2, 0] = xs, np.conj(xs)
    tri2 = np.broadcast_to(m[np.ix_([a, d, c], [a, d, c])], xs.shape + (3, 3)).copy()
    tri2[:, 0, 2], tri2[:, 2, 0] = xs, np.conj(xs)
    _, minus1, _, _ = inertia_counts(tri1, tol, hermitian_check=False)
    _, minus2, _, _ = inertia_counts(tri2, tol, hermitian_check=False)
    ok1, ok2 = minus1 == 0, minus2 == 0
    joint = int(np.count_nonzero(ok1 & ok2))
    forced = bool(separation > thr and joint == 0)
    return ForcingEvidence((disc1, disc2), float(separation), int(xs.size),
                           (int(ok1.sum()), int(ok2.sum())), joint, forced)


def verify_gadget_forcing(tol=None, block: Optional[np.ndarray] = None) -> bool:
    """True when no value of the ``(a, c)`` unknown keeps both triangles semidefinite."""
    return gadget_forcing_evidence(block, tol).forced


# -- certificates ------------------------------------------------------------------


@dataclass(frozen=True)
class GadgetEvidence:
    block: tuple[int, ...]
    cycle_order: tuple[int, int, int, int]
    forcing: ForcingEvidence
    grid_size: int
    scan_min_minus: int

    @property
    def ok(self) -> bool:
        return self.forcing.forced and self.scan_min_minus >= 1

    def to_dict(self) -> dict:
        return {"block": list(self.block), "cycle_order": list(self.cycle_order),
                "forcing": self.forcing.to_dict(), "grid_size": self.grid_size,
                "scan_min_minus": self.scan_min_minus, "ok": self.ok}


@dataclass(frozen=True)
class WitnessCertificate:
    graph: Graph
    matrix: PartialHermitianMatrix
    placements: tuple[tuple[int, ...], ...]
    gadgets: tuple[GadgetEvidence, ...] = ()
    partial_positive: Optional[bool] = None
    cross_entries_zero: Optional[bool] = None
    additivity: Optional[bool] = None
    verified: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def claimed(self) -> int:
        return len(self.placements)

    @property
    def lower_bound(self) -> int:
        return self.claimed if self.verified else 0

    def to_dict(self) -> dict:
        return {
            "placements": [list(b) for b in self.placements],
            "claimed": self.claimed,
            "verified": self.verified,
            "lower_bound": self.lower_bound,
            "partial_positive": self.partial_positive,
            "cross_entries_zero": self.cross_entries_zero,
            "additivity": self.additivity,
            "gadgets": [e.to_dict() for e in self.gadgets],
            "notes": list(self.notes),
        }


def unknown_grid(scale: float, resolution: int, phases: int) -> np.ndarray:
    radii = np.linspace(0.0, 3.0 * scale, resolution)
    angles = np.exp(2j * np.pi * np.arange(phases) / phases)
    return (radii[:, None] * angles[None, :]).ravel()


def scan_gadget_completions(block: np.ndarray, resolution: int = DEFAULT_RESOLUTION,
                            phases: int = DEFAULT_PHASES, tol=None) -> tuple[int, int]:
    """Minimum negative count over a grid of both unknowns of a cycle-ordered block.

    Returns ``(grid_size, min_minus)``.
    """
    block = np.array(block, dtype=complex)
    vals = unknown_grid(max(float(np.abs(block).max()), 1.0), resolution, phases)
    x, y = np.meshgrid(vals, vals, indexing="ij")
    x, y = x.ravel(), y.ravel()
    stack = np.broadcast_to(block, x.shape + (4, 4)).copy()
    stack[:, 2, 0], stack[:, 0, 2] = x, np.conj(x)
    stack[:, 3, 1], stack[:, 1, 3] = y, np.conj(y)
    _, minus, _, _ = inertia_counts(stack, tol, hermitian_check=False)
    return int(x.size), int(minus.min())


def validate_placements(g: Graph, placements) -> tuple[tuple[int, int, int, int], ...]:
    """Cycle orders of the placements; raises WitnessError when they are unusable."""
    blocks = [tuple(sorted(b)) for b in placements]
    for b in blocks:
        if len(set(b)) != 4 or not all(1 <= v <= g.n for v in b):
            raise WitnessError(f"placement {list(b)} must be four distinct vertices of 1..{g.n}")
    for s, t in itertools.combinations(blocks, 2):
        if set(s) & set(t):
            raise WitnessError(f"placements {list(s)} and {list(t)} overlap")
    try:
        orders = tuple(four_cycle_order(g, b) for b in blocks)
    except ValueError as exc:
        raise WitnessError(str(exc)) from None
    if not cross_pairs_are_edges(g, blocks):
        raise WitnessError("some pair across two placements is unspecified; "
                           "restrictions would not be block diagonal")
    return orders


def make_certificate(matrix: PartialHermitianMatrix, placements) -> WitnessCertificate:
    g = matrix.pattern
    validate_placements(g, placements)
    blocks = tuple(sorted(tuple(sorted(b)) for b in placements))
    return WitnessCertificate(g, matrix, blocks)


def verify_witness_lower_bound(cert: WitnessCertificate, resolution: int = DEFAULT_RESOLUTION,
                               tol=None, phases: int = DEFAULT_PHASES) -> WitnessCertificate:
    """Fill in the evidence of ``cert`` and decide whether it is verified."""
    tol = as_tolerance(tol)
    g, a = cert.graph, cert.matrix
    if a.pattern != g:
        raise WitnessError("witness matrix pattern differs from the certificate graph")
    orders = validate_placements(g, cert.placements)
    notes = []

    pp = check_partial_positive(a, "semidefinite", tol).ok
    if not pp:
        notes.append("witness matrix is not partial positive")

    members = {v: k for k, b in enumerate(cert.placements) for v in b}
    cross_zero = all(
        a.offdiag[(i, j)] == 0
        for (i, j) in a.offdiag
        if i in members and j in members and members[i] != members[j]
    )
    if not cross_zero:
        notes.append("nonzero entry between two placements")

    gadgets = []
    dense = a.to_dense(0)
    for block, order in zip(cert.placements, orders):
        idx = np.array(order) - 1
        sub = dense[np.ix_(idx, idx)]
        forcing = gadget_forcing_evidence(sub, tol)
        size, low = scan_gadget_completions(sub, resolution, phases, tol)
        gadgets.append(GadgetEvidence(block, order, forcing, size, low))
        if not gadgets[-1].ok:
            notes.append(f"gadget {list(block)} not certified")

    additivity = _check_additivity(dense, orders, tol) if cert.placements else True
    if not additivity:
        notes.append("block inertia does not add up")
    verified = pp and cross_zero and additivity and all(e.ok for e in gadgets)
    return replace(cert, gadgets=tuple(gadgets), partial_positive=pp,
                   cross_entries_zero=cross_zero, additivity=additivity, verified=verified,
                   notes=tuple(notes))


def _check_additivity(dense, orders, tol) -> bool:
    """Inertia of the union restriction equals the sum over blocks for a sample completion."""
    idx = np.concatenate([np.array(o) - 1 for o in orders])
    m = dense[np.ix_(idx, idx)].copy()
    total = Inertia(0, 0, 0)
    for k in range(len(orders)):
        s = slice(4 * k, 4 * k + 4)
        total = total + inertia(m[s, s], tol)
    return inertia(m, tol) == total


def completion_number_lower_bound(g: Graph, resolution: int = DEFAULT_RESOLUTION, tol=None,
                                  phases: int = DEFAULT_PHASES
                                  ) -> tuple[int, WitnessCertificate]:
    """Place gadgets on a disjoint packing of induced 4-cycles and certify them."""
    packing = disjoint_gadget_packing(g)
    matrix = embed_gadgets(g, packing.blocks)
    cert = WitnessCertificate(g, matrix, tuple(packing.blocks))
    cert = verify_witness_lower_bound(cert, resolution, tol, phases)
    if not packing.exact:
        cert = replace(cert, notes=cert.notes + ("packing found greedily; may not be maximum",))
    return cert.lower_bound, cert
