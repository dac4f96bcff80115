"""Brute-force reference implementations used only by the tests.

Nothing here shares code with the package: eigenvalues come from cyclic
Jacobi rotations, chordality and cliques from subset enumeration.
"""

from __future__ import annotations

import itertools

import numpy as np

from completion_number import Graph


def jacobi_eigenvalues(a, sweeps: int = 60, eps: float = 1e-15) -> np.ndarray:
    """Sorted eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations."""
    a = np.array(a, dtype=complex)
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    scale = max(np.abs(a).max(), 1e-300)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= eps * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= eps * scale * 1e-3:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # unitary J acting on columns p, q
                jpp, jpq, jqp, jqq = c, s * phase, -s * np.conj(phase), c
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = colp * jpp + colq * jqp
                a[:, q] = colp * jpq + colq * jqq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(jpp) * rowp + np.conj(jqp) * rowq
                a[q, :] = np.conj(jpq) * rowp + np.conj(jqq) * rowq
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).real)


def oracle_inertia(a, threshold: float) -> tuple[int, int, int]:
    lam = jacobi_eigenvalues(a)
    return (int(np.sum(lam > threshold)), int(np.sum(lam < -threshold)),
            int(np.sum(np.abs(lam) <= threshold)))


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def hermitian_with_spectrum(rng, spectrum, real=False):
    n = len(spectrum)
    if real:
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    else:
        q = random_unitary(rng, n)
    m = (q * np.asarray(spectrum)) @ q.conj().T
    return (m + m.conj().T) / 2


def random_spectrum(rng, n, floor):
    """Random signs and magnitudes spanning six decades, never closer to 0 than ``floor``."""
    mags = 10.0 ** rng.uniform(-3, 3, n)
    near = rng.random(n) < 0.15
    mags[near] = floor * rng.uniform(1.5, 50.0, near.sum())
    return np.where(rng.random(n) < 0.5, -1.0, 1.0) * np.maximum(mags, floor * 1.5)


def random_graph(rng, n, p=0.5) -> Graph:
    return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                     if rng.random() < p])


def random_chordal_graph(rng, n) -> Graph:
    """Grow a chordal graph by attaching each new vertex to a clique."""
    adj = {1: set()}
    for v in range(2, n + 1):
        adj[v] = set()
        if rng.random() < 0.15:
            continue
        u = int(rng.integers(1, v))
        clique = [u]
        for w in rng.permutation(sorted(adj[u])):
            if all(int(w) in adj[x] for x in clique):
                if rng.random() < 0.6:
                    clique.append(int(w))
        for w in clique:
            adj[v].add(w)
            adj[w].add(v)
    return Graph(n, [(i, j) for i in adj for j in adj[i] if i < j])


def _induces_cycle(g: Graph, sub) -> bool:
    sub = set(sub)
    deg = {v: sum(1 for w in sub if w != v and g.has_edge(v, w)) for v in sub}
    if any(d != 2 for d in deg.values()):
        return False
    start = next(iter(sub))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in sub:
            if w not in seen and g.has_edge(v, w):
                seen.add(w)
                stack.append(w)
    return seen == sub


def brute_force_holes(g: Graph):
    """Vertex sets of every induced cycle of length at least 4."""
    return [set(s) for k in range(4, g.n + 1)
            for s in itertools.combinations(range(1, g.n + 1), k) if _induces_cycle(g, s)]


def brute_force_is_chordal(g: Graph) -> bool:
    return not brute_force_holes(g)


def brute_force_maximal_cliques(g: Graph) -> set[frozenset]:
    cliques = [frozenset(s) for k in range(1, g.n + 1)
               for s in itertools.combinations(range(1, g.n + 1), k) if g.is_clique(s)]
    return {c for c in cliques if not any(c < d for d in cliques)}


def brute_force_max_packing(g: Graph) -> int:
    """Largest family of disjoint induced 4-cycles with all cross pairs adjacent."""
    cycles = [frozenset(s) for s in itertools.combinations(range(1, g.n + 1), 4)
              if _induces_cycle(g, s)]

    def compatible(s, t):
        return not (s & t) and all(g.has_edge(a, b) for a in s for b in t)

    best = 0

    def grow(chosen, start):
        nonlocal best
        best = max(best, len(chosen))
        for k in range(start, len(cycles)):
            if all(compatible(cycles[k], c) for c in chosen):
                grow(chosen + [cycles[k]], k + 1)

    grow([], 0)
    return best
