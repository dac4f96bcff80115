"""Dense Hermitian kernel: inertia by Sturm counts, and one-unknown completion.

Inertia never computes eigenvectors or eigenvalues. The matrix is reduced to
real symmetric tridiagonal form by Householder reflections, and the number of
eigenvalues below a shift is read off the signs of the LDL^T pivots of the
shifted tridiagonal (Sturm sequence). Everything accepts stacks of matrices
with shape ``(..., n, n)`` so that grid scans stay vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotHermitianError

ABS_TOL = 1e-10
REL_TOL = 1e-12

SCAN_PHASES = 64
SCAN_MAGNITUDES = 64
SCAN_DECADES = 3.0


@dataclass(frozen=True)
class Tolerance:
    """Zero-eigenvalue threshold ``abs_tol + rel_tol * gershgorin_bound(m)``."""

    abs_tol: float = ABS_TOL
    rel_tol: float = REL_TOL

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")

    def threshold(self, m) -> np.ndarray:
        return self.abs_tol + self.rel_tol * gershgorin_bound(m)


DEFAULT_TOLERANCE = Tolerance()


def as_tolerance(tol) -> Tolerance:
    if tol is None:
        return DEFAULT_TOLERANCE
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(abs_tol=float(tol))


def gershgorin_bound(m) -> np.ndarray:
    """Largest absolute Gershgorin bound, i.e. the max absolute row sum."""
    m = np.asarray(m)
    if m.shape[-1] == 0:
        return np.zeros(m.shape[:-2])
    return np.abs(m).sum(axis=-1).max(axis=-1)


@dataclass(frozen=True)
class Inertia:
    plus: int
    minus: int
    zero: int
    tolerance: float = field(default=0.0, compare=False)

    @property
    def n(self) -> int:
        return self.plus + self.minus + self.zero

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.plus, self.minus, self.zero)

    def __add__(self, other: "Inertia") -> "Inertia":
        return Inertia(self.plus + other.plus, self.minus + other.minus,
                       self.zero + other.zero, max(self.tolerance, other.tolerance))

    def to_dict(self) -> dict:
        return {"plus": self.plus, "minus": self.minus, "zero": self.zero}


def check_hermitian(m, tol=None) -> np.ndarray:
    """Return the Hermitian part of ``m`` after checking the skew part is round-off."""
    m = np.asarray(m, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise NotHermitianError(f"expected square matrices, got shape {m.shape}")
    tol = as_tolerance(tol)
    mh = np.conj(np.swapaxes(m, -1, -2))
    skew = np.abs(m - mh).max(axis=(-1, -2)) if m.shape[-1] else np.zeros(m.shape[:-2])
    if np.any(skew > tol.threshold(m)):
        raise NotHermitianError(f"matrix is not Hermitian (skew part {np.max(skew):.3g})")
    return (m + mh) / 2


def tridiagonalize(m) -> tuple[np.ndarray, np.ndarray]:
    """Unitary reduction of Hermitian ``m`` to real tridiagonal form.

    Returns the diagonal ``d`` (shape ``(..., n)``) and the absolute values of
    the off-diagonal ``e`` (shape ``(..., n-1)``); the phases of the
    off-diagonal do not affect the spectrum.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[-1]
    for k in range(n - 2):
        x = a[..., k + 1:, k]
        xnorm = np.linalg.norm(x, axis=-1)
        x0 = x[..., 0]
        phase = np.where(np.abs(x0) > 0, x0 / np.where(np.abs(x0) > 0, np.abs(x0), 1), 1)
        v = x.copy()
        v[..., 0] += phase * xnorm
        vnorm = np.linalg.norm(v, axis=-1)
        active = vnorm > 0
        v = np.where(active[..., None], v / np.where(active, vnorm, 1)[..., None], 0)
        # a <- P a P with P = I - 2 v v^* acting on trailing indices k+1:
        tail = a[..., k + 1:, :]
        tail -= 2 * v[..., :, None] * np.einsum("...i,...ij->...j", np.conj(v), tail)[..., None, :]
        tail = a[..., :, k + 1:]
        tail -= 2 * np.einsum("...ij,...j->...i", tail, v)[..., :, None] * np.conj(v)[..., None, :]
    d = np.real(np.diagonal(a, axis1=-2, axis2=-1)).copy()
    e = np.abs(np.diagonal(a, offset=-1, axis1=-2, axis2=-1)).copy()
    return d, e


def sturm_count(d, e, shift) -> np.ndarray:
    """Number of eigenvalues of the tridiagonal ``(d, e)`` at or below ``shift``.

    A vanishing pivot is replaced by ``-pivmin``, which counts an eigenvalue
    equal to the shift as below it.
    """
    d = np.asarray(d, dtype=float)
    e2 = np.asarray(e, dtype=float) ** 2
    shift = np.asarray(shift, dtype=float)
    n = d.shape[-1]
    scale = np.maximum(np.abs(d).max(axis=-1, initial=0.0), 1.0)
    if n > 1:
        scale = np.maximum(scale, e2.max(axis=-1))
    pivmin = np.finfo(float).tiny * scale
    count = np.zeros(d.shape[:-1], dtype=int)
    q = np.ones(d.shape[:-1])
    for k in range(n):
        q = d[..., k] - shift - (e2[..., k - 1] / q if k else 0.0)
        q = np.where(np.abs(q) <= pivmin, -pivmin, q)
        count += q < 0
    return count


def inertia_counts(m, tol=None, hermitian_check=True):
    """Vectorized inertia: arrays ``(plus, minus, zero, threshold)`` over a stack."""
    tol = as_tolerance(tol)
    m = check_hermitian(m, tol) if hermitian_check else np.asarray(m, dtype=complex)
    n = m.shape[-1]
    thresh = tol.threshold(m)
    if n == 0:
        z = np.zeros(m.shape[:-2], dtype=int)
        return z, z, z, thresh
    d, e = tridiagonalize(m)
    # one ulp below -threshold so that |λ| == threshold counts as zero
    minus = sturm_count(d, e, np.nextafter(-thresh, -np.inf))
    at_most = sturm_count(d, e, thresh)
    zero = at_most - minus
    plus = n - at_most
    return plus, minus, zero, thresh


def inertia(m, tol=None) -> Inertia:
    """Inertia ``(plus, minus, zero)`` of one Hermitian matrix.

    An eigenvalue counts as zero when its absolute value is at most the
    threshold of ``tol`` (see :class:`Tolerance`).
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError("inertia expects a single matrix; use inertia_counts for stacks")
    plus, minus, zero, thresh = inertia_counts(m, tol)
    return Inertia(int(plus), int(minus), int(zero), float(thresh))


def normalize_mode(mode: str) -> str:
    aliases = {"pd": "definite", "definite": "definite", "positive-definite": "definite",
               "psd": "semidefinite", "semidefinite": "semidefinite",
               "positive-semidefinite": "semidefinite"}
    try:
        return aliases[mode]
    except KeyError:
        raise ValueError(f"unknown positivity mode {mode!r}") from None


def is_positive(m, mode: str = "semidefinite", tol=None) -> bool:
    return inertia_satisfies(inertia(m, tol), mode)


def inertia_satisfies(ine: Inertia, mode: str) -> bool:
    if normalize_mode(mode) == "definite":
        return ine.minus == 0 and ine.zero == 0
    return ine.minus == 0


def hermitian_pinv(c, threshold: float) -> np.ndarray:
    """Pseudo-inverse of Hermitian ``c`` dropping eigenvalues with ``|λ| <= threshold``."""
    if c.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    w, v = np.linalg.eigh(c)
    keep = np.abs(w) > threshold
    winv = np.zeros_like(w)
    winv[keep] = 1.0 / w[keep]
    return (v * winv) @ np.conj(v.T)


# -- one unknown entry ------------------------------------------------------

OBJECTIVES = ("minimize-negatives", "positive-semidefinite", "positive-definite")


@dataclass(frozen=True)
class SingleUnknownProblem:
    """Hermitian ``base`` whose ``(p, q)`` / ``(q, p)`` entries are free.

    Whatever ``base`` holds at the free positions is ignored. Indices are
    0-based positions in ``base``.
    """

    base: np.ndarray
    p: int
    q: int
    objective: str = "minimize-negatives"

    def __post_init__(self):
        n = np.asarray(self.base).shape[0]
        if self.p == self.q or not (0 <= self.p < n and 0 <= self.q < n):
            raise ValueError(f"free pair ({self.p}, {self.q}) invalid for dimension {n}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")


@dataclass(frozen=True)
class SingleUnknownResult:
    value: complex
    inertia: Inertia
    target_minus: int
    parent_inertias: tuple[Inertia, Inertia]
    source: str
    certified: bool
    matrix: np.ndarray = field(repr=False, compare=False, default=None)


def with_unknown(base, p, q, x) -> np.ndarray:
    """Copy of ``base`` with ``x`` at ``(q, p)`` and its conjugate at ``(p, q)``.

    ``x`` may be an array, producing a stack of matrices.
    """
    x = np.asarray(x, dtype=complex)
    out = np.broadcast_to(np.asarray(base, dtype=complex), x.shape + np.shape(base)).copy()
    out[..., q, p] = x
    out[..., p, q] = np.conj(x)
    return out


def scan_grid(scale: float, phases: int = SCAN_PHASES, magnitudes: int = SCAN_MAGNITUDES,
              decades: float = SCAN_DECADES) -> np.ndarray:
    """0 plus ``magnitudes`` log-spaced radii in ``[10^-d s, 10^d s]`` times ``phases`` phases."""
    s = scale if scale > 0 else 1.0
    radii = s * np.logspace(-decades, decades, magnitudes)
    angles = np.exp(2j * np.pi * np.arange(phases) / phases)
    return np.concatenate([[0.0], (radii[:, None] * angles[None, :]).ravel()])


def _meets(ine: Inertia, target_minus: int, objective: str) -> bool:
    if objective == "positive-definite":
        return ine.minus == 0 and ine.zero == 0
    if objective == "positive-semidefinite":
        return ine.minus == 0
    return ine.minus == target_minus


def single_unknown_completion(prob: SingleUnknownProblem, tol=None) -> SingleUnknownResult:
    """Fill one free conjugate pair so the completion has as few negatives as possible.

    Interlacing forces at least ``max(minus(M1), minus(M2))`` negative
    eigenvalues, where ``M1``/``M2`` drop row and column ``q``/``p``. The
    value ``x = M[q, mid] C^+ M[mid, p]`` (``C`` the block of the remaining
    indices) decouples the two Schur pivots and reaches that target unless
    both pivots are negative; then a coupling of size ``2 sqrt(αδ)`` is used
    instead. If neither reaches the target, a fixed grid is scanned and the
    best point by ``(minus, zero)`` is returned with ``certified=False``
    unless it meets the target.
    """
    tol = as_tolerance(tol)
    base = np.array(prob.base, dtype=complex)
    p, q = prob.p, prob.q
    base[p, q] = base[q, p] = 0
    base = check_hermitian(base, tol)
    n = base.shape[0]
    thresh = float(tol.threshold(base))
    mid = [k for k in range(n) if k not in (p, q)]

    in1 = inertia(base[np.ix_([p] + mid, [p] + mid)], tol)
    in2 = inertia(base[np.ix_(mid + [q], mid + [q])], tol)
    target = max(in1.minus, in2.minus)
    objective = prob.objective

    def evaluate(x, source):
        m = with_unknown(base, p, q, x)
        return SingleUnknownResult(complex(x), inertia(m, tol), target, (in1, in2),
                                   source, False, m)

    cpinv = hermitian_pinv(base[np.ix_(mid, mid)], thresh)
    b = base[mid, p]
    c = base[mid, q]
    x0 = complex(np.conj(c) @ cpinv @ b) if mid else 0j
    tried = [evaluate(x0, "closed-form")]

    if not _meets(tried[-1].inertia, target, objective):
        alpha = float(np.real(base[p, p] - np.conj(b) @ cpinv @ b))
        delta = float(np.real(base[q, q] - np.conj(c) @ cpinv @ c))
        if alpha < -thresh and delta < -thresh:
            tried.append(evaluate(x0 + 2.0 * np.sqrt(alpha * delta), "coupled"))

    if not _meets(tried[-1].inertia, target, objective):
        scale = float(np.abs(base).max()) if n else 1.0
        grid = scan_grid(scale)
        plus, minus, zero, _ = inertia_counts(with_unknown(base, p, q, grid), tol,
                                              hermitian_check=False)
        k = int(np.lexsort((zero, minus))[0])
        tried.append(evaluate(grid[k], "scan"))

    ok = [r for r in tried if _meets(r.inertia, target, objective)]
    best = ok[0] if ok else min(tried, key=lambda r: (r.inertia.minus, r.inertia.zero))
    return SingleUnknownResult(best.value, best.inertia, target, (in1, in2), best.source,
                               bool(ok), best.matrix)
