import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from completion_number import (Inertia, NotHermitianError, SingleUnknownProblem, Tolerance,
                               inertia, is_positive, single_unknown_completion)
from completion_number.linalg import (DEFAULT_TOLERANCE, gershgorin_bound, hermitian_pinv,
                                      inertia_counts, scan_grid, tridiagonalize, with_unknown)
from oracles import (hermitian_with_spectrum, jacobi_eigenvalues, oracle_inertia,
                     random_spectrum)

seeds = st.integers(0, 2**32 - 1)


def separated(m, factor=10.0):
    thr = DEFAULT_TOLERANCE.threshold(m)
    return np.abs(np.linalg.eigvalsh(m)).min() >= factor * thr


# -- thresholds -------------------------------------------------------------------


def test_threshold_formula():
    m = np.array([[1.0, -3.0], [-3.0, 2.0]])
    assert gershgorin_bound(m) == 5.0
    assert Tolerance(1e-10, 1e-12).threshold(m) == pytest.approx(1e-10 + 5e-12)
    assert Tolerance(0.5, 0.0).threshold(m) == 0.5
    with pytest.raises(ValueError):
        Tolerance(-1.0)


def test_eigenvalue_exactly_at_threshold_counts_as_zero():
    tol = Tolerance(0.25, 0.0)
    assert inertia(np.diag([0.25, -0.25, 0.3]), tol).as_tuple() == (1, 0, 2)


# -- inertia ---------------------------------------------------------------------------


@pytest.mark.parametrize("m, expected", [
    (np.eye(3), (3, 0, 0)),
    (np.ones((2, 2)), (1, 0, 1)),
    (np.diag([1.0, -1.0, 0.0]), (1, 1, 1)),
    (np.zeros((3, 3)), (0, 0, 3)),
    (np.array([[0, 1j], [-1j, 0]]), (1, 1, 0)),
])
def test_inertia_examples(m, expected):
    assert inertia(m).as_tuple() == expected


def test_completed_gadget_has_a_negative_eigenvalue():
    m = np.array([[1, 1, 0, -1], [1, 1, 1, 0], [0, 1, 1, 1], [-1, 0, 1, 1]], dtype=float)
    ine = inertia(m)
    assert ine.minus >= 1
    assert ine.as_tuple() == oracle_inertia(m, float(DEFAULT_TOLERANCE.threshold(m)))


def test_inertia_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        inertia(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotHermitianError):
        inertia(np.ones((2, 3)))


def test_inertia_tolerates_round_off_asymmetry():
    m = np.array([[1.0, 2.0], [2.0 + 1e-14, 1.0]])
    assert inertia(m).as_tuple() == (1, 1, 0)


def test_inertia_arithmetic():
    a, b = Inertia(1, 2, 0), Inertia(0, 1, 1)
    assert (a + b).as_tuple() == (1, 3, 1)
    assert (a + b).n == 5
    assert a.to_dict() == {"plus": 1, "minus": 2, "zero": 0}


@given(seeds, st.integers(1, 8), st.booleans())
def test_inertia_matches_numpy_on_separated_spectra(seed, n, real):
    rng = np.random.default_rng(seed)
    m = hermitian_with_spectrum(rng, random_spectrum(rng, n, 1e-9), real)
    if not separated(m):
        return
    lam = np.linalg.eigvalsh(m)
    assert inertia(m).as_tuple() == (int((lam > 0).sum()), int((lam < 0).sum()), 0)


@given(seeds, st.integers(1, 7), st.integers(0, 7))
def test_zero_count_is_corank_for_psd_matrices(seed, n, rank):
    rng = np.random.default_rng(seed)
    rank = min(rank, n)
    x = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = x @ x.conj().T
    if rank and not separated(x.conj().T @ x):
        return
    assert inertia(m).as_tuple() == (rank, 0, n - rank)


def test_tridiagonalization_preserves_spectrum(rng):
    for n in range(1, 9):
        m = hermitian_with_spectrum(rng, rng.standard_normal(n))
        d, e = tridiagonalize(m)
        t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        assert np.allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(m), atol=1e-12)


def test_batched_counts_agree_with_single_calls(rng):
    stack = np.stack([hermitian_with_spectrum(rng, random_spectrum(rng, 5, 1e-9))
                      for _ in range(20)])
    plus, minus, zero, _ = inertia_counts(stack)
    for k, m in enumerate(stack):
        assert inertia(m).as_tuple() == (plus[k], minus[k], zero[k])


def test_congruence_invariance(rng):
    done = 0
    while done < 200:
        n = int(rng.integers(1, 9))
        m = hermitian_with_spectrum(rng, random_spectrum(rng, n, 1e-3))
        s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(s) > 1e3:
            continue
        t = s.conj().T @ m @ s
        if not (separated(m, 1e3) and separated(t, 1e3)):
            continue
        assert inertia(t) == inertia(m)
        done += 1


def test_interlacing_on_every_deleted_row(rng):
    checked = 0
    while checked < 300:
        n = int(rng.integers(2, 9))
        m = hermitian_with_spectrum(rng, random_spectrum(rng, n, 1e-9))
        if not separated(m):
            continue
        whole = inertia(m)
        for k in range(n):
            keep = [i for i in range(n) if i != k]
            sub = m[np.ix_(keep, keep)]
            if not separated(sub):
                continue
            part = inertia(sub)
            assert part.plus <= whole.plus <= part.plus + 1
            assert part.minus <= whole.minus <= part.minus + 1
            checked += 1


# -- positivity -----------------------------------------------------------------------------


def test_positivity_modes():
    assert is_positive(np.eye(3), "definite") and is_positive(np.eye(3), "semidefinite")
    ones = np.ones((2, 2))
    assert is_positive(ones, "psd") and not is_positive(ones, "pd")
    eps = 10 * float(DEFAULT_TOLERANCE.threshold(np.diag([1.0, 0.0])))
    m = np.diag([1.0, -eps])
    assert not is_positive(m, "definite") and not is_positive(m, "semidefinite")
    with pytest.raises(ValueError):
        is_positive(np.eye(2), "nonsense")


def test_pinv_drops_small_eigenvalues(rng):
    m = hermitian_with_spectrum(rng, [2.0, -4.0, 1e-14])
    p = hermitian_pinv(m, 1e-10)
    assert np.allclose(m @ p @ m, m, atol=1e-10)
    assert np.allclose(np.sort(np.abs(np.linalg.eigvalsh(p))), [0.0, 0.25, 0.5], atol=1e-10)


# -- single unknown --------------------------------------------------------------------


def test_unknown_placement_is_conjugate_symmetric():
    m = with_unknown(np.zeros((3, 3)), 0, 2, 1 + 2j)
    assert m[2, 0] == 1 + 2j and m[0, 2] == 1 - 2j
    stack = with_unknown(np.zeros((3, 3)), 0, 2, np.array([1.0, 2.0]))
    assert stack.shape == (2, 3, 3)


def test_scan_grid_layout():
    g = scan_grid(2.0)
    assert g.size == 1 + 64 * 64
    assert g[0] == 0
    assert np.abs(g[1:]).min() == pytest.approx(2e-3)
    assert np.abs(g[1:]).max() == pytest.approx(2e3)


def test_tridiagonal_toeplitz_example():
    base = np.array([[1, 0.5, 0], [0.5, 1, 0.5], [0, 0.5, 1]])
    r = single_unknown_completion(SingleUnknownProblem(base, 0, 2))
    assert r.value == pytest.approx(0.25)
    assert r.inertia.as_tuple() == (3, 0, 0)
    assert r.certified and r.source == "closed-form"
    # oracle: a fine real scan maximizes the determinant near 0.25
    xs = np.linspace(-1, 1, 4001)
    dets = [np.linalg.det(with_unknown(base, 0, 2, x)).real for x in xs]
    assert xs[int(np.argmax(dets))] == pytest.approx(0.25, abs=1e-3)


def test_singular_block_forces_the_value():
    base = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=complex)
    r = single_unknown_completion(SingleUnknownProblem(base, 0, 2, "positive-semidefinite"))
    assert r.value == pytest.approx(1.0)
    assert r.inertia.minus == 0
    xs = np.linspace(-3, 3, 601)
    ok = [x for x in xs if inertia(with_unknown(base, 0, 2, x)).minus == 0]
    assert ok and max(abs(x - 1.0) for x in ok) < 1e-9


def test_diagonal_base_gives_zero(rng):
    for n in range(2, 7):
        base = np.diag(rng.uniform(0.5, 2.0, n))
        r = single_unknown_completion(SingleUnknownProblem(base, 0, n - 1))
        assert r.value == 0
        assert r.inertia.as_tuple() == (n, 0, 0)


def test_two_by_two_with_two_negative_pivots_uses_coupling():
    base = np.diag([-1.0, -1.0])
    r = single_unknown_completion(SingleUnknownProblem(base, 0, 1))
    assert r.target_minus == 1
    assert r.inertia.minus == 1 and r.certified
    assert r.source == "coupled"


@given(seeds, st.integers(2, 7))
def test_single_unknown_reaches_the_interlacing_target(seed, n):
    rng = np.random.default_rng(seed)
    base = hermitian_with_spectrum(rng, random_spectrum(rng, n, 1e-6))
    p, q = sorted(rng.choice(n, 2, replace=False))
    mid = [k for k in range(n) if k not in (p, q)]
    if mid and not separated(base[np.ix_(mid, mid)]):
        return
    r = single_unknown_completion(SingleUnknownProblem(base, int(p), int(q)))
    assert r.certified
    assert r.inertia.minus == r.target_minus
    assert r.matrix[q, p] == r.value
    keep = np.ones_like(base, dtype=bool)
    keep[p, q] = keep[q, p] = False
    assert np.array_equal(r.matrix[keep], base[keep])


def test_problem_validation():
    with pytest.raises(ValueError):
        SingleUnknownProblem(np.eye(3), 1, 1)
    with pytest.raises(ValueError):
        SingleUnknownProblem(np.eye(3), 0, 3)
    with pytest.raises(ValueError):
        SingleUnknownProblem(np.eye(3), 0, 1, "maximize")


def test_jacobi_oracle_is_accurate(rng):
    for n in range(1, 9):
        m = hermitian_with_spectrum(rng, rng.standard_normal(n))
        assert np.allclose(jacobi_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-12)
