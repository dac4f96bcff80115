import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from completion_number import (CompletionError, Graph, HermitianCompleter, check_graph,
                               check_partial_matrix, inertia, mask)
from completion_number.witnesses import family_Gn
from oracles import random_chordal_graph


def nan_matrix(a):
    return a.to_dense()


def test_params_round_trip():
    est = HermitianCompleter(strategy="greedy", abs_tol=1e-9)
    params = est.get_params()
    assert params["strategy"] == "greedy" and params["abs_tol"] == 1e-9
    assert clone(est).get_params() == params
    est.set_params(rule="subset")
    assert est.rule == "subset"


def test_fit_transform_on_prop1_nan_array():
    _, a = family_Gn(2)
    x = nan_matrix(a)
    est = HermitianCompleter()
    out = est.fit_transform(x)
    assert est.upper_bound_ == 2 and est.n_features_in_ == 8
    assert est.pattern_ == a.pattern
    assert np.isrealobj(out)
    known = ~np.isnan(x)
    assert np.array_equal(out[known], x[known].real)
    assert inertia(out).minus <= 2
    assert est.inertia(x).minus <= 2


def test_transform_accepts_partial_matrix_objects(rng):
    g = random_chordal_graph(rng, 8)
    y = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    a = mask(y @ y.conj().T + np.eye(8), g)
    est = HermitianCompleter(require_certified=True).fit(a)
    out = est.transform(a)
    assert est.upper_bound_ == 0
    assert np.linalg.eigvalsh(out)[0] > 0


def test_transform_needs_fit_and_matching_pattern():
    _, a = family_Gn(1)
    with pytest.raises(NotFittedError):
        HermitianCompleter().transform(a)
    est = HermitianCompleter().fit(a)
    with pytest.raises(ValueError):
        est.transform(np.eye(4))


def test_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        HermitianCompleter().fit(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ValueError):
        HermitianCompleter().fit(np.ones((2, 3)))


def test_validation_helpers():
    x = np.array([[1.0, np.nan], [np.nan, 2.0]])
    a = check_partial_matrix(x)
    assert a.pattern.edges == frozenset() and a.diag == (1.0, 2.0)
    assert check_partial_matrix(a) is a
    with pytest.raises(ValueError):
        check_partial_matrix(np.array([[1.0, np.inf], [np.inf, 1.0]]))
    with pytest.raises(TypeError):
        check_partial_matrix(np.array([["a"]]))
    assert check_graph((3, [(1, 2)])) == Graph(3, [(1, 2)])
    with pytest.raises(TypeError):
        check_graph(5)


def test_require_certified_is_plumbed(monkeypatch):
    _, a = family_Gn(1)
    est = HermitianCompleter(require_certified=True).fit(a)
    from completion_number import estimator, engine

    real = engine.execute_schedule

    def flagged(*args, **kwargs):
        res = real(*args, **kwargs)
        cert = res.certificates[0]
        bad = type(cert)(cert.edge, cert.designated, cert.value, "scan", False,
                         cert.predicted, cert.achieved)
        return type(res)(res.matrix, res.inertia, (bad,) + res.certificates[1:],
                         res.predicted_bound)

    monkeypatch.setattr(estimator, "execute_schedule", flagged)
    with pytest.raises(CompletionError):
        est.transform(a)
