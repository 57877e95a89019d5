"""Both kernel backends must agree, including on the reported witness."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strategies import group_names
from weakmaps import _kernels, samples
from weakmaps.cohomology import make_module, trivial_module
from weakmaps.hom import inversion_image

numba = pytest.importorskip("numba")

NB = _kernels.backend("numba")
NP = _kernels.backend("numpy")


def test_backend_names():
    assert NB.name == "numba" and NP.name == "numpy"
    assert _kernels.BACKEND in ("numba", "numpy")
    with pytest.raises(ValueError):
        _kernels.backend("cuda")


def _corrupt(table, data):
    t = np.array(table, dtype=np.int64)
    n = t.shape[0]
    a, b = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    t[a, b] = data.draw(st.integers(0, n - 1))
    return t


@given(group_names, st.data())
def test_associativity_parity(name, data):
    t = _corrupt(samples.group(name).table, data)
    assert NB.first_nonassociative(t).tolist() == NP.first_nonassociative(t).tolist()


@given(group_names, group_names, st.data())
def test_hom_parity(a, b, data):
    G, H = samples.group(a), samples.group(b)
    img = np.array([0] + [data.draw(st.integers(0, H.order - 1)) for _ in range(G.order - 1)])
    w1 = NB.first_nonhom(G.table, H.table, img).tolist()
    assert w1 == NP.first_nonhom(G.table, H.table, img).tolist()
    if w1[0] >= 0:
        x, y = w1
        assert H.table[img[x], img[y]] != img[G.table[x, y]]


@given(group_names, st.data())
def test_action_parity(name, data):
    G = samples.group(name)
    conj = np.ascontiguousarray(G.conj_table)
    assert (NB.first_action_comp_failure(G.table, conj) < 0).all()
    assert (NB.first_action_auto_failure(G.table, conj) < 0).all()
    bad = _corrupt(conj, data)
    assert NB.first_action_comp_failure(G.table, bad).tolist() == NP.first_action_comp_failure(G.table, bad).tolist()
    assert NB.first_action_auto_failure(G.table, bad).tolist() == NP.first_action_auto_failure(G.table, bad).tolist()


@given(group_names)
def test_close_partial_hom_parity(name):
    G = samples.group(name)
    gens = np.array(G.generators, dtype=np.int64)
    for inj in (False, True):
        i1 = np.full(G.order, -1, dtype=np.int64)
        i1[0] = 0
        i1[gens] = gens
        i2 = i1.copy()
        r1 = NB.close_partial_hom(G.table, G.table, i1, gens, inj)
        r2 = NP.close_partial_hom(G.table, G.table, i2, gens, inj)
        assert r1 == r2 and r1
        assert i1.tolist() == i2.tolist() == list(range(G.order))


@pytest.mark.parametrize("gamma, a, twisted", [
    ("Z2", "Z3", True), ("Z3", "Z2", False), ("V4", "Z2", False), ("S3", "Z3", True), ("Z4", "V4", False),
])
@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_coboundary_parity(gamma, a, twisted, degree):
    G, A = samples.group(gamma), samples.group(a)
    if twisted:
        # Z2 and S3 both act through the sign: odd elements are the involutions
        sign = G.orders == 2
        inv = inversion_image(A)
        M = make_module(G, A, np.stack([inv if s else np.arange(A.order) for s in sign], axis=1))
    else:
        M = trivial_module(G, A)
    if G.order ** (degree + 1) > 5000:
        return
    left = np.ascontiguousarray(M.left)
    d1 = NB.coboundary(G.table, left, degree)
    d2 = NP.coboundary(G.table, left, degree)
    assert np.array_equal(d1, d2)
    if degree >= 1:
        prev = NP.coboundary(G.table, left, degree - 1)
        assert not ((d2 @ prev) % M.exponent).any()
