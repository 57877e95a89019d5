import itertools

import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import oracles as O
from strategies import abelian_names
from weakmaps import samples
from weakmaps.group import cyclic, direct_product
from weakmaps.zlinalg import (
    abelian_decomposition,
    ext_invariants,
    hom_invariants,
    image_key,
    kernel_mod,
    smith_mod,
    smith_z,
)

small_mats = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(-9, 9)))


@given(small_mats)
def test_smith_z_invariants(A):
    s = smith_z(A.tolist())
    nz = [d for d in s.diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert tuple(d for d in nz) == O.invariant_factors(A.tolist())
    V, Vi = np.array(s.V, dtype=object), np.array(s.Vinv, dtype=object)
    assert (V @ Vi == np.eye(V.shape[0], dtype=object)).all()


@given(small_mats, st.sampled_from([2, 4, 6, 12]))
def test_smith_mod_unimodular(A, E):
    s = smith_mod(A, E)
    D = (s.U @ A @ s.V) % E
    off = D.copy()
    np.fill_diagonal(off, 0)
    assert not off.any()
    d = np.diag(D)
    assert all(E % int(g) == 0 if g else True for g in d)


@given(small_mats, st.sampled_from([2, 3, 4, 6]))
def test_kernel_mod_brute(A, E):
    nc = A.shape[1]
    brute = {v for v in itertools.product(range(E), repeat=nc) if not ((A @ np.array(v)) % E).any()}
    K = kernel_mod(A, E)
    span = {tuple(np.zeros(nc, dtype=np.int64))}
    for j in range(K.shape[1]):
        span = {tuple((np.array(v) + k * K[:, j]) % E) for v in span for k in range(E)}
    assert span == brute


@given(small_mats, st.sampled_from([2, 4, 6]))
def test_image_key_brute(B, E):
    n = B.shape[0]
    image = {tuple(np.zeros(n, dtype=np.int64))}
    for j in range(B.shape[1]):
        image = {tuple((np.array(v) + k * B[:, j]) % E) for v in image for k in range(E)}
    key = image_key(B, E, n)
    for v in itertools.product(range(E), repeat=n):
        assert (not key.key(np.array(v)).any()) == (v in image)


@given(abelian_names)
def test_decomposition_is_isomorphism(name):
    A = samples.group(name)
    dec = abelian_decomposition(A)
    assert int(np.prod(dec.invariants, dtype=np.int64)) == A.order
    # coordinates add under the group law
    mod = np.asarray(dec.invariants, dtype=np.int64)
    for a in range(A.order):
        for b in range(A.order):
            assert np.array_equal((dec.coords[a] + dec.coords[b]) % mod if mod.size else dec.coords[a],
                                  dec.coords[A.table[a, b]])
    assert all(dec.element(dec.coords[a]) == a for a in range(A.order))


def test_decomposition_of_product():
    A = direct_product(cyclic(2), cyclic(4), cyclic(3))
    assert abelian_decomposition(A).invariants == (2, 12)


def test_hom_ext_invariants():
    assert ext_invariants((2,), (2,)) == (2,)
    assert ext_invariants((3,), (2,)) == ()
    assert ext_invariants((2, 2), (4,)) == (2, 2)
    assert hom_invariants((4,), (6,)) == (2,)
    for m, n in [((2,), (4,)), ((2, 2), (2,)), ((6,), (4,))]:
        assert int(np.prod(ext_invariants(m, n))) == O.ext1_order(m, n)
