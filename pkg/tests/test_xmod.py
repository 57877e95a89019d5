import numpy as np
import pytest
from hypothesis import given

import oracles as O
from strategies import xmod_names
from weakmaps import samples
from weakmaps.errors import CM1Fails, CM2Fails, HypothesesFail, NotAMorphism, SectionInvalid, ValidationError
from weakmaps.extension import extension_from_quotient
from weakmaps.group import cyclic, symmetric
from weakmaps.hom import conjugation_action, identity_hom, make_hom, trivial_action, trivial_hom
from weakmaps.xmod import (
    abelian_as_xmod,
    aut_xmod,
    compose_strict,
    compose_transformations,
    conjugate_morphism,
    group_as_xmod,
    identity_morphism,
    identity_transformation,
    identity_xmod,
    induced_maps,
    invert_transformation,
    is_equivalence_strict,
    iter_strict_morphisms,
    make_crossed_module,
    make_strict_morphism,
    pushout_xmod,
    split_model,
    trivial_morphism,
    validate_transformation,
    Transformation,
)


def test_aut_z3_homotopy():
    X = aut_xmod(cyclic(3))
    h = X.homotopy
    assert h.pi1.order == 2 and h.pi2.order == 3
    assert h.action.table[:, 1].tolist() == [0, 2, 1]


@pytest.mark.parametrize("name, pi1, pi2", [
    ("1", 1, 1), ("[1->S3]", 6, 1), ("[Z3->1]", 1, 3), ("[Z2=>Z2]", 1, 1), ("[A3->S3]", 2, 1),
    ("[Z2->Z4]", 2, 1), ("[Z4-2->Z4]", 2, 2), ("AUT(V4)", 6, 4), ("AUT(Z4)", 2, 4),
])
def test_homotopy_orders(name, pi1, pi2):
    h = samples.xmod(name).homotopy
    assert (h.pi1.order, h.pi2.order) == (pi1, pi2)


@given(xmod_names)
def test_sample_xmods_satisfy_axioms(name):
    X = samples.xmod(name)
    g1, g2 = X.g1.table.tolist(), X.g2.table.tolist()
    d = X.boundary.image
    assert O.is_hom(g2, g1, d.tolist())
    act = X.action.table
    for a in range(X.g2.order):
        for b in range(X.g2.order):
            assert act[b, d[a]] == X.g2.mul(X.g2.inv(a), b, a)
        for g in range(X.g1.order):
            assert d[act[a, g]] == X.g1.mul(X.g1.inv(g), int(d[a]), g)
    assert len(X.homotopy.pi1) * X.g2.order == X.g1.order * len(X.homotopy.pi2)


def test_cm1_failure():
    S3, Z1 = symmetric(3), cyclic(1)
    with pytest.raises(CM1Fails):
        make_crossed_module(S3, Z1, trivial_hom(S3, Z1), trivial_action(Z1, S3))
    with pytest.raises(CM1Fails):
        make_crossed_module(S3, S3, identity_hom(S3), trivial_action(S3, S3))


def test_cm2_failure():
    # Z2 onto a transposition: CM1 holds, but the image is not normal
    S3, Z2 = symmetric(3), cyclic(2)
    t = int(np.flatnonzero(S3.orders == 2)[0])
    with pytest.raises(CM2Fails):
        make_crossed_module(Z2, S3, make_hom(Z2, S3, [0, t]), trivial_action(S3, Z2))


def test_z2_in_z4_is_crossed():
    Z2, Z4 = cyclic(2), cyclic(4)
    X = make_crossed_module(Z2, Z4, make_hom(Z2, Z4, [0, 2]), trivial_action(Z4, Z2))
    assert X.homotopy.pi1.order == 2


def test_strict_morphism_validation():
    X = samples.xmod("[Z2->Z4]")
    Y = samples.xmod("[Z2=>Z2]")
    with pytest.raises(NotAMorphism):
        make_strict_morphism(X, Y, [0, 1], [0, 0, 0, 0])


@pytest.mark.parametrize("src, dst, expect", [
    ("[Z2=>Z2]", "1", True),
    ("[Z2->1]", "1", False),
    ("[S3=>S3]", "1", True),
])
def test_is_equivalence_strict(src, dst, expect):
    f = trivial_morphism(samples.xmod(src), samples.xmod(dst))
    assert bool(is_equivalence_strict(f)) is expect


def test_identity_and_composition():
    X = samples.xmod("AUT(Z3)")
    idm = identity_morphism(X)
    assert is_equivalence_strict(idm)
    for f in iter_strict_morphisms(X, X):
        g = compose_strict(f, idm)
        assert np.array_equal(g.p1.image, f.p1.image)
        m1, m2 = induced_maps(f)
        assert m1.domain.order == 2


@given(xmod_names)
def test_conjugation_transformations(name):
    X = samples.xmod(name)
    f = identity_morphism(X)
    zero = np.zeros(X.g1.order, dtype=np.int64)
    assert validate_transformation(identity_transformation(f), f, f)
    for a in range(X.g1.order):
        T = Transformation(a, zero)
        fa = conjugate_morphism(f, a)
        assert validate_transformation(T, f, fa)
        assert validate_transformation(invert_transformation(T, X), fa, f)
        for b in range(X.g1.order):
            S = Transformation(b, zero)
            fab = conjugate_morphism(fa, b)
            assert validate_transformation(compose_transformations(S, T, X), f, fab)


def test_bad_transformation():
    X = samples.xmod("[1->S3]")
    f = identity_morphism(X)
    t = int(np.flatnonzero(X.g1.orders == 2)[0])
    with pytest.raises(ValidationError):
        validate_transformation(Transformation(t, np.zeros(6, dtype=np.int64)), f, f)


def test_split_model_z2_in_z4():
    G = samples.xmod("[Z2->Z4]")
    ext = extension_from_quotient(cyclic(4), [0, 2])
    Gp, left, right, target = split_model(G, ext, identity_hom(G.g1))
    assert is_equivalence_strict(left) and is_equivalence_strict(right)
    assert target.g1.order == 2 and target.g2.order == 1
    with pytest.raises(SectionInvalid):
        split_model(G, ext, make_hom(G.g1, G.g1, [0, 3, 2, 1]).then(make_hom(G.g1, G.g1, [0, 2, 0, 2])))


def test_pushout_along_trivial_map():
    H = samples.xmod("[Z2->Z4]")
    G2 = cyclic(1)
    X, P = pushout_xmod(H, G2, trivial_hom(H.g2, G2), trivial_action(H.g1, G2))
    assert X.g1.order == 2 and X.g2.order == 1
    assert X.homotopy.pi1.order == H.homotopy.pi1.order


def test_pushout_along_identity_is_equivalence():
    H = samples.xmod("AUT(Z3)")
    X, P = pushout_xmod(H, H.g2, identity_hom(H.g2), H.action)
    assert is_equivalence_strict(P)


def test_pushout_hypotheses():
    H = samples.xmod("[Z4-2->Z4]~")
    G2 = cyclic(4)
    with pytest.raises(HypothesesFail):
        pushout_xmod(H, G2, identity_hom(H.g2), trivial_action(H.g1, G2))


def test_standard_constructors():
    S3 = symmetric(3)
    assert group_as_xmod(S3).homotopy.pi1.order == 6
    assert identity_xmod(S3).homotopy.pi1.order == 1
    A = abelian_as_xmod(cyclic(4))
    assert A.homotopy.pi2.order == 4
    assert conjugation_action(S3).group == S3


def test_pushout_of_surjective_boundary():
    # π2 H = {0, 2} lies in Ker p, so the pushout has trivial π2
    Z4, Z2 = cyclic(4), cyclic(2)
    red = make_hom(Z4, Z2, [0, 1, 0, 1])
    H = make_crossed_module(Z4, Z2, red, trivial_action(Z2, Z4))
    X, P = pushout_xmod(H, Z2, red, trivial_action(Z2, Z2))
    assert (H.homotopy.pi1.order, H.homotopy.pi2.order) == (1, 2)
    assert (X.homotopy.pi1.order, X.homotopy.pi2.order) == (1, 1)
    assert not is_equivalence_strict(P)
