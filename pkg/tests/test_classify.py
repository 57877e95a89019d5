"""Extension enumeration, Baer products and butterflies out of discrete groups."""

import numpy as np
import pytest

import oracles as O
from weakmaps import samples
from weakmaps.classify import (
    act_ext,
    act_h2,
    baer_product,
    butterfly_class_index,
    butterfly_to_group,
    difference_butterflies,
    difference_ext,
    enumerate_butterflies,
    enumerate_extensions,
    extension_class_index,
    extension_psi,
    group_butterfly_iso,
    lift_via_section,
    make_semi_exact,
    out_group,
    semi_exact_of,
    verify_torsor,
)
from weakmaps.errors import ChiMismatch, NotSemiExact, PsiMismatch, TypeMismatch
from weakmaps.group import cyclic, symmetric
from weakmaps.hom import make_hom


@pytest.mark.parametrize("gamma,n", [("Z2", "Z2"), ("Z2", "Z3"), ("Z3", "Z2"), ("Z2", "Z4"),
                                     ("Z2", "V4"), ("Z4", "Z2"), ("Z2", "S3")])
def test_extension_count_matches_schreier(gamma, n):
    G, N = samples.group(gamma), samples.group(n)
    brute = O.schreier_extensions(G.table.tolist(), N.table.tolist())
    assert len(enumerate_extensions(G, N)) == len(brute)


def test_extensions_are_pairwise_inequivalent():
    reps = enumerate_extensions(cyclic(2), cyclic(4))
    for i, X in enumerate(reps):
        assert extension_class_index(X, reps) == i


def test_psi_filter_partitions():
    Z2, Z3 = cyclic(2), cyclic(3)
    out = out_group(Z3)
    assert out.group.order == 2
    by_psi = [enumerate_extensions(Z2, Z3, make_hom(Z2, out.group, [0, s])) for s in range(2)]
    assert sum(map(len, by_psi)) == len(enumerate_extensions(Z2, Z3))
    for s, reps in enumerate(by_psi):
        assert all(extension_psi(X, out).image.tolist() == [0, s] for X in reps)


def test_psi_of_s3_is_trivial():
    # Out(S3) = 1
    assert out_group(symmetric(3)).group.order == 1


def _ext_z4_by_z2():
    # cyclic 1 -> Z2 -> Z4 -> Z2 -> 1
    Z2, Z4 = cyclic(2), cyclic(4)
    return make_semi_exact(Z2, Z4, Z2, [0, 2], [0, 1, 0, 1])


def test_semi_exact_accepts_extension():
    S = _ext_z4_by_z2()
    assert S.kernel == (0, 2)
    assert S.conj_on_m().shape == (2, 4)


def test_semi_exact_rejects():
    Z2, Z4 = cyclic(2), cyclic(4)
    with pytest.raises(NotSemiExact):
        make_semi_exact(Z2, Z4, Z2, [0, 2], [0, 0, 0, 0])
    with pytest.raises(NotSemiExact):
        # Z2 sits inside the kernel {0} only at 0: not a complex
        make_semi_exact(Z2, Z4, Z4, [0, 2], [0, 1, 2, 3])


def test_baer_product_sequence_is_exact():
    S = _ext_z4_by_z2()
    bp = baer_product(S, S)
    assert bp.sequence.failures() == []
    assert bp.group.order == 4


def test_baer_product_psi_mismatch():
    Z2, Z3 = cyclic(2), cyclic(3)
    split, twisted = (enumerate_extensions(Z2, Z3, make_hom(Z2, out_group(Z3).group, [0, s]))[0]
                      for s in range(2))
    with pytest.raises(PsiMismatch):
        baer_product(semi_exact_of(split), semi_exact_of(twisted))
    with pytest.raises(PsiMismatch):
        difference_ext(split, twisted)


@pytest.mark.parametrize("gamma,n", [("Z2", "Z4"), ("Z2", "Z2"), ("Z2", "Q8")])
def test_difference_then_act_recovers(gamma, n):
    G, N = samples.group(gamma), samples.group(n)
    reps = enumerate_extensions(G, N)
    out = out_group(N)
    for E0 in reps:
        for E in reps:
            if extension_psi(E0, out) != extension_psi(E, out):
                continue
            D = difference_ext(E0, E)
            assert D.N.order == len(N.center)
            assert extension_class_index(act_ext(E0, D), reps) == reps.index(E)


def test_difference_with_self_splits():
    for X in enumerate_extensions(cyclic(2), cyclic(4)):
        D = difference_ext(X, X)
        # an involution over the generator of Z2 splits the sequence
        assert any(D.E.orders[x] == 2 for x in np.flatnonzero(D.proj.image == 1))


def test_group_butterfly_round_trip():
    G = samples.xmod("AUT(Z3)")
    for P in enumerate_butterflies(cyclic(2), G).reps:
        Q = butterfly_to_group(P.to_butterfly())
        assert group_butterfly_iso(P, Q) is not None


def test_butterfly_classes_are_distinct():
    cls = enumerate_butterflies(cyclic(2), samples.xmod("[Z2->1]"))
    # H^2(Z2, Z2) = Z2 and χ is forced
    assert len(cls) == 2
    for i, P in enumerate(cls.reps):
        assert butterfly_class_index(P, cls.reps) == i


@pytest.mark.parametrize("gamma,x", [("Z2", "[Z2->1]"), ("Z2", "AUT(Z3)"), ("Z3", "[Z3->1]"),
                                     ("Z2", "[Z4-2->Z4]")])
def test_torsor(gamma, x):
    reports = verify_torsor(samples.group(gamma), samples.xmod(x))
    assert reports and all(r.ok for r in reports)
    assert all(r.fiber_size == r.h2_order for r in reports)


def test_difference_needs_same_chi():
    G = samples.xmod("AUT(Z3)")
    cls = enumerate_butterflies(cyclic(2), G)
    by = list(cls.by_chi.values())
    assert len(by) == 2
    with pytest.raises(ChiMismatch):
        difference_butterflies(cls.reps[by[0][0]], cls.reps[by[1][0]])


def test_act_h2_rejects_wrong_kernel():
    G = samples.xmod("[Z2->1]")
    P0 = enumerate_butterflies(cyclic(2), G).reps[0]
    wrong = enumerate_extensions(cyclic(2), cyclic(3))[0]
    with pytest.raises(TypeMismatch):
        act_h2(P0, wrong)


def test_lift_via_section_hits_fiber():
    G = samples.xmod("[Z2->1]")
    Z2 = cyclic(2)
    cls = enumerate_butterflies(Z2, G)
    chi = make_hom(Z2, G.g1, [0, 0])
    for K in enumerate_extensions(Z2, G.homotopy.pi2):
        P = lift_via_section(chi, K, G)
        assert butterfly_class_index(P, cls.reps) >= 0
        assert np.array_equal(P.chi().image, [0, 0])
