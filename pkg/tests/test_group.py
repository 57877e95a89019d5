import pytest
from hypothesis import given, strategies as st

import oracles as O
from strategies import group_names, relabelled
from weakmaps import samples
from weakmaps.errors import (
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotHomomorphism,
    NotNormal,
    SizeLimit,
    ValidationError,
)
from weakmaps.config import size_limit
from weakmaps.group import (
    coset_labels,
    cyclic,
    dihedral,
    direct_product,
    klein_four,
    make_group,
    quaternion,
    quotient_by_normal,
    subgroup,
    symmetric,
    trivial_group,
)
from weakmaps.hom import (
    automorphism_group,
    conjugation_action,
    find_hom,
    isomorphism_search,
    iter_homs,
    make_action,
    make_hom,
    trivial_action,
)


def test_cyclic_inverse():
    Z4 = make_group(O.cyclic_table(4))
    assert Z4.inverse[1] == 3
    assert Z4.mul(1, 1, 1, 1) == 0
    assert Z4.power(1, -1) == 3


@pytest.mark.parametrize("table, exc", [
    ([[0, 1], [1, 1]], NoInverse),
    ([[1, 1], [1, 1]], NoIdentity),
    ([[0, 1, 2]], MalformedTable),
    ([[0, 1], [1, 2]], MalformedTable),
])
def test_bad_tables(table, exc):
    with pytest.raises(exc):
        make_group(table)


def test_identity_is_relabelled_to_zero():
    G = make_group([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
    assert G.table[0].tolist() == [0, 1, 2]


def test_nonassociative_latin_square():
    # a loop of order 5 that is not a group
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    assert not O.is_group_table(t)
    with pytest.raises(NotAssociative) as ei:
        make_group(t)
    a, b, c = ei.value.witness
    assert t[t[a][b]][c] != t[a][t[b][c]]


def test_size_limit():
    with size_limit(5):
        with pytest.raises(SizeLimit):
            cyclic(6)
    assert cyclic(6).order == 6


@pytest.mark.parametrize("G, inv", [
    (cyclic(6), (6,)), (klein_four(), (2, 2)), (direct_product(cyclic(2), cyclic(4)), (2, 4)), (direct_product(cyclic(2), cyclic(3)), (6,)),
    (trivial_group(), ()),
])
def test_abelian_invariants(G, inv):
    assert G.is_abelian
    assert G.abelian_invariants == inv


def test_standard_families():
    assert symmetric(3).order == 6 and not symmetric(3).is_abelian
    assert dihedral(4).order == 8 and len(dihedral(4).center) == 2
    Q = quaternion()
    assert sorted(Q.orders.tolist()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert isomorphism_search(dihedral(4), Q) is None
    assert isomorphism_search(cyclic(6), symmetric(3)) is None
    assert isomorphism_search(cyclic(6), direct_product(cyclic(2), cyclic(3))) is not None


def test_quotient_s3_by_a3():
    S3 = symmetric(3)
    A3 = [x for x in range(6) if S3.orders[x] != 2]
    Q, proj = quotient_by_normal(S3, A3)
    assert Q.order == 2
    assert set(proj.kernel) == set(A3)
    assert len(set(coset_labels(S3, A3).tolist())) == 2


def test_quotient_requires_normal():
    S3 = symmetric(3)
    t = next(x for x in range(6) if S3.orders[x] == 2)
    with pytest.raises(NotNormal):
        quotient_by_normal(S3, [0, t])


def test_subgroup_inclusion():
    Z4 = cyclic(4)
    K, incl = subgroup(Z4, [0, 2])
    assert K.order == 2 and incl.is_injective


def test_hom_validation():
    Z4, Z3 = cyclic(4), cyclic(3)
    with pytest.raises(NotHomomorphism):
        make_hom(Z4, Z3, [0, 1, 2, 0])
    assert make_hom(Z4, Z3, [0, 0, 0, 0]).is_trivial


@given(group_names, group_names)
def test_iter_homs_matches_brute(a, b):
    G, H = samples.group(a), samples.group(b)
    if G.order ** 2 * H.order > 2000 and G.order > 4:
        return
    found = {tuple(f.image.tolist()) for f in iter_homs(G, H)}
    for img in found:
        assert O.is_hom(G.table.tolist(), H.table.tolist(), list(img))
    if G.order <= 4:
        import itertools
        brute = {(0, *r) for r in itertools.product(range(H.order), repeat=G.order - 1)
                 if O.is_hom(G.table.tolist(), H.table.tolist(), (0, *r))}
        assert found == brute


@given(relabelled())
def test_relabelling_is_isomorphic(data):
    G, G2, perm = data
    f = isomorphism_search(G, G2)
    assert f is not None
    assert O.is_hom(G.table.tolist(), G2.table.tolist(), f.image.tolist())
    assert G.order_profile == G2.order_profile
    assert G.abelian_invariants == G2.abelian_invariants if G.is_abelian else True


@given(relabelled())
def test_group_invariants_match_oracles(data):
    _, G, _ = data
    t = G.table.tolist()
    assert O.is_group_table(t)
    assert O.element_orders(t) == G.orders.tolist()
    assert O.is_abelian(t) == G.is_abelian
    assert all(t[x][G.inverse[x]] == 0 for x in range(G.order))


def test_automorphism_group_orders():
    assert automorphism_group(cyclic(3)).group.order == 2
    assert automorphism_group(klein_four()).group.order == 6
    assert automorphism_group(symmetric(3)).group.order == 6


def test_actions():
    S3 = symmetric(3)
    conj = conjugation_action(S3)
    assert not conj.is_trivial
    Z2, Z3 = cyclic(2), cyclic(3)
    make_action(Z2, Z3, [[0, 0], [1, 2], [2, 1]])
    assert trivial_action(Z2, Z3).is_trivial
    with pytest.raises(ValidationError):
        make_action(Z2, Z3, [[0, 0], [1, 0], [2, 2]])


@given(st.integers(1, 12))
def test_cyclic_find_hom(n):
    Zn = cyclic(n)
    assert find_hom(Zn, Zn, fixed={1 % n: (n - 1) % n} if n > 1 else None) is not None
