"""Extensions, Baer sums and exact sequences."""

import numpy as np
import pytest

from weakmaps import samples
from weakmaps.classify import enumerate_extensions, extension_class_index
from weakmaps.errors import ExactnessFails, NotAnExtension, TypeMismatch
from weakmaps.exact import make_sequence
from weakmaps.extension import (
    baer_sum,
    extension_from_quotient,
    extension_isomorphism,
    make_extension,
    same_extension_class,
    split_extension,
)
from weakmaps.group import cyclic, direct_product, symmetric
from weakmaps.hom import make_action


def test_make_extension_cyclic():
    Z2, Z4 = cyclic(2), cyclic(4)
    X = make_extension(Z2, Z4, Z2, [0, 2], [0, 1, 0, 1])
    assert X.incl_pos.tolist() == [0, -1, 1, -1]
    assert X.section.tolist() == [0, 1]
    assert X.induced_action().table.tolist() == [[0, 0], [1, 1]]


def test_make_extension_errors():
    Z2, Z4 = cyclic(2), cyclic(4)
    with pytest.raises(NotAnExtension):
        make_extension(Z2, Z4, Z2, [0, 1], [0, 1, 0, 1])  # not a hom
    with pytest.raises(NotAnExtension):
        make_extension(Z2, Z4, Z2, [0, 0], [0, 1, 0, 1])
    with pytest.raises(NotAnExtension):
        make_extension(Z2, Z4, Z2, [0, 2], [0, 0, 0, 0])
    with pytest.raises(NotAnExtension):
        make_extension(Z2, Z4, Z4, [0, 2], [0, 1, 2, 3])


def test_quotient_and_split():
    S3 = symmetric(3)
    A3 = [g for g in range(6) if S3.orders[g] != 2]
    X = extension_from_quotient(S3, A3)
    assert (X.N.order, X.gamma.order) == (3, 2)
    Z2, Z3 = cyclic(2), cyclic(3)
    inv = make_action(Z2, Z3, [[0, 0], [1, 2], [2, 1]])
    Y = split_extension(Z2, inv)
    assert not Y.E.is_abelian
    assert extension_isomorphism(make_extension(X.N, X.E, X.gamma, X.incl, X.proj), X) is not None


def test_baer_sum_on_z2_by_z2():
    Z2 = cyclic(2)
    reps = enumerate_extensions(Z2, Z2)
    split = next(X for X in reps if X.E.exponent == 2)
    cyc = next(X for X in reps if X.E.exponent == 4)
    assert same_extension_class(baer_sum(cyc, cyc), split)
    assert same_extension_class(baer_sum(split, cyc), cyc)


def test_baer_sum_group_law_z3():
    # Ext(Z3, Z3) = Z3 for trivial action
    Z3 = cyclic(3)
    reps = [X for X in enumerate_extensions(Z3, Z3) if X.E.is_abelian]
    assert len(reps) == 3
    zero = next(i for i, X in enumerate(reps) if X.E.exponent == 3)
    table = np.array([[extension_class_index(baer_sum(a, b), reps) for b in reps] for a in reps])
    assert (table == table.T).all()
    assert table[zero].tolist() == list(range(3))
    assert sorted(table[(zero + 1) % 3].tolist()) == [0, 1, 2]


def test_baer_sum_needs_abelian_kernel():
    X = enumerate_extensions(cyclic(2), symmetric(3))[0]
    with pytest.raises(TypeMismatch):
        baer_sum(X, X)


def test_isomorphism_respects_ends():
    V = direct_product(cyclic(2), cyclic(2))
    Z2 = cyclic(2)
    reps = enumerate_extensions(Z2, Z2)
    assert all(X.E.order == V.order for X in reps)
    with pytest.raises(TypeMismatch):
        extension_isomorphism(reps[0], enumerate_extensions(Z2, cyclic(3))[0])


def test_sequence_checks():
    seq = make_sequence([("A", 2), ("B", 4), ("C", 2)], [[0, 2], [0, 1, 0, 1]])
    assert seq.failures() == []
    with pytest.raises(ExactnessFails) as e:
        make_sequence([("A", 2), ("B", 4), ("C", 2)], [[0, 2], [0, 0, 0, 0]])
    assert e.value.position == 1
    with pytest.raises(ExactnessFails):
        make_sequence([("A", 2), ("B", 2)], [[1, 0]])
    with pytest.raises(ExactnessFails):
        make_sequence([("A", 2), ("B", 2)], [[0, 0, 0]])


def test_sample_groups_describe():
    assert samples.describe_group(symmetric(3)) == "S3"
    assert samples.describe_group(cyclic(6)) == "Z6"
    assert samples.describe_group(samples.group("Q8")) == "Q8"
