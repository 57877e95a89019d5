"""Desk-scale corpus: named groups, crossed modules and butterflies.

Everything here is deterministic so that tests, the acceptance suite and the
CLI agree on names and list orders.
"""

from __future__ import annotations

from itertools import islice, permutations

import numpy as np

from .abelian import ab_hom_classes, complex_of, make_complex
from .butterfly import Butterfly, flip, identity_butterfly, is_equivalence, of_strict
from .classify import enumerate_butterflies
from .group import FiniteGroup, cyclic, dihedral, klein_four, quaternion, subgroup, symmetric, trivial_group
from .hom import are_isomorphic, make_action, make_hom
from .xmod import (
    CrossedModule,
    abelian_as_xmod,
    aut_xmod,
    group_as_xmod,
    identity_xmod,
    iter_strict_morphisms,
    make_crossed_module,
    normal_subgroup_xmod,
    trivial_xmod,
)

GROUPS = {
    "1": trivial_group,
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "V4": klein_four,
    "Z6": lambda: cyclic(6),
    "S3": lambda: symmetric(3),
    "Q8": quaternion,
}


def group(name: str) -> FiniteGroup:
    return GROUPS[name]()


def doubling_xmod(twisted: bool = False) -> CrossedModule:
    """``[Z4 -> Z4]``, ``x ↦ 2x``; odd elements act by inversion when ``twisted``."""
    Z4 = cyclic(4)
    b = np.arange(4)
    t = np.stack([b, (-b) % 4 if twisted else b, b, (-b) % 4 if twisted else b], axis=1)
    return make_crossed_module(Z4, Z4, make_hom(Z4, Z4, [0, 2, 0, 2]), make_action(Z4, Z4, t),
                               label="[Z4-2->Z4]" + ("~" if twisted else ""))


def z2_in_z4() -> CrossedModule:
    Z2, Z4 = cyclic(2), cyclic(4)
    return make_crossed_module(Z2, Z4, make_hom(Z2, Z4, [0, 2]), np.zeros((2, 4), dtype=np.int64) + [[0], [1]],
                               label="[Z2->Z4]")


def _a3_in_s3() -> CrossedModule:
    S3 = symmetric(3)
    A3 = [g for g in range(S3.order) if S3.orders[g] != 2]
    return normal_subgroup_xmod(S3, A3)


XMODS = {
    "1": trivial_xmod,
    "[1->Z2]": lambda: group_as_xmod(cyclic(2)),
    "[1->Z3]": lambda: group_as_xmod(cyclic(3)),
    "[1->S3]": lambda: group_as_xmod(symmetric(3)),
    "[Z2->1]": lambda: abelian_as_xmod(cyclic(2)),
    "[Z3->1]": lambda: abelian_as_xmod(cyclic(3)),
    "[V4->1]": lambda: abelian_as_xmod(klein_four()),
    "[Z2=>Z2]": lambda: identity_xmod(cyclic(2)),
    "[S3=>S3]": lambda: identity_xmod(symmetric(3)),
    "[A3->S3]": _a3_in_s3,
    "[Z2->Z4]": z2_in_z4,
    "[Z4-2->Z4]": doubling_xmod,
    "[Z4-2->Z4]~": lambda: doubling_xmod(True),
    "AUT(Z3)": lambda: aut_xmod(cyclic(3)),
    "AUT(Z4)": lambda: aut_xmod(cyclic(4)),
    "AUT(V4)": lambda: aut_xmod(klein_four()),
}

# crossed modules with a nonzero Postnikov class
NONSPLIT_XMODS = ("[Z4-2->Z4]~",)


def xmod(name: str) -> CrossedModule:
    return XMODS[name]()


def desk_xmods() -> dict[str, CrossedModule]:
    return {k: f() for k, f in XMODS.items()}


def zero_braiding(X: CrossedModule) -> np.ndarray | None:
    """The constant braiding ``{x, y} = 1``; meets ``∂{x,y} = [x,y]`` when ``G1`` is abelian."""
    if not X.g1.is_abelian:
        return None
    return np.zeros((X.g1.order, X.g1.order), dtype=np.int64)


def commutator_braiding(X: CrossedModule) -> np.ndarray | None:
    """``{x, y} = ∂^-1(x y x^-1 y^-1)`` when ``∂`` is bijective."""
    if not X.boundary.is_bijective:
        return None
    G = X.g1
    n = G.order
    ar = np.arange(n)
    t, inv = G.table, G.inverse
    comm = t[t[t[ar[:, None], ar[None, :]], inv[:, None]], inv[None, :]]
    back = X.boundary.inverse_map().image
    return back[comm]


# ---------------------------------------------------------------------------
# butterfly corpus
# ---------------------------------------------------------------------------

CORPUS_XMODS = (
    "1", "[1->Z2]", "[1->Z3]", "[Z2->1]", "[Z3->1]", "[Z2=>Z2]", "[A3->S3]",
    "[Z2->Z4]", "[Z4-2->Z4]", "[Z4-2->Z4]~", "AUT(Z3)", "AUT(Z4)",
)


def butterfly_corpus(*, max_e: int = 64, per_pair: int = 3) -> list[tuple[str, Butterfly]]:
    """Named butterflies between desk crossed modules.

    Sources: identities, strict morphisms, enumerated butterflies out of
    discrete groups (these include non-split ones), abelian Ext classes and
    flips of equivalences.
    """
    X = {k: XMODS[k]() for k in CORPUS_XMODS}
    out: list[tuple[str, Butterfly]] = []
    seen: set[str] = set()

    def add(name: str, P: Butterfly) -> None:
        if P.E.order <= max_e and name not in seen:
            seen.add(name)
            out.append((name, P))

    for k, H in X.items():
        add(f"id{k}", identity_butterfly(H))
    for a, H in X.items():
        for b, G in X.items():
            if a == b or H.g1.order * G.g2.order > max_e:
                continue
            for i, f in enumerate(islice(iter_strict_morphisms(H, G), per_pair)):
                add(f"strict{a}{b}#{i}", of_strict(f))
    for gname in ("Z2", "Z3"):
        gamma = group(gname)
        for b in ("[Z2->1]", "[Z3->1]", "AUT(Z3)", "[Z4-2->Z4]", "[Z2->Z4]"):
            G = X[b]
            if gamma.order * G.g2.order > 16:
                continue
            for i, P in enumerate(enumerate_butterflies(gamma, G).reps[:per_pair]):
                add(f"bf{gname}{b}#{i}", P.to_butterfly())
    Z2 = cyclic(2)
    cls = ab_hom_classes(complex_of(Z2), make_complex(Z2, trivial_group()))
    for i, P in enumerate(cls.reps):
        add(f"ext[1->Z2][Z2->1]#{i}", P)
    for name, P in list(out):
        if name.startswith("id"):
            continue
        if is_equivalence(P):
            add(f"flip({name})", flip(P))
    return out


def composable_pairs(corpus, limit: int | None = None):
    """``(name_q, Q, name_p, P)`` with ``Q: K -> H`` and ``P: H -> G``."""
    pairs = []
    for nq, Q in corpus:
        for np_, P in corpus:
            if Q.G == P.H:
                pairs.append((nq, Q, np_, P))
                if limit is not None and len(pairs) >= limit:
                    return pairs
    return pairs


def composable_triples(corpus, limit: int | None = None, max_e: int = 64):
    out = []
    for nr, R, nq, Q in composable_pairs(corpus):
        for np_, P in corpus:
            if Q.G != P.H or nr.startswith("id") and nq.startswith("id"):
                continue
            if R.E.order * Q.E.order * P.E.order > max_e * max_e:
                continue
            out.append((R, Q, P))
            if limit is not None and len(out) >= limit:
                return out
    return out


def ext_examples() -> tuple[Butterfly, Butterfly]:
    """``[1->Z2] -> [Z2->1]`` with ``E = Z2 x Z2`` (split) and ``E = Z4``."""
    reps = [P.to_butterfly() for P in enumerate_butterflies(cyclic(2), abelian_as_xmod(cyclic(2))).reps]
    split = next(P for P in reps if P.E.exponent == 2)
    nonsplit = next(P for P in reps if P.E.exponent == 4)
    return split, nonsplit


def _named_nonabelian():
    return (("S3", symmetric(3)), ("D4", dihedral(4)), ("Q8", quaternion()),
            ("D5", dihedral(5)), ("A4", _alternating4()), ("D6", dihedral(6)))


def _alternating4() -> FiniteGroup:
    # symmetric(4) lists permutations in lexicographic order
    perms = list(permutations(range(4)))
    even = [i for i, p in enumerate(perms)
            if sum(p[a] > p[b] for a in range(4) for b in range(a + 1, 4)) % 2 == 0]
    return subgroup(symmetric(4), even)[0]


def describe_group(G: FiniteGroup) -> str:
    """Short isomorphism-type name for desk-size groups."""
    if G.order == 1:
        return "1"
    if G.is_abelian:
        return "x".join(f"Z{d}" for d in G.abelian_invariants)
    if G.order <= 12:
        for name, H in _named_nonabelian():
            if H.order == G.order and are_isomorphic(G, H):
                return name
    return f"nonabelian group of order {G.order}"
