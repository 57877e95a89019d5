"""Crossed modules, strict morphisms and transformations between them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

from .errors import (
    BoundaryNotHom,
    CM1Fails,
    CM2Fails,
    HypothesesFail,
    NotAMorphism,
    PostconditionFails,
    SectionInvalid,
    T1Fails,
    T2Fails,
    TypeMismatch,
)
from .group import (
    FiniteGroup,
    _readonly,
    direct_product,
    quotient_by_normal,
    subgroup,
    trivial_group,
)
from .hom import (
    GroupHom,
    RightAction,
    automorphism_group,
    conjugation_action,
    identity_hom,
    iter_homs,
    make_action,
    make_hom,
    trivial_action,
    trivial_hom,
)
from .semidirect import SemidirectData, check_crossed_hom, generalized_semidirect


@dataclass(frozen=True, eq=False)
class CrossedModule:
    """``∂: G2 -> G1`` with a right action of ``G1`` on ``G2``."""

    g2: FiniteGroup
    g1: FiniteGroup
    boundary: GroupHom
    action: RightAction
    label: str = ""

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrossedModule):
            return NotImplemented
        return self is other or (
            self.boundary == other.boundary and self.action == other.action
        )

    def __hash__(self) -> int:
        return hash((self.g2, self.g1))

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<CrossedModule{tag} {self.g2.order}->{self.g1.order}>"

    @cached_property
    def homotopy(self) -> "HomotopyGroups":
        return homotopy_groups(self)


def make_crossed_module(g2, g1, boundary, action, *, label: str = "") -> CrossedModule:
    if not isinstance(boundary, GroupHom):
        try:
            boundary = make_hom(g2, g1, boundary)
        except Exception as exc:
            raise BoundaryNotHom(str(exc), getattr(exc, "witness", None)) from None
    if boundary.domain != g2 or boundary.codomain != g1:
        raise BoundaryNotHom("boundary must map G2 -> G1")
    if not isinstance(action, RightAction):
        action = make_action(g1, g2, action)
    if action.group != g1 or action.space != g2:
        raise TypeMismatch("action must be an action of G1 on G2")
    bd = boundary.image
    # CM1: β^{∂α} = α^-1 β α ; entry (β, α)
    lhs = action.table[:, bd]
    rhs = g2.conj_table
    if not np.array_equal(lhs, rhs):
        beta, alpha = map(int, np.argwhere(lhs != rhs)[0])
        raise CM1Fails(f"β^∂α != α^-1 β α for α={alpha}, β={beta}", witness=(alpha, beta))
    # CM2: ∂(β^a) = a^-1 ∂β a ; entry (β, a)
    lhs = bd[action.table]
    rhs = g1.conj_table[bd]
    if not np.array_equal(lhs, rhs):
        beta, a = map(int, np.argwhere(lhs != rhs)[0])
        raise CM2Fails(f"∂(β^a) != a^-1 ∂β a for β={beta}, a={a}", witness=(beta, a))
    X = CrossedModule(g2, g1, boundary, action, label)
    ker = boundary.kernel
    if not set(ker) <= set(g2.center) or not g1.is_normal(boundary.image_set):
        raise PostconditionFails("crossed-module consequences fail")
    return X


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def group_as_xmod(G: FiniteGroup) -> CrossedModule:
    """``[1 -> G]``."""
    one = trivial_group()
    return CrossedModule(one, G, trivial_hom(one, G), trivial_action(G, one), f"[1->{G.label}]")


def abelian_as_xmod(A: FiniteGroup) -> CrossedModule:
    """``[A -> 1]``; ``A`` must be abelian."""
    one = trivial_group()
    return make_crossed_module(A, one, trivial_hom(A, one), trivial_action(one, A),
                               label=f"[{A.label}->1]")


def identity_xmod(G: FiniteGroup) -> CrossedModule:
    """``[G -> G]`` with ``∂ = id`` and conjugation action."""
    return make_crossed_module(G, G, identity_hom(G), conjugation_action(G),
                               label=f"[{G.label}=>{G.label}]")


def normal_subgroup_xmod(G: FiniteGroup, N) -> CrossedModule:
    """``[N -> G]`` for a normal subgroup with conjugation action."""
    S, incl = subgroup(G, N)
    act = conjugation_action(G).restrict_space(incl)
    return make_crossed_module(S, G, incl, act)


def aut_xmod(N: FiniteGroup) -> CrossedModule:
    """``AUT(N) = [N -> Aut(N)]``."""
    A = automorphism_group(N)
    return make_crossed_module(N, A.group, A.inner, A.action, label=f"AUT({N.label})")


def trivial_xmod() -> CrossedModule:
    one = trivial_group()
    return CrossedModule(one, one, identity_hom(one), trivial_action(one, one), "[1->1]")


def xmod_equal(X: CrossedModule, Y: CrossedModule) -> bool:
    return X == Y


# ---------------------------------------------------------------------------
# homotopy groups
# ---------------------------------------------------------------------------


class HomotopyGroups(NamedTuple):
    pi1: FiniteGroup
    proj: GroupHom  # G1 -> pi1
    pi2: FiniteGroup
    incl: GroupHom  # pi2 -> G2
    action: RightAction  # pi1 acting on pi2
    reps: np.ndarray  # minimal G1 representative of each pi1 class


def homotopy_groups(X: CrossedModule) -> HomotopyGroups:
    pi1, proj = quotient_by_normal(X.g1, X.boundary.image_set)
    pi2, incl = subgroup(X.g2, X.boundary.kernel)
    if not pi2.is_abelian:
        raise PostconditionFails("π2 is not abelian")
    reps = proj.preimage_table()
    pos = np.full(X.g2.order, -1, dtype=np.int64)
    pos[incl.image] = np.arange(pi2.order)
    full = pos[X.action.table[np.ix_(incl.image, np.arange(X.g1.order))]]
    # the action must factor through π1
    if (full < 0).any() or not np.array_equal(full, full[:, reps[proj.image]]):
        raise PostconditionFails("π1-action on π2 is not well defined")
    act = RightAction(pi1, pi2, _readonly(full[:, reps]))
    return HomotopyGroups(pi1, proj, pi2, incl, act, _readonly(reps))


# ---------------------------------------------------------------------------
# strict morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StrictMorphism:
    source: CrossedModule
    target: CrossedModule
    p2: GroupHom
    p1: GroupHom

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrictMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.p1 == other.p1 and self.p2 == other.p2)

    def __hash__(self) -> int:
        return hash((self.p1, self.p2))


def make_strict_morphism(source: CrossedModule, target: CrossedModule, p2, p1) -> StrictMorphism:
    H, G = source, target
    try:
        if not isinstance(p2, GroupHom):
            p2 = make_hom(H.g2, G.g2, p2)
        if not isinstance(p1, GroupHom):
            p1 = make_hom(H.g1, G.g1, p1)
    except Exception as exc:
        raise NotAMorphism(f"component is not a homomorphism: {exc}") from None
    if p2.domain != H.g2 or p2.codomain != G.g2 or p1.domain != H.g1 or p1.codomain != G.g1:
        raise TypeMismatch("strict morphism components have wrong groups")
    lhs = p1.image[H.boundary.image]
    rhs = G.boundary.image[p2.image]
    if not np.array_equal(lhs, rhs):
        b = int(np.flatnonzero(lhs != rhs)[0])
        raise NotAMorphism(f"p1∂ != ∂p2 at {b}", witness=("square", b))
    lhs = p2.image[H.action.table]
    rhs = G.action.table[p2.image[:, None], p1.image[None, :]]
    if not np.array_equal(lhs, rhs):
        b, h = map(int, np.argwhere(lhs != rhs)[0])
        raise NotAMorphism(f"p2(β^h) != p2(β)^p1(h) at β={b}, h={h}", witness=("equivariance", b, h))
    return StrictMorphism(H, G, p2, p1)


def identity_morphism(X: CrossedModule) -> StrictMorphism:
    return StrictMorphism(X, X, identity_hom(X.g2), identity_hom(X.g1))


def trivial_morphism(H: CrossedModule, G: CrossedModule) -> StrictMorphism:
    return StrictMorphism(H, G, trivial_hom(H.g2, G.g2), trivial_hom(H.g1, G.g1))


def compose_strict(P: StrictMorphism, Q: StrictMorphism) -> StrictMorphism:
    """``Q ∘ P`` (first ``P``)."""
    if P.target != Q.source:
        raise TypeMismatch("strict morphisms are not composable")
    return StrictMorphism(P.source, Q.target, P.p2.then(Q.p2), P.p1.then(Q.p1))


def induced_maps(P: StrictMorphism) -> tuple[GroupHom, GroupHom]:
    """``(π1 P, π2 P)``."""
    hs, ht = P.source.homotopy, P.target.homotopy
    pi1 = ht.proj.image[P.p1.image[hs.reps]]
    pos = np.full(P.target.g2.order, -1, dtype=np.int64)
    pos[ht.incl.image] = np.arange(ht.pi2.order)
    pi2 = pos[P.p2.image[hs.incl.image]]
    return (GroupHom(hs.pi1, ht.pi1, _readonly(pi1)),
            GroupHom(hs.pi2, ht.pi2, _readonly(pi2)))


def iter_strict_morphisms(H: CrossedModule, G: CrossedModule) -> Iterator[StrictMorphism]:
    """All strict morphisms ``H -> G``, ordered by ``p1`` then ``p2``."""
    for p1 in iter_homs(H.g1, G.g1):
        for p2 in iter_homs(H.g2, G.g2):
            try:
                yield make_strict_morphism(H, G, p2, p1)
            except NotAMorphism:
                continue


class EquivalenceCheck(NamedTuple):
    ok: bool
    pi1_map: GroupHom
    pi2_map: GroupHom

    def __bool__(self) -> bool:
        return self.ok


def is_equivalence_strict(P: StrictMorphism) -> EquivalenceCheck:
    m1, m2 = induced_maps(P)
    return EquivalenceCheck(m1.is_bijective and m2.is_bijective, m1, m2)


# ---------------------------------------------------------------------------
# transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Transformation:
    """``(a, θ)``: ``a ∈ G1`` and a crossed homomorphism ``θ: H1 -> G2``."""

    a: int
    theta: np.ndarray

    @property
    def is_pointed(self) -> bool:
        return self.a == 0


def validate_transformation(T: Transformation, Q: StrictMorphism, P: StrictMorphism) -> bool:
    """Check that ``T: Q ⇒ P``; raises on failure."""
    if Q.source != P.source or Q.target != P.target:
        raise TypeMismatch("transformation between morphisms with different ends")
    H, G = P.source, P.target
    th = np.asarray(T.theta, dtype=np.int64)
    a = int(T.a)
    check_crossed_hom(th, G.action.pullback(P.p1))
    bd = G.boundary.image
    # T1: a^-1 q1(h) a = p1(h) ∂θ(h)
    lhs = G.g1.conj_table[Q.p1.image, a]
    rhs = G.g1.table[P.p1.image, bd[th]]
    if not np.array_equal(lhs, rhs):
        h = int(np.flatnonzero(lhs != rhs)[0])
        raise T1Fails(f"T1 fails at h={h}", witness=h)
    # T2: q2(β)^a = p2(β) θ(∂β)
    lhs = G.action.table[Q.p2.image, a]
    rhs = G.g2.table[P.p2.image, th[H.boundary.image]]
    if not np.array_equal(lhs, rhs):
        b = int(np.flatnonzero(lhs != rhs)[0])
        raise T2Fails(f"T2 fails at β={b}", witness=b)
    if a == 0:
        mq, mp = induced_maps(Q), induced_maps(P)
        if mq[0] != mp[0] or mq[1] != mp[1]:
            raise PostconditionFails("pointed transformation changed the induced maps")
    return True


def compose_transformations(T: Transformation, S: Transformation, G: CrossedModule) -> Transformation:
    """For ``S: R ⇒ Q`` and ``T: Q ⇒ P`` return ``R ⇒ P``.

    The result is ``(ba, θ·σ^a)``; when ``a = 1`` this is the pointwise product.
    """
    a, b = int(T.a), int(S.a)
    sig = G.action.table[np.asarray(S.theta), a]
    th = G.g2.table[np.asarray(T.theta), sig]
    return Transformation(G.g1.mul(b, a), _readonly(th))


def invert_transformation(T: Transformation, G: CrossedModule) -> Transformation:
    """Inverse ``P ⇒ Q`` of ``T: Q ⇒ P``: ``(a^-1, h ↦ (θ(h)^{a^-1})^-1)``."""
    ainv = G.g1.inv(T.a)
    th = G.g2.inverse[G.action.table[np.asarray(T.theta), ainv]]
    return Transformation(ainv, _readonly(th))


def identity_transformation(P: StrictMorphism) -> Transformation:
    return Transformation(0, _readonly(np.zeros(P.source.g1.order, dtype=np.int64)))


def conjugate_morphism(Q: StrictMorphism, a: int) -> StrictMorphism:
    """``Q^a``: ``q1(h)^a`` and ``q2(β)^a``."""
    G = Q.target
    p1 = GroupHom(Q.source.g1, G.g1, _readonly(G.g1.conj_table[Q.p1.image, a]))
    p2 = GroupHom(Q.source.g2, G.g2, _readonly(G.action.table[Q.p2.image, a]))
    return StrictMorphism(Q.source, G, p2, p1)


# ---------------------------------------------------------------------------
# pushout along p: H2 -> G2
# ---------------------------------------------------------------------------


def pushout_xmod(H: CrossedModule, G2: FiniteGroup, p: GroupHom, act: RightAction, *, verify: bool = True):
    """``p_* H = [G2 -> H1 ⋉^{H2} G2]`` and the canonical map ``p_⋄``."""
    if p.domain != H.g2 or p.codomain != G2 or act.group != H.g1 or act.space != G2:
        raise HypothesesFail("p must map H2 -> G2 and H1 must act on G2")
    lhs = p.image[H.action.table]
    rhs = act.table[p.image]
    if not np.array_equal(lhs, rhs):
        b, h = map(int, np.argwhere(lhs != rhs)[0])
        raise HypothesesFail("p is not H1-equivariant", witness=("equivariance", b, h))
    lhs = act.table[:, H.boundary.image]
    rhs = G2.conj_table[:, p.image]
    if not np.array_equal(lhs, rhs):
        a, b = map(int, np.argwhere(lhs != rhs)[0])
        raise HypothesesFail("α^∂β != p(β)^-1 α p(β)", witness=("compatibility", a, b))
    data = SemidirectData(H.g1, G2, H.g2, H.boundary, p, H.action, act)
    res = generalized_semidirect(data)
    X = make_crossed_module(G2, res.group, res.d_prime, res.action)
    P = make_strict_morphism(H, X, p, res.p_prime)
    if verify:
        m1, m2 = induced_maps(P)
        ok = m1.is_bijective and m2.is_surjective
        hs = H.homotopy
        expect = {i for i, b in enumerate(hs.incl.image) if p(int(b)) == 0}
        ok = ok and set(m2.kernel) == expect
        if p.is_injective:
            ok = ok and bool(is_equivalence_strict(P))
        if not ok:
            raise PostconditionFails("pushout comparison maps fail")
    return X, P


# ---------------------------------------------------------------------------
# splitting from a section datum
# ---------------------------------------------------------------------------


def split_model(G: CrossedModule, extension, rho: GroupHom):
    """Zigzag ``G <- G' -> [π2 -> π1]`` built from a section datum ``(E, ρ)``.

    ``extension`` is an extension of ``π1 G`` by ``G2`` and ``ρ: E -> G1``
    must restrict to ``∂`` on ``G2``, make the conjugation action on ``G2``
    agree with the action through ``ρ``, and induce the identity on ``π1``.
    """
    E, incl, f = extension.E, extension.incl, extension.proj
    hg = G.homotopy
    if extension.N != G.g2 or extension.gamma != hg.pi1 or rho.domain != E or rho.codomain != G.g1:
        raise SectionInvalid("section datum has the wrong groups")
    if not np.array_equal(rho.image[incl.image], G.boundary.image):
        raise SectionInvalid("ρ does not restrict to ∂ on G2")
    # α^{ρ(x)} = x^-1 α x
    pos = np.full(E.order, -1, dtype=np.int64)
    pos[incl.image] = np.arange(G.g2.order)
    conj = pos[E.conj_table[np.ix_(incl.image, np.arange(E.order))]]
    via = G.action.table[:, rho.image]
    if not np.array_equal(conj, via):
        a, x = map(int, np.argwhere(conj != via)[0])
        raise SectionInvalid("equivariance fails", witness=(x, a))
    if not np.array_equal(hg.proj.image[rho.image], f.image):
        raise SectionInvalid("ρ does not induce the identity on π1")
    pi2, pincl = hg.pi2, hg.incl
    S = direct_product(G.g2, pi2)
    m = pi2.order
    idx = np.arange(S.order)
    alpha, c = idx // m, idx % m
    mu = GroupHom(S, E, _readonly(incl.image[alpha]))
    # E acts on both factors through ρ
    a_act = G.action.table[:, rho.image]  # (α, x)
    c_act = hg.action.table[:, f.image]  # (c, x)
    act = a_act[alpha] * m + c_act[c]
    Gp = make_crossed_module(S, E, mu, RightAction(E, S, _readonly(act)), label="G'")
    sig = GroupHom(S, G.g2, _readonly(G.g2.table[alpha, pincl.image[c]]))
    left = make_strict_morphism(Gp, G, sig, rho)
    target = make_crossed_module(pi2, hg.pi1, trivial_hom(pi2, hg.pi1), hg.action)
    right = make_strict_morphism(Gp, target, GroupHom(S, pi2, _readonly(c)), f)
    if not (is_equivalence_strict(left) and is_equivalence_strict(right)):
        raise PostconditionFails("split model legs are not equivalences")
    return Gp, left, right, target
