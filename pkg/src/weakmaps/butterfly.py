"""Butterflies between crossed modules and their calculus.

A butterfly ``H -> G`` is a group ``E`` with maps

    ι: G2 -> E,  κ: H2 -> E,  σ: E -> H1,  ρ: E -> G1

such that ``G2 -> E -> H1`` is short exact, ``H2 -> E -> G1`` is a complex,
both triangles commute with the boundaries, and conjugation in ``E`` is
compatible with the actions through ``ρ`` and ``σ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import (
    BraidingConventionFails,
    EquivarianceFails,
    NESWNotExact,
    NotAnEquivalence,
    NotASection,
    NotBraided,
    NotCommutative,
    NotComplex,
    PostconditionFails,
    PrecondFails,
    TypeMismatch,
)
from .exact import ExactSequence, make_sequence
from .group import FiniteGroup, _readonly, coset_labels, direct_product, quotient_by_normal, subgroup
from .hom import GroupHom, RightAction, find_hom, identity_hom, iter_homs, make_action, make_hom
from .semidirect import (
    SemidirectData,
    fiber_product,
    generalized_semidirect,
    semidirect_product,
)
from .xmod import (
    CrossedModule,
    StrictMorphism,
    identity_morphism,
    induced_maps,
    make_crossed_module,
    make_strict_morphism,
    trivial_morphism,
)


def _pos(f: GroupHom) -> np.ndarray:
    """Inverse of an injective map on its image; ``-1`` off the image."""
    pos = np.full(f.codomain.order, -1, dtype=np.int64)
    pos[f.image] = np.arange(f.domain.order)
    return pos


@dataclass(frozen=True, eq=False)
class Butterfly:
    H: CrossedModule
    G: CrossedModule
    E: FiniteGroup
    iota: GroupHom
    kappa: GroupHom
    sigma: GroupHom
    rho: GroupHom

    def __repr__(self) -> str:
        return f"<Butterfly |E|={self.E.order} {self.H!r} -> {self.G!r}>"

    @cached_property
    def iota_pos(self) -> np.ndarray:
        return _pos(self.iota)

    @cached_property
    def section(self) -> np.ndarray:
        """Minimal set-theoretic section of ``σ``."""
        return self.sigma.preimage_table()


def make_butterfly(H, G, E, iota, kappa, sigma, rho, *, check_actions: bool = True) -> Butterfly:
    """Validate the butterfly axioms, reporting the first failure with a witness."""
    iota = iota if isinstance(iota, GroupHom) else make_hom(G.g2, E, iota)
    kappa = kappa if isinstance(kappa, GroupHom) else make_hom(H.g2, E, kappa)
    sigma = sigma if isinstance(sigma, GroupHom) else make_hom(E, H.g1, sigma)
    rho = rho if isinstance(rho, GroupHom) else make_hom(E, G.g1, rho)
    if (iota.domain != G.g2 or iota.codomain != E or kappa.domain != H.g2
            or kappa.codomain != E or sigma.domain != E or sigma.codomain != H.g1
            or rho.domain != E or rho.codomain != G.g1):
        raise TypeMismatch("butterfly maps have the wrong groups")
    # triangles
    bad = np.flatnonzero(sigma.image[kappa.image] != H.boundary.image)
    if bad.size:
        raise NotCommutative("σκ != ∂ on H2", witness=("sigma-kappa", int(bad[0])))
    bad = np.flatnonzero(rho.image[iota.image] != G.boundary.image)
    if bad.size:
        raise NotCommutative("ρι != ∂ on G2", witness=("rho-iota", int(bad[0])))
    bad = np.flatnonzero(rho.image[kappa.image] != 0)
    if bad.size:
        raise NotComplex("ρκ is not trivial", witness=int(bad[0]))
    if not iota.is_injective:
        raise NESWNotExact("ι is not injective", witness=("iota", iota.kernel[1]))
    if not sigma.is_surjective:
        missing = sorted(set(range(H.g1.order)) - set(sigma.image_set))
        raise NESWNotExact("σ is not surjective", witness=("sigma", missing[0]))
    if set(sigma.kernel) != set(iota.image_set):
        diff = sorted(set(sigma.kernel) ^ set(iota.image_set))
        raise NESWNotExact("Ker σ != Im ι", witness=("middle", diff[0]))
    P = Butterfly(H, G, E, iota, kappa, sigma, rho)
    if check_actions:
        # ι(α^{ρ(x)}) = x^-1 ι(α) x ; entries (α, x)
        lhs = iota.image[G.action.table[:, rho.image]]
        rhs = E.conj_table[iota.image]
        if not np.array_equal(lhs, rhs):
            a, x = map(int, np.argwhere(lhs != rhs)[0])
            raise EquivarianceFails("ι is not equivariant", witness=(x, a))
        lhs = kappa.image[H.action.table[:, sigma.image]]
        rhs = E.conj_table[kappa.image]
        if not np.array_equal(lhs, rhs):
            b, x = map(int, np.argwhere(lhs != rhs)[0])
            raise EquivarianceFails("κ is not equivariant", witness=(x, b))
        # consequences: Im ι commutes with Ker ρ, Im κ with Ker σ
        t = E.table
        for img, ker in ((iota.image, rho.kernel), (kappa.image, sigma.kernel)):
            k = np.asarray(ker)
            if not np.array_equal(t[np.ix_(img, k)], t[np.ix_(k, img)].T):
                raise PostconditionFails("commutation consequences fail")
    return P


@dataclass(frozen=True)
class ButterflyIso:
    f: GroupHom


def is_butterfly_iso(P: Butterfly, Q: Butterfly, f: GroupHom) -> bool:
    return bool(
        f.domain == P.E and f.codomain == Q.E and f.is_bijective
        and np.array_equal(f.image[P.iota.image], Q.iota.image)
        and np.array_equal(f.image[P.kappa.image], Q.kappa.image)
        and np.array_equal(Q.sigma.image[f.image], P.sigma.image)
        and np.array_equal(Q.rho.image[f.image], P.rho.image)
    )


def find_isomorphism(P: Butterfly, Q: Butterfly) -> ButterflyIso | None:
    """Search for ``f: E -> E'`` commuting with all four maps."""
    if P.H != Q.H or P.G != Q.G:
        raise TypeMismatch("butterflies with different source or target")
    if P.E.order != Q.E.order:
        return None
    fixed = {}
    for g in P.G.g2.generators:
        fixed.setdefault(int(P.iota(g)), []).append(int(Q.iota(g)))
    for b in P.H.g2.generators:
        fixed.setdefault(int(P.kappa(b)), []).append(int(Q.kappa(b)))
    pins = {}
    for k, vs in fixed.items():
        if len(set(vs)) > 1:
            return None
        pins[k] = vs[0]
    key = Q.sigma.image * Q.G.g1.order + Q.rho.image
    buckets: dict[int, np.ndarray] = {}
    for k in np.unique(key):
        buckets[int(k)] = np.flatnonzero(key == k)
    empty = np.zeros(0, dtype=np.int64)

    def allowed(x):
        return buckets.get(int(P.sigma(x)) * Q.G.g1.order + int(P.rho(x)), empty)

    if P.E.order_profile != Q.E.order_profile:
        return None
    f = find_hom(P.E, Q.E, fixed=pins, allowed=allowed, injective=True)
    if f is None:
        return None
    if not is_butterfly_iso(P, Q, f):
        raise PostconditionFails("search returned a map that is not a butterfly isomorphism")
    return ButterflyIso(f)


def butterflies_isomorphic(P: Butterfly, Q: Butterfly) -> bool:
    return find_isomorphism(P, Q) is not None


# ---------------------------------------------------------------------------
# strict morphisms as split butterflies
# ---------------------------------------------------------------------------


def of_strict(P: StrictMorphism) -> Butterfly:
    """``E = H1 ⋉ G2`` with ``ι = (1, id)``, ``σ = pr1``,
    ``κ(β) = (∂β, p2(β)^-1)`` and ``ρ(x, α) = p1(x) ∂α``."""
    H, G = P.source, P.target
    m = G.g2.order
    E = semidirect_product(H.g1, G.g2, G.action.pullback(P.p1))
    idx = np.arange(E.order)
    x, a = idx // m, idx % m
    iota = GroupHom(G.g2, E, _readonly(np.arange(m)))
    sigma = GroupHom(E, H.g1, _readonly(x))
    kappa = GroupHom(H.g2, E, _readonly(H.boundary.image * m + G.g2.inverse[P.p2.image]))
    rho = GroupHom(E, G.g1, _readonly(G.g1.table[P.p1.image[x], G.boundary.image[a]]))
    return make_butterfly(H, G, E, iota, kappa, sigma, rho)


def canonical_splitting(B: Butterfly) -> GroupHom:
    """The splitting ``h ↦ (h, 1)`` of a butterfly produced by ``of_strict``."""
    m = B.G.g2.order
    return make_hom(B.H.g1, B.E, np.arange(B.H.g1.order) * m)


def identity_butterfly(X: CrossedModule) -> Butterfly:
    return of_strict(identity_morphism(X))


def trivial_butterfly(H: CrossedModule, G: CrossedModule) -> Butterfly:
    return of_strict(trivial_morphism(H, G))


def splitting_to_strict(P: Butterfly, s: GroupHom):
    """Strict morphism from a homomorphic section ``s`` of ``σ``, together
    with the isomorphism ``of_strict(result) -> P``, ``(h, g) ↦ s(h) ι(g)``."""
    if not isinstance(s, GroupHom):
        try:
            s = make_hom(P.H.g1, P.E, s)
        except Exception:
            raise NotASection("s is not a homomorphism") from None
    if s.domain != P.H.g1 or s.codomain != P.E:
        raise NotASection("s has the wrong groups")
    if not np.array_equal(P.sigma.image[s.image], np.arange(P.H.g1.order)):
        raise NotASection("σ ∘ s != id")
    E, H, G = P.E, P.H, P.G
    p1 = GroupHom(H.g1, G.g1, _readonly(P.rho.image[s.image]))
    # p2(β) = ι^-1(κ(β)^-1 s(∂β))
    w = E.table[E.inverse[P.kappa.image], s.image[H.boundary.image]]
    p2 = P.iota_pos[w]
    if (p2 < 0).any():
        raise PostconditionFails("κ(β)^-1 s(∂β) left Im ι")
    Q = make_strict_morphism(H, G, GroupHom(H.g2, G.g2, _readonly(p2)), p1)
    B = of_strict(Q)
    m = G.g2.order
    idx = np.arange(B.E.order)
    f = GroupHom(B.E, E, _readonly(E.table[s.image[idx // m], P.iota.image[idx % m]]))
    if not is_butterfly_iso(B, P, f):
        raise PostconditionFails("of_strict(result) is not isomorphic to P")
    return Q, ButterflyIso(f)


def iter_splittings(P: Butterfly):
    """Homomorphic sections of ``σ``."""
    buckets = [np.flatnonzero(P.sigma.image == h) for h in range(P.H.g1.order)]
    for s in iter_homs(P.H.g1, P.E, allowed=lambda h: buckets[h]):
        if np.array_equal(P.sigma.image[s.image], np.arange(P.H.g1.order)):
            yield s


def is_split(P: Butterfly) -> bool:
    return next(iter_splittings(P), None) is not None


# ---------------------------------------------------------------------------
# span, induced maps
# ---------------------------------------------------------------------------


def span_of(P: Butterfly):
    """``(𝔼, left, right)`` with ``𝔼 = [H2 × G2 -> E]``."""
    H, G, E = P.H, P.G, P.E
    S = direct_product(H.g2, G.g2)
    m = G.g2.order
    idx = np.arange(S.order)
    b, a = idx // m, idx % m
    mu = GroupHom(S, E, _readonly(E.table[P.kappa.image[b], P.iota.image[a]]))
    act = H.action.table[:, P.sigma.image][b] * m + G.action.table[:, P.rho.image][a]
    X = make_crossed_module(S, E, mu, RightAction(E, S, _readonly(act)))
    left = make_strict_morphism(X, H, GroupHom(S, H.g2, _readonly(b)), P.sigma)
    right = make_strict_morphism(X, G, GroupHom(S, G.g2, _readonly(a)), P.rho)
    return X, left, right


def pi1_map(P: Butterfly) -> GroupHom:
    hH, hG = P.H.homotopy, P.G.homotopy
    # class of ρ(y) depends only on the class of σ(y)
    src = hH.proj.image[P.sigma.image]
    dst = hG.proj.image[P.rho.image]
    table = np.full(hH.pi1.order, -1, dtype=np.int64)
    table[src] = dst
    if not np.array_equal(table[src], dst):
        raise PostconditionFails("π1 map is not well defined")
    return make_hom(hH.pi1, hG.pi1, table)


def pi2_map(P: Butterfly) -> GroupHom:
    """``β ↦ ι^-1(κ(β)^-1)``; the inverse matches ``κ(β) = (∂β, p2(β)^-1)`` in
    ``of_strict`` so that strict morphisms keep their induced map."""
    hH, hG = P.H.homotopy, P.G.homotopy
    alpha = P.iota_pos[P.E.inverse[P.kappa.image[hH.incl.image]]]
    pos = _pos(hG.incl)
    out = pos[alpha]
    if (alpha < 0).any() or (out < 0).any():
        raise PostconditionFails("π2 map does not land in π2")
    return make_hom(hH.pi2, hG.pi2, out)


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def compose(Q: Butterfly, P: Butterfly) -> Butterfly:
    """``P ∘ Q`` for ``Q: K -> H`` and ``P: H -> G``."""
    if Q.G != P.H:
        raise TypeMismatch("target of the first butterfly differs from source of the second")
    F, E = Q.E, P.E
    L, pairs = fiber_product(Q.rho, P.sigma)
    key = pairs[:, 0] * E.order + pairs[:, 1]
    lookup = np.full(F.order * E.order, -1, dtype=np.int64)
    lookup[key] = np.arange(key.size)
    I = lookup[Q.iota.image * E.order + P.kappa.image]
    Qg, q = quotient_by_normal(L, I)
    reps = q.preimage_table()
    K, G = Q.H, P.G
    kappa = q.image[lookup[Q.kappa.image * E.order]]
    iota = q.image[lookup[P.iota.image]]
    sigma = Q.sigma.image[pairs[reps, 0]]
    rho = P.rho.image[pairs[reps, 1]]
    return make_butterfly(
        K, G, Qg,
        make_hom(G.g2, Qg, iota), make_hom(K.g2, Qg, kappa),
        make_hom(Qg, K.g1, sigma), make_hom(Qg, G.g1, rho),
    )


def compose_special_strict_first(Qs: StrictMorphism, P: Butterfly, *, verify: bool = False) -> Butterfly:
    """Pull back ``P``'s NE–SW extension along ``q1``."""
    if Qs.target != P.H:
        raise TypeMismatch("strict morphism does not land in the butterfly's source")
    K, G, E = Qs.source, P.G, P.E
    L, pairs = fiber_product(Qs.p1, P.sigma)
    key = pairs[:, 0] * E.order + pairs[:, 1]
    lookup = np.full(K.g1.order * E.order, -1, dtype=np.int64)
    lookup[key] = np.arange(key.size)
    kappa = lookup[K.boundary.image * E.order + P.kappa.image[Qs.p2.image]]
    iota = lookup[P.iota.image]
    R = make_butterfly(
        K, G, L,
        make_hom(G.g2, L, iota), make_hom(K.g2, L, kappa),
        make_hom(L, K.g1, pairs[:, 0]), make_hom(L, G.g1, P.rho.image[pairs[:, 1]]),
    )
    if verify and find_isomorphism(R, compose(of_strict(Qs), P)) is None:
        raise PostconditionFails("pullback composite differs from the generic composite")
    return R


def compose_special_strict_second(Q: Butterfly, Ps: StrictMorphism, *, verify: bool = False) -> Butterfly:
    """Push ``Q``'s NE–SW extension forward along ``p2``: ``F ⋉^{H2} G2``."""
    if Q.G != Ps.source:
        raise TypeMismatch("butterfly does not land in the strict morphism's source")
    H, G, F = Ps.source, Ps.target, Q.E
    data = SemidirectData(
        K=F, G=G.g2, H=H.g2, d=Q.iota, p=Ps.p2,
        actK_on_H=H.action.pullback(Q.rho),
        actK_on_G=G.action.pullback(Q.rho.then(Ps.p1)),
    )
    res = generalized_semidirect(data)
    R_E = res.group
    y, a = res.reps[:, 0], res.reps[:, 1]
    rho = G.g1.table[Ps.p1.image[Q.rho.image[y]], G.boundary.image[a]]
    R = make_butterfly(
        Q.H, G, R_E,
        res.d_prime, Q.kappa.then(res.p_prime),
        make_hom(R_E, Q.H.g1, Q.sigma.image[y]), make_hom(R_E, G.g1, rho),
    )
    if verify and find_isomorphism(R, compose(Q, of_strict(Ps))) is None:
        raise PostconditionFails("pushforward composite differs from the generic composite")
    return R


# ---------------------------------------------------------------------------
# equivalences
# ---------------------------------------------------------------------------


def is_equivalence(P: Butterfly) -> bool:
    """NW–SE sequence ``H2 -> E -> G1`` is short exact."""
    return (P.kappa.is_injective and P.rho.is_surjective
            and set(P.rho.kernel) == set(P.kappa.image_set))


def flip(P: Butterfly) -> Butterfly:
    if not is_equivalence(P):
        raise NotAnEquivalence("only equivalences can be flipped")
    return make_butterfly(P.G, P.H, P.E, P.kappa, P.iota, P.rho, P.sigma)


# ---------------------------------------------------------------------------
# kernel, cokernel, fiber homology
# ---------------------------------------------------------------------------


class PointedSet(NamedTuple):
    """Cosets ``g ρ(E)`` in ``G1``; ``index[g]`` is the coset of ``g``."""

    reps: np.ndarray
    index: np.ndarray

    @property
    def size(self) -> int:
        return int(self.reps.size)


def _left_cosets(G1: FiniteGroup, sub) -> PointedSet:
    labels = coset_labels(G1, sub, side="left")
    reps = np.unique(labels)
    pos = np.full(G1.order, -1, dtype=np.int64)
    pos[reps] = np.arange(reps.size)
    return PointedSet(_readonly(reps), _readonly(pos[labels]))


def kernel(P: Butterfly):
    """``Ker P = [H2 -> Ker ρ]`` and ``I_P = (id, σ|): Ker P -> H``."""
    S, incl = subgroup(P.E, P.rho.kernel)
    pos = _pos(incl)
    kap = GroupHom(P.H.g2, S, _readonly(pos[P.kappa.image]))
    sig = incl.then(P.sigma)
    act = P.H.action.pullback(sig)
    K = make_crossed_module(P.H.g2, S, kap, act, label="Ker")
    I = make_strict_morphism(K, P.H, identity_hom(P.H.g2), sig)
    return K, I


class Cokernel(NamedTuple):
    group: FiniteGroup  # E / κ(H2)
    quotient: GroupHom  # E -> group
    rho_bar: GroupHom  # group -> G1
    pi2: FiniteGroup  # Ker ρ̄
    pi2_incl: GroupHom
    pi1: PointedSet  # G1 / ρ(E)


def cokernel(P: Butterfly) -> Cokernel:
    Q, q = quotient_by_normal(P.E, P.kappa.image_set)
    reps = q.preimage_table()
    rb = make_hom(Q, P.G.g1, P.rho.image[reps])
    K2, incl = subgroup(Q, rb.kernel)
    return Cokernel(Q, q, rb, K2, incl, _left_cosets(P.G.g1, P.rho.image_set))


class FiberHomology(NamedTuple):
    h0: PointedSet
    h1: FiniteGroup  # Ker ρ / κ(H2)
    h1_proj: GroupHom  # Ker ρ -> h1
    ker_rho: GroupHom  # inclusion Ker ρ -> E
    h2: FiniteGroup  # Ker κ
    h2_incl: GroupHom


def fiber_homology(P: Butterfly) -> FiberHomology:
    S, incl = subgroup(P.E, P.rho.kernel)
    pos = _pos(incl)
    h1, proj = quotient_by_normal(S, pos[P.kappa.image])
    h2, h2i = subgroup(P.H.g2, P.kappa.kernel)
    return FiberHomology(_left_cosets(P.G.g1, P.rho.image_set), h1, proj, incl, h2, h2i)


def les_fiber(P: Butterfly) -> ExactSequence:
    """``1 -> H2(C) -> π2H -> π2G -> H1(C) -> π1H -> π1G -> H0(C) -> 1``."""
    fh = fiber_homology(P)
    hH, hG = P.H.homotopy, P.G.homotopy
    m0 = _pos(hH.incl)[fh.h2_incl.image]
    m1 = pi2_map(P).image
    ker_pos = _pos(fh.ker_rho)
    m2 = fh.h1_proj.image[ker_pos[P.iota.image[hG.incl.image]]]
    h1_reps = fh.ker_rho.image[fh.h1_proj.preimage_table()]
    m3 = hH.proj.image[P.sigma.image[h1_reps]]
    m4 = pi1_map(P).image
    m5 = fh.h0.index[hG.reps]
    terms = [
        ("H2(C)", fh.h2.order, fh.h2), ("pi2 H", hH.pi2.order, hH.pi2),
        ("pi2 G", hG.pi2.order, hG.pi2), ("H1(C)", fh.h1.order, fh.h1),
        ("pi1 H", hH.pi1.order, hH.pi1), ("pi1 G", hG.pi1.order, hG.pi1),
        ("H0(C)", fh.h0.size, fh.h0),
    ]
    return make_sequence(terms, [m0, m1, m2, m3, m4, m5])


def les_kernel(P: Butterfly) -> ExactSequence:
    """``1 -> π2 Ker -> π2H -> π2G -> π1 Ker -> π1H -> π1G -> π1 Coker -> 1``."""
    K, I = kernel(P)
    hK, hH, hG = K.homotopy, P.H.homotopy, P.G.homotopy
    i1, i2 = induced_maps(I)
    co = cokernel(P)
    S_pos = np.full(P.E.order, -1, dtype=np.int64)
    S_pos[np.asarray(P.rho.kernel)] = np.arange(len(P.rho.kernel))
    m2 = hK.proj.image[S_pos[P.iota.image[hG.incl.image]]]
    m5 = co.pi1.index[hG.reps]
    terms = [
        ("pi2 Ker", hK.pi2.order, hK.pi2), ("pi2 H", hH.pi2.order, hH.pi2),
        ("pi2 G", hG.pi2.order, hG.pi2), ("pi1 Ker", hK.pi1.order, hK.pi1),
        ("pi1 H", hH.pi1.order, hH.pi1), ("pi1 G", hG.pi1.order, hG.pi1),
        ("pi1 Coker", co.pi1.size, co.pi1),
    ]
    return make_sequence(terms, [i2.image, pi2_map(P).image, m2, i1.image, pi1_map(P).image, m5])


def kernel_cokernel_duality(P: Butterfly) -> GroupHom:
    """The natural isomorphism ``π1 Ker P -> π2 Coker P`` (raises if not iso)."""
    K, _ = kernel(P)
    hK = K.homotopy
    co = cokernel(P)
    # representative in Ker ρ ⊂ E, then into E/κ(H2), then into Ker ρ̄
    S = np.asarray(P.rho.kernel)
    img = co.quotient.image[S[hK.reps]]
    f = make_hom(hK.pi1, co.pi2, _pos(co.pi2_incl)[img])
    if not f.is_bijective:
        raise PostconditionFails("π1 Ker -> π2 Coker is not an isomorphism")
    return f


def kernel_is_trivial(P: Butterfly) -> bool:
    K, _ = kernel(P)
    return K.homotopy.pi1.order == 1 and K.homotopy.pi2.order == 1


def cokernel_is_trivial(P: Butterfly) -> bool:
    co = cokernel(P)
    return co.pi1.size == 1 and co.pi2.order == 1


# ---------------------------------------------------------------------------
# composable pairs
# ---------------------------------------------------------------------------


def triviality_witness(Q: Butterfly, P: Butterfly) -> GroupHom | None:
    """``δ: F -> E`` with ``σδ = ρ'``, ``δι' = κ`` and ``K2 -> F -> E -> G1``
    a complex, or ``None``."""
    if Q.G != P.H:
        raise TypeMismatch("butterflies are not composable")
    F, E = Q.E, P.E
    pins: dict[int, int] = {}
    for b in P.H.g2.generators:
        y, v = int(Q.iota(b)), int(P.kappa(b))
        if pins.setdefault(y, v) != v:
            return None
    for c in Q.H.g2.generators:
        y = int(Q.kappa(c))
        if pins.setdefault(y, 0) != 0:
            return None
    ok = (P.rho.image == 0)
    buckets = [np.flatnonzero(ok & (P.sigma.image == h)) for h in range(P.H.g1.order)]
    delta = find_hom(F, E, fixed=pins, allowed=lambda y: buckets[Q.rho(y)])
    if delta is None:
        return None
    if not (np.array_equal(P.sigma.image[delta.image], Q.rho.image)
            and np.array_equal(delta.image[Q.iota.image], P.kappa.image)
            and not delta.image[Q.kappa.image].any()
            and not P.rho.image[delta.image].any()):
        raise PostconditionFails("δ search returned an invalid map")
    return delta


class ExactnessReport(NamedTuple):
    exact: bool
    delta: GroupHom
    via_cokernel: bool
    via_sequence: bool

    def __bool__(self) -> bool:
        return self.exact


def is_exact_at(Q: Butterfly, P: Butterfly) -> ExactnessReport:
    delta = triviality_witness(Q, P)
    if delta is None:
        raise PrecondFails("the composite is not trivial")
    KerP, _ = kernel(P)
    S_pos = np.full(P.E.order, -1, dtype=np.int64)
    S_pos[np.asarray(P.rho.kernel)] = np.arange(len(P.rho.kernel))
    to_ker = make_hom(Q.E, KerP.g1, S_pos[delta.image])
    R = make_butterfly(Q.H, KerP, Q.E, Q.iota, Q.kappa, Q.sigma, to_ker)
    co = cokernel(R)
    via_co = co.pi1.size == 1 and co.pi2.order == 1
    via_seq = (set(delta.kernel) == set(Q.kappa.image_set)
               and set(delta.image_set) == set(P.rho.kernel))
    if via_co != via_seq:
        raise PostconditionFails("the two exactness criteria disagree")
    return ExactnessReport(via_co, delta, via_co, via_seq)


# ---------------------------------------------------------------------------
# braided butterflies
# ---------------------------------------------------------------------------


def check_braiding(X: CrossedModule, braid) -> np.ndarray:
    """``∂{x, y} = x y x^-1 y^-1`` for a map ``G1 × G1 -> G2``."""
    b = np.asarray(braid, dtype=np.int64)
    n = X.g1.order
    if b.shape != (n, n) or ((b < 0) | (b >= X.g2.order)).any():
        raise BraidingConventionFails("braiding must be a |G1| x |G1| table into G2")
    t, inv = X.g1.table, X.g1.inverse
    ar = np.arange(n)
    comm = t[t[t[ar[:, None], ar[None, :]], inv[:, None]], inv[None, :]]
    bad = np.argwhere(X.boundary.image[b] != comm)
    if bad.size:
        x, y = map(int, bad[0])
        raise BraidingConventionFails("∂{x,y} != x y x^-1 y^-1", witness=(x, y))
    return b


def braided_failure(P: Butterfly, braid_H, braid_G):
    """First ``(x, y)`` violating the braided-butterfly identity, or ``None``."""
    bH = check_braiding(P.H, braid_H)
    bG = check_braiding(P.G, braid_G)
    E = P.E
    t, inv = E.table, E.inverse
    n = E.order
    ar = np.arange(n)
    s, r = P.sigma.image, P.rho.image
    lhs = P.kappa.image[bH[s[:, None], s[None, :]]]
    iy = P.iota.image[bG[r[:, None], r[inv][None, :]]]
    xyx = t[t[ar[:, None], ar[None, :]], inv[:, None]]
    rhs = t[t[xyx, iy], inv[None, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return tuple(map(int, bad[0]))
    return None


def is_braided_butterfly(P: Butterfly, braid_H, braid_G, *, raise_on_failure: bool = False) -> bool:
    w = braided_failure(P, braid_H, braid_G)
    if w is not None and raise_on_failure:
        raise NotBraided("braided identity fails", witness=w)
    return w is None


def braided_cokernel(P: Butterfly, braid_G) -> CrossedModule:
    """``[E/κ(H2) -> G1]`` with ``G1`` acting by ``x^g = x ι{ρ(x)^-1, g^-1}``."""
    bG = check_braiding(P.G, braid_G)
    co = cokernel(P)
    Q, q = co.group, co.quotient
    reps = q.preimage_table()
    G1 = P.G.g1
    r = P.rho.image[reps]
    # entries (x, g)
    br = bG[G1.inverse[r][:, None], G1.inverse[None, :]]
    act = q.image[P.E.table[reps[:, None], P.iota.image[br]]]
    return make_crossed_module(Q, G1, co.rho_bar, make_action(G1, Q, act), label="Coker")


def compose_braided(Q: Butterfly, P: Butterfly, braid_K, braid_H, braid_G) -> Butterfly:
    """Compose two braided butterflies and re-check that the result is braided."""
    is_braided_butterfly(Q, braid_K, braid_H, raise_on_failure=True)
    is_braided_butterfly(P, braid_H, braid_G, raise_on_failure=True)
    R = compose(Q, P)
    if not is_braided_butterfly(R, braid_K, braid_G):
        raise PostconditionFails("composite of braided butterflies is not braided")
    return R
