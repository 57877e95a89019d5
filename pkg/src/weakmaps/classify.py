"""Extensions of groups and butterflies out of a group.

Schreier data for an extension ``1 -> N -> E -> Γ -> 1`` is a pair
``(φ, f)``: ``φ(g)`` is conjugation ``b ↦ s(g) b s(g)^-1`` by a section and
``f(g, h) = s(g) s(h) s(gh)^-1``.  The group is ``N × Γ`` with
``(a, g)(b, h) = (a φ_g(b) f(g, h), gh)`` and index ``g|N| + a``.

Outer actions ``ψ: Γ -> Out(N)`` use the right-conjugation convention of
``Aut`` (``a ↦ s(g)^-1 a s(g)``), which makes ``ψ`` a homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .butterfly import Butterfly, make_butterfly
from .cohomology import extension_from_2cocycle, h_n, make_module, two_cocycle_from_extension
from .errors import (
    ActionMismatch,
    ChiMismatch,
    IncompatibleData,
    NotALift,
    NotSemiExact,
    PostconditionFails,
    PsiMismatch,
    TypeMismatch,
)
from .exact import ExactSequence, make_sequence
from .extension import Extension, extension_isomorphism, make_extension
from .group import FiniteGroup, _readonly, check_size, make_group, quotient_by_normal, subgroup
from .hom import (
    AutGroup,
    GroupHom,
    RightAction,
    automorphism_group,
    isomorphism_search,
    iter_homs,
    make_hom,
)
from .semidirect import SemidirectData, generalized_semidirect, pair_group
from .xmod import CrossedModule, group_as_xmod


# ---------------------------------------------------------------------------
# outer automorphisms
# ---------------------------------------------------------------------------


class OutData(NamedTuple):
    aut: AutGroup
    group: FiniteGroup  # Out(N)
    proj: GroupHom  # Aut(N) -> Out(N)
    reps: np.ndarray  # minimal automorphism in each class


def out_group(N: FiniteGroup) -> OutData:
    A = automorphism_group(N)
    Out, proj = quotient_by_normal(A.group, A.inner.image_set)
    return OutData(A, Out, proj, _readonly(proj.preimage_table()))


def extension_psi(X: Extension, out: OutData | None = None) -> GroupHom:
    """``Γ -> Out(N)`` induced by conjugation."""
    out = out or out_group(X.N)
    conj = X.conjugation
    img = [int(out.proj(out.aut.index_of(conj[:, x]))) for x in X.section]
    return make_hom(X.gamma, out.group, img)


# ---------------------------------------------------------------------------
# Schreier enumeration
# ---------------------------------------------------------------------------


def _schreier_solutions(gamma: FiniteGroup, N: FiniteGroup, A: AutGroup, phi: np.ndarray):
    """Normalized factor sets ``f`` for fixed left conjugations ``φ``."""
    n = gamma.order
    Gt, Ginv = gamma.table, gamma.inverse
    Nt, Ninv = N.table, N.inverse
    maps = A.maps
    At, Ainv = A.group.table, A.group.inverse
    inner = A.inner.image
    # f(g,h) must satisfy φ_g∘φ_h = c_{f(g,h)}∘φ_{gh}, c_x(y) = x y x^-1
    cand: dict[tuple[int, int], np.ndarray] = {}
    for g in range(1, n):
        for h in range(1, n):
            tau = At[Ainv[phi[Gt[g, h]]], At[phi[h], phi[g]]]
            c = np.flatnonzero(inner[Ninv] == tau)
            if c.size == 0:
                return
            cand[(g, h)] = c
    cand_sets = {k: set(v.tolist()) for k, v in cand.items()}
    f0 = np.full((n, n), -1, dtype=np.int64)
    f0[0, :] = 0
    f0[:, 0] = 0
    cells = sorted(cand)

    def triples(g, h):
        # all (a, b, c) with the cell (g, h) in one of the four slots
        out = []
        for k in range(n):
            out.append((g, h, k))  # f(g,h)
            out.append((k, g, h))  # f(h,k) slot: (a=k, b=g, c=h)
        for a in range(n):
            b = Gt[Ginv[a], g]  # a b = g
            out.append((a, b, h))  # f(ab, c)
        for b in range(n):
            c = Gt[Ginv[b], h]
            out.append((g, b, c))  # f(g, bc) with bc = h
        return out

    def check(f, trips, queue):
        for a, b, c in trips:
            ab, bc = Gt[a, b], Gt[b, c]
            k1, k2, k3, k4 = (a, b), (ab, c), (b, c), (a, bc)
            v1, v2, v3, v4 = f[k1], f[k2], f[k3], f[k4]
            unknown = {k for k, v in ((k1, v1), (k2, v2), (k3, v3), (k4, v4)) if v < 0}
            m = maps[phi[a]]
            if not unknown:
                if Nt[v1, v2] != Nt[m[v3], v4]:
                    return False
            elif len(unknown) == 1:
                (k,) = unknown
                if k == k1 and k1 not in (k2, k3, k4):
                    val = Nt[Nt[m[v3], v4], Ninv[v2]]
                elif k == k2 and k2 not in (k1, k3, k4):
                    val = Nt[Ninv[v1], Nt[m[v3], v4]]
                elif k == k4 and k4 not in (k1, k2, k3):
                    val = Nt[Ninv[m[v3]], Nt[v1, v2]]
                elif k == k3 and k3 not in (k1, k2, k4):
                    minv = np.empty_like(m)
                    minv[m] = np.arange(m.size)
                    val = minv[Nt[Nt[v1, v2], Ninv[v4]]]
                else:
                    continue
                if int(val) not in cand_sets[k]:
                    return False
                f[k] = val
                queue.append(k)
        return True

    def propagate(f, start):
        queue = [start]
        while queue:
            g, h = queue.pop()
            if not check(f, triples(g, h), queue):
                return False
        return True

    def rec(f, i):
        while i < len(cells) and f[cells[i]] >= 0:
            i += 1
        if i == len(cells):
            yield f
            return
        cell = cells[i]
        for v in cand[cell]:
            trial = f.copy()
            trial[cell] = v
            if propagate(trial, cell):
                yield from rec(trial, i + 1)

    if not cells:
        yield f0
        return
    yield from rec(f0, 0)


def schreier_extension(gamma: FiniteGroup, N: FiniteGroup, A: AutGroup, phi, f) -> Extension:
    m = N.order
    idx = np.arange(gamma.order * m)
    g, a = idx // m, idx % m
    phi = np.asarray(phi, dtype=np.int64)
    f = np.asarray(f, dtype=np.int64)
    b_img = A.maps[phi[g][:, None], a[None, :]]  # φ_{g_x}(a_y)
    first = N.table[a[:, None], b_img]
    second = N.table[first, f[g[:, None], g[None, :]]]
    table = gamma.table[g[:, None], g[None, :]] * m + second
    E = make_group(table)
    return make_extension(N, E, gamma, np.arange(m), idx // m)


def enumerate_extensions(gamma: FiniteGroup, N: FiniteGroup, psi: GroupHom | None = None,
                         *, out: OutData | None = None) -> list[Extension]:
    """Representatives of extensions of ``Γ`` by ``N`` up to isomorphisms
    inducing the identity on ``N`` and ``Γ``; optionally only those with
    outer action ``psi``."""
    check_size(gamma.order * N.order, "extension")
    out = out or out_group(N)
    A = out.aut
    if psi is not None:
        if psi.domain != gamma or psi.codomain != out.group:
            raise TypeMismatch("ψ must map Γ into Out(N)")
        psis = [psi]
    else:
        psis = list(iter_homs(gamma, out.group))
    reps: list[Extension] = []
    for ps in psis:
        right = out.reps[ps.image]
        phi = A.group.inverse[right]
        found: list[Extension] = []
        for f in _schreier_solutions(gamma, N, A, phi):
            X = schreier_extension(gamma, N, A, phi, f)
            if any(extension_isomorphism(X, Y) is not None for Y in found):
                continue
            found.append(X)
        reps.extend(found)
    return reps


def extension_class_index(X: Extension, reps: list[Extension]) -> int:
    for i, Y in enumerate(reps):
        if X.E.order == Y.E.order and extension_isomorphism(X, Y) is not None:
            return i
    raise PostconditionFails("extension not found among the representatives")


# ---------------------------------------------------------------------------
# semi-exact sequences and Baer products
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SemiExact:
    M: FiniteGroup
    E: FiniteGroup
    gamma: FiniteGroup
    incl: GroupHom
    proj: GroupHom

    @property
    def kernel(self) -> tuple[int, ...]:
        return self.proj.kernel

    def conj_on_m(self) -> np.ndarray:
        """``(m, x) ↦ x^-1 m x`` read back in ``M``, shape ``(|M|, |E|)``."""
        pos = np.full(self.E.order, -1, dtype=np.int64)
        pos[self.incl.image] = np.arange(self.M.order)
        return pos[self.E.conj_table[self.incl.image]]


def make_semi_exact(M, E, gamma, incl, proj) -> SemiExact:
    incl = incl if isinstance(incl, GroupHom) else make_hom(M, E, incl)
    proj = proj if isinstance(proj, GroupHom) else make_hom(E, gamma, proj)
    if not incl.is_injective:
        raise NotSemiExact("M -> E is not injective")
    if not proj.is_surjective:
        raise NotSemiExact("E -> Γ is not surjective")
    K = set(proj.kernel)
    if not set(incl.image_set) <= K:
        raise NotSemiExact("M -> E -> Γ is not a complex")
    if not E.is_normal(incl.image_set):
        raise NotSemiExact("M is not normal in E")
    cent = set(E.centralizer(incl.image_set)) & K
    if set(E.closure(list(incl.image_set) + sorted(cent))) != K:
        raise NotSemiExact("kernel is not generated by M and its centralizer")
    S = SemiExact(M, E, gamma, incl, proj)
    if (S.conj_on_m() < 0).any():
        raise PostconditionFails("conjugation left M")
    return S


def semi_exact_of(X: Extension) -> SemiExact:
    return SemiExact(X.N, X.E, X.gamma, X.incl, X.proj)


def semi_exact_psi(S: SemiExact, out: OutData | None = None) -> GroupHom:
    out = out or out_group(S.M)
    conj = S.conj_on_m()
    sec = S.proj.preimage_table()
    return make_hom(S.gamma, out.group, [int(out.proj(out.aut.index_of(conj[:, x]))) for x in sec])


class BaerProduct(NamedTuple):
    group: FiniteGroup  # L / I
    pairs: np.ndarray  # (x, y) pairs of L
    quotient: GroupHom  # L -> L/I
    proj: GroupHom  # L/I -> Γ
    sequence: ExactSequence


def baer_product(S0: SemiExact, S: SemiExact, *, check_psi: bool = True) -> BaerProduct:
    """``E0 ×_Γ^M E = L/I``."""
    if S0.M != S.M or S0.gamma != S.gamma:
        raise TypeMismatch("sequences must share M and Γ")
    if check_psi:
        out = out_group(S.M)
        if semi_exact_psi(S0, out) != semi_exact_psi(S, out):
            raise PsiMismatch("the two sequences induce different outer actions")
    c0, c = S0.conj_on_m(), S.conj_on_m()
    same_img = S0.proj.image[:, None] == S.proj.image[None, :]
    keys0 = [c0[:, x].tobytes() for x in range(S0.E.order)]
    keys = [c[:, y].tobytes() for y in range(S.E.order)]
    same_conj = np.array([[a == b for b in keys] for a in keys0], dtype=bool)
    xs, ys = np.nonzero(same_img & same_conj)
    L, pairs = pair_group(S0.E, S.E, np.stack([xs, ys], axis=1))
    lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(pairs.tolist())}
    I = [lookup[(int(S0.incl(m)), int(S.incl(m)))] for m in range(S.M.order)]
    Q, q = quotient_by_normal(L, I)
    reps = q.preimage_table()
    proj = make_hom(Q, S.gamma, S0.proj.image[pairs[reps, 0]])
    # 1 -> C -> C_{K0}(M) x C_K(M) -> L/I -> Γ -> 1
    C = sorted(S.M.center)
    K0 = sorted(set(S0.E.centralizer(S0.incl.image_set)) & set(S0.kernel))
    K1 = sorted(set(S.E.centralizer(S.incl.image_set)) & set(S.kernel))
    prod = [(u, v) for u in K0 for v in K1]
    prod_pos = {p: i for i, p in enumerate(prod)}
    m_c = [prod_pos[(int(S0.incl(a)), int(S.incl(a)))] for a in C]
    m_p = [int(q(lookup[p])) for p in prod]
    seq = make_sequence(
        [("C", len(C)), ("C_K0(M) x C_K(M)", len(prod)), ("E0 x E", Q.order), ("Gamma", S.gamma.order)],
        [m_c, m_p, proj.image],
    )
    return BaerProduct(Q, pairs, q, proj, seq)


def difference_ext(E0: Extension, E: Extension) -> Extension:
    """``D(E0, E)``: the Baer product as an extension of ``Γ`` by ``Z(N)``,
    with ``a ↦ (a, 1)``."""
    if E0.N != E.N or E0.gamma != E.gamma:
        raise TypeMismatch("extensions must share N and Γ")
    out = out_group(E.N)
    if extension_psi(E0, out) != extension_psi(E, out):
        raise PsiMismatch("extensions have different outer actions")
    bp = baer_product(semi_exact_of(E0), semi_exact_of(E), check_psi=False)
    C, cincl = subgroup(E.N, E.N.center)
    lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(bp.pairs.tolist())}
    incl = [int(bp.quotient(lookup[(int(E0.incl(int(a))), 0)])) for a in cincl.image]
    return make_extension(C, bp.group, E.gamma, incl, bp.proj)


def act_ext(E0: Extension, H: Extension) -> Extension:
    """``E0 ×_Γ^C H`` as an extension of ``Γ`` by ``N``, for ``H`` an
    extension of ``Γ`` by the center ``C`` of ``N``."""
    N = E0.N
    C, cincl = subgroup(N, N.center)
    if H.N != C or H.gamma != E0.gamma:
        raise TypeMismatch("H must be an extension of Γ by the center of N")
    S0 = SemiExact(C, E0.E, E0.gamma, cincl.then(E0.incl), E0.proj)
    S1 = semi_exact_of(H)
    if not np.array_equal(S0.conj_on_m()[:, E0.section], S1.conj_on_m()[:, H.section]):
        raise ActionMismatch("H induces a different action on the center")
    bp = baer_product(S0, S1, check_psi=False)
    lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(bp.pairs.tolist())}
    incl = [int(bp.quotient(lookup[(int(E0.incl(a)), 0)])) for a in range(N.order)]
    return make_extension(N, bp.group, E0.gamma, incl, bp.proj)


# ---------------------------------------------------------------------------
# butterflies from a group
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupButterfly:
    ext: Extension  # of Γ by G2
    rho: GroupHom  # E -> G1
    target: CrossedModule

    @property
    def E(self) -> FiniteGroup:
        return self.ext.E

    @property
    def gamma(self) -> FiniteGroup:
        return self.ext.gamma

    def chi(self) -> GroupHom:
        h = self.target.homotopy
        return make_hom(self.gamma, h.pi1, h.proj.image[self.rho.image[self.ext.section]])

    def to_butterfly(self) -> Butterfly:
        H = group_as_xmod(self.gamma)
        kappa = GroupHom(H.g2, self.E, _readonly(np.zeros(1, dtype=np.int64)))
        return make_butterfly(H, self.target, self.E, self.ext.incl, kappa, self.ext.proj, self.rho)

    def __repr__(self) -> str:
        return f"<GroupButterfly |E|={self.E.order} χ={self.chi().image.tolist()}>"


def make_group_butterfly(ext: Extension, rho, G: CrossedModule) -> GroupButterfly:
    if ext.N != G.g2:
        raise TypeMismatch("extension kernel must be G2")
    rho = rho if isinstance(rho, GroupHom) else make_hom(ext.E, G.g1, rho)
    P = GroupButterfly(ext, rho, G)
    P.to_butterfly()
    return P


def butterfly_to_group(P: Butterfly) -> GroupButterfly:
    if P.H.g2.order != 1:
        raise TypeMismatch("source must be a discrete group")
    ext = make_extension(P.G.g2, P.E, P.H.g1, P.iota, P.sigma)
    return GroupButterfly(ext, P.rho, P.G)


def _rho_buckets(X: Extension, G: CrossedModule):
    keys: dict[bytes, list[int]] = {}
    act = G.action.table
    for y in range(G.g1.order):
        keys.setdefault(act[:, y].tobytes(), []).append(y)
    conj = X.conjugation
    empty: list[int] = []
    return [np.asarray(keys.get(conj[:, x].tobytes(), empty), dtype=np.int64) for x in range(X.E.order)]


def iter_rhos(X: Extension, G: CrossedModule):
    """All ``ρ: E -> G1`` with ``ρ ι = ∂`` and ``α^{ρ(x)} = x^-1 α x``."""
    buckets = _rho_buckets(X, G)
    pins = {int(X.incl(g)): int(G.boundary(g)) for g in G.g2.generators}
    for rho in iter_homs(X.E, G.g1, fixed=pins, allowed=lambda x: buckets[x]):
        if not np.array_equal(rho.image[X.incl.image], G.boundary.image):
            continue
        if all(rho.image[x] in set(buckets[x].tolist()) for x in range(X.E.order)):
            yield rho


def group_butterfly_iso(P: GroupButterfly, Q: GroupButterfly) -> GroupHom | None:
    if P.gamma != Q.gamma or P.target != Q.target:
        raise TypeMismatch("group butterflies with different ends")
    if P.E.order != Q.E.order:
        return None
    X, Y = P.ext, Q.ext
    pins = {int(X.incl(g)): int(Y.incl(g)) for g in X.N.generators}
    key = Y.proj.image * Q.target.g1.order + Q.rho.image
    buckets: dict[int, np.ndarray] = {int(k): np.flatnonzero(key == k) for k in np.unique(key)}
    empty = np.zeros(0, dtype=np.int64)

    def allowed(x):
        return buckets.get(int(X.proj(x)) * Q.target.g1.order + int(P.rho(x)), empty)

    f = isomorphism_search(X.E, Y.E, pins, allowed)
    if f is None:
        return None
    if not (np.array_equal(Q.rho.image[f.image], P.rho.image)
            and np.array_equal(Y.proj.image[f.image], X.proj.image)
            and np.array_equal(f.image[X.incl.image], Y.incl.image)):
        raise PostconditionFails("group butterfly isomorphism check failed")
    return f


class ButterflyClasses(NamedTuple):
    reps: list[GroupButterfly]
    by_chi: dict[tuple[int, ...], list[int]]

    def __len__(self) -> int:
        return len(self.reps)


def enumerate_butterflies(gamma: FiniteGroup, G: CrossedModule) -> ButterflyClasses:
    """Representatives of ``π0 B(Γ, G)``, grouped by the induced map on ``π1``."""
    check_size(gamma.order * G.g2.order, "butterfly")
    reps: list[GroupButterfly] = []
    for X in enumerate_extensions(gamma, G.g2):
        found: list[GroupButterfly] = []
        for rho in iter_rhos(X, G):
            P = GroupButterfly(X, rho, G)
            if any(group_butterfly_iso(P, Q) is not None for Q in found):
                continue
            found.append(P)
        reps.extend(found)
    by_chi: dict[tuple[int, ...], list[int]] = {}
    for i, P in enumerate(reps):
        by_chi.setdefault(tuple(P.chi().image.tolist()), []).append(i)
    return ButterflyClasses(reps, by_chi)


def butterfly_class_index(P: GroupButterfly, reps: list[GroupButterfly]) -> int:
    for i, Q in enumerate(reps):
        if group_butterfly_iso(P, Q) is not None:
            return i
    raise PostconditionFails("butterfly not found among the representatives")


# ---------------------------------------------------------------------------
# the H^2 action on a χ-fiber
# ---------------------------------------------------------------------------


def _pi2_module_action(G: CrossedModule, chi: GroupHom) -> np.ndarray:
    h = G.homotopy
    return h.action.table[:, chi.image]


def act_h2(P0: GroupButterfly, K: Extension) -> GroupButterfly:
    """``E0 ×_Γ^{π2} K`` with ``ρ(x, a) = ρ0(x)``."""
    G = P0.target
    h = G.homotopy
    if K.N != h.pi2 or K.gamma != P0.gamma:
        raise TypeMismatch("K must be an extension of Γ by π2")
    want = _pi2_module_action(G, P0.chi())
    if not np.array_equal(K.conjugation[:, K.section], want):
        raise ActionMismatch("K induces a different action on π2")
    X0 = P0.ext
    S0 = SemiExact(h.pi2, X0.E, X0.gamma, h.incl.then(X0.incl), X0.proj)
    bp = baer_product(S0, semi_exact_of(K), check_psi=False)
    lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(bp.pairs.tolist())}
    incl = [int(bp.quotient(lookup[(int(X0.incl(b)), 0)])) for b in range(G.g2.order)]
    ext = make_extension(G.g2, bp.group, P0.gamma, incl, bp.proj)
    reps = bp.quotient.preimage_table()
    rho = make_hom(bp.group, G.g1, P0.rho.image[bp.pairs[reps, 0]])
    return make_group_butterfly(ext, rho, G)


def difference_butterflies(P0: GroupButterfly, P: GroupButterfly) -> Extension:
    """``L/I`` with ``L = {(x, y) : x̄ = ȳ, ρ0(x) = ρ(y)}`` and ``I`` the
    diagonal ``G2``, an extension of ``Γ`` by ``π2`` via ``α ↦ (α, 1)``."""
    if P0.target != P.target or P0.gamma != P.gamma:
        raise TypeMismatch("butterflies with different ends")
    if P0.chi() != P.chi():
        raise ChiMismatch("butterflies induce different maps on π1")
    G = P.target
    h = G.homotopy
    X0, X = P0.ext, P.ext
    ok = ((X0.proj.image[:, None] == X.proj.image[None, :])
          & (P0.rho.image[:, None] == P.rho.image[None, :]))
    xs, ys = np.nonzero(ok)
    L, pairs = pair_group(X0.E, X.E, np.stack([xs, ys], axis=1))
    lookup = {(int(a), int(b)): i for i, (a, b) in enumerate(pairs.tolist())}
    I = [lookup[(int(X0.incl(b)), int(X.incl(b)))] for b in range(G.g2.order)]
    Q, q = quotient_by_normal(L, I)
    reps = q.preimage_table()
    proj = make_hom(Q, P.gamma, X0.proj.image[pairs[reps, 0]])
    incl = [int(q(lookup[(int(X0.incl(int(a))), 0)])) for a in h.incl.image]
    return make_extension(h.pi2, Q, P.gamma, incl, proj)


def lift_via_section(chi_tilde: GroupHom, K: Extension, G: CrossedModule) -> GroupButterfly:
    """``K ×^{π2} G2`` with ``ρ(k, α) = χ̃(k̄) ∂α``."""
    h = G.homotopy
    if chi_tilde.codomain != G.g1 or chi_tilde.domain != K.gamma:
        raise TypeMismatch("χ̃ must map Γ into G1")
    if K.N != h.pi2:
        raise TypeMismatch("K must be an extension of Γ by π2")
    via = chi_tilde.image[K.proj.image]
    actG = RightAction(K.E, G.g2, _readonly(G.action.table[:, via]))
    actH = RightAction(K.E, h.pi2, K.conjugation)
    data = SemidirectData(K=K.E, G=G.g2, H=h.pi2, d=K.incl, p=h.incl,
                          actK_on_H=actH, actK_on_G=actG)
    try:
        res = generalized_semidirect(data)
    except IncompatibleData as exc:
        raise NotALift(f"K is not compatible with χ̃: {exc}", witness=exc.witness) from None
    R = res.group
    k, a = res.reps[:, 0], res.reps[:, 1]
    proj = make_hom(R, K.gamma, K.proj.image[k])
    ext = make_extension(G.g2, R, K.gamma, res.d_prime, proj)
    rho = make_hom(R, G.g1, G.g1.table[chi_tilde.image[K.proj.image[k]], G.boundary.image[a]])
    return make_group_butterfly(ext, rho, G)


class TorsorReport(NamedTuple):
    chi: tuple[int, ...]
    fiber_size: int
    h2_order: int
    free: bool
    transitive: bool
    inverse_ok: bool

    @property
    def ok(self) -> bool:
        return self.free and self.transitive and self.inverse_ok


def verify_torsor(gamma: FiniteGroup, G: CrossedModule, classes: ButterflyClasses | None = None) -> list[TorsorReport]:
    """Check that ``H^2(Γ, π2)`` acts freely and transitively on each χ-fiber
    and that the difference construction inverts the action."""
    classes = classes or enumerate_butterflies(gamma, G)
    h = G.homotopy
    reports = []
    for chi_key, idxs in sorted(classes.by_chi.items()):
        fiber = [classes.reps[i] for i in idxs]
        chi = fiber[0].chi()
        M = make_module(gamma, h.pi2, _pi2_module_action(G, chi))
        H2 = h_n(M, 2)
        Ks = [extension_from_2cocycle(M, H2.cochain(i)) for i in range(H2.order)]
        free = transitive = inverse_ok = True
        for P0 in fiber:
            hits = [butterfly_class_index(act_h2(P0, K), fiber) for K in Ks]
            free &= len(set(hits)) == len(hits)
            transitive &= set(hits) == set(range(len(fiber)))
            for i, K in enumerate(Ks):
                D = difference_butterflies(P0, fiber[hits[i]])
                inverse_ok &= H2.class_index(two_cocycle_from_extension(D, M)) == i
            for P in fiber:
                D = difference_butterflies(P0, P)
                inverse_ok &= group_butterfly_iso(act_h2(P0, D), P) is not None
        reports.append(TorsorReport(chi_key, len(fiber), H2.order, free, transitive, inverse_ok))
    return reports
