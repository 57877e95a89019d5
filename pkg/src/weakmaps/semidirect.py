"""Semi-direct products, the relative semi-direct product ``K ⋉ G / N`` and
its twisting by crossed homomorphisms.

Pairs ``(k, g)`` in ``K ⋉ G`` are indexed ``k * |G| + g`` and multiply as
``(k, g)(k', g') = (kk', g^k' g')``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, NamedTuple

import numpy as np

from .errors import IncompatibleData, NotCrossedHom, PostconditionFails, TriangleFails
from .group import FiniteGroup, _readonly, make_group, quotient_by_normal
from .hom import GroupHom, RightAction, iter_homs, make_action, make_hom


def semidirect_product(K: FiniteGroup, G: FiniteGroup, act: RightAction) -> FiniteGroup:
    """``K ⋉ G`` for a right action of ``K`` on ``G``."""
    if act.group != K or act.space != G:
        raise IncompatibleData("action does not match the factors")
    m = G.order
    idx = np.arange(K.order * m)
    k, g = idx // m, idx % m
    kk = K.table[k[:, None], k[None, :]]
    gg = G.table[act.table[g[:, None], k[None, :]], g[None, :]]
    return make_group(kk * m + gg)


def pair_group(A: FiniteGroup, B: FiniteGroup, pairs: np.ndarray, *, check: bool = True):
    """Subgroup of ``A × B`` on the given pairs (componentwise product).

    Returns ``(L, pairs)`` with ``pairs`` sorted so that ``(0, 0)`` is first.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    keys = np.unique(pairs[:, 0] * B.order + pairs[:, 1])
    pairs = np.stack([keys // B.order, keys % B.order], axis=1)
    pos = np.full(A.order * B.order, -1, dtype=np.int64)
    pos[keys] = np.arange(keys.size)
    a, b = pairs[:, 0], pairs[:, 1]
    prod = A.table[a[:, None], a[None, :]] * B.order + B.table[b[:, None], b[None, :]]
    t = pos[prod]
    if (t < 0).any():
        raise PostconditionFails("pair set is not closed under multiplication")
    return make_group(t, check=check), pairs


def fiber_product(f: GroupHom, g: GroupHom):
    """``{(x, y) : f(x) = g(y)}`` as ``(L, pairs)``."""
    if f.codomain != g.codomain:
        raise IncompatibleData("fiber product over different groups")
    fx, gy = f.image, g.image
    xs, ys = np.nonzero(fx[:, None] == gy[None, :])
    return pair_group(f.domain, g.domain, np.stack([xs, ys], axis=1))


@dataclass(frozen=True, eq=False)
class SemidirectData:
    K: FiniteGroup
    G: FiniteGroup
    H: FiniteGroup
    d: GroupHom  # H -> K
    p: GroupHom  # H -> G
    actK_on_H: RightAction
    actK_on_G: RightAction


def check_semidirect_data(data: SemidirectData) -> None:
    """Raise ``IncompatibleData`` naming the first failing condition."""
    K, G, H, d, p = data.K, data.G, data.H, data.d, data.p
    aH, aG = data.actK_on_H, data.actK_on_G
    if d.domain != H or d.codomain != K or p.domain != H or p.codomain != G:
        raise IncompatibleData("d must map H->K and p must map H->G")
    if aH.group != K or aH.space != H or aG.group != K or aG.space != G:
        raise IncompatibleData("actions must be actions of K on H and on G")
    # d(h^k) = k^-1 d(h) k
    lhs = d.image[aH.table]
    rhs = K.conj_table[d.image]
    if not np.array_equal(lhs, rhs):
        h, k = map(int, np.argwhere(lhs != rhs)[0])
        raise IncompatibleData("d is not K-equivariant", witness=("d-equivariance", h, k))
    lhs = p.image[aH.table]
    rhs = aG.table[p.image]
    if not np.array_equal(lhs, rhs):
        h, k = map(int, np.argwhere(lhs != rhs)[0])
        raise IncompatibleData("p is not K-equivariant", witness=("p-equivariance", h, k))
    # g^{d(h)} = p(h)^-1 g p(h)
    lhs = aG.table[:, d.image]
    rhs = G.conj_table[:, p.image]
    if not np.array_equal(lhs, rhs):
        g, h = map(int, np.argwhere(lhs != rhs)[0])
        raise IncompatibleData("g^d(h) != p(h)^-1 g p(h)", witness=("compatibility", g, h))


class SemidirectResult(NamedTuple):
    group: FiniteGroup
    p_prime: GroupHom  # K -> result
    d_prime: GroupHom  # G -> result
    action: RightAction  # result acting on G
    proj: GroupHom  # K ⋉ G -> result
    reps: np.ndarray  # (k, g) representative of each element


def generalized_semidirect(data: SemidirectData, *, verify: bool = True) -> SemidirectResult:
    """``(K ⋉ G) / N`` with ``N = {(d(h)^-1, p(h))}``, plus its structure maps."""
    check_semidirect_data(data)
    K, G, d, p = data.K, data.G, data.d, data.p
    m = G.order
    big = semidirect_product(K, G, data.actK_on_G)
    N = K.inverse[d.image] * m + p.image
    Q, proj = quotient_by_normal(big, N)
    p_prime = GroupHom(K, Q, _readonly(proj.image[np.arange(K.order) * m]))
    d_prime = GroupHom(G, Q, _readonly(proj.image[np.arange(m)]))
    rep = proj.preimage_table()
    rk, rg = rep // m, rep % m
    # (k, g) acts on x by g^-1 x^k g
    xk = data.actK_on_G.table[:, rk]
    act = G.table[G.table[G.inverse[rg][None, :], xk], rg[None, :]]
    action = make_action(Q, G, act)
    res = SemidirectResult(Q, p_prime, d_prime, action, proj,
                           _readonly(np.stack([rk, rg], axis=1)))
    if verify:
        verify_semidirect(data, res)
    return res


def verify_semidirect(data: SemidirectData, res: SemidirectResult) -> dict:
    """Check the order formula, the commuting square and the comparison of
    kernels and cokernels of ``d`` and ``d'``.  Raises on failure."""
    K, G, H, d, p = data.K, data.G, data.H, data.d, data.p
    Q, pp, dp = res.group, res.p_prime, res.d_prime
    n_size = len({(int(K.inverse[d(h)]), p(h)) for h in range(H.order)})
    out = {}
    out["order"] = Q.order * n_size == K.order * G.order
    out["square"] = bool(np.array_equal(pp.image[d.image], dp.image[p.image]))
    # Coker d -> Coker d' is a bijection
    dH = set(int(x) for x in d.image)
    dG = set(int(x) for x in dp.image)
    Kc = _coset_ids(K, dH)
    Qc = _coset_ids(Q, dG)
    induced = {}
    ok = True
    for k in range(K.order):
        a, b = Kc[k], Qc[pp(k)]
        if induced.setdefault(a, b) != b:
            ok = False
    out["coker_iso"] = ok and len(set(induced.values())) == len(set(Kc)) == len(set(Qc))
    # Ker d -> Ker d' surjective with kernel Ker p ∩ Ker d
    kd = [h for h in range(H.order) if d(h) == 0]
    kdp = set(g for g in range(G.order) if dp(g) == 0)
    images = set(p(h) for h in kd)
    out["ker_surjective"] = images == kdp
    out["ker_kernel"] = set(h for h in kd if p(h) == 0) == set(
        h for h in range(H.order) if d(h) == 0 and p(h) == 0)
    out["crossed_module"] = _is_crossed(dp, res.action)
    if not all(out.values()):
        bad = [k for k, v in out.items() if not v]
        raise PostconditionFails(f"relative semi-direct product checks failed: {bad}")
    return out


def _coset_ids(G: FiniteGroup, normal: set) -> list[int]:
    n = np.asarray(sorted(normal), dtype=np.int64)
    return G.table[:, n].min(axis=1).tolist()


def _is_crossed(bd: GroupHom, act: RightAction) -> bool:
    G2, G1 = bd.domain, bd.codomain
    cm1 = np.array_equal(act.table[:, bd.image], G2.conj_table)
    cm2 = np.array_equal(bd.image[act.table], G1.conj_table[bd.image])
    return bool(cm1 and cm2)


# ---------------------------------------------------------------------------
# crossed homomorphisms and twisting
# ---------------------------------------------------------------------------


def check_crossed_hom(theta, act: RightAction) -> np.ndarray:
    """``θ(kk') = θ(k)^{k'} θ(k')`` for a right action of ``K`` on ``G``."""
    K, G = act.group, act.space
    th = np.asarray(theta, dtype=np.int64)
    if th.shape != (K.order,) or ((th < 0) | (th >= G.order)).any():
        raise NotCrossedHom("θ must be an array K -> G")
    lhs = th[K.table]
    rhs = G.table[act.table[th[:, None], np.arange(K.order)[None, :]], th[None, :]]
    if not np.array_equal(lhs, rhs):
        k, k2 = map(int, np.argwhere(lhs != rhs)[0])
        raise NotCrossedHom(f"crossed law fails at ({k}, {k2})", witness=(k, k2))
    return th


def iter_crossed_homs(act: RightAction) -> Iterator[np.ndarray]:
    """All crossed homomorphisms ``K -> G``, via sections of ``K ⋉ G -> K``."""
    K, G = act.group, act.space
    m = G.order
    big = semidirect_product(K, G, act)
    for s in iter_homs(K, big, allowed=lambda k: range(k * m, (k + 1) * m)):
        if np.array_equal(s.image // m, np.arange(K.order)):
            yield _readonly(s.image % m)


def twist_data(data: SemidirectData, theta) -> SemidirectData:
    """Data with ``q(h) = p(h) θ(d(h))`` and ``g^{*k} = θ(k)^-1 g^k θ(k)``."""
    th = check_crossed_hom(theta, data.actK_on_G)
    G = data.G
    q = G.table[data.p.image, th[data.d.image]]
    star = G.conj_table[data.actK_on_G.table, th[None, :]]
    return replace(
        data,
        p=GroupHom(data.H, G, _readonly(q)),
        actK_on_G=RightAction(data.K, G, _readonly(star)),
    )


def theta_pushforward(theta, data_p: SemidirectData, data_q: SemidirectData | None = None):
    """``θ_*: K ⋉^{H,q} G -> K ⋉^{H,p} G``, ``(k, g) ↦ (k, θ(k) g)``.

    Returns ``(θ_*, result_q, result_p)`` after checking that ``θ_*`` is an
    isomorphism compatible with ``d'`` and with the cokernels.
    """
    th = check_crossed_hom(theta, data_p.actK_on_G)
    twisted = twist_data(data_p, th)
    if data_q is not None:
        if not (np.array_equal(data_q.p.image, twisted.p.image)
                and np.array_equal(data_q.actK_on_G.table, twisted.actK_on_G.table)):
            raise IncompatibleData("data_q is not the twist of data_p by θ")
    res_q = generalized_semidirect(twisted)
    res_p = generalized_semidirect(data_p)
    m = data_p.G.order
    K, G = data_p.K, data_p.G
    # evaluate on every pair to check well-definedness on classes
    idx = np.arange(K.order * m)
    k, g = idx // m, idx % m
    src = res_q.proj.image
    dst = res_p.proj.image[k * m + G.table[th[k], g]]
    f = np.full(res_q.group.order, -1, dtype=np.int64)
    f[src] = dst
    if not np.array_equal(f[src], dst):
        raise PostconditionFails("θ_* is not well defined on classes")
    f_hom = make_hom(res_q.group, res_p.group, f)
    if not f_hom.is_bijective:
        raise PostconditionFails("θ_* is not bijective")
    if not np.array_equal(f[res_q.d_prime.image], res_p.d_prime.image):
        raise TriangleFails("θ_* ∘ d'_q != d'_p")
    dG = set(int(x) for x in res_p.d_prime.image)
    Qc = _coset_ids(res_p.group, dG)
    for kk in range(K.order):
        if Qc[f[res_q.p_prime(kk)]] != Qc[res_p.p_prime(kk)]:
            raise TriangleFails("cokernel triangle fails", witness=kk)
    return f_hom, res_q, res_p
