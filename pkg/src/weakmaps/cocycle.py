"""Butterflies with a set-theoretic section versus cocycle triples ``(p1, p2, ε)``.

The group built from a triple lives on ``H1 × G2`` (index ``h * |G2| + g``)
with product ``(h, g)(h', g') = (hh', ε(h, h')^-1 g^{p1(h')} g')``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .butterfly import Butterfly, ButterflyIso, is_butterfly_iso, make_butterfly
from .errors import (
    ButterflyAxiomFails,
    NotACocycle,
    NotAGroup,
    NotASection,
    NotCrossedHom,
    PostconditionFails,
    TypeMismatch,
    ValidationError,
)
from .group import _readonly, make_group
from .hom import GroupHom, make_hom
from .xmod import CrossedModule, StrictMorphism, Transformation, make_strict_morphism, validate_transformation


@dataclass(frozen=True, eq=False)
class WeakCocycle:
    p1: np.ndarray  # H1 -> G1
    p2: np.ndarray  # H2 -> G2
    eps: np.ndarray  # H1 x H1 -> G2

    def __post_init__(self):
        for name in ("p1", "p2", "eps"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name), dtype=np.int64)))

    @property
    def is_trivial_eps(self) -> bool:
        return not self.eps.any()


def _check_shapes(H: CrossedModule, G: CrossedModule, c: WeakCocycle) -> None:
    n = H.g1.order
    if c.p1.shape != (n,) or c.p2.shape != (H.g2.order,) or c.eps.shape != (n, n):
        raise NotACocycle("cocycle arrays have the wrong shape")
    if ((c.p1 < 0) | (c.p1 >= G.g1.order)).any() or ((c.p2 < 0) | (c.p2 >= G.g2.order)).any():
        raise NotACocycle("p1 or p2 has out-of-range values")
    if ((c.eps < 0) | (c.eps >= G.g2.order)).any():
        raise NotACocycle("ε has out-of-range values")
    if c.p1[0] != 0 or c.p2[0] != 0:
        raise NotACocycle("p1 and p2 must be pointed")
    if c.eps[0].any() or c.eps[:, 0].any():
        raise NotACocycle("ε must be normalized")


def cocycle_group_table(H: CrossedModule, G: CrossedModule, c: WeakCocycle) -> np.ndarray:
    m = G.g2.order
    idx = np.arange(H.g1.order * m)
    h, g = idx // m, idx % m
    hh = H.g1.table[h[:, None], h[None, :]]
    gp = G.action.table[g[:, None], c.p1[h][None, :]]
    eps_inv = G.g2.inverse[c.eps[h[:, None], h[None, :]]]
    gg = G.g2.table[G.g2.table[eps_inv, gp], g[None, :]]
    return hh * m + gg


def butterfly_from_cocycle(H: CrossedModule, G: CrossedModule, c: WeakCocycle) -> Butterfly:
    _check_shapes(H, G, c)
    m = G.g2.order
    try:
        E = make_group(cocycle_group_table(H, G, c))
    except ValidationError as exc:
        raise NotAGroup(f"cocycle product is not a group: {exc}", witness=exc.witness) from None
    idx = np.arange(E.order)
    h, g = idx // m, idx % m
    try:
        return make_butterfly(
            H, G, E,
            make_hom(G.g2, E, np.arange(m)),
            make_hom(H.g2, E, H.boundary.image * m + G.g2.inverse[c.p2]),
            make_hom(E, H.g1, h),
            make_hom(E, G.g1, G.g1.table[c.p1[h], G.boundary.image[g]]),
        )
    except ValidationError as exc:
        raise ButterflyAxiomFails(f"{type(exc).__name__}: {exc}", witness=exc.witness) from None


def _section(P: Butterfly, s) -> np.ndarray:
    if isinstance(s, GroupHom):
        s = s.image
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (P.H.g1.order,) or ((s < 0) | (s >= P.E.order)).any():
        raise NotASection("section has the wrong shape")
    if s[0] != 0:
        raise NotASection("section must send 1 to 1", witness=0)
    bad = np.flatnonzero(P.sigma.image[s] != np.arange(s.size))
    if bad.size:
        raise NotASection("σ ∘ s != id", witness=int(bad[0]))
    return s


def cocycle_from_butterfly(P: Butterfly, s=None) -> WeakCocycle:
    """Triple attached to a section ``s`` of ``σ`` (default: minimal section)."""
    s = _section(P, P.section if s is None else s)
    E, H = P.E, P.H
    t, inv, ipos = E.table, E.inverse, P.iota_pos
    p1 = P.rho.image[s]
    p2 = ipos[t[inv[P.kappa.image], s[H.boundary.image]]]
    # ε(h, h') = s(h')^-1 s(h)^-1 s(hh')
    shh = s[H.g1.table]
    eps = ipos[t[t[inv[s][None, :], inv[s][:, None]], shh]]
    if (p2 < 0).any() or (eps < 0).any():
        raise PostconditionFails("extracted values left Im ι")
    return WeakCocycle(p1, p2, eps)


def section_iso(P: Butterfly, s, B: Butterfly) -> ButterflyIso:
    """``(h, g) ↦ s(h) ι(g)`` from ``butterfly_from_cocycle(...)`` to ``P``."""
    s = _section(P, s)
    m = P.G.g2.order
    idx = np.arange(B.E.order)
    f = GroupHom(B.E, P.E, _readonly(P.E.table[s[idx // m], P.iota.image[idx % m]]))
    if not is_butterfly_iso(B, P, f):
        raise PostconditionFails("section map is not a butterfly isomorphism")
    return ButterflyIso(f)


def round_trip(P: Butterfly, s=None) -> ButterflyIso:
    s = P.section if s is None else s
    c = cocycle_from_butterfly(P, s)
    return section_iso(P, s, butterfly_from_cocycle(P.H, P.G, c))


def cocycle_to_strict(H: CrossedModule, G: CrossedModule, c: WeakCocycle) -> StrictMorphism:
    """The strict morphism of a triple with ``ε ≡ 1``."""
    if not c.is_trivial_eps:
        raise TypeMismatch("ε is not trivial")
    return make_strict_morphism(H, G, c.p2, c.p1)


def section_difference(P: Butterfly, s, s2) -> np.ndarray:
    """``θ(h) = ι^-1(s(h)^-1 s'(h))``.

    When both sections are homomorphisms, ``θ`` is checked to be a pointed
    transformation from the strict morphism of ``s'`` to that of ``s``.
    """
    s, s2 = _section(P, s), _section(P, s2)
    E = P.E
    theta = P.iota_pos[E.table[E.inverse[s], s2]]
    if (theta < 0).any():
        raise PostconditionFails("section difference left Im ι")
    theta = _readonly(theta)
    c, c2 = cocycle_from_butterfly(P, s), cocycle_from_butterfly(P, s2)
    check_section_difference(P.H, P.G, c, c2, theta)
    if c.is_trivial_eps and c2.is_trivial_eps:
        A = cocycle_to_strict(P.H, P.G, c)
        B = cocycle_to_strict(P.H, P.G, c2)
        validate_transformation(Transformation(0, theta), B, A)
    return theta


def check_section_difference(H: CrossedModule, G: CrossedModule, c: WeakCocycle,
                             c2: WeakCocycle, theta) -> None:
    """Relations between the triples of two sections differing by ``θ``:
    ``p1' = p1 ∂θ``, ``p2' = p2 θ∂`` and the twisted crossed law
    ``θ(hh') = ε(h,h')^-1 θ(h)^{p1(h')} θ(h') ε'(h,h')``."""
    th = np.asarray(theta, dtype=np.int64)
    t2, inv2 = G.g2.table, G.g2.inverse
    if not np.array_equal(c2.p1, G.g1.table[c.p1, G.boundary.image[th]]):
        raise NotCrossedHom("p1' != p1 ∂θ")
    if not np.array_equal(c2.p2, t2[c.p2, th[H.boundary.image]]):
        raise NotCrossedHom("p2' != p2 θ∂")
    lhs = th[H.g1.table]
    twisted = G.action.table[th[:, None], c.p1[None, :]]
    rhs = t2[t2[t2[inv2[c.eps], twisted], th[None, :]], c2.eps]
    if not np.array_equal(lhs, rhs):
        h, h2 = map(int, np.argwhere(lhs != rhs)[0])
        raise NotCrossedHom("twisted crossed law fails", witness=(h, h2))


def shift_section(P: Butterfly, s, theta) -> np.ndarray:
    """The section ``h ↦ s(h) ι(θ(h))``."""
    s = _section(P, s)
    th = np.asarray(theta, dtype=np.int64)
    if th[0] != 0:
        raise NotASection("θ must be pointed")
    return _readonly(P.E.table[s, P.iota.image[th]])


def sample_sections(P: Butterfly, k: int, rng: np.random.Generator | None = None) -> list[np.ndarray]:
    """Up to ``k`` distinct normalized sections of ``σ``; the minimal one first."""
    n = P.H.g1.order
    fibers = [np.flatnonzero(P.sigma.image == h) for h in range(n)]
    total = 1
    for f in fibers[1:]:
        total *= f.size
    out = [P.section]
    if total <= k:
        out = [np.array((0,) + c, dtype=np.int64) for c in product(*[f.tolist() for f in fibers[1:]])]
        return [_readonly(s) for s in out]
    rng = rng or np.random.default_rng(0)
    seen = {P.section.tobytes()}
    while len(out) < k:
        s = np.array([0] + [int(rng.choice(f)) for f in fibers[1:]], dtype=np.int64)
        if s.tobytes() not in seen:
            seen.add(s.tobytes())
            out.append(_readonly(s))
    return out


def iter_cocycles(H: CrossedModule, G: CrossedModule):
    """Every normalized triple whose product gives a butterfly.  Brute force;
    only for tiny inputs."""
    n1, n2 = H.g1.order, H.g2.order
    a1, a2 = G.g1.order, G.g2.order
    pairs = [(i, j) for i in range(1, n1) for j in range(1, n1)]
    for p1 in product(range(a1), repeat=n1 - 1):
        for p2 in product(range(a2), repeat=n2 - 1):
            for ev in product(range(a2), repeat=len(pairs)):
                eps = np.zeros((n1, n1), dtype=np.int64)
                for (i, j), v in zip(pairs, ev):
                    eps[i, j] = v
                c = WeakCocycle(np.array((0,) + p1), np.array((0,) + p2), eps)
                try:
                    B = butterfly_from_cocycle(H, G, c)
                except ValidationError:
                    continue
                yield c, B
