"""Abelian butterflies between two-term complexes of finite abelian groups.

A complex ``X = [X^-1 -> X^0]`` is treated as a crossed module with trivial
action; a butterfly ``X -> Y`` then has ``ι: Y^-1 -> E``, ``κ: X^-1 -> E``,
``σ: E -> X^0`` and ``ρ: E -> Y^0`` with ``E`` abelian.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .butterfly import (
    Butterfly,
    find_isomorphism,
    fiber_homology,
    is_split,
    les_fiber,
    make_butterfly,
    of_strict,
)
from .classify import enumerate_extensions
from .errors import NotAbelian, SizeLimit, TypeMismatch
from .exact import ExactSequence
from .group import FiniteGroup, check_size, quotient_by_normal, trivial_group
from .hom import GroupHom, iter_homs, make_hom, trivial_action, trivial_hom
from .semidirect import fiber_product
from .xmod import CrossedModule, iter_strict_morphisms, trivial_morphism
from .zlinalg import ext_invariants


@dataclass(frozen=True, eq=False)
class Complex2:
    xm1: FiniteGroup
    x0: FiniteGroup
    d: GroupHom

    @cached_property
    def xmod(self) -> CrossedModule:
        return CrossedModule(self.xm1, self.x0, self.d, trivial_action(self.x0, self.xm1),
                             label=f"[{self.xm1.order}->{self.x0.order}]")

    def __eq__(self, other) -> bool:
        return isinstance(other, Complex2) and self.xmod == other.xmod

    def __hash__(self) -> int:
        return hash((self.xm1.order, self.x0.order))

    def __repr__(self) -> str:
        return f"<Complex2 {self.xm1.order} -> {self.x0.order}>"


def make_complex(xm1: FiniteGroup, x0: FiniteGroup, d=None) -> Complex2:
    if not xm1.is_abelian or not x0.is_abelian:
        raise NotAbelian("complex terms must be abelian")
    if d is None:
        d = trivial_hom(xm1, x0)
    elif not isinstance(d, GroupHom):
        d = make_hom(xm1, x0, d)
    return Complex2(xm1, x0, d)


def complex_of(x0: FiniteGroup | None = None, xm1: FiniteGroup | None = None) -> Complex2:
    """``[xm1 -> x0]`` with zero differential; missing terms are trivial."""
    return make_complex(xm1 or trivial_group(), x0 or trivial_group())


def _xm(X):
    return X.xmod if isinstance(X, Complex2) else X


def _check_abelian(P: Butterfly) -> Butterfly:
    if not P.E.is_abelian:
        raise NotAbelian("abelian butterflies need an abelian middle group")
    for X in (P.H, P.G):
        if not (X.g1.is_abelian and X.g2.is_abelian and X.action.is_trivial):
            raise NotAbelian("ends must be complexes of abelian groups")
    return P


def ab_make(X: Complex2, Y: Complex2, E, iota, kappa, sigma, rho) -> Butterfly:
    if not E.is_abelian:
        raise NotAbelian("abelian butterflies need an abelian middle group")
    P = make_butterfly(_xm(X), _xm(Y), E, iota, kappa, sigma, rho, check_actions=False)
    return _check_abelian(P)


def ab_zero(X: Complex2, Y: Complex2) -> Butterfly:
    return of_strict(trivial_morphism(_xm(X), _xm(Y)))


def ab_add(P: Butterfly, Q: Butterfly) -> Butterfly:
    """Baer-style sum over ``X^0``, modulo the antidiagonal copy of ``Y^-1``."""
    if P.H != Q.H or P.G != Q.G:
        raise TypeMismatch("summands must share source and target")
    _check_abelian(P)
    _check_abelian(Q)
    Y2, Y1 = P.G.g2, P.G.g1
    L, pairs = fiber_product(P.sigma, Q.sigma)
    n2 = Q.E.order
    lookup = np.full(P.E.order * n2, -1, dtype=np.int64)
    lookup[pairs[:, 0] * n2 + pairs[:, 1]] = np.arange(pairs.shape[0])
    anti = lookup[P.iota.image * n2 + Q.iota.image[Y2.inverse]]
    S, q = quotient_by_normal(L, anti)
    reps = q.preimage_table()
    x, y = pairs[reps, 0], pairs[reps, 1]
    iota = q.image[lookup[P.iota.image * n2]]
    kappa = q.image[lookup[P.kappa.image * n2 + Q.kappa.image]]
    sigma = P.sigma.image[x]
    rho = Y1.table[P.rho.image[x], Q.rho.image[y]]
    return ab_make(P.H, P.G, S, make_hom(Y2, S, iota), make_hom(P.H.g2, S, kappa),
                   make_hom(S, P.H.g1, sigma), make_hom(S, Y1, rho))


def ab_neg(P: Butterfly) -> Butterfly:
    _check_abelian(P)
    iota = P.iota.image[P.G.g2.inverse]
    rho = P.G.g1.inverse[P.rho.image]
    return ab_make(P.H, P.G, P.E, make_hom(P.G.g2, P.E, iota), P.kappa, P.sigma,
                   make_hom(P.E, P.G.g1, rho))


class ConeHomology(NamedTuple):
    h_minus2: FiniteGroup  # Ker κ
    h_minus1: FiniteGroup  # Ker ρ / Im κ
    h0_size: int  # |Coker ρ|
    sequence: ExactSequence

    @property
    def acyclic(self) -> bool:
        return self.h_minus2.order == 1 and self.h_minus1.order == 1 and self.h0_size == 1


def mapping_cone_check(P: Butterfly) -> ConeHomology:
    """Homology of ``X^-1 -> E -> Y^0`` in degrees ``[-2, 0]`` and the long
    exact sequence tying it to ``H*(X)`` and ``H*(Y)``."""
    _check_abelian(P)
    fh = fiber_homology(P)
    seq = les_fiber(P)
    return ConeHomology(fh.h2, fh.h1, fh.h0.size, seq)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def chain_maps(X: Complex2, Y: Complex2):
    """Strict morphisms of complexes."""
    return iter_strict_morphisms(_xm(X), _xm(Y))


def _abelian_extensions(x0: FiniteGroup, ym1: FiniteGroup):
    return [X for X in enumerate_extensions(x0, ym1) if X.E.is_abelian]


class AbClasses(NamedTuple):
    reps: list[Butterfly]
    ext_index: list[int]  # NE-SW extension class of each representative
    n_ext: int  # number of abelian extension classes of X^0 by Y^-1
    strict: list[bool]  # reachable from a chain map
    split: list[bool]  # NE-SW sequence splits

    def __len__(self) -> int:
        return len(self.reps)


def class_index(P: Butterfly, reps: list[Butterfly]) -> int:
    for i, Q in enumerate(reps):
        if P.E.order == Q.E.order and find_isomorphism(P, Q) is not None:
            return i
    return -1


def ab_hom_classes(X: Complex2, Y: Complex2) -> AbClasses:
    """All abelian butterflies ``X -> Y`` up to isomorphism."""
    for G in (X.xm1, X.x0, Y.xm1, Y.x0):
        check_size(G.order, "complex term")
    check_size(X.x0.order * Y.xm1.order, "butterfly middle group")
    HX, GY = _xm(X), _xm(Y)
    exts = _abelian_extensions(X.x0, Y.xm1)
    reps: list[Butterfly] = []
    ext_index: list[int] = []
    for ei, ext in enumerate(exts):
        E = ext.E
        sig = ext.proj
        fibers = [np.flatnonzero(sig.image == h) for h in range(X.x0.order)]
        found: list[Butterfly] = []
        for kappa in iter_homs(X.xm1, E, allowed=lambda b: fibers[X.d(b)]):
            if not np.array_equal(sig.image[kappa.image], X.d.image):
                continue
            pins: dict[int, int] = {}
            bad = False
            for g in Y.xm1.generators:
                e, v = int(ext.incl(g)), int(Y.d(g))
                if pins.setdefault(e, v) != v:
                    bad = True
            for b in X.xm1.generators:
                e = int(kappa(b))
                if pins.setdefault(e, 0) != 0:
                    bad = True
            if bad:
                continue
            for rho in iter_homs(E, Y.x0, fixed=pins):
                if (not np.array_equal(rho.image[ext.incl.image], Y.d.image)
                        or rho.image[kappa.image].any()):
                    continue
                P = make_butterfly(HX, GY, E, ext.incl, kappa, sig, rho, check_actions=False)
                if class_index(P, found) < 0:
                    found.append(P)
        reps.extend(found)
        ext_index.extend([ei] * len(found))
    strict_hits = set()
    for f in chain_maps(X, Y):
        i = class_index(of_strict(f), reps)
        if i < 0:
            raise SizeLimit("strict morphism missing from the enumeration")
        strict_hits.add(i)
    strict = [i in strict_hits for i in range(len(reps))]
    split = [is_split(P) for P in reps]
    return AbClasses(reps, ext_index, len(exts), strict, split)


def sum_table(classes: AbClasses) -> np.ndarray:
    """Cayley table of ``ab_add`` on class representatives."""
    reps = classes.reps
    n = len(reps)
    t = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            t[i, j] = class_index(ab_add(reps[i], reps[j]), reps)
    return t


def ext1_invariants(A: FiniteGroup, B: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors of ``Ext^1(A, B)`` via Smith normal form."""
    return ext_invariants(A.abelian_invariants, B.abelian_invariants)
