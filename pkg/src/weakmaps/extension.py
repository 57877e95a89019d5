"""Group extensions ``1 -> N -> E -> Γ -> 1``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotAnExtension, TypeMismatch
from .group import FiniteGroup, _readonly, quotient_by_normal, subgroup
from .hom import GroupHom, RightAction, isomorphism_search, make_hom
from .semidirect import fiber_product, semidirect_product


@dataclass(frozen=True, eq=False)
class Extension:
    N: FiniteGroup
    E: FiniteGroup
    gamma: FiniteGroup
    incl: GroupHom
    proj: GroupHom

    @cached_property
    def incl_pos(self) -> np.ndarray:
        """Inverse of ``incl`` on its image, ``-1`` elsewhere."""
        pos = np.full(self.E.order, -1, dtype=np.int64)
        pos[self.incl.image] = np.arange(self.N.order)
        return pos

    @cached_property
    def section(self) -> np.ndarray:
        """Minimal preimage of each element of ``Γ``."""
        return self.proj.preimage_table()

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``(a, x) ↦ x^-1 a x`` on ``N`` for ``x ∈ E``, shape ``(|N|, |E|)``."""
        ct = self.E.conj_table[self.incl.image]
        return _readonly(self.incl_pos[ct])

    def induced_action(self) -> RightAction:
        """Action of ``Γ`` on ``N`` through the minimal section (valid when ``N``
        is abelian or when it is independent of the lift)."""
        return RightAction(self.gamma, self.N, _readonly(self.conjugation[:, self.section]))

    def __repr__(self) -> str:
        return f"<Extension {self.N.order} -> {self.E.order} -> {self.gamma.order}>"


def make_extension(N, E, gamma, incl, proj) -> Extension:
    try:
        if not isinstance(incl, GroupHom):
            incl = make_hom(N, E, incl)
        if not isinstance(proj, GroupHom):
            proj = make_hom(E, gamma, proj)
    except Exception as exc:
        raise NotAnExtension(f"structure map is not a homomorphism: {exc}") from None
    if incl.domain != N or incl.codomain != E or proj.domain != E or proj.codomain != gamma:
        raise TypeMismatch("extension maps have wrong groups")
    if not incl.is_injective:
        raise NotAnExtension("inclusion is not injective", witness=incl.kernel[1])
    if not proj.is_surjective:
        raise NotAnExtension("projection is not surjective")
    if set(proj.kernel) != set(incl.image_set):
        raise NotAnExtension("kernel of projection differs from image of inclusion")
    return Extension(N, E, gamma, incl, proj)


def extension_from_quotient(E: FiniteGroup, N_elems) -> Extension:
    """``1 -> N -> E -> E/N -> 1`` for a normal subgroup given by elements."""
    N, incl = subgroup(E, N_elems)
    Q, proj = quotient_by_normal(E, N_elems)
    return Extension(N, E, Q, incl, proj)


def split_extension(gamma: FiniteGroup, act: RightAction) -> Extension:
    """``N ⋊ Γ`` for a right action of ``Γ`` on ``N`` (``Γ ⋉ N`` indexing)."""
    N = act.space
    E = semidirect_product(gamma, N, act)
    m = N.order
    incl = GroupHom(N, E, _readonly(np.arange(m)))
    proj = GroupHom(E, gamma, _readonly(np.arange(E.order) // m))
    return Extension(N, E, gamma, incl, proj)


def extension_isomorphism(X: Extension, Y: Extension) -> GroupHom | None:
    """An isomorphism ``X.E -> Y.E`` inducing the identity on ``N`` and ``Γ``."""
    if X.N != Y.N or X.gamma != Y.gamma:
        raise TypeMismatch("extensions with different kernel or quotient")
    fixed = {int(X.incl(g)): int(Y.incl(g)) for g in X.N.generators}
    buckets = [np.flatnonzero(Y.proj.image == c) for c in range(Y.gamma.order)]
    return isomorphism_search(X.E, Y.E, fixed, allowed=lambda x: buckets[X.proj(x)])


def same_extension_class(X: Extension, Y: Extension) -> bool:
    return extension_isomorphism(X, Y) is not None


def baer_sum(X: Extension, Y: Extension) -> Extension:
    """Baer sum of two extensions with the same abelian kernel and action."""
    if X.N != Y.N or X.gamma != Y.gamma:
        raise TypeMismatch("Baer sum needs a common kernel and quotient")
    A = X.N
    if not A.is_abelian:
        raise TypeMismatch("Baer sum needs an abelian kernel")
    L, pairs = fiber_product(X.proj, Y.proj)
    key = pairs[:, 0] * Y.E.order + pairs[:, 1]
    pos = {int(k): i for i, k in enumerate(key)}
    anti = [pos[int(X.incl(a)) * Y.E.order + int(Y.incl(A.inv(a)))] for a in range(A.order)]
    Q, q = quotient_by_normal(L, anti)
    incl = [q(pos[int(X.incl(a)) * Y.E.order]) for a in range(A.order)]
    proj_l = X.proj.image[pairs[:, 0]]
    proj = np.zeros(Q.order, dtype=np.int64)
    proj[q.image] = proj_l
    return make_extension(A, Q, X.gamma, incl, proj)
