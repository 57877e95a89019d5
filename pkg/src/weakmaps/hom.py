"""Homomorphisms, right actions, and backtracking homomorphism search."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import NotAnAction, NotHomomorphism, TypeMismatch
from .group import FiniteGroup, _readonly, from_elements


@dataclass(frozen=True, eq=False)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    image: np.ndarray

    def __call__(self, g: int) -> int:
        return int(self.image[g])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and bool(np.array_equal(self.image, other.image))
        )

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def __repr__(self) -> str:
        return f"<GroupHom {self.domain.order}->{self.codomain.order} {self.image.tolist()}>"

    @cached_property
    def kernel(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.image == 0))

    @cached_property
    def image_set(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unique(self.image))

    @property
    def is_injective(self) -> bool:
        return len(self.kernel) == 1

    @property
    def is_surjective(self) -> bool:
        return len(self.image_set) == self.codomain.order

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    @property
    def is_trivial(self) -> bool:
        return not self.image.any()

    def then(self, other: "GroupHom") -> "GroupHom":
        """``other ∘ self``."""
        if other.domain != self.codomain:
            raise TypeMismatch("composable maps must share the middle group")
        return GroupHom(self.domain, other.codomain, _readonly(other.image[self.image]))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        return other.then(self)

    def inverse_map(self) -> "GroupHom":
        if not self.is_bijective:
            raise NotHomomorphism("only bijections can be inverted")
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.image.size)
        return GroupHom(self.codomain, self.domain, _readonly(inv))

    def preimage_table(self) -> np.ndarray:
        """Some preimage of each codomain element (minimal), ``-1`` if none."""
        out = np.full(self.codomain.order, -1, dtype=np.int64)
        img = self.image
        for g in range(img.size - 1, -1, -1):
            out[img[g]] = g
        return out


def make_hom(domain: FiniteGroup, codomain: FiniteGroup, image) -> GroupHom:
    img = np.asarray(image, dtype=np.int64)
    if img.shape != (domain.order,):
        raise NotHomomorphism(
            f"image has shape {img.shape}, expected ({domain.order},)", witness=None
        )
    if ((img < 0) | (img >= codomain.order)).any():
        g = int(np.flatnonzero((img < 0) | (img >= codomain.order))[0])
        raise NotHomomorphism(f"image of {g} out of range", witness=(g,))
    w = _kernels.first_nonhom(domain.table, codomain.table, img)
    if w[0] >= 0:
        g, h = map(int, w)
        raise NotHomomorphism(f"f({g}*{h}) != f({g})*f({h})", witness=(g, h))
    return GroupHom(domain, codomain, _readonly(img))


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, _readonly(np.arange(G.order)))


def trivial_hom(G: FiniteGroup, H: FiniteGroup) -> GroupHom:
    return GroupHom(G, H, _readonly(np.zeros(G.order, dtype=np.int64)))


def inversion_image(G: FiniteGroup) -> np.ndarray:
    return G.inverse


@dataclass(frozen=True, eq=False)
class RightAction:
    """Right action of ``group`` on ``space`` by automorphisms; ``table[a, g] = a^g``."""

    group: FiniteGroup
    space: FiniteGroup
    table: np.ndarray

    def __call__(self, a: int, g: int) -> int:
        return int(self.table[a, g])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RightAction):
            return NotImplemented
        return (
            self.group == other.group
            and self.space == other.space
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    @property
    def is_trivial(self) -> bool:
        return bool((self.table == np.arange(self.space.order)[:, None]).all())

    def pullback(self, f: GroupHom) -> "RightAction":
        """Action of ``f.domain`` through ``f``."""
        if f.codomain != self.group:
            raise TypeMismatch("pullback along a map into a different group")
        return RightAction(f.domain, self.space, _readonly(self.table[:, f.image]))

    def restrict_space(self, incl: GroupHom) -> "RightAction":
        """Restriction to an invariant subgroup given by its inclusion."""
        pos = np.full(self.space.order, -1, dtype=np.int64)
        pos[incl.image] = np.arange(incl.domain.order)
        t = pos[self.table[incl.image]]
        if (t < 0).any():
            raise NotAnAction("subgroup is not invariant")
        return RightAction(self.group, incl.domain, _readonly(t))

    def automorphism(self, g: int) -> np.ndarray:
        return self.table[:, g]


def make_action(group: FiniteGroup, space: FiniteGroup, table) -> RightAction:
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (space.order, group.order):
        raise NotAnAction(f"action table has shape {t.shape}, expected "
                          f"({space.order}, {group.order})")
    if ((t < 0) | (t >= space.order)).any():
        raise NotAnAction("action entry out of range")
    ar = np.arange(space.order)
    if not (t[:, 0] == ar).all():
        a = int(np.flatnonzero(t[:, 0] != ar)[0])
        raise NotAnAction(f"identity moves {a}", witness=(a, 0))
    w = _kernels.first_action_comp_failure(group.table, t)
    if w[0] >= 0:
        a, g, h = map(int, w)
        raise NotAnAction(f"(a^g)^h != a^(gh) at a={a}, g={g}, h={h}", witness=(a, g, h))
    w = _kernels.first_action_auto_failure(space.table, t)
    if w[0] >= 0:
        a, b, g = map(int, w)
        raise NotAnAction(f"(ab)^g != a^g b^g at a={a}, b={b}, g={g}", witness=(a, b, g))
    return RightAction(group, space, _readonly(t))


def trivial_action(group: FiniteGroup, space: FiniteGroup) -> RightAction:
    t = np.repeat(np.arange(space.order)[:, None], group.order, axis=1)
    return RightAction(group, space, _readonly(t))


def conjugation_action(G: FiniteGroup) -> RightAction:
    """``G`` acting on itself by ``a^g = g^-1 a g``."""
    return RightAction(G, G, G.conj_table)


def conjugation_on_normal(G: FiniteGroup, incl: GroupHom) -> RightAction:
    """Conjugation action of ``G`` on a normal subgroup given by its inclusion."""
    return conjugation_action(G).restrict_space(incl)


# ---------------------------------------------------------------------------
# homomorphism search
# ---------------------------------------------------------------------------


def iter_homs(
    domain: FiniteGroup,
    codomain: FiniteGroup,
    *,
    fixed: Mapping[int, int] | Sequence[tuple[int, int]] | None = None,
    allowed: Callable[[int], Iterable[int]] | None = None,
    injective: bool = False,
    surjective: bool = False,
    gens: Sequence[int] | None = None,
) -> Iterator[GroupHom]:
    """Enumerate homomorphisms by backtracking over generator images.

    ``fixed`` pins images of some elements; ``allowed(g)`` restricts the image
    of each free generator ``g``.  Output order is lexicographic in the images
    of the free generators, hence deterministic.
    """
    dt, ct = domain.table, codomain.table
    img = np.full(domain.order, -1, dtype=np.int64)
    img[0] = 0
    pinned: list[int] = []
    items = fixed.items() if isinstance(fixed, Mapping) else (fixed or [])
    for g, v in items:
        g, v = int(g), int(v)
        if img[g] >= 0 and img[g] != v:
            return
        if img[g] < 0:
            img[g] = v
            pinned.append(g)
    if pinned:
        if not _kernels.close_partial_hom(dt, ct, img, np.asarray(pinned, dtype=np.int64), injective):
            return
    dom_orders, cod_orders = domain.orders, codomain.orders
    order_gens = list(gens) if gens is not None else list(domain.generators)

    def candidates(g: int) -> list[int]:
        o = int(dom_orders[g])
        if allowed is not None:
            pool = [int(c) for c in allowed(g)]
        else:
            pool = range(codomain.order)
        if injective:
            return [c for c in pool if cod_orders[c] == o]
        return [c for c in pool if o % cod_orders[c] == 0]

    def rec(img: np.ndarray, used: list[int]) -> Iterator[np.ndarray]:
        free = [g for g in order_gens if img[g] < 0]
        if not free:
            if (img < 0).any():
                # given generators did not generate; fall back to all elements
                g = int(np.flatnonzero(img < 0)[0])
                free = [g]
            else:
                yield img
                return
        g = free[0]
        for c in candidates(g):
            trial = img.copy()
            trial[g] = c
            if _kernels.close_partial_hom(dt, ct, trial, np.asarray(used + [g], dtype=np.int64), injective):
                yield from rec(trial, used + [g])

    for out in rec(img, pinned):
        h = GroupHom(domain, codomain, _readonly(out))
        if surjective and not h.is_surjective:
            continue
        yield h


def find_hom(domain, codomain, **kw) -> GroupHom | None:
    return next(iter_homs(domain, codomain, **kw), None)


def isomorphism_search(
    G: FiniteGroup,
    H: FiniteGroup,
    constraints: Mapping[int, int] | Sequence[tuple[int, int]] | None = None,
    allowed: Callable[[int], Iterable[int]] | None = None,
) -> GroupHom | None:
    """First isomorphism ``G -> H`` honouring the constraints, or ``None``.

    Exponential in the worst case; intended for desk-scale groups.
    """
    if G.order != H.order or G.order_profile != H.order_profile:
        return None
    if len(G.center) != len(H.center) or G.is_abelian != H.is_abelian:
        return None
    return find_hom(G, H, fixed=constraints, allowed=allowed, injective=True)


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return isomorphism_search(G, H) is not None


# ---------------------------------------------------------------------------
# automorphism groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AutGroup:
    """``Aut(N)`` as a table group; element ``i`` is the map ``maps[i]``.

    The product ``φ·ψ`` applies ``φ`` first, so ``action`` (``α^φ = φ(α)``) is a
    right action.
    """

    base: FiniteGroup
    group: FiniteGroup
    maps: np.ndarray
    action: RightAction

    def index_of(self, image: np.ndarray) -> int:
        key = np.asarray(image, dtype=np.int64).tobytes()
        return self._lookup[key]

    @cached_property
    def _lookup(self) -> dict:
        return {m.tobytes(): i for i, m in enumerate(self.maps)}

    @cached_property
    def inner(self) -> GroupHom:
        """``N -> Aut(N)``, ``κ ↦ (α ↦ κ^-1 α κ)``."""
        N = self.base
        return GroupHom(N, self.group, _readonly(
            [self.index_of(N.conj_table[:, k]) for k in range(N.order)]))


def automorphism_group(N: FiniteGroup) -> AutGroup:
    maps = [h.image for h in iter_homs(N, N, injective=True)]
    ident = np.arange(N.order)
    maps.sort(key=lambda m: (not np.array_equal(m, ident), m.tolist()))
    keys = [m.tobytes() for m in maps]
    index = {k: i for i, k in enumerate(keys)}
    A = from_elements(list(range(len(maps))),
                      lambda i, j: index[maps[j][maps[i]].tobytes()], label="Aut")
    arr = np.stack(maps)
    act = RightAction(A, N, _readonly(arr.T))
    return AutGroup(N, A, _readonly(arr), act)
