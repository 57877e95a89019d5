"""Finite groups given by multiplication tables.

Elements are the integers ``0..n-1`` with ``0`` the identity.  Every group is
validated on construction (associativity through the kernel module), so a
``FiniteGroup`` in hand is always a group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .config import get_size_limit
from .errors import (
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAbelian,
    NotAssociative,
    NotNormal,
    NotSubgroup,
    SizeLimit,
)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def check_size(n: int, what: str = "group") -> None:
    if n <= 0:
        raise SizeLimit(f"{what} is infinite or empty; only finite groups are supported")
    limit = get_size_limit()
    if n > limit:
        raise SizeLimit(f"{what} of order {n} exceeds the size limit {limit}", witness=n)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    inverse: np.ndarray
    label: str = ""

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    identity = 0

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or (
            self.order == other.order and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self) -> int:
        return hash((self.order, self.table.tobytes()))

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<FiniteGroup{tag} order={self.order}>"

    def mul(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = int(self.table[out, x])
        return out

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def conj(self, a: int, g: int) -> int:
        """``g^-1 a g``."""
        return int(self.conj_table[a, g])

    def commutator(self, x: int, y: int) -> int:
        """``x y x^-1 y^-1``."""
        t, i = self.table, self.inverse
        return int(t[t[t[x, y], i[x]], i[y]])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        out = 0
        for _ in range(k):
            out = int(self.table[out, x])
        return out

    @cached_property
    def conj_table(self) -> np.ndarray:
        # entry (a, g) = g^-1 a g
        t, ar = self.table, np.arange(self.order)
        return _readonly(t[t[self.inverse[None, :], ar[:, None]], ar[None, :]])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.order
        out = np.ones(n, dtype=np.int64)
        cur = np.arange(n)
        k = 1
        pending = cur != 0
        while pending.any():
            cur = self.table[cur, np.arange(n)]
            k += 1
            hit = pending & (cur == 0)
            out[hit] = k
            pending &= ~hit
        out[0] = 1
        return _readonly(out)

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in set(int(x) for x in self.orders):
            e = e * o // gcd(e, o)
        return e

    @cached_property
    def order_profile(self) -> tuple:
        vals, counts = np.unique(self.orders, return_counts=True)
        return tuple(zip(vals.tolist(), counts.tolist()))

    @cached_property
    def center(self) -> tuple[int, ...]:
        t = self.table
        return tuple(int(z) for z in np.flatnonzero((t == t.T).all(axis=1)))

    def centralizer(self, subset: Iterable[int]) -> tuple[int, ...]:
        s = np.asarray(sorted(set(subset)), dtype=np.int64)
        if s.size == 0:
            return tuple(range(self.order))
        t = self.table
        ok = (t[:, s] == t[s, :].T).all(axis=1)
        return tuple(int(x) for x in np.flatnonzero(ok))

    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = [int(g) for g in gens if g != 0]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if not seen[y]:
                        seen[y] = True
                        new.append(y)
            frontier = new
        return tuple(int(x) for x in np.flatnonzero(seen))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily and deterministically."""
        gens: list[int] = []
        current = {0}
        by_order = sorted(range(1, self.order), key=lambda x: (-int(self.orders[x]), x))
        while len(current) < self.order:
            best, best_size = None, -1
            for x in by_order:
                if x in current:
                    continue
                size = len(self.closure(gens + [x]))
                if size > best_size:
                    best, best_size = x, size
                    if size == self.order:
                        break
            gens.append(best)
            current = set(self.closure(gens))
        return tuple(gens)

    @cached_property
    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors ``d_1 | d_2 | ...`` (all > 1) of an abelian group."""
        if not self.is_abelian:
            raise NotAbelian("abelian invariants requested for a non-abelian group")
        return abelian_invariants_from_orders(self.orders)

    def is_subgroup(self, elems: Iterable[int]) -> bool:
        s = np.asarray(sorted(set(int(x) for x in elems)), dtype=np.int64)
        if s.size == 0 or s[0] != 0:
            return False
        mask = np.zeros(self.order, dtype=bool)
        mask[s] = True
        return bool(mask[self.table[np.ix_(s, s)]].all())

    def is_normal(self, elems: Iterable[int]) -> bool:
        s = np.asarray(sorted(set(int(x) for x in elems)), dtype=np.int64)
        mask = np.zeros(self.order, dtype=bool)
        mask[s] = True
        return bool(mask[self.conj_table[s]].all())


def _ilog(c: int, p: int) -> int:
    k = 0
    while c > 1:
        c //= p
        k += 1
    return k


def abelian_invariants_from_orders(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element orders."""
    orders = np.asarray(orders, dtype=np.int64)
    n = len(orders)
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    parts: dict[int, list[int]] = {}
    for p in primes:
        # log_p #{x : p^k x = 0} = sum_i min(lambda_i, k)
        logs = [0]
        k = 0
        while True:
            k += 1
            logs.append(_ilog(int(np.sum((p**k) % orders == 0)), p))
            if logs[-1] == logs[-2]:
                break
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]  # parts >= k
        lam: list[int] = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            lam += [k + 1] * (ge[k] - nxt)
        parts[p] = sorted(lam, reverse=True)
    length = max((len(v) for v in parts.values()), default=0)
    factors = []
    for i in range(length):
        d = 1
        for p, lam in parts.items():
            if i < len(lam):
                d *= p ** lam[i]
        factors.append(d)
    return tuple(sorted(factors))


def _relabel_identity(table: np.ndarray, e: int) -> np.ndarray:
    n = table.shape[0]
    perm = np.arange(n)
    perm[0], perm[e] = e, 0  # new index -> old index
    inv = np.argsort(perm)
    return inv[table[np.ix_(perm, perm)]]


def make_group(table, *, label: str = "", check: bool = True) -> FiniteGroup:
    """Validate a multiplication table and return the group.

    If the identity is not element 0 it is swapped into position 0.
    """
    try:
        t = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise MalformedTable(f"table is not an integer array: {exc}") from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise MalformedTable(f"table must be square and non-empty, got shape {t.shape}")
    n = t.shape[0]
    check_size(n)
    if check:
        bad = np.argwhere((t < 0) | (t >= n))
        if bad.size:
            i, j = map(int, bad[0])
            raise MalformedTable(f"entry ({i},{j}) = {int(t[i, j])} out of range", witness=(i, j))
        ar = np.arange(n)
        ids = np.flatnonzero((t == ar[None, :]).all(axis=1) & (t == ar[:, None]).all(axis=0))
        if ids.size == 0:
            raise NoIdentity("no two-sided identity element")
        e = int(ids[0])
        if e != 0:
            t = _relabel_identity(t, e)
        zero = t == 0
        has = zero.any(axis=1)
        if not has.all():
            g = int(np.flatnonzero(~has)[0])
            raise NoInverse(f"element {g} has no right inverse", witness=g)
        inverse = zero.argmax(axis=1)
        if not (t[inverse, ar] == 0).all():
            g = int(np.flatnonzero(t[inverse, ar] != 0)[0])
            raise NoInverse(f"element {g} has no two-sided inverse", witness=g)
        w = _kernels.first_nonassociative(t)
        if w[0] >= 0:
            a, b, c = map(int, w)
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", witness=(a, b, c))
        rows_ok = (np.sort(t, axis=1) == ar[None, :]).all()
        if not rows_ok:
            raise MalformedTable("rows are not permutations")
    else:
        inverse = (t == 0).argmax(axis=1)
    return FiniteGroup(_readonly(t), _readonly(inverse), label)


def from_elements(elements: Sequence, mul: Callable, *, label: str = "") -> FiniteGroup:
    """Group on a list of hashable elements; ``elements[0]`` must be the identity."""
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    check_size(n)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[mul(x, y)]
    return make_group(table, label=label)


def trivial_group() -> FiniteGroup:
    return make_group([[0]], label="1")


def cyclic(n: int) -> FiniteGroup:
    check_size(n, f"cyclic group Z/{n}")
    ar = np.arange(n)
    return make_group((ar[:, None] + ar[None, :]) % n, label=f"Z{n}")


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    """Product with mixed-radix indexing, last factor fastest."""
    if not groups:
        return trivial_group()
    out = groups[0]
    for h in groups[1:]:
        m = h.order
        check_size(out.order * m)
        a = np.arange(out.order * m)
        i, j = a // m, a % m
        t = out.table[i[:, None], i[None, :]] * m + h.table[j[:, None], j[None, :]]
        out = make_group(t, label="x".join(filter(None, [out.label, h.label])))
    return out


def symmetric(n: int) -> FiniteGroup:
    """Permutations of ``range(n)`` in lexicographic order; product is ``p`` then ``q``."""
    perms = list(itertools.permutations(range(n)))
    return from_elements(perms, lambda p, q: tuple(q[p[i]] for i in range(n)), label=f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``: pairs ``(r, s)`` meaning rotation r then flip s."""
    elems = [(r, s) for s in (0, 1) for r in range(n)]

    def mul(x, y):
        (r1, s1), (r2, s2) = x, y
        return ((r1 * (-1) ** s2 + r2) % n, (s1 + s2) % 2)

    return from_elements(elems, mul, label=f"D{2 * n}")


def klein_four() -> FiniteGroup:
    g = direct_product(cyclic(2), cyclic(2))
    return FiniteGroup(g.table, g.inverse, "V4")


def quaternion() -> FiniteGroup:
    # units +-1, +-i, +-j, +-k as (sign, letter)
    letters = ["1", "i", "j", "k"]
    prod = {
        ("1", x): (1, x) for x in letters
    }
    prod.update({(x, "1"): (1, x) for x in letters})
    prod.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(s, x) for x in letters for s in (1, -1)]

    def mul(a, b):
        s, z = prod[(a[1], b[1])]
        return (a[0] * b[0] * s, z)

    return from_elements(elems, mul, label="Q8")


def subgroup(G: FiniteGroup, elems: Iterable[int]):
    """Return ``(S, incl)``: the subgroup on the sorted elements and its inclusion."""
    from .hom import GroupHom

    s = sorted(set(int(x) for x in elems))
    if not s or s[0] != 0:
        raise NotSubgroup("subset does not contain the identity")
    arr = np.asarray(s, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[arr] = np.arange(arr.size)
    sub = pos[G.table[np.ix_(arr, arr)]]
    if (sub < 0).any():
        i, j = map(int, np.argwhere(sub < 0)[0])
        raise NotSubgroup(f"{s[i]}*{s[j]} leaves the subset", witness=(s[i], s[j]))
    S = FiniteGroup(_readonly(sub), _readonly(pos[G.inverse[arr]]))
    return S, GroupHom(S, G, _readonly(arr))


def coset_labels(G: FiniteGroup, N: Sequence[int], side: str = "left") -> np.ndarray:
    """Label of ``g``'s coset ``gN`` (or ``Ng``): its minimal element."""
    n_arr = np.asarray(sorted(set(int(x) for x in N)), dtype=np.int64)
    if side == "left":
        members = G.table[:, n_arr]
    else:
        members = G.table[n_arr, :].T
    return members.min(axis=1)


def quotient_by_normal(G: FiniteGroup, N: Iterable[int]):
    """``(G/N, projection)`` with cosets labelled by minimal elements, sorted."""
    from .hom import GroupHom

    N = sorted(set(int(x) for x in N))
    if not G.is_subgroup(N):
        raise NotSubgroup("N is not a subgroup", witness=tuple(N))
    if not G.is_normal(N):
        n_arr = np.asarray(N)
        bad = np.argwhere(~np.isin(G.conj_table[n_arr], n_arr))[0]
        raise NotNormal(f"conjugate of {N[bad[0]]} by {int(bad[1])} leaves N",
                        witness=(N[bad[0]], int(bad[1])))
    labels = coset_labels(G, N)
    reps = np.unique(labels)
    index = np.full(G.order, -1, dtype=np.int64)
    index[reps] = np.arange(reps.size)
    proj = index[labels]
    qt = proj[G.table[np.ix_(reps, reps)]]
    Q = make_group(qt, check=False)
    return Q, GroupHom(G, Q, _readonly(proj))


def coset_representatives(proj) -> np.ndarray:
    """Minimal preimage of each element of the codomain of a surjection."""
    img = np.asarray(proj.image)
    reps = np.full(proj.codomain.order, -1, dtype=np.int64)
    for g in range(img.size - 1, -1, -1):
        reps[img[g]] = g
    return reps
