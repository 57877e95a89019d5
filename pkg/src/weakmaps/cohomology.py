"""Cohomology of finite groups in degrees 1 to 3 with finite abelian coefficients.

Cochains are normalized and stored either as arrays over ``Γ^n`` of module
elements, or as integer vectors: one block of cyclic coordinates per tuple of
non-identity elements, tuples in lexicographic order.  Cohomology is computed
over ``Z/E`` with ``E`` the exponent of the module.

Right actions are turned into the left action ``g·a = a^{g^-1}`` for the bar
complex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import NotACocycle, NotAbelian, NotASection, PostconditionFails, TypeMismatch
from .extension import Extension, make_extension
from .group import FiniteGroup, _readonly, check_size, make_group
from .hom import GroupHom, RightAction, make_action, trivial_action
from .xmod import CrossedModule
from .zlinalg import AbelianDecomposition, abelian_decomposition, image_key, kernel_mod


@dataclass(frozen=True, eq=False)
class GammaModule:
    gamma: FiniteGroup
    a: FiniteGroup
    action: RightAction

    @cached_property
    def dec(self) -> AbelianDecomposition:
        return abelian_decomposition(self.a)

    @property
    def rank(self) -> int:
        return len(self.dec.invariants)

    @cached_property
    def moduli(self) -> np.ndarray:
        return np.asarray(self.dec.invariants, dtype=np.int64)

    @cached_property
    def exponent(self) -> int:
        return int(self.moduli.max()) if self.rank else 1

    @cached_property
    def element_of(self) -> np.ndarray:
        """Module element with given mixed-radix coordinates (last fastest)."""
        out = np.zeros(self.a.order, dtype=np.int64)
        out[self._radix(self.dec.coords)] = np.arange(self.a.order)
        return _readonly(out)

    def _radix(self, coords: np.ndarray) -> np.ndarray:
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for q, d in enumerate(self.dec.invariants):
            idx = idx * d + coords[..., q] % d
        return idx

    @cached_property
    def left(self) -> np.ndarray:
        """``left[g]`` is the matrix of ``a ↦ g·a`` on cyclic coordinates."""
        r = self.rank
        G = self.gamma
        mats = np.zeros((G.order, r, r), dtype=np.int64)
        b = self.dec.basis
        for g in range(G.order):
            img = self.action.table[b, G.inverse[g]]
            mats[g] = self.dec.coords[img].T
        return _readonly(mats)

    def pullback(self, chi: GroupHom) -> "GammaModule":
        """The module over ``chi.domain`` acting through ``chi``."""
        if chi.codomain != self.gamma:
            raise TypeMismatch("χ does not land in the acting group")
        return GammaModule(chi.domain, self.a, self.action.pullback(chi))

    def __repr__(self) -> str:
        return f"<GammaModule Γ={self.gamma.order} A={self.dec.invariants}>"


def make_module(gamma: FiniteGroup, a: FiniteGroup, action) -> GammaModule:
    if not a.is_abelian:
        raise NotAbelian("coefficient group must be abelian")
    if not isinstance(action, RightAction):
        action = make_action(gamma, a, action)
    if action.group != gamma or action.space != a:
        raise TypeMismatch("action does not match the groups")
    return GammaModule(gamma, a, action)


def trivial_module(gamma: FiniteGroup, a: FiniteGroup) -> GammaModule:
    return make_module(gamma, a, trivial_action(gamma, a))


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------


def _cells(n_gamma: int, n: int) -> np.ndarray:
    """All tuples of non-identity elements, lexicographic, shape ``(m^n, n)``."""
    m = n_gamma - 1
    idx = np.arange(m ** n)
    return np.stack([(idx // m ** (n - 1 - i)) % m + 1 for i in range(n)], axis=1) \
        if n else np.zeros((1, 0), dtype=np.int64)


def cochain_to_vec(M: GammaModule, f, n: int) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (M.gamma.order,) * n:
        raise NotACocycle(f"cochain must have shape {(M.gamma.order,) * n}")
    cells = _cells(M.gamma.order, n)
    vals = f[tuple(cells.T)] if n else f.reshape(1)
    return M.dec.coords[vals].reshape(-1)


def vec_to_cochain(M: GammaModule, v, n: int) -> np.ndarray:
    r = M.rank
    g = M.gamma.order
    out = np.zeros((g,) * n, dtype=np.int64)
    if r == 0:
        return out
    cells = _cells(g, n)
    coords = np.asarray(v, dtype=np.int64).reshape(cells.shape[0], r)
    vals = M.element_of[M._radix(coords)]
    if n:
        out[tuple(cells.T)] = vals
    else:
        out = vals.reshape(())
    return out


def is_normalized(f, n: int) -> bool:
    f = np.asarray(f)
    for i in range(n):
        if np.take(f, 0, axis=i).any():
            return False
    return True


def coboundary_matrix(M: GammaModule, n: int) -> np.ndarray:
    """Integer matrix of ``δ: C^n -> C^{n+1}`` on coordinate vectors."""
    g = M.gamma.order
    check_size(max(g - 1, 1) ** (n + 1) * max(M.rank, 1), "cochain space")
    if M.rank == 0 or g == 1:
        return np.zeros(((g - 1) ** (n + 1) * M.rank, (g - 1) ** n * M.rank), dtype=np.int64)
    return _kernels.coboundary(M.gamma.table, np.ascontiguousarray(M.left), n)


def _row_moduli(M: GammaModule, n: int) -> np.ndarray:
    return np.tile(M.moduli, (M.gamma.order - 1) ** n)


def coboundary(M: GammaModule, f, n: int) -> np.ndarray:
    """``δf`` as a cochain of degree ``n + 1``."""
    v = cochain_to_vec(M, f, n)
    w = (coboundary_matrix(M, n) @ v) % _row_moduli(M, n + 1) if v.size else v
    return vec_to_cochain(M, w, n + 1)


def is_cocycle(M: GammaModule, f, n: int) -> bool:
    if not is_normalized(f, n):
        return False
    return not coboundary(M, f, n).any()


# ---------------------------------------------------------------------------
# H^n
# ---------------------------------------------------------------------------


class Cohomology:
    """``H^n(Γ, A)`` with class keys, representatives and its group structure."""

    def __init__(self, M: GammaModule, n: int):
        self.module, self.degree = M, n
        E = M.exponent
        d_n = coboundary_matrix(M, n)
        rows = _row_moduli(M, n + 1)
        cols = _row_moduli(M, n)
        ncols = cols.size
        if ncols == 0:
            self._trivial()
            return
        # cocycle lifts over Z/E, then boundaries plus the lattice of zeros
        Z = kernel_mod((E // rows)[:, None] * d_n, E) if d_n.size else np.eye(ncols, dtype=np.int64)
        if n >= 1:
            d_prev = coboundary_matrix(M, n - 1)
        else:
            d_prev = np.zeros((ncols, 0), dtype=np.int64)
        B = np.concatenate([d_prev, np.diag(cols)], axis=1)
        self._key = image_key(B, E, ncols)
        self._cols = cols
        keys = self._key.key(Z) if Z.size else np.zeros((ncols, 0), dtype=np.int64)
        gens = [(tuple(keys[:, j].tolist()), Z[:, j]) for j in range(Z.shape[1]) if keys[:, j].any()]
        self._enumerate(gens, ncols)

    def _trivial(self):
        self._key = None
        self._cols = np.zeros(0, dtype=np.int64)
        self.keys = [()]
        self.reps = [np.zeros(0, dtype=np.int64)]
        self._index = {(): 0}
        self._finish()

    def _enumerate(self, gens, ncols):
        zero = tuple([0] * ncols)
        self.keys = [zero]
        self.reps = [np.zeros(ncols, dtype=np.int64)]
        self._index = {zero: 0}
        limit = None
        queue = deque([0])
        mod = self._key.moduli
        while queue:
            i = queue.popleft()
            k = np.asarray(self.keys[i])
            for gk, gz in gens:
                nk = tuple(((k + np.asarray(gk)) % mod).tolist())
                if nk not in self._index:
                    self._index[nk] = len(self.keys)
                    self.keys.append(nk)
                    self.reps.append((self.reps[i] + gz) % self._cols)
                    queue.append(self._index[nk])
                    if limit is None:
                        from .config import get_size_limit
                        limit = get_size_limit()
                    if len(self.keys) > limit:
                        check_size(len(self.keys), "cohomology group")
        self._finish()

    def _finish(self):
        n = len(self.keys)
        if n == 1:
            self.group = make_group(np.zeros((1, 1), dtype=np.int64))
        else:
            K = np.asarray(self.keys, dtype=np.int64)
            mod = self._key.moduli
            table = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                s = (K[i][None, :] + K) % mod
                table[i] = [self._index[tuple(row)] for row in s.tolist()]
            self.group = make_group(table, check=False)
        dec = abelian_decomposition(self.group)
        self.invariants = dec.invariants
        self.basis = [self.cochain(int(b)) for b in dec.basis]
        self._dec = dec

    @property
    def order(self) -> int:
        return len(self.keys)

    def cochain(self, i: int) -> np.ndarray:
        """Representative cocycle of the ``i``-th class."""
        return vec_to_cochain(self.module, self.reps[i], self.degree)

    def class_index(self, f) -> int:
        """Index of the class of a cocycle ``f``."""
        M, n = self.module, self.degree
        if not is_cocycle(M, f, n):
            raise NotACocycle("not a normalized cocycle")
        if self._key is None:
            return 0
        k = tuple(self._key.key(cochain_to_vec(M, f, n)).tolist())
        i = self._index.get(k)
        if i is None:
            raise PostconditionFails("cocycle class missing from the enumeration")
        return i

    def is_coboundary(self, f) -> bool:
        return self.class_index(f) == 0

    def same_class(self, f, g) -> bool:
        return self.class_index(f) == self.class_index(g)

    def coordinates(self, f) -> tuple[int, ...]:
        """Coordinates of the class of ``f`` on the invariant-factor basis."""
        return tuple(int(x) for x in self._dec.coords[self.class_index(f)])

    def __repr__(self) -> str:
        return f"<H^{self.degree} {self.invariants}>"


def h_n(M: GammaModule, n: int) -> Cohomology:
    if n not in (0, 1, 2, 3):
        raise ValueError("only degrees 0 to 3 are supported")
    return Cohomology(M, n)


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    degree: int
    module: GammaModule
    representative: np.ndarray
    group_structure: tuple[int, ...]
    index: int

    @property
    def is_zero(self) -> bool:
        return self.index == 0


def cohomology_class(M: GammaModule, f, n: int, H: Cohomology | None = None) -> CohomologyClass:
    H = H or h_n(M, n)
    i = H.class_index(f)
    return CohomologyClass(n, M, _readonly(np.asarray(f, dtype=np.int64)), H.invariants, i)


# ---------------------------------------------------------------------------
# extensions with abelian kernel
# ---------------------------------------------------------------------------


def extension_from_2cocycle(M: GammaModule, z) -> Extension:
    """``A × Γ`` with ``(a, g)(b, h) = (a + g·b + z(g, h), gh)``, index ``g|A| + a``."""
    if not is_cocycle(M, z, 2):
        raise NotACocycle("z is not a normalized 2-cocycle")
    z = np.asarray(z, dtype=np.int64)
    A, G = M.a, M.gamma
    m = A.order
    idx = np.arange(G.order * m)
    g, a = idx // m, idx % m
    gb = M.action.table[a[None, :], G.inverse[g][:, None]]  # g·b, entries (x, y)
    first = A.table[a[:, None], gb]
    second = A.table[first, z[g[:, None], g[None, :]]]
    table = G.table[g[:, None], g[None, :]] * m + second
    E = make_group(table)
    return make_extension(A, E, G, np.arange(m), idx // m)


def two_cocycle_from_extension(X: Extension, M: GammaModule | None = None, s=None) -> np.ndarray:
    """``z(g, h) = s(g) s(h) s(gh)^-1`` read in the kernel."""
    if s is None:
        s = X.section
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (X.gamma.order,) or s[0] != 0:
        raise NotASection("section must send 1 to 1")
    if not np.array_equal(X.proj.image[s], np.arange(X.gamma.order)):
        raise NotASection("section is not a section of the projection")
    if not X.N.is_abelian:
        raise NotAbelian("kernel must be abelian")
    if M is not None:
        if not np.array_equal(X.conjugation[:, s], M.action.table):
            raise TypeMismatch("extension induces a different action")
    E = X.E
    t = E.table
    w = t[t[s[:, None], s[None, :]], E.inverse[s[X.gamma.table]]]
    z = X.incl_pos[w]
    if (z < 0).any():
        raise PostconditionFails("factor set left the kernel")
    return _readonly(z)


def module_of_extension(X: Extension) -> GammaModule:
    return make_module(X.gamma, X.N, X.induced_action())


# ---------------------------------------------------------------------------
# Postnikov invariant of a crossed module
# ---------------------------------------------------------------------------


def homotopy_module(G: CrossedModule) -> GammaModule:
    h = G.homotopy
    return make_module(h.pi1, h.pi2, h.action)


def postnikov_cocycle(G: CrossedModule, s=None, f=None) -> np.ndarray:
    """3-cocycle on ``π1`` with values in ``π2``.

    ``s`` is a normalized section ``π1 -> G1`` and ``f(x, y) ∈ G2`` a normalized
    lift with ``∂f(x, y) = s(x) s(y) s(xy)^-1``; both default to minimal
    choices.  The value is
    ``f(x,y) f(xy,z) f(x,yz)^-1 (f(y,z)^{s(x)^-1})^-1``.
    """
    h = G.homotopy
    P, G1, G2 = h.pi1, G.g1, G.g2
    n = P.order
    s = h.reps if s is None else np.asarray(s, dtype=np.int64)
    if s.shape != (n,) or s[0] != 0 or not np.array_equal(h.proj.image[s], np.arange(n)):
        raise NotASection("s is not a normalized section of G1 -> π1")
    t1 = G1.table
    defect = t1[t1[s[:, None], s[None, :]], G1.inverse[s[P.table]]]
    if f is None:
        pre = G.boundary.preimage_table()
        f = pre[defect]
        if (f < 0).any():
            raise PostconditionFails("section defect left Im ∂")
    f = np.asarray(f, dtype=np.int64)
    if not np.array_equal(G.boundary.image[f], defect):
        raise NotASection("f does not lift the section defect")
    if f[0].any() or f[:, 0].any():
        raise NotASection("f must be normalized")
    t2, inv2 = G2.table, G2.inverse
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    xy, yz = P.table[x, y], P.table[y, z]
    act = G.action.table[f[y, z], G1.inverse[s[x]]]
    val = t2[t2[t2[f[x, y], f[xy, z]], inv2[f[x, yz]]], inv2[act]]
    pos = np.full(G2.order, -1, dtype=np.int64)
    pos[h.incl.image] = np.arange(h.pi2.order)
    c = pos[val]
    if (c < 0).any():
        raise PostconditionFails("associativity defect left π2")
    return _readonly(c)


def random_postnikov_choices(G: CrossedModule, rng: np.random.Generator):
    """Random normalized ``(s, f)`` for ``postnikov_cocycle``."""
    h = G.homotopy
    P, G1 = h.pi1, G.g1
    n = P.order
    bd_img = np.asarray(sorted(G.boundary.image_set), dtype=np.int64)
    s = G1.table[h.reps, bd_img[rng.integers(0, bd_img.size, n)]]
    s[0] = 0
    t1 = G1.table
    defect = t1[t1[s[:, None], s[None, :]], G1.inverse[s[P.table]]]
    pre = G.boundary.preimage_table()
    kern = np.asarray(G.boundary.kernel, dtype=np.int64)
    f = G.g2.table[pre[defect], kern[rng.integers(0, kern.size, (n, n))]]
    f[0, :] = 0
    f[:, 0] = 0
    return s, f


def postnikov_class(G: CrossedModule, s=None, f=None, *, H: Cohomology | None = None) -> CohomologyClass:
    M = homotopy_module(G)
    c = postnikov_cocycle(G, s, f)
    return cohomology_class(M, c, 3, H)


def obstruction(chi: GroupHom, G: CrossedModule) -> CohomologyClass:
    """Pull back the Postnikov class along ``χ: Γ -> π1``."""
    h = G.homotopy
    if chi.codomain != h.pi1:
        raise TypeMismatch("χ must land in π1 of the crossed module")
    M = homotopy_module(G).pullback(chi)
    c = postnikov_cocycle(G)
    ch = chi.image
    pulled = c[np.ix_(ch, ch, ch)]
    return cohomology_class(M, pulled, 3)
