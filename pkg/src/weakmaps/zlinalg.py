"""Integer linear algebra: Smith forms over ``Z`` and ``Z/E`` and the cyclic
decomposition of finite abelian groups."""

from __future__ import annotations

from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import NotAbelian, PostconditionFails
from .group import FiniteGroup


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``g = xa + yb = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# over Z, small dense matrices of Python ints
# ---------------------------------------------------------------------------


class SmithZ(NamedTuple):
    diag: list[int]  # nonnegative, d_i | d_{i+1}
    V: list[list[int]]  # column transform
    Vinv: list[list[int]]


def smith_z(A) -> SmithZ:
    """Smith form ``U A V = D`` over ``Z``; only ``V`` and ``V^-1`` are kept."""
    M = [list(map(int, row)) for row in A]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]
    Vi = [row[:] for row in V]

    def col_op(a, b, m00, m01, m10, m11):
        # columns (a, b) <- (a, b) @ [[m00, m01], [m10, m11]], det = 1
        for R in (M, V):
            for row in R:
                x, y = row[a], row[b]
                row[a], row[b] = x * m00 + y * m10, x * m01 + y * m11
        ra, rb = Vi[a], Vi[b]
        Vi[a] = [m11 * x - m01 * y for x, y in zip(ra, rb)]
        Vi[b] = [-m10 * x + m00 * y for x, y in zip(ra, rb)]

    def swap_cols(a, b):
        for R in (M, V):
            for row in R:
                row[a], row[b] = row[b], row[a]
        Vi[a], Vi[b] = Vi[b], Vi[a]

    def row_op(a, b, m00, m01, m10, m11):
        ra, rb = M[a], M[b]
        M[a] = [m00 * x + m01 * y for x, y in zip(ra, rb)]
        M[b] = [m10 * x + m11 * y for x, y in zip(ra, rb)]

    t = 0
    while t < min(nr, nc):
        # pivot: smallest nonzero |entry|
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = M[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        M[t], M[i] = M[i], M[t]
        if j != t:
            swap_cols(t, j)
        while True:
            for j in range(t + 1, nc):
                if M[t][j]:
                    p = M[t][t]
                    if M[t][j] % p == 0:
                        col_op(t, j, 1, -(M[t][j] // p), 0, 1)
                        continue
                    g, x, y = _xgcd(p, M[t][j])
                    a, b = p // g, M[t][j] // g
                    col_op(t, j, x, -b, y, a)
            changed = False
            for i in range(t + 1, nr):
                if M[i][t]:
                    p = M[t][t]
                    if M[i][t] % p == 0:
                        row_op(t, i, 1, 0, -(M[i][t] // p), 1)
                        continue
                    changed = True
                    g, x, y = _xgcd(p, M[i][t])
                    a, b = p // g, M[i][t] // g
                    row_op(t, i, x, y, -b, a)
            if changed and any(M[t][j] for j in range(t + 1, nc)):
                continue
            p = M[t][t]
            bad = next((i for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if M[i][j] % p), None)
            if bad is None:
                break
            M[t] = [x + y for x, y in zip(M[t], M[bad])]
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
        t += 1
    diag = [abs(M[i][i]) for i in range(min(nr, nc))]
    return SmithZ(diag, V, Vi)


# ---------------------------------------------------------------------------
# over Z/E, numpy int64
# ---------------------------------------------------------------------------


class SmithMod(NamedTuple):
    diag: np.ndarray  # divisors of E, E meaning zero; length min(rows, cols)
    U: np.ndarray
    V: np.ndarray
    modulus: int


def smith_mod(A, E: int, *, want_u: bool = True, want_v: bool = True) -> SmithMod:
    """Diagonalize ``A`` over ``Z/E``: ``U A V = D`` with unimodular ``U, V``.

    Diagonal entries are divisors of ``E`` (``E`` stands for zero).  Entries
    are not forced into a divisibility chain; callers only need a diagonal.
    """
    M = np.asarray(A, dtype=np.int64) % E
    nr, nc = M.shape
    U = np.eye(nr, dtype=np.int64) if want_u else None
    V = np.eye(nc, dtype=np.int64) if want_v else None
    diag = np.full(min(nr, nc), E, dtype=np.int64)
    if E == 1:
        return SmithMod(np.ones(min(nr, nc), dtype=np.int64), U, V, E)
    for t in range(min(nr, nc)):
        while True:
            sub = M[t:, t:]
            nz = sub != 0
            if not nz.any():
                return SmithMod(diag, U, V, E)
            gs = np.gcd(sub, E)
            gs[~nz] = E + 1
            i, j = np.unravel_index(int(np.argmin(gs)), gs.shape)
            i += t
            j += t
            if i != t:
                M[[t, i]] = M[[i, t]]
                if U is not None:
                    U[[t, i]] = U[[i, t]]
            if j != t:
                M[:, [t, j]] = M[:, [j, t]]
                if V is not None:
                    V[:, [t, j]] = V[:, [j, t]]
            p = int(M[t, t])
            g = gcd(p, E)
            # normalize pivot to g via a unit: p = g * u with u a unit mod E/g
            u = _unit_factor(p // g, E // g, E)
            if u != 1:
                uinv = pow(u, -1, E)
                M[:, t] = (M[:, t] * uinv) % E
                if V is not None:
                    V[:, t] = (V[:, t] * uinv) % E
            while True:
                row = M[t, t + 1:]
                col = M[t + 1:, t]
                bj = np.flatnonzero(row % g)
                bi = np.flatnonzero(col % g)
                if bj.size:
                    j = t + 1 + int(bj[0])
                    v = int(M[t, j])
                    h, x, y = _xgcd(g, v)
                    a, b = g // h, v // h
                    ct, cj = M[:, t].copy(), M[:, j].copy()
                    M[:, t] = (x * ct + y * cj) % E
                    M[:, j] = (-b * ct + a * cj) % E
                    if V is not None:
                        ct, cj = V[:, t].copy(), V[:, j].copy()
                        V[:, t] = (x * ct + y * cj) % E
                        V[:, j] = (-b * ct + a * cj) % E
                    g = h
                elif bi.size:
                    i = t + 1 + int(bi[0])
                    v = int(M[i, t])
                    h, x, y = _xgcd(g, v)
                    a, b = g // h, v // h
                    rt, ri = M[t].copy(), M[i].copy()
                    M[t] = (x * rt + y * ri) % E
                    M[i] = (-b * rt + a * ri) % E
                    if U is not None:
                        rt, ri = U[t].copy(), U[i].copy()
                        U[t] = (x * rt + y * ri) % E
                        U[i] = (-b * rt + a * ri) % E
                    g = h
                else:
                    break
            if int(M[t, t]) != g:
                raise PostconditionFails("pivot normalization failed")
            col = M[t + 1:, t]
            row = M[t, t + 1:]
            qc = col // g
            M[t + 1:] = (M[t + 1:] - qc[:, None] * M[t][None, :]) % E
            if U is not None:
                U[t + 1:] = (U[t + 1:] - qc[:, None] * U[t][None, :]) % E
            qr = row // g
            M[:, t + 1:] = (M[:, t + 1:] - M[:, t][:, None] * qr[None, :]) % E
            if V is not None:
                V[:, t + 1:] = (V[:, t + 1:] - V[:, t][:, None] * qr[None, :]) % E
            diag[t] = g
            break
    return SmithMod(diag, U, V, E)


def _unit_factor(v: int, n: int, E: int) -> int:
    """A unit ``u`` mod ``E`` with ``u ≡ v (mod n)``; requires ``gcd(v, n) = 1``."""
    v %= n
    if n == 1:
        return 1
    u = v
    while gcd(u, E) != 1:
        u += n
    return u % E


def kernel_mod(A, E: int) -> np.ndarray:
    """Generators (columns) of ``{x : A x ≡ 0 mod E}``."""
    A = np.asarray(A, dtype=np.int64)
    nr, nc = A.shape
    if nc == 0:
        return np.zeros((0, 0), dtype=np.int64)
    s = smith_mod(A, E, want_u=False)
    gens = []
    for k in range(nc):
        g = int(s.diag[k]) if k < s.diag.size else E
        mult = 1 if g == E else E // g
        v = (s.V[:, k] * mult) % E
        if v.any():
            gens.append(v)
    if not gens:
        return np.zeros((nc, 0), dtype=np.int64)
    return np.stack(gens, axis=1)


class ImageKey(NamedTuple):
    """Canonical coordinates on ``(Z/E)^n / im(B)``."""

    U: np.ndarray
    moduli: np.ndarray  # per row; 1 means the coordinate is always zero
    modulus: int

    def key(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.int64) % self.modulus
        mod = self.moduli if z.ndim == 1 else self.moduli[:, None]
        return (self.U @ z) % self.modulus % mod


def image_key(B, E: int, n: int) -> ImageKey:
    """``key(z) = 0`` iff ``z`` lies in the column span of ``B`` mod ``E``."""
    B = np.asarray(B, dtype=np.int64).reshape(n, -1)
    if B.shape[1] == 0:
        return ImageKey(np.eye(n, dtype=np.int64), np.full(n, E, dtype=np.int64), E)
    s = smith_mod(B, E, want_v=False)
    moduli = np.full(n, E, dtype=np.int64)
    moduli[: s.diag.size] = s.diag
    return ImageKey(s.U, moduli, E)


# ---------------------------------------------------------------------------
# finite abelian groups
# ---------------------------------------------------------------------------


class AbelianDecomposition(NamedTuple):
    """``A ≅ ⊕ Z/d_i``: ``coords[a]`` are the coordinates of ``a`` and
    ``basis[i]`` is the element with coordinate vector ``e_i``."""

    invariants: tuple[int, ...]
    coords: np.ndarray  # |A| x r
    basis: np.ndarray  # r

    def element(self, v) -> int:
        v = np.asarray(v, dtype=np.int64) % np.asarray(self.invariants, dtype=np.int64)
        return int(self._lookup[tuple(v)]) if self.invariants else 0

    @property
    def _lookup(self):
        return {tuple(c): a for a, c in enumerate(self.coords.tolist())}


def _hnf_insert(basis: list[list[int]], v: list[int]) -> None:
    k = len(v)
    for i in range(k):
        if v[i] == 0:
            continue
        b = basis[i]
        g, x, y = _xgcd(b[i], v[i])
        a, c = b[i] // g, v[i] // g
        basis[i] = [x * p + y * q for p, q in zip(b, v)]
        v = [a * q - c * p for p, q in zip(b, v)]
        for j in range(i + 1, k):
            d = basis[j][j]
            if d:
                q = basis[i][j] // d
                if q:
                    basis[i] = [p - q * r for p, r in zip(basis[i], basis[j])]


def abelian_decomposition(A: FiniteGroup) -> AbelianDecomposition:
    if not A.is_abelian:
        raise NotAbelian("group is not abelian")
    n = A.order
    if n == 1:
        return AbelianDecomposition((), np.zeros((1, 0), dtype=np.int64), np.zeros(0, dtype=np.int64))
    gens = list(A.generators)
    k = len(gens)
    orders = A.orders
    # BFS coordinates in Z^k
    coord = [None] * n
    coord[0] = [0] * k
    queue = [0]
    t = A.table
    basis = [[int(orders[g]) if i == j else 0 for i in range(k)] for j, g in enumerate(gens)]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for j, g in enumerate(gens):
            y = int(t[x, g])
            step = coord[x][:]
            step[j] += 1
            if coord[y] is None:
                coord[y] = step
                queue.append(y)
            else:
                rel = [p - q for p, q in zip(step, coord[y])]
                if any(rel):
                    _hnf_insert(basis, rel)
    s = smith_z(basis)
    keep = [i for i, d in enumerate(s.diag) if d != 1]
    inv = tuple(s.diag[i] for i in keep)
    C = np.asarray(coord, dtype=object) @ np.asarray(s.V, dtype=object)
    coords = np.zeros((n, len(keep)), dtype=np.int64)
    for c, i in enumerate(keep):
        coords[:, c] = np.asarray([int(v) % s.diag[i] for v in C[:, i]], dtype=np.int64)
    bas = []
    for i in keep:
        el = 0
        for j, g in enumerate(gens):
            el = A.mul(el, A.power(g, int(s.Vinv[i][j]) % int(orders[g])))
        bas.append(el)
    dec = AbelianDecomposition(inv, coords, np.asarray(bas, dtype=np.int64))
    # sanity: the basis elements have the claimed coordinates
    for c, b in enumerate(bas):
        e = np.zeros(len(keep), dtype=np.int64)
        e[c] = 1
        if not np.array_equal(coords[b], e):
            raise PostconditionFails("cyclic decomposition is inconsistent")
    if len({tuple(r) for r in coords.tolist()}) != n:
        raise PostconditionFails("cyclic decomposition is not injective")
    return dec


def ext_invariants(m: tuple[int, ...], n: tuple[int, ...]) -> tuple[int, ...]:
    """Invariant factors of ``Ext^1(⊕Z/m_i, ⊕Z/n_j)`` via a Smith form of the
    presentation ``⊕ Z/gcd(m_i, n_j)``."""
    ds = [gcd(a, b) for a in m for b in n]
    ds = [d for d in ds if d > 1]
    if not ds:
        return ()
    s = smith_z([[d if i == j else 0 for j in range(len(ds))] for i, d in enumerate(ds)])
    return tuple(d for d in s.diag if d > 1)


def hom_invariants(m: tuple[int, ...], n: tuple[int, ...]) -> tuple[int, ...]:
    """``Hom(⊕Z/m_i, ⊕Z/n_j)`` has the same invariants as ``Ext^1``."""
    return ext_invariants(m, n)
