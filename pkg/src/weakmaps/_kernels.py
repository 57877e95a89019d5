"""Hot inner loops over multiplication tables.

Two interchangeable backends are provided:

* ``"numba"``: explicit loops compiled with ``numba.njit``; they exit at the
  first violation, which is what makes validation of large tables cheap.
* ``"numpy"``: vectorised array code (chunked to bound memory) used when numba
  is unavailable or when ``WEAKMAPS_DISABLE_NUMBA=1`` is set.

Both backends return identical witnesses: the lexicographically first
violating tuple, or an array of ``-1`` when there is none.  The module-level
names (``first_nonassociative`` ...) are bound to the selected backend at
import time; ``backend(name)`` returns either one explicitly.
"""

from __future__ import annotations

import types

import numpy as np

from .config import numba_requested

_CHUNK = 1 << 22

# ---------------------------------------------------------------------------
# loop implementations (numba source; also run uncompiled where noted)
# ---------------------------------------------------------------------------


def _loop_first_nonassociative(table):
    n = table.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(n):
        row_a = table[a]
        for b in range(n):
            ab = row_a[b]
            row_b = table[b]
            for c in range(n):
                if table[ab, c] != row_a[row_b[c]]:
                    out[0] = a
                    out[1] = b
                    out[2] = c
                    return out
    return out


def _loop_first_nonhom(dom, cod, image):
    n = dom.shape[0]
    out = np.full(2, -1, dtype=np.int64)
    for g in range(n):
        ig = image[g]
        for h in range(n):
            if cod[ig, image[h]] != image[dom[g, h]]:
                out[0] = g
                out[1] = h
                return out
    return out


def _loop_first_action_comp_failure(group, act):
    m = act.shape[0]
    n = group.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(m):
        for g in range(n):
            ag = act[a, g]
            for h in range(n):
                if act[ag, h] != act[a, group[g, h]]:
                    out[0] = a
                    out[1] = g
                    out[2] = h
                    return out
    return out


def _loop_first_action_auto_failure(space, act):
    m = act.shape[0]
    n = act.shape[1]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(m):
        for b in range(m):
            ab = space[a, b]
            for g in range(n):
                if act[ab, g] != space[act[a, g], act[b, g]]:
                    out[0] = a
                    out[1] = b
                    out[2] = g
                    return out
    return out


def _loop_close_partial_hom(dom, cod, img, gens, injective):
    # Extends img (-1 = unknown) along right multiplication by gens.
    # Returns False on an inconsistency or, if injective, a collision.
    n = dom.shape[0]
    used = np.zeros(cod.shape[0], dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    tail = 0
    for a in range(n):
        if img[a] >= 0:
            if injective and used[img[a]]:
                return False
            used[img[a]] = True
            queue[tail] = a
            tail += 1
    head = 0
    ngen = gens.shape[0]
    while head < tail:
        a = queue[head]
        head += 1
        ia = img[a]
        for k in range(ngen):
            g = gens[k]
            b = dom[a, g]
            v = cod[ia, img[g]]
            if img[b] < 0:
                if injective and used[v]:
                    return False
                img[b] = v
                used[v] = True
                queue[tail] = b
                tail += 1
            elif img[b] != v:
                return False
    return True


def _loop_coboundary(table, left, degree):
    # Normalized bar complex: columns index C^degree, rows C^(degree+1);
    # tuples of non-identity elements in base (n-1), components innermost.
    n = table.shape[0]
    r = left.shape[1]
    m = n - 1
    ncols_t = m ** degree
    nrows_t = m ** (degree + 1)
    mat = np.zeros((nrows_t * r, ncols_t * r), dtype=np.int64)
    digits = np.empty(degree + 1, dtype=np.int64)
    merged = np.empty(degree, dtype=np.int64)
    for row in range(nrows_t):
        x = row
        for i in range(degree, -1, -1):
            digits[i] = x % m + 1
            x //= m
        # g1 . f(g2, ..., g_{k+1})
        col = 0
        for i in range(1, degree + 1):
            col = col * m + (digits[i] - 1)
        for p in range(r):
            for q in range(r):
                mat[row * r + p, col * r + q] += left[digits[0], p, q]
        # inner faces
        for i in range(degree):
            prod = table[digits[i], digits[i + 1]]
            if prod == 0:
                continue
            sign = 1 if (i + 1) % 2 == 0 else -1
            k = 0
            for j in range(degree + 1):
                if j == i:
                    merged[k] = prod
                    k += 1
                elif j == i + 1:
                    continue
                else:
                    merged[k] = digits[j]
                    k += 1
            col = 0
            for j in range(degree):
                col = col * m + (merged[j] - 1)
            for p in range(r):
                mat[row * r + p, col * r + p] += sign
        # last face
        sign = 1 if (degree + 1) % 2 == 0 else -1
        col = 0
        for j in range(degree):
            col = col * m + (digits[j] - 1)
        for p in range(r):
            mat[row * r + p, col * r + p] += sign
    return mat


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _first_true(mask, offset=None):
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    hit = hits[0].astype(np.int64)
    if offset is not None:
        hit[0] += offset
    return hit


def _np_first_nonassociative(table):
    n = table.shape[0]
    step = max(1, _CHUNK // max(1, n * n))
    for start in range(0, n, step):
        a = np.arange(start, min(n, start + step))
        left = table[table[a]]  # (a,b,c) -> (ab)c
        right = table[a[:, None, None], table[None, :, :]]  # a(bc)
        hit = _first_true(left != right, start)
        if hit is not None:
            return hit
    return np.full(3, -1, dtype=np.int64)


def _np_first_nonhom(dom, cod, image):
    n = dom.shape[0]
    step = max(1, _CHUNK // max(1, n))
    for start in range(0, n, step):
        g = np.arange(start, min(n, start + step))
        lhs = cod[image[g][:, None], image[None, :]]
        rhs = image[dom[g]]
        hit = _first_true(lhs != rhs, start)
        if hit is not None:
            return hit
    return np.full(2, -1, dtype=np.int64)


def _np_first_action_comp_failure(group, act):
    m = act.shape[0]
    n = group.shape[0]
    step = max(1, _CHUNK // max(1, n * n))
    for start in range(0, m, step):
        a = np.arange(start, min(m, start + step))
        lhs = act[act[a][:, :, None], np.arange(n)[None, None, :]]
        rhs = act[a[:, None, None], group[None, :, :]]
        hit = _first_true(lhs != rhs, start)
        if hit is not None:
            return hit
    return np.full(3, -1, dtype=np.int64)


def _np_first_action_auto_failure(space, act):
    m = act.shape[0]
    n = act.shape[1]
    step = max(1, _CHUNK // max(1, m * n))
    for start in range(0, m, step):
        a = np.arange(start, min(m, start + step))
        lhs = act[space[a]]  # (a,b,g)
        rhs = space[act[a][:, None, :], act[None, :, :]]
        hit = _first_true(lhs != rhs, start)
        if hit is not None:
            return hit
    return np.full(3, -1, dtype=np.int64)


def _np_coboundary(table, left, degree):
    n = table.shape[0]
    r = left.shape[1]
    m = n - 1
    nrows_t = m ** (degree + 1)
    ncols_t = m ** degree
    rows = np.arange(nrows_t)
    digits = np.stack(
        [(rows // m ** (degree - i)) % m + 1 for i in range(degree + 1)], axis=1
    )
    weights = m ** np.arange(degree - 1, -1, -1) if degree > 0 else np.zeros(0, int)
    mat = np.zeros((nrows_t * r, ncols_t * r), dtype=np.int64)
    comp = np.arange(r)

    def add_identity(mask, cols, sign):
        rr = (rows[mask][:, None] * r + comp[None, :]).ravel()
        cc = (cols[mask][:, None] * r + comp[None, :]).ravel()
        np.add.at(mat, (rr, cc), sign)

    col0 = (digits[:, 1:] - 1) @ weights if degree > 0 else np.zeros(nrows_t, int)
    rr = (rows[:, None, None] * r + comp[None, :, None]).repeat(r, axis=2)
    cc = (col0[:, None, None] * r + comp[None, None, :]).repeat(r, axis=1)
    np.add.at(mat, (rr.ravel(), cc.ravel()), left[digits[:, 0]].ravel())
    for i in range(degree):
        prod = table[digits[:, i], digits[:, i + 1]]
        merged = np.concatenate(
            [digits[:, :i], prod[:, None], digits[:, i + 2 :]], axis=1
        )
        cols = (merged - 1) @ weights
        sign = 1 if (i + 1) % 2 == 0 else -1
        add_identity(prod != 0, cols, sign)
    cols = (digits[:, :degree] - 1) @ weights if degree > 0 else np.zeros(nrows_t, int)
    add_identity(np.ones(nrows_t, dtype=bool), cols, 1 if (degree + 1) % 2 == 0 else -1)
    return mat


_NUMPY = types.SimpleNamespace(
    name="numpy",
    first_nonassociative=_np_first_nonassociative,
    first_nonhom=_np_first_nonhom,
    first_action_comp_failure=_np_first_action_comp_failure,
    first_action_auto_failure=_np_first_action_auto_failure,
    # no vectorised form exists for a BFS closure; run the loop uncompiled
    close_partial_hom=_loop_close_partial_hom,
    coboundary=_np_coboundary,
)

_NUMBA = None


def _build_numba():
    from numba import njit

    opts = dict(cache=True, nogil=True)
    return types.SimpleNamespace(
        name="numba",
        first_nonassociative=njit(**opts)(_loop_first_nonassociative),
        first_nonhom=njit(**opts)(_loop_first_nonhom),
        first_action_comp_failure=njit(**opts)(_loop_first_action_comp_failure),
        first_action_auto_failure=njit(**opts)(_loop_first_action_auto_failure),
        close_partial_hom=njit(**opts)(_loop_close_partial_hom),
        coboundary=njit(**opts)(_loop_coboundary),
    )


def backend(name: str):
    """Return the kernel namespace for ``"numba"`` or ``"numpy"``."""
    global _NUMBA
    if name == "numpy":
        return _NUMPY
    if name == "numba":
        if _NUMBA is None:
            _NUMBA = _build_numba()
        return _NUMBA
    raise ValueError(f"unknown backend {name!r}")


def _select():
    if numba_requested():
        try:
            return backend("numba")
        except ImportError:
            pass
    return _NUMPY


_active = _select()
BACKEND: str = _active.name
first_nonassociative = _active.first_nonassociative
first_nonhom = _active.first_nonhom
first_action_comp_failure = _active.first_action_comp_failure
first_action_auto_failure = _active.first_action_auto_failure
close_partial_hom = _active.close_partial_hom
coboundary = _active.coboundary
