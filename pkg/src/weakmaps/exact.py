"""Exact sequences of groups and pointed sets.

A sequence is a list of terms (each of finite size, basepoint 0) and maps
between consecutive terms given as index arrays.  Exactness at a term means
that the image of the incoming map equals the fiber of the outgoing map over
the basepoint; this is the only notion that makes sense at pointed-set terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ExactnessFails


@dataclass(frozen=True)
class ExactSequence:
    names: tuple[str, ...]
    sizes: tuple[int, ...]
    maps: tuple[np.ndarray, ...]
    objects: tuple = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.sizes)

    def failures(self) -> list[int]:
        """Positions (term indices) where exactness fails; empty when exact.

        The sequence is read as ``1 -> T0 -> ... -> Tn -> 1``, so position 0
        checks injectivity of the first map and position ``n`` surjectivity of
        the last.
        """
        bad = []
        n = len(self.sizes)
        for i in range(n):
            incoming = self.maps[i - 1] if i > 0 else np.zeros(1, dtype=np.int64)
            outgoing = self.maps[i] if i < n - 1 else np.zeros(self.sizes[i], dtype=np.int64)
            image = set(np.unique(incoming).tolist())
            fiber = set(np.flatnonzero(outgoing == 0).tolist())
            if image != fiber:
                bad.append(i)
        return bad

    def check(self) -> "ExactSequence":
        for i, f in enumerate(self.maps):
            if f.shape != (self.sizes[i],) or (f.size and (f.max() >= self.sizes[i + 1] or f.min() < 0)):
                raise ExactnessFails(f"map {i} has the wrong shape", position=i)
            if f.size and f[0] != 0:
                raise ExactnessFails(f"map {i} is not pointed", position=i)
        bad = self.failures()
        if bad:
            raise ExactnessFails(
                f"sequence not exact at {self.names[bad[0]]}", position=bad[0])
        return self


def make_sequence(terms, maps) -> ExactSequence:
    """``terms`` is a list of ``(name, size, object)``; returns a checked sequence."""
    names = tuple(t[0] for t in terms)
    sizes = tuple(int(t[1]) for t in terms)
    objs = tuple(t[2] if len(t) > 2 else None for t in terms)
    arrs = tuple(np.asarray(m, dtype=np.int64) for m in maps)
    return ExactSequence(names, sizes, arrs, objs).check()
