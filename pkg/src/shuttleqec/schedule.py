"""Latin rectangles for the non-identity part of a standard-form matrix.

A Latin rectangle here is a proper edge colouring of the bipartite graph whose
vertices are the rows and columns of ``A`` and whose edges are its 1-entries.
Colours ("symbols") are time steps, so a minimum alphabet is a minimum-depth
gate schedule.  König's theorem guarantees that ``max degree`` colours
suffice; :func:`latin_rectangle` finds such a colouring by alternating-path
recolouring and :func:`balance` then evens out the number of gates per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf2codes import BitMatrix, CssCode, standard_form


@dataclass(frozen=True)
class LatinRectangle:
    """Symbol matrix: 0 where ``A`` is 0, otherwise a step in 1..alphabet."""

    symbols: np.ndarray
    alphabet: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.symbols.shape

    @property
    def pattern(self) -> np.ndarray:
        return (self.symbols > 0).astype(np.uint8)

    @property
    def n_gates(self) -> int:
        return int(np.count_nonzero(self.symbols))

    def occurrences(self) -> np.ndarray:
        """Number of times each symbol 1..alphabet is used."""
        return np.bincount(self.symbols[self.symbols > 0], minlength=self.alphabet + 1)[1:]

    def max_occurrence(self) -> int:
        return int(self.occurrences().max())

    def is_latin(self) -> bool:
        for line in list(self.symbols) + list(self.symbols.T):
            used = line[line > 0]
            if len(used) != len(set(used.tolist())):
                return False
        s = self.symbols
        return bool(s.min() >= 0 and s.max() <= self.alphabet)


def max_degree(a) -> int:
    a = np.asarray(a.array if isinstance(a, BitMatrix) else a)
    return int(max(a.sum(axis=1).max(), a.sum(axis=0).max()))


class _Colouring:
    """Mutable edge colouring with O(1) lookup of the edge of a given colour at a vertex."""

    def __init__(self, rows: int, cols: int, ncolours: int):
        # at_row[u, c] = column joined to row u by colour c, or -1
        self.at_row = np.full((rows, ncolours), -1, dtype=np.int64)
        self.at_col = np.full((cols, ncolours), -1, dtype=np.int64)

    def set(self, u: int, v: int, c: int) -> None:
        self.at_row[u, c] = v
        self.at_col[v, c] = u

    def clear(self, u: int, v: int, c: int) -> None:
        self.at_row[u, c] = -1
        self.at_col[v, c] = -1

    def free_at_row(self, u: int) -> int:
        return int(np.flatnonzero(self.at_row[u] < 0)[0])

    def free_at_col(self, v: int) -> int:
        return int(np.flatnonzero(self.at_col[v] < 0)[0])

    def path_from_col(self, v: int, a: int, b: int) -> list[tuple[int, int, int]]:
        """Maximal path leaving column v by colour a, then alternating b, a, ..."""
        path = []
        on_col, x, c = True, v, a
        while True:
            if on_col:
                y = int(self.at_col[x, c])
                if y < 0:
                    break
                path.append((y, x, c))
            else:
                y = int(self.at_row[x, c])
                if y < 0:
                    break
                path.append((x, y, c))
            on_col, x = not on_col, y
            c = b if c == a else a
        return path

    def path_from_row(self, u: int, a: int, b: int) -> list[tuple[int, int, int]]:
        path = []
        on_row, x, c = True, u, a
        while True:
            if on_row:
                y = int(self.at_row[x, c])
                if y < 0:
                    break
                path.append((x, y, c))
            else:
                y = int(self.at_col[x, c])
                if y < 0:
                    break
                path.append((y, x, c))
            on_row, x = not on_row, y
            c = b if c == a else a
        return path

    def swap(self, path: list[tuple[int, int, int]], a: int, b: int) -> None:
        for u, v, c in path:
            self.clear(u, v, c)
        for u, v, c in path:
            self.set(u, v, b if c == a else a)

    def symbols(self, shape: tuple[int, int]) -> np.ndarray:
        out = np.zeros(shape, dtype=np.int64)
        rows, ncol = self.at_row.shape
        for u in range(rows):
            for c in range(ncol):
                v = self.at_row[u, c]
                if v >= 0:
                    out[u, v] = c + 1
        return out

    @classmethod
    def from_symbols(cls, symbols: np.ndarray, ncolours: int) -> "_Colouring":
        col = cls(symbols.shape[0], symbols.shape[1], ncolours)
        for u, v in zip(*np.nonzero(symbols)):
            col.set(int(u), int(v), int(symbols[u, v]) - 1)
        return col


def latin_rectangle(a, seed: int | None = None) -> LatinRectangle:
    """Minimum-alphabet Latin rectangle for the 1-entries of ``a``.

    Edges are coloured in row-major order, or in a shuffled order when a seed
    is given; either way the result is reproducible.
    """
    arr = np.asarray(a.array if isinstance(a, BitMatrix) else a, dtype=np.uint8)
    if not arr.any():
        raise ValueError("latin_rectangle: matrix has no 1-entries, nothing to schedule")
    delta = max_degree(arr)
    col = _Colouring(arr.shape[0], arr.shape[1], delta)
    edges = [(int(u), int(v)) for u, v in zip(*np.nonzero(arr))]
    if seed is not None:
        order = np.random.default_rng(seed).permutation(len(edges))
        edges = [edges[i] for i in order]
    for u, v in edges:
        a_ = col.free_at_row(u)
        b_ = col.free_at_col(v)
        if col.at_col[v, a_] >= 0:
            # a_ is busy at v: flip the a_/b_ path through v so that a_ frees up.
            # The path cannot reach u since u misses a_ and the graph is bipartite.
            col.swap(col.path_from_col(v, a_, b_), a_, b_)
        col.set(u, v, a_)
    return LatinRectangle(col.symbols(arr.shape), delta)


def balance(lr: LatinRectangle) -> LatinRectangle:
    """Even out symbol usage without changing the alphabet or the gate set.

    Repeatedly takes the most used symbol ``a`` and the least used ``b`` and
    swaps colours along an a/b alternating path with one more ``a`` edge than
    ``b`` edges.  Such a path exists whenever the counts differ by 2 or more,
    so the result reaches the optimum ``ceil(E / alphabet)``.
    """
    counts = lr.occurrences().copy()
    target = math.ceil(lr.n_gates / lr.alphabet)
    if counts.max() <= target:
        return lr
    col = _Colouring.from_symbols(lr.symbols, lr.alphabet)
    rows, cols = lr.shape
    while counts.max() > target:
        a = int(np.argmax(counts))
        b = int(np.argmin(counts))
        path = None
        for u in range(rows):
            if col.at_row[u, a] >= 0 and col.at_row[u, b] < 0:
                p = col.path_from_row(u, a, b)
                if len(p) % 2 == 1:
                    path = p
                    break
        if path is None:
            for v in range(cols):
                if col.at_col[v, a] >= 0 and col.at_col[v, b] < 0:
                    p = col.path_from_col(v, a, b)
                    if len(p) % 2 == 1:
                        path = p
                        break
        if path is None:  # pragma: no cover - excluded by the parity argument above
            raise RuntimeError("no a-surplus alternating path found")
        col.swap(path, a, b)
        counts[a] -= 1
        counts[b] += 1
    return LatinRectangle(col.symbols(lr.shape), lr.alphabet)


@dataclass(frozen=True)
class LogicalNetwork:
    """Two-bit gates ``(step, row_bit, col_bit)`` on logical bit ids.

    Ancilla bits are ``0..n-1`` and verification bits ``n..n+v-1``.  Gates are
    kept sorted by ``(step, row_bit, col_bit)``.
    """

    gates: tuple[tuple[int, int, int], ...]
    n: int
    v: int = 0
    kind: str = "verification"

    def __post_init__(self):
        gates = tuple(sorted((int(t), int(r), int(c)) for t, r, c in self.gates))
        object.__setattr__(self, "gates", gates)
        if not gates:
            raise ValueError("network has no gates")
        steps = sorted({g[0] for g in gates})
        if steps != list(range(1, len(steps) + 1)):
            raise ValueError("steps must be contiguous from 1")
        seen: set[tuple[int, int]] = set()
        for t, r, c in gates:
            for b in (r, c):
                if not 0 <= b < self.n + self.v:
                    raise ValueError(f"bit {b} out of range")
                if (t, b) in seen:
                    raise ValueError(f"bit {b} used twice in step {t}")
                seen.add((t, b))
            if r == c:
                raise ValueError("gate acts on a single bit")

    @property
    def n_bits(self) -> int:
        return self.n + self.v

    @property
    def depth(self) -> int:
        return self.gates[-1][0]

    def __len__(self) -> int:
        return len(self.gates)

    def parallelism(self) -> list[int]:
        """Gate count of each step, in step order."""
        return np.bincount([g[0] for g in self.gates], minlength=self.depth + 1)[1:].tolist()

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        g = np.array(self.gates, dtype=np.int64)
        return g[:, 0].copy(), g[:, 1].copy(), g[:, 2].copy()


def schedule_to_network(
    lr: LatinRectangle,
    kind: str = "verification",
    column_permutation=None,
) -> LogicalNetwork:
    """Turn a Latin rectangle for ``A`` (from ``H ~ (I | A)``) into gates.

    ``column_permutation`` maps standard-form columns to ancilla bit ids
    (default: identity).  With ``r, m = lr.shape`` the ancilla has
    ``n = r + m`` bits.

    ``generation``: gate ``(perm[i], perm[r + j])`` at step ``symbol[i, j]``;
    the first ``r`` standard-form bits act as controls and no extra bits are
    used.

    ``verification``: one verification bit per row of the generator matrix
    ``(A^T | I)``, i.e. ``m`` bits with ids ``n..n+m-1``.  Step 1 couples
    verification bit ``j`` to ``perm[r + j]`` (the identity part, all in
    parallel); ``A[i, j] = 1`` couples it to ``perm[i]`` at step
    ``1 + symbol[i, j]``.
    """
    r, m = lr.shape
    n = r + m
    perm = list(range(n)) if column_permutation is None else [int(p) for p in column_permutation]
    if sorted(perm) != list(range(n)):
        raise ValueError("column_permutation must be a permutation of the ancilla bits")
    sym = lr.symbols
    gates = []
    if kind == "generation":
        for i, j in zip(*np.nonzero(sym)):
            gates.append((int(sym[i, j]), perm[i], perm[r + j]))
        return LogicalNetwork(tuple(gates), n=n, v=0, kind=kind)
    if kind == "verification":
        for j in range(m):
            gates.append((1, n + j, perm[r + j]))
        for i, j in zip(*np.nonzero(sym)):
            gates.append((1 + int(sym[i, j]), n + int(j), perm[i]))
        return LogicalNetwork(tuple(gates), n=n, v=m, kind=kind)
    raise ValueError(f"unknown network kind {kind!r}")


def build_network(code: CssCode, kind: str = "verification", seed: int | None = None) -> LogicalNetwork:
    """Full pipeline: standard form of H, Latin rectangle, balancing, gates."""
    sf = standard_form(code.H)
    lr = balance(latin_rectangle(sf.A, seed=seed))
    return schedule_to_network(lr, kind, sf.column_permutation)
