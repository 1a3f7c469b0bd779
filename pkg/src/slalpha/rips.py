"""Vietoris-Rips dimensions via exact maximum-clique search.

The Rips complex at threshold ``t`` is the clique complex of the graph joining
points at distance ``<= t``, so its dimension is the maximum clique size minus
one.  Vertex sets are bitmasks over point indices.
"""

from __future__ import annotations

from collections.abc import Iterable

from .metric import FiniteMetricSpace, within


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _color_order(adj: list[int], cand: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring of ``cand`` in index order.

    Returns vertices sorted by colour class and the running colour number, which
    bounds the clique size reachable from each prefix.
    """
    order: list[int] = []
    colors: list[int] = []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            uncolored &= ~(1 << v)
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique_size(adj: list[int], cand: int, base: int = 0, stop_at: int | None = None) -> int:
    """Size of the largest clique inside ``cand`` plus ``base`` already-chosen vertices.

    Branch and bound with a greedy-colouring upper bound.  With ``stop_at`` the
    search returns as soon as a clique of that total size is found.
    """
    if not cand:
        return base
    best = [base]

    def expand(size: int, p: int) -> bool:
        order, colors = _color_order(adj, p)
        for k in range(len(order) - 1, -1, -1):
            if size + colors[k] <= best[0]:
                return False
            v = order[k]
            newp = p & adj[v]
            if newp:
                if expand(size + 1, newp):
                    return True
            elif size + 1 > best[0]:
                best[0] = size + 1
            if stop_at is not None and best[0] >= stop_at:
                return True
            p &= ~(1 << v)
        return False

    expand(base, cand)
    return best[0]


class RipsEngine:
    """Threshold graphs and memoised Rips dimensions for one space.

    Block dimensions are cached per ``(block mask, level)``; the cache only ever
    stores exact values so sharing it is safe.
    """

    def __init__(self, space: FiniteMetricSpace):
        self.space = space
        self._adj: dict[float, list[int]] = {}
        self._dims: dict[tuple[int, float], int] = {}

    def adjacency(self, t: float) -> list[int]:
        adj = self._adj.get(t)
        if adj is None:
            d = self.space.d
            n = self.space.n
            adj = [0] * n
            for i in range(n):
                row = d[i]
                m = 0
                for j in range(n):
                    if j != i and within(row[j], t):
                        m |= 1 << j
                adj[i] = m
            self._adj[t] = adj
        return adj

    def dim(self, mask: int, t: float) -> int:
        if not mask:
            raise ValueError("empty subset")
        key = (mask, t)
        hit = self._dims.get(key)
        if hit is None:
            hit = max_clique_size(self.adjacency(t), mask) - 1
            self._dims[key] = hit
        return hit

    def cross_edges(self, left: int, right: int, t: float) -> list[tuple[int, int]]:
        adj = self.adjacency(t)
        return [(u, v) for u in _bits(left) for v in _bits(adj[u] & right)]

    def cross_dim(self, left: int, right: int, t: float, stop_at: int | None = None) -> int | None:
        """Largest simplex dimension meeting both sides, ``None`` without a cross edge.

        Every cross simplex contains a cross edge ``(u, v)``, so it suffices to
        search the common neighbourhood of each such edge.
        """
        if left & right:
            raise ValueError("left and right overlap")
        adj = self.adjacency(t)
        union = left | right
        best = None
        for u, v in self.cross_edges(left, right, t):
            cand = adj[u] & adj[v] & union
            target = None if stop_at is None else stop_at + 1
            size = max_clique_size(adj, cand, base=2, stop_at=target)
            if best is None or size - 1 > best:
                best = size - 1
            if stop_at is not None and best >= stop_at:
                break
        return best

    def admissible(self, left: int, right: int, t: float, alpha: int) -> bool:
        """Conditions i and ii of the block graph for one pair of blocks."""
        if alpha < 1:
            raise ValueError("alpha must be >= 1")
        if left & right:
            raise ValueError("left and right overlap")
        if not self.cross_edges_exist(left, right, t):
            return False
        need = min(self.dim(left, t), self.dim(right, t))
        # smallest cross-simplex dimension k with alpha * k >= need
        k = max(1, -(-need // alpha))
        if k == 1:
            return True
        found = self.cross_dim(left, right, t, stop_at=k)
        return found is not None and found >= k

    def cross_edges_exist(self, left: int, right: int, t: float) -> bool:
        adj = self.adjacency(t)
        return any(adj[u] & right for u in _bits(left))


def _masks(space: FiniteMetricSpace, *subsets: Iterable[str]) -> list[int]:
    out = []
    for s in subsets:
        idx = space.indices(s)
        if not idx:
            raise ValueError("subset must be non-empty")
        out.append(mask_of(idx))
    return out


def rips_dim(space: FiniteMetricSpace, subset: Iterable[str], t: float) -> int:
    """Dimension of the Rips complex of ``subset`` at threshold ``t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    (m,) = _masks(space, subset)
    return RipsEngine(space).dim(m, t)


def max_cross_simplex_dim(space: FiniteMetricSpace, left: Iterable[str], right: Iterable[str], t: float) -> int | None:
    lm, rm = _masks(space, left, right)
    if lm & rm:
        raise ValueError("left and right overlap")
    return RipsEngine(space).cross_dim(lm, rm, t)


def cross_link_admissible(
    space: FiniteMetricSpace, left: Iterable[str], right: Iterable[str], t: float, alpha: int
) -> bool:
    lm, rm = _masks(space, left, right)
    return RipsEngine(space).admissible(lm, rm, t, alpha)
