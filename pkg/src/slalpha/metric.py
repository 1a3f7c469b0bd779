"""Finite metric spaces, distance levels and epsilon-components.

Points carry opaque string labels; every computation runs on dense indices
``0..n-1`` in the order the labels were given.  Distances that differ by a
relative amount below :data:`LEVEL_RTOL` are treated as the same level.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse.csgraph import csgraph_from_dense, shortest_path

LEVEL_RTOL = 1e-9


class MetricError(ValueError):
    """Invalid metric input.  ``where`` holds the offending indices or labels."""

    def __init__(self, message: str, where: tuple = ()):
        super().__init__(message)
        self.where = where


def same_level(a: float, b: float) -> bool:
    return a == b or math.isclose(a, b, rel_tol=LEVEL_RTOL, abs_tol=0.0)


def within(d: float, t: float) -> bool:
    """``d <= t`` up to the level tolerance."""
    return d <= t or same_level(d, t)


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # smaller root wins so that representatives are deterministic
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())


@dataclass(frozen=True)
class Partition:
    """A partition of a label set into non-empty disjoint blocks."""

    blocks: frozenset[frozenset[str]]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[str]]) -> Partition:
        fb = [frozenset(b) for b in blocks]
        seen: set[str] = set()
        for b in fb:
            if not b:
                raise ValueError("partition has an empty block")
            overlap = seen & b
            if overlap:
                raise ValueError(f"blocks overlap on {sorted(overlap)}")
            seen |= b
        return cls(frozenset(fb))

    @classmethod
    def singletons(cls, labels: Iterable[str]) -> Partition:
        return cls(frozenset(frozenset([x]) for x in labels))

    @property
    def support(self) -> frozenset[str]:
        return frozenset().union(*self.blocks)

    def sorted_blocks(self) -> list[list[str]]:
        return sorted(sorted(b) for b in self.blocks)

    def block_of(self, label: str) -> frozenset[str]:
        for b in self.blocks:
            if label in b:
                return b
        raise KeyError(label)

    def refines(self, other: Partition) -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        owner = {x: b for b in other.blocks for x in b}
        for b in self.blocks:
            first = next(iter(b))
            target = owner.get(first)
            if target is None or not b <= target:
                return False
        return True

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(frozenset(b) for b in self.sorted_blocks())

    def __str__(self) -> str:
        return " ".join("{" + ",".join(b) + "}" for b in self.sorted_blocks())


@dataclass(frozen=True)
class DistanceLevels:
    """Strictly increasing distinct distances ``t_0 = 0 < t_1 < ... < t_m``."""

    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def index(self, t: float) -> int:
        """Index of the level equal to ``t``; ``ValueError`` if none."""
        lo = self.floor_index(t)
        if lo >= 0 and same_level(self.values[lo], t):
            return lo
        raise ValueError(f"{t!r} is not a distance level")

    def floor_index(self, t: float) -> int:
        """Index of the greatest level ``<= t`` (tolerant), ``-1`` if none."""
        lo, hi = 0, len(self.values)
        while lo < hi:
            mid = (lo + hi) // 2
            if within(self.values[mid], t):
                lo = mid + 1
            else:
                hi = mid
        return lo - 1

    def previous(self, t: float) -> float:
        """The level immediately below the level ``t``."""
        i = self.index(t)
        if i == 0:
            raise ValueError("t_0 has no predecessor")
        return self.values[i - 1]

    def ceil(self, t: float) -> float | None:
        """Smallest level ``>= t`` (tolerant), ``None`` above the diameter."""
        for v in self.values:
            if within(t, v):
                return v
        return None


def _group_levels(values: Iterable[float]) -> tuple[float, ...]:
    levels: list[float] = []
    for v in sorted(values):
        if not levels or not same_level(levels[-1], v):
            levels.append(float(v))
    return tuple(levels)


class FiniteMetricSpace:
    """Labelled finite metric space ``(X, d)``.

    Build through :func:`from_distance_matrix` or :func:`from_weighted_graph`;
    both validate.  Instances are immutable.
    """

    def __init__(self, labels: Sequence[str], matrix):
        m = np.array(matrix, dtype=float)
        m.setflags(write=False)
        self.labels: tuple[str, ...] = tuple(str(x) for x in labels)
        self.matrix = m
        self.index: dict[str, int] = {x: i for i, x in enumerate(self.labels)}
        _check_matrix(self.labels, m)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n}, labels={list(self.labels)!r})"

    def dist(self, x: str, y: str) -> float:
        return self.d[self.index[x]][self.index[y]]

    @cached_property
    def levels(self) -> DistanceLevels:
        n = self.n
        vals = [0.0] + [float(self.matrix[i, j]) for i in range(n) for j in range(i + 1, n)]
        return DistanceLevels(_group_levels(vals))

    @cached_property
    def d(self) -> list[list[float]]:
        """Distances snapped onto their level representative (nested lists)."""
        levels = self.levels.values
        out = []
        for row in self.matrix.tolist():
            out.append([levels[self.levels.floor_index(v)] for v in row])
        return out

    def indices(self, subset: Iterable[str]) -> list[int]:
        idx = []
        for x in subset:
            if x not in self.index:
                raise KeyError(f"unknown label {x!r}")
            idx.append(self.index[x])
        return sorted(set(idx))

    def names(self, idx: Iterable[int]) -> frozenset[str]:
        return frozenset(self.labels[i] for i in idx)

    def min_cross(self, left: Iterable[int], right: Iterable[int]) -> float:
        d = self.d
        right = list(right)
        return min(d[i][j] for i in left for j in right)

    def diameter(self, subset: Iterable[int] | None = None) -> float:
        idx = list(range(self.n)) if subset is None else list(subset)
        d = self.d
        return max((d[i][j] for i in idx for j in idx), default=0.0)

    def reordered(self, order: Sequence[int], rename: dict[str, str] | None = None) -> FiniteMetricSpace:
        """Same space with points listed in ``order`` and optionally renamed."""
        rename = rename or {}
        labels = [rename.get(self.labels[i], self.labels[i]) for i in order]
        return FiniteMetricSpace(labels, self.matrix[np.ix_(order, order)])


def _check_matrix(labels: tuple[str, ...], m: np.ndarray) -> None:
    n = len(labels)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MetricError(f"distance matrix must be square, got shape {m.shape}")
    if m.shape[0] != n:
        raise MetricError(f"{n} labels for a {m.shape[0]}x{m.shape[0]} matrix")
    seen: dict[str, int] = {}
    for i, x in enumerate(labels):
        if x in seen:
            raise MetricError(f"duplicate label {x!r} at rows {seen[x]} and {i}", (seen[x], i))
        seen[x] = i
    if not np.all(np.isfinite(m)):
        i, j = map(int, np.argwhere(~np.isfinite(m))[0])
        raise MetricError(f"non-finite entry at ({i}, {j})", (i, j))
    for i in range(n):
        if m[i, i] != 0:
            raise MetricError(f"nonzero diagonal entry at ({i}, {i})", (i, i))
    for i in range(n):
        for j in range(n):
            if m[i, j] < 0:
                raise MetricError(f"negative entry {m[i, j]} at ({i}, {j})", (i, j))
            if m[i, j] != m[j, i]:
                raise MetricError(
                    f"asymmetric entries ({i}, {j})={m[i, j]} vs ({j}, {i})={m[j, i]}", (i, j)
                )
            if i != j and m[i, j] == 0:
                raise MetricError(f"distinct points {labels[i]!r}, {labels[j]!r} at distance 0", (i, j))


def from_distance_matrix(labels: Sequence[str], matrix, require_triangle: bool = False) -> FiniteMetricSpace:
    space = FiniteMetricSpace(labels, matrix)
    if require_triangle:
        m = space.matrix
        n = space.n
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if m[i, j] > m[i, k] + m[k, j] and not same_level(m[i, j], m[i, k] + m[k, j]):
                        raise MetricError(
                            f"triangle inequality fails: d({i},{j})={m[i, j]} > "
                            f"d({i},{k})+d({k},{j})={m[i, k] + m[k, j]}",
                            (i, j, k),
                        )
    return space


def from_weighted_graph(labels: Sequence[str], edges: Iterable[tuple[str, str, float]]) -> FiniteMetricSpace:
    """Shortest-path metric of a connected graph with positive edge weights."""
    labels = [str(x) for x in labels]
    index: dict[str, int] = {}
    for i, x in enumerate(labels):
        if x in index:
            raise MetricError(f"duplicate label {x!r}", (index[x], i))
        index[x] = i
    n = len(labels)
    w = np.full((n, n), np.inf)
    uf = UnionFind(n)
    for u, v, weight in edges:
        if u not in index or v not in index:
            missing = u if u not in index else v
            raise MetricError(f"edge endpoint {missing!r} is not a point", (missing,))
        weight = float(weight)
        if not math.isfinite(weight) or weight <= 0:
            raise MetricError(f"edge {u}-{v} has non-positive weight {weight}", (u, v))
        if u == v:
            raise MetricError(f"self-loop at {u!r}", (u,))
        i, j = index[u], index[v]
        w[i, j] = w[j, i] = min(w[i, j], weight)
        uf.union(i, j)
    comps = uf.groups()
    if len(comps) > 1:
        named = [sorted(labels[i] for i in c) for c in comps]
        raise MetricError(f"graph is disconnected; components: {named}", tuple(tuple(c) for c in named))
    if n == 1:
        return FiniteMetricSpace(labels, np.zeros((1, 1)))
    dist = shortest_path(csgraph_from_dense(w, null_value=np.inf), method="D", directed=False)
    return FiniteMetricSpace(labels, dist)


def distance_levels(space: FiniteMetricSpace) -> DistanceLevels:
    return space.levels


def _components(space: FiniteMetricSpace, eps: float) -> list[list[int]]:
    d = space.d
    uf = UnionFind(space.n)
    for i in range(space.n):
        for j in range(i + 1, space.n):
            if within(d[i][j], eps):
                uf.union(i, j)
    return uf.groups()


def epsilon_components(space: FiniteMetricSpace, eps: float) -> Partition:
    """Maximal subsets joined by chains whose steps are ``<= eps``."""
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    return Partition.of(space.names(c) for c in _components(space, eps))


def connectivity_threshold(space: FiniteMetricSpace, subset: Iterable[int]) -> float:
    """Least ``t`` for which ``subset`` is ``t``-connected (chains may leave the subset).

    Computed as the largest merge height of single linkage on the whole space
    needed to put ``subset`` in one block, i.e. the minimax path cost.
    """
    idx = sorted(set(subset))
    if len(idx) <= 1:
        return 0.0
    target = set(idx)
    d = space.d
    uf = UnionFind(space.n)
    pairs = sorted((d[i][j], i, j) for i in range(space.n) for j in range(i + 1, space.n))
    for w, i, j in pairs:
        uf.union(i, j)
        root = uf.find(idx[0])
        if all(uf.find(k) == root for k in target):
            return w
    raise AssertionError("space is not connected")  # pragma: no cover
