"""Single, complete and average linkage.

``agglomerate`` follows the permutation-invariant recursive scheme: at each
step ``R`` is the least linkage between current blocks, every pair of blocks
with linkage ``<= R`` is joined, and connected components merge at once.
``single_linkage_components`` is the independent epsilon-component route to
single linkage.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

from .dendrogram import Dendrogram
from .metric import FiniteMetricSpace, Partition, UnionFind, _components, same_level, within

KINDS = ("single", "complete", "average")


def _linkage(d: list[list[float]], kind: str, left: list[int], right: list[int]) -> float:
    vals = [d[i][j] for i in left for j in right]
    if kind == "single":
        return min(vals)
    if kind == "complete":
        return max(vals)
    if kind == "average":
        return math.fsum(vals) / (len(left) * len(right))
    raise ValueError(f"unknown linkage {kind!r}; expected one of {KINDS}")


def linkage_value(kind: str, left: Iterable[str], right: Iterable[str], space: FiniteMetricSpace) -> float:
    li, ri = space.indices(left), space.indices(right)
    if not li or not ri:
        raise ValueError("blocks must be non-empty")
    if set(li) & set(ri):
        raise ValueError("blocks overlap")
    return _linkage(space.d, kind, li, ri)


def _to_partition(space: FiniteMetricSpace, blocks: list[list[int]]) -> Partition:
    return Partition.of(space.names(b) for b in blocks)


def agglomerate(space: FiniteMetricSpace, kind: str) -> Dendrogram:
    if kind not in KINDS:
        raise ValueError(f"unknown linkage {kind!r}; expected one of {KINDS}")
    d = space.d
    blocks = [[i] for i in range(space.n)]
    levels = [(0.0, _to_partition(space, blocks))]
    while len(blocks) > 1:
        values = {}
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                values[a, b] = _linkage(d, kind, blocks[a], blocks[b])
        r = min(values.values())
        uf = UnionFind(len(blocks))
        for (a, b), v in values.items():
            if within(v, r):
                uf.union(a, b)
        blocks = sorted(sorted(i for g in group for i in blocks[g]) for group in uf.groups())
        part = _to_partition(space, blocks)
        if same_level(levels[-1][0], r):
            levels[-1] = (levels[-1][0], part)
        else:
            levels.append((r, part))
    return Dendrogram.build(space.labels, levels)


def single_linkage_components(space: FiniteMetricSpace) -> Dendrogram:
    levels = []
    prev = None
    for t in space.levels:
        comps = _components(space, t)
        if comps != prev:
            levels.append((t, _to_partition(space, comps)))
            prev = comps
        if len(comps) == 1:
            break
    return Dendrogram.build(space.labels, levels)
