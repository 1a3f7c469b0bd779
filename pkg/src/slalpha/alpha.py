"""alpha-unchaining single linkage, SL(alpha), and its starred variant SL*(alpha).

Both sweep every distance level ``t_i`` of the space.  At each level the blocks
of the previous partition become vertices of a block graph; two blocks are
joined when some cross pair is within ``t_i`` (condition i) and some simplex of
the Rips complex meeting both blocks satisfies
``alpha * dim(simplex) >= min(dim F_t(B_j), dim F_t(B_k))`` (condition ii).

SL(alpha) merges the connected components of that graph.  SL*(alpha) splits
each component into big and small blocks by cardinality; connected big blocks
merge, and a connected group of small blocks joins a big group only when that
big group is the only one it touches.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .dendrogram import Dendrogram
from .metric import FiniteMetricSpace, Partition, UnionFind
from .rips import RipsEngine, mask_of


class InternalError(AssertionError):
    """An invariant of the construction was violated."""


@dataclass(frozen=True)
class BlockGraph:
    t: float
    blocks: tuple[frozenset[str], ...]
    edges: tuple[tuple[int, int], ...]
    sizes: tuple[int, ...]
    dims: tuple[int, ...]
    big: tuple[bool, ...] | None = None

    def neighbours(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in self.blocks]
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return nbrs

    def components(self) -> list[list[int]]:
        uf = UnionFind(len(self.blocks))
        for a, b in self.edges:
            uf.union(a, b)
        return uf.groups()

    def has_edge(self, left: Iterable[str], right: Iterable[str]) -> bool:
        i, j = self.blocks.index(frozenset(left)), self.blocks.index(frozenset(right))
        return (min(i, j), max(i, j)) in self.edges


@dataclass(frozen=True)
class SmallGroup:
    members: tuple[int, ...]
    adjacent_big: tuple[int, ...]

    @property
    def absorbed_into(self) -> int | None:
        return self.adjacent_big[0] if len(self.adjacent_big) == 1 else None


@dataclass(frozen=True)
class StarMergePlan:
    """Merge decision for one component; indices refer to the graph's blocks."""

    big_components: tuple[tuple[int, ...], ...]
    small_components: tuple[SmallGroup, ...] = field(default=())

    def classes(self) -> list[list[int]]:
        out = [list(c) for c in self.big_components]
        for group in self.small_components:
            target = group.absorbed_into
            if target is None:
                out.extend([m] for m in group.members)
            else:
                out[target].extend(group.members)
        return sorted(sorted(c) for c in out)


def _check_alpha(alpha: int) -> int:
    if isinstance(alpha, bool) or int(alpha) != alpha or alpha < 1:
        raise ValueError(f"alpha must be a positive integer, got {alpha!r}")
    return int(alpha)


def classify_blocks(component: Sequence[Iterable[str]], alpha: int) -> tuple[list[frozenset[str]], list[frozenset[str]]]:
    """Split blocks into big (``alpha * #B >= max #B``) and small."""
    alpha = _check_alpha(alpha)
    blocks = [frozenset(b) for b in component]
    if not blocks:
        raise ValueError("component must be non-empty")
    biggest = max(len(b) for b in blocks)
    big = [b for b in blocks if alpha * len(b) >= biggest]
    small = [b for b in blocks if alpha * len(b) < biggest]
    return big, small


def _plan(component: Sequence[int], sizes: Sequence[int], nbrs: Sequence[set[int]], alpha: int) -> StarMergePlan:
    biggest = max(sizes[b] for b in component)
    big = [b for b in component if alpha * sizes[b] >= biggest]
    small = [b for b in component if alpha * sizes[b] < biggest]

    def groups(members: list[int]) -> list[list[int]]:
        pos = {b: k for k, b in enumerate(members)}
        uf = UnionFind(len(members))
        for b in members:
            for c in nbrs[b]:
                if c in pos:
                    uf.union(pos[b], pos[c])
        return [[members[k] for k in g] for g in uf.groups()]

    big_groups = groups(big)
    owner = {b: k for k, g in enumerate(big_groups) for b in g}
    small_groups = []
    for g in groups(small):
        touching = sorted({owner[c] for b in g for c in nbrs[b] if c in owner})
        if not touching and len(component) > 1:
            raise InternalError(f"small blocks {g} touch no big block inside a connected component")
        small_groups.append(SmallGroup(tuple(g), tuple(touching)))
    return StarMergePlan(tuple(tuple(g) for g in big_groups), tuple(small_groups))


def star_merge_plan(graph: BlockGraph, component: Iterable[int], alpha: int) -> StarMergePlan:
    alpha = _check_alpha(alpha)
    component = sorted(component)
    if not component:
        raise ValueError("component must be non-empty")
    return _plan(component, graph.sizes, graph.neighbours(), alpha)


def _edges(engine: RipsEngine, masks: list[int], t: float, alpha: int) -> list[tuple[int, int]]:
    edges = []
    for a in range(len(masks)):
        for b in range(a + 1, len(masks)):
            if engine.admissible(masks[a], masks[b], t, alpha):
                edges.append((a, b))
    return edges


def block_graph(
    space: FiniteMetricSpace, prev: Partition, t: float, alpha: int, starred: bool = False
) -> BlockGraph:
    alpha = _check_alpha(alpha)
    if prev.support != frozenset(space.labels):
        raise ValueError("prev does not partition the space")
    engine = RipsEngine(space)
    blocks = [frozenset(b) for b in prev.sorted_blocks()]
    masks = [mask_of(space.indices(b)) for b in blocks]
    edges = _edges(engine, masks, t, alpha)
    sizes = tuple(len(b) for b in blocks)
    dims = tuple(engine.dim(m, t) for m in masks)
    big = None
    if starred:
        uf = UnionFind(len(blocks))
        for a, b in edges:
            uf.union(a, b)
        flags = [False] * len(blocks)
        for comp in uf.groups():
            biggest = max(sizes[b] for b in comp)
            for b in comp:
                flags[b] = alpha * sizes[b] >= biggest
        big = tuple(flags)
    return BlockGraph(t, tuple(blocks), tuple(edges), sizes, dims, big)


def _sweep(space: FiniteMetricSpace, alpha: int, starred: bool) -> Dendrogram:
    alpha = _check_alpha(alpha)
    engine = RipsEngine(space)
    blocks: list[list[int]] = [[i] for i in range(space.n)]

    def partition() -> Partition:
        return Partition.of(space.names(b) for b in blocks)

    levels = [(0.0, partition())]
    for t in space.levels.values[1:]:
        if len(blocks) == 1:
            break
        masks = [mask_of(b) for b in blocks]
        edges = _edges(engine, masks, t, alpha)
        if not edges:
            continue
        uf = UnionFind(len(blocks))
        for a, b in edges:
            uf.union(a, b)
        comps = uf.groups()
        if starred:
            sizes = [len(b) for b in blocks]
            nbrs: list[set[int]] = [set() for _ in blocks]
            for a, b in edges:
                nbrs[a].add(b)
                nbrs[b].add(a)
            classes = []
            for comp in comps:
                classes.extend(_plan(comp, sizes, nbrs, alpha).classes())
        else:
            classes = comps
        if len(classes) == len(blocks):
            continue
        blocks = sorted(sorted(i for c in cls for i in blocks[c]) for cls in classes)
        levels.append((t, partition()))
    if len(blocks) != 1:
        raise InternalError("sweep ended before reaching a single block")
    return Dendrogram.build(space.labels, levels)


def sl_alpha(space: FiniteMetricSpace, alpha: int) -> Dendrogram:
    """SL(alpha) dendrogram of ``space``."""
    return _sweep(space, alpha, starred=False)


def sl_star_alpha(space: FiniteMetricSpace, alpha: int) -> Dendrogram:
    """SL*(alpha) dendrogram of ``space``."""
    return _sweep(space, alpha, starred=True)
