"""DBSCAN on a finite metric space.

Neighbourhoods are closed (``d <= eps``) and contain the point itself.  Core
points within ``eps`` of each other form clusters; a border point reachable
from cores of several clusters joins the cluster of the lexicographically least
such core and is listed in ``border_ambiguous``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .metric import FiniteMetricSpace, UnionFind, within


@dataclass(frozen=True)
class DbscanParams:
    eps: float
    min_pts: int

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise ValueError("min_pts must be a positive integer")


@dataclass(frozen=True)
class DbscanLabeling:
    clusters: tuple[frozenset[str], ...]
    noise: frozenset[str]
    border_ambiguous: frozenset[str]
    core: frozenset[str]

    def to_json(self) -> dict:
        return {
            "clusters": sorted(sorted(c) for c in self.clusters),
            "noise": sorted(self.noise),
            "border_ambiguous": sorted(self.border_ambiguous),
        }


def dbscan(space: FiniteMetricSpace, params: DbscanParams) -> DbscanLabeling:
    d = space.d
    n = space.n
    labels = space.labels
    nbhd = [[j for j in range(n) if within(d[i][j], params.eps)] for i in range(n)]
    core = [len(nbhd[i]) >= params.min_pts for i in range(n)]

    uf = UnionFind(n)
    for i in range(n):
        if core[i]:
            for j in nbhd[i]:
                if core[j]:
                    uf.union(i, j)

    members: dict[int, set[int]] = {}
    for i in range(n):
        if core[i]:
            members.setdefault(uf.find(i), set()).add(i)

    noise, ambiguous = set(), set()
    for i in range(n):
        if core[i]:
            continue
        reaching = [j for j in nbhd[i] if core[j]]
        if not reaching:
            noise.add(labels[i])
            continue
        roots = {uf.find(j) for j in reaching}
        if len(roots) > 1:
            ambiguous.add(labels[i])
        owner = min(reaching, key=lambda j: labels[j])
        members[uf.find(owner)].add(i)

    clusters = sorted((frozenset(labels[i] for i in m) for m in members.values()), key=sorted)
    return DbscanLabeling(
        tuple(clusters),
        frozenset(noise),
        frozenset(ambiguous),
        frozenset(labels[i] for i in range(n) if core[i]),
    )
