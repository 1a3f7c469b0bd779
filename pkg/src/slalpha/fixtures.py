"""Small weighted graphs reproducing the worked examples.

Each fixture is a graph whose shortest-path metric has the distances quoted
for the corresponding example.  ``groups`` names the subsets the examples talk
about (nuclei ``N1``/``N2``, clusters ``B1``/``B2``, satellites, bridges).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .metric import FiniteMetricSpace, from_weighted_graph


@dataclass(frozen=True)
class Fixture:
    name: str
    doc: str
    points: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    groups: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def space(self) -> FiniteMetricSpace:
        return from_weighted_graph(self.points, self.edges)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "points": list(self.points),
            "edges": [[u, v, w] for u, v, w in self.edges],
            "groups": {k: list(v) for k, v in self.groups.items()},
        }


N1 = ("x0", "a1", "a2", "a3")
N2 = ("y0", "b1", "b2", "b3")
XS = ("x1", "x2", "x3")
YS = ("y1", "y2", "y3")


def _clique(points, w):
    return [(u, v, w) for u, v in combinations(points, 2)]


def _mirror(edges):
    swap = dict(zip(N1 + XS, N2 + YS))
    return [(swap[u], swap[v], w) for u, v, w in edges]


def _dense_side(w_sat: float):
    side = _clique(N1, 1)
    side += [(x, v, w_sat) for x in XS for v in N1]
    side += _clique(XS, w_sat)
    return side + _mirror(side)


def _sparse_side():
    side = _clique(N1, 1) + [(x, "x0", 3) for x in XS]
    return side + _mirror(side)


def _nuclei_groups():
    return {"N1": N1, "N2": N2, "X": XS, "Y": YS, "B1": N1 + XS, "B2": N2 + YS}


_POINTS = N1 + XS + N2 + YS

CATALOG: dict[str, Fixture] = {}


def _add(f: Fixture) -> None:
    CATALOG[f.name] = f


_add(Fixture(
    "two-nuclei",
    "Two unit 4-cliques N1, N2; satellites x1..x3 (y1..y3) at 3 from every nucleus point "
    "and from each other; bridge x0-y0 of length 3.  SL(1) separates B1, B2 on [3, 5).",
    _POINTS,
    tuple(_dense_side(3) + [("x0", "y0", 3)]),
    _nuclei_groups(),
))

_add(Fixture(
    "two-nuclei-bridge",
    "two-nuclei with the bridge replaced by a point z0 at 2 from x0 and from y0.  "
    "SL*(1) keeps z0 apart from B1 and B2 until 6.",
    _POINTS[:7] + ("z0",) + _POINTS[7:],
    tuple(_dense_side(3) + [("x0", "z0", 2), ("z0", "y0", 2)]),
    {**_nuclei_groups(), "Z": ("z0",)},
))

_RING = ("x0", "x1", "x2", "x3", "y3", "y2", "y1", "y0")
_add(Fixture(
    "uniform-ring",
    "8-cycle with unit edges; no dense cores, so SL(alpha) merges everything at 1.",
    _RING,
    tuple((u, v, 1) for u, v in zip(_RING, _RING[1:] + _RING[:1])),
    {"B1": _RING[:4], "B2": _RING[4:]},
))

_add(Fixture(
    "cl-cross",
    "Unit 4-cliques, satellites hanging off x0 (y0) at 3, bridge x0-y0 of 3 and every other "
    "N1 x N2 pair at 4.  Complete linkage goes from the nuclei straight to X at 4.",
    _POINTS,
    tuple(_sparse_side() + [("x0", "y0", 3)]
          + [(u, v, 4) for u in N1 for v in N2 if (u, v) != ("x0", "y0")]),
    _nuclei_groups(),
))

_add(Fixture(
    "al-bridge",
    "Unit 4-cliques, satellites hanging off x0 (y0) at 3, bridge x0-y0 of 2.25.  The average "
    "linkage of N1, N2 and of each satellite to its nucleus is 3.75.",
    _POINTS,
    tuple(_sparse_side() + [("x0", "y0", 2.25)]),
    _nuclei_groups(),
))

_add(Fixture(
    "not-strong",
    "two-nuclei with the bridge shortened to 2.5: B1, B2 are (2.5, 3)-chained, yet average "
    "and complete linkage both produce {B1, B2} at 3.",
    _POINTS,
    tuple(_dense_side(3) + [("x0", "y0", 2.5)]),
    _nuclei_groups(),
))

_add(Fixture(
    "al-tight",
    "Unit 4-cliques, satellites at 3.5 from every nucleus point and each other, bridge x0-y0 "
    "of 3 and every other N1 x N2 pair at 3.51.  Single-edge chained with diam(B_s) = 3.5, "
    "but average linkage joins N1 and N2 (3.478125) before the satellites (3.5).",
    _POINTS,
    tuple(_dense_side(3.5) + [("x0", "y0", 3)]
          + [(u, v, 3.51) for u in N1 for v in N2 if (u, v) != ("x0", "y0")]),
    _nuclei_groups(),
))

_add(Fixture(
    "bridge-chain",
    "two-nuclei whose bridge is a two-point chain: z0 at 3 from x0, z1 at 3 from z0 and y0.  "
    "Complete and average linkage pair z0 with z1; SL*(1) leaves both apart.",
    _POINTS[:7] + ("z0", "z1") + _POINTS[7:],
    tuple(_dense_side(3) + [("x0", "z0", 3), ("z0", "z1", 3), ("z1", "y0", 3)]),
    {**_nuclei_groups(), "Z": ("z0", "z1")},
))


def get(name: str) -> Fixture:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(sorted(CATALOG))}") from None


def load(name: str) -> FiniteMetricSpace:
    return get(name).space()
