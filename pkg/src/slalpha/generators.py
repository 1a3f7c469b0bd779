"""Seeded random scenarios, emitted as weighted graphs.

Weights are multiples of 1/4 so that distances are exact and ties are common.
Every generator returns an :class:`Instance`; callers still evaluate the
hypotheses, since a generated instance is only likely, not certain, to satisfy
them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .chains import BridgeScenario, ModerateScenario
from .metric import FiniteMetricSpace, from_weighted_graph


@dataclass
class Instance:
    points: list[str]
    edges: list[tuple[str, str, float]]
    groups: dict[str, list[str]] = field(default_factory=dict)
    alpha: int = 1
    scenario: object = None
    t_high: float | None = None

    def space(self) -> FiniteMetricSpace:
        return from_weighted_graph(self.points, self.edges)


def _q(rng: random.Random, lo: float, hi: float) -> float:
    """Random multiple of 0.25 in ``[lo, hi]``."""
    return rng.randint(round(lo * 4), round(hi * 4)) / 4


def random_weighted_graph(rng: random.Random, n: int, extra: float = 0.4, weights=(1, 2, 3, 4, 5)) -> Instance:
    """Connected graph: random spanning tree plus each other edge with probability ``extra``."""
    pts = [f"p{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append((pts[rng.randrange(i)], pts[i], float(rng.choice(weights))))
    tree = {frozenset(e[:2]) for e in edges}
    for u, v in combinations(pts, 2):
        if frozenset((u, v)) not in tree and rng.random() < extra:
            edges.append((u, v, float(rng.choice(weights))))
    return Instance(pts, edges)


def random_disjoint_subsets(rng: random.Random, labels: list[str], count: int) -> list[list[str]]:
    """``count`` disjoint non-empty subsets (not necessarily covering)."""
    pool = list(labels)
    rng.shuffle(pool)
    cuts = sorted(rng.sample(range(1, len(pool)), count - 1)) if count > 1 else []
    end = rng.randint(cuts[-1] + 1 if cuts else 1, len(pool))
    bounds = [0] + cuts + [end]
    return [sorted(pool[a:b]) for a, b in zip(bounds, bounds[1:])]


def _clique(pts, rng, lo, hi):
    return [(u, v, _q(rng, lo, hi)) for u, v in combinations(pts, 2)]


def weakly_instance(rng: random.Random, alpha: int | None = None) -> Instance:
    """Two dense nuclei with satellites, joined by one bridge edge ``x0 - y0``.

    The first satellite on each side sits exactly ``a`` from its nucleus, so
    both sides are ``a``-connected; everything else within a side stays below
    ``t_high``, which every other cross pair exceeds.
    """
    alpha = alpha or rng.randint(1, 3)
    a = _q(rng, 2, 3)
    e_lo = 0.5
    t_high = a + e_lo - 0.25
    edges, groups = [], {}
    for side, (nu, sat) in enumerate((("a", "x"), ("b", "y")), start=1):
        m = rng.randint(alpha + 2, alpha + 3)
        nucleus = [f"{sat}0"] + [f"{nu}{i}" for i in range(1, m)]
        sats = [f"{sat}{i}" for i in range(1, rng.randint(1, 3) + 1)]
        edges += _clique(nucleus, rng, e_lo, 1)
        for n_s, s in enumerate(sats):
            lo = a if n_s == 0 else 1.5
            ws = [_q(rng, lo, t_high) for _ in nucleus]
            ws[rng.randrange(len(ws))] = a if n_s == 0 else _q(rng, lo, a)
            edges += [(s, v, w) for v, w in zip(nucleus, ws)]
        for p, q in combinations(sats, 2):
            edges.append((p, q, _q(rng, a if sats[0] in (p, q) else 1.5, t_high)))
        groups[f"N{side}"] = nucleus
        groups[f"B{side}"] = nucleus + sats
    edges.append(("x0", "y0", a))
    pts = groups["B1"] + groups["B2"]
    return Instance(pts, edges, groups, alpha, t_high=t_high)


def bridge_instance(rng: random.Random, alpha: int | None = None) -> Instance:
    """Two big blocks, a point chain ``z`` between them, satellites ``x``/``y``."""
    alpha = alpha or rng.randint(1, 3)
    T = float(rng.choice([2, 3]))
    while True:
        n1, n2 = rng.randint(2, 6), rng.randint(2, 6)
        if alpha < max(n1, n2) and alpha * n1 >= n2 and alpha * n2 >= n1:
            break
    b1 = [f"a{i}" for i in range(n1)]
    b2 = [f"b{i}" for i in range(n2)]
    k = rng.randint(0, 2)
    z = [f"z{i}" for i in range(k + 1)]
    xs = [f"x{i}" for i in range(rng.randint(0, 3))]
    ys = [f"y{i}" for i in range(rng.randint(0, 3))]
    edges = _clique(b1, rng, 0.5, 1) + _clique(b2, rng, 0.5, 1)
    if k == 0:
        e = _q(rng, T / 2 + 0.25, T)
        edges += [(rng.choice(b1), z[0], e), (z[0], rng.choice(b2), e)]
    else:
        edges += [(rng.choice(b1), z[0], T), (z[-1], rng.choice(b2), T)]
        edges += [(p, q, T) for p, q in zip(z, z[1:])]
    for sat, block in ((xs, b1), (ys, b2)):
        for s in sat:
            edges.append((s, rng.choice(block), T))
        for p, q in combinations(sat, 2):
            if rng.random() < 0.5:
                edges.append((p, q, T + rng.choice([0, 1])))
    pts = b1 + xs + z + b2 + ys
    return Instance(pts, edges, {"B1": b1, "B2": b2, "Z": z, "X": xs, "Y": ys}, alpha,
                    BridgeScenario.of(b1, b2, z, xs, ys))


def moderate_instance(rng: random.Random, alpha: int | None = None) -> Instance:
    """Block chain ``B_0..B_k`` at ``t_j = 2`` with hanging blocks at most ``t_i`` away."""
    alpha = alpha or rng.randint(1, 3)
    t_j = 2.0
    n0 = rng.randint(max(2, alpha + 1), 6)
    nk = rng.randint(max(2, -(-n0 // alpha)), min(6, alpha * n0))
    middle_sizes = [rng.randint(1, 2 if alpha >= 2 else 1) for _ in range(rng.randint(1, 2))]
    chain = [[f"a{i}" for i in range(n0)]]
    chain += [[f"m{j}_{i}" for i in range(s)] for j, s in enumerate(middle_sizes)]
    chain += [[f"b{i}" for i in range(nk)]]
    edges = []
    for block in chain:
        edges += _clique(block, rng, 0.5, 1)
    for p, q in zip(chain, chain[1:]):
        edges.append((rng.choice(p), rng.choice(q), t_j))
    t_i = float(rng.choice([2, 3]))
    hang = {}
    for side, anchor in (("L", chain[0]), ("R", chain[-1])):
        blocks = []
        for r in range(rng.randint(0, 3)):
            size = rng.randint(1, 2 if alpha >= 2 else 1)
            blk = [f"{side.lower()}{r}_{i}" for i in range(size)]
            edges += _clique(blk, rng, 0.5, 1)
            edges.append((rng.choice(blk), rng.choice(anchor), rng.choice([t_j, t_i])))
            blocks.append(blk)
        for p, q in combinations(blocks, 2):
            if rng.random() < 0.3:
                edges.append((rng.choice(p), rng.choice(q), t_i + rng.choice([0, 1])))
        hang[side] = blocks
    if t_i > t_j and not any(w == t_i for _, _, w in edges):
        t_i = t_j
    pts = [p for b in chain + hang["L"] + hang["R"] for p in b]
    scenario = ModerateScenario.of(chain, hang["L"], hang["R"], t_j, t_i)
    return Instance(pts, edges, {}, alpha, scenario)



def smaller_block_instance(rng: random.Random, alpha: int | None = None) -> Instance:
    """End blocks joined through a chain of small middle blocks, plus random extra edges."""
    alpha = alpha or rng.randint(1, 2)
    mids = [rng.randint(1, 2) for _ in range(rng.randint(1, 3))]
    big = alpha * max(mids) + 1
    sizes = [rng.randint(big, big + 2)] + mids + [rng.randint(big, big + 2)]
    blocks = [[f"c{s}_{i}" for i in range(n)] for s, n in enumerate(sizes)]
    edges = []
    for s, block in enumerate(blocks):
        inner = (1.5, 2) if s in (0, len(blocks) - 1) else (0.5, 1)
        edges += _clique(block, rng, *inner)
    for p, q in zip(blocks, blocks[1:]):
        edges.append((rng.choice(p), rng.choice(q), _q(rng, 1.25, 1.5)))
    pts = [x for b in blocks for x in b]
    for u, v in combinations(pts, 2):
        if rng.random() < 0.05:
            edges.append((u, v, _q(rng, 2.5, 5)))
    return Instance(pts, edges, {"blocks": blocks}, alpha)
