"""Chained structures and instance-level checks of chaining behaviour.

Detectors decide whether given subsets are chained, chained by a single edge,
or chained through smaller blocks.  The ``verify_*`` functions evaluate the
hypotheses of a scenario on a concrete space, then evaluate the conclusion on a
dendrogram.  They never prove anything; they look for counterexamples.

``t``-connected means that every two points of the subset are joined by a chain
of steps ``<= t`` through the whole space.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .dendrogram import Dendrogram, Ultrametric, partition_at
from .metric import FiniteMetricSpace, Partition, connectivity_threshold, same_level, within
from .rips import RipsEngine, mask_of

KINDS = ("chained", "single_edge", "smaller_blocks")


def _jsonable(x):
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


@dataclass(frozen=True)
class ChainReport:
    kind: str
    a: float
    b: float
    witnesses: tuple
    blocks: tuple[tuple[str, ...], ...]
    literal_reading: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return _jsonable({
            "kind": self.kind,
            "a": self.a,
            "b": self.b,
            "witnesses": self.witnesses,
            "blocks": self.blocks,
            "literal_reading": self.literal_reading,
        })


@dataclass(frozen=True)
class Hypothesis:
    id: str
    holds: bool
    witness: object = None


@dataclass(frozen=True)
class ScenarioCheck:
    check: str
    hypotheses: tuple[Hypothesis, ...]
    conclusion_holds: bool
    conclusion_witness: object = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    @property
    def verdict(self) -> str:
        """``holds``, ``falsified`` (hypotheses hold, conclusion fails) or ``vacuous``."""
        if not self.hypotheses_hold:
            return "vacuous"
        return "holds" if self.conclusion_holds else "falsified"

    def hypothesis(self, id: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.id == id:
                return h
        raise KeyError(id)

    def to_json(self) -> dict:
        return _jsonable({
            "check": self.check,
            "hypotheses": [{"id": h.id, "holds": h.holds, "witness": h.witness} for h in self.hypotheses],
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion": {"holds": self.conclusion_holds, "witness": self.conclusion_witness},
            "verdict": self.verdict,
        })


# -- small helpers -----------------------------------------------------------

def _blocks(space: FiniteMetricSpace, blocks: Sequence[Iterable[str]]) -> list[list[int]]:
    out = [space.indices(b) for b in blocks]
    seen: set[int] = set()
    for b in out:
        if not b:
            raise ValueError("subsets must be non-empty")
        if seen & set(b):
            raise ValueError(f"subsets overlap: {sorted(space.names(seen & set(b)))}")
        seen |= set(b)
    return out


def _conn(space: FiniteMetricSpace, idx: Sequence[int]) -> float:
    return connectivity_threshold(space, idx)


def _gt(d: float, t: float) -> bool:
    return d > t and not same_level(d, t)


def _lt(d: float, t: float) -> bool:
    return d < t and not same_level(d, t)


def _names(space: FiniteMetricSpace, idx: Iterable[int]) -> list[str]:
    return sorted(space.names(idx))


def _cross(space: FiniteMetricSpace, left: Sequence[int], right: Sequence[int]):
    d = space.d
    return [(d[i][j], i, j) for i in left for j in right]


def _contains_at(dendrogram: Dendrogram, target: Partition) -> float | None:
    for t, p in dendrogram.levels:
        if p == target:
            return t
    return None


# -- detectors ---------------------------------------------------------------

def detect_chained(space: FiniteMetricSpace, b1: Iterable[str], b2: Iterable[str], symmetric: bool = False) -> ChainReport | None:
    """``(a, b)``-chained pair with ``b`` the connectivity threshold of ``b1``.

    ``a`` is the least cross distance; every cross pair within ``b`` is a
    witness ``(x0, y0)``.  With ``symmetric`` the threshold of ``b2`` is taken
    into account as well.
    """
    left, right = _blocks(space, [b1, b2])
    c1, c2 = _conn(space, left), _conn(space, right)
    b = max(c1, c2) if symmetric else c1
    cross = _cross(space, left, right)
    a = min(v for v, _, _ in cross)
    if not within(a, b) or not within(c2, b):
        return None
    wit = tuple((space.labels[i], space.labels[j]) for v, i, j in sorted(cross) if within(v, b))
    return ChainReport(
        "chained", a, b, wit, (tuple(_names(space, left)), tuple(_names(space, right))),
        {"symmetric": symmetric, "conn_b1": c1, "conn_b2": c2},
    )


def detect_single_edge_chained(
    space: FiniteMetricSpace, b1: Iterable[str], b2: Iterable[str], b: float | None = None
) -> ChainReport | None:
    """Pair chained by the unique cross pair at the least cross distance ``a``.

    ``b`` defaults to the least value for which both sets are ``b``-connected
    and ``a <= b``.  The literal reading asks the connectivity threshold of
    ``b1`` to equal ``a``; the chained-style reading asks it to equal ``b``.
    The report is present when either reading holds.
    """
    left, right = _blocks(space, [b1, b2])
    c1, c2 = _conn(space, left), _conn(space, right)
    cross = sorted(_cross(space, left, right))
    a = cross[0][0]
    if b is None:
        b = max(a, c1, c2)
    if not (within(a, b) and within(c1, b) and within(c2, b)):
        return None
    if len(cross) > 1 and not _gt(cross[1][0], b):
        return None
    literal = {"literal": same_level(c1, a), "chained_style": same_level(c1, b)}
    if not any(literal.values()):
        return None
    _, i, j = cross[0]
    return ChainReport(
        "single_edge", a, b, ((space.labels[i], space.labels[j]),),
        (tuple(_names(space, left)), tuple(_names(space, right))), literal,
    )


def _minimax_chain(space: FiniteMetricSpace, blocks: list[list[int]]) -> tuple[float, list[int]]:
    d = space.d
    cost = {x: 0.0 for x in blocks[0]}
    back: list[dict[int, int]] = []
    for layer in blocks[1:]:
        nxt, ptr = {}, {}
        for x in layer:
            best = min(cost, key=lambda y: (max(cost[y], d[y][x]), y))
            nxt[x], ptr[x] = max(cost[best], d[best][x]), best
        cost = nxt
        back.append(ptr)
    end = min(cost, key=lambda x: (cost[x], x))
    chain = [end]
    for ptr in reversed(back):
        chain.append(ptr[chain[-1]])
    return cost[end], chain[::-1]


def detect_smaller_block_chained(space: FiniteMetricSpace, blocks: Sequence[Iterable[str]], alpha: int) -> ChainReport | None:
    """``B_0`` and ``B_k`` chained through the smaller blocks ``B_1..B_{k-1}``.

    ``a`` is the least value admitting an ``a``-chain ``x_0..x_k`` with
    ``x_s`` in ``B_s``; ``b`` is the connectivity threshold of ``B_0``.  The
    cardinality condition compares the middle blocks with the endpoints
    ``B_0``, ``B_k``; the variant comparing with ``B_1``, ``B_k`` is reported
    in ``literal_reading``.
    """
    idx = _blocks(space, blocks)
    if len(idx) < 2:
        raise ValueError("need at least two blocks")
    a, chain = _minimax_chain(space, idx)
    b = _conn(space, idx[0])
    sizes = [len(x) for x in idx]
    middle = sizes[1:-1]
    endpoint = all(alpha * s < min(sizes[0], sizes[-1]) for s in middle)
    literal = all(alpha * s < min(sizes[1], sizes[-1]) for s in middle)
    ok = (
        within(a, b)
        and all(within(_conn(space, x), b) for x in idx)
        and all(_gt(v, b) for v, _, _ in _cross(space, idx[0], idx[-1]))
        and endpoint
    )
    if not ok:
        return None
    return ChainReport(
        "smaller_blocks", a, b, tuple(space.labels[i] for i in chain),
        tuple(tuple(_names(space, x)) for x in idx),
        {"endpoints_B0_Bk": endpoint, "literal_B1_Bk": literal},
    )


# -- chaining checks ---------------------------------------------------------

def _implication(dendrogram: Dendrogram, anchor: set[str], required: set[str]):
    """First stored level where a block contains ``anchor`` but not ``required``."""
    for t, p in dendrogram.levels:
        for block in p.blocks:
            if anchor <= block and not required <= block:
                return t, sorted(block), sorted(required - block)
    return None


def verify_strongly_chaining(
    dendrogram: Dendrogram, space: FiniteMetricSpace, b1: Iterable[str], b2: Iterable[str], symmetric: bool = False
) -> ScenarioCheck:
    b1, b2 = list(b1), list(b2)
    report = detect_chained(space, b1, b2, symmetric=symmetric)
    if report is None:
        raise ValueError("the subsets are not chained")
    ys = {y for _, y in report.witnesses}
    bad = _implication(dendrogram, set(b1), ys)
    return ScenarioCheck(
        "strongly",
        (Hypothesis("chained", True, report.to_json()),),
        bad is None,
        None if bad is None else {"t": bad[0], "block": bad[1], "missing": bad[2]},
    )


def verify_completely_chaining(
    dendrogram: Dendrogram, space: FiniteMetricSpace, blocks: Sequence[Iterable[str]], alpha: int
) -> ScenarioCheck:
    blocks = [list(b) for b in blocks]
    report = detect_smaller_block_chained(space, blocks, alpha)
    if report is None:
        raise ValueError("the blocks are not chained through smaller blocks")
    bad = _implication(dendrogram, set(blocks[0]), set(report.witnesses))
    return ScenarioCheck(
        "completely",
        (Hypothesis("smaller_blocks", True, report.to_json()),),
        bad is None,
        None if bad is None else {"t": bad[0], "block": bad[1], "missing": bad[2]},
    )


def verify_weakly_unchaining(
    dendrogram: Dendrogram,
    space: FiniteMetricSpace,
    b1: Iterable[str],
    b2: Iterable[str],
    n1: Iterable[str],
    n2: Iterable[str],
    alpha: int,
    t_high: float | None = None,
) -> ScenarioCheck:
    """Two dense nuclei chained by a single edge must show up as ``{B1, B2}``."""
    b1, b2, n1, n2 = (frozenset(s) for s in (b1, b2, n1, n2))
    _blocks(space, [b1, b2])
    space.indices(n1 | n2)
    hyp = [Hypothesis("cover", b1 | b2 == frozenset(space.labels), _names(space, space.indices(set(space.labels) - b1 - b2)))]
    rep = detect_single_edge_chained(space, b1, b2, b=t_high)
    hyp.append(Hypothesis("single_edge", rep is not None, rep.to_json() if rep else None))
    target = Partition.of([b1, b2])
    t_found = _contains_at(dendrogram, target)
    if rep is None:
        hyp.append(Hypothesis("nuclei", False, "no single-edge chaining, t_j undefined"))
        return ScenarioCheck("weakly", tuple(hyp), t_found is not None, {"t": t_found})

    t_j, t_i = rep.a, rep.b
    (x0, y0), = rep.witnesses
    t_prev = space.levels.previous(t_j)
    before = partition_at(dendrogram, t_prev)
    engine = RipsEngine(space)
    for s, (n, b) in enumerate(((n1, b1), (n2, b2)), start=1):
        hyp.append(Hypothesis(f"N{s}_nonempty_in_B{s}", bool(n) and n <= b, sorted(n - b)))
        if not n:
            continue
        hyp.append(Hypothesis(f"N{s}_in_block_before", any(n <= blk for blk in before.blocks),
                              {"t": t_prev, "partition": before.sorted_blocks()}))
        dim = engine.dim(mask_of(space.indices(n)), t_j)
        hyp.append(Hypothesis(f"N{s}_dense", dim > alpha, {"t_j": t_j, "dim": dim}))
    hyp.append(Hypothesis("witness_in_nuclei", x0 in n1 and y0 in n2, [x0, y0]))
    for s, b in enumerate((b1, b2), start=1):
        diam = space.diameter(space.indices(b))
        hyp.append(Hypothesis(f"diam_B{s}", within(diam, t_i), {"diameter": diam, "t_i": t_i}))
    refines = partition_at(dendrogram, t_i).refines(target)
    return ScenarioCheck("weakly", tuple(hyp), t_found is not None, {"t": t_found, "refines_at_t_i": refines, "t_i": t_i})


@dataclass(frozen=True)
class BridgeScenario:
    b1: tuple[str, ...]
    b2: tuple[str, ...]
    z: tuple[str, ...]
    xs: tuple[str, ...] = ()
    ys: tuple[str, ...] = ()

    @classmethod
    def of(cls, b1, b2, z, xs=(), ys=()) -> BridgeScenario:
        return cls(*(tuple(v) for v in (b1, b2, z, xs, ys)))

    def target(self) -> Partition:
        return Partition.of([set(self.b1) | set(self.xs), set(self.b2) | set(self.ys)] + [[p] for p in self.z])


def _dset(space: FiniteMetricSpace, left: Iterable[str], right: Iterable[str]) -> float:
    return space.min_cross(space.indices(left), space.indices(right))


def verify_bridge_unchaining(
    dendrogram: Dendrogram, space: FiniteMetricSpace, scenario: BridgeScenario, alpha: int, t_i: float | None = None
) -> ScenarioCheck:
    """Two big blocks bridged by a point chain must appear with the chain isolated.

    ``t_i`` defaults to ``d(z_0, z_1)`` for chains of two or more points and
    otherwise to the least distance level covering the attachment distances.
    Cardinality conditions use ``>=``; the strict variant is in the witness.
    """
    sc = scenario
    _blocks(space, [sc.b1, sc.b2, *([p] for p in sc.z), *([p] for p in sc.xs), *([p] for p in sc.ys)])
    B1, B2, z = sc.b1, sc.b2, sc.z
    dist = space.dist
    if t_i is None:
        if len(z) >= 2:
            t_i = dist(z[0], z[1])
        else:
            need = [_dset(space, [x], B1) for x in sc.xs] + [_dset(space, [y], B2) for y in sc.ys]
            need += [_dset(space, z[:1], B1), _dset(space, z[-1:], B2)]
            t_i = space.levels.ceil(max(need))
    t_prev = space.levels.previous(t_i)
    start = Partition.of([B1, B2] + [[p] for p in z + sc.xs + sc.ys])
    found = partition_at(dendrogram, t_prev)
    hyp = [Hypothesis("partition_before", found == start, {"t": t_prev, "partition": found.sorted_blocks()})]

    def check(id, pairs, ok):
        bad = [list(p) + [v] for p, v in pairs if not ok(v)]
        hyp.append(Hypothesis(id, not bad, bad[:5]))

    k = len(z) - 1
    check("a", [((z[j - 1], z[j]), dist(z[j - 1], z[j])) for j in range(1, k + 1)], lambda v: same_level(v, t_i))
    check("b", [((z[p], z[q]), dist(z[p], z[q])) for p in range(k + 1) for q in range(p + 2, k + 1)], lambda v: _gt(v, t_i))
    check("c", [((x, "B1"), _dset(space, [x], B1)) for x in sc.xs], lambda v: within(v, t_i))
    check("d", [((y, "B2"), _dset(space, [y], B2)) for y in sc.ys], lambda v: within(v, t_i))
    check("e", [((z[0], "B1"), _dset(space, z[:1], B1)), ((z[-1], "B2"), _dset(space, z[-1:], B2))], lambda v: within(v, t_i))
    check("f", [((z[j], "B1|B2"), min(_dset(space, [z[j]], B1), _dset(space, [z[j]], B2))) for j in range(1, k)],
          lambda v: _gt(v, t_i))
    g = [((x, zj), dist(x, zj)) for x in sc.xs for zj in z]
    g += [((zj, y), dist(zj, y)) for zj in z for y in sc.ys]
    g += [((x, "B2"), _dset(space, [x], B2)) for x in sc.xs]
    g += [((y, "B1"), _dset(space, [y], B1)) for y in sc.ys]
    g += [((x, y), dist(x, y)) for x in sc.xs for y in sc.ys]
    g += [(("B1", "B2"), _dset(space, B1, B2))]
    check("g", g, lambda v: _gt(v, t_i))
    n1, n2 = len(B1), len(B2)
    h = alpha < max(n1, n2) and alpha * n1 >= n2 and alpha * n2 >= n1
    strict = alpha < max(n1, n2) and alpha * n1 > n2 and alpha * n2 > n1
    hyp.append(Hypothesis("h", h, {"sizes": [n1, n2], "alpha": alpha, "strict": strict}))

    t_found = _contains_at(dendrogram, sc.target())
    return ScenarioCheck("bridge", tuple(hyp), t_found is not None, {"t": t_found, "t_i": t_i, "target": sc.target().sorted_blocks()})


def check_sl_order_dominance(u: Ultrametric, u_sl: Ultrametric) -> tuple[tuple[str, str], tuple[str, str]] | None:
    """A pair of pairs with ``u_sl(p) <= u_sl(q)`` but ``u(p) > u(q)``, if any."""
    if set(u.labels) != set(u_sl.labels):
        raise ValueError("ultrametrics are defined on different label sets")
    pairs = list(itertools.combinations(sorted(u.labels), 2))
    keyed = sorted(pairs, key=lambda p: (u_sl(*p), -u(*p), p))
    top = None
    for p in keyed:
        if top is not None and _gt(u(*top), u(*p)):
            return top, p
        if top is None or u(*p) > u(*top):
            top = p
    return None


@dataclass(frozen=True)
class ModerateScenario:
    """Chain ``B_0..B_k`` (at least two blocks) with extra blocks hanging off its ends."""

    chain: tuple[tuple[str, ...], ...]
    left: tuple[tuple[str, ...], ...]
    right: tuple[tuple[str, ...], ...]
    t_j: float
    t_i: float

    @classmethod
    def of(cls, chain, left, right, t_j, t_i) -> ModerateScenario:
        tup = lambda bs: tuple(tuple(b) for b in bs)  # noqa: E731
        return cls(tup(chain), tup(left), tup(right), float(t_j), float(t_i))

    def target(self) -> Partition:
        first = set(self.chain[0]).union(*self.left)
        last = set(self.chain[-1]).union(*self.right)
        return Partition.of([first, last] + [list(b) for b in self.chain[1:-1]])


def verify_moderate_bridge_theorem(
    space: FiniteMetricSpace, alpha: int, scenario: ModerateScenario, dendrogram: Dendrogram | None = None
) -> ScenarioCheck:
    """Block-level bridge statement for SL*(alpha) at ``t_i``.

    Besides the eight listed conditions, three further ones are checked; see
    ``chain_has_middle``, ``primed_apart`` and ``big_blocks_dominate``.
    Without them the statement has counterexamples.
    """
    from .alpha import sl_star_alpha

    sc = scenario
    chain, left, right = [list(b) for b in sc.chain], [list(b) for b in sc.left], [list(b) for b in sc.right]
    _blocks(space, chain + left + right)
    if dendrogram is None:
        dendrogram = sl_star_alpha(space, alpha)
    t_j, t_i = sc.t_j, sc.t_i
    levels = space.levels
    hyp = []
    is_level = any(same_level(t_j, v) for v in levels) and any(same_level(t_i, v) for v in levels)
    hyp.append(Hypothesis("levels", is_level and within(t_j, t_i) and _lt(t_i, 2 * t_j), {"t_j": t_j, "t_i": t_i}))
    t_prev = levels.previous(t_j) if is_level else t_j
    start = Partition.of(chain + left + right)
    found = partition_at(dendrogram, t_prev)
    hyp.append(Hypothesis("partition_before", found == start, {"t": t_prev, "partition": found.sorted_blocks()}))
    hyp.append(Hypothesis("chain_has_middle", len(chain) >= 3, len(chain)))

    def d(p, q):
        return _dset(space, p, q)

    def check(id, pairs, ok):
        bad = [[sorted(p), sorted(q), v] for p, q, v in pairs if not ok(v)]
        hyp.append(Hypothesis(id, not bad, bad[:5]))

    k = len(chain) - 1
    check("a", [(chain[l - 1], chain[l], d(chain[l - 1], chain[l])) for l in range(1, k + 1)], lambda v: same_level(v, t_j))
    check("b", [(chain[p], chain[q], d(chain[p], chain[q])) for p in range(k + 1) for q in range(p + 2, k + 1)],
          lambda v: _gt(v, t_i))
    check("c", [(b, chain[0], d(b, chain[0])) for b in left], lambda v: within(v, t_i))
    check("d", [(b, chain[k], d(b, chain[k])) for b in right], lambda v: within(v, t_i))
    check("e", [(b, chain[l], d(b, chain[l])) for b in left for l in range(1, k + 1)], lambda v: _gt(v, t_i))
    check("f", [(chain[l], b, d(chain[l], b)) for b in right for l in range(k)], lambda v: _gt(v, t_i))
    n0, nk = len(chain[0]), len(chain[k])
    mid = max((len(b) for b in chain[1:-1]), default=0)
    g = alpha * mid < max(n0, nk) and alpha * n0 >= nk and alpha * nk >= n0
    strict = alpha * mid < max(n0, nk) and alpha * n0 > nk and alpha * nk > n0
    hyp.append(Hypothesis("g", g, {"sizes": [n0, mid, nk], "alpha": alpha, "strict": strict}))
    engine = RipsEngine(space)
    dims = [(b, engine.dim(mask_of(space.indices(b)), t_i)) for b in chain[1:-1] + left + right]
    bad = [[sorted(b), v] for b, v in dims if not alpha > v]
    hyp.append(Hypothesis("h", not bad, bad[:5]))

    check("primed_apart", [(p, q, d(p, q)) for p in left for q in right], lambda v: _gt(v, t_i))
    late = [(p, q, d(p, q)) for side in (left, right) for p, q in itertools.combinations(side, 2)]
    check("primed_late", late, lambda v: not _lt(v, t_i))
    early_l = sum(len(b) for b in left if _lt(d(b, chain[0]), t_i))
    early_r = sum(len(b) for b in right if _lt(d(b, chain[k]), t_i))
    hanging = max((len(b) for b in left + right), default=0)
    dom = alpha * n0 >= nk + early_r and alpha * nk >= n0 + early_l and alpha * min(n0, nk) >= hanging
    hyp.append(Hypothesis("big_blocks_dominate", dom,
                          {"sizes": [n0, nk], "early": [early_l, early_r], "largest_hanging": hanging}))

    got = partition_at(dendrogram, t_i)
    return ScenarioCheck("moderate", tuple(hyp), got == sc.target(),
                         {"t_i": t_i, "partition": got.sorted_blocks(), "target": sc.target().sorted_blocks()})
