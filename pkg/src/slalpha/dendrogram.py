"""Dendrograms as nested partitions, their ultrametrics, and serialisation.

A :class:`Dendrogram` stores only the heights at which the partition changes;
the partition at any ``t`` is the one stored at the greatest height ``<= t``.
"""

from __future__ import annotations

import bisect
import csv
import io
import json
import math
import re
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .metric import Partition, UnionFind


@dataclass(frozen=True)
class Violation:
    condition: int
    message: str

    def __str__(self) -> str:
        return f"condition {self.condition}: {self.message}"


class DendrogramError(ValueError):
    pass


@dataclass(frozen=True)
class Dendrogram:
    labels: tuple[str, ...]
    levels: tuple[tuple[float, Partition], ...]

    @classmethod
    def build(cls, labels: Iterable[str], levels: Iterable[tuple[float, Partition]]) -> Dendrogram:
        return cls(tuple(sorted(labels)), tuple((float(t), p) for t, p in levels))

    @property
    def heights(self) -> list[float]:
        return [t for t, _ in self.levels]

    @property
    def merge_heights(self) -> list[float]:
        return [t for t, _ in self.levels[1:]]

    def partition_at(self, t: float) -> Partition:
        return partition_at(self, t)

    def relabel(self, mapping: dict[str, str]) -> Dendrogram:
        return Dendrogram.build(
            (mapping[x] for x in self.labels),
            ((t, Partition.of([mapping[x] for x in b] for b in p.blocks)) for t, p in self.levels),
        )

    def __str__(self) -> str:
        return render_text(self)


def validate(d: Dendrogram) -> list[Violation]:
    """Check the four dendrogram conditions; an empty list means valid."""
    out: list[Violation] = []
    labels = frozenset(d.labels)
    if len(labels) != len(d.labels):
        out.append(Violation(0, "duplicate labels"))
    if not d.levels:
        return out + [Violation(1, "no levels stored")]
    heights = d.heights
    if heights[0] != 0:
        out.append(Violation(1, f"first stored height is {heights[0]}, expected 0"))
    for a, b in zip(heights, heights[1:]):
        if not b > a:
            out.append(Violation(4, f"heights not strictly increasing: {a} then {b}"))
    for t in heights:
        if not math.isfinite(t) or t < 0:
            out.append(Violation(4, f"invalid height {t}"))
    for t, p in d.levels:
        seen: set[str] = set()
        for block in p.blocks:
            if not block:
                out.append(Violation(0, f"empty block at height {t}"))
            if seen & block:
                out.append(Violation(0, f"overlapping blocks at height {t}: {sorted(seen & block)}"))
            seen |= block
        if seen != labels:
            missing = sorted(labels - seen)
            extra = sorted(seen - labels)
            out.append(Violation(0, f"height {t} does not partition the labels (missing {missing}, extra {extra})"))
    first = d.levels[0][1]
    if any(len(b) != 1 for b in first.blocks):
        out.append(Violation(1, f"partition at height {heights[0]} is not all singletons: {first}"))
    last_t, last = d.levels[-1]
    if len(last) != 1:
        out.append(Violation(2, f"last stored partition (height {last_t}) is not {{X}}: {last}"))
    for (s, ps), (t, pt) in zip(d.levels, d.levels[1:]):
        for block in ps.sorted_blocks():
            owner = [b for b in pt.blocks if block[0] in b]
            if not owner or not set(block) <= owner[0]:
                out.append(Violation(3, f"block {{{','.join(block)}}} at height {s} is split at height {t}"))
    return out


def check(d: Dendrogram) -> Dendrogram:
    problems = validate(d)
    if problems:
        raise DendrogramError("; ".join(map(str, problems)))
    return d


def partition_at(d: Dendrogram, t: float) -> Partition:
    if t < 0:
        raise ValueError("t must be non-negative")
    i = bisect.bisect_right(d.heights, t) - 1
    if i < 0:
        raise ValueError(f"dendrogram has no partition at {t}")
    return d.levels[i][1]


@dataclass(frozen=True)
class Ultrametric:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __call__(self, x: str, y: str) -> float:
        i, j = self.labels.index(x), self.labels.index(y)
        return float(self.values[i, j])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ultrametric):
            return NotImplemented
        if set(self.labels) != set(other.labels):
            return False
        perm = [other.labels.index(x) for x in self.labels]
        return bool(np.array_equal(self.values, other.values[np.ix_(perm, perm)]))

    __hash__ = None  # type: ignore[assignment]

    def violations(self) -> list[tuple[str, str, str]]:
        """Triples ``(x, y, z)`` with ``u(x, y) > max(u(x, z), u(z, y))``."""
        u = self.values
        n = len(self.labels)
        bad = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    if u[i, j] > max(u[i, k], u[k, j]):
                        bad.append((self.labels[i], self.labels[j], self.labels[k]))
        return bad


def to_ultrametric(d: Dendrogram) -> Ultrametric:
    check(d)
    labels = d.labels
    pos = {x: i for i, x in enumerate(labels)}
    n = len(labels)
    u = np.full((n, n), np.inf)
    np.fill_diagonal(u, 0.0)
    for t, p in d.levels:
        for block in p.blocks:
            idx = [pos[x] for x in block]
            for a in idx:
                for b in idx:
                    if u[a, b] == np.inf:
                        u[a, b] = t
    return Ultrametric(labels, u)


def from_ultrametric(u: Ultrametric) -> Dendrogram:
    vals = u.values
    n = len(u.labels)
    if vals.shape != (n, n):
        raise DendrogramError("ultrametric matrix shape does not match labels")
    for i in range(n):
        if vals[i, i] != 0:
            raise DendrogramError(f"u({u.labels[i]},{u.labels[i]}) is not 0")
        for j in range(n):
            if vals[i, j] != vals[j, i] or (i != j and not vals[i, j] > 0):
                raise DendrogramError(f"u is not a positive symmetric function at ({u.labels[i]},{u.labels[j]})")
    bad = u.violations()
    if bad:
        x, y, z = bad[0]
        raise DendrogramError(f"ultrametric inequality fails for triple ({x}, {y}, {z})")
    heights = sorted({float(vals[i, j]) for i in range(n) for j in range(i + 1, n)})
    levels = [(0.0, Partition.singletons(u.labels))]
    for t in heights:
        uf = UnionFind(n)
        for i in range(n):
            for j in range(i + 1, n):
                if vals[i, j] <= t:
                    uf.union(i, j)
        levels.append((t, Partition.of([u.labels[i] for i in g] for g in uf.groups())))
    return Dendrogram.build(u.labels, levels)


def render_text(d: Dendrogram) -> str:
    width = max(len(_fmt(t)) for t in d.heights)
    lines = []
    for t, p in d.levels:
        blocks = "  ".join("{" + ", ".join(b) + "}" for b in p.sorted_blocks())
        lines.append(f"t = {_fmt(t):>{width}}  [{len(p)}]  {blocks}")
    return "\n".join(lines) + "\n"


def serialize(d: Dendrogram) -> dict:
    return {
        "labels": list(d.labels),
        "levels": [{"t": t, "blocks": p.sorted_blocks()} for t, p in d.levels],
    }


def deserialize(doc: dict) -> Dendrogram:
    try:
        labels = [str(x) for x in doc["labels"]]
        levels = [(float(lv["t"]), Partition.of(lv["blocks"])) for lv in doc["levels"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DendrogramError(f"malformed dendrogram document: {exc}") from exc
    return check(Dendrogram.build(labels, levels))


def dumps(d: Dendrogram) -> str:
    return json.dumps(serialize(d), indent=2) + "\n"


def loads(text: str) -> Dendrogram:
    return deserialize(json.loads(text))


def _fmt(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


_NEWICK_SPECIAL = re.compile(r"[\s(),:;\[\]']")


def _newick_label(x: str) -> str:
    if _NEWICK_SPECIAL.search(x):
        return "'" + x.replace("'", "''") + "'"
    return x


def to_newick(d: Dendrogram) -> str:
    """Newick string; a node merged at height ``h`` sits at depth ``h / 2``.

    Blocks that merge simultaneously become a multifurcation.  Children are
    ordered by their smallest label.
    """
    check(d)
    # node = (height, sorted labels, children)
    current = {b: (0.0, sorted(b), []) for b in d.levels[0][1].blocks}
    for t, p in d.levels[1:]:
        nxt = {}
        for block in p.blocks:
            parts = [b for b in current if b <= block]
            if len(parts) == 1:
                nxt[block] = current[parts[0]]
            else:
                kids = sorted((current[b] for b in parts), key=lambda node: node[1][0])
                nxt[block] = (t, sorted(block), kids)
        current = nxt
    (root,) = current.values()

    def emit(node, parent_h: float) -> str:
        h, names, kids = node
        length = _fmt((parent_h - h) / 2)
        if not kids:
            return f"{_newick_label(names[0])}:{length}"
        return "(" + ",".join(emit(k, h) for k in kids) + f"):{length}"

    return emit(root, root[0]) + ";"


def write_ultrametric_csv(u: Ultrametric) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(u.labels))
    for x, row in zip(u.labels, u.values.tolist()):
        w.writerow([x] + [_fmt(v) for v in row])
    return buf.getvalue()


def read_ultrametric_csv(text: str) -> Ultrametric:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    labels = rows[0][1:]
    if [r[0] for r in rows[1:]] != labels:
        raise DendrogramError("row labels do not match the header")
    return Ultrametric(tuple(labels), [[float(v) for v in r[1:]] for r in rows[1:]])


def same_up_to_labels(a: Dendrogram, b: Dendrogram, mapping: dict[str, str]) -> bool:
    """True when relabelling ``a`` through ``mapping`` yields ``b``."""
    return a.relabel(mapping) == b
