"""Perfect matchings of a torus dimer and their lattice points.

A perfect matching is a set of arrows meeting every positive and every
negative cycle exactly once. Two matchings differ by a cocycle, so pairing
the difference with integer cycles of class (1,0) and (0,1) places it in
the plane; the lexicographically least matching sits at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .dimer import NotConsistent, TorusDimer, arrow_arc, is_consistent
from .exactmath import LatticePolygon, Point, convex_hull

CORNER = "corner"
BOUNDARY = "boundary"
INTERNAL = "internal"


class UnknownMatching(KeyError):
    pass


class ThetaOnSleeper(ValueError):
    pass


@dataclass(frozen=True)
class PerfectMatching:
    arrows: frozenset[str]
    point: Point

    def key(self) -> tuple[str, ...]:
        return tuple(sorted(self.arrows))

    def weight(self, w: Mapping[str, Fraction]) -> Fraction:
        out = Fraction(1)
        for a in self.arrows:
            out *= w[a]
        return out


@dataclass
class MatchingTable:
    polygon: LatticePolygon | None
    by_point: dict[Point, list[PerfectMatching]]
    reference: PerfectMatching | None
    matchings: list[PerfectMatching] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.matchings

    def count(self) -> int:
        return len(self.matchings)

    def counts(self) -> dict[Point, int]:
        return {p: len(ms) for p, ms in sorted(self.by_point.items())}

    def find(self, arrows) -> PerfectMatching:
        key = frozenset(arrows)
        for m in self.matchings:
            if m.arrows == key:
                return m
        raise UnknownMatching(sorted(key))


def iter_matchings(d: TorusDimer):
    """Yield every perfect matching as a sorted tuple of arrow ids.

    Backtracking over black nodes, always branching on the node with the
    fewest free edges.
    """
    options = [list(c) for c in d.pos_cycles]
    neg_of = {a: d.neg_cycle_of(a) for a in d.arrows}
    used_neg = [False] * len(d.neg_cycles)
    todo = set(range(len(options)))
    chosen: list[str] = []

    def go():
        if not todo:
            yield tuple(sorted(chosen))
            return
        best, best_free = None, None
        for b in todo:
            free = [a for a in options[b] if not used_neg[neg_of[a]]]
            if best_free is None or len(free) < len(best_free):
                best, best_free = b, free
                if not free:
                    return
        todo.discard(best)
        for a in best_free:
            used_neg[neg_of[a]] = True
            chosen.append(a)
            yield from go()
            chosen.pop()
            used_neg[neg_of[a]] = False
        todo.add(best)

    if len(d.pos_cycles) != len(d.neg_cycles):
        return
    yield from go()


def enumerate_matchings(d: TorusDimer) -> MatchingTable:
    """All perfect matchings, placed relative to the least one."""
    keys = sorted(iter_matchings(d))
    if not keys:
        return MatchingTable(None, {}, None, [])
    ref_key = keys[0]
    ox, oy = d.pairing(ref_key)
    ms = []
    by_point: dict[Point, list[PerfectMatching]] = {}
    for key in keys:
        x, y = d.pairing(key)
        m = PerfectMatching(frozenset(key), (x - ox, y - oy))
        ms.append(m)
        by_point.setdefault(m.point, []).append(m)
    poly = convex_hull(by_point)
    return MatchingTable(poly, dict(sorted(by_point.items())), ms[0], ms)


def matching_polygon(d: TorusDimer) -> LatticePolygon:
    t = enumerate_matchings(d)
    if t.polygon is None:
        raise ValueError("dimer has no perfect matching")
    return t.polygon


def classify(t: MatchingTable, p: PerfectMatching) -> str:
    if p not in t.matchings:
        raise UnknownMatching(p.key())
    where = t.polygon.locate(p.point)
    if where == "vertex":
        return CORNER
    if where == "boundary":
        return BOUNDARY
    if where == "interior":
        return INTERNAL
    raise AssertionError("matching outside its own polygon")


def corner_matching(d: TorusDimer, sleepers: Mapping[int, Fraction], theta) -> frozenset[str]:
    """Arrows whose arc, between the sleeper angles of its two zigzags,
    contains the direction ``theta`` (a fraction of a turn)."""
    if not is_consistent(d):
        raise NotConsistent("corner matchings need a consistent dimer")
    theta = Fraction(theta)
    if any((theta - s).denominator == 1 for s in sleepers.values()):
        raise ThetaOnSleeper(f"{theta} is a sleeper direction")
    chosen = []
    for aid in d.arrows:
        start, length = arrow_arc(d, sleepers, aid)
        off = theta - start
        off -= off.numerator // off.denominator
        if 0 < off < length:
            chosen.append(aid)
    return frozenset(chosen)


def corner_of(t: MatchingTable, arrows: frozenset[str]) -> PerfectMatching:
    return t.find(arrows)


def boundary_counts(t: MatchingTable) -> list[tuple[tuple[Point, Point], list[int]]]:
    """Matching counts along every side of the polygon, corner to corner."""
    out = []
    for a, b in t.polygon.edges():
        pts = t.polygon.edge_points(a, b)
        out.append(((a, b), [len(t.by_point.get(p, [])) for p in pts]))
    return out


def gulotta_expected(t: MatchingTable) -> list[list[int]]:
    """Binomial counts predicted for each side of the polygon."""
    out = []
    for a, b in t.polygon.edges():
        k = len(t.polygon.edge_points(a, b)) - 1
        out.append([comb(k, j) for j in range(k + 1)])
    return out
