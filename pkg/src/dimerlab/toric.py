"""Toric side: tropical partition functions, regular subdivisions and the
crepant-resolution fan read off from theta-stable matchings.

Fans are represented by their height-one slice, a triangulation of the
matching polygon whose vertices carry the stable matching at that point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .dimer import NotConsistent, TorusDimer, is_consistent
from .exactmath import LatticePolygon, Point, convex_hull, cross, elementary_stats, rat
from .matchings import MatchingTable, PerfectMatching, enumerate_matchings


class NonGenericTheta(ValueError):
    pass


class NonTriangularSubdivision(ValueError):
    pass


class NoPerfectMatching(ValueError):
    pass


@dataclass(frozen=True)
class TropicalPoly:
    coeffs: dict[Point, Fraction]
    newton: LatticePolygon

    def __call__(self, x, y) -> Fraction:
        x, y = rat(x), rat(y)
        return max(i * x + j * y + b for (i, j), b in self.coeffs.items())


@dataclass(frozen=True)
class StabilityVector:
    """A character of the gauge group: one rational per vertex, summing to zero."""

    theta: dict[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "theta", {str(k): rat(v) for k, v in self.theta.items()})
        if sum(self.theta.values()) != 0:
            raise ValueError("theta must sum to zero")

    def is_generic(self) -> bool:
        vals = list(self.theta.values())
        n = len(vals)
        return all(sum(vals[k] for k in range(n) if mask >> k & 1) != 0 for mask in range(1, (1 << n) - 1))


@dataclass
class Triangulation:
    polygon: LatticePolygon
    cells: list[tuple[Point, ...]]
    edges: list[tuple[Point, Point]]
    labels: dict[Point, object] = field(default_factory=dict)

    def cell_set(self) -> frozenset[frozenset[Point]]:
        return frozenset(frozenset(c) for c in self.cells)

    def is_triangulation(self) -> bool:
        return all(len(c) == 3 for c in self.cells)

    def total_area(self) -> int:
        return sum(abs(cross(*c)) for c in self.cells if len(c) == 3)

    def translated(self, dx: int, dy: int) -> "Triangulation":
        mv = lambda p: (p[0] + dx, p[1] + dy)
        return Triangulation(
            self.polygon.translate(dx, dy),
            sorted(tuple(sorted(map(mv, c))) for c in self.cells),
            sorted(tuple(sorted(map(mv, e))) for e in self.edges),
            {mv(p): lab for p, lab in self.labels.items()},
        )

    def normalized(self) -> "Triangulation":
        ox, oy = self.polygon.offset()
        return self.translated(-ox, -oy)

    def same_cells(self, other: "Triangulation") -> bool:
        return self.cell_set() == other.cell_set()


# -- tropical side -----------------------------------------------------------------


def tropical_polynomial(d: TorusDimer, energy: Mapping[str, object], table: MatchingTable | None = None) -> TropicalPoly:
    """Coefficient at each lattice point: the largest total energy of a
    matching placed there."""
    t = table or enumerate_matchings(d)
    if t.empty:
        raise NoPerfectMatching("dimer has no perfect matching")
    e = {a: rat(v) for a, v in energy.items()}
    coeffs = {}
    for pt, ms in t.by_point.items():
        coeffs[pt] = max(sum((e[a] for a in m.arrows), Fraction(0)) for m in ms)
    return TropicalPoly(coeffs, t.polygon)


def dual_subdivision(tp: TropicalPoly) -> Triangulation:
    """Regular subdivision induced by lifting each point to its coefficient.

    For a max-plus polynomial the cells are the projections of the upper
    faces of the lifted point set; points below those faces are skipped.
    """
    pts = sorted(tp.coeffs)
    lift = {p: tp.coeffs[p] for p in pts}
    poly = convex_hull(pts)
    if poly.degenerate:
        return Triangulation(poly, [], [tuple(poly.vertices)] if len(poly.vertices) == 2 else [], {})
    faces: dict[tuple, frozenset[Point]] = {}
    for a, b, c in combinations(pts, 3):
        det = cross(a, b, c)
        if det == 0:
            continue
        # height z = alpha x + beta y + gamma through the three lifted points
        (x1, y1), (x2, y2), (x3, y3) = a, b, c
        z1, z2, z3 = lift[a], lift[b], lift[c]
        alpha = Fraction((z2 - z1) * (y3 - y1) - (z3 - z1) * (y2 - y1), (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))
        beta = Fraction((x2 - x1) * (z3 - z1) - (x3 - x1) * (z2 - z1), (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))
        gamma = z1 - alpha * x1 - beta * y1
        key = (alpha, beta, gamma)
        if key in faces:
            continue
        on = []
        for p in pts:
            z = alpha * p[0] + beta * p[1] + gamma
            if lift[p] > z:
                break
            if lift[p] == z:
                on.append(p)
        else:
            faces[key] = frozenset(on)
    cells = []
    edges = set()
    for on in faces.values():
        hull = convex_hull(on)
        cells.append(tuple(sorted(on)) if len(on) == 3 else tuple(hull.vertices))
        # consecutive points of the face along each side are joined by an edge
        for u, w in hull.edges():
            side = [p for p in hull.edge_points(u, w) if p in on]
            edges.update(tuple(sorted(pq)) for pq in zip(side, side[1:]))
    return Triangulation(poly, sorted(cells), sorted(edges), {})


# -- stability ---------------------------------------------------------------------


def _theta(d: TorusDimer, theta) -> list[Fraction]:
    if isinstance(theta, StabilityVector):
        theta = theta.theta
    th = {str(k): rat(v) for k, v in theta.items()}
    missing = set(d.vertices) - set(th)
    if missing:
        raise ValueError(f"theta is missing vertices {sorted(missing)}")
    vals = [th[v] for v in d.vertices]
    if sum(vals) != 0:
        raise ValueError("theta must sum to zero")
    return vals


def is_generic(d: TorusDimer, theta) -> bool:
    """No nonempty proper vertex subset has theta-sum zero."""
    return StabilityVector(dict(zip(d.vertices, _theta(d, theta)))).is_generic()


class _Stability:
    """Precomputed subset sums for one theta."""

    def __init__(self, d: TorusDimer, theta: Mapping[str, object]):
        vals = _theta(d, theta)
        self.d = d
        self.n = n = len(vals)
        self.index = {v: k for k, v in enumerate(d.vertices)}
        self.sums = [Fraction(0)] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            self.sums[mask] = self.sums[mask ^ low] + vals[low.bit_length() - 1]
        full = (1 << n) - 1
        if any(self.sums[m] == 0 for m in range(1, full)):
            raise NonGenericTheta("some proper vertex subset has theta-sum zero")
        self.arrows = [(a.id, self.index[a.tail], self.index[a.head]) for a in d.arrows.values()]

    def stable(self, zero_arrows: frozenset[str]) -> bool:
        """Is the 0/1 representation vanishing exactly on ``zero_arrows`` stable?

        A vertex set is a subrepresentation when every nonzero arrow leaving
        it ends inside it; each proper nonempty one needs positive theta.
        """
        succ = [0] * self.n
        for aid, t, h in self.arrows:
            if aid not in zero_arrows:
                succ[t] |= 1 << h
        full = (1 << self.n) - 1
        for mask in range(1, full):
            if self.sums[mask] > 0:
                continue
            m = mask
            closed = True
            while m:
                low = m & -m
                if succ[low.bit_length() - 1] & ~mask:
                    closed = False
                    break
                m ^= low
            if closed:
                return False
        return True


def stable_matchings(
    d: TorusDimer, theta: Mapping[str, object], table: MatchingTable | None = None
) -> dict[Point, PerfectMatching]:
    """The theta-stable matching at every lattice point."""
    st = _Stability(d, theta)
    t = table or enumerate_matchings(d)
    out = {}
    for pt, ms in t.by_point.items():
        good = [m for m in ms if st.stable(m.arrows)]
        if len(good) != 1:
            raise AssertionError(f"{len(good)} stable matchings at {pt}")
        out[pt] = good[0]
    return out


def resolution_fan(d: TorusDimer, theta: Mapping[str, object], table: MatchingTable | None = None) -> Triangulation:
    """Triangulation whose cells are the stable triples of matchings and
    whose edges are the stable pairs."""
    if not is_consistent(d):
        raise NotConsistent("the fan construction needs a consistent dimer")
    st = _Stability(d, theta)
    t = table or enumerate_matchings(d)
    singles = stable_matchings(d, theta, t)
    pts = sorted(singles)
    edges = []
    for p, q in combinations(pts, 2):
        if st.stable(singles[p].arrows | singles[q].arrows):
            edges.append((p, q))
    adj = {p: set() for p in pts}
    for p, q in edges:
        adj[p].add(q)
        adj[q].add(p)
    cells = []
    for p, q in edges:
        for r in sorted(adj[p] & adj[q]):
            if r > q and st.stable(singles[p].arrows | singles[q].arrows | singles[r].arrows):
                cells.append((p, q, r))
    labels = {p: singles[p].key() for p in pts}
    return Triangulation(t.polygon, sorted(cells), sorted(edges), labels)


def check_triangulation(tr: Triangulation) -> list[str]:
    """Problems with a claimed elementary triangulation; empty if none."""
    bad = []
    for c in tr.cells:
        if len(c) != 3 or abs(cross(*c)) != 1:
            bad.append(f"cell {c} is not an elementary triangle")
    area = elementary_stats(tr.polygon)[0]
    if tr.total_area() != area:
        bad.append(f"cells cover area {tr.total_area()}, polygon has {area}")
    return bad


# -- tropical versus stability ---------------------------------------------------------


def theta_from_weights(d: TorusDimer, m: Mapping[str, object]) -> dict[str, Fraction]:
    """Weight of the monomial with exponents m: head minus tail, per vertex."""
    th = {v: Fraction(0) for v in d.vertices}
    for a in d.arrows.values():
        x = rat(m[a.id])
        th[a.head] += x
        th[a.tail] -= x
    return th


@dataclass
class CrosscheckReport:
    agree: bool
    theta: dict[str, Fraction]
    tropical: Triangulation
    fan: Triangulation

    def __bool__(self):
        return self.agree


def crosscheck_tropical_fan(d: TorusDimer, m: Mapping[str, object], table: MatchingTable | None = None) -> CrosscheckReport:
    """Compare the tropical subdivision of the weighting m with the fan for
    the stability parameter that m induces, cell by cell.

    The weighting enters the partition function as a cost: a matching of
    total weight s contributes t^(-s), so the tropical energies are -m.
    """
    t = table or enumerate_matchings(d)
    theta = theta_from_weights(d, m)
    fan = resolution_fan(d, theta, t)
    trop = dual_subdivision(tropical_polynomial(d, {a: -rat(v) for a, v in m.items()}, t))
    used = {p for c in trop.cells for p in c}
    if not trop.is_triangulation() or used != set(t.by_point):
        raise NonTriangularSubdivision("tropical subdivision is not a full triangulation; m is not generic")
    return CrosscheckReport(trop.same_cells(fan), theta, trop, fan)
