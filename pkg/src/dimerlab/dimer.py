"""Dimer quivers on the torus.

A dimer is stored on the quiver side: vertices, arrows with an integer
homology label ``h``, and two families of oriented face cycles. The labels
sum to zero around every face, so ``h`` summed along a closed path gives its
class in H_1 of the torus.

The bipartite graph is derived: one black node per positive cycle, one white
node per negative cycle, one edge per arrow. Zigzag paths are walked on
states ``(arrow, sign)``: from ``(a, +)`` go to ``(next arrow of a's positive
cycle, -)``, from ``(a, -)`` to ``(next arrow of a's negative cycle, +)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactmath import (
    LatticePolygon,
    Unsolvable,
    _ext_gcd,
    convex_hull,
    integer_solve,
)
from .surface import BLACK, WHITE, RibbonGraph

Vec = tuple[int, int]


class DimerError(ValueError):
    pass


class ArrowNotInOnePosOneNeg(DimerError):
    pass


class FaceHomologyNonzero(DimerError):
    pass


class EulerNonzero(DimerError):
    pass


class DisconnectedDimer(DimerError):
    pass


class BrokenCycle(DimerError):
    """Consecutive arrows of a face cycle do not compose."""


class NotConsistent(DimerError):
    pass


class SingularLattice(DimerError):
    pass


class AllZigzagsParallel(DimerError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str
    h: Vec


@dataclass(frozen=True)
class ZigzagPath:
    arrows: tuple[str, ...]
    homology: Vec


def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def _half(v: Vec) -> int:
    """0 for directions in [0, pi), 1 for [pi, 2 pi)."""
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def angle_key(v: Vec) -> "_AngleKey":
    """Sort key for exact counterclockwise order starting at direction (1,0)."""
    return _AngleKey(v)


@dataclass(frozen=True)
class _AngleKey:
    v: Vec

    def __lt__(self, other: "_AngleKey"):
        a, b = self.v, other.v
        ha, hb = _half(a), _half(b)
        if ha != hb:
            return ha < hb
        return a[0] * b[1] - a[1] * b[0] > 0


def same_direction(a: Vec, b: Vec) -> bool:
    return a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[0] + a[1] * b[1] > 0


def is_ccw_cyclic(vectors: Sequence[Vec]) -> bool:
    """True when nonzero, pairwise distinct directions run once around
    counterclockwise in the listed cyclic order."""
    k = len(vectors)
    if any(v == (0, 0) for v in vectors):
        return False
    for i in range(k):
        for j in range(i + 1, k):
            if same_direction(vectors[i], vectors[j]):
                return False
    order = sorted(range(k), key=lambda i: _AngleKey(vectors[i]))
    rank = {idx: r for r, idx in enumerate(order)}
    start = rank[0]
    return all(rank[i] == (start + i) % k for i in range(k))


@dataclass
class ConsistencyReport:
    consistent: bool
    cycle: tuple[str, int] | None = None
    zigzags: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self):
        return self.consistent


class TorusDimer:
    """Validated dimer quiver on a torus.

    ``arrows`` is a list of :class:`Arrow` (or ``(id, tail, head, h)``
    tuples); cycles are lists of arrow ids in path order.
    """

    def __init__(
        self,
        vertices: Sequence[str],
        arrows: Iterable,
        pos_cycles: Sequence[Sequence[str]],
        neg_cycles: Sequence[Sequence[str]],
        name: str = "",
    ):
        self.name = name
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                aid, t, hd, hv = a
                a = Arrow(str(aid), str(t), str(hd), (int(hv[0]), int(hv[1])))
            arrs.append(a)
        self.arrows: dict[str, Arrow] = {a.id: a for a in arrs}
        if len(self.arrows) != len(arrs):
            raise DimerError("duplicate arrow id")
        self.pos_cycles: tuple[tuple[str, ...], ...] = tuple(tuple(map(str, c)) for c in pos_cycles)
        self.neg_cycles: tuple[tuple[str, ...], ...] = tuple(tuple(map(str, c)) for c in neg_cycles)
        self._validate()

    # -- construction helpers ------------------------------------------------

    def _validate(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise DimerError("duplicate vertex id")
        for a in self.arrows.values():
            if a.tail not in vset or a.head not in vset:
                raise DimerError(f"arrow {a.id} uses an unknown vertex")
        pos_of: dict[str, tuple[int, int]] = {}
        neg_of: dict[str, tuple[int, int]] = {}
        for sign, cycles, where in (("+", self.pos_cycles, pos_of), ("-", self.neg_cycles, neg_of)):
            for ci, cyc in enumerate(cycles):
                if not cyc:
                    raise DimerError("empty face cycle")
                for aid in cyc:
                    if aid not in self.arrows:
                        raise DimerError(f"cycle {sign}{ci} names unknown arrow {aid}")
                for k, aid in enumerate(cyc):
                    if aid in where:
                        raise ArrowNotInOnePosOneNeg(f"arrow {aid} appears twice in {sign} cycles")
                    where[aid] = (ci, k)
                    nxt = self.arrows[cyc[(k + 1) % len(cyc)]]
                    if self.arrows[aid].head != nxt.tail:
                        raise BrokenCycle(f"cycle {sign}{ci}: {aid} does not compose with {nxt.id}")
                total = (0, 0)
                for aid in cyc:
                    total = _add(total, self.arrows[aid].h)
                if total != (0, 0):
                    raise FaceHomologyNonzero(f"cycle {sign}{ci} has homology {total}")
        for aid in self.arrows:
            if aid not in pos_of or aid not in neg_of:
                raise ArrowNotInOnePosOneNeg(f"arrow {aid} is not in one positive and one negative cycle")
        self._pos_of = pos_of
        self._neg_of = neg_of
        if not self._connected():
            raise DisconnectedDimer("quiver is not connected")
        chi = len(self.vertices) - len(self.arrows) + len(self.pos_cycles) + len(self.neg_cycles)
        if chi != 0:
            raise EulerNonzero(f"Euler characteristic is {chi}, not 0")
        # every vertex must have a disc neighbourhood: one rotation orbit each
        g = self.graph
        seen = {}
        for face in g.faces():
            verts = {self._half_edge_vertex(h) for h in face}
            if len(verts) != 1:
                raise DimerError("face orbit of the dimer graph mixes quiver vertices")
            v = verts.pop()
            if v in seen:
                raise EulerNonzero(f"vertex {v} is not a disc in the surface")
            seen[v] = True
        if set(seen) != vset:
            raise DimerError("isolated quiver vertex")

    def _connected(self) -> bool:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a in self.arrows.values():
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
        if not self.vertices:
            return False
        todo = [self.vertices[0]]
        seen = {self.vertices[0]}
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def _half_edge_vertex(self, h) -> str:
        aid, color = h
        a = self.arrows[aid]
        return a.head if color == WHITE else a.tail

    # -- basic navigation ------------------------------------------------------

    @property
    def arrow_ids(self) -> list[str]:
        return list(self.arrows)

    def h(self, aid: str) -> Vec:
        return self.arrows[aid].h

    def pos_cycle_of(self, aid: str) -> int:
        return self._pos_of[aid][0]

    def neg_cycle_of(self, aid: str) -> int:
        return self._neg_of[aid][0]

    def pos_next(self, aid: str) -> str:
        ci, k = self._pos_of[aid]
        c = self.pos_cycles[ci]
        return c[(k + 1) % len(c)]

    def pos_prev(self, aid: str) -> str:
        ci, k = self._pos_of[aid]
        c = self.pos_cycles[ci]
        return c[(k - 1) % len(c)]

    def neg_next(self, aid: str) -> str:
        ci, k = self._neg_of[aid]
        c = self.neg_cycles[ci]
        return c[(k + 1) % len(c)]

    def neg_prev(self, aid: str) -> str:
        ci, k = self._neg_of[aid]
        c = self.neg_cycles[ci]
        return c[(k - 1) % len(c)]

    def incoming(self, v: str) -> list[str]:
        return [a.id for a in self.arrows.values() if a.head == v]

    def outgoing(self, v: str) -> list[str]:
        return [a.id for a in self.arrows.values() if a.tail == v]

    def valency(self, v: str) -> int:
        return len(self.incoming(v)) + len(self.outgoing(v))

    @property
    def euler(self) -> int:
        return len(self.vertices) - len(self.arrows) + len(self.pos_cycles) + len(self.neg_cycles)

    # -- derived graph views ---------------------------------------------------

    @cached_property
    def graph(self) -> RibbonGraph:
        """Bipartite dimer graph: half-edge ``(arrow, colour)``.

        A black node turns through its positive cycle in path order, a white
        node through its negative cycle against path order, so the faces of
        this ribbon graph are the quiver vertices.
        """
        nu, eps, col = {}, {}, {}
        for aid in self.arrows:
            b, w = (aid, BLACK), (aid, WHITE)
            nu[b] = (self.pos_next(aid), BLACK)
            nu[w] = (self.neg_prev(aid), WHITE)
            eps[b], eps[w] = w, b
            col[b], col[w] = BLACK, WHITE
        return RibbonGraph(list(nu), nu, eps, col)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "arrows": [
                {"id": a.id, "tail": a.tail, "head": a.head, "h": list(a.h)} for a in self.arrows.values()
            ],
            "faces": {
                "positive": [list(c) for c in self.pos_cycles],
                "negative": [list(c) for c in self.neg_cycles],
            },
        }

    def __repr__(self):
        return (
            f"TorusDimer({self.name or 'unnamed'}: {len(self.vertices)} vertices, "
            f"{len(self.arrows)} arrows, {len(self.pos_cycles)}+{len(self.neg_cycles)} cycles)"
        )

    # -- zigzags ---------------------------------------------------------------

    @cached_property
    def _zigzag_data(self):
        """Zigzag orbits plus the index of the zigzag through each state."""
        order = {aid: k for k, aid in enumerate(self.arrows)}
        states = sorted(((aid, s) for aid in self.arrows for s in (1, -1)), key=lambda st: (order[st[0]], -st[1]))
        which: dict[tuple[str, int], int] = {}
        paths: list[ZigzagPath] = []
        for st in states:
            if st in which:
                continue
            idx = len(paths)
            arrows = []
            cur = st
            while cur not in which:
                which[cur] = idx
                arrows.append(cur[0])
                aid, s = cur
                cur = (self.pos_next(aid), -1) if s == 1 else (self.neg_next(aid), 1)
            hom = (0, 0)
            for aid in arrows:
                hom = _add(hom, self.h(aid))
            paths.append(ZigzagPath(tuple(arrows), hom))
        return paths, which

    def zigzag_paths(self) -> list[ZigzagPath]:
        return list(self._zigzag_data[0])

    def zigzag_at(self, aid: str, sign: int) -> int:
        """Index of the zigzag through state ``(aid, sign)``."""
        return self._zigzag_data[1][(aid, sign)]

    @cached_property
    def homology_basis_cycles(self) -> tuple[dict[str, int], dict[str, int]]:
        """Integer 1-cycles X, Y in the arrow lattice with classes (1,0), (0,1).

        Built from fundamental cycles of a spanning tree of the underlying
        graph and an integer combination of them.
        """
        parent: dict[str, tuple[str, str, int] | None] = {self.vertices[0]: None}
        adj: dict[str, list[tuple[str, str, int]]] = {v: [] for v in self.vertices}
        for a in self.arrows.values():
            adj[a.tail].append((a.head, a.id, 1))
            adj[a.head].append((a.tail, a.id, -1))
        tree = set()
        queue = deque([self.vertices[0]])
        while queue:
            v = queue.popleft()
            for w, aid, s in adj[v]:
                if w not in parent:
                    parent[w] = (v, aid, s)
                    tree.add(aid)
                    queue.append(w)

        def root_path(v):
            # signed arrows of the tree path from the root to v
            out: dict[str, int] = {}
            while parent[v] is not None:
                u, aid, s = parent[v]
                out[aid] = out.get(aid, 0) + s
                v = u
            return out

        cycles = []
        for a in self.arrows.values():
            if a.id in tree:
                continue
            cyc = {a.id: 1}
            for aid, s in root_path(a.tail).items():
                cyc[aid] = cyc.get(aid, 0) + s
            for aid, s in root_path(a.head).items():
                cyc[aid] = cyc.get(aid, 0) - s
            cycles.append({k: v for k, v in cyc.items() if v})
        homs = []
        for cyc in cycles:
            x = sum(c * self.h(aid)[0] for aid, c in cyc.items())
            y = sum(c * self.h(aid)[1] for aid, c in cyc.items())
            homs.append((x, y))
        rows = [[hm[0] for hm in homs], [hm[1] for hm in homs]]
        basis = []
        for target in ((1, 0), (0, 1)):
            try:
                coeffs = integer_solve(rows, target) if cycles else None
            except Unsolvable:
                coeffs = None
            if coeffs is None:
                raise DimerError("homology labels do not generate the lattice Z^2")
            vec: dict[str, int] = {}
            for c, cyc in zip(coeffs, cycles):
                if c:
                    for aid, m in cyc.items():
                        vec[aid] = vec.get(aid, 0) + c * m
            basis.append({aid: vec.get(aid, 0) for aid in self.arrows})
        return basis[0], basis[1]

    def pairing(self, arrows: Iterable[str]) -> Vec:
        """Pair an arrow set, read as a 0/1 cochain, with the basis cycles."""
        bx, by = self.homology_basis_cycles
        x = y = 0
        for aid in arrows:
            x += bx[aid]
            y += by[aid]
        return (x, y)


def dimer_new(doc: Mapping) -> TorusDimer:
    """Build a dimer from a plain dict (the file format's shape)."""
    arrows = [(a["id"], a["tail"], a["head"], tuple(a["h"])) for a in doc["arrows"]]
    faces = doc["faces"]
    return TorusDimer(doc["vertices"], arrows, faces["positive"], faces["negative"], doc.get("name", ""))


def zigzag_paths(d: TorusDimer) -> list[ZigzagPath]:
    return d.zigzag_paths()


def is_consistent(d: TorusDimer) -> ConsistencyReport:
    """Properly-ordered test: at each face cycle the zigzags through its
    corners must turn once around counterclockwise, with distinct
    directions (clockwise, read in path order, for negative cycles)."""
    for sign, cycles in ((1, d.pos_cycles), (-1, d.neg_cycles)):
        for ci, cyc in enumerate(cycles):
            zs = [d.zigzag_at(aid, sign) for aid in cyc]
            if sign < 0:
                zs = zs[::-1]
            vecs = [d.zigzag_paths()[z].homology for z in zs]
            if is_ccw_cyclic(vecs):
                continue
            label = ("positive" if sign > 0 else "negative", ci)
            for i in range(len(vecs)):
                if vecs[i] == (0, 0):
                    return ConsistencyReport(False, label, (zs[i],), "null-homologous zigzag")
                for j in range(i + 1, len(vecs)):
                    if same_direction(vecs[i], vecs[j]):
                        return ConsistencyReport(False, label, (zs[i], zs[j]), "two zigzags share a direction")
            return ConsistencyReport(False, label, tuple(zs), "zigzag directions are out of cyclic order")
    return ConsistencyReport(True)


def zigzag_polygon(d: TorusDimer) -> LatticePolygon:
    """Polygon whose outward edge normals are the zigzag classes, in the
    normal form with its least vertex at the origin."""
    vecs = [z.homology for z in d.zigzag_paths() if z.homology != (0, 0)]
    vecs.sort(key=_AngleKey)
    pts = [(0, 0)]
    for vx, vy in vecs:
        x, y = pts[-1]
        pts.append((x - vy, y + vx))
    poly = convex_hull(pts)
    if poly.degenerate:
        raise AllZigzagsParallel("zigzag polygon is degenerate")
    return poly.normalized()


@dataclass
class RCharge:
    r: dict[str, Fraction]
    sleeper: dict[int, Fraction]


def sleeper_angles(d: TorusDimer) -> dict[int, Fraction]:
    """Equally spaced turn fractions over the distinct zigzag directions,
    ranked counterclockwise from (1,0)."""
    zs = d.zigzag_paths()
    dirs: list[Vec] = []
    for z in zs:
        if not any(same_direction(z.homology, u) for u in dirs):
            dirs.append(z.homology)
    dirs.sort(key=_AngleKey)
    n = len(dirs)
    out = {}
    for k, z in enumerate(zs):
        rank = next(r for r, u in enumerate(dirs) if same_direction(z.homology, u))
        out[k] = Fraction(rank, n)
    return out


def _frac(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


def rcharge(d: TorusDimer, sleepers: Mapping[int, object] | None = None) -> RCharge:
    """R-charges from sleeper angles, equally spaced unless given.

    An arrow sits between the zigzag entering it and the zigzag leaving it;
    its charge is twice the counterclockwise turn between their angles.
    Explicit sleepers map zigzag indices to turn fractions.
    """
    if not is_consistent(d):
        raise NotConsistent("R-charges need a consistent dimer")
    if sleepers is None:
        theta = sleeper_angles(d)
    else:
        theta = {int(k): Fraction(v) for k, v in sleepers.items()}
        if set(theta) != set(range(len(d.zigzag_paths()))):
            raise ValueError("need one sleeper angle per zigzag path")
    r = {}
    for aid in d.arrows:
        left = theta[d.zigzag_at(aid, -1)]
        right = theta[d.zigzag_at(aid, 1)]
        r[aid] = 2 * _frac(right - left)
    return RCharge(r, theta)


def arrow_arc(d: TorusDimer, theta: Mapping[int, Fraction], aid: str) -> tuple[Fraction, Fraction]:
    """Start and counterclockwise length of an arrow's arc, in turns."""
    start = theta[d.zigzag_at(aid, -1)]
    return start, _frac(theta[d.zigzag_at(aid, 1)] - start)


def check_rcharge(d: TorusDimer, rc: RCharge) -> list[str]:
    """List every violated condition; empty means R1 and R2 hold."""
    bad = []
    for aid, r in rc.r.items():
        if not 0 < r < 2:
            bad.append(f"R({aid}) = {r} outside (0,2)")
    for sign, cycles in (("+", d.pos_cycles), ("-", d.neg_cycles)):
        for ci, cyc in enumerate(cycles):
            s = sum((rc.r[a] for a in cyc), Fraction(0))
            if s != 2:
                bad.append(f"cycle {sign}{ci} sums to {s}")
    for v in d.vertices:
        s = Fraction(0)
        for a in d.arrows.values():
            if a.head == v:
                s += 1 - rc.r[a.id]
            if a.tail == v:
                s += 1 - rc.r[a.id]
        if s != 2:
            bad.append(f"vertex {v} sums to {s}")
    return bad


# -- Galois covers -------------------------------------------------------------


def _lattice_normal_form(v: Vec, w: Vec) -> tuple[int, int, int]:
    """Return (alpha, beta, gamma): the lattice spanned by v, w has basis
    (alpha, 0), (beta, gamma) with alpha, gamma > 0 and 0 <= beta < alpha."""
    det = v[0] * w[1] - v[1] * w[0]
    if det == 0:
        raise SingularLattice(f"{v} and {w} are parallel")
    g, s, t = _ext_gcd(v[1], w[1])
    # e2 = s v + t w has second coordinate g; e1 = (w1/g) v - (v1/g) w has zero second coordinate
    e2 = (s * v[0] + t * w[0], g)
    e1x = (w[1] // g) * v[0] - (v[1] // g) * w[0]
    alpha = abs(e1x)
    gamma = g
    beta = e2[0] % alpha
    assert alpha * gamma == abs(det)
    return alpha, beta, gamma


def galois_cover(d: TorusDimer, v: Vec, w: Vec) -> TorusDimer:
    """Lift ``d`` to the torus R^2 / (Z v + Z w).

    Each vertex, arrow and cycle gets one copy per coset of the sublattice;
    the new homology labels are coordinates in the basis (v, w), swapped
    first if needed so that the basis keeps the orientation of the torus.
    """
    v = (int(v[0]), int(v[1]))
    w = (int(w[0]), int(w[1]))
    det = v[0] * w[1] - v[1] * w[0]
    if det < 0:
        v, w, det = w, v, -det
    alpha, beta, gamma = _lattice_normal_form(v, w)

    def reduce(p: Vec) -> tuple[Vec, Vec]:
        """Representative in the box [0,alpha) x [0,gamma) and the lattice offset."""
        k = p[1] // gamma
        x = p[0] - k * beta
        m = x // alpha
        rep = (x - m * alpha, p[1] - k * gamma)
        return rep, (p[0] - rep[0], p[1] - rep[1])

    def coords(p: Vec) -> Vec:
        # solve a v + b w = p exactly
        a = p[0] * w[1] - p[1] * w[0]
        b = v[0] * p[1] - v[1] * p[0]
        assert a % det == 0 and b % det == 0
        return (a // det, b // det)

    cosets = [(x, y) for y in range(gamma) for x in range(alpha)]
    tag = {c: str(k) for k, c in enumerate(cosets)}
    vertices = [f"{u}.{tag[c]}" for c in cosets for u in d.vertices]
    arrows = []
    moved: dict[tuple[str, Vec], Vec] = {}
    for c in cosets:
        for a in d.arrows.values():
            target, offset = reduce(_add(c, a.h))
            moved[(a.id, c)] = target
            arrows.append(
                (f"{a.id}.{tag[c]}", f"{a.tail}.{tag[c]}", f"{a.head}.{tag[target]}", coords(offset))
            )

    def lift(cycles):
        out = []
        for c in cosets:
            for cyc in cycles:
                pos = c
                lifted = []
                for aid in cyc:
                    lifted.append(f"{aid}.{tag[pos]}")
                    pos = moved[(aid, pos)]
                assert pos == c
                out.append(lifted)
        return out

    name = f"{d.name}-cover({v[0]},{v[1]};{w[0]},{w[1]})" if d.name else ""
    return TorusDimer(vertices, arrows, lift(d.pos_cycles), lift(d.neg_cycles), name)
