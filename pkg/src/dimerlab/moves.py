"""Dimer moves and the weight and stability transport that goes with them.

Cycles are always handled in path order ``[c0, ..., c_{n-1}]`` with
``head(c_k) = tail(c_{k+1})``. Every move returns the new dimer and a
:class:`MoveRecord`; the record's ``steps`` list is replayed by
:func:`transport_weights`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .dimer import Arrow, TorusDimer, Vec

SPLIT = "split"
JOIN = "join"
SPIDER = "spider"
MUTATION = "mutation"


class MoveError(ValueError):
    pass


class InvalidSite(MoveError):
    pass


class NotBivalent(MoveError):
    pass


class NotQuadrivalent(MoveError):
    pass


class NotMutable(MoveError):
    pass


class WeightZeroDelta(MoveError):
    pass


@dataclass
class MoveRecord:
    kind: str
    site: object
    correspondence: dict[int, int]
    arrow_map: dict[str, str]
    steps: list[tuple[str, dict]] = field(default_factory=list)
    source: TorusDimer | None = None
    target: TorusDimer | None = None
    # arrows into / out of the mutated vertex, keyed by the other endpoint
    flow_in: dict[str, int] = field(default_factory=dict)
    flow_out: dict[str, int] = field(default_factory=dict)


# -- a mutable working copy ----------------------------------------------------


class _Work:
    def __init__(self, d: TorusDimer):
        self.name = d.name
        self.vertices = list(d.vertices)
        self.arrows: dict[str, list] = {a.id: [a.tail, a.head, a.h] for a in d.arrows.values()}
        self.pos = [list(c) for c in d.pos_cycles]
        self.neg = [list(c) for c in d.neg_cycles]

    def fresh(self, base: str) -> str:
        name = base
        k = 1
        while name in self.arrows:
            k += 1
            name = f"{base}{k}"
        return name

    def add(self, tail: str, head: str, h: Vec, base: str) -> str:
        aid = self.fresh(base)
        self.arrows[aid] = [tail, head, (h[0], h[1])]
        return aid

    def tail(self, aid):
        return self.arrows[aid][0]

    def head(self, aid):
        return self.arrows[aid][1]

    def h(self, aid) -> Vec:
        return self.arrows[aid][2]

    def cycles(self, sign: int) -> list[list[str]]:
        return self.pos if sign > 0 else self.neg

    def find(self, sign: int, aid: str) -> int:
        for k, c in enumerate(self.cycles(sign)):
            if aid in c:
                return k
        raise KeyError(aid)

    def build(self) -> TorusDimer:
        arrows = [Arrow(a, t, h, v) for a, (t, h, v) in self.arrows.items()]
        return TorusDimer(self.vertices, arrows, self.pos, self.neg, self.name)


def _rotate_to(cyc: list[str], k: int) -> list[str]:
    return cyc[k:] + cyc[:k]


def _hsum(work: _Work, arrows) -> Vec:
    x = y = 0
    for a in arrows:
        hx, hy = work.h(a)
        x, y = x + hx, y + hy
    return (x, y)


def _replace_pair(cyc: list[str], first: str, second: str, new: list[str]) -> list[str] | None:
    """Replace the consecutive pair (first, second) of a cyclic list."""
    n = len(cyc)
    for k in range(n):
        if cyc[k] == first and cyc[(k + 1) % n] == second:
            rot = _rotate_to(cyc, k)
            return new + rot[2:]
    return None


# -- elementary moves on the working copy ----------------------------------------


def _split(work: _Work, sign: int, ci: int, i: int, j: int) -> dict:
    cyc = work.cycles(sign)[ci]
    n = len(cyc)
    if not 0 <= i < j < n:
        raise InvalidSite(f"cannot split a cycle of length {n} at ({i}, {j})")
    x, y = work.tail(cyc[i]), work.tail(cyc[j])
    first = cyc[i:j]
    second = cyc[j:] + cyc[:i]
    hv = _hsum(work, first)
    b1 = work.add(y, x, (-hv[0], -hv[1]), "s")
    b2 = work.add(x, y, hv, "s")
    mine = work.cycles(sign)
    mine[ci] = first + [b1]
    mine.append(second + [b2])
    work.cycles(-sign).append([b1, b2])
    return {"new": [b1, b2]}


def _join(work: _Work, sign: int, ci: int) -> dict:
    bigon = work.cycles(sign)[ci]
    if len(bigon) != 2:
        raise NotBivalent(f"cycle {ci} has length {len(bigon)}, not 2")
    p, q = bigon
    other = work.cycles(-sign)
    kp, kq = work.find(-sign, p), work.find(-sign, q)
    if kp == kq:
        raise InvalidSite("both arrows of the bigon lie on one face; join would not give a disc")
    cp, cq = other[kp], other[kq]
    sp = _rotate_to(cp, cp.index(p))[1:]
    sq = _rotate_to(cq, cq.index(q))[1:]
    merged = sp + sq
    for k in sorted((kp, kq), reverse=True):
        del other[k]
    other.append(merged)
    del work.cycles(sign)[ci]
    del work.arrows[p]
    del work.arrows[q]
    return {"p": p, "q": q, "sp": sp, "sq": sq}


def _corner_triangle(work: _Work, v: str, inc: str) -> tuple[int, list[str]]:
    ci = work.find(1, inc)
    cyc = work.pos[ci]
    return ci, _rotate_to(cyc, cyc.index(inc))


def _spider(work: _Work, v: str) -> dict:
    ins = [a for a in work.arrows if work.head(a) == v]
    outs = [a for a in work.arrows if work.tail(a) == v]
    if len(ins) != 2 or len(outs) != 2 or set(ins) & set(outs):
        raise NotQuadrivalent(f"vertex {v} is not 4-valent with two arrows in and two out")
    i1, i2 = ins
    ca, ta = _corner_triangle(work, v, i1)
    cb, tb = _corner_triangle(work, v, i2)
    if ca == cb:
        raise NotQuadrivalent(f"both corners at {v} lie on one positive cycle")
    if len(ta) != 3 or len(tb) != 3:
        raise NotQuadrivalent(f"positive cycles at {v} are not triangles")
    _, o1, e1 = ta
    _, o2, e2 = tb
    x, y = work.tail(i1), work.head(o1)
    x2, y2 = work.tail(i2), work.head(o2)
    h = work.h
    neg = lambda u: (-u[0], -u[1])
    plus = lambda u, w: (u[0] + w[0], u[1] + w[1])
    f1 = work.add(x, y2, plus(h(i1), h(o2)), "f")
    f2 = work.add(x2, y, plus(h(i2), h(o1)), "f")
    i1r = work.add(v, x, neg(h(i1)), i1 + "'")
    o1r = work.add(y, v, neg(h(o1)), o1 + "'")
    i2r = work.add(v, x2, neg(h(i2)), i2 + "'")
    o2r = work.add(y2, v, neg(h(o2)), o2 + "'")
    # negative cycles: (i1, o2) -> f1, (i2, o1) -> f2, e1 -> (o1', i1'), e2 -> (o2', i2')
    for first, second, new in ((i1, o2, [f1]), (i2, o1, [f2])):
        for k, cyc in enumerate(work.neg):
            rep = _replace_pair(cyc, first, second, new)
            if rep is not None:
                work.neg[k] = rep
                break
        else:
            raise NotQuadrivalent(f"arrows at {v} do not alternate around it")
    for old, new in ((e1, [o1r, i1r]), (e2, [o2r, i2r])):
        k = work.find(-1, old)
        cyc = work.neg[k]
        rot = _rotate_to(cyc, cyc.index(old))
        work.neg[k] = new + rot[1:]
    for k in sorted((ca, cb), reverse=True):
        del work.pos[k]
    work.pos.append([i1r, f1, o2r])
    work.pos.append([i2r, f2, o1r])
    for a in (i1, o1, i2, o2, e1, e2):
        del work.arrows[a]
    return {
        "i1": i1, "o1": o1, "e1": e1, "i2": i2, "o2": o2, "e2": e2,
        "f1": f1, "f2": f2, "i1r": i1r, "o1r": o1r, "i2r": i2r, "o2r": o2r,
    }


# -- zigzag bookkeeping -------------------------------------------------------------


def _correspondence(d: TorusDimer, nd: TorusDimer, arrow_map: Mapping[str, str]) -> dict[int, int]:
    """Pair zigzags of equal homology, preferring large arrow overlap."""
    old = d.zigzag_paths()
    new = nd.zigzag_paths()
    pairs = []
    for i, z in enumerate(old):
        mapped = {arrow_map.get(a) for a in z.arrows} - {None}
        for j, u in enumerate(new):
            if u.homology == z.homology:
                pairs.append((-len(mapped & set(u.arrows)), i, j))
    pairs.sort()
    out: dict[int, int] = {}
    used = set()
    for _, i, j in pairs:
        if i not in out and j not in used:
            out[i] = j
            used.add(j)
    return out


def _identity_map(d: TorusDimer, nd: TorusDimer) -> dict[str, str]:
    return {a: a for a in d.arrows if a in nd.arrows}


def _finish(kind, site, d: TorusDimer, work: _Work, steps, extra_map=None) -> tuple[TorusDimer, MoveRecord]:
    nd = work.build()
    amap = _identity_map(d, nd)
    amap.update(extra_map or {})
    rec = MoveRecord(kind, site, _correspondence(d, nd, amap), amap, steps, d, nd)
    return nd, rec


# -- public moves ---------------------------------------------------------------------


def _parse_cycle(cycle) -> tuple[int, int]:
    sign, idx = cycle
    if sign in ("+", 1, "positive"):
        return 1, int(idx)
    if sign in ("-", -1, "negative"):
        return -1, int(idx)
    raise InvalidSite(f"bad cycle reference {cycle!r}")


def split(d: TorusDimer, cycle, i: int, j: int) -> tuple[TorusDimer, MoveRecord]:
    """Cut a face cycle between positions i < j, inserting a bigon.

    ``cycle`` is ``("+", k)`` or ``("-", k)``.
    """
    sign, ci = _parse_cycle(cycle)
    if not 0 <= ci < len(d.pos_cycles if sign > 0 else d.neg_cycles):
        raise InvalidSite(f"no cycle {cycle!r}")
    work = _Work(d)
    step = _split(work, sign, ci, i, j)
    return _finish(SPLIT, (cycle, i, j), d, work, [(SPLIT, step)])


def join(d: TorusDimer, bigon) -> tuple[TorusDimer, MoveRecord]:
    """Remove a bigon face, merging its two neighbours into one face."""
    sign, ci = _parse_cycle(bigon)
    cycles = d.pos_cycles if sign > 0 else d.neg_cycles
    if not 0 <= ci < len(cycles):
        raise InvalidSite(f"no cycle {bigon!r}")
    work = _Work(d)
    step = _join(work, sign, ci)
    return _finish(JOIN, bigon, d, work, [(JOIN, step)])


def bigons(d: TorusDimer) -> list[tuple[str, int]]:
    out = [("+", k) for k, c in enumerate(d.pos_cycles) if len(c) == 2]
    return out + [("-", k) for k, c in enumerate(d.neg_cycles) if len(c) == 2]


def reduce_dimer(d: TorusDimer, order: str = "first") -> TorusDimer:
    """Join bigons until none is left. ``order`` picks the first or last
    bigon at each step, which is handy for checking confluence."""
    while True:
        bs = bigons(d)
        if not bs:
            return d
        pick = bs[0] if order == "first" else bs[-1]
        d, _ = join(d, pick)


def spider(d: TorusDimer, vertex: str) -> tuple[TorusDimer, MoveRecord]:
    """Spider move at a 4-valent vertex whose two positive cycles are triangles."""
    work = _Work(d)
    step = _spider(work, str(vertex))
    rmap = {step["i1"]: step["i1r"], step["o1"]: step["o1r"], step["i2"]: step["i2r"], step["o2"]: step["o2r"]}
    return _finish(SPIDER, vertex, d, work, [(SPIDER, step)], rmap)


def mutate(d: TorusDimer, vertex: str) -> tuple[TorusDimer, MoveRecord]:
    """Quiver mutation at a vertex with two arrows in and two out.

    Positive cycles at the vertex are first split down to triangles, then
    the spider move runs, and bigons left behind are joined.
    """
    v = str(vertex)
    if v not in d.vertices:
        raise InvalidSite(f"no vertex {v}")
    ins, outs = d.incoming(v), d.outgoing(v)
    if len(ins) != 2 or len(outs) != 2 or set(ins) & set(outs):
        raise NotMutable(f"vertex {v} has {len(ins)} incoming and {len(outs)} outgoing arrows; need 2 and 2")
    work = _Work(d)
    steps = []
    # a positive cycle passing v twice is cut into two triangles by the first split
    for inc in ins:
        ci = work.find(1, inc)
        cyc = work.pos[ci]
        if len(cyc) == 2:
            raise NotMutable(f"positive cycle through {v} is a bigon; reduce first")
        if len(cyc) > 3:
            k = cyc.index(inc)
            work.pos[ci] = _rotate_to(cyc, k)
            steps.append((SPLIT, _split(work, 1, ci, 0, 2)))
    step = _spider(work, v)
    steps.append((SPIDER, step))
    touched = {work.find(-1, step["f1"]), work.find(-1, step["f2"])}
    joins = [work.neg[k] for k in touched if len(work.neg[k]) == 2]
    for bigon in joins:
        ci = work.neg.index(bigon)
        steps.append((JOIN, _join(work, -1, ci)))
    rmap = {step["i1"]: step["i1r"], step["o1"]: step["o1r"], step["i2"]: step["i2r"], step["o2"]: step["o2r"]}
    nd, rec = _finish(MUTATION, v, d, work, steps, rmap)
    for a in ins:
        t = d.arrows[a].tail
        rec.flow_in[t] = rec.flow_in.get(t, 0) + 1
    for a in outs:
        hd = d.arrows[a].head
        rec.flow_out[hd] = rec.flow_out.get(hd, 0) + 1
    return nd, rec


# -- transport ------------------------------------------------------------------------


def _spider_weights(w: dict[str, Fraction], s: dict) -> None:
    wi1, wo1, we1 = w[s["i1"]], w[s["o1"]], w[s["e1"]]
    wi2, wo2, we2 = w[s["i2"]], w[s["o2"]], w[s["e2"]]
    delta = wi1 * wi2 + wo1 * wo2
    if delta == 0:
        raise WeightZeroDelta("w(i1) w(i2) + w(o1) w(o2) vanishes")
    for a in ("i1", "o1", "e1", "i2", "o2", "e2"):
        del w[s[a]]
    w[s["i1r"]] = we1 * wi2 / delta
    w[s["o1r"]] = we1 * wo2 / delta
    w[s["i2r"]] = we2 * wi1 / delta
    w[s["o2r"]] = we2 * wo1 / delta
    w[s["f1"]] = Fraction(1)
    w[s["f2"]] = Fraction(1)


def transport_weights(d: TorusDimer, w: Mapping[str, object], rec: MoveRecord) -> dict[str, Fraction]:
    """Carry edge weights through a move so that every Hamiltonian (matching
    weights per lattice point over the matching weight at a fixed corner)
    is unchanged."""
    if set(w) != set(d.arrows):
        raise MoveError("weights do not cover the arrows of the dimer")
    cur = {a: Fraction(v) for a, v in w.items()}
    if any(v == 0 for v in cur.values()):
        raise MoveError("weights must be nonzero")
    for kind, s in rec.steps:
        if kind == SPLIT:
            for a in s["new"]:
                cur[a] = Fraction(1)
        elif kind == JOIN:
            wp, wq = cur.pop(s["p"]), cur.pop(s["q"])
            for a in s["sq"]:
                cur[a] *= wp
            for a in s["sp"]:
                cur[a] *= wq
        elif kind == SPIDER:
            _spider_weights(cur, s)
        else:
            raise MoveError(f"unknown step {kind}")
    return cur


def transport_stability(theta: Mapping[str, object], rec: MoveRecord, vertex: str | None = None) -> dict[str, Fraction]:
    """Piecewise-linear map of stability parameters across a mutation.

    The mutated vertex flips sign; a neighbour with n arrows into it gains
    n max(0, t), one with n arrows out of it gains n min(0, t), where t is
    the old parameter at the mutated vertex.
    """
    if rec.kind != MUTATION:
        raise MoveError("stability transport needs a mutation record")
    f = str(vertex if vertex is not None else rec.site)
    if f != rec.site:
        raise MoveError(f"record is a mutation at {rec.site}, not {f}")
    th = {str(k): Fraction(v) for k, v in theta.items()}
    t = th[f]
    out = dict(th)
    out[f] = -t
    for u, n in rec.flow_in.items():
        if u != f:
            out[u] += n * max(Fraction(0), t)
    for u, n in rec.flow_out.items():
        if u != f:
            out[u] += n * min(Fraction(0), t)
    return out


# -- isomorphism ------------------------------------------------------------------------


def find_isomorphism(d1: TorusDimer, d2: TorusDimer) -> dict[str, str] | None:
    """Arrow bijection carrying face cycles to face cycles of the same sign
    and preserving their cyclic order, or None."""
    if (len(d1.arrows), len(d1.vertices), len(d1.pos_cycles)) != (
        len(d2.arrows),
        len(d2.vertices),
        len(d2.pos_cycles),
    ):
        return None
    if sorted(map(len, d1.pos_cycles)) != sorted(map(len, d2.pos_cycles)):
        return None
    if sorted(map(len, d1.neg_cycles)) != sorted(map(len, d2.neg_cycles)):
        return None
    ids1 = list(d1.arrows)
    seed = ids1[0]
    moves = (
        (d1.pos_next, d2.pos_next),
        (d1.pos_prev, d2.pos_prev),
        (d1.neg_next, d2.neg_next),
        (d1.neg_prev, d2.neg_prev),
    )
    for cand in d2.arrows:
        phi = {seed: cand}
        back = {cand: seed}
        queue = deque([seed])
        ok = True
        while queue and ok:
            a = queue.popleft()
            b = phi[a]
            for m1, m2 in moves:
                na, nb = m1(a), m2(b)
                if na in phi:
                    if phi[na] != nb:
                        ok = False
                        break
                elif nb in back:
                    ok = False
                    break
                else:
                    phi[na] = nb
                    back[nb] = na
                    queue.append(na)
        if ok and len(phi) == len(ids1):
            return phi
    return None


def isomorphic(d1: TorusDimer, d2: TorusDimer) -> bool:
    return find_isomorphism(d1, d2) is not None


def vertex_map(d1: TorusDimer, d2: TorusDimer, phi: Mapping[str, str]) -> dict[str, str]:
    return {d1.arrows[a].tail: d2.arrows[b].tail for a, b in phi.items()}
