"""Kasteleyn signs, the Kasteleyn operator and partition polynomials.

Rows of the Kasteleyn matrix are white nodes (negative cycles), columns are
black nodes (positive cycles). An arrow contributes ``sign * weight *
X^i Y^j`` where ``(i, j)`` are its coefficients in the integer basis cycles,
so a matching's monomial is its lattice point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .dimer import TorusDimer
from .exactmath import LaurentPoly2, Point, Unsolvable, gf2_solve, laurent_det, rat
from .matchings import CORNER, MatchingTable, PerfectMatching, classify, enumerate_matchings


class NoSignSystem(ValueError):
    pass


class RefNotCorner(ValueError):
    pass


@dataclass(frozen=True)
class PartitionPoly:
    poly: LaurentPoly2
    signs_by_point: dict[Point, int]


def unit_weights(d: TorusDimer) -> dict[str, Fraction]:
    return {a: Fraction(1) for a in d.arrows}


def face_constraints(d: TorusDimer) -> tuple[list[list[int]], list[int]]:
    """GF(2) rows, one per graph face (quiver vertex): the parity of the
    sign exponents around it must be ``l/2 + 1`` for a face of length l."""
    ids = list(d.arrows)
    col = {a: k for k, a in enumerate(ids)}
    rows, rhs = [], []
    for v in d.vertices:
        row = [0] * len(ids)
        length = 0
        for a in d.arrows.values():
            for end in (a.tail, a.head):
                if end == v:
                    row[col[a.id]] ^= 1
                    length += 1
        rows.append(row)
        rhs.append((length // 2 + 1) % 2)
    return rows, rhs


def solve_signs(d: TorusDimer) -> dict[str, int]:
    rows, rhs = face_constraints(d)
    try:
        x = gf2_solve(rows, rhs)
    except Unsolvable:
        raise NoSignSystem("face parity constraints are inconsistent") from None
    return {a: (-1 if bit else 1) for a, bit in zip(d.arrows, x)}


def check_signs(d: TorusDimer, kappa: Mapping[str, int]) -> bool:
    rows, rhs = face_constraints(d)
    ids = list(d.arrows)
    for row, want in zip(rows, rhs):
        prod = 1
        for k, bit in enumerate(row):
            if bit:
                prod *= kappa[ids[k]]
        if prod != (-1) ** want:
            return False
    return True


def kasteleyn_matrix(
    d: TorusDimer, w: Mapping[str, object] | None = None, kappa: Mapping[str, int] | None = None
) -> list[list[LaurentPoly2]]:
    w = unit_weights(d) if w is None else {a: rat(v) for a, v in w.items()}
    kappa = solve_signs(d) if kappa is None else kappa
    bx, by = d.homology_basis_cycles
    n = len(d.pos_cycles)
    m = [[LaurentPoly2() for _ in range(n)] for _ in range(len(d.neg_cycles))]
    for a in d.arrows:
        r, c = d.neg_cycle_of(a), d.pos_cycle_of(a)
        m[r][c] = m[r][c] + LaurentPoly2.monomial(kappa[a] * w[a], bx[a], by[a])
    return m


def partition_polynomial(d: TorusDimer, w: Mapping[str, object] | None = None) -> PartitionPoly:
    """Determinant of the Kasteleyn matrix, shifted so that exponents are
    the matching lattice points (least matching at the origin)."""
    if len(d.pos_cycles) != len(d.neg_cycles):
        return PartitionPoly(LaurentPoly2(), {})
    det = laurent_det(kasteleyn_matrix(d, w))
    first = _least_matching(d)
    if first is not None:
        ox, oy = d.pairing(first)
        det = det.shift(-ox, -oy)
    signs = {p: (1 if c > 0 else -1) for p, c in det.items()}
    return PartitionPoly(det, signs)


def _least_matching(d: TorusDimer):
    from .matchings import iter_matchings

    best = None
    for key in iter_matchings(d):
        if best is None or key < best:
            best = key
    return best


def count_matchings(d: TorusDimer, w: Mapping[str, object] | None = None) -> Fraction:
    """Weighted matching count from four evaluations at X, Y = +-1.

    The sign of a lattice point depends on the parities of its coordinates
    through one of four patterns, fixed by the sign gauge; exactly one of the
    combinations below makes every term positive, and it is the largest.
    """
    p = partition_polynomial(d, w).poly
    vals = [p.evaluate(x, y) for x, y in ((1, 1), (-1, 1), (1, -1), (-1, -1))]
    best = Fraction(0)
    for k in range(4):
        s = sum(v if j != k else -v for j, v in enumerate(vals))
        best = max(best, abs(s) / 2)
    return best


def brute_force_weights(t: MatchingTable, w: Mapping[str, object]) -> dict[Point, Fraction]:
    w = {a: rat(v) for a, v in w.items()}
    return {pt: sum((m.weight(w) for m in ms), Fraction(0)) for pt, ms in t.by_point.items()}


def hamiltonians(
    d: TorusDimer,
    w: Mapping[str, object],
    ref: PerfectMatching,
    table: MatchingTable | None = None,
) -> dict[Point, Fraction]:
    """Matching weights summed per lattice point, divided by the weight of
    the reference corner matching. Points are in the table's coordinates."""
    t = table or enumerate_matchings(d)
    if classify(t, ref) != CORNER:
        raise RefNotCorner(f"{ref.key()} is not a corner matching")
    w = {a: rat(v) for a, v in w.items()}
    base = ref.weight(w)
    return {pt: s / base for pt, s in brute_force_weights(t, w).items()}
