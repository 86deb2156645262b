"""Exact arithmetic and planar lattice geometry.

Everything here works over integers and :class:`fractions.Fraction`; nothing
ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

Rat = Fraction
Point = tuple[int, int]


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def rat_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials in two variables


class LaurentPoly2:
    """Laurent polynomial in X, Y with rational coefficients.

    Terms are kept in a dict keyed by exponent pairs; zero coefficients are
    never stored, so equality is dict equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Point, object] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            c = rat(c)
            if c:
                clean[(int(i), int(j))] = c
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly2":
        p = cls.__new__(cls)
        p._terms = dict(sorted((k, v) for k, v in terms.items() if v))
        return p

    @classmethod
    def constant(cls, c) -> "LaurentPoly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, i: int, j: int) -> "LaurentPoly2":
        return cls({(i, j): c})

    @property
    def terms(self) -> dict[Point, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Point]:
        return list(self._terms)

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly2.constant(other)
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def _coerce(self, other):
        if isinstance(other, LaurentPoly2):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly2.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly2._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Point, Fraction] = {}
        for (i1, j1), a in self._terms.items():
            for (i2, j2), b in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + a * b
        return LaurentPoly2._raw(out)

    __rmul__ = __mul__

    def shift(self, di: int, dj: int) -> "LaurentPoly2":
        return LaurentPoly2._raw({(i + di, j + dj): c for (i, j), c in self._terms.items()})

    def exact_div(self, other: "LaurentPoly2") -> "LaurentPoly2":
        """Divide when the quotient is known to be a Laurent polynomial.

        Lexicographic leading terms multiply, so peeling them off works like
        long division. Raises ValueError if the division is not exact.
        """
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return LaurentPoly2()
        (li, lj), lc = max(other._terms.items())
        ls, lo = min(self._terms), min(other._terms)
        bound = (ls[0] - lo[0], ls[1] - lo[1])
        rem = dict(self._terms)
        quot: dict[Point, Fraction] = {}
        while rem:
            (ri, rj) = max(rem)
            qi, qj = ri - li, rj - lj
            if (qi, qj) < bound:
                raise ValueError("polynomial division is not exact")
            qc = rem[(ri, rj)] / lc
            quot[(qi, qj)] = quot.get((qi, qj), 0) + qc
            for (i, j), c in other._terms.items():
                k = (i + qi, j + qj)
                v = rem.get(k, 0) - qc * c
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly2._raw(quot)

    def evaluate(self, x, y) -> Fraction:
        x, y = rat(x), rat(y)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x**i * y**j
        return total

    def newton_polygon(self) -> "LatticePolygon":
        return convex_hull(self._terms)

    def __repr__(self):
        return f"LaurentPoly2({self})"

    def __str__(self):
        return format_laurent(self)


def format_laurent(p: LaurentPoly2) -> str:
    """Render as e.g. ``-2*X^2 + 3*X*Y - 1/2*Y^-1``, terms in lex order."""
    if not p:
        return "0"
    parts = []
    for (i, j), c in p.items():
        mono = []
        if i:
            mono.append("X" if i == 1 else f"X^{i}")
        if j:
            mono.append("Y" if j == 1 else f"Y^{j}")
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = "*".join(mono)
        else:
            body = f"{mag}*" + "*".join(mono)
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _det_minors(m: Sequence[Sequence[LaurentPoly2]]) -> LaurentPoly2:
    n = len(m)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int) -> LaurentPoly2:
        if row == n:
            return LaurentPoly2.constant(1)
        total = LaurentPoly2()
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = m[row][c]
            if entry:
                sub = minor(row + 1, cols & ~(1 << c))
                if sub:
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        return total

    return minor(0, (1 << n) - 1)


def _det_bareiss(m: Sequence[Sequence[LaurentPoly2]]) -> LaurentPoly2:
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = LaurentPoly2.constant(1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return LaurentPoly2()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def laurent_det(m: Sequence[Sequence]) -> LaurentPoly2:
    """Exact determinant of a square matrix of Laurent polynomials.

    Small matrices use Laplace expansion with memoised minors, larger ones
    fraction-free Bareiss elimination.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return LaurentPoly2.constant(1)
    rows = [[e if isinstance(e, LaurentPoly2) else LaurentPoly2.constant(e) for e in row] for row in m]
    if n <= 12:
        return _det_minors(rows)
    return _det_bareiss(rows)


# ---------------------------------------------------------------------------
# Linear algebra over GF(2) and over the integers


class Unsolvable(Exception):
    """The linear system has no solution."""


def gf2_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int]:
    """Return some x with a·x = b over GF(2); free variables are set to 0."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rows = []
    for r in range(nrows):
        mask = 0
        for c in range(ncols):
            if a[r][c] & 1:
                mask |= 1 << c
        rows.append([mask, b[r] & 1])
    pivots = []
    rank = 0
    for c in range(ncols):
        p = next((r for r in range(rank, nrows) if rows[r][0] >> c & 1), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        for r in range(nrows):
            if r != rank and rows[r][0] >> c & 1:
                rows[r][0] ^= rows[rank][0]
                rows[r][1] ^= rows[rank][1]
        pivots.append(c)
        rank += 1
    if any(mask == 0 and rhs for mask, rhs in rows[rank:]):
        raise Unsolvable("inconsistent system over GF(2)")
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][1]
    return x


def integer_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int]:
    """Return an integer solution of a·x = b, or raise Unsolvable.

    Column operations bring ``a`` to lower echelon form while a unimodular
    matrix tracks them; the triangular system is then solved by substitution.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(map(int, row)) for row in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(i, j, p, q, r, s):
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (h, u):
            for row in mat:
                x, y = row[i], row[j]
                row[i], row[j] = p * x + q * y, r * x + s * y

    pivot_cols = []
    col = 0
    for r in range(m):
        if col >= n:
            break
        for j in range(col + 1, n):
            if h[r][j] == 0:
                continue
            x, y = h[r][col], h[r][j]
            g, s, t = _ext_gcd(x, y)
            col_op(col, j, s, t, -y // g, x // g)
        if h[r][col] != 0:
            if h[r][col] < 0:
                _negate_col(h, u, col)
            pivot_cols.append((r, col))
            col += 1
    y = [0] * n
    residual = list(map(int, b))
    pivot_rows = {r: c for r, c in pivot_cols}
    for r in range(m):
        if r in pivot_rows:
            c = pivot_rows[r]
            if residual[r] % h[r][c]:
                raise Unsolvable("no integer solution")
            y[c] = residual[r] // h[r][c]
            for rr in range(m):
                residual[rr] -= h[rr][c] * y[c]
        elif residual[r] != 0:
            raise Unsolvable("no integer solution")
    if any(residual):
        raise Unsolvable("no integer solution")
    return [sum(u[i][k] * y[k] for k in range(n)) for i in range(n)]


def _negate_col(h, u, c):
    for mat in (h, u):
        for row in mat:
            row[c] = -row[c]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# Lattice polygons


class DegeneratePolygon(ValueError):
    """Raised when a point or a segment is used where an area is needed."""


def cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class LatticePolygon:
    """Convex lattice polygon with vertices listed counterclockwise.

    Points and segments are allowed and flagged through ``degenerate``.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Point]):
        self.vertices: tuple[Point, ...] = tuple((int(x), int(y)) for x, y in vertices)
        if not self.vertices:
            raise ValueError("a polygon needs at least one vertex")

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        if len(v) < 2:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[k], v[(k + 1) % len(v)]) for k in range(len(v))]

    def translate(self, dx: int, dy: int) -> "LatticePolygon":
        return LatticePolygon((x + dx, y + dy) for x, y in self.vertices)

    def normalized(self) -> "LatticePolygon":
        """Translate so that the lexicographically least vertex is the origin,
        and start the vertex list there."""
        lo = min(self.vertices)
        k = self.vertices.index(lo)
        rotated = self.vertices[k:] + self.vertices[:k]
        return LatticePolygon((x - lo[0], y - lo[1]) for x, y in rotated)

    def offset(self) -> Point:
        return min(self.vertices)

    def locate(self, p: Point) -> str:
        """Return ``"vertex"``, ``"boundary"``, ``"interior"`` or ``"outside"``."""
        p = (int(p[0]), int(p[1]))
        if p in self.vertices:
            return "vertex"
        if len(self.vertices) == 1:
            return "outside"
        if len(self.vertices) == 2:
            a, b = self.vertices
            if cross(a, b, p) == 0 and min(a, b) <= p <= max(a, b):
                return "boundary"
            return "outside"
        on_edge = False
        for a, b in self.edges():
            c = cross(a, b, p)
            if c < 0:
                return "outside"
            if c == 0:
                on_edge = True
        return "boundary" if on_edge else "interior"

    def lattice_points(self) -> list[Point]:
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        return [
            (x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if self.locate((x, y)) != "outside"
        ]

    def edge_points(self, a: Point, b: Point) -> list[Point]:
        """Lattice points on the segment from a to b, in order."""
        k = gcd(b[0] - a[0], b[1] - a[1])
        if k == 0:
            return [a]
        dx, dy = (b[0] - a[0]) // k, (b[1] - a[1]) // k
        return [(a[0] + t * dx, a[1] + t * dy) for t in range(k + 1)]

    def __eq__(self, other):
        if not isinstance(other, LatticePolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolygon({list(self.vertices)})"


def convex_hull(points: Iterable[Point]) -> LatticePolygon:
    """Smallest convex lattice polygon containing the points.

    Collinear input gives a two-vertex segment and a single point gives a
    one-vertex polygon. Vertices start at the lexicographic minimum and run
    counterclockwise, with no collinear triples kept.
    """
    pts = sorted({(int(x), int(y)) for x, y in points})
    if not pts:
        raise ValueError("convex hull of an empty set")
    if len(pts) == 1:
        return LatticePolygon(pts)

    def chain(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) <= 2:
        return LatticePolygon([pts[0], pts[-1]])
    return LatticePolygon(hull)


def elementary_stats(p: LatticePolygon) -> tuple[int, int, int]:
    """Return (A, B, I): twice the area, boundary and interior lattice points.

    All three are counted directly, so Pick's identity A = 2I + B - 2 is a
    genuine check on the result rather than a definition.
    """
    if p.degenerate:
        raise DegeneratePolygon(f"{p!r} has no area")
    area2 = 0
    boundary = 0
    for (x0, y0), (x1, y1) in p.edges():
        area2 += x0 * y1 - x1 * y0
        boundary += gcd(x1 - x0, y1 - y0)
    area2 = abs(area2)
    interior = sum(1 for q in p.lattice_points() if p.locate(q) == "interior")
    return area2, boundary, interior


def edge_lengths(p: LatticePolygon) -> list[int]:
    """Elementary (lattice) length of every side."""
    return [gcd(b[0] - a[0], b[1] - a[1]) for a, b in p.edges()]
