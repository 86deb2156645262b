"""Built-in example dimers.

Each entry is a plain dict in the file format (see :mod:`dimerlab.io`).
Arrows are written ``(id, tail, head, h)``; cycles list arrow ids in path
order.
"""

from __future__ import annotations

from fractions import Fraction

from .dimer import TorusDimer, dimer_new
from .exactmath import LaurentPoly2


def _spec(name, vertices, arrows, positive, negative, **extra):
    out = {
        "name": name,
        "vertices": list(vertices),
        "arrows": [{"id": a, "tail": t, "head": h, "h": list(v)} for a, t, h, v in arrows],
        "faces": {"positive": [list(c) for c in positive], "negative": [list(c) for c in negative]},
    }
    out.update(extra)
    return out


# one vertex, three loops: the plane C^3
C3 = _spec(
    "c3",
    ["1"],
    [("X", "1", "1", (1, 0)), ("Y", "1", "1", (0, 1)), ("Z", "1", "1", (-1, -1))],
    [["X", "Y", "Z"]],
    [["X", "Z", "Y"]],
)

# suspended pinch point: one hexagon (vertex 1) and two quadrangles
SPP = _spec(
    "spp",
    ["1", "2", "3"],
    [
        ("A", "1", "1", (1, 0)),
        ("B", "1", "2", (0, 0)),
        ("C", "2", "1", (-1, 0)),
        ("D", "2", "3", (1, 0)),
        ("E", "3", "1", (0, 1)),
        ("F", "3", "2", (0, 0)),
        ("G", "1", "3", (-1, -1)),
    ],
    [["A", "B", "C"], ["D", "E", "G", "F"]],
    [["B", "D", "F", "C"], ["E", "A", "G"]],
)

# P1 x P1 with four square faces
F0 = _spec(
    "f0",
    ["1", "2", "3", "4"],
    [
        ("a", "1", "2", (0, 0)),
        ("b", "1", "2", (-1, 0)),
        ("c", "3", "1", (0, 0)),
        ("d", "3", "1", (0, 1)),
        ("e", "2", "4", (0, 0)),
        ("f", "4", "3", (1, 0)),
        ("g", "2", "4", (0, -1)),
        ("h", "4", "3", (0, 0)),
    ],
    [["a", "e", "h", "c"], ["f", "d", "b", "g"]],
    [["e", "f", "c", "b"], ["h", "d", "a", "g"]],
)

# inconsistent: matching polygon is the unit square, zigzag polygon a triangle
SQUARE3 = _spec(
    "square3",
    ["1", "2", "3"],
    [
        ("b1", "1", "1", (1, 0)),
        ("b2", "1", "1", (0, 1)),
        ("b3", "1", "2", (0, -1)),
        ("b4", "1", "2", (-1, 0)),
        ("b5", "3", "1", (1, 0)),
        ("b6", "3", "1", (0, 1)),
        ("b7", "2", "3", (0, 0)),
        ("b8", "1", "3", (-1, -1)),
        ("b9", "2", "1", (0, 0)),
    ],
    [["b1", "b4", "b9"], ["b7", "b6", "b3"], ["b2", "b8", "b5"]],
    [["b2", "b3", "b9"], ["b7", "b5", "b4"], ["b6", "b1", "b8"]],
    inconsistent=True,
)

# eight graph nodes, four quiver vertices, nine matchings
SQUARE8 = _spec(
    "square8",
    ["1", "2", "3", "4"],
    [
        ("a1", "1", "2", (0, 0)),
        ("a2", "2", "1", (1, 0)),
        ("a3", "3", "4", (0, 0)),
        ("a4", "4", "3", (1, 0)),
        ("a5", "2", "3", (0, 0)),
        ("a6", "3", "1", (0, 1)),
        ("a7", "1", "4", (-1, 0)),
        ("a8", "4", "2", (0, 1)),
        ("a9", "2", "3", (0, -1)),
        ("a10", "3", "1", (0, 0)),
        ("a11", "1", "4", (-1, -1)),
        ("a12", "4", "2", (0, 0)),
    ],
    [["a1", "a5", "a10"], ["a2", "a7", "a12"], ["a3", "a8", "a9"], ["a4", "a6", "a11"]],
    [["a3", "a12", "a5"], ["a7", "a4", "a10"], ["a6", "a1", "a9"], ["a8", "a2", "a11"]],
)

# hexagon with two interior points, rebuilt from its printed signed Kasteleyn
# matrix (rows white, columns black); weights are the entry magnitudes
HEX8 = _spec(
    "hex8",
    ["1", "2", "3", "4", "5", "6", "7", "8"],
    [
        ("w1b1", "1", "2", (0, 0)),
        ("w1b2", "2", "3", (0, 0)),
        ("w1b3", "3", "4", (0, 1)),
        ("w1b4", "4", "1", (0, -1)),
        ("w2b2", "5", "2", (0, 1)),
        ("w2b3", "2", "3", (0, -1)),
        ("w2b5", "3", "5", (0, 0)),
        ("w3b1", "2", "6", (0, 0)),
        ("w3b3", "7", "2", (0, 0)),
        ("w3b7", "6", "7", (0, 0)),
        ("w4b1", "6", "1", (0, 0)),
        ("w4b4", "1", "8", (0, 0)),
        ("w4b6", "8", "6", (0, 0)),
        ("w5b3", "4", "7", (0, 0)),
        ("w5b4", "8", "4", (0, 1)),
        ("w5b7", "7", "8", (0, -1)),
        ("w6b2", "3", "5", (0, -1)),
        ("w6b5", "5", "6", (-1, 1)),
        ("w6b6", "6", "3", (1, 0)),
        ("w7b5", "6", "3", (1, -1)),
        ("w7b6", "3", "8", (-1, 0)),
        ("w7b7", "8", "6", (0, 1)),
    ],
    [
        ["w1b1", "w3b1", "w4b1"],
        ["w1b2", "w6b2", "w2b2"],
        ["w1b3", "w5b3", "w3b3", "w2b3"],
        ["w1b4", "w4b4", "w5b4"],
        ["w2b5", "w6b5", "w7b5"],
        ["w4b6", "w6b6", "w7b6"],
        ["w3b7", "w5b7", "w7b7"],
    ],
    [
        ["w1b2", "w1b3", "w1b4", "w1b1"],
        ["w2b3", "w2b5", "w2b2"],
        ["w3b7", "w3b3", "w3b1"],
        ["w4b4", "w4b6", "w4b1"],
        ["w5b7", "w5b4", "w5b3"],
        ["w6b5", "w6b6", "w6b2"],
        ["w7b6", "w7b7", "w7b5"],
    ],
    weights={
        "w1b1": "2",
        "w1b2": "2",
        "w1b3": "1",
        "w1b4": "1",
        "w2b2": "1",
        "w2b3": "1",
        "w2b5": "2",
        "w3b1": "1",
        "w3b3": "2",
        "w3b7": "1",
        "w4b1": "2",
        "w4b4": "1",
        "w4b6": "1",
        "w5b3": "2",
        "w5b4": "2",
        "w5b7": "1",
        "w6b2": "1",
        "w6b5": "2",
        "w6b6": "2",
        "w7b5": "1",
        "w7b6": "2",
        "w7b7": "2",
    },
    kasteleyn_printed=[
        [[["2", 0, 0]], [["2", -1, 0]], [["1", 0, 0]], [["1", 0, 0]], [], [], []],
        [[], [["-1", 0, 0]], [["1", 0, 0]], [], [["2", 0, 0]], [], []],
        [[["-1", 1, 0]], [], [["2", 0, 0]], [], [], [], [["1", 1, 0]]],
        [[["2", 0, 0]], [], [], [["-1", 0, 0]], [], [["1", -1, -1]], []],
        [[], [], [["-2", 0, 0]], [["2", 0, 0]], [], [], [["1", 1, 0]]],
        [[], [["1", 0, 0]], [], [], [["2", 0, 0]], [["2", 0, 0]], []],
        [[], [], [], [], [["1", 0, 0]], [["-2", -1, 0]], [["2", 1, 1]]],
    ],
)

CATALOG: dict[str, dict] = {s["name"]: s for s in (C3, SPP, F0, HEX8, SQUARE3, SQUARE8)}


def catalog_names() -> list[str]:
    return list(CATALOG)


def load(name: str) -> TorusDimer:
    try:
        return dimer_new(CATALOG[name])
    except KeyError:
        raise KeyError(f"no catalog entry named {name!r}; have {', '.join(CATALOG)}") from None


def printed_kasteleyn(name: str = "hex8") -> list[list[LaurentPoly2]]:
    """The stored signed, weighted Kasteleyn matrix of a catalog entry."""
    rows = CATALOG[name]["kasteleyn_printed"]
    return [[LaurentPoly2({(i, j): c for c, i, j in entry}) for entry in row] for row in rows]


def catalog_weights(name: str) -> dict[str, Fraction] | None:
    w = CATALOG[name].get("weights")
    return None if w is None else {a: Fraction(v) for a, v in w.items()}


def consistent_names() -> list[str]:
    return [n for n, s in CATALOG.items() if not s.get("inconsistent")]
