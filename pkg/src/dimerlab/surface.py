"""Ribbon graphs: a half-edge set with a node rotation and an edge involution.

Faces are the orbits of ``phi = nu . eps`` (apply ``eps`` first). Half-edges
can carry any hashable label; internally they are relabelled 0..n-1 in sorted
order so orbit walks are list lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

BLACK = "black"
WHITE = "white"


class RibbonError(ValueError):
    pass


class EpsNotFreeInvolution(RibbonError):
    pass


class NotBipartite(RibbonError):
    pass


class NotAPermutation(RibbonError):
    pass


@dataclass(frozen=True)
class SurfaceInvariants:
    nodes: int
    edges: int
    faces: int
    euler: int
    genus: int


def perm_from_cycles(cycles: Iterable[Sequence[Hashable]], domain: Iterable[Hashable] = ()) -> dict:
    """Turn cycle notation into a dict; points of ``domain`` not listed are fixed."""
    perm = {x: x for x in domain}
    for cyc in cycles:
        cyc = list(cyc)
        for k, x in enumerate(cyc):
            perm[x] = cyc[(k + 1) % len(cyc)]
    return perm


def _orbits(perm: list[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orbit = []
        x = start
        while not seen[x]:
            seen[x] = True
            orbit.append(x)
            x = perm[x]
        out.append(orbit)
    return out


class RibbonGraph:
    """Finite ribbon graph ``(H, nu, eps)`` with an optional node colouring.

    ``coloring`` maps half-edges to ``"black"`` or ``"white"`` and must be
    constant on nodes.
    """

    def __init__(
        self,
        half_edges: Iterable[Hashable],
        nu: Mapping,
        eps: Mapping,
        coloring: Mapping | None = None,
    ):
        labels = sorted(set(half_edges), key=_sort_key)
        self.labels: tuple = tuple(labels)
        self.index = {h: k for k, h in enumerate(labels)}
        n = len(labels)
        try:
            self.nu = [self.index[nu[h]] for h in labels]
            self.eps = [self.index[eps[h]] for h in labels]
        except KeyError as exc:
            raise NotAPermutation(f"permutation undefined or leaves H at {exc}") from None
        for name, p in (("nu", self.nu), ("eps", self.eps)):
            if sorted(p) != list(range(n)):
                raise NotAPermutation(f"{name} is not a bijection of H")
        for k in range(n):
            if self.eps[k] == k or self.eps[self.eps[k]] != k:
                raise EpsNotFreeInvolution(f"eps is not a free involution at {labels[k]!r}")
        self.phi = [self.nu[self.eps[k]] for k in range(n)]
        self.node_orbits = _orbits(self.nu)
        self.edge_orbits = _orbits(self.eps)
        self.face_orbits = _orbits(self.phi)
        self.colors: list[str] | None = None
        if coloring is not None:
            colors = [coloring[h] for h in labels]
            for orbit in self.node_orbits:
                if len({colors[k] for k in orbit}) != 1:
                    raise NotBipartite("colouring is not constant on a node")
            for a, b in self.edge_orbits:
                if {colors[a], colors[b]} != {BLACK, WHITE}:
                    raise NotBipartite(f"edge {labels[a]!r}-{labels[b]!r} is not black-white")
            self.colors = colors

    # labelled views -------------------------------------------------------

    def _lab(self, orbits):
        return [[self.labels[k] for k in orbit] for orbit in orbits]

    def nodes(self) -> list[list]:
        return self._lab(self.node_orbits)

    def edges(self) -> list[list]:
        return self._lab(self.edge_orbits)

    def faces(self) -> list[list]:
        return self._lab(self.face_orbits)

    def nu_map(self) -> dict:
        return {self.labels[k]: self.labels[v] for k, v in enumerate(self.nu)}

    def eps_map(self) -> dict:
        return {self.labels[k]: self.labels[v] for k, v in enumerate(self.eps)}

    def coloring(self) -> dict | None:
        if self.colors is None:
            return None
        return {self.labels[k]: c for k, c in enumerate(self.colors)}

    def components(self) -> int:
        parent = list(range(len(self.labels)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for perm in (self.nu, self.eps):
            for k, v in enumerate(perm):
                parent[find(k)] = find(v)
        return len({find(k) for k in range(len(parent))})

    def __eq__(self, other):
        if not isinstance(other, RibbonGraph):
            return NotImplemented
        return (self.labels, self.nu, self.eps, self.colors) == (
            other.labels,
            other.nu,
            other.eps,
            other.colors,
        )

    def __repr__(self):
        return f"RibbonGraph(|H|={len(self.labels)}, nodes={len(self.node_orbits)}, faces={len(self.face_orbits)})"


def _sort_key(h):
    return (type(h).__name__, h) if not isinstance(h, tuple) else ("tuple", tuple(map(str, h)))


def ribbon_new(half_edges, nu, eps, coloring=None) -> RibbonGraph:
    return RibbonGraph(half_edges, nu, eps, coloring)


def ribbon_dual(g: RibbonGraph) -> RibbonGraph:
    """The dual ``(H, nu . eps, eps)``; nodes and faces trade places."""
    phi = {g.labels[k]: g.labels[v] for k, v in enumerate(g.phi)}
    return RibbonGraph(g.labels, phi, g.eps_map())


def invariants(g: RibbonGraph) -> SurfaceInvariants:
    """Node, edge and face counts with the Euler characteristic and genus.

    For a disconnected graph the genus is the sum over components.
    """
    v, e, f = len(g.node_orbits), len(g.edge_orbits), len(g.face_orbits)
    chi = v - e + f
    genus2 = 2 * g.components() - chi
    assert genus2 % 2 == 0 and genus2 >= 0
    return SurfaceInvariants(v, e, f, chi, genus2 // 2)


def twist(g: RibbonGraph) -> RibbonGraph:
    """Reverse the rotation at every white node; faces become zigzag walks."""
    if g.colors is None:
        raise NotBipartite("twist needs a black/white colouring")
    inv = [0] * len(g.nu)
    for k, v in enumerate(g.nu):
        inv[v] = k
    new_nu = {
        g.labels[k]: g.labels[g.nu[k] if g.colors[k] == BLACK else inv[k]]
        for k in range(len(g.labels))
    }
    return RibbonGraph(g.labels, new_nu, g.eps_map(), g.coloring())
