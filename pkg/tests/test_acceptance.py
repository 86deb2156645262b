"""Acceptance suite: eleven end-to-end checks, one PASS/FAIL line each.

Run under pytest (``pytest tests/test_acceptance.py -v``) or directly with
``python3 tests/test_acceptance.py`` for a compact report.
"""

import random
import sys
from collections import Counter
from fractions import Fraction

import pytest

from dimerlab.catalog import catalog_names, consistent_names, load, printed_kasteleyn
from dimerlab.dimer import NotConsistent, check_rcharge, galois_cover, is_consistent, rcharge, zigzag_polygon
from dimerlab.exactmath import LaurentPoly2, elementary_stats, laurent_det
from dimerlab.kasteleyn import brute_force_weights, count_matchings, hamiltonians, partition_polynomial
from dimerlab.matchings import boundary_counts, enumerate_matchings
from dimerlab.moves import isomorphic, mutate, transport_stability, transport_weights
from dimerlab.surface import invariants, twist
from dimerlab.toric import (
    NonGenericTheta,
    crosscheck_tropical_fan,
    is_generic,
    resolution_fan,
    stable_matchings,
    theta_from_weights,
)

CRITERIA = {}


def criterion(number, title):
    def register(fn):
        CRITERIA[number] = (title, fn)
        return fn

    return register


def rational(rng, lo=-50, hi=50, den=9):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def nonzero_rational(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 30), rng.randint(1, 9))


def random_theta(vertices, rng):
    th = {v: rational(rng, -30, 30, 6) for v in vertices}
    th[vertices[0]] -= sum(th.values())
    return th


def mutation_sites():
    for name in consistent_names():
        d = load(name)
        for v in d.vertices:
            if len(d.incoming(v)) == 2 and len(d.outgoing(v)) == 2:
                yield name, v


def mirror(d):
    return invariants(twist(d.graph))


# -- 1 -------------------------------------------------------------------------


@criterion(1, "spp invariants")
def spp_invariants():
    d = load("spp")
    homologies = Counter(z.homology for z in d.zigzag_paths())
    assert homologies == Counter({(1, 0): 1, (2, 1): 1, (-1, 0): 2, (-1, -1): 1}), homologies
    t = enumerate_matchings(d)
    assert zigzag_polygon(d) == t.polygon.normalized()
    assert elementary_stats(t.polygon) == (3, 5, 0)
    m = mirror(d)
    assert (m.genus, m.faces) == (0, 5), m
    assert t.count() == 6
    assert [1, 2, 1] in [c for _, c in boundary_counts(t)]


# -- 2 -------------------------------------------------------------------------

HEX8_PRINTED_DETERMINANT = LaurentPoly2(
    {(2, 0): -2, (1, 1): 3, (1, 0): -84, (0, 1): -128, (1, -1): 1, (0, 0): -264, (0, -1): -4, (-1, 0): -32}
)


@criterion(2, "hex8 printed Kasteleyn determinant")
def hex8_determinant():
    det = laurent_det(printed_kasteleyn("hex8"))
    assert elementary_stats(det.newton_polygon()) == (8, 6, 2)
    magnitudes = Counter(abs(c) for _, c in det.items())
    assert magnitudes == Counter([2, 3, 84, 128, 1, 264, 4, 32]), f"coefficient magnitudes {sorted(map(int, magnitudes.elements()))}"
    assert det in (HEX8_PRINTED_DETERMINANT, -HEX8_PRINTED_DETERMINANT), str(det)


# -- 3 -------------------------------------------------------------------------


def random_cover_basis(rng, max_det):
    while True:
        v = (rng.randint(-3, 3), rng.randint(-3, 3))
        w = (rng.randint(-3, 3), rng.randint(-3, 3))
        if 1 <= abs(v[0] * w[1] - v[1] * w[0]) <= max_det:
            return v, w


def check_polygon_theorem(d):
    t = enumerate_matchings(d)
    area, boundary, interior = elementary_stats(t.polygon)
    assert len(d.vertices) == area, (d.name, len(d.vertices), area)
    assert len(d.zigzag_paths()) == boundary
    m = mirror(d)
    assert m.faces == boundary
    assert m.genus == interior
    assert area == 2 * interior + boundary - 2


@criterion(3, "matching polygon versus dimer on covers")
def polygon_theorem():
    rng = random.Random(3)
    for name in consistent_names():
        d = load(name)
        check_polygon_theorem(d)
        # hex8 covers grow fast; degree two keeps enumeration at a few thousand matchings
        max_det = 2 if name == "hex8" else 3
        for _ in range(20):
            v, w = random_cover_basis(rng, max_det)
            cover = galois_cover(d, v, w)
            assert is_consistent(cover), (name, v, w)
            check_polygon_theorem(cover)


# -- 4 -------------------------------------------------------------------------


@criterion(4, "Kasteleyn determinant against brute force")
def kasteleyn_oracle():
    rng = random.Random(4)
    for name in catalog_names():
        d = load(name)
        t = enumerate_matchings(d)
        for _ in range(20):
            w = {a: nonzero_rational(rng) for a in d.arrows}
            brute = brute_force_weights(t, w)
            pp = partition_polynomial(d, w)
            assert {p: abs(c) for p, c in pp.poly.items()} == {p: abs(x) for p, x in brute.items() if x}, name
            pos = {a: abs(x) for a, x in w.items()}
            assert count_matchings(d, pos) == sum(brute_force_weights(t, pos).values()), name
    assert count_matchings(load("square8")) == 9
    assert count_matchings(load("spp")) == 6
    assert count_matchings(load("c3")) == 3


# -- 5 -------------------------------------------------------------------------


def interior_matchings(d):
    t = enumerate_matchings(d)
    return sum(len(ms) for p, ms in t.by_point.items() if t.polygon.locate(p) == "interior")


@criterion(5, "mutation suite")
def mutation_suite():
    spp = load("spp")
    assert isomorphic(mutate(spp, "2")[0], spp)
    f0 = load("f0")
    assert (interior_matchings(f0), interior_matchings(mutate(f0, "4")[0])) == (4, 5)
    sites = list(mutation_sites())
    assert len(sites) == 10
    for name, v in sites:
        d = load(name)
        m, _ = mutate(d, v)
        assert isomorphic(mutate(m, v)[0], d), (name, v)
        assert Counter(z.homology for z in m.zigzag_paths()) == Counter(z.homology for z in d.zigzag_paths())
        assert enumerate_matchings(m).polygon.normalized() == enumerate_matchings(d).polygon.normalized()


# -- 6 -------------------------------------------------------------------------


def normalized_hamiltonians(d, w, t):
    ox, oy = t.polygon.offset()
    out = {}
    for corner in t.polygon.vertices:
        h = hamiltonians(d, w, t.by_point[corner][0], t)
        out[(corner[0] - ox, corner[1] - oy)] = {(p[0] - ox, p[1] - oy): x for p, x in h.items()}
    return out


@criterion(6, "Hamiltonians invariant under mutation")
def hamiltonian_invariance():
    rng = random.Random(6)
    for name, v in mutation_sites():
        d = load(name)
        m, rec = mutate(d, v)
        t0, t1 = enumerate_matchings(d), enumerate_matchings(m)
        for _ in range(20):
            w = {a: Fraction(rng.randint(1, 30), rng.randint(1, 9)) for a in d.arrows}
            assert normalized_hamiltonians(d, w, t0) == normalized_hamiltonians(m, transport_weights(d, w, rec), t1), (name, v)


# -- 7 -------------------------------------------------------------------------


@criterion(7, "tropical subdivision equals resolution fan")
def tropical_crosscheck():
    rng = random.Random(7)
    for name in ("spp", "f0", "c3"):
        d = load(name)
        t = enumerate_matchings(d)
        done = 0
        while done < 50:
            m = {a: rational(rng) for a in d.arrows}
            if not is_generic(d, theta_from_weights(d, m)):
                continue
            report = crosscheck_tropical_fan(d, m, t)
            assert report, (name, report.tropical.cells, report.fan.cells)
            done += 1


# -- 8 -------------------------------------------------------------------------

SPP_CHAMBERS = [(-3, 2, 1), (-1, -2, 3), (1, -2, 1), (3, -1, -2), (2, 1, -3), (-1, 3, -2)]


@criterion(8, "spp stability chambers and walls")
def spp_walls():
    d = load("spp")
    t = enumerate_matchings(d)
    fans, midpoint = [], []
    mid = next(p for p, ms in t.by_point.items() if len(ms) == 2)
    for chamber in SPP_CHAMBERS:
        assert sum(chamber) == 0
        theta = dict(zip(("1", "2", "3"), map(Fraction, chamber)))
        fans.append(resolution_fan(d, theta, t).cell_set())
        midpoint.append(stable_matchings(d, theta, t)[mid].arrows)
    assert len(set(fans)) == 3
    # consecutive chambers around the origin of the (theta2, theta3) plane
    for k, (a, b) in enumerate(zip(SPP_CHAMBERS, SPP_CHAMBERS[1:] + SPP_CHAMBERS[:1])):
        crossed = [i for i in range(3) if (a[i] > 0) != (b[i] > 0)]
        assert len(crossed) == 1
        k2 = (k + 1) % len(SPP_CHAMBERS)
        if crossed == [0]:
            assert fans[k] == fans[k2]
            assert midpoint[k] != midpoint[k2]
        else:
            assert fans[k] != fans[k2]
    with pytest.raises(NonGenericTheta):
        resolution_fan(d, {"1": 0, "2": 1, "3": -1}, t)


# -- 9 -------------------------------------------------------------------------


@criterion(9, "R-charge feasibility")
def rcharge_feasibility():
    for name in consistent_names():
        d = load(name)
        assert check_rcharge(d, rcharge(d)) == [], name
    with pytest.raises(NotConsistent):
        rcharge(load("square3"))


# -- 10 ------------------------------------------------------------------------


@criterion(10, "c3 Galois cover of index 7")
def c3_cover():
    d = galois_cover(load("c3"), (1, 2), (3, -1))
    assert len(d.vertices) == 7
    assert d.euler == 0
    assert elementary_stats(enumerate_matchings(d).polygon)[0] == 7


# -- 11 ------------------------------------------------------------------------


@criterion(11, "stability transport inverse and fan compatibility")
def stability_transport():
    rng = random.Random(11)
    sites = list(mutation_sites())
    for k in range(100):
        name, v = sites[k % len(sites)]
        d = load(name)
        m, rec = mutate(d, v)
        _, back = mutate(m, v)
        th = random_theta(d.vertices, rng)
        assert transport_stability(transport_stability(th, rec), back) == th, (name, v)
    for name, v in sites:
        d = load(name)
        m, rec = mutate(d, v)
        t0, t1 = enumerate_matchings(d), enumerate_matchings(m)
        done = 0
        while done < 5:
            th = random_theta(d.vertices, rng)
            moved = transport_stability(th, rec)
            if not (is_generic(d, th) and is_generic(m, moved)):
                continue
            before = resolution_fan(d, th, t0).normalized()
            after = resolution_fan(m, moved, t1).normalized()
            assert before.same_cells(after), (name, v, th)
            done += 1


# -- runners -------------------------------------------------------------------


def run_criterion(number):
    """Run one check, returning (passed, failure text)."""
    _, fn = CRITERIA[number]
    try:
        fn()
    except AssertionError as exc:
        lines = str(exc).strip().splitlines()
        return False, lines[0] if lines else "assertion failed"
    return True, ""


def status_line(number, passed, why=""):
    title = CRITERIA[number][0]
    line = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}: {title}"
    return f"{line}  ({why})" if why else line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    passed, why = run_criterion(number)
    with capsys.disabled():
        print("\n" + status_line(number, passed, why))
    assert passed, why


def main() -> int:
    failed = 0
    for number in sorted(CRITERIA):
        passed, why = run_criterion(number)
        failed += not passed
        print(status_line(number, passed, why))
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
