import copy
import random
from collections import Counter
from fractions import Fraction

import pytest

from dimerlab.catalog import C3, SPP, consistent_names, load
from dimerlab.dimer import (
    ArrowNotInOnePosOneNeg,
    BrokenCycle,
    DimerError,
    DisconnectedDimer,
    EulerNonzero,
    FaceHomologyNonzero,
    NotConsistent,
    SingularLattice,
    check_rcharge,
    dimer_new,
    galois_cover,
    is_consistent,
    rcharge,
    zigzag_paths,
    zigzag_polygon,
)
from dimerlab.exactmath import edge_lengths, elementary_stats
from dimerlab.matchings import enumerate_matchings
from dimerlab.moves import isomorphic


def broken(base, edit):
    s = copy.deepcopy(base)
    edit(s)
    return s


def test_spp_is_valid():
    d = load("spp")
    assert (len(d.vertices), len(d.arrows), len(d.pos_cycles), len(d.neg_cycles)) == (3, 7, 2, 2)
    assert d.euler == 0
    assert sorted(d.valency(v) for v in d.vertices) == [4, 4, 6]


@pytest.mark.parametrize(
    "edit, error",
    [
        (lambda s: s["arrows"][0].update(h=[1, 1]), FaceHomologyNonzero),
        (lambda s: s["faces"].update(negative=[["X", "Z", "Y"], ["X", "Z", "Y"]]), ArrowNotInOnePosOneNeg),
        (lambda s: s["faces"].update(negative=[["X", "Y", "Z"]]), EulerNonzero),
        (lambda s: s.update(vertices=["1", "2"]) or s["arrows"][0].update(head="2"), BrokenCycle),
        (lambda s: s["faces"].update(positive=[["X", "Y", "Q"]]), DimerError),
    ],
)
def test_validation_errors(edit, error):
    with pytest.raises(error):
        dimer_new(broken(C3, edit))


def test_disconnected_dimer_rejected():
    def edit(s):
        s["vertices"] = ["1", "2"]
        s["arrows"] += [{"id": a + "2", "tail": "2", "head": "2", "h": h} for a, h in [("X", [1, 0]), ("Y", [0, 1]), ("Z", [-1, -1])]]
        s["faces"] = {
            "positive": [["X", "Y", "Z"], ["X2", "Y2", "Z2"]],
            "negative": [["X", "Z", "Y"], ["X2", "Z2", "Y2"]],
        }

    with pytest.raises(DisconnectedDimer):
        dimer_new(broken(C3, edit))


def test_spp_zigzags():
    zs = zigzag_paths(load("spp"))
    assert Counter(z.homology for z in zs) == Counter({(1, 0): 1, (2, 1): 1, (-1, 0): 2, (-1, -1): 1})


@pytest.mark.parametrize("name", consistent_names() + ["square3"])
def test_zigzag_invariants(name):
    d = load(name)
    zs = zigzag_paths(d)
    total = (sum(z.homology[0] for z in zs), sum(z.homology[1] for z in zs))
    assert total == (0, 0)
    # every arrow is walked exactly twice
    assert Counter(a for z in zs for a in z.arrows) == Counter({a: 2 for a in d.arrows})


def test_c3_zigzags():
    zs = zigzag_paths(load("c3"))
    assert len(zs) == 3
    assert all(len(z.arrows) == 2 for z in zs)


@pytest.mark.parametrize("name", consistent_names())
def test_catalog_consistency(name):
    assert is_consistent(load(name))


def test_square3_inconsistent_with_certificate():
    rep = is_consistent(load("square3"))
    assert not rep
    assert rep.cycle is not None and len(rep.zigzags) == 2
    assert "direction" in rep.reason


def test_zigzag_polygons():
    assert elementary_stats(zigzag_polygon(load("spp"))) == (3, 5, 0)
    assert elementary_stats(zigzag_polygon(load("c3"))) == (1, 3, 0)
    sq3 = load("square3")
    assert elementary_stats(zigzag_polygon(sq3)) == (1, 3, 0)
    assert elementary_stats(enumerate_matchings(sq3).polygon) == (2, 4, 0)


@pytest.mark.parametrize("name", consistent_names())
def test_perimeter_counts_zigzags(name):
    d = load(name)
    assert sum(edge_lengths(zigzag_polygon(d))) == len(zigzag_paths(d))


@pytest.mark.parametrize("name", consistent_names())
def test_rcharge_equally_spaced(name):
    d = load(name)
    assert check_rcharge(d, rcharge(d)) == []


def test_rcharge_c3_thirds():
    assert set(rcharge(load("c3")).r.values()) == {Fraction(2, 3)}


def test_rcharge_spp_with_given_sleepers():
    d = load("spp")
    angle = {(1, 0): Fraction(-1, 4), (2, 1): Fraction(-1, 8), (-1, 0): Fraction(1, 4), (-1, -1): Fraction(1, 2)}
    sleepers = {k: angle[z.homology] for k, z in enumerate(d.zigzag_paths())}
    assert check_rcharge(d, rcharge(d, sleepers)) == []


def test_rcharge_needs_consistency():
    with pytest.raises(NotConsistent):
        rcharge(load("square3"))


def test_c3_cover_by_index_seven():
    c = galois_cover(load("c3"), (1, 2), (3, -1))
    assert len(c.vertices) == 7 and c.euler == 0
    assert elementary_stats(enumerate_matchings(c).polygon)[0] == 7


def test_identity_cover_is_isomorphic():
    d = load("spp")
    assert isomorphic(galois_cover(d, (1, 0), (0, 1)), d)


def test_spp_double_cover():
    c = galois_cover(load("spp"), (2, 0), (0, 1))
    assert (len(c.vertices), len(c.arrows)) == (6, 14)
    assert elementary_stats(enumerate_matchings(c).polygon)[0] == 6


def test_singular_cover_rejected():
    with pytest.raises(SingularLattice):
        galois_cover(load("c3"), (1, 2), (2, 4))


def random_lattice(rng, max_det):
    while True:
        v = (rng.randint(-3, 3), rng.randint(-3, 3))
        w = (rng.randint(-3, 3), rng.randint(-3, 3))
        det = abs(v[0] * w[1] - v[1] * w[0])
        if 1 <= det <= max_det:
            return v, w, det


@pytest.mark.parametrize("name", ["c3", "spp", "f0", "square8"])
def test_random_covers(name):
    rng = random.Random(name)
    d = load(name)
    for _ in range(8):
        v, w, det = random_lattice(rng, 3)
        c = galois_cover(d, v, w)
        assert len(c.vertices) == det * len(d.vertices)
        assert len(c.arrows) == det * len(d.arrows)
        assert len(c.pos_cycles) == det * len(d.pos_cycles)
        assert c.euler == 0
        assert is_consistent(c)
        assert check_rcharge(c, rcharge(c)) == []
