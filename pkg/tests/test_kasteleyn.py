import random
from fractions import Fraction

import pytest

from dimerlab.catalog import catalog_names, catalog_weights, load, printed_kasteleyn
from dimerlab.exactmath import LaurentPoly2, elementary_stats, laurent_det
from dimerlab.kasteleyn import (
    RefNotCorner,
    brute_force_weights,
    check_signs,
    count_matchings,
    hamiltonians,
    kasteleyn_matrix,
    partition_polynomial,
    solve_signs,
    unit_weights,
)
from dimerlab.matchings import INTERNAL, classify, enumerate_matchings


def random_weights(d, rng):
    return {a: Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)) for a in d.arrows}


@pytest.mark.parametrize("name", catalog_names())
def test_signs_solve_face_conditions(name):
    d = load(name)
    kappa = solve_signs(d)
    assert set(kappa.values()) <= {1, -1}
    assert check_signs(d, kappa)


def test_check_signs_detects_flip():
    d = load("spp")
    kappa = solve_signs(d)
    kappa["B"] = -kappa["B"]
    assert not check_signs(d, kappa)


@pytest.mark.parametrize("name", catalog_names())
def test_unit_weight_polynomial_counts(name):
    d = load(name)
    t = enumerate_matchings(d)
    pp = partition_polynomial(d)
    assert {p: abs(c) for p, c in pp.poly.items()} == {p: len(ms) for p, ms in t.by_point.items()}
    assert count_matchings(d) == t.count()


@pytest.mark.parametrize("name", catalog_names())
def test_weighted_polynomial_matches_brute_force(name):
    d = load(name)
    t = enumerate_matchings(d)
    rng = random.Random(name)
    for _ in range(5):
        w = random_weights(d, rng)
        brute = brute_force_weights(t, w)
        pp = partition_polynomial(d, w)
        assert {p: abs(c) for p, c in pp.poly.items()} == {p: abs(v) for p, v in brute.items() if v}
        assert count_matchings(d, {a: abs(x) for a, x in w.items()}) == sum(
            brute_force_weights(t, {a: abs(x) for a, x in w.items()}).values()
        )


@pytest.mark.parametrize("name", catalog_names())
def test_sign_pattern_is_a_parity_character(name):
    """Signs of the determinant's terms depend only on coordinate parities
    through a character of (Z/2)^2 times an overall sign."""
    pp = partition_polynomial(load(name))
    signs = pp.signs_by_point
    base = signs[(0, 0)]
    ok = False
    for sx in (1, -1):
        for sy in (1, -1):
            for sxy in (1, -1):
                if all(
                    s == base * sx ** (i % 2) * sy ** (j % 2) * sxy ** ((i * j) % 2)
                    for (i, j), s in signs.items()
                ):
                    ok = True
    assert ok


def test_matrix_shape():
    m = kasteleyn_matrix(load("hex8"))
    assert len(m) == 7 and all(len(r) == 7 for r in m)


def test_hex8_printed_matrix_determinant():
    det = laurent_det(printed_kasteleyn("hex8"))
    assert elementary_stats(det.newton_polygon()) == (8, 6, 2)
    # corners of the polygon carry products of weights, hence powers of two
    for p in det.newton_polygon().vertices:
        c = abs(det.coeff(*p))
        assert c.denominator == 1 and c.numerator & (c.numerator - 1) == 0


def test_hex8_own_matrix_agrees_with_printed_one():
    d = load("hex8")
    ours = partition_polynomial(d, catalog_weights("hex8")).poly
    printed = laurent_det(printed_kasteleyn("hex8"))
    # same coefficients up to a lattice translation and overall sign
    a = sorted(abs(c) for _, c in ours.items())
    b = sorted(abs(c) for _, c in printed.items())
    assert a == b
    assert elementary_stats(ours.newton_polygon()) == elementary_stats(printed.newton_polygon())


def test_hamiltonians_need_a_corner():
    d = load("square8")
    t = enumerate_matchings(d)
    inner = next(m for m in t.matchings if classify(t, m) == INTERNAL)
    with pytest.raises(RefNotCorner):
        hamiltonians(d, unit_weights(d), inner, t)


def test_hamiltonians_are_normalized_sums():
    d = load("spp")
    t = enumerate_matchings(d)
    ref = t.by_point[t.polygon.vertices[0]][0]
    w = {a: Fraction(k + 2) for k, a in enumerate(d.arrows)}
    h = hamiltonians(d, w, ref, t)
    assert h[ref.point] == 1
    assert sum(h.values()) == sum(m.weight(w) for m in t.matchings) / ref.weight(w)


def test_laurent_monomial_placement_matches_table():
    d = load("f0")
    t = enumerate_matchings(d)
    pp = partition_polynomial(d)
    assert set(pp.poly.support()) == set(t.by_point)
    assert pp.poly.coeff(0, 0) != 0 and isinstance(pp.poly, LaurentPoly2)
