import itertools

import numpy as np
import pytest

from waringwidth.factorize import central_two_squares
from waringwidth.groups import SL_FP, GroupCtx, finite_group_elements
from waringwidth.oracle import (OracleBudgetError, conjugation_closed, inversion_closed, product_coverage,
                                product_mask, sl2_fp, word_image)
from waringwidth.wordlang import parse_word

W = parse_word
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def brute_image(p, w):
    """Pure-Python word image over tuples of SL_2(F_p) elements."""
    els = finite_group_elements(GroupCtx(SL_FP, 2, p))

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)

    def power(x, e):
        if e < 0:
            a, b, c, d = x
            x, e = (d, -b % p, -c % p, a), -e
        out = (1, 0, 0, 1)
        for _ in range(e):
            out = mul(out, x)
        return out

    image = set()
    for args in itertools.product(els, repeat=w.arity):
        v = (1, 0, 0, 1)
        for g, e in w.syllables:
            v = mul(v, power(args[g - 1], e))
        image.add(v)
    return image


def as_set(G, mask):
    return {tuple(int(v) for v in G.elements[i]) for i in np.nonzero(mask)[0]}


@pytest.mark.parametrize("p", PRIMES)
def test_group_order(p):
    G = sl2_fp(p)
    assert G.order == p * (p * p - 1)
    assert len(np.unique(G.codes(G.elements))) == G.order
    assert np.array_equal(G.positions(G.elements), np.arange(G.order))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_enumeration_matches_groups_module(p):
    G = sl2_fp(p)
    assert [tuple(map(int, e)) for e in G.elements] == finite_group_elements(GroupCtx(SL_FP, 2, p))


def test_rejects_bad_primes():
    with pytest.raises(ValueError):
        sl2_fp(9)
    with pytest.raises(OracleBudgetError):
        sl2_fp(37)


@pytest.mark.parametrize("p,word", [(3, "x1^2"), (5, "x1^3"), (5, "x1^2 x2^-1"), (3, "[x1,x2]"),
                                    (7, "x1^4"), (5, "x1^2 x2^2")])
def test_image_matches_brute_force(p, word):
    w = W(word)
    G = sl2_fp(p)
    assert as_set(G, word_image(p, w)) == brute_image(p, w)


def test_image_examples():
    G5 = sl2_fp(5)
    assert word_image(5, W("x1")).sum() == 120
    assert word_image(5, W("[x1,x2]")).all()
    G3 = sl2_fp(3)
    sq = word_image(3, W("x1^2"))
    assert 0 < sq.sum() < G3.order
    assert sq[G3.element(1, 0, 0, 1)] and sq[G3.element(2, 0, 0, 2)]
    assert conjugation_closed(G3, sq)
    # J_{-1}^2 = -I over F_3
    J = np.array([0, 1, 2, 0])
    assert np.array_equal(G3.mul(J, J), [2, 0, 0, 2])
    assert word_image(5, W("x1 x1^-1")).sum() == 1 == word_image(5, W("x1 x1^-1"))[G5.element(1, 0, 0, 1)]


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_power_images_closed(p, k):
    G = sl2_fp(p)
    S = word_image(p, W(f"x1^{k}"))
    assert conjugation_closed(G, S) and inversion_closed(G, S)


def test_closure_checks_detect_non_closed_sets():
    G = sl2_fp(5)
    S = np.zeros(G.order, dtype=bool)
    S[G.element(1, 1, 0, 1)] = True
    assert not conjugation_closed(G, S)
    assert not inversion_closed(G, S)


def test_product_mask_against_brute_force():
    p = 5
    G = sl2_fp(p)
    S1, S2 = word_image(p, W("x1^3")), word_image(p, W("x1^4"))
    prod = as_set(G, product_mask(G, S1, S2))
    A, B = as_set(G, S1), as_set(G, S2)
    brute = {tuple(int(v) for v in G.mul(np.array(a), np.array(b))) for a in A for b in B}
    assert prod == brute


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_two_squares_cover(p):
    rep = product_coverage(p, W("x1^2"), W("x1^2"))
    assert rep.coverage == "G" and rep.covered == rep.group_order
    assert rep.conjugation_closed and rep.uncovered == []


def test_identity_words_cover():
    assert product_coverage(7, W("x1"), W("x1")).coverage == "G"


def test_fourth_powers_minus_identity():
    assert product_coverage(17, W("x1^4"), W("x2^4")).minus_identity_covered
    rep = product_coverage(3, W("x1^4"), W("x1^4"))
    assert rep.coverage == "G\\Z" and not rep.minus_identity_covered and rep.identity_covered


@pytest.mark.parametrize("a,b", [(2, 3), (3, 4), (2, 4)])
def test_coverage_symmetric_for_powers(a, b):
    r1 = product_coverage(7, W(f"x1^{a}"), W(f"x1^{b}"))
    r2 = product_coverage(7, W(f"x1^{b}"), W(f"x1^{a}"))
    assert r1.covered == r2.covered and r1.coverage == r2.coverage


@pytest.mark.parametrize("p", [3, 5, 7, 13])
@pytest.mark.parametrize("r", [1, -1])
def test_exact_central_identity_lands_in_finite_product(p, r):
    G = sl2_fp(p)
    P, Q = central_two_squares(1, r)
    Pm, Qm = (np.array([int(x.as_fraction()) for row in M.rows for x in row]) % p for M in (P, Q))
    S = word_image(p, W("x1^2"))
    P2, Q2 = G.mul(Pm, Pm), G.mul(Qm, Qm)
    assert S[G.positions(P2)] and S[G.positions(Q2)]
    target = G.element(r % p, 0, 0, r % p)
    assert G.positions(G.mul(P2, Q2)) == target
    assert product_mask(G, S, S)[target]


def test_sample_mode_is_subset():
    G = sl2_fp(7)
    w = W("[x1,x2]")
    sample = word_image(7, w, mode="sample", samples=500, seed=1)
    full = word_image(7, w)
    assert not (sample & ~full).any()
    assert np.array_equal(sample, word_image(7, w, mode="sample", samples=500, seed=1))
    with pytest.raises(ValueError):
        word_image(7, w, mode="bogus")


def test_budget_errors():
    with pytest.raises(OracleBudgetError):
        word_image(5, W("[[x1,x2],x3]"))
    assert word_image(5, W("[[x1,x2],x3]"), mode="sample", samples=2000).any()


def test_threads_give_same_result():
    w = W("x1^2 x2^3")
    assert np.array_equal(word_image(13, w, threads=1), word_image(13, w, threads=4))


def test_report_dict():
    d = product_coverage(5, W("x1^2"), W("x1^2")).to_dict()
    assert d["p"] == 5 and d["group_order"] == 120 and d["coverage"] == "G"
    assert set(d["timing_s"]) == {"images", "product"}
