"""One test per acceptance criterion, at the stated bounds."""

import random
import time
from itertools import permutations, product

import pytest

from ludics.checker import check_principal
from ludics.core import DAIMON, Base, Design, dai, dumps, loads, relocate
from ludics.interaction import Failure, closed_pair, is_daimon, normalize, orthogonal
from ludics.lemmas import LEMMAS, check_lemma_suite
from ludics.library import (
    ALPHA,
    BETA,
    SIGMA,
    XI,
    cons,
    el2,
    f_sigma,
    list_decode,
    list_design,
    list_family,
    nat,
    nat_decode,
    nat_family,
    nat_span,
    pair_nat,
    pi_example_ep,
    predecessor,
    proj1,
    proj2,
    sigma_pair,
    su,
    sum_nat,
)
from ludics.paths import covering_path, design_of_paths, dual, shorten_designs

import randnets


def test_c1_successor_adds_exactly():
    t = time.perf_counter()
    for m in range(17):
        for n in range(17):
            out = normalize([nat(m), su(n)])
            assert dumps(out) == dumps(nat(m + n, BETA)), (m, n)
    assert time.perf_counter() - t < 5


def test_c2_predecessor():
    P = predecessor(16)
    zero = normalize([nat(0), P])
    assert is_daimon(zero) and zero == dai(Base.positive(ALPHA))
    for k in range(1, 17):
        assert normalize([nat(k), P]) == nat(k - 1, ALPHA), k


def test_c3_sum_of_pair_matches_successor():
    S = sum_nat()
    for n in range(13):
        for m in range(13):
            out = normalize([pair_nat(n, m), S])
            assert out == nat(n + m, ALPHA), (n, m)
            via_su = normalize([nat(m), su(n)])
            assert dumps(out) == dumps(relocate(via_su, BETA, ALPHA))
            assert nat_decode(out) == n + m


def test_c4_cons_and_el2():
    # entries go up to 8, so the copycats read lists of entries up to 8
    C = {b: cons(b, depth=8) for b in range(9)}
    E = el2(depth=8)
    seen = 0
    for length in range(6):
        for v in product(range(9), repeat=length):
            l = list_design(v)
            # every head value on short lists, one rotating head value on longer ones
            heads = range(9) if length <= 2 else [(sum(v) + length) % 9]
            for b in heads:
                assert list_decode(normalize([l, C[b]])) == (b,) + v, (b, v)
            assert list_decode(normalize([l, E])) == v[:1] + v[2:], v
            seen += 1
    assert seen == sum(9**k for k in range(6))


def test_c5_sigma_projections():
    p1, p2 = proj1(), proj2()
    for a in range(9):
        for b in range(9):
            A, B = nat(a, SIGMA.child(1, 1)), nat(b, SIGMA.child(2, 2))
            D = sigma_pair(A, B)
            assert normalize([D, p1]) == relocate(A, SIGMA.child(1, 1), ALPHA)
            assert normalize([D, p2]) == relocate(B, SIGMA.child(2, 2), ALPHA)


@pytest.mark.parametrize("p", [(3, 1, 4, 1, 5), (0, 2, 4, 6, 8), (7, 7, 1, 0, 2)])
def test_c6_list_reader(p):
    g = pi_example_ep(p)(5)
    for n in range(6):
        out = normalize([nat(n), g])
        assert list_decode(out) == p[:n]
        assert out == list_design(p[:n], XI)


def test_c7_orthogonality_family():
    for n in range(33):
        full = f_sigma(n + 1)
        assert orthogonal(nat(n), full)
        for k in range(n + 2):
            cut = f_sigma(n + 1, without=[k])
            gone = set(full.all_chronicles) - set(cut.all_chronicles)
            # exactly one daimon branch is missing
            assert sum(1 for c in gone if c[-1] == DAIMON) == 1
            witness = normalize([nat(k), cut])
            assert isinstance(witness, Failure) and witness.action.ramification == frozenset()
            assert closed_pair(nat(k).tree, cut.tree).action == witness.action
            others = [j for j in range(n + 2) if j != k]
            assert all(orthogonal(nat(j), cut) for j in others)


def test_c8_nat_principal_at_depth_5():
    t = time.perf_counter()
    rep = check_principal(nat_family(), depth=5, width=2)
    assert time.perf_counter() - t < 60
    assert rep.verdict == "equal" and rep.routes_agree
    assert set(rep.incarnation_at_depth) == set(rep.shortening) == shorten_designs(nat_span(5, SIGMA))
    assert rep.orthogonal_incarnation == [f_sigma(5)]


def test_c9_list_principal():
    t = time.perf_counter()
    for n in (0, 1, 2):
        rep = check_principal(list_family(n), depth=2, width=2)
        assert rep.verdict == "equal" and rep.routes_agree, n
        E = list_family(n)(2)
        chronicles = len(E[0].chronicles)
        assert chronicles == n + 1
        gs = []
        for beta in permutations(range(chronicles)):
            P = [dual(covering_path(L, beta)) for L in E]
            gs.append(design_of_paths(P, P[0].base[0]))
        # one design per permutation, each in the incarnation of the orthogonal
        assert len(set(gs)) == len(gs)
        assert set(gs) <= set(rep.orthogonal_incarnation)
        assert all(orthogonal(L, g) for L in E for g in gs)
    assert time.perf_counter() - t < 120


@pytest.fixture(scope="module")
def lemma_report():
    t = time.perf_counter()
    rep = check_lemma_suite()
    return rep, time.perf_counter() - t


def test_c10_lemma_suite(lemma_report):
    rep, elapsed = lemma_report
    assert [r.name for r in rep.results] == list(LEMMAS)
    failed = [r.line() for r in rep.results if not r.passed]
    assert not failed, failed
    assert all(r.checked > 0 for r in rep.results)
    assert elapsed < 600


def _same(a, b):
    if isinstance(a, Design) or isinstance(b, Design):
        return a == b
    return isinstance(a, Failure) and isinstance(b, Failure)


def test_c11_engine_invariants():
    rng = random.Random(2024)
    for _ in range(100):
        net = list(randnets.chain(rng) if rng.random() < 0.5 else randnets.pair(rng))
        t1, t2 = [], []
        o1 = normalize(net, trace=t1)
        o2 = normalize([loads(dumps(d)) for d in net], trace=t2)
        assert o1 == o2 and t1 == t2

    kinds = set()
    for _ in range(100):
        D, E, F = randnets.chain(rng)
        whole = normalize([D, E, F])
        de, ef = normalize([D, E]), normalize([E, F])
        left = normalize([de, F]) if isinstance(de, Design) else de
        right = normalize([D, ef]) if isinstance(ef, Design) else ef
        assert _same(left, whole) and _same(right, whole)
        kinds.add(type(whole).__name__)
    assert kinds == {"Design", "Failure"}

    votes = set()
    for _ in range(200):
        D, E = randnets.pair(rng)
        a, b = orthogonal(D, E), orthogonal(E, D)
        assert a == b == bool(closed_pair(D.tree, E.tree))
        votes.add(a)
    assert votes == {True, False}
