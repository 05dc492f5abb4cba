from itertools import combinations, permutations

import networkx as nx
import pytest

from ludics.core import DAIMON, Base, addr, dai, loads, neg, pos, prefixes
from ludics.library import SIGMA, XI, f_sigma, list_design, list_family, nat, nat_span
from ludics.paths import (
    Path,
    PathError,
    covering_path,
    covers,
    design_of_paths,
    dual,
    incarnation_pipeline,
    is_path,
    maximal_cliques,
    maximal_cliques_naive,
    paths_coherent,
    paths_of_design,
    shorten_designs,
    shorten_path,
    validate_path,
    view,
    visitable_paths,
    visitable_paths_naive,
)

ON_XI = Base.positive(XI)


def path(*actions, base=ON_XI):
    return Path.on(base, actions)


def test_view_of_single_action():
    k = pos("xi", {0})
    assert view(path(k)) == (k,)


def test_view_of_chronicle_is_itself():
    for c in nat(3).chronicles + list_design((1, 2)).chronicles:
        assert view(path(*c)) == c


def test_view_of_covering_prefix_is_last_chronicle():
    d = list_design((1, 2))
    p = covering_path(d)
    seen = 0
    for c in d.chronicles:
        end = max(i for i, a in enumerate(p.actions) if a == c[-1])
        assert view(Path(p.base, p.actions[: end + 1])) == c
        seen += 1
    assert seen == 3


def test_nat_chronicle_is_valid_path():
    for q in prefixes(nat(3).chronicles[0]):
        assert validate_path(path(*q, base=Base.positive(SIGMA))).ok


def test_unjustified_negative_is_invalid():
    p = Path.on(
        Base.negative(XI, SIGMA),
        [neg("xi", {0}), pos("xi.0", {1}), neg("sigma", {1}), DAIMON],
    )
    rep = validate_path(p)
    assert not rep.ok
    assert "sigma" in str(rep)


def test_empty_sequence_on_negative_base_is_a_path():
    assert is_path(path(base=Base.negative(XI)))
    assert validate_path(path()).conditions() == {"Totality"}


def test_dual_negative_ended():
    p = path(pos("xi", {1}), neg("xi.1", {0}))
    q = dual(p)
    assert q.actions == (neg("xi", {1}), pos("xi.1", {0}))
    assert q.base == (Base.negative(XI),)
    assert is_path(q)


def test_dual_of_positive_ended_gets_daimon_and_may_fail():
    p = Path.on(Base.positive(XI, SIGMA), [pos("xi", {0}), neg("xi.0", {1}), pos("sigma", {1})])
    q = dual(p)
    assert q.actions == (neg("xi", {0}), pos("xi.0", {1}), neg("sigma", {1}), DAIMON)
    assert not is_path(q)


def test_dual_of_nat_chronicles_are_chronicles():
    for n in range(8):
        for q in prefixes(nat(n).chronicles[0]):
            assert is_path(dual(path(*q, base=Base.positive(SIGMA))))


def test_dual_is_involutive_on_proper_paths():
    for q in prefixes(list_design((2, 0)).chronicles[1]):
        p = path(*q)
        assert dual(dual(p)).actions[: len(q)] == q


def test_path_coherence_reflexive():
    p = covering_path(list_design((1, 2)))
    assert paths_coherent(p, p)


def test_cohpath_example():
    a, b = list_design((1, 2)), list_design((1, 0))
    pa, pb = covering_path(a), covering_path(b)
    assert not paths_coherent(pa, pb)
    assert paths_coherent(dual(pa), dual(pb))


def test_difford_example():
    d = list_design((1, 2))
    p1, p2 = covering_path(d, [0, 1, 2]), covering_path(d, [1, 0, 2])
    assert p1 != p2
    k = next(i for i, (x, y) in enumerate(zip(p1.actions, p2.actions)) if x != y)
    assert p1.actions[k].negative and p2.actions[k].negative
    assert not paths_coherent(dual(p1), dual(p2))


def test_shortens_of_five_action_path():
    p = path(pos("xi", {1}), neg("xi.1", {0}), pos("xi.1.0", {3}), neg("xi.1.0.3", {2}), pos("xi.1.0.3.2", {}))
    got = {q.actions for q in shorten_path(p)}
    a = p.actions
    assert got == {a, (DAIMON,), a[:2] + (DAIMON,), a[:4] + (DAIMON,)}


def test_shortening_of_two_chronicle_design():
    d = loads("(base (right alpha))\n(+ alpha {1,3} (- alpha.1 ({0} (+ alpha.1.0 {}))) (- alpha.3 ({1} (+ alpha.3.1 {}))))")
    got = shorten_designs([d])
    assert len(got) == 5
    assert d in got and dai(d.base) in got
    both = loads("(base (right alpha))\n(+ alpha {1,3} (- alpha.1 ({0} #)) (- alpha.3 ({1} #)))")
    assert both in got


def test_shortening_of_daimon_is_itself():
    d = dai(ON_XI)
    assert shorten_designs([d]) == {d}


@pytest.mark.parametrize("n", range(6))
def test_paths_of_nat_are_chronicle_prefixes(n):
    c = nat(n).chronicles[0]
    want = {q for q in prefixes(c)}
    assert {p.actions for p in paths_of_design(nat(n))} == want
    assert {p.actions for p in paths_of_design(nat(n), positive_only=True)} == {q for q in want if q[-1].positive}


def test_paths_of_list_include_every_covering_order():
    d = list_design((1, 2))
    ps = paths_of_design(d)
    for order in permutations(range(3)):
        p = covering_path(d, order)
        assert p in ps and covers(p, d)


def test_paths_of_dai():
    assert {p.actions for p in paths_of_design(dai(ON_XI))} == {(DAIMON,)}


def test_covering_path_empty_list():
    assert covering_path(list_design(())).actions == (pos("xi", {}),)


def test_covering_path_identity_order():
    d = list_design((1, 2))
    p = covering_path(d)
    assert set(p.actions) == d.actions()
    assert len(p) == len(d.actions())
    assert p.actions[: len(d.chronicles[0])] == d.chronicles[0]


def test_covering_path_rejects_non_permutation():
    with pytest.raises(PathError):
        covering_path(list_design((1, 2)), [0, 0, 1])


def test_visitable_paths_of_dai():
    assert {p.actions for p in visitable_paths([dai(ON_XI)])} == {(DAIMON,)}


@pytest.mark.parametrize("E", [nat_span(3, SIGMA), list_family(1)(2), list_family(2)(1), [f_sigma(2)]])
def test_visitable_fast_matches_naive(E):
    assert visitable_paths(E) == visitable_paths_naive(E)


def test_visitable_of_list_is_all_its_paths():
    for n in range(3):
        for d in list_family(n)(1):
            assert visitable_paths([d]) == paths_of_design(d)


def _clique_oracle(Q):
    g = nx.Graph()
    g.add_nodes_from(Q)
    g.add_edges_from((a, b) for a, b in combinations(Q, 2) if paths_coherent(a, b))
    return {frozenset(c) for c in nx.find_cliques(g)}


@pytest.mark.parametrize("E", [nat_span(3, SIGMA), list_family(1)(1), list_family(1)(2)])
def test_maximal_cliques_against_independent_oracle(E):
    Q = {dual(p) for p in visitable_paths(E)}
    got = set(maximal_cliques(Q))
    assert got == _clique_oracle(Q)
    assert got == set(maximal_cliques_naive(Q))


@pytest.mark.parametrize("d", range(5))
def test_pipeline_nat_orthogonal_is_f_sigma_shortening(d):
    res = incarnation_pipeline(nat_span(d, SIGMA))
    assert res.orthogonal == shorten_designs([f_sigma(d)])
    assert res.bi_orthogonal == shorten_designs(nat_span(d, SIGMA))


def test_pipeline_core_mode_keeps_biorthogonal():
    E = nat_span(3, SIGMA)
    full, core = incarnation_pipeline(E), incarnation_pipeline(E, core=True)
    assert core.orthogonal == {f_sigma(3)}
    assert core.bi_orthogonal == full.bi_orthogonal


def test_pipeline_of_dai():
    d = dai(Base.positive(SIGMA))
    res = incarnation_pipeline([d])
    assert res.bi_orthogonal == {d}
    assert all(x.is_empty for x in res.orthogonal)


def g_beta(E, order):
    ps = [dual(covering_path(L, order)) for L in E]
    return design_of_paths(ps, ps[0].base[0])


@pytest.mark.parametrize("n", [1, 2])
def test_pipeline_list_orthogonal_contains_one_design_per_order(n):
    E = list_family(n)(1)
    res = incarnation_pipeline(E, core=True)
    orders = list(permutations(range(n + 1)))
    gs = {g_beta(E, o) for o in orders}
    assert len(gs) == len(orders)
    assert gs <= res.orthogonal


def test_pipeline_soundness_cross_checked_by_normalize():
    from ludics.interaction import orthogonal

    for E in (nat_span(3, SIGMA), list_family(1)(2)):
        res = incarnation_pipeline(E)
        for d in res.bi_orthogonal:
            assert all(orthogonal(d, f) for f in res.orthogonal)


def test_addresses_used_by_paths():
    p = covering_path(list_design((0,)))
    assert {a.address for a in p.actions} >= {XI, addr("xi.0"), addr("xi.1")}
