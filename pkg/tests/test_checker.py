import json

import pytest

from ludics.core import DAIMON, Base, dai, loads, neg, relocate
from ludics.checker import (
    BehaviourApprox,
    NotInBehaviour,
    all_designs,
    check_principal,
    counter_base,
    enumerate_orthogonal,
    function_biorthogonal,
    function_members,
    incarnation_by_deletion,
    incarnation_of,
    is_material,
    material_orthogonals,
    search_route,
    sub_designs,
    visited,
)
from ludics.interaction import normalize
from ludics.library import BETA, SIGMA, f_sigma, id_for, is_nat, nat, nat_family, nat_span
from ludics.paths import incarnation_pipeline, shorten_designs

NONCAN = loads("(base (right sigma))\n(+ sigma {0,1} (- sigma.0 ({1} (+ sigma.0.1 {}))) (- sigma.1 ({1} (+ sigma.1.1 {}))))")
TWO = [
    loads("(base (right sigma))\n(+ sigma {0} (- sigma.0 ({0} (+ sigma.0.0 {}))))"),
    loads("(base (right sigma))\n(+ sigma {0} (- sigma.0 ({1} (+ sigma.0.1 {}))))"),
]


def test_counter_base():
    assert counter_base(Base.positive(SIGMA)) == Base.negative(SIGMA)
    assert counter_base(Base.negative(SIGMA)) == Base.positive(SIGMA)


def test_all_designs_sizes_are_stable():
    assert len(all_designs(Base.negative(SIGMA), 1, 2)) == 16
    assert len(all_designs(Base.negative(SIGMA), 2, 2)) == 720


def test_orthogonal_of_zero_has_the_empty_branch():
    got = enumerate_orthogonal([nat(0)], depth=2, width=2)
    want = [d for d in all_designs(Base.negative(SIGMA), 2, 2) if (neg(SIGMA), DAIMON) in d.chronicles]
    assert set(got) == set(want)
    assert len(got) == 360


def test_orthogonal_of_empty_set_is_everything():
    base = Base.negative(SIGMA)
    assert set(enumerate_orthogonal([], depth=2, width=2, base=base)) == set(all_designs(base, 2, 2))


def test_enumeration_monotone_in_depth():
    small = set(enumerate_orthogonal([nat(0)], depth=1, width=2))
    assert small <= set(enumerate_orthogonal([nat(0)], depth=2, width=2))


def test_material_orthogonals_of_nat_contain_f_sigma():
    got = enumerate_orthogonal(nat_span(4, SIGMA), width=2, mode="material")
    assert f_sigma(4) in got
    assert set(got) == shorten_designs([f_sigma(4)])


def test_material_search_matches_pipeline():
    for E in (nat_span(3, SIGMA), TWO):
        assert set(material_orthogonals(E, 2)) == incarnation_pipeline(E).orthogonal


def test_visited_part():
    v = visited(nat(2), f_sigma(5))
    assert v == nat(2)
    assert visited(nat(2), f_sigma(5, without=[2])) is None


@pytest.mark.parametrize("n", range(5))
def test_nat_is_material(n):
    B = BehaviourApprox(nat_span(4, SIGMA), width=2)
    assert incarnation_of(nat(n), B) == nat(n)
    assert is_material(nat(n), B)


def test_noncanonical_design_is_not_in_the_nat_behaviour():
    B = BehaviourApprox(nat_span(3, SIGMA), width=2)
    assert NONCAN not in B
    with pytest.raises(NotInBehaviour):
        incarnation_of(NONCAN, B)


def test_daimon_incarnation_is_itself():
    d = dai(Base.positive(SIGMA))
    for gens in (nat_span(3, SIGMA), TWO):
        B = BehaviourApprox(gens, width=2)
        assert incarnation_of(d, B) == d == incarnation_by_deletion(d, B)


def test_incarnation_routes_agree():
    B = BehaviourApprox(TWO, width=2)
    big = loads("(base (right sigma))\n(+ sigma {0} (- sigma.0 ({0} (+ sigma.0.0 {})) ({1} (+ sigma.0.1 {}))))")
    assert incarnation_of(big, B) == incarnation_by_deletion(big, B) == loads("(base (right sigma))\n(+ sigma {0})")


def test_sub_designs_of_nat():
    subs = sub_designs(nat(2))
    assert len(subs) == 3
    assert all(s <= nat(2) for s in subs)


def test_principal_nat_small():
    rep = check_principal(nat_family(), depth=3, width=2)
    assert rep.verdict == "equal" and rep.routes_agree
    assert set(rep.incarnation_at_depth) == shorten_designs(nat_span(3, SIGMA))
    assert rep.orthogonal_incarnation == [f_sigma(3)]


def test_principal_gate_on_daimon():
    bad = loads("(base (right sigma))\n(+ sigma {0} (- sigma.0 ({1} #)))")
    rep = check_principal([nat(0), bad, nat(1)], depth=2)
    assert not rep.is_daimon_free
    assert rep.verdict == "not daimon-free"
    assert rep.counterexample == bad


def test_non_principal_pair():
    # the two designs part on negative actions; the biorthogonal only sees (+,sigma,{0})
    rep = check_principal(TWO, depth=2, width=2)
    assert rep.routes_agree
    assert rep.verdict == "counterexample"
    assert rep.counterexample == loads("(base (right sigma))\n(+ sigma {0})")
    assert len(rep.shortening) == 5


def test_search_route_full_and_core_agree_on_biorthogonal():
    E = nat_span(3, SIGMA)
    o_core, b_core = search_route(E, 2, core=True)
    o_full, b_full = search_route(E, 2, core=False)
    assert o_core < o_full and b_core == b_full


def test_report_json_schema():
    rep = check_principal(nat_family(), depth=2, width=2)
    data = json.loads(rep.to_json())
    keys = {
        "family", "depth", "width", "is_daimon_free", "generators", "orthogonal_incarnation",
        "incarnation_at_depth", "shortening", "pipeline", "routes_agree",
        "orthogonal_daimon_maximal_only", "verdict", "counterexample", "notes",
    }
    assert set(data) == keys
    assert data["verdict"] == "equal" and data["incarnation_at_depth"] == data["shortening"]
    assert "verified up to depth 2" in rep.text()


def test_function_members_of_nat_to_nat():
    A = nat_span(2, SIGMA)
    members = function_members(A, nat_span(2, BETA), SIGMA, BETA)
    assert members and all(m.daimon_free for m in members)
    for m in members:
        assert all(is_nat(relocate(normalize([a, m]), BETA, SIGMA)) for a in A)
    assert id_for(A, SIGMA, BETA) in members
    bi = function_biorthogonal(members, SIGMA, BETA)
    assert bi == shorten_designs(members)

