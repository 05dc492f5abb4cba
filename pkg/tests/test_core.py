import pytest

from ludics.core import (
    DAIMON,
    Address,
    Base,
    Design,
    NegRule,
    ParseError,
    PosNode,
    addr,
    chronicles_coherent,
    dai,
    design_of_tree,
    dumps,
    loads,
    neg,
    parse_address,
    pos,
    relocate,
    tree_view,
    validate_chronicles,
    validate_design,
)
from ludics.library import SIGMA, XI, nat

DES = """(base (right xi))
(+ xi {1,3}
  (- xi.3 ({0} (+ xi.3.0 {})))
  (- xi.1 ({0} (+ xi.1.0 {0})) ({1} (+ xi.1.1 {0}))))
"""


def des():
    return loads(DES)


def test_parse_address_with_base():
    assert parse_address("xi.1.0", ["xi"]) == Address("xi", (1, 0))


def test_parse_address_bare_symbol():
    assert parse_address("sigma") == Address("sigma", ())


def test_subaddress_relation():
    assert addr("xi.1.0").is_prefix_of(addr("xi.1.0.2.4"))
    assert not addr("xi.1.0.2.4").is_prefix_of(addr("xi.1.0"))
    assert addr("xi.1").disjoint(addr("xi.0.1"))


@pytest.mark.parametrize("text", ["1xi", "xi.01", "xi.-1", "xi..2", ""])
def test_parse_address_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_address(text)


def test_parse_address_unknown_base():
    with pytest.raises(ParseError):
        parse_address("tau.0", ["xi", "sigma"])


def test_address_round_trip():
    a = addr("gamma.0.12.3")
    assert parse_address(str(a)) == a


def test_coherence_reflexive():
    c = nat(3).chronicles[0]
    assert chronicles_coherent(c, c)


def test_coherence_fails_on_positive_divergence():
    w = (pos("xi", {0}), neg("xi.0", {0}))
    assert not chronicles_coherent(w + (pos("xi.0.0", {1}),), w + (pos("xi.0.0", {0}),))


def test_des_chronicles_pairwise_coherent():
    cs = des().chronicles
    assert len(cs) == 3
    for c1 in cs:
        for c2 in cs:
            assert chronicles_coherent(c1, c2)


def test_des_is_valid():
    assert validate_design(des()).ok


def test_empty_positive_design_violates_totality():
    rep = validate_design(Design(Base.positive(XI), ()))
    assert "Totality" in rep.conditions()


def test_incoherent_pair_violates_coherence():
    w = (pos("xi", {0}), neg("xi.0", {0}))
    c1 = w + (pos("xi.0.0", {1}),)
    c2 = w + (pos("xi.0.0", {0}),)
    chs = [c1[:1], w, c1, c2]
    rep = validate_chronicles(Base.positive(XI), chs)
    assert rep.conditions() == {"Coherence"}


def test_negative_maximal_chronicle_violates_positivity():
    c = (pos("xi", {0}), neg("xi.0", {0}))
    rep = validate_chronicles(Base.positive(XI), [c[:1], c])
    assert "Positivity" in rep.conditions()


def test_missing_prefix_violates_forest():
    c = (pos("xi", {0}), neg("xi.0", {}), pos("xi.0", {}))
    rep = validate_chronicles(Base.positive(XI), [c])
    assert "Forest" in rep.conditions()


def test_tree_view_groups_negative_rule():
    t = tree_view(des())
    assert isinstance(t, PosNode)
    rule = next(r for r in t.rules if r.address == addr("xi.1"))
    assert isinstance(rule, NegRule)
    assert sorted(tuple(sorted(r)) for r, _ in rule.branches) == [(0,), (1,)]


def test_dai_tree_is_single_leaf():
    d = dai(Base.positive(XI))
    assert d.chronicles == ((DAIMON,),)
    t = d.tree
    assert t.action == DAIMON and t.rules == ()


def test_tree_round_trip_des():
    d = des()
    assert design_of_tree(d.base, tree_view(d)) == d
    assert Design.of(d.base, d.chronicles).chronicles == d.chronicles


def test_dumps_loads_round_trip():
    d = des()
    assert loads(dumps(d)) == d
    assert dumps(loads(dumps(d))) == dumps(d)


def test_dumps_canonical_under_reordering():
    other = """(base (right xi))
(+ xi {1,3} (- xi.1 ({1} (+ xi.1.1 {0})) ({0} (+ xi.1.0 {0}))) (- xi.3 ({0} (+ xi.3.0 {}))))"""
    assert dumps(loads(other)) == dumps(des())


def test_loads_requires_sorted_ramifications():
    with pytest.raises(ParseError):
        loads("(base (right xi))\n(+ xi {3,1})")


def test_loads_rejects_invalid_design():
    with pytest.raises(Exception):
        loads("(base (right xi))\n(+ xi {0} (- xi.0 ({0} (+ xi.5 {}))))")


def test_loads_width_cap():
    with pytest.raises(Exception):
        loads("(base (right xi))\n(+ xi {7})", width=4)
    assert loads("(base (right xi))\n(+ xi {7})").chronicles == ((pos("xi", {7}),),)


def test_negative_base_design_round_trip():
    text = "(base (left alpha) (right beta))\n(- alpha ({0} (+ beta {})) ({} #))"
    d = loads(text)
    assert d.base == Base.negative("alpha", "beta")
    assert loads(dumps(d)) == d


def test_relocate_moves_every_address():
    d = relocate(nat(2), SIGMA, addr("gamma.0"))
    assert all(a.address.root == "gamma" for a in d.actions())
    assert relocate(d, addr("gamma.0"), SIGMA) == nat(2)


def test_design_order_is_subdesign():
    assert nat(1) != nat(2)
    short = Design.of(Base.positive(SIGMA), [nat(2).chronicles[0][:2] + (DAIMON,)])
    assert short.all_chronicles - nat(2).all_chronicles == {short.chronicles[0]}
    assert Design.of(Base.positive(SIGMA), [nat(2).chronicles[0][:1]]) <= nat(2)
