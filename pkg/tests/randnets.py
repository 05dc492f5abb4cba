"""Seeded random designs for the engine invariant tests."""

from ludics.core import DAIMON, Base, PosNode, design_of_tree, make_neg, make_pos, pos
from ludics.library import ALPHA, SIGMA

RAMS = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]


def rand_pos(rng, avail, depth, width=2):
    if depth <= 0 or not avail or rng.random() < 0.25:
        return PosNode(DAIMON, ())
    a = rng.choice(avail)
    ram = rng.choice(RAMS[: 2**width])
    # sibling negative rules must continue on disjoint addresses
    share = {i: [] for i in ram}
    for x in avail:
        if x != a and ram:
            share[rng.choice(sorted(ram))].append(x)
    return make_pos(pos(a, ram), [rand_neg(rng, a.child(i), share[i], depth - 1, width) for i in sorted(ram)])


def rand_neg(rng, address, avail, depth, width=2):
    rams = RAMS[: 2**width]
    if rng.random() < 0.5:
        chosen = list(rams)
    else:
        chosen = rng.sample(rams, rng.randint(1, 2))
    branches = [(r, rand_pos(rng, avail + [address.child(i) for i in sorted(r)], depth, width)) for r in chosen]
    return make_neg(address, branches)


def positive(rng, at=SIGMA, depth=4):
    return design_of_tree(Base.positive(at), rand_pos(rng, [at], depth))


def negative(rng, at=SIGMA, right=(), depth=4):
    return design_of_tree(Base.negative(at, *right), rand_neg(rng, at, list(right), depth))


def chain(rng, depth=4):
    """A design on ⊢sigma, one on sigma⊢alpha and one on alpha⊢."""
    return positive(rng, SIGMA, depth), negative(rng, SIGMA, (ALPHA,), depth), negative(rng, ALPHA, (), depth)


def pair(rng, depth=4):
    return positive(rng, SIGMA, depth), negative(rng, SIGMA, (), depth)
