import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ludics.core import chronicles_coherent, dumps, is_valid, loads
from ludics.interaction import normalize
from ludics.library import BETA, list_design, nat, su

import randnets

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_designs_are_valid(seed):
    rng = random.Random(seed)
    for d in randnets.pair(rng, depth=2):
        assert is_valid(d)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_serialization_round_trip(seed):
    rng = random.Random(seed)
    for d in randnets.chain(rng, depth=2):
        text = dumps(d)
        assert loads(text) == d
        assert dumps(loads(text)) == text


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_coherence_is_symmetric(seed):
    rng = random.Random(seed)
    pool = [c for d in randnets.pair(rng, depth=2) + randnets.pair(rng, depth=2) for c in d.all_chronicles]
    pool = [c for c in pool if c and c[0].address is not None]
    for _ in range(30):
        a, b = rng.choice(pool), rng.choice(pool)
        assert chronicles_coherent(a, b) == chronicles_coherent(b, a)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10), st.integers(0, 10))
def test_su_composes(m, n):
    once = normalize([nat(m), su(n)])
    assert once == nat(m + n, BETA)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=4))
def test_list_designs_are_valid(values):
    assert is_valid(list_design(values))
