import itertools

import pytest
from hypothesis import given, strategies as st

from herdisc.core import InvalidInput, SetSystem, coloring_discrepancy, restrict
from herdisc.disc import disc_bruteforce, disc_exact, herdisc_exact, herdisc_sampled
from herdisc.generators import hoffman_tree, palvolgyi, singletons, triangle

from conftest import set_systems


def herdisc_oracle(F):
    best = 0
    for size in range(1, F.n + 1):
        for J in itertools.combinations(range(1, F.n + 1), size):
            best = max(best, disc_bruteforce(restrict(F, J)))
    return best


def test_disc_examples(tri):
    assert disc_exact(SetSystem(2, [[1, 2]])).value == 0
    r = disc_exact(tri)
    assert r.value == 2 and coloring_discrepancy(tri, r.coloring) == 2
    assert disc_exact(palvolgyi(2, 2).union()).value == 2
    assert disc_exact(SetSystem(0, [])).value == 0
    assert disc_exact(SetSystem(3, [])).value == 0


@given(set_systems(max_n=7, max_m=6))
def test_disc_matches_bruteforce(F):
    r = disc_exact(F)
    assert r.certified
    assert r.value == disc_bruteforce(F)
    assert coloring_discrepancy(F, r.coloring) == r.value


@given(set_systems(max_n=6, max_m=5))
def test_disc_coloring_is_lexicographically_first(F):
    r = disc_exact(F)
    # +1 sorts before -1 in the search order
    first = next(chi for chi in itertools.product((1, -1), repeat=F.n)
                 if coloring_discrepancy(F, chi) == r.value)
    assert r.coloring == first


def test_disc_budget_flags_result():
    F = hoffman_tree(3)[0]
    r = disc_exact(F, budget=5)
    assert not r.certified
    assert coloring_discrepancy(F, r.coloring) == r.value
    with pytest.raises(InvalidInput):
        disc_exact(F, budget=0)


def test_herdisc_examples(tri):
    r = herdisc_exact(tri)
    assert (r.value, r.subset) == (2, (1, 2, 3))
    pair = palvolgyi(2, 2)
    assert herdisc_exact(pair.F1).value == 1
    assert herdisc_exact(pair.F2).value == 1
    assert herdisc_exact(SetSystem(4, [])).value == 0
    assert herdisc_exact(singletons(5)).value == 1


@given(set_systems(max_n=6, max_m=5))
def test_herdisc_matches_oracle(F):
    r = herdisc_exact(F)
    assert r.certified
    assert r.value == herdisc_oracle(F)
    if r.value:
        assert disc_exact(restrict(F, r.subset)).value == r.value


def test_herdisc_sampled(tri):
    for seed in range(5):
        r = herdisc_sampled(tri, samples=4, seed=seed)
        assert r.value >= 2 and not r.certified
    assert herdisc_sampled(SetSystem(3, []), 3).value == 0
    with pytest.raises(InvalidInput):
        herdisc_sampled(tri, 0)


@given(set_systems(max_n=6, max_m=5), st.integers(0, 2**32 - 1))
def test_herdisc_sampled_is_lower_bound(F, seed):
    assert herdisc_sampled(F, 5, seed).value <= herdisc_exact(F).value


def test_hoffman_disc():
    F1, F2 = hoffman_tree(2)
    from herdisc.core import union_tagged
    assert disc_exact(union_tagged([F1, F2])).value == 2
    assert disc_exact(triangle()).value == 2
