import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from herdisc.core import BudgetExceeded, InvalidInput, SetSystem, restrict, union_tagged
from herdisc.disc import disc_exact, herdisc_exact
from herdisc.exactla import int_det
from herdisc.generators import (hoffman_tree, palvolgyi, palvolgyi_coloring,
                                palvolgyi_colorings_all, palvolgyi_size, random_system,
                                sylvester_hadamard, verify_mono_property)


def test_palvolgyi_base_cases():
    p = palvolgyi(1, 1)
    assert p.n == 1 and p.F1.sets == p.F2.sets == ((1,),)
    p = palvolgyi(1, 2)
    assert p.n == 2 and p.F1.sets == ((1,), (2,)) and p.F2.sets == ((1, 2),)
    p = palvolgyi(2, 1)
    assert p.F1.sets == ((1, 2),) and p.F2.sets == ((1,), (2,))


def test_palvolgyi_22_layout():
    p = palvolgyi(2, 2)
    assert p.n == 5
    assert p.F1.sets == ((1, 5), (2, 5), (3, 4))
    assert p.F2.sets == ((1, 2), (3, 5), (4, 5))


@pytest.mark.parametrize("k, l", [(1, 3), (2, 3), (3, 2), (3, 3), (2, 4)])
def test_palvolgyi_shape(k, l):
    p = palvolgyi(k, l)
    assert p.n == palvolgyi_size(k, l)
    assert {len(s) for s in p.F1.sets} == {k}
    assert {len(s) for s in p.F2.sets} == {l}


def test_palvolgyi_guards():
    with pytest.raises(InvalidInput):
        palvolgyi(0, 2)
    with pytest.raises(BudgetExceeded):
        palvolgyi(10, 10, max_n=1000)


def test_palvolgyi_22_discrepancies():
    p = palvolgyi(2, 2)
    assert herdisc_exact(p.F1).value == 1
    assert herdisc_exact(p.F2).value == 1
    assert disc_exact(p.union()).value == 2


def _sums_in_01(F, W, chi):
    pos = {v: c for v, c in zip(W, chi)}
    return all(sum(pos.get(v, 0) for v in s) in (0, 1) for s in F.sets)


@pytest.mark.parametrize("k, l", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_coloring_certifies_every_subset(k, l):
    p = palvolgyi(k, l)
    for size in range(p.n + 1):
        for W in itertools.combinations(range(1, p.n + 1), size):
            for fam, F in ((1, p.F1), (2, p.F2)):
                chi = palvolgyi_coloring(p, W, fam)
                assert set(chi) <= {1, -1} and len(chi) == len(W)
                assert _sums_in_01(F, W, chi)


def test_coloring_empty_and_full():
    p = palvolgyi(2, 2)
    assert palvolgyi_coloring(p, []) == ()
    chi = palvolgyi_coloring(p, range(1, 6))
    assert _sums_in_01(p.F1, range(1, 6), chi)
    with pytest.raises(InvalidInput):
        palvolgyi_coloring(p, [1], family=3)


@given(st.integers(0, 2**19 - 1))
@settings(max_examples=30)
def test_batch_colorings_agree_with_scalar(mask):
    p = palvolgyi(3, 3)
    table = _table33()
    W = [j + 1 for j in range(p.n) if (mask >> j) & 1]
    for fam in (1, 2):
        row = table[fam][mask]
        assert tuple(int(row[j - 1]) for j in W) == palvolgyi_coloring(p, W, fam)
        assert not row[[j for j in range(p.n) if not (mask >> j) & 1]].any()


_TABLES = {}


def _table33():
    if not _TABLES:
        p = palvolgyi(3, 3)
        _TABLES.update({f: palvolgyi_colorings_all(p, f) for f in (1, 2)})
    return _TABLES


def test_mono_property_examples():
    p = palvolgyi(2, 2)
    assert verify_mono_property(p.F1, p.F2) == (True, True)
    assert verify_mono_property(SetSystem(2, [[1], [2]]), SetSystem(2, [])) == (False, True)
    one = SetSystem(1, [[1]])
    assert verify_mono_property(one, one) == (True, True)
    # above max_n the answer comes from samples and is not certified
    assert verify_mono_property(p.F1, p.F2, max_n=3, samples=500) == (True, False)
    with pytest.raises(InvalidInput):
        verify_mono_property(one, SetSystem(2, []))


def test_mono_property_33():
    p = palvolgyi(3, 3)
    assert p.n == 19
    assert verify_mono_property(p.F1, p.F2) == (True, True)


def test_hoffman():
    F1, F2 = hoffman_tree(1)
    assert F1.sets == F2.sets == ((1,),)
    F1, F2 = hoffman_tree(2)
    assert F1.n == 6 and F1.m == 4 and F2.m == 3
    assert F1.sets == ((1, 3), (1, 4), (2, 5), (2, 6))
    assert F2.sets == ((1, 2), (3, 4), (5, 6))
    assert disc_exact(union_tagged([F1, F2])).value == 2
    F1, F2 = hoffman_tree(3)
    assert (F1.n, F1.m, F2.m) == (39, 27, 13)
    assert {len(s) for s in F1.sets} == {3}
    with pytest.raises(InvalidInput):
        hoffman_tree(0)


def test_sylvester():
    assert sylvester_hadamard(1).tolist() == [[1]]
    assert sylvester_hadamard(2).tolist() == [[1, 1], [1, -1]]
    H = sylvester_hadamard(8)
    assert (H @ H.T == 8 * np.eye(8)).all()
    assert abs(int_det(sylvester_hadamard(4))) == 16
    with pytest.raises(InvalidInput):
        sylvester_hadamard(6)


def test_random_system():
    assert random_system(4, 3, 0.0, seed=5).sets == ((), (), ())
    assert random_system(4, 3, 1.0, seed=5).sets == ((1, 2, 3, 4),) * 3
    F = random_system(6, 6, 0.5, seed=1)
    assert F == random_system(6, 6, 0.5, seed=1)
    assert F.sets == ((3, 5, 6), (2, 4), (1, 3, 4, 5, 6), (1, 2, 4, 5), (4, 5), (2,))
    with pytest.raises(InvalidInput):
        random_system(3, 3, 1.5, seed=0)


def test_restrictions_of_palvolgyi_have_small_disc():
    # sums in {0, 1} mean every restriction has discrepancy at most 1
    p = palvolgyi(2, 3)
    for W in itertools.combinations(range(1, p.n + 1), 5):
        assert disc_exact(restrict(p.F1, W)).value <= 1
