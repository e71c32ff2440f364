import random

from hypothesis import given

from conftest import L1, L2, sampler, seeds
from treegraded.numeric import Mode
from treegraded.treeprod import divergence, is_transversal_base, is_valid, CASE1


def test_same_seed_same_samples():
    a = [sampler(3).triple() for _ in range(5)]
    b = [sampler(3).triple() for _ in range(5)]
    assert a == b


@given(seeds)
def test_samples_are_valid(seed):
    sm = sampler(seed, specs=(L1, L2), mode=Mode.FLOAT)
    f, g, h = sm.triple()
    assert is_valid(f) and is_valid(g) and is_valid(h)
    assert is_transversal_base(sm.transversal())


def test_relatives_hit_both_cases_and_shared_prefixes():
    sm = sampler(11)
    cases = set()
    shared = 0
    for _ in range(400):
        f, g = sm.pair()
        dv = divergence(f, g)
        cases.add(dv.case)
        shared += dv.k > 0
    assert CASE1 in cases and len(cases) == 2
    assert shared > 40


def test_exact_mode_uses_small_rationals():
    sm = sampler(2)
    for _ in range(50):
        x = sm.scalar()
        assert x.denominator in (1, 2) and -2 <= x <= 2
    sm = sampler(2, mode=Mode.FLOAT)
    assert isinstance(sm.scalar(), float)
    assert random.Random(0).random() == random.Random(0).random()
