import random
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings, strategies as st

from treegraded import pieces
from treegraded.sampling import Sampler
from treegraded.treeprod import TREE_ALPHA, Alpha, Descriptor, Step

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

L1 = pieces.L1_PLANE
L2 = pieces.L2_PLANE
F = Fraction


def l1(copy, x, y):
    return Step(Alpha(L1, copy), tuple(x), tuple(y))


def l2(copy, x, y):
    return Step(Alpha(L2, copy), tuple(x), tuple(y))


def tree(x, y):
    return Step(TREE_ALPHA, tuple(x), tuple(y))


def desc(*steps):
    return Descriptor(tuple(steps))


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def sampler(seed, **kw):
    return Sampler(random.Random(seed), **kw)


@st.composite
def descriptors(draw, **kw):
    return sampler(draw(seeds), **kw).descriptor()


@st.composite
def pairs(draw, **kw):
    return sampler(draw(seeds), **kw).pair()


@st.composite
def triples(draw, **kw):
    return sampler(draw(seeds), **kw).triple()
