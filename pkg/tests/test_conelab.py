import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import desc, l1, l2, tree
from treegraded import conelab
from treegraded.conelab import A, B, IDENTITY, CompileRegistry, element, normal_form, word_length
from treegraded.treeprod import dist, is_valid, total_length


@pytest.fixture(scope="module")
def ball9():
    return conelab.bfs_oracle(9)


def bfs_distance(ball, x):
    """Word length of ``x`` from the radius-9 ball alone, exact up to 17.

    A geodesic word of length ``d`` in [8, 17] passes through the sphere of
    radius 8, and the remaining ``d - 8 <= 9`` letters stay inside the ball.
    """
    if x in ball:
        return ball[x]
    best = None
    for y, dy in ball.items():
        if dy != 8:
            continue
        rest = y.inverse() * x
        if rest in ball and (best is None or 8 + ball[rest] < best):
            best = 8 + ball[rest]
    return best


def stepwise_reduce(letters):
    """Free-product reduction by repeated local rewriting until nothing changes."""
    word = [("A", (s.m, s.k)) if isinstance(s, A) else ("B", s.t) for s in letters]
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            (fa, xa), (fb, xb) = word[i], word[i + 1]
            if fa == fb:
                merged = (xa[0] + xb[0], xa[1] + xb[1]) if fa == "A" else xa + xb
                word[i:i + 2] = [] if merged in ((0, 0), 0) else [(fa, merged)]
                changed = True
                break
    return tuple(A(*x) if f == "A" else B(x) for f, x in word)


letters = st.lists(st.sampled_from(list("abtABT")), max_size=30)


# -- normal forms and word length -----------------------------------------------

def test_normal_form_examples():
    assert normal_form("a t a⁻¹ a t⁻¹ b") == element(A(1, 1))
    assert normal_form("") == IDENTITY
    g = normal_form("a³ b⁻² t⁵ a")
    assert g.syllables == (A(3, -2), B(5), A(1, 0))
    assert word_length(g) == 11
    assert word_length(IDENTITY) == 0
    assert str(g) == "A(3,-2)·B(5)·A(1,0)"


def test_parse_word_forms_agree():
    assert normal_form("aTb") == normal_form(["a", "T", "b"]) == normal_form("a t^-1 b")
    with pytest.raises(ValueError):
        normal_form("a x")


@given(letters)
def test_normal_form_matches_stepwise_reduction(word):
    assert normal_form(word).syllables == stepwise_reduce(conelab.parse_word(word))


@given(letters, letters)
def test_group_operations(w1, w2):
    g, h = normal_form(w1), normal_form(w2)
    assert g * g.inverse() == IDENTITY
    assert (g * h).inverse() == h.inverse() * g.inverse()
    assert conelab.group_dist(g, h) == conelab.group_dist(h, g)
    assert word_length(g) <= len(w1)


def test_group_element_rejects_bad_syllables():
    with pytest.raises(ValueError):
        conelab.GroupElement((A(0, 0),))
    with pytest.raises(ValueError):
        conelab.GroupElement((A(1, 0), A(0, 1)))


def test_group_dist_examples(ball9):
    g = normal_form("a b t")
    assert conelab.group_dist(g, g) == 0
    for n in range(1, 6):
        assert conelab.group_dist(IDENTITY, element(A(n, n))) == 2 * n
        assert conelab.group_dist(element(A(n, n)), element(B(1), A(2 * n, 0))) == 4 * n + 1
    for n in range(1, 5):
        x = element(A(n, n)).inverse() * element(B(1), A(2 * n, 0))
        assert bfs_distance(ball9, x) == 4 * n + 1


# -- breadth-first oracle --------------------------------------------------------

def test_bfs_sphere_one_and_growth(ball9):
    sizes = [sum(1 for d in ball9.values() if d == r) for r in range(10)]
    assert sizes[0] == 1 and sizes[1] == 6
    cumulative = [sum(sizes[: r + 1]) for r in range(10)]
    assert all(a < b for a, b in zip(cumulative, cumulative[1:]))
    with pytest.raises(conelab.RadiusTooLarge):
        conelab.bfs_oracle(11)


def test_word_length_matches_bfs_on_radius_nine_ball(ball9):
    assert all(word_length(g) == d for g, d in ball9.items())


def test_ball_cache_round_trip(tmp_path):
    ball = conelab.bfs_oracle(3)
    path = tmp_path / "ball.json"
    conelab.save_ball(ball, path)
    assert conelab.load_ball(path) == ball


@given(letters)
def test_element_serialization_round_trip(word):
    g = normal_form(word)
    assert conelab.parse_element(conelab.serialize_element(g)) == g


# -- compiler ---------------------------------------------------------------------

def test_compile_examples():
    f = desc(l1("c0", (0, 0), (1, 1)))
    reg = CompileRegistry.build([f])
    assert str(conelab.compile_descriptor(f, 10, reg)) == "B(1)·A(10,10)"
    assert conelab.compile_descriptor(desc(), 7, reg) == IDENTITY
    t = desc(tree((), (("A", 2),)))
    reg = CompileRegistry.build([t])
    j = reg.branch("A")
    code = reg.separator(t[0])
    expected = element(B(code), A(j, j), B(10), A(-j, -j))
    assert conelab.compile_descriptor(t, 5, reg) == expected


def test_compile_errors():
    f = desc(l1("c0", (0, 0), (Fraction(1, 3), 1)))
    reg = CompileRegistry.build([f])
    with pytest.raises(conelab.NotAligned):
        conelab.compile_descriptor(f, 4, reg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = conelab.compile_descriptor(f, 4, reg, strict=False)
    assert caught and g == element(B(1), A(1, 4))
    with pytest.raises(conelab.UnsupportedSpec):
        conelab.compile_descriptor(desc(l2("c", (0, 0), (1, 1))), 4, CompileRegistry())
    with pytest.raises(ValueError):
        conelab.compile_descriptor(f, 0, reg)
    with pytest.raises(KeyError):
        conelab.compile_descriptor(desc(l1("new", (0, 0), (1, 1))), 4, reg)


def test_compile_is_deterministic():
    f = desc(tree((), (("A", 1), ("B", Fraction(1, 2)))), l1("c", (0, 0), (1, -1)))
    reg = CompileRegistry.build([f])
    assert conelab.compile_descriptor(f, 8, reg) == conelab.compile_descriptor(f, 8, reg)
    assert CompileRegistry.build([f]) == reg


# -- convergence ------------------------------------------------------------------

NS = [16, 64, 256, 1024, 4096]


def test_same_copy_pair_has_zero_error():
    f = desc(l1("c0", (0, 0), (1, 1)))
    g = desc(l1("c0", (0, 0), (2, 0)))
    rep = conelab.converge_check(f, g, NS)
    assert all(r.D == 2 and r.dist == 2 * r.n and r.abs_error == 0 for r in rep.rows)
    assert rep.ok


def test_distinct_copy_pair_costs_one_separator(ball9):
    f = desc(l1("c0", (0, 0), (1, 1)))
    g = desc(l1("c1", (0, 0), (2, 0)))
    rep = conelab.converge_check(f, g, NS)
    assert all(r.D == 4 and r.dist == 4 * r.n + 1 for r in rep.rows)
    assert rep.max_error_times_n == 1
    reg = CompileRegistry.build([f, g])
    x = conelab.compile_descriptor(f, 2, reg).inverse() * conelab.compile_descriptor(g, 2, reg)
    assert bfs_distance(ball9, x) == 4 * 2 + 1
    assert rep.slopes()[0] == pytest.approx(-1)


def test_tree_branching_pair():
    f = desc(tree((), (("A", 1),)))
    g = desc(tree((), (("B", 1),)))
    rep = conelab.converge_check(f, g, NS)
    assert dist(f, g) == 2
    excess = {r.dist - 2 * r.n for r in rep.rows}
    assert len(excess) == 1 and excess.pop() <= rep.rows[0].bound_C
    assert rep.ok


def test_converge_check_rejects_empty_scales():
    with pytest.raises(ValueError):
        conelab.converge_check(desc(), desc(), [])


def test_corpus_is_deterministic_and_valid():
    a = conelab.descriptor_corpus(7, 20)
    assert a == conelab.descriptor_corpus(7, 20)
    assert len(a) == 20
    assert all(is_valid(f) and is_valid(g) for f, g in a)
    assert all(16 % conelab.denominator_lcm([f, g]) == 0 for f, g in a)
    assert a != conelab.descriptor_corpus(8, 20)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_corpus_pairs_stay_within_bound(seed):
    for i, (f, g) in enumerate(conelab.descriptor_corpus(seed, 15)):
        rep = conelab.converge_check(f, g, [16, 48, 160], pair_id=i)
        assert rep.ok
        excess = {r.dist - r.n * r.D for r in rep.rows}
        assert len(excess) == 1


def test_distance_from_identity_grows_linearly():
    rng = random.Random(5)
    for f, _ in conelab.descriptor_corpus(rng.getrandbits(32), 10):
        reg = CompileRegistry.build([f])
        c = conelab.bound_constant([f], reg)
        for n in (16, 64, 256):
            d = word_length(conelab.compile_descriptor(f, n, reg))
            assert abs(d - n * total_length(f)) <= c
