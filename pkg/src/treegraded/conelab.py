"""Finite-scale comparison of the word metric of Z^2 * Z with the tree product.

Group elements are alternating syllable sequences.  ``A(m, k)`` is the element
``a^m b^k`` of Z^2 and ``B(t)`` is ``t^t`` in the free factor Z.  With the
generating set ``{a, b, t}`` word length is additive over syllables, which is
what makes the comparison exact.
"""

from __future__ import annotations

import json
import math
import random
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from . import pieces
from .numeric import Scalar, is_exact
from .treeprod import Descriptor, Step, dist, equal, is_valid


class A(NamedTuple):
    m: int
    k: int


class B(NamedTuple):
    t: int


class UnsupportedSpec(ValueError):
    pass


class NonRationalCoordinate(ValueError):
    pass


class NotAligned(ValueError):
    """``q * n`` is not an integer for some coordinate ``q``."""


class RadiusTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    syllables: Tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "syllables", tuple(self.syllables))
        prev = None
        for s in self.syllables:
            if isinstance(s, A):
                if s.m == 0 and s.k == 0:
                    raise ValueError("zero syllable")
            elif isinstance(s, B):
                if s.t == 0:
                    raise ValueError("zero syllable")
            else:
                raise ValueError(f"not a syllable: {s!r}")
            if prev is not None and type(prev) is type(s):
                raise ValueError("syllables must alternate between factors")
            prev = s

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_multiply(self.syllables, other.syllables))

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(_inv(s) for s in reversed(self.syllables)))

    def __str__(self):
        if not self.syllables:
            return "1"
        return "·".join(f"A({s.m},{s.k})" if isinstance(s, A) else f"B({s.t})" for s in self.syllables)


IDENTITY = GroupElement()


def _inv(s):
    return A(-s.m, -s.k) if isinstance(s, A) else B(-s.t)


def _merge(x, y):
    if isinstance(x, A):
        r = A(x.m + y.m, x.k + y.k)
        return None if r.m == 0 and r.k == 0 else r
    r = B(x.t + y.t)
    return None if r.t == 0 else r


def _multiply(left: Sequence, right: Sequence) -> tuple:
    out = list(left)
    for s in right:
        if out and type(out[-1]) is type(s):
            merged = _merge(out.pop(), s)
            if merged is not None:
                out.append(merged)
        else:
            out.append(s)
    return tuple(out)


def element(*syllables) -> GroupElement:
    return GroupElement(_multiply((), [s for s in syllables if s != A(0, 0) and s != B(0)]))


_LETTERS = {
    "a": A(1, 0), "A": A(-1, 0),
    "b": A(0, 1), "B": A(0, -1),
    "t": B(1), "T": B(-1),
}
_TOKEN = re.compile(r"([abt])(⁻¹|\^?-1|⁻)?(?:\^?(-?\d+))?")


def parse_word(word) -> List:
    """Letters from ``"a t a⁻¹ b^3"``, ``"aTb"`` or an iterable of letter strings."""
    if not isinstance(word, str):
        return [_LETTERS[x] for x in word]
    word = word.translate(str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")).replace(" ", "")
    letters = []
    pos = 0
    while pos < len(word):
        ch = word[pos]
        if ch in "ABT":
            letters.append(_LETTERS[ch])
            pos += 1
            continue
        m = _TOKEN.match(word, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse word at {word[pos:]!r}")
        base = _LETTERS[m.group(1)]
        power = int(m.group(3)) if m.group(3) is not None else 1
        if m.group(2):
            power = -power
        unit = _inv(base) if power < 0 else base
        letters.extend([unit] * abs(power))
        pos = m.end()
    return letters


def normal_form(word) -> GroupElement:
    """Free-product reduction of a word in ``a, b, t`` and their inverses."""
    return GroupElement(_multiply((), parse_word(word)))


def word_length(g: GroupElement) -> int:
    return sum(abs(s.m) + abs(s.k) if isinstance(s, A) else abs(s.t) for s in g.syllables)


def group_dist(g: GroupElement, h: GroupElement) -> int:
    return word_length(g.inverse() * h)


# -- breadth-first oracle ----------------------------------------------------

GENERATORS = tuple(_LETTERS.values())


def bfs_oracle(radius: int) -> Dict[GroupElement, int]:
    """Exact distances from the identity in the Cayley graph, sphere by sphere."""
    if radius > 10:
        raise RadiusTooLarge(f"radius {radius} exceeds 10")
    seen = {(): 0}
    frontier = [()]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in GENERATORS:
                h = _multiply(g, (s,))
                if h not in seen:
                    seen[h] = r
                    nxt.append(h)
        frontier = nxt
    return {GroupElement(g): d for g, d in seen.items()}


def serialize_element(g: GroupElement) -> list:
    return [["a", s.m, s.k] if isinstance(s, A) else ["t", s.t] for s in g.syllables]


def parse_element(data) -> GroupElement:
    out = []
    for item in data:
        if item[0] == "a":
            out.append(A(int(item[1]), int(item[2])))
        elif item[0] == "t":
            out.append(B(int(item[1])))
        else:
            raise ValueError(f"unknown syllable {item!r}")
    return GroupElement(tuple(out))


def save_ball(ball: Dict[GroupElement, int], path) -> None:
    data = {json.dumps(serialize_element(g), separators=(",", ":")): d for g, d in ball.items()}
    with open(path, "w") as fh:
        json.dump(data, fh, sort_keys=True)


def load_ball(path) -> Dict[GroupElement, int]:
    with open(path) as fh:
        data = json.load(fh)
    return {parse_element(json.loads(k)): d for k, d in data.items()}


# -- compiler ----------------------------------------------------------------

@dataclass
class CompileRegistry:
    """Integer codes for piece attachments and tree branch labels.

    A separator code identifies the piece a step travels through: its model,
    copy and entry point.  Branch codes pick the conjugator ``A(j, j)`` of a
    tree label.  Codes start at 1 in order of first appearance.
    """

    separators: Dict[tuple, int] = field(default_factory=dict)
    branches: Dict[str, int] = field(default_factory=dict)
    frozen: bool = False

    def _code(self, table, key) -> int:
        if key not in table:
            if self.frozen:
                raise KeyError(f"{key!r} not registered")
            table[key] = len(table) + 1
        return table[key]

    def separator(self, step: Step) -> int:
        return self._code(self.separators, (step.alpha, _key_point(step.entry)))

    def branch(self, label: str) -> int:
        return self._code(self.branches, label)

    def register(self, f: Descriptor) -> None:
        for s in f.steps:
            self.separator(s)
            if s.alpha.is_tree:
                for word in (s.entry, s.exit):
                    for label, _ in word:
                        self.branch(label)

    @classmethod
    def build(cls, descriptors: Iterable[Descriptor]) -> "CompileRegistry":
        reg = cls()
        for f in descriptors:
            reg.register(f)
        reg.frozen = True
        return reg


def _key_point(p) -> tuple:
    return tuple((x[0], Fraction(x[1])) if isinstance(x, tuple) else Fraction(x) for x in p)


def _scaled(q: Scalar, n: int, strict: bool) -> int:
    if not is_exact(q):
        if isinstance(q, float) and q.is_integer():
            q = int(q)
        else:
            raise NonRationalCoordinate(f"coordinate {q!r} is not rational")
    v = Fraction(q) * n
    if v.denominator != 1:
        if strict:
            raise NotAligned(f"{q} * {n} is not an integer")
        warnings.warn(f"rounding {q} * {n}", stacklevel=3)
        return round(v)
    return v.numerator


def _conjugator(j: int) -> GroupElement:
    return GroupElement((A(j, j),))


def _tree_element(word, n: int, reg: CompileRegistry, strict: bool) -> GroupElement:
    g = IDENTITY
    for label, length in word:
        u = _conjugator(reg.branch(label))
        power = _scaled(length, n, strict)
        if power:
            g = g * u * GroupElement((B(power),)) * u.inverse()
    return g


def compile_descriptor(f: Descriptor, n: int, reg: CompileRegistry, strict: bool = True) -> GroupElement:
    """Group element reached by following ``f`` at scale ``n``.

    Each step is preceded by the separator ``B(code)`` of its piece.  A plane
    step moves by ``n * (exit - entry)`` in Z^2; a tree step moves from the
    image of its entry word to the image of its exit word, where a letter
    ``(label, len)`` maps to ``U t^(n len) U^-1`` with ``U = A(j, j)``.
    """
    if n < 1:
        raise ValueError("scale must be a positive integer")
    g = IDENTITY
    for s in f.steps:
        spec = s.alpha.spec
        if not (spec.is_tree or (spec.model == "plane" and spec.dim == 2 and spec.norm == "L1")):
            raise UnsupportedSpec(str(spec))
        g = g * GroupElement((B(reg.separator(s)),))
        if spec.is_tree:
            move = _tree_element(s.entry, n, reg, strict).inverse() * _tree_element(s.exit, n, reg, strict)
        else:
            dx = _scaled(s.exit[0] - s.entry[0], n, strict)
            dy = _scaled(s.exit[1] - s.entry[1], n, strict)
            move = element(A(dx, dy))
        g = g * move
    return g


def bound_constant(descriptors: Iterable[Descriptor], reg: CompileRegistry) -> int:
    """Separator codes plus ``2 |U_j|`` for every tree letter, over all steps."""
    c = 0
    for f in descriptors:
        for s in f.steps:
            c += reg.separator(s)
            if s.alpha.is_tree:
                for word in (s.entry, s.exit):
                    c += sum(4 * reg.branch(label) for label, _ in word)
    return c


def denominator_lcm(descriptors: Iterable[Descriptor]) -> int:
    out = 1
    for f in descriptors:
        for s in f.steps:
            for p in (s.entry, s.exit):
                for x in p:
                    q = Fraction(x[1]) if isinstance(x, tuple) else Fraction(x)
                    out = math.lcm(out, q.denominator)
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    pair_id: int
    n: int
    dist: int
    scaled: Fraction
    D: Fraction
    abs_error: Fraction
    bound_C: int

    @property
    def ok(self) -> bool:
        return self.abs_error * self.n <= self.bound_C


@dataclass
class ConvergenceReport:
    rows: List[ConvergenceRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def max_error_times_n(self) -> Fraction:
        return max((r.abs_error * r.n for r in self.rows), default=Fraction(0))

    def slopes(self) -> Dict[int, Optional[float]]:
        """Least-squares slope of log error against log n, per pair with nonzero error."""
        out: Dict[int, Optional[float]] = {}
        by_pair: Dict[int, List[ConvergenceRow]] = {}
        for r in self.rows:
            by_pair.setdefault(r.pair_id, []).append(r)
        for pid, rows in by_pair.items():
            pts = [(math.log(r.n), math.log(r.abs_error)) for r in rows if r.abs_error > 0]
            if len(pts) < 2:
                out[pid] = None
                continue
            mx = sum(x for x, _ in pts) / len(pts)
            my = sum(y for _, y in pts) / len(pts)
            sxx = sum((x - mx) ** 2 for x, _ in pts)
            out[pid] = sum((x - mx) * (y - my) for x, y in pts) / sxx
        return out


def converge_check(f: Descriptor, g: Descriptor, n_list: Sequence[int], pair_id: int = 0,
                   reg: Optional[CompileRegistry] = None, strict: bool = True) -> ConvergenceReport:
    if not n_list:
        raise ValueError("empty list of scales")
    if reg is None:
        reg = CompileRegistry.build([f, g])
    D = Fraction(dist(f, g))
    C = bound_constant([f, g], reg)
    rows = []
    for n in n_list:
        d = group_dist(compile_descriptor(f, n, reg, strict), compile_descriptor(g, n, reg, strict))
        scaled = Fraction(d, n)
        rows.append(ConvergenceRow(pair_id, n, d, scaled, D, abs(scaled - D), C))
    return ConvergenceReport(rows)


# -- corpus ------------------------------------------------------------------

def descriptor_corpus(seed: int, count: int, denominator: int = 4, align: int = 16) -> List[Tuple[Descriptor, Descriptor]]:
    """Seeded pairs over the L1 plane and the tree, sharing prefixes often enough
    to hit both metric cases.  Every coordinate denominator divides ``align``,
    so any scale that is a multiple of ``align`` compiles without rounding."""
    from .sampling import Sampler

    rng = random.Random(seed)
    sampler = Sampler(rng, specs=(pieces.L1_PLANE,), denominator=denominator)
    pairs = []
    while len(pairs) < count:
        f, g = sampler.pair()
        if not (is_valid(f) and is_valid(g)) or equal(f, g):
            continue
        if align % denominator_lcm([f, g]) == 0:
            pairs.append((f, g))
    return pairs
