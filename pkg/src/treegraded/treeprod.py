"""Finite descriptors of points of a tree product, and the metric between them.

A point is a finite sequence of steps.  Each step records which piece copy it
travels through (``Alpha``), where it enters and where it exits; its length is
the piece distance between the two.  The empty descriptor is the base point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import pieces
from .numeric import Scalar, format_scalar, leq, lt
from .pieces import TREE, EqualPoints, OutOfRange, PieceSpec

CASE1 = "CASE1"
CASE2 = "CASE2"


@dataclass(frozen=True, order=True)
class Alpha:
    """Identity of a piece model: a plane spec plus copy label, or the tree."""

    spec: PieceSpec
    copy: Optional[str] = None

    def __post_init__(self):
        if self.spec.is_tree and self.copy is not None:
            raise ValueError("the tree carries no copy label")
        if not self.spec.is_tree and self.copy is None:
            raise ValueError("plane pieces need a copy label")

    @property
    def is_tree(self) -> bool:
        return self.spec.is_tree

    def __str__(self):
        return "TREE" if self.is_tree else f"{self.spec}[{self.copy}]"


TREE_ALPHA = Alpha(TREE)


def piece(copy: str, spec: PieceSpec = pieces.L1_PLANE) -> Alpha:
    return Alpha(spec, copy)


def _fmt_point(p) -> str:
    parts = [f"{x[0]}:{format_scalar(x[1])}" if isinstance(x, tuple) else format_scalar(x) for x in p]
    return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class Step:
    alpha: Alpha
    entry: tuple
    exit: tuple
    length: Scalar = field(init=False, compare=False)

    def __post_init__(self):
        try:
            length = pieces.piece_dist(self.alpha.spec, self.entry, self.exit)
        except pieces.PieceError:
            length = None  # reported by validate()
        object.__setattr__(self, "length", length)

    def __str__(self):
        return f"{self.alpha}:{_fmt_point(self.entry)}->{_fmt_point(self.exit)}"

    def reversed(self) -> "Step":
        return Step(self.alpha, self.exit, self.entry)

    def same_as(self, other: "Step") -> bool:
        return (
            self.alpha == other.alpha
            and pieces.points_equal(self.alpha.spec, self.entry, other.entry)
            and pieces.points_equal(self.alpha.spec, self.exit, other.exit)
        )

    def enters_like(self, other: "Step") -> bool:
        """Same piece model and same entry point."""
        return self.alpha == other.alpha and pieces.points_equal(
            self.alpha.spec, self.entry, other.entry
        )

    def continues(self, previous: "Step") -> bool:
        """True when ``previous`` then ``self`` is a fake exit."""
        return self.alpha == previous.alpha and pieces.points_equal(
            self.alpha.spec, previous.exit, self.entry
        )


@dataclass(frozen=True)
class Descriptor:
    steps: tuple = ()

    def __post_init__(self):
        if not isinstance(self.steps, tuple):
            object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Descriptor(self.steps[item])
        return self.steps[item]

    def __add__(self, other: "Descriptor") -> "Descriptor":
        return Descriptor(self.steps + other.steps)

    @property
    def d(self) -> Scalar:
        return total_length(self)

    @property
    def breaks(self) -> list:
        out = [0]
        for s in self.steps:
            out.append(out[-1] + s.length)
        return out

    @property
    def is_empty(self) -> bool:
        return not self.steps

    def __str__(self):
        return "[" + "; ".join(str(s) for s in self.steps) + "]"


EMPTY = Descriptor()


def descriptor(*steps: Step) -> Descriptor:
    return Descriptor(tuple(steps))


def make_single_step(alpha: Alpha, x, y) -> Descriptor:
    """The one-step descriptor through ``alpha`` from ``x`` to ``y``."""
    pieces.check_point(alpha.spec, x)
    pieces.check_point(alpha.spec, y)
    if pieces.points_equal(alpha.spec, x, y):
        raise EqualPoints(f"single step needs distinct points, got {x!r} twice")
    return Descriptor((Step(alpha, x, y),))


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    index: int
    rule: str
    message: str

    def __str__(self):
        return f"{self.rule} violation at {self.index}: {self.message}"


def validate(f: Descriptor) -> Optional[Violation]:
    """Return the first violation of the descriptor rules, or ``None``.

    Rules: ``P1`` finite total length; ``P3`` every step joins two distinct
    valid points of its piece; ``P4`` no fake exit at a junction; ``P5`` no
    backtracking at a junction.  For ``P4``/``P5`` the index is the junction,
    i.e. the index of the second step.
    """
    steps = f.steps
    for i, s in enumerate(steps):
        if not isinstance(s, Step):
            return Violation(i, "P1", f"not a step: {s!r}")
        try:
            pieces.check_point(s.alpha.spec, s.entry)
            pieces.check_point(s.alpha.spec, s.exit)
        except pieces.PieceError as exc:
            return Violation(i, "P3", str(exc))
        if pieces.points_equal(s.alpha.spec, s.entry, s.exit) or not lt(0, s.length):
            return Violation(i, "P3", "entry equals exit")
    for i in range(1, len(steps)):
        prev, cur = steps[i - 1], steps[i]
        if cur.continues(prev):
            return Violation(i, "P4", f"{prev.alpha} exits at {prev.exit!r} and re-enters there")
        # reversal of the pair about the junction coinciding with itself
        if cur.same_as(prev.reversed()):
            return Violation(i, "P5", "step retraces its predecessor")
    return None


def is_valid(f: Descriptor) -> bool:
    return validate(f) is None


class InvalidDescriptor(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


def total_length(f: Descriptor) -> Scalar:
    return sum((s.length for s in f.steps), 0)


# -- divergence and metric ---------------------------------------------------

@dataclass(frozen=True)
class DivergenceResult:
    s: Scalar
    k: int  # number of shared steps
    case: str
    alpha: Optional[Alpha] = None
    entry: Optional[tuple] = None
    y_f: Optional[tuple] = None
    y_g: Optional[tuple] = None
    a_f: Optional[Scalar] = None
    a_g: Optional[Scalar] = None


def common_steps(f: Descriptor, g: Descriptor) -> int:
    k = 0
    for a, b in zip(f.steps, g.steps):
        if not a.same_as(b):
            break
        k += 1
    return k


def divergence(f: Descriptor, g: Descriptor) -> DivergenceResult:
    k = common_steps(f, g)
    s = total_length(f[:k])
    if k < len(f) and k < len(g) and f[k].enters_like(g[k]):
        sf, sg = f[k], g[k]
        return DivergenceResult(
            s, k, CASE1, sf.alpha, sf.entry, sf.exit, sg.exit, s + sf.length, s + sg.length
        )
    return DivergenceResult(s, k, CASE2)


def dist(f: Descriptor, g: Descriptor) -> Scalar:
    dv = divergence(f, g)
    df, dg = total_length(f), total_length(g)
    if dv.case == CASE1:
        inner = pieces.piece_dist(dv.alpha.spec, dv.y_f, dv.y_g)
        return df - dv.a_f + dg - dv.a_g + inner
    return df - dv.s + dg - dv.s


def equal(f: Descriptor, g: Descriptor) -> bool:
    return len(f) == len(g) and common_steps(f, g) == len(f)


# -- constructions -----------------------------------------------------------

def reverse(f: Descriptor) -> Descriptor:
    return Descriptor(tuple(s.reversed() for s in reversed(f.steps)))


def restrict_prefix(f: Descriptor, t: Scalar, order: str = "forward") -> Descriptor:
    """The point at distance ``t`` from the base along the canonical geodesic to ``f``."""
    d = total_length(f)
    if lt(t, 0) or lt(d, t):
        raise OutOfRange(f"prefix length {t} outside [0, {d}]")
    out = []
    pos = 0
    for s in f.steps:
        if leq(t, pos):
            break
        end = pos + s.length
        if leq(end, t):
            out.append(s)
            pos = end
            continue
        u = t - pos
        point = pieces.piece_geodesic_eval(s.alpha.spec, s.entry, s.exit, u, order)
        out.append(Step(s.alpha, s.entry, point))
        break
    return Descriptor(tuple(out))


def concat_raw(f: Descriptor, g: Descriptor) -> Descriptor:
    """Plain concatenation; raises ``InvalidDescriptor`` on a bad junction."""
    if f.steps and g.steps:
        junction = Descriptor((f.steps[-1], g.steps[0]))
        bad = validate(junction)
        if bad is not None:
            raise InvalidDescriptor(Violation(len(f), bad.rule, bad.message))
    return f + g


def try_concat_raw(f: Descriptor, g: Descriptor):
    """``concat_raw`` returning a ``Violation`` instead of raising."""
    try:
        return concat_raw(f, g)
    except InvalidDescriptor as exc:
        return exc.violation


def concat_normalized(f: Descriptor, g: Descriptor) -> Descriptor:
    """Endpoint of the path ``f`` followed by ``g``, with junction merges and cancellations."""
    left = list(f.steps)
    right = list(g.steps)
    while left and right and right[0].continues(left[-1]):
        a, b = left.pop(), right.pop(0)
        spec = a.alpha.spec
        if not pieces.points_equal(spec, a.entry, b.exit):
            left.append(Step(a.alpha, a.entry, b.exit))
            break
    return Descriptor(tuple(left + right))


def is_transversal_base(f: Descriptor) -> bool:
    return all(s.alpha.is_tree for s in f.steps)
