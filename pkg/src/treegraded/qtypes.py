"""Types of limit directions and finite universality witnesses.

A type records, along a geodesic leaving a point through the transversal tree,
where the geodesic crosses plane pieces and which orbit pair it uses in each.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from . import pieces
from .geom import phi, phi_inv, placement
from .numeric import Scalar, close, leq, lt
from .pieces import CanonicalPair, canonical_pairs_equal
from .treeprod import (
    CASE2,
    TREE_ALPHA,
    Alpha,
    Descriptor,
    Step,
    divergence,
)

TRIVIAL = "TRIVIAL"
NON_LIMIT = "NON_LIMIT"


class QTypeError(ValueError):
    pass


class RInsideInterval(QTypeError):
    pass


class TrivialInput(QTypeError):
    pass


class TreeSpec(QTypeError):
    pass


@dataclass(frozen=True)
class Interval:
    a: Scalar
    b: Scalar
    cpair: CanonicalPair


@dataclass(frozen=True)
class QType:
    total: Scalar
    intervals: Tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        check_type(self)


def check_type(t: QType) -> None:
    if not lt(0, t.total):
        raise QTypeError("type length must be positive")
    prev_b = 0
    for i, iv in enumerate(t.intervals):
        if i == 0 and not lt(0, iv.a):
            raise QTypeError("first interval must start after 0")
        if lt(iv.a, prev_b) or not lt(iv.a, iv.b) or lt(t.total, iv.b):
            raise QTypeError(f"interval {i} out of order or out of range")
        if iv.cpair.spec.is_tree:
            raise QTypeError("type intervals are labelled by plane pieces")
        if not close(iv.b - iv.a, iv.cpair.length):
            raise QTypeError(f"interval {i} length differs from its pair distance")
        prev_b = iv.b


def types_equal(t1: QType, t2: QType) -> bool:
    return (
        close(t1.total, t2.total)
        and len(t1.intervals) == len(t2.intervals)
        and all(_intervals_equal(a, b) for a, b in zip(t1.intervals, t2.intervals))
    )


def _intervals_equal(i: Interval, j: Interval) -> bool:
    return close(i.a, j.a) and close(i.b, j.b) and canonical_pairs_equal(i.cpair, j.cpair)


def type_of(f: Descriptor):
    """Type of the direction from the base to ``f``: ``TRIVIAL``, ``NON_LIMIT`` or a ``QType``."""
    if f.is_empty:
        return TRIVIAL
    if not f[0].alpha.is_tree:
        return NON_LIMIT
    intervals = []
    pos = 0
    for s in f.steps:
        end = pos + s.length
        if not s.alpha.is_tree:
            intervals.append(Interval(pos, end, pieces.canonical_pair(s.alpha.spec, s.entry, s.exit)))
        pos = end
    return QType(pos, tuple(intervals))


def initial_subtype(t: QType, r: Scalar):
    if not lt(0, r) or lt(t.total, r):
        raise QTypeError(f"cut {r} outside ]0, {t.total}]")
    kept = []
    for iv in t.intervals:
        if lt(iv.a, r) and lt(r, iv.b):
            raise RInsideInterval(f"cut {r} falls inside ]{iv.a}, {iv.b}[")
        if leq(iv.b, r):
            kept.append(iv)
    if not kept:
        return TRIVIAL
    return QType(r, tuple(kept))


def types_equivalent(t1, t2) -> bool:
    """Equal nontrivial initial subtypes; for finite types, equal first intervals."""
    for t in (t1, t2):
        if not isinstance(t, QType) or not t.intervals:
            raise TrivialInput("equivalence is defined for nontrivial types")
    return _intervals_equal(t1.intervals[0], t2.intervals[0])


def derive_label(salt: str, index: int) -> str:
    return f"{salt}:{index}"


def realize_type(at: Descriptor, t: QType, salt: str) -> Descriptor:
    """A point whose direction from ``at`` has type ``t``; distinct salts give
    distinct components."""
    steps = []
    pos = 0
    index = 0
    for iv in t.intervals:
        a, b = iv.a, iv.b
        if lt(pos, a):
            steps.append(Step(TREE_ALPHA, (), ((derive_label(salt, index), a - pos),)))
            index += 1
        alpha = Alpha(iv.cpair.spec, derive_label(salt, index))
        steps.append(Step(alpha, iv.cpair.first, iv.cpair.second))
        index += 1
        pos = b
    if lt(pos, t.total):
        steps.append(Step(TREE_ALPHA, (), ((derive_label(salt, index), t.total - pos),)))
    return phi_inv(at, Descriptor(tuple(steps)))


def distinct_components(at: Descriptor, t: QType, n: int, salt: str = "w") -> List[Descriptor]:
    if n < 1:
        raise ValueError("need at least one component")
    return [realize_type(at, t, f"{salt}{i}") for i in range(n)]


def distinct_pieces(at: Descriptor, spec: pieces.PieceSpec, n: int, salt: str = "p"):
    """``n`` distinct pieces of model ``spec`` attached at ``at`` by the base point,
    each with a one-step witness leaving ``at`` inside it."""
    if spec.is_tree:
        raise TreeSpec("pieces are witnessed for plane specs only")
    if n < 1:
        raise ValueError("need at least one piece")
    origin = pieces.base_point(spec)
    unit = (1,) + (0,) * (spec.dim - 1)
    out = []
    for i in range(n):
        alpha = Alpha(spec, derive_label(salt, i))
        witness = phi_inv(at, Descriptor((Step(alpha, origin, unit),)))
        out.append((placement(at, alpha, origin), witness))
    return out


def pairwise_case2(at: Descriptor, witnesses) -> bool:
    images = [phi(at, w) for w in witnesses]
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if divergence(images[i], images[j]).case != CASE2:
                return False
    return True
