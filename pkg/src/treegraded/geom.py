"""Geometry of the tree product: isometries, geodesics, medians, directions.

Everything is computed by translating a point to the base with ``phi`` and
working on descriptors issued from the base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Tuple

from . import pieces
from .numeric import Scalar, lt
from .pieces import OutOfRange
from .treeprod import (
    CASE1,
    Alpha,
    Descriptor,
    InvalidDescriptor,
    Step,
    concat_normalized,
    divergence,
    equal,
    reverse,
    restrict_prefix,
    total_length,
    validate,
)

SAME = "SAME"
DIFFERENT = "DIFFERENT"
LIMIT = "LIMIT"
NON_LIMIT = "NON_LIMIT"


class CenterEqualsPoint(ValueError):
    pass


class SpecNotMapped(KeyError):
    pass


@dataclass(frozen=True)
class PiecePlacement:
    """The piece copy of ``alpha`` attached at ``prefix`` by its point ``entry``."""

    prefix: Descriptor
    alpha: Alpha
    entry: tuple

    def point(self, y) -> Descriptor:
        """The descriptor of the point with piece coordinate ``y``."""
        if pieces.points_equal(self.alpha.spec, y, self.entry):
            return self.prefix
        return self.prefix + Descriptor((Step(self.alpha, self.entry, y),))

    def contains(self, h: Descriptor) -> bool:
        image = phi(self.prefix, h)
        if image.is_empty:
            return True
        return (
            len(image) == 1
            and image[0].alpha == self.alpha
            and pieces.points_equal(self.alpha.spec, image[0].entry, self.entry)
        )


def placement(prefix: Descriptor, alpha: Alpha, entry) -> PiecePlacement:
    """Normalized placement: when ``prefix`` already ends inside the piece,
    re-attach at the start of its last step."""
    if prefix.steps:
        last = prefix[-1]
        if last.alpha == alpha and pieces.points_equal(alpha.spec, last.exit, entry):
            return PiecePlacement(prefix[:-1], alpha, last.entry)
    return PiecePlacement(prefix, alpha, entry)


def _checked(h: Descriptor) -> Descriptor:
    bad = validate(h)
    if bad is not None:
        raise InvalidDescriptor(bad)
    return h


def phi(f: Descriptor, g: Descriptor) -> Descriptor:
    """Image of ``g`` under the isometry that sends ``f`` to the base point."""
    dv = divergence(f, g)
    k = dv.k
    if dv.case == CASE1:
        middle = Descriptor((Step(dv.alpha, dv.y_f, dv.y_g),))
        return _checked(reverse(f[k + 1:]) + middle + g[k + 1:])
    return _checked(reverse(f[k:]) + g[k:])


def phi_inv(f: Descriptor, g: Descriptor) -> Descriptor:
    """Preimage of ``g`` under ``phi(f, .)``: walk to ``f``, then follow ``g``."""
    return concat_normalized(f, g)


def geodesic_point(f: Descriptor, g: Descriptor, t: Scalar, order: str = "forward") -> Descriptor:
    """Point at distance ``t`` from ``f`` on the canonical geodesic to ``g``."""
    image = phi(f, g)
    d = total_length(image)
    if lt(t, 0) or lt(d, t):
        raise OutOfRange(f"parameter {t} outside [0, {d}]")
    return phi_inv(f, restrict_prefix(image, t, order))


# -- medians -----------------------------------------------------------------

@dataclass(frozen=True)
class Median:
    point: Optional[Descriptor] = None
    placement: Optional[PiecePlacement] = None
    gates: Optional[Tuple[tuple, tuple, tuple]] = None

    @property
    def kind(self) -> str:
        return "point" if self.point is not None else "gates"

    def gate_points(self) -> Tuple[Descriptor, Descriptor, Descriptor]:
        if self.point is not None:
            return (self.point,) * 3
        return tuple(self.placement.point(y) for y in self.gates)


def median(f: Descriptor, g: Descriptor, h: Descriptor) -> Median:
    """Center of the geodesic triangle ``f g h``: a point, or three gates in one piece."""
    g1, h1 = phi(f, g), phi(f, h)
    dv = divergence(g1, h1)
    if dv.case != CASE1:
        return Median(point=phi_inv(f, g1[: dv.k]))
    moved = phi_inv(f, g1[: dv.k])
    pl = placement(moved, dv.alpha, dv.entry)
    return Median(placement=pl, gates=(dv.entry, dv.y_f, dv.y_g))


# -- directions at a point ---------------------------------------------------

def component_relation(center: Descriptor, g: Descriptor, h: Descriptor) -> str:
    """Whether ``g`` and ``h`` lie in the same component of the space minus ``center``."""
    if equal(center, g) or equal(center, h):
        raise CenterEqualsPoint("component relation needs points distinct from the center")
    return _relation_of_images(phi(center, g), phi(center, h))


def component_classes(center: Descriptor, points) -> List[int]:
    """Component labels for ``points`` around ``center``; equal labels mean SAME.

    Each point is moved to the base once, so this is much cheaper than calling
    :func:`component_relation` on every pair.
    """
    images = []
    for g in points:
        if equal(center, g):
            raise CenterEqualsPoint("component relation needs points distinct from the center")
        images.append(phi(center, g))
    labels: List[int] = []
    reps: List[Descriptor] = []
    for img in images:
        for label, rep in enumerate(reps):
            if _relation_of_images(img, rep) == SAME:
                labels.append(label)
                break
        else:
            labels.append(len(reps))
            reps.append(img)
    return labels


def _relation_of_images(g1: Descriptor, h1: Descriptor) -> str:
    dv = divergence(g1, h1)
    if dv.k > 0:
        return SAME
    if dv.case != CASE1:
        return DIFFERENT
    if not dv.alpha.is_tree:
        return SAME
    spec = dv.alpha.spec
    through = pieces.piece_dist(spec, dv.y_f, dv.entry) + pieces.piece_dist(spec, dv.entry, dv.y_g)
    return SAME if lt(pieces.piece_dist(spec, dv.y_f, dv.y_g), through) else DIFFERENT


def classify_direction(center: Descriptor, g: Descriptor):
    """``(NON_LIMIT, placement)`` when the direction starts inside a plane piece,
    ``(LIMIT, None)`` when it starts along the transversal tree."""
    if equal(center, g):
        raise CenterEqualsPoint("direction of the center itself")
    first = phi(center, g)[0]
    if first.alpha.is_tree:
        return LIMIT, None
    return NON_LIMIT, placement(center, first.alpha, first.entry)


# -- maps between tree products ---------------------------------------------

@dataclass(frozen=True)
class PieceMap:
    target: pieces.PieceSpec
    fn: Callable
    lipschitz: float


def identity_map(target: pieces.PieceSpec, lipschitz: float) -> PieceMap:
    return PieceMap(target, lambda p: p, lipschitz)


L1_TO_L2 = {pieces.L1_PLANE: identity_map(pieces.L2_PLANE, math.sqrt(2))}


def map_pieces(f: Descriptor, piece_map: Mapping[pieces.PieceSpec, PieceMap]) -> Descriptor:
    """Apply a piece-wise map to every step; unmapped trees are kept as they are."""
    out = []
    for s in f.steps:
        spec = s.alpha.spec
        if spec in piece_map:
            m = piece_map[spec]
            alpha = Alpha(m.target, None if m.target.is_tree else s.alpha.copy)
            out.append(Step(alpha, m.fn(s.entry), m.fn(s.exit)))
        elif spec.is_tree:
            out.append(s)
        else:
            raise SpecNotMapped(spec)
    return Descriptor(tuple(out))
