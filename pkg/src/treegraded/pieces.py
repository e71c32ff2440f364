"""Piece spaces: the model metric spaces that pieces of a tree product copy.

Two families are provided.  ``PLANE`` is R^n under the L1, L2 or L-infinity
norm.  ``TREE`` is the R-tree of reduced branch words, standing in for the
universal R-tree: a point is a tuple of ``(label, length)`` letters, read as a
path from the root that follows branch ``label`` for ``length`` units.

Plane points are tuples of scalars; tree points are tuples of letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .numeric import Scalar, close, is_exact, is_zero, leq, lt

Letter = Tuple[str, Scalar]
TreeWord = Tuple[Letter, ...]
PlanePoint = Tuple[Scalar, ...]

NORMS = ("L1", "L2", "Linf")
_NORM_ALIASES = {"L1": "L1", "L2": "L2", "Linf": "Linf", "L∞": "Linf", "LINF": "Linf"}


class PieceError(ValueError):
    pass


class DimensionMismatch(PieceError):
    pass


class InvalidTreeWord(PieceError):
    pass


class OutOfRange(PieceError):
    pass


class EqualPoints(PieceError):
    pass


@dataclass(frozen=True, order=True)
class PieceSpec:
    model: str
    dim: int = 0
    norm: str = ""

    def __post_init__(self):
        if self.model == "plane":
            if not isinstance(self.dim, int) or self.dim < 1:
                raise ValueError(f"plane dimension must be a positive integer, got {self.dim!r}")
            norm = _NORM_ALIASES.get(self.norm)
            if norm is None:
                raise ValueError(f"unknown norm {self.norm!r}")
            object.__setattr__(self, "norm", norm)
        elif self.model == "tree":
            if self.dim or self.norm:
                raise ValueError("tree spec takes no parameters")
        else:
            raise ValueError(f"unknown model {self.model!r}")

    @classmethod
    def plane(cls, dim: int = 2, norm: str = "L1") -> "PieceSpec":
        return cls("plane", dim, norm)

    @property
    def is_tree(self) -> bool:
        return self.model == "tree"

    @property
    def supports_exact(self) -> bool:
        return self.is_tree or self.norm != "L2"

    def __str__(self):
        if self.is_tree:
            return "TREE"
        return f"{self.norm}^{self.dim}"


TREE = PieceSpec("tree")
L1_PLANE = PieceSpec.plane(2, "L1")
L2_PLANE = PieceSpec.plane(2, "L2")


@dataclass(frozen=True)
class CanonicalPair:
    spec: PieceSpec
    first: tuple
    second: tuple

    @property
    def length(self) -> Scalar:
        return piece_dist(self.spec, self.first, self.second)


# -- tree words -------------------------------------------------------------

def reduce_word(letters: Sequence[Letter]) -> TreeWord:
    """Drop zero-length letters and merge adjacent letters with equal labels."""
    out: list = []
    for label, length in letters:
        if is_zero(length):
            continue
        if out and out[-1][0] == label:
            out[-1] = (label, out[-1][1] + length)
        else:
            out.append((label, length))
    return tuple(out)


def word_length(w: TreeWord) -> Scalar:
    return sum((length for _, length in w), 0)


def common_prefix_measure(x: TreeWord, y: TreeWord) -> Scalar:
    """Length of the shared initial segment of the root paths to ``x`` and ``y``."""
    total = 0
    for (lx, ax), (ly, ay) in zip(x, y):
        if lx != ly:
            break
        if close(ax, ay):
            total += ax
            continue
        total += min(ax, ay)
        break
    return total


def truncate(w: TreeWord, m: Scalar) -> TreeWord:
    """Point at distance ``m`` from the root along the path to ``w``."""
    out = []
    remaining = m
    for label, length in w:
        if leq(remaining, 0):
            break
        if leq(length, remaining):
            out.append((label, length))
            remaining -= length
        else:
            out.append((label, remaining))
            remaining = 0
    return reduce_word(out)


def _check_tree_word(w) -> None:
    if not isinstance(w, tuple):
        raise InvalidTreeWord(f"tree point must be a tuple of letters, got {type(w).__name__}")
    prev = None
    for letter in w:
        if not (isinstance(letter, tuple) and len(letter) == 2 and isinstance(letter[0], str)):
            raise InvalidTreeWord(f"malformed letter {letter!r}")
        label, length = letter
        if not lt(0, length):
            raise InvalidTreeWord(f"letter {letter!r} has non-positive length")
        if label == prev:
            raise InvalidTreeWord(f"adjacent letters share label {label!r}")
        prev = label


def check_point(spec: PieceSpec, x) -> None:
    if spec.is_tree:
        _check_tree_word(x)
    elif not isinstance(x, tuple) or len(x) != spec.dim:
        raise DimensionMismatch(f"expected a {spec.dim}-vector for {spec}, got {x!r}")


def points_equal(spec: PieceSpec, x, y) -> bool:
    if len(x) != len(y):
        return False
    if spec.is_tree:
        return all(lx == ly and close(ax, ay) for (lx, ax), (ly, ay) in zip(x, y))
    return all(close(a, b) for a, b in zip(x, y))


# -- metric ----------------------------------------------------------------

def piece_dist(spec: PieceSpec, x, y) -> Scalar:
    check_point(spec, x)
    check_point(spec, y)
    if spec.is_tree:
        return word_length(x) + word_length(y) - 2 * common_prefix_measure(x, y)
    diffs = [abs(a - b) for a, b in zip(x, y)]
    if spec.norm == "L1":
        return sum(diffs, 0)
    if spec.norm == "Linf":
        return max(diffs)
    return float(sum(float(d) ** 2 for d in diffs)) ** 0.5


def piece_geodesic_eval(spec: PieceSpec, x, y, u: Scalar, order: str = "forward"):
    """Point at distance ``u`` from ``x`` on the canonical geodesic to ``y``.

    ``order`` only matters for L1, whose geodesics are not unique: ``forward``
    moves coordinate 0 fully, then coordinate 1, and so on; ``reverse`` moves
    the last coordinate first.
    """
    d = piece_dist(spec, x, y)
    if lt(u, 0) or lt(d, u):
        raise OutOfRange(f"parameter {u} outside [0, {d}]")
    if is_zero(u):
        return x
    if close(u, d):
        return y
    if spec.is_tree:
        c = common_prefix_measure(x, y)
        back = word_length(x) - c
        if leq(u, back):
            return truncate(x, word_length(x) - u)
        return truncate(y, c + (u - back))
    if spec.norm == "L1":
        coords = list(x)
        idx = range(spec.dim) if order == "forward" else reversed(range(spec.dim))
        left = u
        for i in idx:
            step = y[i] - x[i]
            if leq(abs(step), left):
                coords[i] = y[i]
                left -= abs(step)
            else:
                coords[i] = x[i] + (left if step > 0 else -left)
                break
        return tuple(coords)
    # straight line is a geodesic for every norm
    if spec.norm == "L2" or not (is_exact(u) and is_exact(d)):
        ratio = float(u) / float(d)
        return tuple(float(a) + ratio * float(b - a) for a, b in zip(x, y))
    ratio = u / d
    return tuple(a + ratio * (b - a) for a, b in zip(x, y))


# -- orbits ------------------------------------------------------------------

def base_point(spec: PieceSpec):
    if spec.is_tree:
        return ()
    return (0,) * spec.dim


def canonical_pair(spec: PieceSpec, x, y) -> CanonicalPair:
    """Representative of the isometry orbit of ``(x, y)``."""
    if points_equal(spec, x, y):
        raise EqualPoints("canonical pair of equal points")
    r = piece_dist(spec, x, y)
    zero = base_point(spec)
    if spec.is_tree:
        return CanonicalPair(spec, zero, (("0", r),))
    if spec.norm == "L2":
        return CanonicalPair(spec, zero, (r,) + (0,) * (spec.dim - 1))
    diffs = sorted((abs(a - b) for a, b in zip(x, y)), reverse=True)
    return CanonicalPair(spec, zero, tuple(diffs))


def canonical_pairs_equal(p: CanonicalPair, q: CanonicalPair) -> bool:
    return (
        p.spec == q.spec
        and points_equal(p.spec, p.first, q.first)
        and points_equal(p.spec, p.second, q.second)
    )


def same_orbit(spec: PieceSpec, pair, other) -> bool:
    return canonical_pairs_equal(canonical_pair(spec, *pair), canonical_pair(spec, *other))
