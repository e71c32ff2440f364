"""Seeded random descriptors for property runs.

Points are drawn from a small rational grid and entries favour the base point,
so that independently drawn descriptors share pieces and prefixes often.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from . import pieces
from .numeric import Mode
from .pieces import PieceSpec
from .treeprod import TREE_ALPHA, Alpha, Descriptor, Step, restrict_prefix, total_length


class Sampler:
    def __init__(
        self,
        rng: random.Random,
        specs: Sequence[PieceSpec] = (pieces.L1_PLANE,),
        copies: Sequence[str] = ("c0", "c1"),
        labels: Sequence[str] = ("A", "B", "C"),
        denominator: int = 2,
        tree_weight: float = 0.35,
        max_steps: int = 4,
        mode: Mode = Mode.EXACT,
    ):
        self.rng = rng
        self.specs = tuple(specs)
        self.copies = tuple(copies)
        self.labels = tuple(labels)
        self.denominator = denominator
        self.tree_weight = tree_weight if specs else 1.0
        self.max_steps = max_steps
        self.mode = mode

    def scalar(self, lo: int = -2, hi: int = 2):
        q = Fraction(self.rng.randint(lo * self.denominator, hi * self.denominator), self.denominator)
        return float(q) if self.mode is Mode.FLOAT else q

    def positive(self, hi: int = 2):
        q = Fraction(self.rng.randint(1, hi * self.denominator), self.denominator)
        return float(q) if self.mode is Mode.FLOAT else q

    def plane_point(self, spec: PieceSpec):
        return tuple(self.scalar() for _ in range(spec.dim))

    def tree_word(self, max_letters: int = 2):
        out = []
        for _ in range(self.rng.randint(0, max_letters)):
            choices = [x for x in self.labels if not out or x != out[-1][0]]
            out.append((self.rng.choice(choices), self.positive()))
        return tuple(out)

    def point(self, alpha: Alpha):
        if alpha.is_tree:
            return self.tree_word()
        return self.plane_point(alpha.spec)

    def alpha(self) -> Alpha:
        if not self.specs or self.rng.random() < self.tree_weight:
            return TREE_ALPHA
        return Alpha(self.rng.choice(self.specs), self.rng.choice(self.copies))

    def entry(self, alpha: Alpha):
        if self.rng.random() < 0.6:
            return pieces.base_point(alpha.spec)
        return self.point(alpha)

    def step(self, previous=None, alpha=None, entry=None) -> Step:
        while True:
            a = alpha if alpha is not None else self.alpha()
            x = entry if entry is not None else self.entry(a)
            y = self.point(a)
            if pieces.points_equal(a.spec, x, y):
                continue
            s = Step(a, x, y)
            if previous is not None and s.continues(previous):
                if alpha is not None and entry is not None:
                    raise ValueError("forced step is a fake exit")
                continue
            return s

    def extend(self, f: Descriptor, n_steps: int) -> Descriptor:
        steps = list(f.steps)
        for _ in range(n_steps):
            steps.append(self.step(steps[-1] if steps else None))
        return Descriptor(tuple(steps))

    def descriptor(self, max_steps=None) -> Descriptor:
        n = self.rng.randint(0, self.max_steps if max_steps is None else max_steps)
        return self.extend(Descriptor(), n)

    def transversal(self, max_steps: int = 3) -> Descriptor:
        steps = []
        for _ in range(self.rng.randint(0, max_steps)):
            steps.append(self.step(steps[-1] if steps else None, alpha=TREE_ALPHA))
        return Descriptor(tuple(steps))

    def relative(self, f: Descriptor) -> Descriptor:
        """A descriptor related to ``f``: shared prefix, sibling step, geodesic point, or ``f``."""
        r = self.rng.random()
        k = self.rng.randint(0, len(f))
        prefix = f[:k]
        if r < 0.1:
            return f
        if r < 0.2:
            return self.descriptor()
        if r < 0.5 and k < len(f):
            # same piece and entry as f[k], different exit
            s = f[k]
            try:
                sib = self.step(prefix[-1] if k else None, alpha=s.alpha, entry=s.entry)
            except ValueError:
                sib = s
            return self.extend(prefix + Descriptor((sib,)), self.rng.randint(0, 2))
        if r < 0.65 and total_length(f) > 0:
            t = total_length(f) * Fraction(self.rng.randint(0, 8), 8)
            if self.mode is Mode.FLOAT:
                t = float(t)
            return restrict_prefix(f, t)
        return self.extend(prefix, self.rng.randint(0, 2))

    def pair(self):
        f = self.descriptor()
        return f, self.relative(f)

    def triple(self):
        f = self.descriptor()
        return f, self.relative(f), self.relative(f)
