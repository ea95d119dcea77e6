"""Reward scalars and reward structures.

Rewards are exact rationals.  A reward structure packages the carrier
predicate, the commutative monoid used to accumulate rewards, the total
order used to compare them, and the convex-combination operation used to
average them.  Three structures are provided:

* ``ADD_RATIONALS``  -- all rationals under addition (the default),
* ``NONNEG_ADD``     -- non-negative rationals under addition,
* ``MUL_POSITIVE``   -- strictly positive rationals under multiplication.

All three share the usual numeric order and the arithmetic convex
combination ``p*r + (1-p)*s``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

Reward = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class ConditionCUnavailable(Exception):
    """Raised when a structure has no verified witness procedure for the
    discrimination condition used by the purity decision."""


class RewardStructure:
    """A totally ordered commutative reward monoid with convex combination."""

    def __init__(
        self,
        name: str,
        zero: Fraction,
        add: Callable[[Fraction, Fraction], Fraction],
        contains: Callable[[Fraction], bool],
        condition_c: Callable[[Fraction, Fraction], tuple[Fraction, Fraction]] | None,
    ):
        self.name = name
        self.zero = zero
        self._add = add
        self._contains = contains
        self._condition_c = condition_c
        self._mixing: bool | None = None
        self._gathering: bool | None = None

    def __repr__(self) -> str:
        return f"RewardStructure({self.name})"

    def contains(self, r: Fraction) -> bool:
        return self._contains(r)

    def check_member(self, r: Fraction) -> Fraction:
        if not self._contains(r):
            raise ValueError(f"{r} is not a {self.name} reward")
        return r

    def add(self, r: Fraction, s: Fraction) -> Fraction:
        """Monoid operation (written + in terms; multiplication for MUL_POSITIVE)."""
        return self._add(self.check_member(r), self.check_member(s))

    def leq(self, r: Fraction, s: Fraction) -> bool:
        """The order is numeric for every built-in structure."""
        return self.check_member(r) <= self.check_member(s)

    def convex(self, p: Fraction, r: Fraction, s: Fraction) -> Fraction:
        """Barycentric combination r +_p s = p*r + (1-p)*s."""
        if not (ZERO <= p <= ONE):
            raise ValueError(f"convex weight {p} outside [0,1]")
        self.check_member(r)
        self.check_member(s)
        return p * r + (ONE - p) * s

    def big_convex(self, weighted: list[tuple[Fraction, Fraction]]) -> Fraction:
        """Finite barycentric sum of (probability, reward) pairs.  Weights
        must be positive and sum to 1."""
        total = sum(p for p, _ in weighted)
        if total != ONE or any(p <= ZERO for p, _ in weighted):
            raise ValueError("weights must be positive and sum to 1")
        return sum(p * self.check_member(r) for p, r in weighted)

    @property
    def mixing_verified(self) -> bool:
        """Cached seeded check of mixes_through_add; several decision
        procedures are only sound when it holds."""
        if self._mixing is None:
            self._mixing = self.mixes_through_add(random.Random(0))
        return self._mixing

    @property
    def gathering_verified(self) -> bool:
        """Cached seeded check of gathers_through_convex."""
        if self._gathering is None:
            self._gathering = self.gathers_through_convex(random.Random(0))
        return self._gathering

    def condition_c_witness(self, p: Fraction, s: Fraction) -> tuple[Fraction, Fraction]:
        """For weight p in (0,1) and a reward s < 0, return rewards (l, r)
        with l < r and s + (p*r + (1-p)*l) > l.

        Only ADD_RATIONALS carries a verified witness procedure; the other
        structures raise ConditionCUnavailable.
        """
        if not (ZERO < p < ONE):
            raise ValueError(f"weight {p} must lie strictly between 0 and 1")
        if self._condition_c is None:
            raise ConditionCUnavailable(
                f"no discrimination witness available for structure {self.name}"
            )
        if not (self._contains(s) and s < ZERO):
            raise ValueError(f"witness requires a negative reward, got {s}")
        return self._condition_c(p, s)

    def gathers_through_convex(self, rng: random.Random, trials: int = 1000) -> bool:
        """Check by random trial that averaging two rewards attached to the
        same point can be done before or after accumulation:

            (r+x) +_p (s+x)  ==  (r +_p s) + x

        Holds for every built-in structure.
        """
        pool = [q for q in _SAMPLE_POOL if self._contains(q)]
        probs = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(3, 4)]
        for _ in range(trials):
            r, s, x = (rng.choice(pool) for _ in range(3))
            p = rng.choice(probs)
            lhs = self.convex(p, self.add(r, x), self.add(s, x))
            rhs = self.add(self.convex(p, r, s), x)
            if lhs != rhs:
                return False
        return True

    def mixes_through_add(self, rng: random.Random, trials: int = 1000) -> bool:
        """Check by random trial whether convex combination commutes with the
        monoid in both arguments at once:

            (r+x) +_p (s+y)  ==  ((r +_p s) + x) +_p ((r +_p s) + y)

        True for additive structures, false for the multiplicative one; the
        law gates the monads that pool rewards across branches.
        """
        pool = [q for q in _SAMPLE_POOL if self._contains(q)]
        probs = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(3, 4), Fraction(1, 7)]
        for _ in range(trials):
            r, s, x, y = (rng.choice(pool) for _ in range(4))
            p = rng.choice(probs)
            m = self.convex(p, r, s)
            lhs = self.convex(p, self.add(r, x), self.add(s, y))
            rhs = self.convex(p, self.add(m, x), self.add(m, y))
            if lhs != rhs:
                return False
        return True


def _add_witness(p: Fraction, s: Fraction) -> tuple[Fraction, Fraction]:
    # With l = 0 the requirement becomes s + p*r > 0; r = (1-s)/p gives
    # s + p*r = 1 > 0, and r > 0 = l since s < 0.
    return (ZERO, (ONE - s) / p)


_SAMPLE_POOL = [Fraction(n) for n in range(-3, 4)] + [
    Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 3),
]

ADD_RATIONALS = RewardStructure(
    "AddRationals",
    zero=ZERO,
    add=lambda r, s: r + s,
    contains=lambda r: True,
    condition_c=_add_witness,
)

NONNEG_ADD = RewardStructure(
    "NonNegAdd",
    zero=ZERO,
    add=lambda r, s: r + s,
    contains=lambda r: r >= ZERO,
    condition_c=None,
)

MUL_POSITIVE = RewardStructure(
    "MulPositiveRationals",
    zero=ONE,
    add=lambda r, s: r * s,
    contains=lambda r: r > ZERO,
    condition_c=None,
)

STRUCTURES = {s.name: s for s in (ADD_RATIONALS, NONNEG_ADD, MUL_POSITIVE)}

DEFAULT_STRUCTURE = ADD_RATIONALS


def parse_reward(text) -> Fraction:
    """Parse an exact rational literal like '2', '-1', '5/2'.  Integers and
    Fractions pass through; floats are rejected to keep arithmetic exact."""
    if isinstance(text, str):
        return Fraction(text.strip())
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    raise ValueError(f"not an exact rational: {text!r}")
