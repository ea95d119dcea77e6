"""Auxiliary monads for the selection semantics, over exact rationals.

* ``WMonad``   -- reward-and-value pairs (deterministic mode),
* ``DWMonad``  -- distributions over reward-and-value pairs,
* ``T2Monad``  -- a value distribution plus a reward for each support point,
* ``T3Monad``  -- a value distribution plus one pooled reward,
* ``MRMonad``  -- sets of values tagged with their best reward (used for the
  observational characterization in rewards mode, not for selection).

All are parametric in a reward structure.  T3 additionally requires the
structure's monoid to mix through convex combination pointwise; its
constructor verifies this by seeded random trial and refuses structures
that fail.

The module also provides expectation, the comparison/embedding maps between
these monads, and the reward-shift maps used to prove programs apart.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

from .rewards import RewardStructure, DEFAULT_STRUCTURE


### generic sorting key for distribution atoms

@lru_cache(maxsize=1 << 16)
def atom_key(a: Any):
    if isinstance(a, Fraction):
        return (0, a)
    if isinstance(a, str):
        return (1, a)
    if isinstance(a, tuple):
        return (2, tuple(atom_key(x) for x in a))
    if hasattr(a, "sort_key"):
        return (3, a.sort_key())
    raise TypeError(f"cannot order atom {a!r}")


### finite distributions

class Dist:
    """A finite probability distribution with exact rational weights.
    Atoms must be hashable; equal atoms are merged and the support is kept
    sorted, so equal distributions compare equal structurally."""

    __slots__ = ("pairs",)

    def __init__(self, weighted):
        acc: dict[Any, Fraction] = {}
        for p, x in weighted:
            if p < 0:
                raise ValueError(f"negative weight {p}")
            if p == 0:
                continue
            acc[x] = acc.get(x, Fraction(0)) + p
        if sum(acc.values()) != 1:
            raise ValueError(f"weights sum to {sum(acc.values())}, not 1")
        object.__setattr__(self, "pairs",
                           tuple(sorted(acc.items(), key=lambda kv: atom_key(kv[0]))))

    @staticmethod
    def unit(x) -> "Dist":
        return Dist([(Fraction(1), x)])

    @staticmethod
    def mix(weighted: list[tuple[Fraction, "Dist"]]) -> "Dist":
        out = []
        for p, d in weighted:
            out.extend((p * q, x) for x, q in d.pairs)
        return Dist(out)

    def map(self, f) -> "Dist":
        return Dist([(p, f(x)) for x, p in self.pairs])

    def support(self):
        return [x for x, _ in self.pairs]

    def prob(self, x) -> Fraction:
        for y, p in self.pairs:
            if y == x:
                return p
        return Fraction(0)

    def items(self):
        return list(self.pairs)

    def sort_key(self):
        return tuple((atom_key(x), p) for x, p in self.pairs)

    def __eq__(self, other):
        return isinstance(other, Dist) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        body = " + ".join(f"{p}*{x!r}" for x, p in self.pairs)
        return f"Dist({body})"

    def __setattr__(self, *_):
        raise AttributeError("Dist is immutable")


### compound carriers

@dataclass(frozen=True)
class T2Val:
    """A value distribution with a reward attached to each support point.
    ``rew`` is a tuple of (atom, reward) aligned with the support."""
    dist: Dist
    rew: tuple[tuple[Any, Fraction], ...]

    def rho(self, x) -> Fraction:
        for y, r in self.rew:
            if y == x:
                return r
        raise KeyError(f"{x!r} not in support")

    def sort_key(self):
        return (self.dist.sort_key(), tuple((atom_key(x), r) for x, r in self.rew))


def t2val(dist: Dist, rho: dict[Any, Fraction] | Callable[[Any], Fraction]) -> T2Val:
    get = rho.__getitem__ if isinstance(rho, dict) else rho
    return T2Val(dist, tuple((x, get(x)) for x in dist.support()))


@dataclass(frozen=True)
class T3Val:
    """A value distribution with a single pooled reward."""
    dist: Dist
    rew: Fraction

    def sort_key(self):
        return (self.dist.sort_key(), self.rew)


@dataclass(frozen=True)
class MRVal:
    """A finite nonempty set of values, each tagged with the best reward
    seen for it.  ``entries`` is sorted by atom."""
    entries: tuple[tuple[Any, Fraction], ...]

    def sort_key(self):
        return tuple((atom_key(x), r) for x, r in self.entries)


def mrval(mapping: dict[Any, Fraction]) -> MRVal:
    if not mapping:
        raise ValueError("empty value set")
    return MRVal(tuple(sorted(mapping.items(), key=lambda kv: atom_key(kv[0]))))


### the monads

class WMonad:
    """Reward-and-value pairs; binding accumulates rewards."""
    name = "W"
    has_pchoice = False

    def __init__(self, structure: RewardStructure = DEFAULT_STRUCTURE):
        self.structure = structure

    def unit(self, x):
        return (self.structure.zero, x)

    def bind(self, u, f):
        r, x = u
        s, y = f(x)
        return (self.structure.add(r, s), y)

    def map(self, f, u):
        r, x = u
        return (r, f(x))

    def reward(self, c, u):
        r, x = u
        return (self.structure.add(c, r), x)

    def alpha(self, u) -> Fraction:
        r, s = u
        return self.structure.add(r, s)

    def expect(self, u, gamma) -> Fraction:
        return self.alpha(self.map(gamma, u))


class DWMonad:
    """Distributions over reward-and-value pairs."""
    name = "DW"
    has_pchoice = True

    def __init__(self, structure: RewardStructure = DEFAULT_STRUCTURE):
        self.structure = structure

    def unit(self, x) -> Dist:
        return Dist.unit((self.structure.zero, x))

    def mix(self, weighted) -> Dist:
        return Dist.mix(weighted)

    def bind(self, u: Dist, f) -> Dist:
        return self.mix([(p, self.reward(r, f(x))) for (r, x), p in u.items()])

    def map(self, f, u: Dist) -> Dist:
        return u.map(lambda rx: (rx[0], f(rx[1])))

    def reward(self, c, u: Dist) -> Dist:
        add = self.structure.add
        return u.map(lambda rx: (add(c, rx[0]), rx[1]))

    def pchoice(self, p: Fraction, u: Dist, v: Dist) -> Dist:
        if p == 1:
            return u
        if p == 0:
            return v
        return self.mix([(p, u), (1 - p, v)])

    def alpha(self, u: Dist) -> Fraction:
        add = self.structure.add
        return self.structure.big_convex([(p, add(r, s)) for (r, s), p in u.items()])

    def expect(self, u: Dist, gamma) -> Fraction:
        return self.alpha(self.map(gamma, u))


class T2Monad:
    """Value distribution with per-point rewards.  Requires the reward
    action to gather through convex combination on a shared point, which
    every built-in structure satisfies."""
    name = "T2"
    has_pchoice = True

    def __init__(self, structure: RewardStructure = DEFAULT_STRUCTURE,
                 seed: int | None = None):
        ok = (structure.gathering_verified if seed is None else
              structure.gathers_through_convex(random.Random(seed)))
        if not ok:
            raise ValueError(
                f"structure {structure.name} does not average rewards on a "
                "shared point; per-point pooling is unsound")
        self.structure = structure

    def unit(self, x) -> T2Val:
        return t2val(Dist.unit(x), lambda _: self.structure.zero)

    def mix(self, weighted) -> T2Val:
        """Convex combination of finitely many values; rewards on shared
        support points are averaged with the conditional weights."""
        dist = Dist.mix([(p, u.dist) for p, u in weighted])
        rho = {}
        for x in dist.support():
            total = dist.prob(x)
            parts = [(p * u.dist.prob(x) / total, u.rho(x))
                     for p, u in weighted if p > 0 and u.dist.prob(x) > 0]
            rho[x] = self.structure.big_convex(parts)
        return t2val(dist, rho)

    def bind(self, u: T2Val, f) -> T2Val:
        return self.mix([(u.dist.prob(x), self.reward(u.rho(x), f(x)))
                         for x in u.dist.support()])

    def map(self, f, u: T2Val) -> T2Val:
        dist = u.dist.map(f)
        rho = {}
        for y in dist.support():
            parts = [(u.dist.prob(x) / dist.prob(y), u.rho(x))
                     for x in u.dist.support() if f(x) == y]
            rho[y] = self.structure.big_convex(parts)
        return t2val(dist, rho)

    def reward(self, c, u: T2Val) -> T2Val:
        add = self.structure.add
        return T2Val(u.dist, tuple((x, add(c, r)) for x, r in u.rew))

    def pchoice(self, p: Fraction, u: T2Val, v: T2Val) -> T2Val:
        if p == 1:
            return u
        if p == 0:
            return v
        return self.mix([(p, u), (1 - p, v)])

    def alpha(self, u: T2Val) -> Fraction:
        add = self.structure.add
        return self.structure.big_convex(
            [(u.dist.prob(x), add(u.rho(x), x)) for x in u.dist.support()])

    def expect(self, u: T2Val, gamma) -> Fraction:
        return self.alpha(self.map(gamma, u))


class T3Monad:
    """Value distribution with one pooled reward.  Only sound when the
    monoid mixes through convex combination on distinct points; the
    constructor checks this by seeded random trial."""
    name = "T3"
    has_pchoice = True

    def __init__(self, structure: RewardStructure = DEFAULT_STRUCTURE,
                 seed: int | None = None, trials: int = 1000):
        ok = (structure.mixing_verified if seed is None else
              structure.mixes_through_add(random.Random(seed), trials))
        if not ok:
            raise ValueError(
                f"structure {structure.name} does not mix rewards through "
                "accumulation; pooling a single reward is unsound")
        self.structure = structure

    def unit(self, x) -> T3Val:
        return T3Val(Dist.unit(x), self.structure.zero)

    def mix(self, weighted) -> T3Val:
        live = [(p, u) for p, u in weighted if p > 0]
        dist = Dist.mix([(p, u.dist) for p, u in live])
        rew = self.structure.big_convex([(p, u.rew) for p, u in live])
        return T3Val(dist, rew)

    def bind(self, u: T3Val, f) -> T3Val:
        return self.reward(
            u.rew,
            self.mix([(u.dist.prob(x), f(x)) for x in u.dist.support()]))

    def map(self, f, u: T3Val) -> T3Val:
        return T3Val(u.dist.map(f), u.rew)

    def reward(self, c, u: T3Val) -> T3Val:
        return T3Val(u.dist, self.structure.add(c, u.rew))

    def pchoice(self, p: Fraction, u: T3Val, v: T3Val) -> T3Val:
        if p == 1:
            return u
        if p == 0:
            return v
        return self.mix([(p, u), (1 - p, v)])

    def alpha(self, u: T3Val) -> Fraction:
        avg = self.structure.big_convex(
            [(u.dist.prob(x), x) for x in u.dist.support()])
        return self.structure.add(u.rew, avg)

    def expect(self, u: T3Val, gamma) -> Fraction:
        return self.alpha(self.map(gamma, u))


class MRMonad:
    """Value sets tagged with their best reward.  Choice keeps the better
    reward per value; rewards act additively on every tag."""
    name = "MR"
    has_pchoice = False

    def __init__(self, structure: RewardStructure = DEFAULT_STRUCTURE):
        self.structure = structure

    def unit(self, x) -> MRVal:
        return mrval({x: self.structure.zero})

    def or_op(self, u: MRVal, v: MRVal) -> MRVal:
        out = dict(u.entries)
        for x, r in v.entries:
            if x in out:
                out[x] = max(out[x], r)
            else:
                out[x] = r
        return mrval(out)

    def reward(self, c, u: MRVal) -> MRVal:
        add = self.structure.add
        return mrval({x: add(c, r) for x, r in u.entries})

    def bind(self, u: MRVal, f) -> MRVal:
        parts = [self.reward(r, f(x)) for x, r in u.entries]
        out = parts[0]
        for p in parts[1:]:
            out = self.or_op(out, p)
        return out

    def map(self, f, u: MRVal) -> MRVal:
        out: dict[Any, Fraction] = {}
        for x, r in u.entries:
            y = f(x)
            out[y] = max(out[y], r) if y in out else r
        return mrval(out)


MONAD_NAMES = ("W", "DW", "T2", "T3")

_MONAD_CACHE: dict[tuple[str, str], Any] = {}


def make_monad(name: str, structure: RewardStructure = DEFAULT_STRUCTURE):
    """Monads are stateless, so instances are shared; this also avoids
    re-running the law checks in the T2/T3 constructors."""
    key = (name, structure.name)
    if key not in _MONAD_CACHE:
        match name:
            case "W":
                m = WMonad(structure)
            case "DW":
                m = DWMonad(structure)
            case "T2":
                m = T2Monad(structure)
            case "T3":
                m = T3Monad(structure)
            case "MR":
                m = MRMonad(structure)
            case _:
                raise ValueError(f"unknown monad {name!r}")
        _MONAD_CACHE[key] = m
    return _MONAD_CACHE[key]


### comparison map out of DW, and direct observation summaries

def theta(u: Dist, monad) -> Any:
    """Embed a distribution of reward-and-value pairs into another monad by
    rebuilding it from unit, reward, and convex mixture."""
    return monad.mix([(p, monad.reward(r, monad.unit(x))) for (r, x), p in u.items()])


def vdis(u: Dist) -> Dist:
    """Marginal distribution of values."""
    return u.map(lambda rx: rx[1])


def cond_reward(u: Dist, x, structure: RewardStructure = DEFAULT_STRUCTURE) -> Fraction:
    """Average reward conditioned on the value being x."""
    total = sum(p for (_, y), p in u.items() if y == x)
    if total == 0:
        raise KeyError(f"{x!r} has probability 0")
    return structure.big_convex(
        [(p / total, r) for (r, y), p in u.items() if y == x])


def expect0(u: Dist, structure: RewardStructure = DEFAULT_STRUCTURE) -> Fraction:
    """Expected reward, ignoring values (expectation at the zero valuation)."""
    return structure.big_convex([(p, r) for (r, _), p in u.items()])


def k_gamma(gamma, u, monad):
    """Shift every value's reward by its valuation: the binding of
    x -> gamma(x) . unit(x).  Injective for each built-in monad, which is
    what lets contexts turn semantic differences into observable ones."""
    return monad.bind(u, lambda x: monad.reward(gamma(x), monad.unit(x)))


### observational summary in rewards mode

def mr_of_effect(e, structure: RewardStructure = DEFAULT_STRUCTURE) -> MRVal:
    """Fold an effect value of the rewards calculus into a value set tagged
    with best rewards."""
    from .syntax import Or, Rew, RewConst, is_value

    m = MRMonad(structure)

    def go(e):
        match e:
            case Or(a, b):
                return m.or_op(go(a), go(b))
            case Rew(RewConst(c), body):
                return m.reward(c, go(body))
            case v if is_value(v):
                return m.unit(v)
            case _:
                raise ValueError(f"not an effect value: {e!r}")

    return go(e)
