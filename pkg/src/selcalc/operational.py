"""Operational semantics: evaluation contexts, small steps, and the big-step
map from programs to effect values.

A closed well-typed term that is not a value decomposes uniquely into an
evaluation context around a redex.  Ordinary redexes rewrite in place;
operation redexes suspend, and the context is pushed into every branch
(commutation of contexts with operations).  Iterating this turns a program
into an effect value: a tree of or / reward / probabilistic-choice nodes
with values at the leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .syntax import (
    App, Const, FnApp, Fst, Hole, If, LangConfig, Lam, Or, Pair, PChoice,
    Rew, RewConst, Snd, Term, Var, is_value, plug, substitute,
)


class StuckTerm(Exception):
    pass


class BudgetExceeded(Exception):
    pass


### decomposition

def decompose(t: Term) -> tuple[Term, Term] | None:
    """Split a closed non-value term into (context, redex); None for values.
    The context is a term with a single Hole."""
    if is_value(t):
        return None

    def wrap(ctx_of, sub):
        inner = decompose(sub)
        if inner is None:
            raise StuckTerm(f"expected a non-value: {sub!r}")
        ctx, redex = inner
        return ctx_of(ctx), redex

    match t:
        case App(f, a):
            if not is_value(f):
                return wrap(lambda c: App(c, a), f)
            if not is_value(a):
                return wrap(lambda c: App(f, c), a)
            return (Hole(), t)
        case Pair(a, b):
            if not is_value(a):
                return wrap(lambda c: Pair(c, b), a)
            return wrap(lambda c: Pair(a, c), b)
        case Fst(a):
            if not is_value(a):
                return wrap(lambda c: Fst(c), a)
            return (Hole(), t)
        case Snd(a):
            if not is_value(a):
                return wrap(lambda c: Snd(c), a)
            return (Hole(), t)
        case If(c, a, b):
            if not is_value(c):
                return wrap(lambda h: If(h, a, b), c)
            return (Hole(), t)
        case FnApp(sym, args, w):
            for i, a in enumerate(args):
                if not is_value(a):
                    def rebuild(c, i=i):
                        new = args[:i] + (c,) + args[i + 1:]
                        return FnApp(sym, new, w)
                    return wrap(rebuild, a)
            return (Hole(), t)
        case Or(_, _) | PChoice(_, _, _):
            return (Hole(), t)
        case Rew(c, m):
            if not is_value(c):
                return wrap(lambda h: Rew(h, m), c)
            return (Hole(), t)
        case Var(name):
            raise StuckTerm(f"unbound variable {name}")
        case _:
            raise StuckTerm(f"cannot decompose {t!r}")


### small step

@dataclass
class Value:
    term: Term


@dataclass
class Ordinary:
    term: Term


@dataclass
class Branch:
    """An operation redex in context: op(params; branch terms), with the
    surrounding context already pushed into the branches."""
    op: str                       # "or" | "reward" | "pchoice"
    params: tuple[Fraction, ...]
    branches: tuple[Term, ...]


def _eval_fn(sym: str, args, weight, config: LangConfig) -> Term:
    from .syntax import FF, TT
    st = config.structure
    match sym:
        case "+":
            return RewConst(st.add(args[0].value, args[1].value))
        case "<=":
            return TT if st.leq(args[0].value, args[1].value) else FF
        case "==":
            return TT if args[0] == args[1] else FF
        case "oplus":
            return RewConst(st.convex(weight, args[0].value, args[1].value))
        case _:
            raise StuckTerm(f"unknown function symbol {sym}")


def step(t: Term, config: LangConfig):
    """One step: Value, Ordinary(next term), or Branch(op, params, branches)."""
    d = decompose(t)
    if d is None:
        return Value(t)
    ctx, redex = d
    match redex:
        case App(Lam(v, _, body), a):
            return Ordinary(plug(ctx, substitute(body, v, a)))
        case Fst(Pair(a, _)):
            return Ordinary(plug(ctx, a))
        case Snd(Pair(_, b)):
            return Ordinary(plug(ctx, b))
        case If(Const("tt", "Bool", _), a, _):
            return Ordinary(plug(ctx, a))
        case If(Const("ff", "Bool", _), _, b):
            return Ordinary(plug(ctx, b))
        case FnApp(sym, args, w):
            return Ordinary(plug(ctx, _eval_fn(sym, args, w, config)))
        case Or(a, b):
            return Branch("or", (), (plug(ctx, a), plug(ctx, b)))
        case Rew(RewConst(c), m):
            config.structure.check_member(c)
            return Branch("reward", (c,), (plug(ctx, m),))
        case PChoice(p, a, b):
            if config.mode != "prob":
                raise StuckTerm("probabilistic choice outside mode prob")
            return Branch("pchoice", (p,), (plug(ctx, a), plug(ctx, b)))
        case _:
            raise StuckTerm(f"stuck redex {redex!r}")


DEFAULT_BUDGET = 10 ** 6


def eval_effect(t: Term, config: LangConfig, budget: int = DEFAULT_BUDGET) -> Term:
    """Big-step evaluation to an effect value.  ``budget`` bounds the total
    number of ordinary steps across all branches."""
    remaining = [budget]

    def go(t: Term) -> Term:
        while True:
            r = step(t, config)
            match r:
                case Value(v):
                    return v
                case Ordinary(nxt):
                    remaining[0] -= 1
                    if remaining[0] < 0:
                        raise BudgetExceeded(f"exceeded {budget} evaluation steps")
                    t = nxt
                case Branch("or", _, (a, b)):
                    return Or(go(a), go(b))
                case Branch("reward", (c,), (m,)):
                    return Rew(RewConst(c), go(m))
                case Branch("pchoice", (p,), (a, b)):
                    return PChoice(p, go(a), go(b))

    return go(t)


def trace_eval(t: Term, config: LangConfig, budget: int = DEFAULT_BUDGET):
    """Yield (depth, term) snapshots of the evaluation, one per ordinary
    step, descending into branches left to right."""
    remaining = [budget]

    def go(t, depth):
        yield (depth, t)
        while True:
            r = step(t, config)
            match r:
                case Value(_):
                    return
                case Ordinary(nxt):
                    remaining[0] -= 1
                    if remaining[0] < 0:
                        raise BudgetExceeded(f"exceeded {budget} evaluation steps")
                    t = nxt
                    yield (depth, t)
                case Branch(_, _, branches):
                    for b in branches:
                        yield from go(b, depth + 1)
                    return

    yield from go(t, 0)
