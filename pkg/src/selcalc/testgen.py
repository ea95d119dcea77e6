"""Seeded random generators: programs, effect values, valuation tables,
monad values, and axiom instances.

Everything is deterministic under the configured seed, so any failing case
replays.  Program generation is size-bounded and weighted so that choice,
reward, and probabilistic-choice nodes dominate base-typed output; lambdas
and applications stay within the configured type rank.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .monads import Dist, T3Val, mrval, t2val
from .rewards import DEFAULT_STRUCTURE, RewardStructure
from .selection import gamma_from_table
from .strategies import outcome_score, select_fast
from .syntax import (
    App, Arrow, BOOL, Base, FnApp, Fst, If, LangConfig, Lam, Or, Pair,
    PChoice, Prod, REW, Rew, RewConst, Snd, Star, Term, Type, UNIT, Var,
    type_rank, typecheck,
)

GAMMA_POOL = tuple(Fraction(n) for n in range(-3, 4)) + (
    Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 3))

PROB_POOL = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4),
             Fraction(3, 4), Fraction(2, 5), Fraction(3, 5), Fraction(1, 5))


@dataclass
class GenConfig:
    """Knobs for random generation; the seed fixes everything."""
    seed: int = 0
    max_term_size: int = 40
    max_order: int = 2
    mode: str = "rewards"
    reward_pool: tuple[Fraction, ...] = GAMMA_POOL
    prob_pool: tuple[Fraction, ...] = PROB_POOL
    structure: RewardStructure = field(default_factory=lambda: DEFAULT_STRUCTURE)

    def __post_init__(self):
        if self.max_term_size < 1:
            raise ValueError("max_term_size must be at least 1")
        if not self.reward_pool or not self.prob_pool:
            raise ValueError("generator pools must be nonempty")
        if any(not (0 < p < 1) for p in self.prob_pool):
            raise ValueError("prob_pool entries must lie strictly in (0,1)")

    def lang(self, bases: dict[str, tuple[str, ...]] | None = None) -> LangConfig:
        if bases is None:
            return LangConfig(mode=self.mode, structure=self.structure)
        return LangConfig(mode=self.mode, bases=bases, structure=self.structure)

    def rng(self) -> random.Random:
        return random.Random(self.seed)

    @property
    def rewards(self) -> list[Fraction]:
        pool = [r for r in self.reward_pool if self.structure.contains(r)]
        if not pool:
            raise ValueError(f"no reward_pool entry lies in {self.structure.name}")
        return pool


### valuation tables

def gamma_tables(base: str, config: LangConfig, count: int = 64,
                 seed: int = 0, pool=GAMMA_POOL) -> list[dict[str, Fraction]]:
    """A batch of valuation tables over a finite base type.  The zero table
    always comes first; the rest draw entries from the pool (restricted to
    the structure's carrier)."""
    consts = config.constants_of(base)
    entries = [r for r in pool if config.structure.contains(r)]
    if not entries:
        raise ValueError("empty valuation pool after carrier restriction")
    rng = random.Random(seed)
    z = config.structure.zero
    tables = [{c.name: z for c in consts}]
    for _ in range(max(count - 1, 0)):
        tables.append({c.name: rng.choice(entries) for c in consts})
    return tables


def gen_gamma(cfg: GenConfig, base: str, count: int = 64,
              config: LangConfig | None = None) -> list[dict[str, Fraction]]:
    config = config or cfg.lang()
    return gamma_tables(base, config, count, cfg.seed, cfg.reward_pool)


def default_gammas(m: Term, n: Term, config: LangConfig,
                   count: int = 64, seed: int = 0):
    """Sampled reward continuations for comparing two base-typed programs."""
    ty = typecheck(m, config=config)
    ty2 = typecheck(n, config=config)
    if ty != ty2:
        raise ValueError(f"type mismatch: {ty} vs {ty2}")
    if not (isinstance(ty, Base) and ty.name in config.bases):
        raise ValueError("valuation sampling needs a finite base type")
    tables = gamma_tables(ty.name, config, count, seed)
    return [gamma_from_table(t, config) for t in tables]


### program generation

class _TermGen:
    def __init__(self, cfg: GenConfig, config: LangConfig, rng: random.Random):
        self.cfg = cfg
        self.config = config
        self.rng = rng
        self._n = 0

    def fresh(self) -> str:
        while True:
            self._n += 1
            name = f"v{self._n}"
            if not self.config.has_constant(name):
                return name

    def split(self, total: int, k: int) -> list[int]:
        total = max(total, k)
        parts = []
        rem = total
        for i in range(k - 1):
            hi = rem - (k - 1 - i)
            parts.append(self.rng.randint(1, hi))
            rem -= parts[-1]
        parts.append(rem)
        return parts

    def gen(self, ty: Type, size: int, env: dict[str, Type]) -> Term:
        rng = self.rng
        here = [x for x, t in env.items() if t == ty]
        if here and (size <= 1 or rng.random() < 0.25):
            return Var(rng.choice(here))
        if size <= 2:
            return self.leaf(ty, env)
        return self.node(ty, size, env)

    def leaf(self, ty: Type, env: dict[str, Type]) -> Term:
        rng = self.rng
        if ty == REW:
            return RewConst(rng.choice(self.cfg.rewards))
        match ty:
            case Base(b):
                return rng.choice(self.config.constants_of(b))
            case Prod(a, b):
                return Pair(self.leaf(a, env), self.leaf(b, env))
            case Arrow(a, r):
                x = self.fresh()
                return Lam(x, a, self.leaf(r, {**env, x: a}))
            case _:
                return Star()

    def node(self, ty: Type, size: int, env: dict[str, Type]) -> Term:
        prob = self.cfg.mode == "prob"
        lets = 1 if self.cfg.max_order >= 1 else 0

        if isinstance(ty, Arrow):
            cands = [(80, self.mk_lam), (10, self.mk_if), (10 * lets, self.mk_let)]
        elif isinstance(ty, Prod):
            cands = [(40, self.mk_pair), (12, self.mk_if), (12, self.mk_or),
                     (8, self.mk_rew), (10 if prob else 0, self.mk_pc),
                     (8 * lets, self.mk_let)]
        elif ty == REW:
            cands = [(25, self.mk_leaf), (25, self.mk_plus),
                     (15 if prob else 0, self.mk_oplus), (10, self.mk_if),
                     (8, self.mk_or), (8, self.mk_rew),
                     (8 if prob else 0, self.mk_pc), (5 * lets, self.mk_let)]
        elif isinstance(ty, Base):
            cands = [(30 if not prob else 20, self.mk_or), (16, self.mk_rew),
                     (22 if prob else 0, self.mk_pc), (10, self.mk_if),
                     (7 * lets, self.mk_let), (4, self.mk_proj),
                     (6 if ty == BOOL else 0, self.mk_cmp), (5, self.mk_leaf)]
        else:  # Unit
            cands = [(20, self.mk_leaf), (22, self.mk_or), (14, self.mk_rew),
                     (14 if prob else 0, self.mk_pc), (15, self.mk_if),
                     (10 * lets, self.mk_let)]

        makers = [m for w, m in cands if w > 0]
        weights = [w for w, _ in cands if w > 0]
        mk = self.rng.choices(makers, weights)[0]
        return mk(ty, size, env)

    def mk_leaf(self, ty, size, env):
        return self.leaf(ty, env)

    def mk_or(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        return Or(self.gen(ty, a, env), self.gen(ty, b, env))

    def mk_rew(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        return Rew(self.gen(REW, a, env), self.gen(ty, b, env))

    def mk_pc(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        p = self.rng.choice(self.cfg.prob_pool)
        return PChoice(p, self.gen(ty, a, env), self.gen(ty, b, env))

    def mk_if(self, ty, size, env):
        c, a, b = self.split(size - 1, 3)
        return If(self.gen(BOOL, c, env), self.gen(ty, a, env),
                  self.gen(ty, b, env))

    def mk_let(self, ty, size, env):
        sigmas = [BOOL, REW, Prod(BOOL, BOOL), UNIT]
        if self.cfg.max_order >= 2:
            sigmas.append(Arrow(BOOL, ty))
        sigma = self.rng.choice(sigmas)
        a, b = self.split(size - 1, 2)
        x = self.fresh()
        body = self.gen(ty, b, {**env, x: sigma})
        return App(Lam(x, sigma, body), self.gen(sigma, a, env))

    def mk_proj(self, ty, size, env):
        other = self.rng.choice([BOOL, REW])
        if self.rng.random() < 0.5:
            return Fst(self.gen(Prod(ty, other), size - 1, env))
        return Snd(self.gen(Prod(other, ty), size - 1, env))

    def mk_cmp(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        if self.rng.random() < 0.5:
            base = Base(self.rng.choice(sorted(self.config.bases)))
            return FnApp("==", (self.gen(base, a, env), self.gen(base, b, env)))
        return FnApp("<=", (self.gen(REW, a, env), self.gen(REW, b, env)))

    def mk_pair(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        return Pair(self.gen(ty.fst, a, env), self.gen(ty.snd, b, env))

    def mk_lam(self, ty, size, env):
        x = self.fresh()
        return Lam(x, ty.arg, self.gen(ty.res, size - 1, {**env, x: ty.arg}))

    def mk_plus(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        return FnApp("+", (self.gen(REW, a, env), self.gen(REW, b, env)))

    def mk_oplus(self, ty, size, env):
        a, b = self.split(size - 1, 2)
        return FnApp("oplus", (self.gen(REW, a, env), self.gen(REW, b, env)),
                     self.rng.choice(self.cfg.prob_pool))


def gen_program(cfg: GenConfig, target_type: Type = BOOL,
                rng: random.Random | None = None,
                config: LangConfig | None = None) -> Term:
    """A closed well-typed program of the target type.  Pass a shared rng to
    draw a stream of programs under one seed."""
    if type_rank(target_type) > cfg.max_order:
        raise ValueError(f"target type rank exceeds max_order {cfg.max_order}")
    config = config or cfg.lang()
    rng = rng or cfg.rng()
    return _TermGen(cfg, config, rng).gen(target_type, cfg.max_term_size, {})


def node_tally(t: Term) -> Counter:
    """Constructor counts of a term, keyed by node kind."""
    out: Counter = Counter()

    def walk(t):
        label = type(t).__name__
        if isinstance(t, FnApp):
            label = f"FnApp:{t.sym}"
        out[label] += 1
        match t:
            case Lam(_, _, b):
                walk(b)
            case Pair(a, b) | App(a, b) | Or(a, b) | Rew(a, b) | PChoice(_, a, b):
                walk(a)
                walk(b)
            case Fst(a) | Snd(a):
                walk(a)
            case If(c, a, b):
                walk(c)
                walk(a)
                walk(b)
            case FnApp(_, args, _):
                for a in args:
                    walk(a)

    walk(t)
    return out


def constructor_coverage(cfg: GenConfig, target_type: Type = BOOL,
                         count: int = 200) -> Counter:
    """Aggregate constructor counts over a batch, plus how many programs
    contain at least one effect operation."""
    rng = cfg.rng()
    config = cfg.lang()
    total: Counter = Counter()
    for _ in range(count):
        tally = node_tally(gen_program(cfg, target_type, rng, config))
        total += tally
        total["programs"] += 1
        if tally["Or"] or tally["Rew"] or tally["PChoice"]:
            total["programs_with_op"] += 1
    return total


### effect values and tie injection

def gen_effect_value(cfg: GenConfig, rng: random.Random | None = None,
                     max_ops: int = 12, base: str = "Bool",
                     config: LangConfig | None = None) -> Term:
    """A random effect value over the base type's constants with at most
    max_ops choice/probabilistic-choice nodes."""
    config = config or cfg.lang()
    rng = rng or cfg.rng()
    consts = config.constants_of(base)
    pool = cfg.rewards

    def wrap(t):
        for _ in range(2):
            if rng.random() < 0.3:
                t = Rew(RewConst(rng.choice(pool)), t)
        return t

    def go(ops):
        if ops <= 0:
            return wrap(rng.choice(consts))
        left = rng.randint(0, ops - 1)
        right = ops - 1 - left
        if cfg.mode == "prob" and rng.random() < 0.5:
            return wrap(PChoice(rng.choice(cfg.prob_pool), go(left), go(right)))
        return wrap(Or(go(left), go(right)))

    return go(rng.randint(0, max_ops))


def gen_tie_effect(cfg: GenConfig, rng: random.Random | None = None,
                   max_ops: int = 5, base: str = "Bool",
                   config: LangConfig | None = None) -> Term:
    """An effect value whose top-level choice is an exact tie, so selection
    must resolve it to the left branch."""
    config = config or cfg.lang()
    if config.structure.name != "AddRationals":
        raise ValueError("tie injection shifts by arbitrary rationals")
    rng = rng or cfg.rng()
    a = gen_effect_value(cfg, rng, max_ops, base, config)
    b = gen_effect_value(cfg, rng, max_ops, base, config)

    def best(e):
        return outcome_score(select_fast(e, config), config)

    delta = best(a) - best(b)
    if delta != 0:
        b = Rew(RewConst(delta), b)
    return Or(a, b)


### monad values and Kleisli maps

def gen_monad_value(cfg: GenConfig, monad, carrier,
                    rng: random.Random | None = None):
    """A random valid value of the named monad over the given finite
    carrier of atoms."""
    name = monad if isinstance(monad, str) else monad.name
    rng = rng or cfg.rng()
    atoms = list(carrier)
    pool = cfg.rewards

    def dist():
        k = rng.randint(1, min(3, len(atoms)))
        chosen = rng.sample(atoms, k)
        ws = [rng.randint(1, 5) for _ in chosen]
        tot = sum(ws)
        return Dist([(Fraction(w, tot), a) for w, a in zip(ws, chosen)])

    match name:
        case "W":
            return (rng.choice(pool), rng.choice(atoms))
        case "DW":
            k = rng.randint(1, 3)
            ws = [rng.randint(1, 5) for _ in range(k)]
            tot = sum(ws)
            return Dist([(Fraction(w, tot), (rng.choice(pool), rng.choice(atoms)))
                         for w in ws])
        case "T2":
            d = dist()
            return t2val(d, {x: rng.choice(pool) for x in d.support()})
        case "T3":
            return T3Val(dist(), rng.choice(pool))
        case "MR":
            k = rng.randint(1, min(3, len(atoms)))
            return mrval({x: rng.choice(pool) for x in rng.sample(atoms, k)})
        case _:
            raise ValueError(f"unknown monad {name!r}")


def gen_kleisli(cfg: GenConfig, monad, dom, carrier,
                rng: random.Random | None = None):
    """A random function from dom into monad values over carrier, tabulated
    so repeated calls agree."""
    rng = rng or cfg.rng()
    table = {x: gen_monad_value(cfg, monad, carrier, rng) for x in dom}
    return table.__getitem__


### axiom instances

FIG3_AXIOMS = ("or-idem", "or-assoc", "reward-zero", "reward-action",
               "reward-or", "if-max", "if-max-chain", "r1", "r2", "r3")

FIG4_AXIOMS = ("or-idem", "or-assoc", "reward-zero", "reward-action",
               "reward-or", "pchoice-one", "pchoice-comm", "pchoice-assoc",
               "reward-pchoice", "pchoice-or", "if-expect", "if-expect-chain",
               "pr1", "pr2", "pr3", "pr4", "gather-shared", "gather-mix")

# monads whose semantics validates each probabilistic axiom; unlisted
# axioms hold in the plain distribution monad (and hence in all three)
AXIOM_MONADS = {"gather-shared": ("T2",), "gather-mix": ("T3",)}

_PROB_ONLY = set(FIG4_AXIOMS) - set(FIG3_AXIOMS)


def gen_axiom_instance(name: str, cfg: GenConfig,
                       rng: random.Random | None = None,
                       config: LangConfig | None = None) -> Term:
    """A closed term matching the named axiom's left-hand side at the root;
    rewriting it with the axiom gives the right-hand side."""
    rng = rng or cfg.rng()
    config = config or cfg.lang()
    if name in _PROB_ONLY and config.mode != "prob":
        raise ValueError(f"axiom {name} needs mode prob")
    g = _TermGen(cfg, config, rng)
    st = config.structure

    def prog(size=5):
        return g.gen(BOOL, size, {})

    def rc():
        return RewConst(rng.choice(cfg.rewards))

    def rterm():
        if rng.random() < 0.3:
            return FnApp("+", (rc(), rc()))
        return rc()

    def pw():
        return rng.choice(cfg.prob_pool)

    def two_rewards():
        lo, hi = rc(), rc()
        if not st.leq(lo.value, hi.value):
            lo, hi = hi, lo
        return lo, hi

    match name:
        case "or-idem":
            m = prog()
            return Or(m, m)
        case "or-assoc":
            return Or(Or(prog(5), prog(5)), prog(5))
        case "reward-zero":
            return Rew(RewConst(st.zero), prog())
        case "reward-action":
            return Rew(rterm(), Rew(rterm(), prog()))
        case "reward-or":
            return Rew(rterm(), Or(prog(5), prog(5)))
        case "if-max":
            x, y, m = rterm(), rterm(), prog()
            return If(FnApp("<=", (y, x)), Rew(x, m), Rew(y, m))
        case "if-max-chain":
            x, z, m, n = rterm(), rterm(), prog(5), prog(5)
            return If(FnApp("<=", (z, x)), Or(Rew(x, m), n), Or(n, Rew(z, m)))
        case "r1":
            m = prog()
            return Or(Rew(rc(), m), Rew(rc(), m))
        case "r2":
            lo, hi = two_rewards()
            m = prog(5)
            return Or(Or(Rew(hi, m), prog(5)), Rew(lo, m))
        case "r3":
            lo, hi = two_rewards()
            while lo.value == hi.value:
                lo, hi = two_rewards()
            m = prog(5)
            return Or(Or(Rew(lo, m), prog(5)), Rew(hi, m))
        case "pchoice-one":
            return PChoice(Fraction(1), prog(5), prog(5))
        case "pchoice-comm":
            return PChoice(pw(), prog(5), prog(5))
        case "pchoice-assoc":
            return PChoice(pw(), PChoice(pw(), prog(4), prog(4)), prog(4))
        case "reward-pchoice":
            return Rew(rterm(), PChoice(pw(), prog(4), prog(4)))
        case "pchoice-or":
            return PChoice(pw(), prog(4), Or(prog(4), prog(4)))
        case "if-expect":
            m, n, es_m, es_n, _, _ = _pr_instance(g, cfg, config, rng)
            return If(FnApp("<=", (es_n, es_m)), m, n)
        case "if-expect-chain":
            m, n, es_m, es_n, _, _ = _pr_instance(g, cfg, config, rng)
            p = prog(4)
            return If(FnApp("<=", (es_n, es_m)), Or(m, p), Or(p, n))
        case "pr1" | "pr2" | "pr3" | "pr4":
            want_geq = name in ("pr1", "pr3")
            m, n, _, _, em, en = _pr_instance(g, cfg, config, rng,
                                              distinct=not want_geq)
            if (em >= en) != want_geq:
                m, n, em, en = n, m, en, em
            if name in ("pr1", "pr2"):
                return Or(m, n)
            return Or(Or(m, prog(4)), n)
        case "gather-shared":
            m = prog(5)
            return PChoice(pw(), Rew(rc(), m), Rew(rc(), m))
        case "gather-mix":
            return PChoice(pw(), Rew(rc(), prog(5)), Rew(rc(), prog(5)))
        case _:
            raise ValueError(f"no instance generator for axiom {name!r}")


def gen_equivalent_pair(cfg: GenConfig, rng: random.Random | None = None,
                        config: LangConfig | None = None) -> tuple[Term, Term]:
    """A pair of provably equivalent programs: an axiom instance and its
    rewrite, optionally under a shared context."""
    from .equations import apply_axiom

    rng = rng or cfg.rng()
    config = config or cfg.lang()
    names = FIG3_AXIOMS if config.mode == "rewards" else tuple(
        a for a in FIG4_AXIOMS if a not in AXIOM_MONADS)
    name = rng.choice(names)
    inst = gen_axiom_instance(name, cfg, rng, config)
    rewritten = apply_axiom(name, inst, (), config)
    roll = rng.random()
    if roll < 0.3:
        other = _TermGen(cfg, config, rng).gen(BOOL, 6, {})
        return Or(inst, other), Or(rewritten, other)
    if roll < 0.5:
        r = RewConst(rng.choice(cfg.rewards))
        return Rew(r, inst), Rew(r, rewritten)
    return inst, rewritten


def _or_paths(e: Term, path=()):
    match e:
        case Or(a, b):
            yield path
            yield from _or_paths(a, path + (0,))
            yield from _or_paths(b, path + (1,))
        case PChoice(_, a, b):
            yield from _or_paths(a, path + (0,))
            yield from _or_paths(b, path + (1,))
        case Rew(_, b):
            yield from _or_paths(b, path + (1,))


def or_swap(e: Term, rng: random.Random) -> Term:
    """Flip the arguments of one random choice node of an effect value;
    returns the term unchanged when there is none."""
    paths = list(_or_paths(e))
    if not paths:
        return e
    target = rng.choice(paths)

    def go(t, path):
        if not path:
            return Or(t.right, t.left)
        match t:
            case Or(a, b):
                return Or(go(a, path[1:]), b) if path[0] == 0 else Or(a, go(b, path[1:]))
            case PChoice(w, a, b):
                return (PChoice(w, go(a, path[1:]), b) if path[0] == 0
                        else PChoice(w, a, go(b, path[1:])))
            case Rew(p, b):
                return Rew(p, go(b, path[1:]))

    return go(e, target)


def _pr_instance(g: _TermGen, cfg: GenConfig, config: LangConfig,
                 rng: random.Random, distinct: bool = False):
    """Two probabilistic reward-values over the same targets with the same
    marginals, together with their syntactic expectation terms and values."""
    st = config.structure
    consts = config.constants_of("Bool")

    def rc():
        return RewConst(rng.choice(cfg.rewards))

    for _ in range(100):
        if st.mixing_verified and rng.random() < 0.6:
            p = rng.choice(cfg.prob_pool)
            l1, l2 = rng.choice(consts), rng.choice(consts)
            x1, x2, y1, y2 = rc(), rc(), rc(), rc()
            m = PChoice(p, Rew(x1, l1), Rew(x2, l2))
            n = PChoice(p, Rew(y1, l1), Rew(y2, l2))
            es_m = FnApp("oplus", (x1, x2), p)
            es_n = FnApp("oplus", (y1, y2), p)
            em = st.convex(p, x1.value, x2.value)
            en = st.convex(p, y1.value, y2.value)
        else:
            l = rng.choice(consts)
            x, y = rc(), rc()
            m, n, es_m, es_n, em, en = Rew(x, l), Rew(y, l), x, y, x.value, y.value
        if not distinct or em != en:
            return m, n, es_m, es_n, em, en
    raise RuntimeError("could not draw distinct expectations from the pool")
