"""Two small calculi of choices and rewards -- one deterministic, one
probabilistic -- whose programs run by globally optimizing the total
(expected) reward.  The denotational side interprets programs in a selection
monad parametric in an auxiliary monad; equational tools canonicalize,
compare, and separate programs.  All arithmetic is exact.
"""

from .rewards import (
    ConditionCUnavailable, DEFAULT_STRUCTURE, RewardStructure, STRUCTURES,
    parse_reward,
)
from .syntax import (
    App, Arrow, BOOL, Base, Const, FF, FnApp, Fst, Hole, If, Lam, LangConfig,
    Or, PChoice, Pair, Prod, Program, REW, Rew, RewConst, SelSyntaxError,
    SelTypeError, Snd, Star, TT, Term, Type, UNIT, Var, alpha_eq,
    is_effect_value, is_value, parse_program, plug, pretty, type_rank,
    typecheck,
)
from .operational import (
    BudgetExceeded, DEFAULT_BUDGET, StuckTerm, eval_effect, trace_eval,
)
from .strategies import (
    StrategyCapExceeded, argmax, max_by, outcome_score, select_bruteforce,
    select_fast, select_program,
)
from .monads import (
    Dist, MRVal, T2Val, T3Val, atom_key, cond_reward, expect0, k_gamma,
    make_monad, mr_of_effect, mrval, t2val, theta, vdis,
)
from .selection import (
    ConstElem, FnElem, PairElem, RewElem, UnitElem, agree_at, denote,
    denote_value, embed_outcome, gamma_from_table, kappa_term, observe,
    zero_gamma,
)
from .equations import (
    AXIOMS, NoMatch, PurityResult, apply_axiom, canon_equal, canon_rewards,
    canonical_term, decide_equiv_prob, decide_equiv_rewards, decide_pure_prob,
    decide_pure_rewards, distinguish_rewards, replace_at,
    rewards_impurity_witness, subterm_at, weak_canon_prob,
    weak_canonical_term,
)
from .testgen import (
    FIG3_AXIOMS, FIG4_AXIOMS, GenConfig, default_gammas, gamma_tables,
    gen_axiom_instance, gen_effect_value, gen_equivalent_pair, gen_kleisli,
    gen_monad_value, gen_program, gen_tie_effect, or_swap,
)
from .cli import main, run_suite, suites

__version__ = "0.1.0"
