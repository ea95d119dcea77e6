from fractions import Fraction as F

import pytest

from selcalc.operational import (
    BudgetExceeded, StuckTerm, eval_effect, trace_eval,
)
from selcalc.syntax import (
    App, BOOL, FF, Hole, If, Lam, Or, Rew, RewConst, TT, Var, is_effect_value,
    parse_program, pretty,
)
from selcalc.testgen import GenConfig, gen_program


def run(src, **kw):
    p = parse_program(src, **kw)
    return eval_effect(p.term, p.config), p.config


def test_value_is_fixed():
    e, _ = run("tt")
    assert e == TT


def test_beta():
    e, _ = run("(fun (x:Bool) -> x or ff) tt")
    assert e == Or(TT, FF)


def test_if_on_branches():
    # choices evaluate under every branch before selection happens
    e, _ = run("if tt == ff then tt else ff")
    assert e == FF


def test_reward_params_reduce():
    e, _ = run("(1 + 2) . tt")
    assert e == Rew(RewConst(F(3)), TT)


def test_projections():
    e, _ = run("fst <tt, ff>")
    assert e == TT
    e, _ = run("snd <tt, ff>")
    assert e == FF


def test_if_distributes_into_effects():
    e, _ = run("if (tt or ff) == tt then 1 . tt else 2 . ff")
    assert e == Or(Rew(RewConst(F(1)), TT), Rew(RewConst(F(2)), FF))


def test_pchoice_effect_value():
    e, cfg = run("tt +[1/2] (ff or tt)")
    assert is_effect_value(e)
    assert pretty(e) == "tt +[1/2] (ff or tt)"


def test_stuck_on_open_term():
    p = parse_program("tt")
    with pytest.raises(StuckTerm):
        eval_effect(Var("x"), p.config)


def test_budget_exceeded():
    # (fun x -> x x) applied to itself loops; the budget cuts it off
    p = parse_program("tt")
    dup = Lam("f", BOOL, App(Var("f"), Var("f")))
    with pytest.raises((BudgetExceeded, StuckTerm)):
        eval_effect(App(dup, dup), p.config, budget=500)


def test_trace_monotone_and_ends_at_value():
    p = parse_program("(fun (x:Bool) -> 1 . x) (tt or ff)")
    steps = list(trace_eval(p.term, p.config))
    assert steps, "trace must show at least the starting term"
    assert all(isinstance(d, int) and d >= 0 for d, _ in steps)


@pytest.mark.parametrize("seed", range(60))
@pytest.mark.parametrize("mode", ["rewards", "prob"])
def test_generated_programs_terminate_in_effect_values(seed, mode):
    cfg = GenConfig(seed=seed, max_term_size=40, mode=mode)
    config = cfg.lang()
    t = gen_program(cfg, BOOL, config=config)
    e = eval_effect(t, config)
    assert is_effect_value(e), pretty(e)
