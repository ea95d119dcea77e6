"""Denotational semantics in the selection monad, its agreement with the
operational selection outcome, and reward-shifting contexts."""

from fractions import Fraction as F

import pytest

from selcalc.monads import Dist, make_monad, t2val, T3Val, k_gamma
from selcalc.selection import (
    ConstElem, agree_at, denote, denote_value, embed_outcome,
    gamma_from_table, kappa_term, observe, zero_gamma,
)
from selcalc.syntax import App, BOOL, parse_program, pretty, typecheck
from selcalc.testgen import GenConfig, default_gammas, gamma_tables, gen_program

E1 = "(5 . tt) or (6 . ff)"
E2 = "mode prob;\n(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))"


def den(src, monad_name, gamma=None):
    p = parse_program(src)
    mon = make_monad(monad_name, p.config.structure)
    g = gamma if gamma is not None else zero_gamma(p.config)
    return denote(p.term, p.config, mon)(g), p.config


def test_e1_w_denotation():
    got, cfg = den(E1, "W")
    assert got == (F(6), ConstElem("ff", "Bool", 1))


def test_e1_gamma_can_flip_choice():
    p = parse_program(E1)
    g = gamma_from_table({"tt": F(2), "ff": F(0)}, p.config)
    mon = make_monad("W", p.config.structure)
    # tt is worth 5+2=7 > 6 here, but the outcome carries the program's
    # own reward; the valuation only steers the choice
    assert denote(p.term, p.config, mon)(g) == (F(5), ConstElem("tt", "Bool", 0))


def test_e2_dw_denotation():
    tt, ff = ConstElem("tt", "Bool", 0), ConstElem("ff", "Bool", 1)
    got, _ = den(E2, "DW")
    assert got == Dist([(F(1, 2), (F(1), tt)), (F(1, 5), (F(2), ff)),
                        (F(3, 10), (F(3), tt))])


def test_e2_t2_denotation():
    tt, ff = ConstElem("tt", "Bool", 0), ConstElem("ff", "Bool", 1)
    got, _ = den(E2, "T2")
    dist = Dist([(F(4, 5), tt), (F(1, 5), ff)])
    assert got == t2val(dist, {tt: F(7, 4), ff: F(2)})


def test_e2_t3_denotation():
    tt, ff = ConstElem("tt", "Bool", 0), ConstElem("ff", "Bool", 1)
    got, _ = den(E2, "T3")
    assert got == T3Val(Dist([(F(4, 5), tt), (F(1, 5), ff)]), F(9, 5))


def test_denote_value_pairs_and_functions():
    p = parse_program("<tt, 2>")
    mon = make_monad("W", p.config.structure)
    v = denote_value(p.term, p.config, mon)
    assert v.fst == ConstElem("tt", "Bool", 0)
    assert v.snd.value == F(2)


def test_observe_matches_denotation_at_zero():
    for src in [E1, "1 . ((2 . tt) or (2 . ff))",
                "if (tt or ff) == tt then 3 . tt else ff"]:
        p = parse_program(src)
        mon = make_monad("W", p.config.structure)
        lhs = denote(p.term, p.config, mon)(zero_gamma(p.config))
        rhs = embed_outcome(observe(p.term, p.config), p.config, mon)
        assert lhs == rhs


@pytest.mark.parametrize("monad_name", ["DW", "T2", "T3"])
def test_observe_matches_denotation_prob(monad_name):
    p = parse_program(E2)
    mon = make_monad(monad_name, p.config.structure)
    lhs = denote(p.term, p.config, mon)(zero_gamma(p.config))
    rhs = embed_outcome(observe(p.term, p.config), p.config, mon)
    assert lhs == rhs


@pytest.mark.parametrize("seed", range(50))
@pytest.mark.parametrize("mode,monad_name",
                         [("rewards", "W"), ("prob", "DW"),
                          ("prob", "T2"), ("prob", "T3")])
def test_adequacy_random(seed, mode, monad_name):
    cfg = GenConfig(seed=seed, max_term_size=35, mode=mode)
    config = cfg.lang()
    mon = make_monad(monad_name, config.structure)
    m = gen_program(cfg, BOOL, config=config)
    lhs = denote(m, config, mon)(zero_gamma(config))
    rhs = embed_outcome(observe(m, config), config, mon)
    assert lhs == rhs, pretty(m)


def test_gamma_tables_deterministic_replay():
    p = parse_program("tt")
    got = gamma_tables("Bool", p.config, count=4, seed=7)
    assert got == [
        {"tt": F(0), "ff": F(0)},
        {"tt": F(2), "ff": F(-1)},
        {"tt": F(3), "ff": F(-1, 3)},
        {"tt": F(-3), "ff": F(-2)},
    ]
    assert got[0] == {"tt": F(0), "ff": F(0)}, "zero table leads every batch"


def test_kappa_term_shifts_rewards():
    # applying the dispatcher at gamma equals adding gamma pointwise
    p = parse_program(E1)
    table = {"tt": F(2), "ff": F(0)}
    gam = gamma_from_table(table, p.config)
    mon = make_monad("W", p.config.structure)
    kap = kappa_term(p.config.constants_of("Bool"), table)
    lhs = k_gamma(gam, denote(p.term, p.config, mon)(gam), mon)
    rhs = denote(App(kap, p.term), p.config, mon)(zero_gamma(p.config))
    assert lhs == rhs


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("mode,monad_name", [("rewards", "W"), ("prob", "DW")])
def test_kappa_square_random(seed, mode, monad_name):
    cfg = GenConfig(seed=seed, max_term_size=20, mode=mode)
    config = cfg.lang()
    mon = make_monad(monad_name, config.structure)
    e = gen_program(cfg, BOOL, config=config)
    table = gamma_tables("Bool", config, count=2, seed=seed + 100)[1]
    gam = gamma_from_table(table, config)
    kap = kappa_term(config.constants_of("Bool"), table)
    lhs = k_gamma(gam, denote(e, config, mon)(gam), mon)
    rhs = denote(App(kap, e), config, mon)(zero_gamma(config))
    assert lhs == rhs, pretty(e)


def test_agree_at_on_equivalent_pair():
    a = parse_program("(2 . tt) or (2 . tt)")
    b = parse_program("2 . tt")
    mon = make_monad("W", a.config.structure)
    gs = default_gammas(a.term, b.term, a.config, count=32, seed=3)
    assert agree_at(a.term, b.term, a.config, mon, gs)


def test_agree_at_detects_difference():
    a = parse_program("(2 . tt) or (2 . tt)")
    c = parse_program("tt or ff")
    mon = make_monad("W", a.config.structure)
    gs = default_gammas(a.term, c.term, a.config, count=32, seed=3)
    assert not agree_at(a.term, c.term, a.config, mon, gs)


def test_constant_renaming_commutes_with_selection():
    # swapping the two booleans everywhere maps the outcome accordingly
    from selcalc.syntax import Const, subst_constants
    from selcalc.strategies import select_program
    p = parse_program("(5 . tt) or ((6 . ff) or tt)")
    tt, ff = Const("tt", "Bool", 0), Const("ff", "Bool", 1)
    swapped = subst_constants(p.term, {tt: ff, ff: tt})
    r1, v1 = select_program(p.term, p.config)
    r2, v2 = select_program(swapped, p.config)
    assert r1 == r2
    assert {v1, v2} == {tt, ff}
