import json

import pytest

from selcalc.cli import main, suites


@pytest.fixture
def sel(tmp_path):
    def write(src, name="prog.sel"):
        f = tmp_path / name
        f.write_text(src)
        return str(f)
    return write


def run(capsys, *args):
    rc = main(list(args))
    out = capsys.readouterr()
    return rc, out.out, out.err


E1 = "(5 . tt) or (6 . ff)"
E2 = "mode prob;\n(5 . tt) or ((5 . tt) +[1/2] (6 . ff))"


def test_eval_selection_example(sel, capsys):
    rc, out, _ = run(capsys, "eval", "--semantics", "selection", sel(E1))
    assert rc == 0
    assert out.strip() == "reward 6, value ff"


def test_eval_selection_json_schema(sel, capsys):
    rc, out, _ = run(capsys, "eval", "--semantics", "selection", "--json",
                     sel(E2))
    assert rc == 0
    doc = json.loads(out)
    assert doc["version"] == "1"
    assert doc["outcome"] == [
        {"prob": "1/2", "reward": "5", "value": "tt"},
        {"prob": "1/2", "reward": "6", "value": "ff"},
    ]


def test_eval_selection_rewards_json_prob_one(sel, capsys):
    rc, out, _ = run(capsys, "eval", "--semantics", "selection", "--json",
                     sel(E1))
    assert json.loads(out)["outcome"][0]["prob"] == "1"


def test_eval_oracle_agrees(sel, capsys):
    f = sel(E2)
    rc1, out1, _ = run(capsys, "eval", "--semantics", "selection", f)
    rc2, out2, _ = run(capsys, "eval", "--semantics", "selection",
                       "--oracle", f)
    assert (rc1, out1) == (rc2, out2)


def test_eval_ordinary_and_trace(sel, capsys):
    f = sel("(fun (x:Bool) -> 1 . x) tt")
    rc, out, _ = run(capsys, "eval", "--semantics", "ordinary", f)
    assert rc == 0
    assert out.strip() == "1 . tt"
    rc, out, _ = run(capsys, "eval", "--semantics", "ordinary", "--trace", f)
    assert rc == 0
    assert len(out.splitlines()) > 1


def test_eval_denotational_defaults(sel, capsys):
    rc, out, _ = run(capsys, "eval", "--semantics", "denotational", sel(E1))
    assert rc == 0
    assert out.strip() == "reward 6, value ff"


def test_eval_denotational_t3_json(sel, capsys):
    rc, out, _ = run(capsys, "eval", "--semantics", "denotational",
                     "--monad", "T3", "--json", sel(E2))
    doc = json.loads(out)
    assert doc["monad"] == "T3"
    assert doc["reward"] == "11/2"


def test_eval_gamma_file(sel, capsys, tmp_path):
    g = tmp_path / "gamma.json"
    g.write_text(json.dumps({"tt": "2", "ff": "0"}))
    rc, out, _ = run(capsys, "eval", "--semantics", "denotational",
                     "--gamma", str(g), sel(E1))
    assert rc == 0
    assert out.strip() == "reward 5, value tt"


def test_eval_gamma_unknown_constant(sel, capsys, tmp_path):
    g = tmp_path / "gamma.json"
    g.write_text(json.dumps({"zz": "1"}))
    rc, _, err = run(capsys, "eval", "--semantics", "denotational",
                     "--gamma", str(g), sel(E1))
    assert rc == 3
    assert "zz" in err


def test_monad_mode_mismatch(sel, capsys):
    rc, _, err = run(capsys, "eval", "--semantics", "denotational",
                     "--monad", "T2", sel(E1))
    assert rc == 3


def test_flag_combination_validated(sel, capsys):
    rc, _, err = run(capsys, "eval", "--semantics", "ordinary", "--oracle",
                     sel(E1))
    assert rc == 3


def test_mode_conflict_exit_3(sel, capsys):
    f = sel("mode prob;\ntt or ff")
    rc, _, err = run(capsys, "eval", "--semantics", "selection",
                     "--mode", "rewards", f)
    assert rc == 3


def test_parse_error_exit_3(sel, capsys):
    rc, _, err = run(capsys, "eval", "--semantics", "selection",
                     sel("(5 . tt) or"))
    assert rc == 3
    assert err


def test_missing_file_exit_3(capsys):
    rc, _, _ = run(capsys, "eval", "--semantics", "selection", "/no/such.sel")
    assert rc == 3


def test_canon(sel, capsys):
    rc, out, _ = run(capsys, "canon", sel("(5 . tt) or (6 . ff) or (4 . tt)"))
    assert rc == 0
    assert out.strip() == "5 . tt or 6 . ff"


def test_equiv_positive(sel, capsys):
    rc, out, _ = run(capsys, "equiv", sel("(2 . tt) or (2 . tt)", "a.sel"),
                     sel("2 . tt", "b.sel"))
    assert rc == 0
    assert out.strip() == "equivalent"


def test_equiv_negative_shows_context(sel, capsys):
    rc, out, _ = run(capsys, "equiv", sel("tt or ff", "a.sel"),
                     sel("ff or tt", "b.sel"))
    assert rc == 1
    lines = out.splitlines()
    assert lines[0] == "inequivalent"
    assert any(l.startswith("context:") for l in lines)


def test_equiv_prob_negative_kappa_context(sel, capsys):
    rc, out, _ = run(capsys, "equiv",
                     sel("mode prob;\n(1 . tt) +[1/2] ff", "a.sel"),
                     sel("mode prob;\ntt +[1/2] ff", "b.sel"))
    assert rc == 1
    assert "inequivalent" in out


def test_equiv_json(sel, capsys):
    rc, out, _ = run(capsys, "equiv", "--json",
                     sel("tt or ff", "a.sel"), sel("ff or tt", "b.sel"))
    doc = json.loads(out)
    assert doc["equivalent"] is False
    assert "context" in doc


def test_pure_positive(sel, capsys):
    rc, out, _ = run(capsys, "pure", sel("if tt == tt then tt else ff"))
    assert rc == 0
    assert out.strip() == "pure: tt"


def test_pure_negative_with_witness(sel, capsys):
    rc, out, _ = run(capsys, "pure", sel("ff or ((-1) . (tt or ff))"))
    assert rc == 1
    assert out.splitlines()[0] == "impure"
    assert "witness" in out


def test_pure_monad_relative(sel, capsys):
    f = sel("mode prob;\n(1 . tt) +[1/2] ((-1) . tt)")
    rc, out, _ = run(capsys, "pure", f)
    assert rc == 1
    rc, out, _ = run(capsys, "pure", "--monad", "T2", f)
    assert rc == 0
    assert out.strip() == "pure: tt"


def test_distinguish_flips_exit(sel, capsys):
    rc, _, _ = run(capsys, "distinguish", sel("tt or ff", "a.sel"),
                   sel("ff or tt", "b.sel"))
    assert rc == 0
    rc, _, _ = run(capsys, "distinguish", sel("2 . tt", "c.sel"),
                   sel("(2 . tt) or (2 . tt)", "d.sel"))
    assert rc == 1


def test_gen_outputs_parse(sel, capsys, tmp_path):
    rc, out, _ = run(capsys, "gen", "--seed", "9", "--count", "3",
                     "--mode", "prob")
    assert rc == 0
    from selcalc.syntax import parse_program, typecheck, BOOL
    lines = out.strip().splitlines()
    assert len(lines) == 3
    for line in lines:
        p = parse_program(line, mode="prob")
        assert typecheck(p.term, config=p.config) == BOOL


def test_gen_deterministic(capsys):
    rc, out1, _ = run(capsys, "gen", "--seed", "4", "--count", "2")
    rc, out2, _ = run(capsys, "gen", "--seed", "4", "--count", "2")
    assert out1 == out2


def test_check_small_suite(capsys):
    rc, out, _ = run(capsys, "check", "--suite", "argmax-lemmas",
                     "--cases", "25")
    assert rc == 0
    assert out.strip() == "25/25 OK"


def test_check_shorthand_resolution(capsys):
    rc, out, _ = run(capsys, "check", "--suite", "adequacy",
                     "--mode", "rewards", "--cases", "5")
    assert rc == 0
    assert out.strip() == "5/5 OK"


def test_check_t1_alias(capsys):
    rc, out, _ = run(capsys, "check", "--suite", "adequacy", "--mode", "prob",
                     "--monad", "T1", "--cases", "4", "--json")
    doc = json.loads(out)
    assert doc["suite"] == "adequacy-prob-T1"
    assert doc["ok"] is True


def test_check_zero_cases_warns(capsys):
    rc, out, err = run(capsys, "check", "--suite", "monad-laws", "--cases", "0")
    assert rc == 0
    assert out.strip() == "0/0 OK"
    assert "warning" in err


def test_check_unknown_suite(capsys):
    rc, _, err = run(capsys, "check", "--suite", "bogus")
    assert rc == 3
    assert "bogus" in err


def test_check_json_schema(capsys):
    rc, out, _ = run(capsys, "check", "--suite", "char-bool", "--cases", "3",
                     "--json")
    doc = json.loads(out)
    assert doc == {"version": "1", "suite": "char-bool", "passed": 3,
                   "total": 3, "ok": True, "failures": []}


def test_suites_registry():
    names = suites()
    assert "adequacy-rewards" in names
    assert "mr-fullab" in names
    assert len(names) == 19
