import pytest

from termbound.errors import ArityMismatch, NameCollision, ParseError
from termbound.prcompile import (
    ADD,
    MULT,
    PRED,
    SUB,
    Comp,
    CompiledUnit,
    Proj,
    Rec,
    Succ,
    Zero,
    compile_term,
    eval_pr,
    parse_term,
    splice_call,
    term_to_text,
)
from termbound.termlang import (
    Assign,
    Inc,
    Var,
    check_invariant,
    initial_state,
    run_trace,
)


def run_unit(unit: CompiledUnit, args, max_steps=100_000):
    s0 = initial_state(unit.program, dict(zip(unit.input_vars, args)))
    trace = run_trace(unit.program, s0, max_steps)
    assert trace.complete
    return trace.states[-1].env_dict(unit.program)[unit.result_var]


class TestEvalPr:
    def test_zero(self):
        assert eval_pr(Zero(1), (9,)) == 0

    def test_zero_nullary(self):
        assert eval_pr(Zero(0), ()) == 0

    def test_succ(self):
        assert eval_pr(Succ(), (4,)) == 5

    def test_proj(self):
        assert eval_pr(Proj(2, 3), (4, 7, 1)) == 7

    def test_add(self):
        assert eval_pr(ADD, (2, 3)) == 5

    def test_mult(self):
        assert eval_pr(MULT, (3, 4)) == 12

    def test_pred(self):
        assert eval_pr(PRED, (0,)) == 0
        assert eval_pr(PRED, (5,)) == 4

    def test_sub_truncated(self):
        assert eval_pr(SUB, (2, 5)) == 3
        assert eval_pr(SUB, (7, 5)) == 0

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            eval_pr(ADD, (1, 2, 3))

    def test_ill_formed_terms_rejected(self):
        with pytest.raises(ValueError):
            Proj(4, 3)
        with pytest.raises(ValueError):
            Comp(Succ(), (Proj(1, 2), Proj(1, 3)))
        with pytest.raises(ValueError):
            Rec(Succ(), Succ())


class TestTermDsl:
    @pytest.mark.parametrize(
        "text",
        [
            "z",
            "(z 0)",
            "(z 3)",
            "s",
            "(p 2 3)",
            "(comp s (p 2 3))",
            "(rec (p 1 1) (comp s (p 2 3)))",
            "(rec (z 0) (p 1 2))",
        ],
    )
    def test_round_trip(self, text):
        assert term_to_text(parse_term(text)) == text

    def test_standard_terms(self):
        assert parse_term("(rec (p 1 1) (comp s (p 2 3)))") == ADD
        assert parse_term("(rec (z 0) (p 1 2))") == PRED

    @pytest.mark.parametrize("text", ["", "(q 1)", "(p 1)", "(comp s)", "(rec s)", "z s"])
    def test_rejects_garbage(self, text):
        with pytest.raises(ParseError):
            parse_term(text)

    def test_rejects_bad_arities(self):
        with pytest.raises(ParseError):
            parse_term("(comp s (p 1 2) (p 2 2))")


class TestSpliceCall:
    def test_zero_splice(self):
        cmds = splice_call(compile_term(Zero(0)), (), "out", "c0_")
        assert cmds == (Assign("out", Var("c0_r")),)

    def test_succ_splice(self):
        cmds = splice_call(compile_term(Succ()), ("a",), "out", "c0_")
        assert cmds == (
            Assign("c0_x1", Var("a")),
            Assign("c0_r", Inc("c0_x1")),
            Assign("out", Var("c0_r")),
        )

    def test_proj_splice(self):
        cmds = splice_call(compile_term(Proj(2, 2)), ("a", "b"), "out", "c0_")
        assert cmds == (
            Assign("c0_x1", Var("a")),
            Assign("c0_x2", Var("b")),
            Assign("out", Var("c0_x2")),
        )

    def test_colliding_prefix(self):
        with pytest.raises(NameCollision):
            splice_call(compile_term(Succ()), ("c0_x1",), "out", "c0_")

    def test_wrong_arity(self):
        with pytest.raises(ArityMismatch):
            splice_call(compile_term(Succ()), ("a", "b"), "out", "c0_")


class TestCompileBaseCases:
    def test_zero_program_is_empty(self):
        unit = compile_term(Zero(2))
        assert unit.program.n_points == 0
        assert run_unit(unit, (5, 9)) == 0

    def test_zero_invariant_has_no_obligations(self):
        unit = compile_term(Zero(1))
        s0 = initial_state(unit.program, {"x1": 3})
        report = check_invariant(unit.program, s0, unit.invariant)
        assert report.ok and report.pairs_checked == 0

    def test_proj_result_is_input(self):
        unit = compile_term(Proj(2, 3))
        assert unit.program.n_points == 0
        assert run_unit(unit, (4, 7, 1)) == 7

    def test_succ(self):
        unit = compile_term(Succ())
        assert run_unit(unit, (4,)) == 5
        s0 = initial_state(unit.program, {"x1": 4})
        assert check_invariant(unit.program, s0, unit.invariant).ok


class TestCompileComposite:
    def test_add_runs(self):
        unit = compile_term(ADD)
        assert run_unit(unit, (2, 3)) == 5

    def test_add_invariant_passes(self):
        unit = compile_term(ADD)
        s0 = initial_state(unit.program, {"y": 2, "x1": 3})
        report = check_invariant(unit.program, s0, unit.invariant)
        assert report.ok

    def test_mult_runs(self):
        unit = compile_term(MULT)
        assert run_unit(unit, (2, 2)) == 4
        s0 = initial_state(unit.program, {"y": 2, "x1": 2})
        assert check_invariant(unit.program, s0, unit.invariant).ok

    def test_all_variables_declared_up_front(self):
        unit = compile_term(MULT)
        # every state carries every variable
        s0 = initial_state(unit.program, {"y": 1, "x1": 1})
        for s in run_trace(unit.program, s0):
            assert len(s.env) == len(unit.program.variables)

    def test_relation_count_stays_small(self):
        assert compile_term(ADD).invariant.k == 3
        assert compile_term(MULT).invariant.k == 5
        assert compile_term(PRED).invariant.k == 2
        assert compile_term(SUB).invariant.k == 4

    @pytest.mark.parametrize(
        "term,args",
        [
            (ADD, (0, 0)),
            (ADD, (4, 3)),
            (PRED, (0,)),
            (PRED, (4,)),
            (SUB, (3, 1)),
            (SUB, (1, 3)),
            (MULT, (3, 2)),
            (Comp(ADD, (MULT, Proj(1, 2))), (3, 4)),
            (Comp(Succ(), (Comp(Succ(), (Zero(1),)),)), (9,)),
            (Rec(Succ(), Proj(2, 3)), (5, 1)),
        ],
    )
    def test_agrees_with_oracle(self, term, args):
        assert run_unit(compile_term(term), args) == eval_pr(term, args)

    def test_deterministic_output(self):
        from termbound.termlang import invariant_to_json, program_to_text

        u1, u2 = compile_term(MULT), compile_term(MULT)
        assert program_to_text(u1.program) == program_to_text(u2.program)
        assert invariant_to_json(u1.invariant) == invariant_to_json(u2.invariant)


class TestMeasureSequence:
    def test_add_measure_descends_and_freezes(self):
        from termbound.termlang import PhiSequence, phi

        unit = compile_term(ADD)
        s0 = initial_state(unit.program, {"y": 1, "x1": 1})
        seq = PhiSequence(unit.program, s0, unit.invariant)
        assert phi(unit.program, s0, unit.invariant, 1) < seq.value(0)
        for x in range(seq.final_step):
            assert seq.value(x + 1) < seq.value(x)
        assert seq.value(seq.final_step + 10) == seq.value(seq.final_step)

    def test_bound_dominates_small_runs(self):
        from termbound.termlang import step_bound

        for term, args in [(ADD, (1, 1)), (PRED, (2,)), (SUB, (1, 2))]:
            unit = compile_term(term)
            s0 = initial_state(unit.program, dict(zip(unit.input_vars, args)))
            trace = run_trace(unit.program, s0)
            assert trace.steps <= step_bound(unit.program, s0, unit.invariant)


class TestStepFunctionShape:
    def test_transition_is_total_on_non_final_states(self):
        from termbound.termlang import is_final, step

        unit = compile_term(ADD)
        s0 = initial_state(unit.program, {"y": 2, "x1": 2})
        for s in run_trace(unit.program, s0):
            if not is_final(unit.program, s):
                step(unit.program, s)  # never stuck
            else:
                assert step(unit.program, s) == s
