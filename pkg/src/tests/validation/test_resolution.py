import io

import pytest

from src.domain.qualification_domain import CERT, WEIGHT, CertVal, WeightVal
from src.domain.resolution import (Outcome, SearchConfig, SldEngine, Verdict, check_answer, initial_state,
                                   resolution_step, solve, subsumes)
from src.domain.syntax import App, Var, parse_answer, parse_goal
from src.domain.unification import FreshNames, Substitution

EXAMPLE_GOAL = "eats(father(X),Y)#W1, human(father(X))#W2 | W1>=0.4, W2>=0.6"
X, Y = Var("X"), Var("Y")


def father(term):
    return App("father", (term,))


class TestFirstAnswer:
    """Primeira resposta computada do objetivo sobre P_U, seleção mais à esquerda."""

    def test_answer_is_exact(self, p_u):
        stream = solve(p_u, parse_goal(EXAMPLE_GOAL, CERT), SearchConfig(max_answers=1))
        answer = next(stream)
        assert dict(answer.sigma) == {X: App("adam")}
        assert answer.mu == {"W1": CertVal("0.64"), "W2": CertVal("0.9")}
        assert answer.to_text() == "{X = adam} | {W1 = 0.64, W2 = 0.9}"
        assert answer.steps == 4

    def test_trace(self, p_u):
        out = io.StringIO()
        stream = solve(p_u, parse_goal(EXAMPLE_GOAL, CERT), SearchConfig(max_answers=1, trace=True), out)
        stream.collect()
        lines = stream.trace_lines
        assert len(lines) == 4
        assert [line.split(" :: ")[1].split(" ")[0] for line in lines] == ["eats.4", "eats.1", "human.3", "human.1"]
        assert lines[0].endswith("W1 = 0.8 * glb{W3}, W2 >= 0.6, 0.8 * W3 >= 0.4")
        assert lines[1].endswith("W1 = 0.8 * glb{W3}, W2 >= 0.6, W3 = 0.8")
        assert lines[2].endswith("W1 = 0.8 * glb{W3}, W2 = 0.9 * glb{W4}, W3 = 0.8, 0.9 * W4 >= 0.6")
        assert lines[3].endswith("W1 = 0.8 * glb{W3}, W2 = 0.9 * glb{W4}, W3 = 0.8, W4 = 1.0")
        assert "{X = adam}" in lines[1]
        assert out.getvalue().splitlines() == lines

    def test_outcome_at_answer_limit(self, p_u):
        stream = solve(p_u, parse_goal(EXAMPLE_GOAL, CERT), SearchConfig(max_answers=1))
        assert len(stream.collect()) == 1
        assert stream.outcome is Outcome.ANSWER_LIMIT

    def test_all_answers_are_finite_and_sound(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        stream = solve(p_u, goal)
        answers = stream.collect()
        assert stream.outcome is Outcome.EXHAUSTED
        assert answers
        for answer in answers:
            assert check_answer(p_u, goal, answer) is Verdict.VALID

    def test_rightmost_finds_the_same_answer(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        answers = solve(p_u, goal, SearchConfig(selection="rightmost")).collect()
        assert any(dict(a.sigma) == {X: App("adam")} and a.mu == {"W1": CertVal("0.64"), "W2": CertVal("0.9")}
                   for a in answers)


class TestWeightDomain:

    def test_father_of_adam(self, p_w):
        goal = parse_goal("eats(X,Y)#W | W<=5.0", WEIGHT)
        stream = solve(p_w, goal)
        answers = stream.collect()
        assert stream.outcome is Outcome.EXHAUSTED
        weights = [a.mu["W"] for a in answers if a.sigma.get(X) == father(App("adam"))]
        assert weights == [WeightVal(2)]
        for answer in answers:
            assert not answer.mu["W"].is_infinite
            assert answer.mu["W"].w <= 5

    def test_first_answer(self, p_w):
        answer = next(solve(p_w, parse_goal("eats(X,Y)#W | W<=5.0", WEIGHT), SearchConfig(max_answers=1)))
        assert dict(answer.sigma) == {X: App("adam")}
        assert answer.mu == {"W": WeightVal(1)}


class TestPruning:

    def test_left_recursion_is_bounded(self, p_u):
        goal = parse_goal("cruel(X)#W | W>=0.3", CERT)
        pruned = solve(p_u, goal)
        answers = pruned.collect()
        assert pruned.outcome is Outcome.EXHAUSTED
        assert pruned.pruned > 0
        assert {"W": CertVal("0.72")} in [a.mu for a in answers if a.sigma.get(X) == App("adam")]
        for answer in answers:
            assert answer.mu["W"].q >= CertVal("0.3").q

        budget = 2 * pruned.steps
        unpruned = solve(p_u, goal, SearchConfig(pruning=False, max_steps=budget))
        unpruned_answers = unpruned.collect()
        assert unpruned.outcome is Outcome.TRUNCATED
        assert unpruned.pruned == 0
        for answer in unpruned_answers:
            assert answer in answers

    def test_max_depth_marks_truncated(self, p_u):
        stream = solve(p_u, parse_goal(EXAMPLE_GOAL, CERT), SearchConfig(max_depth=2))
        assert stream.collect() == []
        assert stream.outcome is Outcome.TRUNCATED
        assert stream.depth_cut
        assert stream.max_depth_reached == 2


class TestSteps:

    def test_resolution_step_keeps_state_well_formed(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        state = initial_state(goal, CERT)
        assert state.is_well_formed()
        fresh = FreshNames({"X", "Y"}, goal.qvars)
        clause = p_u.clauses_for("eats")[3]
        following = resolution_step(state, 0, clause, fresh)
        assert following is not None
        assert following.is_well_formed()
        assert str(following.atoms[0]) == "eats(X,Y)#W3"

    def test_disabled_clause_is_refused(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        state = initial_state(goal, CERT)
        eve_animal = p_u.clauses_for("eats")[1]
        assert resolution_step(state, 0, eve_animal, FreshNames({"X", "Y"}, goal.qvars)) is None

    def test_empty_goal(self, p_u):
        answers = solve(p_u, parse_goal("", CERT)).collect()
        assert len(answers) == 1
        assert answers[0].mu == {}

    def test_engine_logs_to_file(self, p_u, tmp_path):
        with SldEngine(p_u, SearchConfig(max_answers=1), log_dir=str(tmp_path)) as engine:
            engine.run(parse_goal(EXAMPLE_GOAL, CERT)).collect()
        text = (tmp_path / "SldEngine.log").read_text(encoding="utf-8")
        assert "Busca encerrada: answer_limit" in text


class TestCheckAnswer:

    def test_handwritten_solution(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        answer = parse_answer("X = adam, Y = apple | W1 = 0.5, W2 = 0.75", CERT)
        assert check_answer(p_u, goal, answer) is Verdict.VALID

    @pytest.mark.parametrize("text", [
        "X = adam, Y = apple | W1 = 0.99, W2 = 0.75",
        "X = adam, Y = apple | W1 = 0.3, W2 = 0.75",
        "X = eve, Y = apple | W1 = 0.5, W2 = 0.75",
        "X = adam, Y = apple | W1 = 0.5",
    ])
    def test_invalid(self, p_u, text):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        assert check_answer(p_u, goal, parse_answer(text, CERT)) is Verdict.INVALID

    def test_oracle_without_enablement_cut(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        valid = parse_answer("X = adam, Y = apple | W1 = 0.5, W2 = 0.75", CERT)
        invalid = parse_answer("X = adam, Y = apple | W1 = 0.99, W2 = 0.75", CERT)
        assert check_answer(p_u, goal, valid, pruning=False) is Verdict.VALID
        assert check_answer(p_u, goal, invalid, pruning=False) is not Verdict.VALID

    def test_unknown_when_oracle_is_too_shallow(self, p_u):
        goal = parse_goal(EXAMPLE_GOAL, CERT)
        answer = parse_answer("X = adam, Y = apple | W1 = 0.5, W2 = 0.75", CERT)
        assert check_answer(p_u, goal, answer, oracle_depth=1) is Verdict.UNKNOWN


class TestSubsumption:

    def test_more_general_and_better(self):
        general = (Substitution({X: father(Var("_G1"))}), {"W": CertVal("0.8")})
        specific = (Substitution({X: father(App("adam")), Y: App("apple")}), {"W": CertVal("0.5")})
        assert subsumes(general, specific, [X], ["W"])
        assert not subsumes(specific, general, [X], ["W"])

    def test_worse_value_does_not_subsume(self):
        general = (Substitution(), {"W": CertVal("0.4")})
        specific = (Substitution({X: App("adam")}), {"W": CertVal("0.5")})
        assert not subsumes(general, specific, [X], ["W"])
