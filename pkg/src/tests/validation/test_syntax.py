import pytest
from hypothesis import given, strategies as st

from src.domain.errors import InvalidQualificationError, QlpSyntaxError
from src.domain.qualification_domain import BOOL, CERT, WEIGHT, CertVal, PairVal, WeightVal, product
from src.domain.syntax import (App, Atom, Clause, Var, atom_vars, is_ground, parse_annotated_atom, parse_answer,
                               parse_atom, parse_goal, parse_program, term_depth, to_text)
from src.tests.validation.program_factory import DOMAIN_FLAGS, cases


class TestPrograms:

    def test_clause_shape(self):
        program = parse_program("eats(father(X),Y) <-0.80- eats(X,Y)\n", CERT)
        clause = program.clauses[0]
        assert clause.head == Atom("eats", (App("father", (Var("X"),)), Var("Y")))
        assert clause.attenuation == CertVal("0.8")
        assert clause.body == (Atom("eats", (Var("X"), Var("Y"))),)
        assert clause.label == "eats.1"

    def test_labels_count_per_predicate(self, p_u):
        labels = [clause.label for clause in p_u.clauses]
        assert labels[:2] == ["cruel.1", "cruel.2"]
        assert "human.3" in labels
        assert labels[-1] == "eats.5"
        assert len(p_u.clauses) == 15

    def test_facts(self, p_u):
        assert p_u.clauses_for("animal")[0].is_fact
        assert not p_u.clauses_for("cruel")[0].is_fact

    def test_constants_and_constructors(self, p_u):
        assert p_u.constants() == ["adam", "apple", "bird", "cat", "eve", "oak"]
        assert p_u.constructors()["father"] == 1

    def test_round_trip(self, p_u):
        assert parse_program(to_text(p_u), CERT) == p_u

    def test_comments_and_blank_lines(self):
        program = parse_program("% comentário\n\np <-1-\n\nq <-1- p % fim\n", BOOL)
        assert [c.label for c in program.clauses] == ["p.1", "q.1"]

    def test_empty_program(self):
        assert parse_program("", CERT).clauses == ()

    def test_product_attenuation(self):
        program = parse_program("p(a) <-(0.9,2)-\n", product(CERT, WEIGHT))
        assert program.clauses[0].attenuation == PairVal(CertVal("0.9"), WeightVal(2))

    def test_error_position(self):
        with pytest.raises(QlpSyntaxError) as info:
            parse_program("p(a) <-1.0-\nq(b <-1.0-\n", CERT)
        assert info.value.line == 2
        assert "linha 2" in str(info.value)

    def test_inconsistent_arity(self):
        with pytest.raises(QlpSyntaxError):
            parse_program("p(a) <-1.0-\np(a,b) <-1.0-\n", CERT)

    @pytest.mark.parametrize("text", ["p <-0.0-\n", "p <-1.5-\n", "p <-inf-\n"])
    def test_invalid_attenuation(self, text):
        desc = WEIGHT if "inf" in text else CERT
        with pytest.raises(InvalidQualificationError):
            parse_program(text, desc)


class TestGoals:

    def test_goal_with_bounds(self):
        goal = parse_goal("eats(father(X),Y)#W1, human(father(X))#W2 | W1>=0.4, W2>=0.6", CERT)
        assert goal.qvars == ("W1", "W2")
        assert [item.threshold for item in goal.items] == [CertVal("0.4"), CertVal("0.6")]

    def test_missing_bound_is_top(self):
        goal = parse_goal("cruel(X)#W", CERT)
        assert goal.items[0].threshold == CertVal(1)

    def test_weight_accepts_leq(self):
        goal = parse_goal("eats(X,Y)#W | W<=5.0", WEIGHT)
        assert goal.items[0].threshold == WeightVal(5)

    def test_leq_rejected_outside_weight(self):
        with pytest.raises(QlpSyntaxError):
            parse_goal("eats(X,Y)#W | W<=0.5", CERT)

    @pytest.mark.parametrize("text", [
        "p(X)#W, q(X)#W",
        "p(X)#W | V >= 0.5",
        "p(X)#W | W >= 0.5, W >= 0.6",
        "p(X)#W | W >= 0.0",
        "p(X)#W |",
        "p(X)",
    ])
    def test_malformed(self, text):
        with pytest.raises(QlpSyntaxError):
            parse_goal(text, CERT)

    def test_goal_text_omits_top_bounds(self):
        goal = parse_goal("p(X)#W1, q(X)#W2 | W2 >= 0.5", CERT)
        assert to_text(goal) == "p(X)#W1, q(X)#W2 | W2 >= 0.5"


class TestAnswersAndAtoms:

    def test_answer(self):
        bindings, qualifications = parse_answer("X = adam, Y = apple | W1 = 0.5, W2 = 0.75", CERT)
        assert bindings == {Var("X"): App("adam"), Var("Y"): App("apple")}
        assert qualifications == {"W1": CertVal("0.5"), "W2": CertVal("0.75")}

    def test_answer_in_output_form(self):
        bindings, qualifications = parse_answer("{true} | {W = 2}", WEIGHT)
        assert bindings == {}
        assert qualifications == {"W": WeightVal(2)}

    def test_annotated_atom(self):
        atom, value = parse_annotated_atom("cruel(mother(eve)) # 0.15", CERT)
        assert atom == parse_atom("cruel(mother(eve))")
        assert value == CertVal("0.15")

    def test_annotated_atom_rejects_bottom(self):
        with pytest.raises(InvalidQualificationError):
            parse_annotated_atom("p # 0", CERT)


class TestTermHelpers:

    def test_vars_in_first_occurrence_order(self):
        atoms = [parse_atom("p(Y,f(X))"), parse_atom("q(X,Z)")]
        assert atom_vars(atoms) == [Var("Y"), Var("X"), Var("Z")]

    def test_depth_and_groundness(self):
        term = parse_atom("p(f(g(a,b)))").args[0]
        assert term_depth(term) == 2
        assert is_ground(term)
        assert not is_ground(parse_atom("p(f(X))").args[0])

    def test_clause_text(self):
        clause = Clause(parse_atom("p(X)"), CertVal("0.9"), (parse_atom("q(X)"),))
        assert to_text(clause) == "p(X) <-0.9- q(X)"


class TestRoundTrip:
    """parse(to_text(x)) == x para programas e objetivos gerados."""

    @pytest.mark.parametrize("flag", DOMAIN_FLAGS)
    @given(data=st.data())
    def test_generated_programs_and_goals(self, flag, data):
        case = data.draw(cases(flag, recursive=True), label="case")
        program, goal = case.program(), case.goal()
        assert parse_program(to_text(program), case.domain) == program
        assert parse_goal(to_text(goal), case.domain) == goal
