import pytest

from src.domain.constraints import (ConstraintStore, DefiningConstraint, ThresholdConstraint, check_solution,
                                    enabled, initial_store, is_admissible, omega, render_constraint,
                                    resolve_constraints)
from src.domain.qualification_domain import CERT, WEIGHT, CertVal, WeightVal

c = CertVal


class TestEnablement:

    def test_certainty(self):
        assert enabled(CERT, c("0.8"), c(1), c("0.4"))
        assert not enabled(CERT, c("0.3"), c(1), c("0.4"))
        assert enabled(CERT, c("0.8"), c("0.8"), c("0.64"))
        assert not enabled(CERT, c("0.8"), c("0.8"), c("0.65"))

    def test_weight(self):
        assert enabled(WEIGHT, WeightVal(1), WeightVal(3), WeightVal(5))
        assert not enabled(WEIGHT, WeightVal(3), WeightVal(3), WeightVal(5))


class TestResolveConstraints:
    """Evolução do armazém ao longo dos passos de uma derivação."""

    def test_replaces_in_place_and_appends(self):
        store = initial_store(CERT, [("W1", c("0.4")), ("W2", c("0.6"))])
        store = resolve_constraints(store, "W1", c(1), c("0.4"), c("0.8"), ["W3"])
        assert store.render() == ["W1 = 0.8 * glb{W3}", "W2 >= 0.6", "0.8 * W3 >= 0.4"]

    def test_fact_step(self):
        store = ConstraintStore(CERT, (ThresholdConstraint(c("0.8"), "W3", c("0.4")),))
        store = resolve_constraints(store, "W3", c("0.8"), c("0.4"), c("0.8"), [])
        assert store.constraints == (DefiningConstraint("W3", c("0.8"), ()),)
        assert store.is_solved

    def test_preconditions(self):
        store = initial_store(CERT, [("W1", c("0.4"))])
        with pytest.raises(AssertionError):
            resolve_constraints(store, "W1", c(1), c("0.4"), c("0.3"), [])
        with pytest.raises(AssertionError):
            resolve_constraints(store, "W1", c(1), c("0.4"), c("0.8"), ["W1"])


class TestOmega:

    def test_bottom_up_values(self):
        store = ConstraintStore(CERT, (
            DefiningConstraint("W1", c("0.8"), ("W3",)),
            DefiningConstraint("W2", c("0.9"), ("W4",)),
            DefiningConstraint("W3", c("0.8")),
            DefiningConstraint("W4", c(1)),
        ))
        assert omega(store) == {"W1": c("0.64"), "W2": c("0.9"), "W3": c("0.8"), "W4": c(1)}

    def test_glb_of_several_dependencies(self):
        store = ConstraintStore(WEIGHT, (
            DefiningConstraint("W", WeightVal(1), ("W1", "W2")),
            DefiningConstraint("W1", WeightVal(1)),
            DefiningConstraint("W2", WeightVal(3)),
        ))
        assert omega(store)["W"] == WeightVal(4)

    def test_unsolved_store(self):
        with pytest.raises(ValueError):
            omega(initial_store(CERT, [("W", c("0.5"))]))

    def test_undefined_dependency(self):
        with pytest.raises(ValueError):
            omega(ConstraintStore(CERT, (DefiningConstraint("W1", c("0.5"), ("W9",)),)))

    def test_cycle(self):
        store = ConstraintStore(CERT, (DefiningConstraint("W1", c("0.5"), ("W2",)),
                                       DefiningConstraint("W2", c("0.5"), ("W1",))))
        with pytest.raises(ValueError):
            omega(store)
        assert not is_admissible(store)


class TestChecks:

    def test_check_solution(self):
        store = initial_store(CERT, [("W1", c("0.4"))])
        assert check_solution(store, {"W1": c("0.5")})
        assert not check_solution(store, {"W1": c("0.3")})
        assert not check_solution(store, {})

    def test_admissible(self):
        assert is_admissible(initial_store(CERT, [("W1", c("0.4")), ("W2", c("0.6"))]))
        duplicated = ConstraintStore(CERT, (ThresholdConstraint(c(1), "W", c("0.5")),
                                            DefiningConstraint("W", c("0.5"))))
        assert not is_admissible(duplicated)
        assert not is_admissible(ConstraintStore(CERT, (ThresholdConstraint(c("0.3"), "W", c("0.5")),)))

    def test_render(self):
        assert render_constraint(ThresholdConstraint(WeightVal(1), "W", WeightVal(5)), WEIGHT) == "1 + W >= 5"
        assert render_constraint(DefiningConstraint("W", c("0.9")), CERT) == "W = 0.9"
