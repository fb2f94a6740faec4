import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.domain.errors import DomainMismatchError
from src.domain.qualification_domain import (BOOL, CERT, INF, WEIGHT, BoolVal, CertVal, PairVal, WeightVal,
                                             check_axioms, format_value, lattice_ops, parse_domain_flag,
                                             parse_value, product)
from src.tests.validation.program_factory import qual_values

U_TIMES_W = product(CERT, WEIGHT)


class TestDomainFlags:

    @pytest.mark.parametrize("text, expected", [
        ("b", BOOL),
        ("u", CERT),
        ("W", WEIGHT),
        ("prod:u,w", U_TIMES_W),
        ("prod:prod:u,w,b", product(U_TIMES_W, BOOL)),
    ])
    def test_parse(self, text, expected):
        assert parse_domain_flag(text) == expected

    def test_round_trip_through_str(self):
        desc = product(U_TIMES_W, BOOL)
        assert parse_domain_flag(str(desc)) == desc

    @pytest.mark.parametrize("text", ["x", "prod:u", "prod:u;w", "uu", ""])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_domain_flag(text)


class TestCertainty:

    def test_extremes(self):
        ops = lattice_ops(CERT)
        assert ops.bot == CertVal(0)
        assert ops.top == CertVal(1)

    def test_attenuation_is_exact_product(self):
        ops = lattice_ops(CERT)
        assert ops.attenuate(CertVal("0.9"), CertVal("0.9")) == CertVal(Fraction(81, 100))
        assert ops.attenuate(CertVal(0.8), CertVal(0.8)) == CertVal("0.64")

    def test_glb_is_min(self):
        ops = lattice_ops(CERT)
        assert ops.glb(CertVal("0.3"), CertVal("0.7")) == CertVal("0.3")
        assert ops.big_glb([]) == ops.top

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            CertVal(Fraction(3, 2))

    def test_format(self):
        assert format_value(CERT, CertVal(1)) == "1.0"
        assert format_value(CERT, CertVal("0.64")) == "0.64"
        assert format_value(CERT, CertVal(Fraction(1, 3))) == "1/3"


class TestWeight:

    def test_order_is_reversed(self):
        ops = lattice_ops(WEIGHT)
        assert ops.leq(WeightVal(5), WeightVal(2))
        assert not ops.leq(WeightVal(2), WeightVal(5))
        assert ops.leq(WeightVal(INF), WeightVal(0))

    def test_extremes(self):
        ops = lattice_ops(WEIGHT)
        assert ops.bot == WeightVal(INF)
        assert ops.top == WeightVal(0)
        assert ops.bot.is_infinite

    def test_glb_is_numeric_max(self):
        ops = lattice_ops(WEIGHT)
        assert ops.glb(WeightVal(2), WeightVal(3)) == WeightVal(3)
        assert ops.glb(WeightVal(2), WeightVal(INF)) == WeightVal(INF)

    def test_attenuation_is_sum(self):
        ops = lattice_ops(WEIGHT)
        assert ops.attenuate(WeightVal(1), WeightVal(3)) == WeightVal(4)
        assert ops.attenuate(WeightVal(1), WeightVal(INF)) == WeightVal(INF)

    def test_format(self):
        assert format_value(WEIGHT, WeightVal(4)) == "4"
        assert format_value(WEIGHT, WeightVal(INF)) == "inf"
        assert format_value(WEIGHT, WeightVal("2.5")) == "2.5"


class TestProduct:

    def test_componentwise(self):
        ops = lattice_ops(U_TIMES_W)
        d = PairVal(CertVal("0.9"), WeightVal(1))
        e = PairVal(CertVal("0.5"), WeightVal(2))
        assert ops.attenuate(d, e) == PairVal(CertVal("0.45"), WeightVal(3))
        assert ops.glb(d, e) == PairVal(CertVal("0.5"), WeightVal(2))
        assert not ops.leq(PairVal(CertVal("0.5"), WeightVal(1)), e)

    def test_parse_and_format(self):
        value = parse_value(U_TIMES_W, "(0.8, 2)")
        assert value == PairVal(CertVal("0.8"), WeightVal(2))
        assert format_value(U_TIMES_W, value) == "(0.8,2)"

    def test_nested(self):
        desc = product(U_TIMES_W, BOOL)
        value = parse_value(desc, "((0.5,inf),1)")
        assert value == PairVal(PairVal(CertVal("0.5"), WeightVal(INF)), BoolVal(1))

    def test_mismatch_is_rejected(self):
        ops = lattice_ops(U_TIMES_W)
        with pytest.raises(DomainMismatchError):
            ops.attenuate(CertVal("0.5"), PairVal(CertVal("0.5"), WeightVal(1)))


class TestAxioms:
    """Axiomas da atenuação e leis de reticulado sobre grades de amostras."""

    @pytest.mark.parametrize("desc", [BOOL, CERT, WEIGHT, U_TIMES_W])
    def test_builtin_domains(self, desc):
        assert check_axioms(desc) == []

    def test_sample_grids_have_enough_values(self):
        for desc in (CERT, WEIGHT):
            samples = lattice_ops(desc).sample_values()
            assert len(samples) >= 8
            assert lattice_ops(desc).bot in samples
            assert lattice_ops(desc).top in samples

    def test_nested_product(self):
        desc = product(U_TIMES_W, BOOL)
        grid = itertools.product(lattice_ops(CERT).sample_values(), lattice_ops(WEIGHT).sample_values(),
                                 lattice_ops(BOOL).sample_values())
        samples = [PairVal(PairVal(u, w), b) for u, w, b in grid]
        assert len(samples) == 128
        assert check_axioms(desc, samples) == []

    def test_min_as_attenuation_breaks_strict_decrease(self):
        ops = lattice_ops(CERT)
        violations = check_axioms(CERT, attenuation=ops.glb)
        assert violations
        assert {v.axiom for v in violations} == {"2d: d∘e ⊏ e"}

    def test_max_violations(self):
        violations = check_axioms(CERT, attenuation=lambda d, e: lattice_ops(CERT).top, max_violations=3)
        assert len(violations) == 3

    @pytest.mark.parametrize("desc", [BOOL, CERT, WEIGHT, U_TIMES_W, product(U_TIMES_W, BOOL)])
    @given(data=st.data())
    def test_random_values(self, desc, data):
        samples = data.draw(st.lists(qual_values(desc), min_size=1, max_size=4), label="samples")
        assert check_axioms(desc, samples) == []

    @given(d=qual_values(CERT), e=qual_values(CERT))
    def test_certainty_attenuation_is_exact(self, d, e):
        assert lattice_ops(CERT).attenuate(d, e) == CertVal(d.q * e.q)
