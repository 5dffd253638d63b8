import pytest
from hypothesis import given, settings, strategies as st

from sfasat.core.exceptions import ParseError, SemanticError
from sfasat.seed.factories import InstanceFactory
from sfasat.services.decide_service import DecideService
from sfasat.services.sfa_service import SfaService
from sfasat.utils.sfa_file import parse_sfa_file, render_sfa_file
from tests.conftest import load

HEADER = 'algebra lia\npred pos "x > 0"\nstates q0 q1\ninitial q0\naccepting q1\n'


class TestParse:
    def test_fixture(self, odd_pos):
        assert odd_pos.algebra_id == "lia"
        assert odd_pos.states == ("q0", "q1")
        assert odd_pos.initial == "q0"
        assert odd_pos.accepting == frozenset({"q0"})
        assert len(odd_pos.transitions) == 2
        assert SfaService.generators(odd_pos).names == ("odd", "pos")

    def test_no_constraint(self):
        _, constraint = load("odd_pos.sfa")
        assert constraint is None

    def test_constraint_keeps_its_text(self, odd_pos_card2):
        _, constraint = odd_pos_card2
        assert constraint.render() == "|odd & pos| = 2"

    def test_bitvector_width(self, bv_example):
        assert bv_example.algebra_id == "bv6"

    def test_comments_and_blank_lines(self):
        sfa, _ = parse_sfa_file("# header\n\n" + HEADER + "trans q0 q1 (pos)  # step\n")
        assert SfaService.accepts(sfa, [3])
        assert not SfaService.accepts(sfa, [-3])

    def test_generator_aliases(self):
        _, constraint = parse_sfa_file(HEADER + 'trans q0 q1 (pos)\ncardinality "|S1| = 1"\n')
        assert constraint.render() == "|S1| = 1"


class TestErrors:
    def test_unknown_state(self):
        with pytest.raises(SemanticError) as info:
            parse_sfa_file(HEADER + "trans q0 q9 (pos)\n")
        assert "line 6" in info.value.detail

    def test_unknown_predicate(self):
        with pytest.raises(SemanticError):
            parse_sfa_file(HEADER + "trans q0 q1 (neg)\n")

    def test_missing_algebra(self):
        with pytest.raises(SemanticError):
            parse_sfa_file("states q0\ninitial q0\n")

    def test_predicate_before_algebra(self):
        with pytest.raises(SemanticError) as info:
            parse_sfa_file('pred pos "x > 0"\nalgebra lia\n')
        assert "line 1" in info.value.detail

    def test_bad_width(self):
        with pytest.raises(SemanticError):
            parse_sfa_file("algebra bv 0\n")

    def test_duplicate_algebra(self):
        with pytest.raises(SemanticError):
            parse_sfa_file("algebra lia\nalgebra lia\n")

    def test_garbage_line(self):
        with pytest.raises(ParseError) as info:
            parse_sfa_file(HEADER + "transition q0 q1\n")
        assert info.value.line == 6

    def test_bad_predicate_text(self):
        with pytest.raises(ParseError) as info:
            parse_sfa_file('algebra lia\npred pos "x >"\n')
        assert info.value.line == 2
        # the column points into the file line, past the opening quote
        assert info.value.column is not None
        assert info.value.column > len('pred pos "')
        assert f"column {info.value.column}" in info.value.detail

    def test_bad_guard_keeps_its_column(self):
        with pytest.raises(ParseError) as info:
            parse_sfa_file(HEADER + "trans q0 q1 (pos &)\n")
        assert info.value.line == 6
        assert info.value.column > len("trans q0 q1 ")
        assert "(line 6, column " in info.value.detail

    def test_bad_constraint_keeps_its_column(self):
        with pytest.raises(ParseError) as info:
            parse_sfa_file(HEADER + 'trans q0 q1 (pos)\ncardinality "|pos| ="\n')
        assert info.value.line == 7
        assert info.value.column > len('cardinality "')

    @pytest.mark.parametrize("name", ["U", "S1", "S12", "empty", "true"])
    def test_reserved_predicate_names(self, name):
        with pytest.raises(SemanticError) as info:
            parse_sfa_file(f'algebra lia\npred {name} "x > 0"\n')
        assert info.value.line == 2

    def test_names_that_only_look_reserved(self):
        sfa, _ = parse_sfa_file('algebra lia\npred Sx "x > 0"\npred U2 "x < 0"\nstates q0\ninitial q0\n')
        assert SfaService.generators(sfa).names == ("Sx", "U2")


class TestRender:
    def test_named_fixture(self, odd_pos_card2):
        sfa, constraint = odd_pos_card2
        text = render_sfa_file(sfa, constraint)
        assert 'pred odd "x % 2 == 1"' in text
        assert "trans q0 q1 (odd & pos)" in text
        assert text.endswith('cardinality "|odd & pos| = 2"\n')
        again, again_constraint = parse_sfa_file(text)
        assert DecideService.check_sat_card(again, again_constraint).witness == [1, 1]

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(min_value=0, max_value=10_000),
        st.lists(st.integers(min_value=-4, max_value=4), max_size=3),
    )
    def test_render_then_parse_accepts_the_same_words(self, seed, word):
        sfa = InstanceFactory(seed).sfa()
        again, _ = parse_sfa_file(render_sfa_file(sfa))
        assert SfaService.accepts(again, word) == SfaService.accepts(sfa, word)
