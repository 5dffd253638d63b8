import pytest
from hypothesis import given, settings, strategies as st

from sfasat.core.exceptions import LengthMismatch, SemanticError
from sfasat.models.bapa import Card, SetVar
from sfasat.models.predicate import TRUE, LinearAtom, ModAtom
from sfasat.models.presburger import Const, Eq
from sfasat.models.sfa import CardinalityConstraint, GeneratorSet, SAnd, Sfa, SNot, SVar
from sfasat.seed.factories import InstanceFactory
from sfasat.services.algebra_service import AlgebraService
from sfasat.services.sfa_service import SfaService
from tests.conftest import bv, lia

ODD, POS = ModAtom(2, 1), LinearAtom(1, 0, ">", 0)


class TestAccepts:
    @pytest.mark.parametrize(
        "word, expected",
        [([1, 3], True), ([1], False), ([], True), ([1, -3], False), ([1, 2], False), ([5, 7, 9, 11], True)],
    )
    def test_even_length_positive_odd(self, odd_pos_raw, word, expected):
        assert SfaService.accepts(odd_pos_raw, word) is expected

    def test_named_generators_behave_the_same(self, odd_pos, odd_pos_raw):
        for word in ([1, 3], [3], [], [2, 2], [-1, 1]):
            assert SfaService.accepts(odd_pos, word) == SfaService.accepts(odd_pos_raw, word)


class TestConstruction:
    def test_unknown_state(self):
        with pytest.raises(SemanticError):
            Sfa.build("lia", ["q0"], "q0", [], [("q0", lia("true"), "q1")])

    def test_unknown_initial_state(self):
        with pytest.raises(SemanticError):
            Sfa.build("lia", ["q0"], "q9", [], [])

    def test_guard_of_another_algebra(self):
        with pytest.raises(SemanticError):
            Sfa.build("lia", ["q0"], "q0", [], [("q0", bv("true"), "q0")])

    def test_duplicate_transitions_are_removed(self):
        guard = lia("x > 0")
        sfa = Sfa.build("lia", ["q0"], "q0", ["q0"], [("q0", guard, "q0"), ("q0", guard, "q0")])
        assert len(sfa.transitions) == 1


class TestGenerators:
    def test_first_occurrence_order(self, odd_pos_raw):
        assert SfaService.generators(odd_pos_raw).generators == (ODD, POS)

    def test_true_guard_has_no_generators(self):
        sfa = Sfa.build("lia", ["q0"], "q0", ["q0"], [("q0", lia("true"), "q0")])
        assert len(SfaService.generators(sfa)) == 0

    def test_deduplicated(self):
        sfa = Sfa.build(
            "lia", ["q0"], "q0", ["q0"], [("q0", lia("x > 0"), "q0"), ("q0", lia("x > 0 && x < 5"), "q0")]
        )
        assert SfaService.generators(sfa).generators == (POS, LinearAtom(1, 0, "<", 5))

    def test_declared_order_and_names(self, odd_pos):
        generators = SfaService.generators(odd_pos)
        assert generators.names == ("odd", "pos")
        assert generators.resolve("pos") == 1
        assert generators.resolve("S1") == 0
        with pytest.raises(SemanticError):
            generators.resolve("S3")


class TestPropositionalize:
    def test_single_letter_two_cycle(self, odd_pos_raw):
        table, letters = SfaService.propositionalize(odd_pos_raw)
        assert letters == [SAnd(SVar(1), SVar(2))]
        assert [(t.source, t.letter, t.target) for t in table.transitions] == [("q0", 0, "q1"), ("q1", 0, "q0")]

    def test_complementary_guards(self):
        sfa = Sfa.build(
            "lia", ["q0"], "q0", ["q0"], [("q0", lia("x > 0"), "q0"), ("q0", lia("!x > 0"), "q0")]
        )
        _, letters = SfaService.propositionalize(sfa)
        assert letters == [SVar(1), SNot(SVar(1))]

    def test_letter_guards(self, odd_pos_raw):
        table, _ = SfaService.propositionalize(odd_pos_raw)
        assert SfaService.letter_guards(odd_pos_raw, table) == [odd_pos_raw.transitions[0].guard]


class TestMinterms:
    def test_minterm_predicate(self, odd_pos_raw):
        generators = SfaService.generators(odd_pos_raw)
        both = SfaService.minterm_predicate("11", generators)
        neither = SfaService.minterm_predicate("00", generators)
        assert AlgebraService.evaluate(both, 3) and not AlgebraService.evaluate(both, -3)
        assert AlgebraService.evaluate(neither, -2) and not AlgebraService.evaluate(neither, 3)

    def test_empty_minterm_is_top(self):
        assert SfaService.minterm_predicate("", GeneratorSet("lia", ())).body == TRUE

    def test_length_mismatch(self, odd_pos_raw):
        with pytest.raises(LengthMismatch):
            SfaService.minterm_predicate("1", SfaService.generators(odd_pos_raw))

    def test_minterm_of(self, odd_pos_raw):
        generators = SfaService.generators(odd_pos_raw)
        assert SfaService.minterm_of(3, generators) == "11"
        assert SfaService.minterm_of(-3, generators) == "10"
        assert SfaService.minterm_of(0, GeneratorSet("lia", ())) == ""

    def test_table_of(self, odd_pos_raw):
        assert SfaService.table_of(odd_pos_raw, [1, 3]) == ("11", "11")
        assert SfaService.table_of(odd_pos_raw, []) == ()
        assert SfaService.table_of(odd_pos_raw, [-1]) == ("10",)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=-10, max_value=10))
    def test_minterms_partition_the_domain(self, seed, d):
        generators = SfaService.generators(InstanceFactory(seed).sfa())
        holding = [
            beta
            for beta in (format(i, f"0{len(generators)}b") if len(generators) else "" for i in range(1 << len(generators)))
            if AlgebraService.evaluate(SfaService.minterm_predicate(beta, generators), d)
        ]
        assert holding == [SfaService.minterm_of(d, generators)]


class TestTables:
    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=0, max_value=10_000),
        st.lists(st.integers(min_value=-4, max_value=4), max_size=4),
    )
    def test_words_and_their_tables_agree(self, seed, word):
        sfa = InstanceFactory(seed).sfa()
        table, _ = SfaService.propositionalize(sfa)
        assert SfaService.accepts(sfa, word) == SfaService.table_accepts(table, SfaService.table_of(sfa, word))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=-6, max_value=6))
    def test_letters_agree_with_guards(self, seed, d):
        sfa = InstanceFactory(seed).sfa()
        table, letters = SfaService.propositionalize(sfa)
        beta = SfaService.minterm_of(d, SfaService.generators(sfa))
        for t, lt in zip(sfa.transitions, table.transitions):
            assert AlgebraService.evaluate(t.guard, d) == letters[lt.letter].holds(beta)


class TestPruneAndReach:
    def test_epsilon_counts(self, odd_pos):
        assert SfaService.prune_and_reach(odd_pos) is True

    def test_empty_guard_blocks(self, unsat_guard):
        assert SfaService.prune_and_reach(unsat_guard) is False

    def test_no_accepting_states(self):
        sfa = Sfa.build("lia", ["q0", "q1"], "q0", [], [("q0", lia("true"), "q1")])
        assert SfaService.prune_and_reach(sfa) is False


class TestCardinalityConstraint:
    def test_formula_is_annotated_as_a_formula(self):
        assert CardinalityConstraint.__annotations__["formula"] == "Formula"

    def test_render_falls_back_to_the_formula(self):
        formula = Eq(Card(SetVar("odd")), Const(2))
        assert CardinalityConstraint(formula=formula).render() == formula.render()
        assert CardinalityConstraint(formula=formula, text="|odd| = 2").render() == "|odd| = 2"
