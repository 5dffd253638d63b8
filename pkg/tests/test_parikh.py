import pytest
from hypothesis import given, settings, strategies as st

from sfasat.core.exceptions import BoundExceeded, InvalidFlow
from sfasat.models.presburger import Const, Eq, IntVar, conj, free_variables
from sfasat.models.sfa import LetterTransition, SVar, TableAutomaton
from sfasat.schemas.parikh import FlowModel
from sfasat.seed.factories import InstanceFactory
from sfasat.services.parikh_service import ParikhService
from sfasat.services.presburger_service import PresburgerService
from sfasat.services.selftest_service import count_vectors


def automaton(states, accepting, transitions, letters=1):
    return TableAutomaton(
        states=tuple(states),
        initial=states[0],
        accepting=frozenset(accepting),
        transitions=tuple(LetterTransition(*t) for t in transitions),
        letters=tuple(SVar(j + 1) for j in range(letters)),
    )


@pytest.fixture
def two_cycle():
    return automaton(["q0", "q1"], ["q0"], [("q0", 0, "q1"), ("q1", 0, "q0")])


@pytest.fixture
def self_loop():
    return automaton(["q0"], ["q0"], [("q0", 0, "q0")])


@pytest.fixture
def unreachable():
    return automaton(["q0", "q1"], ["q1"], [])


class TestParikhFormula:
    def test_two_cycle_admits_even_counts(self, two_cycle):
        assert [k for k in range(7) if ParikhService.admits(two_cycle, [k])] == [0, 2, 4, 6]

    def test_self_loop_admits_everything(self, self_loop):
        assert all(ParikhService.admits(self_loop, [k]) for k in range(5))

    def test_unreachable_accepting_state(self, unreachable):
        assert not ParikhService.admits(unreachable, [0])
        assert not ParikhService.admits(unreachable, [1])

    def test_free_variables_are_the_letter_counts(self):
        parikh = ParikhService.parikh_formula(
            automaton(["q0", "q1", "q2"], ["q2"], [("q0", 0, "q1"), ("q1", 1, "q2"), ("q2", 0, "q0")], letters=2)
        )
        assert free_variables(parikh.formula) == ("k1", "k2")
        assert parikh.letter_vars == ["k1", "k2"]

    def test_prefix(self, two_cycle):
        parikh = ParikhService.parikh_formula(two_cycle, prefix="rho.")
        assert parikh.letter_vars == ["rho.k1"]
        assert parikh.flow_vars == ["rho.y0", "rho.y1"]

    @pytest.mark.parametrize("n", [5, 10, 25, 50])
    def test_linear_size_on_chains(self, n):
        chain = InstanceFactory.chain_automaton(n)
        assert ParikhService.parikh_formula(chain).node_count <= ParikhService.size_bound(chain)

    def test_branching_automaton_needs_a_connected_flow(self):
        # q1 <-> q2 is a cycle unreachable from q0; its flow must not be counted
        a = automaton(
            ["q0", "q1", "q2", "q3"],
            ["q3"],
            [("q0", 0, "q3"), ("q1", 1, "q2"), ("q2", 1, "q1")],
            letters=2,
        )
        assert ParikhService.admits(a, [1, 0])
        assert not ParikhService.admits(a, [1, 2])


class TestMembers:
    def test_two_cycle(self, two_cycle):
        assert ParikhService.parikh_members_upto(two_cycle, 4) == {(0,), (2,), (4,)}

    def test_self_loop(self, self_loop):
        assert ParikhService.parikh_members_upto(self_loop, 2) == {(0,), (1,), (2,)}

    def test_nothing_accepted(self, unreachable):
        assert ParikhService.parikh_members_upto(unreachable, 3) == set()

    def test_length_guard(self, self_loop):
        with pytest.raises(BoundExceeded):
            ParikhService.parikh_members_upto(self_loop, 13)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_formula_matches_enumeration(self, seed):
        a = InstanceFactory(seed).table_automaton(max_states=4, max_letters=3, max_transitions=6)
        members = ParikhService.parikh_members_upto(a, 3)
        for counts in count_vectors(a.letter_count, 3):
            assert ParikhService.admits(a, counts) == (counts in members), counts


class TestRealizePath:
    def test_two_cycle(self, two_cycle):
        assert ParikhService.realize_path(two_cycle, FlowModel(flow=[1, 1], final="q0")) == [0, 0]

    def test_empty_flow(self, two_cycle):
        assert ParikhService.realize_path(two_cycle, FlowModel(flow=[0, 0])) == []

    def test_self_loop(self, self_loop):
        assert ParikhService.realize_path(self_loop, FlowModel(flow=[3], final="q0")) == [0, 0, 0]

    def test_conservation_violated(self, two_cycle):
        with pytest.raises(InvalidFlow):
            ParikhService.realize_path(two_cycle, FlowModel(flow=[1, 0], final="q0"))

    def test_final_state_must_accept(self, two_cycle):
        with pytest.raises(InvalidFlow):
            ParikhService.realize_path(two_cycle, FlowModel(flow=[1, 0], final="q1"))

    def test_disconnected_flow(self):
        a = automaton(["q0", "q1", "q2"], ["q0"], [("q0", 0, "q0"), ("q1", 0, "q2"), ("q2", 0, "q1")])
        with pytest.raises(InvalidFlow):
            ParikhService.realize_path(a, FlowModel(flow=[0, 1, 1], final="q0"))

    def test_negative_flow_is_rejected(self):
        with pytest.raises(ValueError):
            FlowModel(flow=[-1])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_models_realize_accepted_tables(self, seed):
        a = InstanceFactory(seed).table_automaton()
        parikh = ParikhService.parikh_formula(a)
        model = PresburgerService.pa_solve(parikh.formula)
        if model is None:
            assert ParikhService.parikh_members_upto(a, 4) == set()
            return
        letters = ParikhService.realize_path(a, ParikhService.flow_from_model(parikh, model))
        assert ParikhService.follows(a, letters)
        counts = ParikhService.letter_counts(parikh, model)
        assert [letters.count(j) for j in range(a.letter_count)] == counts

    @settings(max_examples=15, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_every_enumerated_member_is_realized(self, seed):
        a = InstanceFactory(seed).table_automaton(max_states=4, max_letters=3, max_transitions=6)
        parikh = ParikhService.parikh_formula(a)
        for counts in sorted(ParikhService.parikh_members_upto(a, 3)):
            pinned = [Eq(IntVar(name), Const(c)) for name, c in zip(parikh.letter_vars, counts)]
            model = PresburgerService.pa_solve(conj(parikh.formula, *pinned))
            assert model is not None, counts
            letters = ParikhService.realize_path(a, ParikhService.flow_from_model(parikh, model))
            assert ParikhService.follows(a, letters)
            assert tuple(letters.count(j) for j in range(a.letter_count)) == counts
