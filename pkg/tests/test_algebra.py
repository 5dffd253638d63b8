import pytest
from hypothesis import given, settings, strategies as st

from sfasat.core.exceptions import AlgebraMismatch
from sfasat.models.predicate import (
    COMPARISONS,
    FALSE,
    LinearAtom,
    MemberAtom,
    ModAtom,
    PAnd,
    PAtom,
    PNot,
    POr,
    Predicate,
    Witness,
)
from sfasat.services.algebra_service import AlgebraService
from tests.conftest import bv, lia

small = st.integers(min_value=-8, max_value=8)
nonzero = small.filter(lambda c: c != 0)

linear_atoms = st.builds(LinearAtom, nonzero, small, st.sampled_from(COMPARISONS), small)
mod_atoms = st.integers(min_value=1, max_value=8).flatmap(
    lambda m: st.builds(ModAtom, st.just(m), st.integers(min_value=0, max_value=m - 1))
)
integer_bodies = st.recursive(
    st.one_of(linear_atoms, mod_atoms).map(PAtom),
    lambda children: st.one_of(
        children.map(PNot),
        st.builds(PAnd, children, children),
        st.builds(POr, children, children),
    ),
    max_leaves=6,
)

WIDTH = 5
member_atoms = st.sets(st.integers(min_value=0, max_value=(1 << WIDTH) - 1), min_size=1).map(
    lambda values: PAtom(MemberAtom(tuple(sorted(values))))
)
bitvector_bodies = st.recursive(
    member_atoms,
    lambda children: st.one_of(
        children.map(PNot),
        st.builds(PAnd, children, children),
        st.builds(POr, children, children),
    ),
    max_leaves=5,
)


class TestCombine:
    def test_and_with_top_is_identity(self):
        p = lia("x > 0")
        top = AlgebraService.get("lia").top
        assert AlgebraService.combine("and", top, p) == p

    def test_not_top_is_bottom(self):
        top = AlgebraService.get("lia").top
        bottom = AlgebraService.combine("not", top)
        assert bottom.body == FALSE
        assert AlgebraService.is_satisfiable(bottom) is None

    def test_contradictory_bounds_are_empty(self):
        p = AlgebraService.combine("and", lia("x > 0"), lia("x < 0"))
        assert AlgebraService.is_satisfiable(p) is None

    def test_mixing_algebras_is_rejected(self):
        with pytest.raises(AlgebraMismatch):
            AlgebraService.combine("and", lia("x > 0"), bv("in {1}"))

    def test_not_takes_one_argument(self):
        with pytest.raises(ValueError):
            AlgebraService.combine("not", lia("x > 0"), lia("x < 0"))


class TestIntegerAlgebra:
    def test_evaluate(self):
        p = lia("x > 0 && x % 2 == 1")
        assert AlgebraService.evaluate(p, 3) is True
        assert AlgebraService.evaluate(p, -3) is False

    def test_witness_of_positive_odd(self):
        assert AlgebraService.is_satisfiable(lia("x > 0 && x % 2 == 1")) == Witness(1)

    def test_congruences_without_room(self):
        assert AlgebraService.is_satisfiable(lia("x % 2 == 0 && x % 3 == 0 && x > 0 && x < 6")) is None

    def test_excluded_points_are_skipped(self):
        found = AlgebraService.is_satisfiable(lia("x >= 0 && x != 0 && x != 1 && x % 2 == 0"))
        assert found == Witness(2)

    def test_upper_bound_only(self):
        assert AlgebraService.is_satisfiable(lia("x <= -5 && x % 3 == 0")) == Witness(-6)

    def test_unbounded_prefers_small_values(self):
        assert AlgebraService.is_satisfiable(lia("x != 0 && x % 4 == 3")) == Witness(-1)

    def test_booleans_are_not_elements(self):
        with pytest.raises(AlgebraMismatch):
            AlgebraService.evaluate(lia("x > 0"), True)

    @settings(max_examples=200, deadline=None)
    @given(integer_bodies)
    def test_witness_agrees_with_exhaustive_search(self, body):
        p = Predicate("lia", body)
        found = AlgebraService.is_satisfiable(p)
        members = [d for d in range(-64, 65) if AlgebraService.evaluate(p, d)]
        if found is not None:
            assert AlgebraService.evaluate(p, found.element)
        else:
            assert members == []
        if members:
            assert found is not None

    @settings(max_examples=100, deadline=None)
    @given(integer_bodies, integer_bodies, small)
    def test_de_morgan(self, left, right, d):
        p, q = Predicate("lia", left), Predicate("lia", right)
        lhs = AlgebraService.combine("not", AlgebraService.combine("and", p, q))
        rhs = AlgebraService.combine(
            "or", AlgebraService.combine("not", p), AlgebraService.combine("not", q)
        )
        assert AlgebraService.evaluate(lhs, d) == AlgebraService.evaluate(rhs, d)


class TestBitvectorAlgebra:
    def test_example_set(self):
        p = bv("in {6,14,22,38,54}")
        assert AlgebraService.evaluate(p, 6) is True
        assert AlgebraService.evaluate(p, 7) is False
        assert AlgebraService.is_satisfiable(p) == Witness(6)

    def test_parsed_set_is_exact(self):
        p = bv("in {6,14}")
        assert [d for d in range(64) if AlgebraService.evaluate(p, d)] == [6, 14]

    def test_top_and_bottom(self):
        assert AlgebraService.is_satisfiable(bv("true")) == Witness(0)
        assert AlgebraService.is_satisfiable(bv("false")) is None

    def test_elements_must_fit_the_width(self):
        with pytest.raises(AlgebraMismatch):
            AlgebraService.evaluate(bv("true"), 64)

    @settings(max_examples=100, deadline=None)
    @given(bitvector_bodies)
    def test_diagram_agrees_with_exhaustive_evaluation(self, body):
        algebra = AlgebraService.get(f"bv{WIDTH}")
        p = Predicate(algebra.algebra_id, body)
        members = [d for d in range(1 << WIDTH) if algebra.evaluate(p, d)]
        assert members == [d for d in range(1 << WIDTH) if algebra.evaluate_diagram(p, d)]
        found = algebra.is_satisfiable(p)
        if members:
            assert found == Witness(members[0])
        else:
            assert found is None

    @settings(max_examples=50, deadline=None)
    @given(bitvector_bodies)
    def test_diagrams_are_reduced_and_ordered(self, body):
        algebra = AlgebraService.get(f"bv{WIDTH}")
        manager = algebra.manager
        terminals = (manager.true, manager.false)
        for u in algebra.diagram_nodes(Predicate(algebra.algebra_id, body)):
            assert u.low != u.high
            for child in (u.low, u.high):
                if child not in terminals:
                    assert child.level > u.level
