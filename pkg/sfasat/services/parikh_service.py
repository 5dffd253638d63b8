"""
Parikh Service

Letter-count images of table automata as existential Presburger formulas of
linear size, plus the path realization used to rebuild words from counts.

ρ over letter counts k_1..k_m uses one flow variable y_t per transition, one
depth z_q per state and one selector f_q per accepting state (the edge into a
virtual sink). A non-empty table is a flow of value 1 from q0 to the sink in
which every used state hangs off q0 through a chain of strictly increasing
depths; the empty table is a separate disjunct, present only when q0 accepts.
"""

from collections import deque
from typing import Dict, List, Sequence, Set, Tuple

import networkx as nx

from sfasat.core.config import settings
from sfasat.core.exceptions import BoundExceeded, InvalidFlow
from sfasat.core.logging import get_logger
from sfasat.models.presburger import (
    Add,
    Const,
    Eq,
    Exists,
    Formula,
    IntVar,
    conj,
    disj,
    ge,
    total,
)
from sfasat.models.sfa import TableAutomaton
from sfasat.schemas.parikh import FlowModel, ParikhFormula
from sfasat.services.presburger_service import IntAssignment, PresburgerService

logger = get_logger(__name__)

_SINK = ("sink",)


class ParikhService:
    """Service for Parikh images of table automata"""

    @staticmethod
    def parikh_formula(automaton: TableAutomaton, prefix: str = "") -> ParikhFormula:
        transitions = automaton.transitions
        accepting = [q for q in automaton.states if q in automaton.accepting]

        k = [IntVar(f"{prefix}k{j + 1}") for j in range(automaton.letter_count)]
        y = [IntVar(f"{prefix}y{i}") for i in range(len(transitions))]
        z = {q: IntVar(f"{prefix}z.{q}") for q in automaton.states}
        f = {q: IntVar(f"{prefix}f.{q}") for q in accepting}

        counts = [
            Eq(k[j], total(y[i] for i, t in enumerate(transitions) if t.letter == j))
            for j in range(automaton.letter_count)
        ]
        nonnegative = [ge(v, Const(0)) for v in (*y, *f.values())]

        incoming: Dict[str, List[int]] = {q: [] for q in automaton.states}
        outgoing: Dict[str, List[int]] = {q: [] for q in automaton.states}
        for i, t in enumerate(transitions):
            incoming[t.target].append(i)
            outgoing[t.source].append(i)

        conservation = []
        for q in automaton.states:
            inflow = [y[i] for i in incoming[q]]
            if q == automaton.initial:
                inflow.append(Const(1))
            outflow = [y[i] for i in outgoing[q]]
            if q in f:
                outflow.append(f[q])
            conservation.append(Eq(total(inflow), total(outflow)))

        connectivity = [Eq(z[automaton.initial], Const(1))]
        for q in automaton.states:
            if q == automaton.initial:
                continue
            unused = conj(Eq(total(y[i] for i in incoming[q]), Const(0)), Eq(z[q], Const(0)))
            parents = [
                conj(
                    ge(y[i], Const(1)),
                    ge(z[transitions[i].source], Const(1)),
                    Eq(z[q], Add((z[transitions[i].source], Const(1)))),
                )
                for i in incoming[q]
                if transitions[i].source != q
            ]
            connectivity.append(disj(unused, *parents))

        path = conj(Eq(total(f.values()), Const(1)), *conservation, *connectivity)
        if automaton.initial in automaton.accepting:
            empty = conj(*(Eq(v, Const(0)) for v in (*y, *f.values())))
            shape = disj(empty, path)
        else:
            shape = path

        internal = tuple(v.name for v in (*y, *z.values(), *f.values()))
        formula = Exists(internal, conj(*counts, *nonnegative, shape))
        result = ParikhFormula(
            formula=formula,
            letter_vars=[v.name for v in k],
            flow_vars=[v.name for v in y],
            depth_vars={q: v.name for q, v in z.items()},
            selector_vars={q: v.name for q, v in f.items()},
        )
        logger.debug(
            f"parikh_formula: |Q|={len(automaton.states)} |Δ|={len(transitions)} "
            f"m={automaton.letter_count} nodes={result.node_count}"
        )
        return result

    @staticmethod
    def size_bound(automaton: TableAutomaton) -> int:
        """C·(|Q| + |Δ| + m), the documented ceiling on ρ's node count."""
        size = len(automaton.states) + len(automaton.transitions) + automaton.letter_count
        return settings.PARIKH_SIZE_CONSTANT * size

    @staticmethod
    def flow_from_model(parikh: ParikhFormula, model: IntAssignment) -> FlowModel:
        final = next((q for q, name in parikh.selector_vars.items() if model.get(name, 0) >= 1), None)
        return FlowModel(
            flow=[model.get(name, 0) for name in parikh.flow_vars],
            final=final,
            depth={q: model.get(name, 0) for q, name in parikh.depth_vars.items()},
        )

    @staticmethod
    def letter_counts(parikh: ParikhFormula, model: IntAssignment) -> List[int]:
        return [model.get(name, 0) for name in parikh.letter_vars]

    @staticmethod
    def admits(automaton: TableAutomaton, counts: Sequence[int]) -> bool:
        """Whether ρ holds for the given letter counts."""
        parikh = ParikhService.parikh_formula(automaton)
        pinned = [Eq(IntVar(name), Const(c)) for name, c in zip(parikh.letter_vars, counts)]
        return PresburgerService.pa_solve(conj(parikh.formula, *pinned)) is not None

    @staticmethod
    def realize_path(automaton: TableAutomaton, flow: FlowModel) -> List[int]:
        """Letters (0-based) of an accepted table whose transition counts equal the flow."""
        transitions = automaton.transitions
        if len(flow.flow) != len(transitions):
            raise InvalidFlow(f"Flow has {len(flow.flow)} entries for {len(transitions)} transitions")

        if not any(flow.flow):
            if automaton.initial in automaton.accepting and flow.final in (None, automaton.initial):
                return []
            raise InvalidFlow("Empty flow but the initial state does not accept")
        if flow.final not in automaton.accepting:
            raise InvalidFlow(f"Flow ends in {flow.final}, which is not accepting")

        balance = {q: 0 for q in automaton.states}
        balance[automaton.initial] += 1
        balance[flow.final] -= 1
        for t, count in zip(transitions, flow.flow):
            balance[t.source] -= count
            balance[t.target] += count
        broken = [q for q, b in balance.items() if b != 0]
        if broken:
            logger.error(f"realize_path: conservation fails at {broken}")
            raise InvalidFlow(f"Flow conservation fails at state {broken[0]}")

        graph = nx.MultiDiGraph()
        graph.add_node(automaton.initial)
        for i, (t, count) in enumerate(zip(transitions, flow.flow)):
            for copy in range(count):
                graph.add_edge(t.source, t.target, key=(i, copy))
        graph.add_edge(flow.final, _SINK, key="end")

        used = {node for edge in graph.edges() for node in edge}
        reachable = nx.descendants(graph, automaton.initial) | {automaton.initial}
        if not used <= reachable:
            unreached = sorted(str(q) for q in used - reachable)
            raise InvalidFlow(f"Flow is disconnected from the initial state at {unreached[0]}")

        letters = [
            transitions[key[0]].letter
            for _, target, key in nx.eulerian_path(graph, source=automaton.initial, keys=True)
            if target != _SINK
        ]
        logger.debug(f"realize_path: table of length {len(letters)}")
        return letters

    @staticmethod
    def follows(automaton: TableAutomaton, letters: Sequence[int]) -> bool:
        """Whether some run over the letter sequence ends in an accepting state."""
        current: Set[str] = {automaton.initial}
        for letter in letters:
            current = {t.target for t in automaton.transitions if t.source in current and t.letter == letter}
            if not current:
                return False
        return bool(current & automaton.accepting)

    @staticmethod
    def parikh_members_upto(automaton: TableAutomaton, length: int) -> Set[Tuple[int, ...]]:
        """Count vectors of accepted tables of length at most `length` (breadth first)."""
        if length > settings.PARIKH_ENUM_MAX_LEN:
            raise BoundExceeded(
                f"parikh_members_upto is limited to length {settings.PARIKH_ENUM_MAX_LEN}, got {length}"
            )
        zero = (0,) * automaton.letter_count
        members: Set[Tuple[int, ...]] = set()
        frontier: Set[Tuple[str, Tuple[int, ...]]] = {(automaton.initial, zero)}
        queue = deque([(frontier, 0)])
        while queue:
            level, depth = queue.popleft()
            members.update(counts for state, counts in level if state in automaton.accepting)
            if depth == length:
                continue
            following = set()
            for state, counts in level:
                for t in automaton.transitions:
                    if t.source == state:
                        bumped = counts[: t.letter] + (counts[t.letter] + 1,) + counts[t.letter + 1 :]
                        following.add((t.target, bumped))
            if following:
                queue.append((following, depth + 1))
        return members

    @staticmethod
    def render_formula(formula: Formula) -> str:
        return formula.render()
