from pathlib import Path

import pytest

from sfasat.models.sfa import Sfa
from sfasat.services.algebra_service import AlgebraService
from sfasat.utils.sfa_file import parse_sfa_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def lia(text: str):
    return AlgebraService.parse_predicate(text, "lia")


def bv(text: str, width: int = 6):
    return AlgebraService.parse_predicate(text, f"bv{width}")


def load(name: str):
    return parse_sfa_file((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def odd_pos():
    sfa, _ = load("odd_pos.sfa")
    return sfa


@pytest.fixture
def odd_pos_card2():
    return load("odd_pos_card2.sfa")


@pytest.fixture
def bv_example():
    sfa, _ = load("bv_example.sfa")
    return sfa


@pytest.fixture
def unsat_guard():
    sfa, _ = load("unsat_guard.sfa")
    return sfa


@pytest.fixture
def odd_pos_raw():
    """The even-length positive-odd automaton with raw (unnamed) generators."""
    guard = lia("x % 2 == 1 && x > 0")
    return Sfa.build("lia", ["q0", "q1"], "q0", ["q0"], [("q0", guard, "q1"), ("q1", guard, "q0")])
