from pydantic import BaseModel, Field, model_validator
from typing import Optional, List, Dict
from enum import Enum


class SatStatus(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


class CheckMethod(str, Enum):
    DECOMP = "decomp"
    PRUNE = "prune"
    BRUTE = "brute"


class LetterProfile(BaseModel):
    """Satisfiability of one letter L_j, decided on its original guard"""
    letter: str = Field(..., description="Rendered propositional letter")
    guard: str = Field(..., description="Rendered original guard")
    satisfiable: bool
    witness: Optional[int] = None


class RegionProfile(BaseModel):
    """Satisfiability of one Venn region p_β"""
    region: str = Field(..., description="Minterm bitstring β")
    satisfiable: bool
    witness: Optional[int] = None


class LetterSatProfile(BaseModel):
    generators: List[str] = Field(default_factory=list)
    letters: List[LetterProfile] = Field(default_factory=list)
    regions: List[RegionProfile] = Field(default_factory=list)

    def region_witness(self, beta: str) -> Optional[int]:
        for region in self.regions:
            if region.region == beta:
                return region.witness
        return None


class Diagnostics(BaseModel):
    """Arithmetic model behind a decision, by variable family"""
    l_beta: Dict[str, int] = Field(default_factory=dict, description="Venn region cardinalities")
    k: Dict[str, int] = Field(default_factory=dict, description="Letter counts")
    flow: List[int] = Field(default_factory=list, description="Flow per transition, declaration order")
    regions_nonzero: Optional[int] = None
    sparsity_bound: Optional[int] = None
    # brute force only: UNSAT is relative to these
    brute_domain: Optional[List[int]] = None
    brute_max_len: Optional[int] = None
    complete: bool = True


class SatResult(BaseModel):
    status: SatStatus
    witness: Optional[List[int]] = None
    diagnostics: Diagnostics = Field(default_factory=Diagnostics)

    @model_validator(mode="after")
    def validate_witness(self):
        if self.status == SatStatus.SAT and self.witness is None:
            raise ValueError("A SAT result carries a witness")
        if self.status == SatStatus.UNSAT and self.witness is not None:
            raise ValueError("An UNSAT result carries no witness")
        return self

    @property
    def is_sat(self) -> bool:
        return self.status == SatStatus.SAT


class CheckReport(BaseModel):
    """Machine-readable record printed by `check --json`"""
    status: SatStatus
    method: CheckMethod
    witness: Optional[List[int]] = None
    diagnostics: Diagnostics
    letters: List[LetterProfile] = Field(default_factory=list)


class SuiteReport(BaseModel):
    """Outcome of one oracle-agreement suite"""
    name: str
    instances: int = 0
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures
