from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, List, Dict

from sfasat.schemas.result import SatStatus


class SetModel(BaseModel):
    """Venn region cardinalities over ordered set variables, optionally with concrete sets"""
    set_vars: List[str] = Field(default_factory=list)
    universe: int = Field(..., ge=0, description="Universe size u; elements are 1..u")
    regions: Dict[str, int] = Field(default_factory=dict, description="l_β per region bitstring")
    integers: Dict[str, int] = Field(default_factory=dict, description="Values of integer variables")
    sets: Optional[Dict[str, List[int]]] = None

    @field_validator("regions")
    @classmethod
    def validate_regions(cls, v):
        for beta, count in v.items():
            if count < 0:
                raise ValueError(f"Region {beta} has negative cardinality {count}")
            if any(bit not in "01" for bit in beta):
                raise ValueError(f"Region {beta} is not a bitstring")
        return v

    @model_validator(mode="after")
    def validate_consistency(self):
        if sum(self.regions.values()) != self.universe:
            raise ValueError("Region cardinalities must add up to the universe size")
        for beta in self.regions:
            if len(beta) != len(self.set_vars):
                raise ValueError(f"Region {beta} does not match {len(self.set_vars)} set variables")
        if self.sets is not None:
            induced: Dict[str, int] = {}
            for element in range(1, self.universe + 1):
                beta = "".join("1" if element in self.sets.get(name, []) else "0" for name in self.set_vars)
                induced[beta] = induced.get(beta, 0) + 1
            stated = {beta: count for beta, count in self.regions.items() if count}
            if induced != stated:
                raise ValueError("Concrete sets do not induce the stated region cardinalities")
        return self


class SparseCertificate(BaseModel):
    """Listed regions i_1..i_N plus an assignment for the restricted expansion"""
    set_vars: List[str] = Field(default_factory=list)
    regions: List[str] = Field(default_factory=list)
    assignment: Dict[str, int] = Field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.regions)


class BapaReport(BaseModel):
    status: SatStatus
    model: Optional[SetModel] = None
    certificate: Optional[SparseCertificate] = None
    sparsity_bound: int
