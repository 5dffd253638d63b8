from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Optional, List, Dict, Any

from sfasat.models.presburger import node_count


class FlowModel(BaseModel):
    """Transition multiplicities of one accepted symbolic table"""
    flow: List[int] = Field(default_factory=list, description="y_t per transition, declaration order")
    final: Optional[str] = Field(None, description="Accepting state the path ends in; None for the empty table")
    depth: Dict[str, int] = Field(default_factory=dict, description="Spanning depth z_q per state")

    @field_validator("flow")
    @classmethod
    def validate_flow(cls, v):
        if any(y < 0 for y in v):
            raise ValueError("Flow values must be non-negative")
        return v


class ParikhFormula(BaseModel):
    """ρ together with the names of its variable families"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    formula: Any
    letter_vars: List[str]
    flow_vars: List[str]
    depth_vars: Dict[str, str]
    selector_vars: Dict[str, str]

    @property
    def node_count(self) -> int:
        return node_count(self.formula)
