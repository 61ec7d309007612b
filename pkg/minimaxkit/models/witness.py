"""
Witness models - explicit strategies exhibiting the failure of the minimax
equality on countable games.
"""
from enum import Enum
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, field_serializer

from minimaxkit.models.labels import Label, label_to_json
from minimaxkit.models.procedure import LabeledDistribution


class CountableGame(str, Enum):
    """Untruncated games the witnesses are built for."""
    PICK_SMALLER = "pick-smaller"
    CLAMP = "clamp"


class WitnessReport(BaseModel):
    """
    A nature point θ₀ or a statistician procedure δ₀ and the risk it attains.

    ``holds`` records whether ``achieved_value`` clears ``bound`` strictly
    (above it for nature, below it for the statistician).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    game: CountableGame
    side: str
    epsilon: float
    witness_point: Label
    witness_procedure: Optional[LabeledDistribution] = None
    chosen_set: List[Label]
    achieved_value: float
    bound: float
    holds: bool

    @field_serializer("witness_point")
    def serialize_point(self, point: Label) -> Any:
        return label_to_json(point)

    @field_serializer("chosen_set")
    def serialize_set(self, points: List[Label]) -> List[Any]:
        return [label_to_json(p) for p in points]


class EscapingPriorEntry(BaseModel):
    """Bayes risks of each listed procedure against the point mass at one K."""

    k: int
    prior_point: str
    bayes_risks: List[float]
    infimum: float
    flagged: List[int] = []


class EscapingPriorReport(BaseModel):
    game: CountableGame
    entries: List[EscapingPriorEntry]
