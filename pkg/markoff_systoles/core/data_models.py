from typing import Dict, List, Literal, Optional

from pydantic import (
    BaseModel,
    Field,
    NonNegativeInt,
    PositiveInt,
    ValidationInfo,
    field_validator,
)

ComplexPair = List[float]


class RunConfig(BaseModel):
    """Validated run configuration"""
    seed: int = Field(
        1,
        examples=[1, 42, 20251019],
        description="seed recorded in every randomized report"
    )
    samples: PositiveInt = Field(
        100_000,
        examples=[1_000, 100_000],
        description="sample budget of the sampling verifiers"
    )
    depth_cap: PositiveInt = Field(
        10_000,
        examples=[100, 10_000],
        description="maximal number of descent steps"
    )
    precision: Literal['double', 'high'] = Field(
        'double',
        description="double-precision complex or mpmath high precision"
    )
    output: Literal['text', 'json', 'dot'] = Field(
        'text',
        description="rendering of command results"
    )
    workers: PositiveInt = Field(
        1,
        description="worker processes for sampling; never changes results"
    )
    chunk_size: PositiveInt = Field(
        10_000,
        description="samples per deterministic sub-seed chunk"
    )
    high_precision_dps: PositiveInt = Field(
        50,
        description="significant decimal digits in high precision mode"
    )
    tolerances: Dict[str, float] = Field(
        default_factory=dict,
        description="named numeric tolerances"
    )

    @field_validator('high_precision_dps')
    @classmethod
    def validate_dps(cls, v: int) -> int:
        if v < 50:
            raise ValueError(f"high precision needs at least 50 digits, got {v}")
        return v

    @field_validator('tolerances')
    @classmethod
    def validate_tolerances(cls, v: Dict[str, float]) -> Dict[str, float]:
        for name, value in v.items():
            if not value > 0:
                raise ValueError(f"tolerance '{name}' must be positive, got {value}")
        return v


class VerificationReport(BaseModel):
    """Outcome of a sampling verifier"""
    theorem: str = Field(
        ...,
        examples=['sink-complex', 'sink-real', 'sink-positive', 'hat', 'genus2'],
        description="tag of the verified statement"
    )
    samples: NonNegativeInt = Field(
        ...,
        description="number of admissible samples that were checked"
    )
    worst_margin: float = Field(
        ...,
        description="minimum over samples of bound minus observed value"
    )
    witness: Dict[str, ComplexPair] = Field(
        default_factory=dict,
        description="parameter point achieving the worst margin, values as [re, im]"
    )
    tolerance: float = Field(1e-6, description="pass tolerance")
    passed: bool = Field(..., description="worst_margin >= -tolerance")
    seed: int = Field(..., description="seed the report replays from")
    bound: Optional[float] = Field(None, description="the bound being checked")
    details: Dict[str, float] = Field(
        default_factory=dict,
        description="secondary margins and counters"
    )

    @field_validator('passed')
    @classmethod
    def validate_passed(cls, v: bool, info: ValidationInfo) -> bool:
        # secondary checks may fail a report whose margin is fine, never the reverse
        if info.data and 'worst_margin' in info.data and 'tolerance' in info.data:
            expected = info.data['worst_margin'] >= -info.data['tolerance']
            if v and not expected:
                raise ValueError(
                    f"passed={v} contradicts worst_margin={info.data['worst_margin']} "
                    f"and tolerance={info.data['tolerance']}"
                )
        return v

    def to_json(self) -> str:
        return self.model_dump_json(include={'theorem', 'samples', 'worst_margin', 'witness', 'passed', 'seed'})


class SystoleBoundModel(BaseModel):
    """JSON shape of a systole bound"""
    quantity: str
    value: float
    context: str = ""


class MapSnapshot(BaseModel):
    """JSON shape of a Markoff map: parameters, base triple and cached region values"""
    mu: List[ComplexPair] = Field(..., min_length=4, max_length=4)
    base: List[ComplexPair] = Field(..., min_length=3, max_length=3)
    regions: Dict[str, ComplexPair] = Field(default_factory=dict)

    @field_validator('mu', 'base')
    @classmethod
    def validate_pairs(cls, v: List[ComplexPair]) -> List[ComplexPair]:
        for pair in v:
            if len(pair) != 2:
                raise ValueError(f"complex values are [re, im] pairs, got {pair}")
        return v
