"""Validated run configuration for the dirlap command line."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dirlap.core.generators import GeneratorSpec
from dirlap.core.graph import DEFAULT_BETA_TOLERANCE

Command = Literal["validate", "spectra", "range", "cheeger", "essgap", "repro-z", "gen"]
GeneratedKind = Literal[
    "z-line", "symmetric-line", "directed-cycle", "symmetric-random", "circulation-random"
]

REPRO_Z_RADIUS = 64
REPRO_Z_N_MAX = 8


class RunConfig(BaseModel):
    """One CLI invocation.

    Exactly one of ``input`` and ``gen`` names the graph, except for ``repro-z``,
    which always runs on the integer-line window.
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    input: Optional[Path] = None
    gen: Optional[GeneratedKind] = None
    radius: Optional[int] = Field(default=None, ge=1)
    size: int = Field(default=12, ge=2)
    seed: int = 0
    forward_weight: float = Field(default=1.0, gt=0)
    backward_weight: float = Field(default=0.0, ge=0)
    angles: int = Field(default=360, ge=8)
    n_max: Optional[int] = Field(default=None, ge=1)
    k_schedule: tuple[int, ...] = (2, 3, 4)
    tol_beta: float = Field(default=DEFAULT_BETA_TOLERANCE, ge=0)
    out: Path = Path("out")
    verbose: bool = False
    threads: Optional[int] = Field(default=None, ge=1)

    @field_validator("k_schedule")
    @classmethod
    def _check_multipliers(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("k_schedule needs at least one multiplier")
        if any(m < 2 for m in value):
            raise ValueError(f"k_schedule multipliers must be >= 2, got {list(value)}")
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def _check_input_source(self) -> "RunConfig":
        if self.command == "repro-z":
            if self.input is not None or self.gen not in (None, "z-line"):
                raise ValueError("repro-z always runs on the z-line window; drop --input/--gen")
            return self
        if (self.input is None) == (self.gen is None):
            raise ValueError("Exactly one of --input and --gen is required")
        return self

    @property
    def effective_radius(self) -> int:
        if self.radius is not None:
            return self.radius
        return REPRO_Z_RADIUS if self.command == "repro-z" else 16

    @property
    def effective_n_max(self) -> int:
        if self.n_max is not None:
            return self.n_max
        return REPRO_Z_N_MAX if self.command == "repro-z" else 4

    def generator_spec(self) -> GeneratorSpec:
        if self.command == "repro-z":
            return GeneratorSpec(kind="z-line", radius=self.effective_radius)
        if self.input is not None:
            return GeneratorSpec(kind="file", path=self.input)
        assert self.gen is not None
        return GeneratorSpec(
            kind=self.gen,
            radius=self.effective_radius,
            size=self.size,
            seed=self.seed,
            forward_weight=self.forward_weight,
            backward_weight=self.backward_weight,
        )
