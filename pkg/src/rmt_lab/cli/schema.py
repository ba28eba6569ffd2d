"""
Run Configuration Schema

Pydantic models for one command-line run: the shared RunConfig and one
parameter model per command. Parameters are normalized (defaults filled in)
so that the echoed configuration fully determines the outputs.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, model_validator

COMMANDS = ("sample", "esd", "kernel", "dyson", "burgers", "ldp", "holeprob", "gumbel")


class CommandParams(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SampleParams(CommandParams):
    ensemble: Literal["gue", "goe", "ginibre", "wishart", "haar"] = "gue"
    n: int = Field(64, ge=1)
    m: Optional[int] = Field(None, ge=1)
    rescale: bool = True

    @model_validator(mode="after")
    def check_wishart(self) -> "SampleParams":
        if self.ensemble == "wishart" and self.m is not None and self.m < self.n:
            raise ValueError("Wishart sampling needs m >= n")
        return self


class EsdParams(CommandParams):
    ensemble: Literal["gue", "goe", "ginibre", "wishart"] = "gue"
    n: int = Field(512, ge=1)
    m: Optional[int] = Field(None, ge=1)
    ref: Literal["semicircle", "marchenko_pastur", "circular"] = "semicircle"
    radius: Optional[float] = Field(None, gt=0)
    bins: int = Field(100, ge=1)

    @model_validator(mode="after")
    def check_reference(self) -> "EsdParams":
        pairs = {
            "gue": "semicircle",
            "goe": "semicircle",
            "wishart": "marchenko_pastur",
            "ginibre": "circular",
        }
        if pairs[self.ensemble] != self.ref:
            raise ValueError(f"Reference '{self.ref}' does not apply to the {self.ensemble} ensemble")
        if self.ensemble == "wishart" and self.m is not None and self.m < self.n:
            raise ValueError("Wishart sampling needs m >= n")
        return self


class KernelParams(CommandParams):
    family: Literal["gue_hermite", "ginibre_finite", "ginibre_infinite"] = "gue_hermite"
    n: Optional[int] = Field(8, ge=1)
    points: List[Tuple[float, float]] = Field(default_factory=lambda: [(0.0, 0.0), (0.5, 0.0)])

    @model_validator(mode="after")
    def check_points(self) -> "KernelParams":
        if not self.points:
            raise ValueError("At least one point is required")
        if self.family == "gue_hermite" and any(im != 0.0 for _, im in self.points):
            raise ValueError("GUE kernel points must be real")
        if self.family == "ginibre_infinite":
            self.n = None
        return self


class DysonParams(CommandParams):
    family: Literal["dyson", "generalized", "ou", "wishart"] = "dyson"
    n: int = Field(64, ge=1)
    beta: int = Field(2, ge=1, le=2)
    alpha: Optional[float] = Field(None, gt=0)
    beta_n: Optional[float] = Field(None, gt=0)
    theta: Optional[float] = Field(None, gt=0)
    m: Optional[int] = Field(None, ge=1)
    t_end: float = Field(1.0, gt=0)
    dt_max: float = Field(1e-3, gt=0)
    records: int = Field(10, ge=1)


class BurgersParams(CommandParams):
    flow: Literal["dyson", "ou"] = "dyson"
    theta: Optional[float] = Field(None, gt=0)
    initial: Literal["dirac", "semicircle"] = "dirac"
    t: List[float] = Field(default_factory=lambda: [0.5, 1.0])
    z: List[Tuple[float, float]] = Field(default_factory=lambda: [(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)])
    h: float = Field(1e-4, gt=0)

    @model_validator(mode="after")
    def check_flow(self) -> "BurgersParams":
        if self.flow == "ou" and self.theta is None:
            raise ValueError("OU flow needs --theta")
        if any(t <= 0 for t in self.t):
            raise ValueError("Times must be positive")
        if any(im <= 0 for _, im in self.z):
            raise ValueError("Grid points must lie in the upper half-plane")
        return self


class LdpParams(CommandParams):
    beta: float = Field(1.0, gt=0)
    grid_cells: int = Field(512, ge=2, le=4096)
    iters: int = Field(2000, ge=1)


class HoleProbParams(CommandParams):
    r: List[float] = Field(default_factory=lambda: [3.0, 4.0, 5.0])
    truncation: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def check_radii(self) -> "HoleProbParams":
        if not self.r or any(r <= 0 for r in self.r):
            raise ValueError("Radii must be positive")
        return self


class GumbelParams(CommandParams):
    n: int = Field(500, ge=2)


PARAM_MODELS: Dict[str, Type[CommandParams]] = {
    "sample": SampleParams,
    "esd": EsdParams,
    "kernel": KernelParams,
    "dyson": DysonParams,
    "burgers": BurgersParams,
    "ldp": LdpParams,
    "holeprob": HoleProbParams,
    "gumbel": GumbelParams,
}


class RunConfig(BaseModel):
    """
    One command-line run.

    `threads` only schedules work and is left out of the echoed
    configuration; every other field is written into each output file.
    """
    model_config = ConfigDict(extra="forbid")

    command: Literal["sample", "esd", "kernel", "dyson", "burgers", "ldp", "holeprob", "gumbel"]
    seed: int = Field(0, ge=0, le=2**64 - 1)
    trials: int = Field(1, ge=1)
    out: str = "rmt_lab_run"
    format: Literal["csv", "json"] = "csv"
    params: Dict[str, Any] = Field(default_factory=dict)
    threads: Optional[int] = Field(None, ge=1, exclude=True)

    @model_validator(mode="after")
    def normalize_params(self) -> "RunConfig":
        model = PARAM_MODELS[self.command].model_validate(self.params)
        self.params = model.model_dump(mode="json")
        return self

    def typed_params(self) -> CommandParams:
        return PARAM_MODELS[self.command].model_validate(self.params)

    def echo(self) -> Dict[str, Any]:
        """The configuration as embedded in output files."""
        return self.model_dump(mode="json")
