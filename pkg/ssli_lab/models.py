from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

Status = Literal["holds", "hypotheses_unmet", "violation"]
Functional = Literal["squared_log", "entropy", "matrix_log", "becker", "von_neumann", "geodesic"]


def complex_pairs(values) -> list[tuple[float, float]]:
    return [(float(complex(v).real), float(complex(v).imag)) for v in values]


class FunctionalValue(BaseModel):
    value: float
    imaginary_residual: float = 0.0


class DerivativeReport(BaseModel):
    k: int
    closed_form: float | None = None
    integral_form: float | None = None
    finite_difference: float | None = None
    contour_form: float | None = None
    max_pairwise_discrepancy: float = 0.0
    contour_scale: float | None = Field(default=None, description="e_n^(1/n) used to normalise for the contour evaluator")

    def present(self) -> dict[str, float]:
        values = {
            "closed_form": self.closed_form,
            "integral_form": self.integral_form,
            "finite_difference": self.finite_difference,
            "contour_form": self.contour_form,
        }
        return {name: v for name, v in values.items() if v is not None}


class DominanceVerdict(BaseModel):
    per_k_slack: list[float]
    last_gap: float
    dominated: bool
    pinned_index: int = Field(description="1-based index of the coordinate that must match exactly")


class HenckyComparison(BaseModel):
    w_u: float
    w_v: float
    ordered: bool


class SsliReport(BaseModel):
    verdict: DominanceVerdict
    f_x: float
    f_y: float
    inequality_holds: bool
    margin: float
    strict: bool = False
    functional: Functional = "squared_log"
    hencky: HenckyComparison | None = None

    @property
    def status(self) -> Status:
        if not self.verdict.dominated:
            return "hypotheses_unmet"
        return "holds" if self.inequality_holds else "violation"


class PathSample(BaseModel):
    s: float
    e: list[float]
    roots: list[tuple[float, float]]
    f_value: float
    discriminant: float


class PathTrace(BaseModel):
    samples: list[PathSample]
    degenerate_s: list[float] | Literal["all_degenerate"]
    monotone: bool
    max_drop: float = 0.0


class InfimumReport(BaseModel):
    f_x: float
    min_sampled: float
    samples: int
    attained: bool


class OptimalityGap(BaseModel):
    min_value: float
    reference: float
    gap: float
    argmin: list[float]


class KelloggReport(BaseModel):
    invariants: list[float]
    invariants_nonneg: bool
    eigenvalues: list[tuple[float, float]]
    all_in_sector: bool
    boundary_proximal: list[int]


class CampaignSummary(BaseModel):
    generated: int
    holds: int
    hypotheses_unmet: int
    violations: int
    generation_failures: int
    min_margin: float | None


class ReportDocument(BaseModel):
    command: str
    instance: dict[str, Any] | None = None
    verdict: DominanceVerdict | None = None
    values: dict[str, Any] = Field(default_factory=dict)
    derivatives: list[DerivativeReport] = Field(default_factory=list)
    trace_csv_path: str | None = None
    status: Status = "holds"


class InstanceFile(BaseModel):
    """One instance in exactly one of three forms, plus optional tolerance overrides."""

    model_config = ConfigDict(extra="forbid")

    n: int | None = Field(default=None, ge=1)
    x: list[float] | None = None
    y: list[float] | None = None
    e_x: list[float] | None = None
    e_y: list[float] | None = None
    matrix_u: list[list[float]] | None = None
    matrix_v: list[list[float]] | None = None
    tolerances: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_form(self) -> "InstanceFile":
        forms = {
            "vector": (self.x, self.y),
            "coefficients": (self.e_x, self.e_y),
            "matrix": (self.matrix_u, self.matrix_v),
        }
        present = [name for name, pair in forms.items() if any(v is not None for v in pair)]
        if len(present) != 1:
            raise ValueError(f"exactly one instance form is required, found {present or 'none'}")
        first, second = forms[present[0]]
        if first is None:
            raise ValueError(f"the {present[0]} form needs its first member")
        if present[0] != "matrix" and second is None:
            raise ValueError(f"the {present[0]} form needs both members")
        if second is not None and len(first) != len(second):
            raise ValueError(f"dimension mismatch: {len(first)} vs {len(second)}")
        if self.n is not None and len(first) != self.n:
            raise ValueError(f"n = {self.n} but the instance has dimension {len(first)}")
        return self

    @property
    def form(self) -> Literal["vector", "coefficients", "matrix"]:
        if self.x is not None:
            return "vector"
        return "coefficients" if self.e_x is not None else "matrix"
