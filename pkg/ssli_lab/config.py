import os
from typing import Any, Mapping

from pydantic import BaseModel, ConfigDict, Field, model_validator

# ==== Load environment ====
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

# ==== Configuration ====
ENV_PREFIX = "SSLI_LAB_TOL_"
SSLI_LAB_SEED = int(os.getenv("SSLI_LAB_SEED", "0"))
SSLI_LAB_TOKEN = os.getenv("SSLI_LAB_TOKEN", "ssli-lab-token")
SSLI_LAB_HOST = os.getenv("SSLI_LAB_HOST", "0.0.0.0")
SSLI_LAB_PORT = int(os.getenv("SSLI_LAB_PORT", "9090"))
SSLI_LAB_LOG_LEVEL = os.getenv("SSLI_LAB_LOG_LEVEL", "INFO")


class ToleranceConfig(BaseModel):
    """Every numeric threshold used by the lab.

    ``pairing_tol`` and ``distinct_tol`` are relative to the root magnitude,
    ``equality_slack`` is relative to the compared coefficient.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    pairing_tol: float = Field(default=1e-8, gt=0)
    distinct_tol: float = Field(default=1e-9, gt=0)
    equality_slack: float = Field(default=1e-9, gt=0)
    inequality_slack: float = Field(default=1e-9, gt=0)
    quad_abs_tol: float = Field(default=1e-13, gt=0)
    quad_rel_tol: float = Field(default=1e-11, gt=0)
    fd_step: float = Field(default=1e-5, gt=0)
    disc_zero_tol: float = Field(default=1e-8, gt=0)
    quad_limit: int = Field(default=200, gt=0)
    multiplicity_tol: float = Field(default=1e-3, gt=0)

    @model_validator(mode="after")
    def _step_below_one(self) -> "ToleranceConfig":
        if self.fd_step >= 1:
            raise ValueError("fd_step must be < 1")
        return self

    def merged(self, overrides: Mapping[str, Any] | None) -> "ToleranceConfig":
        if not overrides:
            return self
        return ToleranceConfig.model_validate({**self.model_dump(), **overrides})

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "ToleranceConfig":
        environ = os.environ if environ is None else environ
        overrides = {}
        for name in cls.model_fields:
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                overrides[name] = raw
        return cls.model_validate(overrides)


DEFAULT_TOLERANCES = ToleranceConfig()
