from typing import Annotated, List, Literal

from mcp.types import TextContent
from pydantic import Field

from ssli_lab.cli import parse_instance, resolve_tolerances, run_random, run_verify
from .utils import json_content, lab_errors, tool_desc


def register_verify_tools(app):
    @app.tool(description=tool_desc(
        "Check a pair x, y against the sum-of-squared-logarithms inequality or one of its variants.",
        "Verify a single instance; status is holds, hypotheses_unmet or violation.",
        None,
    ))
    @lab_errors
    async def verify_instance(
        x: Annotated[List[float], Field(description="Positive reals x_1..x_n")],
        y: Annotated[List[float], Field(description="Positive reals y_1..y_n")],
        mode: Annotated[Literal["ssli", "entropy", "matrix", "becker"], Field(description="Which theorem to check")] = "ssli",
        tolerances: Annotated[dict[str, float] | None, Field(description="ToleranceConfig overrides")] = None,
    ) -> List[TextContent]:
        instance = parse_instance({"x": x, "y": y, "tolerances": tolerances or {}})
        return json_content(run_verify(instance, mode, resolve_tolerances(instance)))

    @app.tool(description=tool_desc(
        "Run a seeded fuzz campaign over generated dominated pairs.",
        "Stress the inequality on many random instances; violations must be 0.",
        None,
    ))
    @lab_errors
    async def random_campaign(
        n: Annotated[int, Field(description="Dimension (>= 2)", ge=2)],
        count: Annotated[int, Field(description="Number of instances", ge=1, le=10000)] = 100,
        seed: Annotated[int, Field(description="Campaign seed")] = 0,
        spread: Annotated[float, Field(description="Relative size of the coefficient increments", ge=0)] = 0.5,
        mode: Annotated[Literal["ssli", "entropy"], Field(description="Pinned coordinate: e_n (ssli) or e_1 (entropy)")] = "ssli",
    ) -> List[TextContent]:
        return json_content(run_random(n, count, seed, spread, mode))
