from typing import Annotated, List

from mcp.types import TextContent
from pydantic import Field

from ssli_lab.dominance import trace_path
from .utils import json_content, lab_errors, tool_desc


def register_path_tools(app):
    @app.tool(description=tool_desc(
        "Trace f along the straight coefficient path from e(x) to e(y).",
        "Inspect monotonicity and discriminant zeros between a dominated pair.",
        None,
    ))
    @lab_errors
    async def trace_coefficient_path(
        x: Annotated[List[float], Field(description="Positive reals x_1..x_n")],
        y: Annotated[List[float], Field(description="Positive reals y_1..y_n dominating x")],
        samples: Annotated[int, Field(description="Number of samples", ge=2, le=5000)] = 101,
    ) -> List[TextContent]:
        trace = trace_path(x, y, samples)
        summary = trace.model_dump(exclude={"samples"})
        summary["f"] = [row.f_value for row in trace.samples]
        summary["s"] = [row.s for row in trace.samples]
        return json_content(summary)
