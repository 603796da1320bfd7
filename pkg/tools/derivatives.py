from typing import Annotated, List

from mcp.types import TextContent
from pydantic import Field

from ssli_lab.cli import run_derivative
from ssli_lab.logfun import METHODS
from .utils import json_content, lab_errors, tool_desc


def register_derivative_tools(app):
    @app.tool(description=tool_desc(
        "Partial derivatives of sum (log z_i)^2 with respect to e_k, by closed form, integral, finite difference and contour.",
        "Compare the evaluators on a coefficient vector e.",
        None,
    ))
    @lab_errors
    async def derivative_report(
        e: Annotated[List[float], Field(description="Positive coefficients e_1..e_n")],
        k: Annotated[int | None, Field(description="Index in 1..n-1; all when omitted")] = None,
        methods: Annotated[List[str], Field(description=f"Subset of {', '.join(METHODS)}")] = list(METHODS),
    ) -> List[TextContent]:
        return json_content(run_derivative(e, None if k is None else [k], methods))
