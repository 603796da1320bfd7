from typing import Annotated, List, Literal

from mcp.types import TextContent
from pydantic import Field

from ssli_lab.cli import MATRIX_OPS, parse_instance, run_matrix
from ssli_lab.matrixapps import SO_N_GRID, SO_N_RESTARTS, HenckyParams
from .utils import json_content, lab_errors, tool_desc


def register_matrix_tools(app):
    @app.tool(description=tool_desc(
        "Matrix forms: invariants, logarithms, Hencky and Becker energies, SPD geodesics, SO(n) gap, Kellogg sector.",
        f"Run one matrix operation ({', '.join(MATRIX_OPS)}).",
        None,
    ))
    @lab_errors
    async def matrix_check(
        op: Annotated[str, Field(description="Operation name")],
        matrix_u: Annotated[List[List[float]], Field(description="First matrix, row-major")],
        matrix_v: Annotated[List[List[float]] | None, Field(description="Second matrix for two-matrix ops")] = None,
        mu: Annotated[float | None, Field(description="Hencky shear modulus")] = None,
        modulus: Annotated[Literal["lambda", "kappa"], Field(description="Which second elastic constant is given")] = "kappa",
        modulus_value: Annotated[float, Field(description="Value of lambda or kappa")] = 0.0,
        t: Annotated[float | None, Field(description="Geodesic parameter")] = None,
        grid: Annotated[int, Field(description="Angle grid for so-n-gap with n = 2", ge=3)] = SO_N_GRID,
        restarts: Annotated[int, Field(description="Random starts for so-n-gap with n = 3", ge=0)] = SO_N_RESTARTS,
    ) -> List[TextContent]:
        instance = parse_instance({"matrix_u": matrix_u, "matrix_v": matrix_v})
        hencky = HenckyParams(mu=mu, modulus=modulus, value=modulus_value) if mu is not None else None
        return json_content(run_matrix(op, instance, hencky, t, grid=grid, restarts=restarts))
