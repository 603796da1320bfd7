import json
import logging
from functools import wraps
from typing import Any, List

from mcp import ErrorData, McpError
from mcp.types import INTERNAL_ERROR, INVALID_PARAMS, TextContent
from pydantic import BaseModel

from ssli_lab.errors import SsliError

log = logging.getLogger(__name__)


class RichToolDescription(BaseModel):
    description: str
    use_when: str
    side_effects: str | None


def tool_desc(desc, use, side=None):
    return RichToolDescription(description=desc, use_when=use, side_effects=side).model_dump_json()


def json_content(payload: BaseModel | dict[str, Any]) -> List[TextContent]:
    """Wrap a report as the single text item a tool returns."""
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2)
    return [TextContent(type="text", text=text)]


def lab_errors(func):
    """Turn lab failures into MCP errors: bad input is INVALID_PARAMS, the rest INTERNAL_ERROR."""

    @wraps(func)
    async def wrapper(*args, **kwargs):
        try:
            return await func(*args, **kwargs)
        except McpError:
            raise
        except (SsliError, ValueError) as exc:
            raise McpError(ErrorData(code=INVALID_PARAMS, message=f"{type(exc).__name__}: {exc}")) from exc
        except Exception as exc:
            log.exception("tool %s failed", func.__name__)
            raise McpError(ErrorData(code=INTERNAL_ERROR, message=f"{type(exc).__name__}: {exc}")) from exc

    return wrapper
