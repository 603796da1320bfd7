import asyncio
import logging
import sys

from fastmcp import FastMCP
from fastmcp.server.auth.providers.bearer import BearerAuthProvider, RSAKeyPair
from mcp.server.auth.provider import AccessToken

from ssli_lab.config import SSLI_LAB_HOST, SSLI_LAB_LOG_LEVEL, SSLI_LAB_PORT, SSLI_LAB_TOKEN
from tools.tool import register_all_tools

log = logging.getLogger("ssli_lab.server")


# ==== Auth Provider ====
class SimpleBearerAuthProvider(BearerAuthProvider):
    """Accepts exactly one static bearer token."""

    def __init__(self, token: str):
        k = RSAKeyPair.generate()
        super().__init__(public_key=k.public_key, jwks_uri=None, issuer=None, audience=None)
        self.token = token

    async def load_access_token(self, token: str) -> AccessToken | None:
        if token == self.token:
            return AccessToken(token=token, client_id="ssli-lab", scopes=[], expires_at=None)
        return None


# ==== Server Init ====
app = FastMCP("SSLI Lab", auth=SimpleBearerAuthProvider(SSLI_LAB_TOKEN))

register_all_tools(app)


# ==== Run Server ====
async def main():
    logging.basicConfig(stream=sys.stderr, level=SSLI_LAB_LOG_LEVEL.upper(), format="%(levelname)s %(name)s: %(message)s")
    log.info("SSLI Lab MCP server starting on %s:%d", SSLI_LAB_HOST, SSLI_LAB_PORT)
    if SSLI_LAB_TOKEN == "ssli-lab-token":
        log.warning("using the default bearer token; set SSLI_LAB_TOKEN in .env")
    await app.run_async("streamable-http", host=SSLI_LAB_HOST, port=SSLI_LAB_PORT)


if __name__ == "__main__":
    asyncio.run(main())
