from .verify import register_verify_tools
from .derivatives import register_derivative_tools
from .paths import register_path_tools
from .matrices import register_matrix_tools

def register_all_tools(app):
    """Register all tool functions with the MCP app"""
    register_verify_tools(app)
    register_derivative_tools(app)
    register_path_tools(app)
    register_matrix_tools(app)
