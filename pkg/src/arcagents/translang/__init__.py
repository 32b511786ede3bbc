"""Sandboxed parsing and execution of model-generated transform programs."""

from ..taskmodel import CharGrid
from .errors import CATCHABLE_KINDS, ERROR_KINDS, ExecError, ExecLimits
from .builtins import BUILTIN_NAMES, default_builtins
from .lexer import decode_program_text
from .nodes import Program
from .parser import parse_program
from .interp import Interpreter

__all__ = [
    "BUILTIN_NAMES",
    "CATCHABLE_KINDS",
    "ERROR_KINDS",
    "ExecError",
    "ExecLimits",
    "Interpreter",
    "Program",
    "decode_program_text",
    "default_builtins",
    "execute_program",
    "parse_program",
    "run_program",
]


def execute_program(program: Program, grid: CharGrid, limits: ExecLimits | None = None) -> CharGrid:
    """Run a parsed program on one character grid inside a fresh sandbox."""
    return Interpreter(limits).run(program, grid)


def run_program(text: str, grid: CharGrid, limits: ExecLimits | None = None) -> CharGrid:
    """Parse then execute in one step."""
    return execute_program(parse_program(text), grid, limits)
