"""Structured errors and resource limits for transform-program execution."""

from dataclasses import dataclass

ERROR_KINDS = frozenset(
    {
        "parse",
        "unknown_name",
        "type_mismatch",
        "index_range",
        "domain",
        "fuel_exhausted",
        "output_invalid",
    }
)

# Errors a program may catch; resource exhaustion always propagates.
CATCHABLE_KINDS = ERROR_KINDS - {"fuel_exhausted", "parse"}


class ExecError(Exception):
    """A failure while parsing or executing a transform program.

    The message is what the feedback loop shows the model, so it is always
    non-empty and names the offending construct where possible.
    """

    def __init__(self, kind: str, message: str, line: int | None = None, col: int | None = None):
        if kind not in ERROR_KINDS:
            raise ValueError(f"unknown error kind {kind!r}")
        if not message:
            raise ValueError("error message must be non-empty")
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.kind}: {self.message} (line {self.line})"
        return f"{self.kind}: {self.message}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": self.message}
        if self.line is not None:
            out["line"] = self.line
        if self.col is not None:
            out["col"] = self.col
        return out


@dataclass(frozen=True)
class ExecLimits:
    """Sandbox resource bounds for one program execution."""

    fuel: int = 1_000_000
    max_collection: int = 10_000
    max_output_dim: int = 30

    def __post_init__(self):
        if self.fuel <= 0 or self.max_collection <= 0 or self.max_output_dim <= 0:
            raise ValueError("all execution limits must be positive")
