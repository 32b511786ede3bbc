"""AST node types for the transform-program mini-language."""

from dataclasses import dataclass, field


@dataclass
class Node:
    line: int = field(default=0, kw_only=True)


# --- expressions ---


@dataclass
class Name(Node):
    id: str


@dataclass
class Num(Node):
    value: int


@dataclass
class Str(Node):
    value: str


@dataclass
class Const(Node):
    value: object  # True / False / None


@dataclass
class ListLit(Node):
    items: list


@dataclass
class TupleLit(Node):
    items: list


@dataclass
class DictLit(Node):
    pairs: list  # (key string, value expr)


@dataclass
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass
class UnaryOp(Node):
    op: str  # '-' or 'not'
    operand: Node


@dataclass
class BoolOp(Node):
    op: str  # 'and' / 'or'
    values: list


@dataclass
class Compare(Node):
    left: Node
    ops: list  # (op string, right expr) pairs, chained with and-semantics


@dataclass
class Subscript(Node):
    value: Node
    index: Node


@dataclass
class SliceSub(Node):
    value: Node
    lower: Node | None
    upper: Node | None


@dataclass
class Call(Node):
    func: str
    args: list
    kwargs: list  # (name, expr) pairs


@dataclass
class Lambda(Node):
    params: list
    body: Node


@dataclass
class ListComp(Node):
    element: Node
    targets: list  # names
    iterable: Node
    condition: Node | None


# --- statements ---


@dataclass
class Assign(Node):
    targets: list  # names; >1 means tuple unpacking
    value: Node


@dataclass
class ExprStmt(Node):
    expr: Node


@dataclass
class Return(Node):
    value: Node


@dataclass
class For(Node):
    targets: list
    iterable: Node
    body: list


@dataclass
class If(Node):
    branches: list  # (condition expr or None for else, body list)


@dataclass
class Try(Node):
    body: list
    handlers: list  # (frozenset of error kinds or None for catch-all, body list)


@dataclass
class Program:
    param: str
    body: list
    text: str = ""
