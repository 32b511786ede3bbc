"""Tree-walking interpreter with fuel accounting.

Fuel is charged per statement execution, per loop/comprehension
iteration and per builtin or lambda call; collection growth is bounded
separately. Execution is fully isolated: the only names in scope are the
function parameter, locals the program binds, and the builtin table.
"""

import copy as _copy
from dataclasses import dataclass

from ..taskmodel import COLOR_CHARS
from .builtins import ITERABLE_TYPES, default_builtins
from .errors import ExecError, ExecLimits
from . import nodes as N


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


@dataclass
class LambdaValue:
    node: N.Lambda
    env: dict


class Interpreter:
    """Single-use executor for one parsed program."""

    def __init__(self, limits: ExecLimits | None = None):
        self.limits = limits or ExecLimits()
        self.fuel = self.limits.fuel
        self.builtins = default_builtins()

    # --- resource accounting ---

    def tick(self, node: N.Node | None = None):
        self.fuel -= 1
        if self.fuel < 0:
            raise ExecError(
                "fuel_exhausted",
                f"program exceeded the step budget of {self.limits.fuel}",
                line=getattr(node, "line", None),
            )

    def check_size(self, length: int, what: str = "list"):
        if length > self.limits.max_collection:
            raise ExecError(
                "domain", f"{what} exceeds the size limit of {self.limits.max_collection}"
            )

    # --- execution ---

    def run(self, program: N.Program, grid):
        env = {program.param: _copy.deepcopy(grid)}
        try:
            self.exec_block(program.body, env)
        except _ReturnSignal as ret:
            return self.validate_output(ret.value)
        raise ExecError("output_invalid", "program finished without returning a grid")

    def validate_output(self, value):
        dim = self.limits.max_output_dim
        if not isinstance(value, list) or not value:
            raise ExecError(
                "output_invalid",
                f"program must return a grid, got {type(value).__name__}",
            )
        if not all(isinstance(row, list) and row for row in value):
            raise ExecError("output_invalid", "returned grid rows must be non-empty lists")
        width = len(value[0])
        if any(len(row) != width for row in value):
            raise ExecError("output_invalid", "returned grid is not rectangular")
        if len(value) > dim or width > dim:
            raise ExecError(
                "output_invalid",
                f"returned grid is {len(value)}x{width}, limit is {dim}x{dim}",
            )
        for row in value:
            for cell in row:
                if not isinstance(cell, str) or cell not in COLOR_CHARS:
                    raise ExecError(
                        "output_invalid",
                        f"returned grid contains {cell!r}; cells must be '.','a'..'i'",
                    )
        return [list(row) for row in value]

    def exec_block(self, stmts: list, env: dict):
        for stmt in stmts:
            self.exec_stmt(stmt, env)

    def exec_stmt(self, stmt, env: dict):
        self.tick(stmt)
        if isinstance(stmt, N.Assign):
            value = self.eval(stmt.value, env)
            self.bind(stmt.targets, value, env, stmt)
        elif isinstance(stmt, N.ExprStmt):
            self.eval(stmt.expr, env)
        elif isinstance(stmt, N.Return):
            raise _ReturnSignal(self.eval(stmt.value, env))
        elif isinstance(stmt, N.For):
            self.exec_for(stmt, env)
        elif isinstance(stmt, N.If):
            for cond, body in stmt.branches:
                if cond is None or self.truthy(self.eval(cond, env)):
                    self.exec_block(body, env)
                    break
        elif isinstance(stmt, N.Try):
            try:
                self.exec_block(stmt.body, env)
            except ExecError as err:
                if err.kind in ("fuel_exhausted", "parse"):
                    raise
                for kinds, body in stmt.handlers:
                    if kinds is None or err.kind in kinds:
                        self.exec_block(body, env)
                        return
                raise
        else:
            raise ExecError("parse", f"cannot execute {type(stmt).__name__}", line=stmt.line)

    def exec_for(self, stmt: N.For, env: dict):
        for item in self.iterate(stmt.iterable, env):
            self.tick(stmt)
            self.bind(stmt.targets, item, env, stmt)
            self.exec_block(stmt.body, env)

    def iterate(self, expr, env: dict):
        value = self.eval(expr, env)
        if isinstance(value, dict):
            return list(value)
        if isinstance(value, ITERABLE_TYPES):
            return value
        raise ExecError(
            "type_mismatch",
            f"cannot loop over {type(value).__name__}",
            line=getattr(expr, "line", None),
        )

    def bind(self, targets: list, value, env: dict, stmt):
        if len(targets) == 1:
            env[targets[0]] = value
            return
        if not isinstance(value, (list, tuple)) or len(value) != len(targets):
            raise ExecError(
                "type_mismatch",
                f"cannot unpack {value!r} into {len(targets)} names",
                line=stmt.line,
            )
        for name, item in zip(targets, value):
            env[name] = item

    @staticmethod
    def truthy(value) -> bool:
        return bool(value)

    def make_callable(self, value):
        """Adapter so builtins like sorted() can invoke a lambda key."""
        if not isinstance(value, LambdaValue):
            return None

        def call(item):
            return self.call_lambda(value, (item,))

        return call

    def call_lambda(self, lam: LambdaValue, args: tuple):
        self.tick(lam.node)
        if len(args) != len(lam.node.params):
            raise ExecError(
                "type_mismatch",
                f"lambda takes {len(lam.node.params)} arguments, got {len(args)}",
                line=lam.node.line,
            )
        child = dict(lam.env)
        child.update(zip(lam.node.params, args))
        return self.eval(lam.node.body, child)

    # --- expression evaluation ---

    def eval(self, node, env: dict):
        method = getattr(self, "_eval_" + type(node).__name__, None)
        if method is None:
            raise ExecError("parse", f"cannot evaluate {type(node).__name__}", line=node.line)
        return method(node, env)

    def _eval_Name(self, node: N.Name, env):
        if node.id in env:
            return env[node.id]
        raise ExecError("unknown_name", f"name {node.id!r} is not defined", line=node.line)

    def _eval_Num(self, node: N.Num, env):
        return node.value

    def _eval_Str(self, node: N.Str, env):
        return node.value

    def _eval_Const(self, node: N.Const, env):
        return node.value

    def _eval_ListLit(self, node: N.ListLit, env):
        return [self.eval(item, env) for item in node.items]

    def _eval_TupleLit(self, node: N.TupleLit, env):
        return tuple(self.eval(item, env) for item in node.items)

    def _eval_DictLit(self, node: N.DictLit, env):
        return {key: self.eval(value, env) for key, value in node.pairs}

    def _eval_Lambda(self, node: N.Lambda, env):
        return LambdaValue(node=node, env=env)

    def _eval_BoolOp(self, node: N.BoolOp, env):
        result = self.eval(node.values[0], env)
        for value in node.values[1:]:
            keep_going = self.truthy(result) if node.op == "and" else not self.truthy(result)
            if not keep_going:
                return result
            result = self.eval(value, env)
        return result

    def _eval_UnaryOp(self, node: N.UnaryOp, env):
        value = self.eval(node.operand, env)
        if node.op == "not":
            return not self.truthy(value)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ExecError(
                "type_mismatch", f"unary '-' needs an integer, got {type(value).__name__}",
                line=node.line,
            )
        return -value

    def _eval_BinOp(self, node: N.BinOp, env):
        left = self.eval(node.left, env)
        right = self.eval(node.right, env)
        op = node.op
        try:
            if op == "+":
                if isinstance(left, (list, tuple)) != isinstance(right, (list, tuple)):
                    raise TypeError("mixed operand types")
                result = left + right
            elif op == "-":
                result = left - right
            elif op == "*":
                result = left * right
            elif op == "//":
                result = left // right
            elif op == "%":
                if not isinstance(left, int):  # no printf-style formatting
                    raise TypeError("'%' needs integers")
                result = left % right
            else:
                raise ExecError("parse", f"unknown operator {op!r}", line=node.line)
        except ZeroDivisionError:
            raise ExecError("domain", "integer division or modulo by zero", line=node.line) from None
        except TypeError:
            raise ExecError(
                "type_mismatch",
                f"unsupported operands for {op!r}: "
                f"{type(left).__name__} and {type(right).__name__}",
                line=node.line,
            ) from None
        if isinstance(result, (list, tuple, str)):
            self.check_size(len(result))
        return result

    def _eval_Compare(self, node: N.Compare, env):
        left = self.eval(node.left, env)
        for op, right_node in node.ops:
            right = self.eval(right_node, env)
            try:
                if op == "==":
                    ok = left == right
                elif op == "!=":
                    ok = left != right
                elif op == "in" or op == "not in":
                    if not isinstance(right, ITERABLE_TYPES):
                        raise TypeError(f"{type(right).__name__} is not a container")
                    ok = left in right
                    if op == "not in":
                        ok = not ok
                else:
                    ok = {"<": left < right, "<=": left <= right,
                          ">": left > right, ">=": left >= right}[op]
            except TypeError as exc:
                raise ExecError(
                    "type_mismatch", f"cannot compare with {op!r}: {exc}", line=node.line
                ) from None
            if not ok:
                return False
            left = right
        return True

    def _eval_Subscript(self, node: N.Subscript, env):
        value = self.eval(node.value, env)
        index = self.eval(node.index, env)
        if isinstance(value, dict):
            if not isinstance(index, str):
                raise ExecError(
                    "type_mismatch", "record keys are text", line=node.line
                )
            if index not in value:
                raise ExecError("index_range", f"key {index!r} not found", line=node.line)
            return value[index]
        if isinstance(value, (list, tuple, str, range)):
            if not isinstance(index, int) or isinstance(index, bool):
                raise ExecError(
                    "type_mismatch",
                    f"sequence index must be an integer, got {type(index).__name__}",
                    line=node.line,
                )
            try:
                return value[index]
            except IndexError:
                raise ExecError(
                    "index_range",
                    f"index {index} out of range for length {len(value)}",
                    line=node.line,
                ) from None
        raise ExecError(
            "type_mismatch", f"{type(value).__name__} is not subscriptable", line=node.line
        )

    def _eval_SliceSub(self, node: N.SliceSub, env):
        value = self.eval(node.value, env)
        if not isinstance(value, (list, tuple, str)):
            raise ExecError(
                "type_mismatch", f"cannot slice {type(value).__name__}", line=node.line
            )
        bounds = []
        for bound in (node.lower, node.upper):
            if bound is None:
                bounds.append(None)
                continue
            evaluated = self.eval(bound, env)
            if not isinstance(evaluated, int) or isinstance(evaluated, bool):
                raise ExecError(
                    "type_mismatch", "slice bounds must be integers", line=node.line
                )
            bounds.append(evaluated)
        return value[bounds[0] : bounds[1]]

    def _eval_Call(self, node: N.Call, env):
        builtin = self.builtins.get(node.func)
        if builtin is None:
            raise ExecError(
                "unknown_name", f"unknown function {node.func!r}", line=node.line
            )
        self.tick(node)
        args = [self.eval(arg, env) for arg in node.args]
        kwargs = {name: self.eval(value, env) for name, value in node.kwargs}
        try:
            return builtin(self, node, args, kwargs)
        except ExecError as err:
            if err.line is None:
                err.line = node.line
            raise

    def _eval_ListComp(self, node: N.ListComp, env):
        child = dict(env)
        result = []
        for item in self.iterate(node.iterable, child):
            self.tick(node)
            self.bind(node.targets, item, child, node)
            if node.condition is not None and not self.truthy(self.eval(node.condition, child)):
                continue
            result.append(self.eval(node.element, child))
            self.check_size(len(result))
        return result
