"""Recursive-descent parser for the transform-program mini-language.

The grammar is a deliberate whitelist: assignments (with tuple targets),
expression statements, for-in, if/elif/else, try/except and return;
expressions cover builtin calls, subscripts and two-bound slices,
literals (ints, quoted text, lists, tuples, records), arithmetic,
comparisons, boolean logic, membership, lambdas as call arguments and
single-generator list comprehensions. Anything else is a parse error so
the failure surfaces into the feedback loop instead of being guessed at.
"""

from .errors import CATCHABLE_KINDS, ExecError
from .lexer import KEYWORDS, Token, decode_program_text, tokenize
from . import nodes as N

FUNCTION_NAME = "transform_grid"

# Except-clause names map onto the structured error taxonomy.
EXCEPT_NAME_KINDS: dict[str, frozenset[str] | None] = {
    "Exception": None,
    "IndexError": frozenset({"index_range"}),
    "KeyError": frozenset({"index_range"}),
    "TypeError": frozenset({"type_mismatch"}),
    "ValueError": frozenset({"domain"}),
    "ZeroDivisionError": frozenset({"domain"}),
    "ArithmeticError": frozenset({"domain"}),
    "NameError": frozenset({"unknown_name"}),
}
EXCEPT_NAME_KINDS.update({kind: frozenset({kind}) for kind in CATCHABLE_KINDS})


def parse_program(text: str) -> N.Program:
    """Decode wire escapes and parse a full transform_grid definition."""
    decoded = decode_program_text(text)
    if not decoded:
        raise ExecError("parse", "empty program")
    flat = "\n" not in decoded
    tokens = tokenize(decoded, flat)
    try:
        return _Parser(tokens, flat, decoded).parse()
    except RecursionError:
        raise ExecError("parse", "program nesting is too deep") from None


class _Parser:
    def __init__(self, tokens: list[Token], flat: bool, text: str):
        self.tokens = tokens
        self.flat = flat
        self.text = text
        self.pos = 0

    # --- token plumbing ---

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def at_name(self, value: str) -> bool:
        return self.at("NAME", value)

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(kind, value):
            want = value if value is not None else kind
            got = tok.value or tok.kind
            self.fail(f"expected {want!r}, found {got!r}", tok)
        return self.advance()

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ExecError("parse", message, line=tok.line, col=tok.col)

    # --- program / suites ---

    def parse(self) -> N.Program:
        while self.at("NEWLINE"):
            self.advance()
        header = self.expect("NAME", "def")
        name = self.expect("NAME")
        if name.value != FUNCTION_NAME:
            self.fail(f"function must be named {FUNCTION_NAME!r}, found {name.value!r}", name)
        self.expect("OP", "(")
        param = self.expect("NAME")
        if param.value in KEYWORDS:
            self.fail(f"bad parameter name {param.value!r}", param)
        self.expect("OP", ")")
        self.expect("OP", ":")
        if self.flat:
            body = []
            self._skip_semicolons()
            while not self.at("EOF"):
                body.append(self.statement())
                self._skip_semicolons()
            if not body:
                self.fail("function body is empty", header)
        else:
            body = self.suite()
        while self.at("NEWLINE"):
            self.advance()
        if not self.at("EOF"):
            self.fail(f"unexpected {self.peek().value!r} after function body")
        return N.Program(param=param.value, body=body, text=self.text)

    def _skip_semicolons(self):
        while self.at("OP", ";"):
            self.advance()

    def suite(self) -> list:
        """The statements governed by the colon just consumed."""
        if self.flat:
            self._skip_semicolons()
            return [self.statement()]
        if self.at("NEWLINE"):
            self.advance()
            self.expect("INDENT")
            body = []
            while not self.at("DEDENT") and not self.at("EOF"):
                body.append(self.statement())
            if not body:
                self.fail("empty block")
            self.expect("DEDENT")
            return body
        # inline suite: simple statements up to end of line
        body = [self.simple_statement()]
        while self.at("OP", ";"):
            self.advance()
            if self.at("NEWLINE") or self.at("EOF"):
                break
            body.append(self.simple_statement())
        if self.at("NEWLINE"):
            self.advance()
        return body

    # --- statements ---

    def statement(self) -> N.Node:
        tok = self.peek()
        if tok.kind == "NAME":
            if tok.value == "for":
                return self.for_statement()
            if tok.value == "if":
                return self.if_statement()
            if tok.value == "try":
                return self.try_statement()
            if tok.value in ("return",):
                return self.simple_statement_line()
            if tok.value in KEYWORDS and tok.value not in ("not", "lambda", "True", "False", "None"):
                self.fail(f"unsupported statement {tok.value!r}", tok)
        return self.simple_statement_line()

    def simple_statement_line(self) -> N.Node:
        stmt = self.simple_statement()
        if not self.flat:
            while self.at("OP", ";"):
                self.advance()
            if self.at("NEWLINE"):
                self.advance()
        return stmt

    def simple_statement(self) -> N.Node:
        tok = self.peek()
        if self.at_name("return"):
            self.advance()
            value = self.expression()
            return N.Return(value=value, line=tok.line)
        exprs = [self.expression()]
        while self.at("OP", ","):
            self.advance()
            exprs.append(self.expression())
        if self.at("OP", "="):
            self.advance()
            targets = []
            for expr in exprs:
                if not isinstance(expr, N.Name):
                    self.fail("assignment targets must be plain names", tok)
                targets.append(expr.id)
            rhs = [self.expression()]
            while self.at("OP", ","):
                self.advance()
                rhs.append(self.expression())
            value = rhs[0] if len(rhs) == 1 else N.TupleLit(items=rhs, line=tok.line)
            return N.Assign(targets=targets, value=value, line=tok.line)
        if len(exprs) > 1:
            self.fail("unexpected ',' in expression statement", tok)
        return N.ExprStmt(expr=exprs[0], line=tok.line)

    def target_names(self) -> list[str]:
        parens = self.at("OP", "(")
        if parens:
            self.advance()
        names = [self.expect("NAME").value]
        while self.at("OP", ","):
            self.advance()
            names.append(self.expect("NAME").value)
        if parens:
            self.expect("OP", ")")
        for name in names:
            if name in KEYWORDS:
                self.fail(f"bad loop target {name!r}")
        return names

    def for_statement(self) -> N.For:
        tok = self.expect("NAME", "for")
        targets = self.target_names()
        self.expect("NAME", "in")
        iterable = self.expression()
        self.expect("OP", ":")
        body = self.suite()
        return N.For(targets=targets, iterable=iterable, body=body, line=tok.line)

    def if_statement(self) -> N.If:
        tok = self.expect("NAME", "if")
        branches = []
        cond = self.expression()
        self.expect("OP", ":")
        branches.append((cond, self.suite()))
        while self.at_name("elif"):
            self.advance()
            cond = self.expression()
            self.expect("OP", ":")
            branches.append((cond, self.suite()))
        if self.at_name("else"):
            self.advance()
            self.expect("OP", ":")
            branches.append((None, self.suite()))
        return N.If(branches=branches, line=tok.line)

    def try_statement(self) -> N.Try:
        tok = self.expect("NAME", "try")
        self.expect("OP", ":")
        body = self.suite()
        handlers = []
        while self.at_name("except"):
            self.advance()
            kinds = None
            if self.at("NAME") and not self.at("OP", ":"):
                name = self.advance()
                if name.value not in EXCEPT_NAME_KINDS:
                    self.fail(f"unknown error kind {name.value!r} in except clause", name)
                kinds = EXCEPT_NAME_KINDS[name.value]
            self.expect("OP", ":")
            handlers.append((kinds, self.suite()))
        if not handlers:
            self.fail("try block needs an except clause", tok)
        return N.Try(body=body, handlers=handlers, line=tok.line)

    # --- expressions, lowest to highest precedence ---

    def expression(self) -> N.Node:
        return self.or_test()

    def or_test(self) -> N.Node:
        node = self.and_test()
        if not self.at_name("or"):
            return node
        values = [node]
        while self.at_name("or"):
            self.advance()
            values.append(self.and_test())
        return N.BoolOp(op="or", values=values, line=values[0].line)

    def and_test(self) -> N.Node:
        node = self.not_test()
        if not self.at_name("and"):
            return node
        values = [node]
        while self.at_name("and"):
            self.advance()
            values.append(self.not_test())
        return N.BoolOp(op="and", values=values, line=values[0].line)

    def not_test(self) -> N.Node:
        if self.at_name("not") and not (self.peek(1).kind == "NAME" and self.peek(1).value == "in"):
            tok = self.advance()
            return N.UnaryOp(op="not", operand=self.not_test(), line=tok.line)
        return self.comparison()

    def comparison(self) -> N.Node:
        left = self.arith()
        ops = []
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in ("==", "!=", "<", "<=", ">", ">="):
                self.advance()
                ops.append((tok.value, self.arith()))
            elif self.at_name("in"):
                self.advance()
                ops.append(("in", self.arith()))
            elif self.at_name("not") and self.peek(1).kind == "NAME" and self.peek(1).value == "in":
                self.advance()
                self.advance()
                ops.append(("not in", self.arith()))
            else:
                break
        if not ops:
            return left
        return N.Compare(left=left, ops=ops, line=left.line)

    def arith(self) -> N.Node:
        node = self.term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance().value
            node = N.BinOp(op=op, left=node, right=self.term(), line=node.line)
        return node

    def term(self) -> N.Node:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in ("*", "//", "%"):
                self.advance()
                node = N.BinOp(op=tok.value, left=node, right=self.factor(), line=node.line)
            elif tok.kind == "OP" and tok.value == "/":
                self.fail("single '/' division is not supported, use '//'", tok)
            else:
                break
        return node

    def factor(self) -> N.Node:
        if self.at("OP", "-"):
            tok = self.advance()
            return N.UnaryOp(op="-", operand=self.factor(), line=tok.line)
        return self.postfix()

    def postfix(self) -> N.Node:
        node = self.atom()
        while True:
            if self.at("OP", "("):
                if not isinstance(node, N.Name):
                    self.fail("only named helper functions can be called")
                node = self.call(node)
            elif self.at("OP", "["):
                node = self.subscript(node)
            elif self.at("OP", "."):
                self.fail("attribute access is not supported")
            else:
                return node

    def call(self, func: N.Name) -> N.Call:
        open_tok = self.expect("OP", "(")
        args: list = []
        kwargs: list = []
        while not self.at("OP", ")"):
            if self.at_name("lambda"):
                if kwargs:
                    self.fail("positional argument after keyword argument", open_tok)
                args.append(self.lambda_expr())
            elif (
                self.at("NAME")
                and self.peek().value not in KEYWORDS
                and self.peek(1).kind == "OP"
                and self.peek(1).value == "="
            ):
                name = self.advance().value
                self.advance()
                value = self.lambda_expr() if self.at_name("lambda") else self.expression()
                kwargs.append((name, value))
            else:
                if kwargs:
                    self.fail("positional argument after keyword argument", open_tok)
                args.append(self.expression())
            if self.at("OP", ","):
                self.advance()
            elif not self.at("OP", ")"):
                self.fail("expected ',' or ')' in call arguments")
        self.expect("OP", ")")
        return N.Call(func=func.id, args=args, kwargs=kwargs, line=func.line)

    def lambda_expr(self) -> N.Lambda:
        tok = self.expect("NAME", "lambda")
        params = [self.expect("NAME").value]
        while self.at("OP", ","):
            self.advance()
            params.append(self.expect("NAME").value)
        self.expect("OP", ":")
        body = self.expression()
        return N.Lambda(params=params, body=body, line=tok.line)

    def subscript(self, value: N.Node) -> N.Node:
        self.expect("OP", "[")
        lower = None
        if not self.at("OP", ":"):
            lower = self.expression()
            if self.at("OP", "]"):
                self.advance()
                return N.Subscript(value=value, index=lower, line=value.line)
        self.expect("OP", ":")
        upper = None
        if not self.at("OP", "]"):
            upper = self.expression()
        self.expect("OP", "]")
        return N.SliceSub(value=value, lower=lower, upper=upper, line=value.line)

    def atom(self) -> N.Node:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return N.Num(value=int(tok.value), line=tok.line)
        if tok.kind == "STRING":
            self.advance()
            return N.Str(value=tok.value, line=tok.line)
        if tok.kind == "NAME":
            if tok.value == "True":
                self.advance()
                return N.Const(value=True, line=tok.line)
            if tok.value == "False":
                self.advance()
                return N.Const(value=False, line=tok.line)
            if tok.value == "None":
                self.advance()
                return N.Const(value=None, line=tok.line)
            if tok.value == "lambda":
                self.fail("lambda is only allowed as a call argument", tok)
            if tok.value in KEYWORDS:
                self.fail(f"unexpected keyword {tok.value!r}", tok)
            self.advance()
            return N.Name(id=tok.value, line=tok.line)
        if self.at("OP", "("):
            self.advance()
            first = self.expression()
            if self.at("OP", ","):
                items = [first]
                while self.at("OP", ","):
                    self.advance()
                    if self.at("OP", ")"):
                        break
                    items.append(self.expression())
                self.expect("OP", ")")
                return N.TupleLit(items=items, line=tok.line)
            self.expect("OP", ")")
            return first
        if self.at("OP", "["):
            return self.list_literal()
        if self.at("OP", "{"):
            return self.dict_literal()
        self.fail(f"unexpected {tok.value or tok.kind!r} in expression", tok)

    def list_literal(self) -> N.Node:
        tok = self.expect("OP", "[")
        if self.at("OP", "]"):
            self.advance()
            return N.ListLit(items=[], line=tok.line)
        first = self.expression()
        if self.at_name("for"):
            self.advance()
            targets = self.target_names()
            self.expect("NAME", "in")
            iterable = self.expression()
            condition = None
            if self.at_name("if"):
                self.advance()
                condition = self.expression()
            self.expect("OP", "]")
            return N.ListComp(
                element=first, targets=targets, iterable=iterable,
                condition=condition, line=tok.line,
            )
        items = [first]
        while self.at("OP", ","):
            self.advance()
            if self.at("OP", "]"):
                break
            items.append(self.expression())
        self.expect("OP", "]")
        return N.ListLit(items=items, line=tok.line)

    def dict_literal(self) -> N.DictLit:
        tok = self.expect("OP", "{")
        pairs = []
        while not self.at("OP", "}"):
            key = self.expect("STRING")
            self.expect("OP", ":")
            pairs.append((key.value, self.expression()))
            if self.at("OP", ","):
                self.advance()
            elif not self.at("OP", "}"):
                self.fail("expected ',' or '}' in record literal")
        self.expect("OP", "}")
        return N.DictLit(pairs=pairs, line=tok.line)
