"""Tokenizer for transform programs.

Two layouts exist in the wild: programs with real newlines and tab/space
indentation (after decoding the wire-format escapes), and fully flat
programs where all statements sit on one line. Flat input is tokenized
without line structure; the parser then treats each colon-suite as exactly
one statement. Newline input gets NEWLINE/INDENT/DEDENT tokens with
bracket nesting suppressing line breaks.
"""

from typing import NamedTuple

from .errors import ExecError


class Token(NamedTuple):
    kind: str  # NAME INT STRING OP NEWLINE INDENT DEDENT EOF
    value: str
    line: int
    col: int


KEYWORDS = frozenset(
    {
        "def", "return", "for", "in", "if", "elif", "else", "try", "except",
        "and", "or", "not", "lambda", "True", "False", "None",
        "while", "import", "from", "class", "with", "as", "pass", "break",
        "continue", "del", "raise", "assert", "yield", "global", "nonlocal",
        "finally", "is",
    }
)

_TWO_CHAR_OPS = ("==", "!=", "<=", ">=", "//")
_ONE_CHAR_OPS = "+-*/%<>=()[]{},:;"
_OPENERS = "([{"
_CLOSERS = ")]}"


def decode_program_text(text: str) -> str:
    """Turn literal backslash-n / backslash-t escapes into real layout."""
    return text.replace("\\n", "\n").replace("\\t", "\t").strip("\n \t\r")


def _fail(message: str, line: int, col: int):
    raise ExecError("parse", message, line=line, col=col)


def tokenize(text: str, flat: bool) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    depth = 0
    i = 0
    line = 1
    line_start = 0
    at_line_start = not flat
    n = len(text)

    def col() -> int:
        return i - line_start + 1

    def emit(kind: str, value: str, at: int | None = None):
        tokens.append(Token(kind, value, line, (at if at is not None else i) - line_start + 1))

    while i < n:
        if at_line_start and depth == 0:
            width = 0
            while i < n and text[i] in " \t":
                width = width + 1 if text[i] == " " else width + 8 - width % 8
                i += 1
            if i >= n:
                break
            if text[i] == "\n":
                i += 1
                line += 1
                line_start = i
                continue
            if text[i] == "#":
                while i < n and text[i] != "\n":
                    i += 1
                continue
            if width > indents[-1]:
                indents.append(width)
                emit("INDENT", "")
            else:
                while width < indents[-1]:
                    indents.pop()
                    emit("DEDENT", "")
                if width != indents[-1]:
                    _fail("unindent does not match any outer indentation level", line, col())
            at_line_start = False
            continue

        ch = text[i]
        if ch == "\n":
            i += 1
            if not flat and depth == 0:
                if tokens and tokens[-1].kind not in ("NEWLINE", "INDENT", "DEDENT"):
                    emit("NEWLINE", "", at=i - 1)
                at_line_start = True
            line += 1
            line_start = i
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "'\"":
            start, start_line, start_col = i, line, col()
            i += 1
            buf = []
            while i < n and text[i] != ch:
                if text[i] == "\n":
                    line += 1
                    line_start = i + 1
                buf.append(text[i])
                i += 1
            if i >= n:
                _fail("unterminated string literal", start_line, start_col)
            i += 1
            tokens.append(Token("STRING", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit():
            start, start_col = i, col()
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("INT", text[start:i], line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            start, start_col = i, col()
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("NAME", text[start:i], line, start_col))
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token("OP", two, line, col()))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            if ch in _OPENERS:
                depth += 1
            elif ch in _CLOSERS:
                depth = max(0, depth - 1)
            tokens.append(Token("OP", ch, line, col()))
            i += 1
            continue
        _fail(f"unexpected character {ch!r}", line, col())

    if not flat:
        if tokens and tokens[-1].kind not in ("NEWLINE", "INDENT", "DEDENT"):
            tokens.append(Token("NEWLINE", "", line, 1))
        while len(indents) > 1:
            indents.pop()
            tokens.append(Token("DEDENT", "", line, 1))
    tokens.append(Token("EOF", "", line, 1))
    return tokens
