"""Hand-written ECMAScript tokenizer with full source fidelity.

Every byte of the input ends up in exactly one token lexeme, comments and
whitespace included, so concatenating all lexemes reproduces the file.
The scanner never raises on malformed input: problems are reported as
recovered errors and scanning continues on the next line.

Regex-vs-division ambiguity is resolved by the preceding significant
token: a regex may start after a punctuator (other than a closing
bracket), after a keyword, or at the start of input; a slash after an
identifier, literal, or closing bracket is division.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    PUNCTUATOR = "punctuator"
    STRING = "string"
    TEMPLATE = "template"
    NUMBER = "number"
    REGEX = "regex"
    LINE_COMMENT = "line-comment"
    BLOCK_COMMENT = "block-comment"
    WHITESPACE = "whitespace"
    NEWLINE = "newline"
    EOF = "eof"


TRIVIA = frozenset(
    {TokenKind.WHITESPACE, TokenKind.NEWLINE, TokenKind.LINE_COMMENT, TokenKind.BLOCK_COMMENT, TokenKind.EOF}
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int  # 1-based line of the first character
    column: int  # 0-based column of the first character

    @property
    def is_trivia(self) -> bool:
        return self.kind in TRIVIA


class RecoveredError(NamedTuple):
    line: int
    message: str


KEYWORDS = frozenset(
    """await break case catch class const continue debugger default delete do
    else enum export extends false finally for function if import in instanceof
    let new null return static super switch this throw true try typeof var void
    while with yield""".split()
)

# Longest match first; the slash family is handled by the regex heuristic.
PUNCTUATORS = (
    ">>>=",
    "===", "!==", "**=", "<<=", ">>=", ">>>", "...", "&&=", "||=", "??=",
    "=>", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", "&&", "||", "??", "?.", "++", "--", "<<", ">>", "**",
    "{", "}", "(", ")", "[", "]", ".", ";", ",", "<", ">", "+", "-", "*",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", "/", "@", "#",
)

_LINE_TERMINATORS = "\n\r  "

# Closing brackets end a value, so a following slash is division.
_DIVISION_AFTER_PUNCT = frozenset({")", "]", "}"})
_VALUE_KINDS = frozenset(
    {TokenKind.IDENTIFIER, TokenKind.NUMBER, TokenKind.STRING, TokenKind.TEMPLATE, TokenKind.REGEX}
)


def count_line_breaks(text: str) -> int:
    """Number of line breaks in text, counting \\r\\n as one."""
    breaks = text.count("\n") + text.count(" ") + text.count(" ")
    breaks += text.count("\r") - text.count("\r\n")
    return breaks


def _is_ident_start(c: str) -> bool:
    # Non-ASCII passes through as identifier text, except Unicode
    # whitespace and the U+2028/U+2029 line terminators.
    return c.isalpha() or c in "$_" or (ord(c) > 127 and not c.isspace())


def _is_ident_part(c: str) -> bool:
    return c.isalnum() or c in "$_" or (ord(c) > 127 and not c.isspace())


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 0
        self.tokens: list[Token] = []
        self.errors: list[RecoveredError] = []
        self.prev_significant: Token | None = None
        # One entry per open template substitution: its brace nesting depth.
        self.template_stack: list[int] = []

    def run(self) -> None:
        text, n = self.text, len(self.text)
        if text.startswith("#!"):
            self._emit(TokenKind.LINE_COMMENT, self._take_line_rest())
        while self.pos < n:
            c = text[self.pos]
            if c in _LINE_TERMINATORS:
                self._scan_newline()
            elif c.isspace():
                self._scan_whitespace()
            elif c == "/":
                self._scan_slash()
            elif c in "'\"":
                self._scan_string()
            elif c == "`":
                self._scan_template(self.pos)
            elif c.isdigit() or (c == "." and self.pos + 1 < n and text[self.pos + 1].isdigit()):
                self._scan_number()
            elif _is_ident_start(c):
                self._scan_identifier()
            elif c == "}" and self.template_stack and self.template_stack[-1] == 0:
                self.template_stack.pop()
                self._scan_template(self.pos)
            else:
                self._scan_punctuator()
        if self.template_stack:
            self._error("unterminated template substitution")
            self.template_stack.clear()
        self._emit(TokenKind.EOF, "")

    # -- emission ----------------------------------------------------------

    def _emit(self, kind: TokenKind, lexeme: str) -> Token:
        token = Token(kind, lexeme, self.line, self.column)
        self.tokens.append(token)
        self._advance_position(lexeme)
        if not token.is_trivia:
            self.prev_significant = token
            if kind is TokenKind.PUNCTUATOR and self.template_stack:
                if lexeme == "{":
                    self.template_stack[-1] += 1
                elif lexeme == "}":
                    self.template_stack[-1] -= 1
        return token

    def _advance_position(self, lexeme: str) -> None:
        self.pos += len(lexeme)
        breaks = count_line_breaks(lexeme)
        if breaks:
            self.line += breaks
            tail = max(lexeme.rfind(ch) for ch in "\n\r  ")
            self.column = len(lexeme) - tail - 1
        else:
            self.column += len(lexeme)

    def _error(self, message: str, line: int | None = None) -> None:
        self.errors.append(RecoveredError(self.line if line is None else line, message))

    # -- scanners ----------------------------------------------------------

    def _take_line_rest(self) -> str:
        end = self.pos
        text, n = self.text, len(self.text)
        while end < n and text[end] not in _LINE_TERMINATORS:
            end += 1
        return text[self.pos : end]

    def _scan_newline(self) -> None:
        if self.text.startswith("\r\n", self.pos):
            self._emit(TokenKind.NEWLINE, "\r\n")
        else:
            self._emit(TokenKind.NEWLINE, self.text[self.pos])

    def _scan_whitespace(self) -> None:
        end = self.pos
        text, n = self.text, len(self.text)
        while end < n and text[end].isspace() and text[end] not in _LINE_TERMINATORS:
            end += 1
        self._emit(TokenKind.WHITESPACE, text[self.pos : end])

    def _scan_identifier(self) -> None:
        end = self.pos
        text, n = self.text, len(self.text)
        while end < n and _is_ident_part(text[end]):
            end += 1
        lexeme = text[self.pos : end]
        kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENTIFIER
        self._emit(kind, lexeme)

    def _scan_number(self) -> None:
        text, n = self.text, len(self.text)
        end = self.pos
        if text[end] == "0" and end + 1 < n and text[end + 1] in "xXoObB":
            end += 2
            while end < n and (text[end].isalnum() or text[end] == "_"):
                end += 1
        else:
            while end < n and (text[end].isdigit() or text[end] == "_"):
                end += 1
            if end < n and text[end] == ".":
                end += 1
                while end < n and (text[end].isdigit() or text[end] == "_"):
                    end += 1
            if end < n and text[end] in "eE":
                mark = end + 1
                if mark < n and text[mark] in "+-":
                    mark += 1
                if mark < n and text[mark].isdigit():
                    end = mark
                    while end < n and (text[end].isdigit() or text[end] == "_"):
                        end += 1
            if end < n and text[end] == "n":
                end += 1
        self._emit(TokenKind.NUMBER, text[self.pos : end])

    def _scan_string(self) -> None:
        text, n = self.text, len(self.text)
        quote = text[self.pos]
        start_line = self.line
        end = self.pos + 1
        while end < n:
            c = text[end]
            if c == "\\":
                end += 2
                if end <= n and text[end - 1 : end] == "\r" and text[end : end + 1] == "\n":
                    end += 1  # escaped \r\n line continuation
                continue
            if c == quote:
                self._emit(TokenKind.STRING, text[self.pos : end + 1])
                return
            if c in _LINE_TERMINATORS:
                break
            end += 1
        end = min(end, n)
        self._error("unterminated string literal", start_line)
        self._emit(TokenKind.STRING, text[self.pos : end])

    def _scan_template(self, start: int) -> None:
        """Scan one template chunk starting at ` or at a substitution's }."""
        text, n = self.text, len(self.text)
        start_line = self.line
        end = start + 1
        while end < n:
            c = text[end]
            if c == "\\":
                end += 2
                continue
            if c == "`":
                self._emit(TokenKind.TEMPLATE, text[start : end + 1])
                return
            if c == "$" and end + 1 < n and text[end + 1] == "{":
                self._emit(TokenKind.TEMPLATE, text[start : end + 2])
                self.template_stack.append(0)
                return
            end += 1
        self._error("unterminated template literal", start_line)
        self._emit(TokenKind.TEMPLATE, text[start:n])

    def _regex_allowed(self) -> bool:
        prev = self.prev_significant
        if prev is None:
            return True
        if prev.kind is TokenKind.KEYWORD:
            return True
        if prev.kind is TokenKind.PUNCTUATOR:
            return prev.lexeme not in _DIVISION_AFTER_PUNCT
        return prev.kind not in _VALUE_KINDS

    def _scan_slash(self) -> None:
        text, n = self.text, len(self.text)
        nxt = text[self.pos + 1] if self.pos + 1 < n else ""
        if nxt == "/":
            self._emit(TokenKind.LINE_COMMENT, self._take_line_rest())
            return
        if nxt == "*":
            close = text.find("*/", self.pos + 2)
            if close == -1:
                self._error("unterminated block comment")
                self._emit(TokenKind.BLOCK_COMMENT, text[self.pos :])
            else:
                self._emit(TokenKind.BLOCK_COMMENT, text[self.pos : close + 2])
            return
        if self._regex_allowed():
            end = self._try_regex_end()
            if end is not None:
                self._emit(TokenKind.REGEX, text[self.pos : end])
                return
        self._scan_punctuator()

    def _try_regex_end(self) -> int | None:
        """End offset of a regex literal at pos, or None if it is not one."""
        text, n = self.text, len(self.text)
        end = self.pos + 1
        in_class = False
        while end < n:
            c = text[end]
            if c == "\\":
                end += 2
                continue
            if c in _LINE_TERMINATORS:
                return None
            if c == "[":
                in_class = True
            elif c == "]":
                in_class = False
            elif c == "/" and not in_class:
                end += 1
                while end < n and _is_ident_part(text[end]):
                    end += 1  # flags
                return end
            end += 1
        return None

    def _scan_punctuator(self) -> None:
        text = self.text
        for punct in PUNCTUATORS:
            if text.startswith(punct, self.pos):
                if punct == "?." and text[self.pos + 2 : self.pos + 3].isdigit():
                    punct = "?"  # `a ? .5 : b` is a conditional, not chaining
                self._emit(TokenKind.PUNCTUATOR, punct)
                return
        # Unknown character: keep totality and the round-trip invariant.
        self._emit(TokenKind.PUNCTUATOR, text[self.pos])


def lex(text: str) -> tuple[list[Token], list[RecoveredError]]:
    """Tokenize source text, returning tokens plus recovered errors."""
    lexer = _Lexer(text)
    lexer.run()
    return lexer.tokens, lexer.errors


def tokenize(text: str) -> list[Token]:
    """Full-fidelity token stream; see lex() for the error channel."""
    return lex(text)[0]


def significant(tokens: list[Token]) -> list[Token]:
    """Tokens with trivia (whitespace, newlines, comments, eof) removed."""
    return [t for t in tokens if not t.is_trivia]
