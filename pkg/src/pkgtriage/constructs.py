"""Shallow construct scanner over the token stream.

This deliberately stops short of building an AST: a single pass with a
bracket-context stack is enough to spot the constructs the metrics need
(function forms, branch points, import/require relations).  Object and
class bodies are tracked so that shorthand methods and getters/setters
are recognized without parsing expressions.

Ambiguities inherited from JavaScript's grammar (object literal vs
block, `do ... while` tails, ASI) are resolved with the small heuristics
documented inline; misreadings surface as recovered errors or slightly
off construct labels, never as exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .lexer import RecoveredError, Token, TokenKind, lex


class ConstructKind(str, Enum):
    FUNCTION_DECL = "function-decl"
    FUNCTION_EXPR = "function-expr"
    ARROW_FUNCTION = "arrow-function"
    METHOD = "method"
    GETTER_SETTER = "getter-setter"
    CLASS_DECL = "class-decl"
    IF = "if"
    ELSE_IF = "else-if"
    FOR = "for"
    FOR_IN_OF = "for-in-of"
    WHILE = "while"
    DO_WHILE = "do-while"
    CASE_CLAUSE = "case-clause"
    CATCH_CLAUSE = "catch-clause"
    CONDITIONAL_EXPR = "conditional-expr"
    LOGICAL_AND = "logical-and"
    LOGICAL_OR = "logical-or"
    NULLISH_COALESCE = "nullish-coalesce"
    IMPORT_DECL = "import-decl"
    EXPORT_FROM = "export-from"
    DYNAMIC_IMPORT = "dynamic-import"
    REQUIRE_CALL = "require-call"


FUNCTION_KINDS = frozenset(
    {
        ConstructKind.FUNCTION_DECL,
        ConstructKind.FUNCTION_EXPR,
        ConstructKind.ARROW_FUNCTION,
        ConstructKind.METHOD,
        ConstructKind.GETTER_SETTER,
    }
)

IMPORT_KINDS = frozenset(
    {
        ConstructKind.IMPORT_DECL,
        ConstructKind.EXPORT_FROM,
        ConstructKind.DYNAMIC_IMPORT,
        ConstructKind.REQUIRE_CALL,
    }
)


@dataclass(frozen=True, slots=True)
class Construct:
    kind: ConstructKind
    line: int
    specifier: str | None = None


@dataclass(slots=True)
class ParseOutcome:
    tokens: list[Token]
    constructs: list[Construct]
    errors: list[RecoveredError]


# Context kinds for the bracket stack.
_PAREN, _BRACKET, _BLOCK, _OBJECT, _CLASS = "paren", "bracket", "block", "object", "class"


@dataclass(slots=True)
class _Ctx:
    kind: str
    member_pos: bool = False
    buffer: list = field(default_factory=list)
    computed_member: bool = False


_MODIFIER_LEXEMES = frozenset({"static", "async", "get", "set", "*", "#"})
_NAME_KINDS = frozenset(
    {TokenKind.IDENTIFIER, TokenKind.KEYWORD, TokenKind.STRING, TokenKind.NUMBER}
)
_OBJECT_AFTER_KEYWORD = frozenset(
    {"return", "typeof", "void", "new", "delete", "in", "instanceof", "yield", "await", "throw", "case", "default"}
)
_BLOCK_AFTER_PUNCT = frozenset({")", ";", "{", "}", "=>"})

_STRING_ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v",
    "0": "\0", "\\": "\\", "'": "'", '"': '"', "`": "`",
}

_COMPUTED_NAME = object()  # sentinel for `[expr]` member names


def _decode_string(lexeme: str) -> str:
    body = lexeme[1:]
    if len(lexeme) >= 2 and lexeme[-1] == lexeme[0]:
        body = lexeme[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\" or i + 1 >= len(body):
            out.append(c)
            i += 1
            continue
        esc = body[i + 1]
        if esc == "u" and body[i + 2 : i + 3] == "{":
            close = body.find("}", i + 3)
            if close != -1:
                try:
                    out.append(chr(int(body[i + 3 : close], 16)))
                    i = close + 1
                    continue
                except ValueError:
                    pass
        elif esc == "u" and len(body) >= i + 6:
            try:
                out.append(chr(int(body[i + 2 : i + 6], 16)))
                i += 6
                continue
            except ValueError:
                pass
        elif esc == "x" and len(body) >= i + 4:
            try:
                out.append(chr(int(body[i + 2 : i + 4], 16)))
                i += 4
                continue
            except ValueError:
                pass
        out.append(_STRING_ESCAPES.get(esc, esc))
        i += 2
    return "".join(out)


class _Scanner:
    def __init__(self, tokens: list[Token]):
        self.sig = [t for t in tokens if not t.is_trivia]
        self.constructs: list[Construct] = []
        self.errors: list[RecoveredError] = []
        self.stack: list[_Ctx] = []
        self.pending_do = 0
        self.class_pending_at: int | None = None  # stack depth where `class` was seen

    def run(self) -> None:
        prev: Token | None = None
        for i, tok in enumerate(self.sig):
            consumed = self._member_step(tok)
            if not consumed:
                self._dispatch(i, tok, prev)
            self._structure_step(tok, prev)
            prev = tok

    def _emit(self, kind: ConstructKind, line: int, specifier: str | None = None) -> None:
        self.constructs.append(Construct(kind, line, specifier))

    # -- object / class member tracking -------------------------------------

    def _member_step(self, tok: Token) -> bool:
        """Track member-name positions inside object and class bodies.

        Returns True when the token was absorbed as (part of) a member
        name, in which case construct dispatch must not also see it.
        """
        top = self.stack[-1] if self.stack else None
        if top is None or top.kind not in (_OBJECT, _CLASS):
            return False
        lexeme = tok.lexeme
        if tok.kind is TokenKind.PUNCTUATOR:
            if lexeme == "," and top.kind == _OBJECT:
                top.member_pos, top.buffer = True, []
            elif lexeme == ";" and top.kind == _CLASS:
                top.member_pos, top.buffer = True, []
            elif lexeme in (":", "="):
                top.member_pos, top.buffer = False, []
            elif lexeme == "(":
                if top.member_pos and top.buffer:
                    self._maybe_emit_method(top)
                top.member_pos = False
            elif lexeme in ("*", "#"):
                if top.member_pos:
                    top.buffer.append(tok)
                    return True
            elif lexeme in ("{", "}", "["):
                pass  # structural; handled by _structure_step
            else:
                top.member_pos, top.buffer = False, []
            return False
        if top.member_pos and tok.kind in _NAME_KINDS:
            top.buffer.append(tok)
            return True
        return False

    def _maybe_emit_method(self, top: _Ctx) -> None:
        *mods, name = top.buffer
        named = name is _COMPUTED_NAME or (isinstance(name, Token) and name.kind in _NAME_KINDS)
        mod_lexemes = [m.lexeme for m in mods if isinstance(m, Token)]
        if not named or len(mod_lexemes) != len(mods):
            return
        if any(m not in _MODIFIER_LEXEMES for m in mod_lexemes):
            return
        line = name.line if isinstance(name, Token) else (mods[-1].line if mods else 0)
        if "get" in mod_lexemes or "set" in mod_lexemes:
            self._emit(ConstructKind.GETTER_SETTER, line)
        else:
            self._emit(ConstructKind.METHOD, line)
        top.buffer = []

    # -- construct dispatch --------------------------------------------------

    def _dispatch(self, i: int, tok: Token, prev: Token | None) -> None:
        if tok.kind is TokenKind.KEYWORD:
            self._dispatch_keyword(i, tok, prev)
        elif tok.kind is TokenKind.IDENTIFIER and tok.lexeme == "require":
            self._dispatch_require(i, tok, prev)
        elif tok.kind is TokenKind.PUNCTUATOR:
            if tok.lexeme == "=>":
                self._emit(ConstructKind.ARROW_FUNCTION, tok.line)
            elif tok.lexeme == "&&":
                self._emit(ConstructKind.LOGICAL_AND, tok.line)
            elif tok.lexeme == "||":
                self._emit(ConstructKind.LOGICAL_OR, tok.line)
            elif tok.lexeme == "??":
                self._emit(ConstructKind.NULLISH_COALESCE, tok.line)
            elif tok.lexeme == "?":
                self._emit(ConstructKind.CONDITIONAL_EXPR, tok.line)

    def _dispatch_keyword(self, i: int, tok: Token, prev: Token | None) -> None:
        word = tok.lexeme
        if word == "function":
            self._emit(self._function_kind(i, prev), tok.line)
        elif word == "class":
            self._emit(ConstructKind.CLASS_DECL, tok.line)
            self.class_pending_at = len(self.stack)
        elif word == "if":
            kind = ConstructKind.ELSE_IF if prev and prev.lexeme == "else" and prev.kind is TokenKind.KEYWORD else ConstructKind.IF
            self._emit(kind, tok.line)
        elif word == "for":
            self._emit(self._for_kind(i), tok.line)
        elif word == "while":
            # A `while` right after the closing of a do-body is the tail of
            # a do-while already counted at its `do`.
            if self.pending_do and prev and prev.kind is TokenKind.PUNCTUATOR and prev.lexeme in ("}", ";"):
                self.pending_do -= 1
            else:
                self._emit(ConstructKind.WHILE, tok.line)
        elif word == "do":
            self._emit(ConstructKind.DO_WHILE, tok.line)
            self.pending_do += 1
        elif word == "case":
            self._emit(ConstructKind.CASE_CLAUSE, tok.line)
        elif word == "catch":
            self._emit(ConstructKind.CATCH_CLAUSE, tok.line)
        elif word == "import":
            self._dispatch_import(i, tok)
        elif word == "export":
            self._dispatch_export(i, tok)

    def _function_kind(self, i: int, prev: Token | None) -> ConstructKind:
        if prev is not None and prev.kind is TokenKind.IDENTIFIER and prev.lexeme == "async":
            prev = self.sig[i - 2] if i >= 2 else None
        if prev is None:
            return ConstructKind.FUNCTION_DECL
        if prev.kind is TokenKind.PUNCTUATOR and prev.lexeme in (";", "{", "}"):
            return ConstructKind.FUNCTION_DECL
        if prev.kind is TokenKind.KEYWORD and prev.lexeme in ("export", "default"):
            return ConstructKind.FUNCTION_DECL
        return ConstructKind.FUNCTION_EXPR

    def _for_kind(self, i: int) -> ConstructKind:
        j = i + 1
        sig = self.sig
        if j < len(sig) and sig[j].lexeme == "await":
            j += 1
        if j >= len(sig) or sig[j].lexeme != "(":
            return ConstructKind.FOR
        depth = 0
        while j < len(sig):
            lex_ = sig[j].lexeme
            if lex_ in ("(", "[", "{"):
                depth += 1
            elif lex_ in (")", "]", "}"):
                depth -= 1
                if depth == 0:
                    break
            elif depth == 1:
                if lex_ == ";":
                    return ConstructKind.FOR
                if sig[j].kind is TokenKind.KEYWORD and lex_ == "in":
                    return ConstructKind.FOR_IN_OF
                if sig[j].kind is TokenKind.IDENTIFIER and lex_ == "of":
                    return ConstructKind.FOR_IN_OF
            j += 1
        return ConstructKind.FOR

    def _dispatch_import(self, i: int, tok: Token) -> None:
        sig = self.sig
        nxt = sig[i + 1] if i + 1 < len(sig) else None
        if nxt is not None and nxt.lexeme == "(" and nxt.kind is TokenKind.PUNCTUATOR:
            arg = sig[i + 2] if i + 2 < len(sig) else None
            after = sig[i + 3] if i + 3 < len(sig) else None
            if arg is not None and arg.kind is TokenKind.STRING and after is not None and after.lexeme in (")", ","):
                self._emit(ConstructKind.DYNAMIC_IMPORT, tok.line, _decode_string(arg.lexeme))
            else:
                self.errors.append(RecoveredError(tok.line, "dynamic import with non-literal specifier"))
            return
        if nxt is not None and nxt.lexeme == "." and nxt.kind is TokenKind.PUNCTUATOR:
            return  # import.meta
        for j in range(i + 1, min(i + 200, len(sig))):
            t = sig[j]
            if t.kind is TokenKind.STRING:
                self._emit(ConstructKind.IMPORT_DECL, tok.line, _decode_string(t.lexeme))
                return
            if t.kind is TokenKind.PUNCTUATOR and t.lexeme == ";":
                break
        self.errors.append(RecoveredError(tok.line, "import declaration without a string source"))

    def _dispatch_export(self, i: int, tok: Token) -> None:
        sig = self.sig
        nxt = sig[i + 1] if i + 1 < len(sig) else None
        if nxt is None or nxt.kind is not TokenKind.PUNCTUATOR or nxt.lexeme not in ("*", "{"):
            return
        j = i + 1
        if nxt.lexeme == "{":
            depth = 0
            while j < len(sig):
                if sig[j].lexeme == "{":
                    depth += 1
                elif sig[j].lexeme == "}":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            j += 1
        else:
            j = i + 2
        # Allow `as name` between the clause and `from`; stop at statement end.
        for k in range(j, min(j + 6, len(sig))):
            t = sig[k]
            if t.kind is TokenKind.IDENTIFIER and t.lexeme == "from":
                src = sig[k + 1] if k + 1 < len(sig) else None
                if src is not None and src.kind is TokenKind.STRING:
                    self._emit(ConstructKind.EXPORT_FROM, tok.line, _decode_string(src.lexeme))
                return
            if t.kind is TokenKind.PUNCTUATOR and t.lexeme == ";":
                return

    def _dispatch_require(self, i: int, tok: Token, prev: Token | None) -> None:
        if prev is not None and prev.kind is TokenKind.PUNCTUATOR and prev.lexeme in (".", "?."):
            return
        sig = self.sig
        nxt = sig[i + 1] if i + 1 < len(sig) else None
        if nxt is None or nxt.kind is not TokenKind.PUNCTUATOR or nxt.lexeme != "(":
            return
        arg = sig[i + 2] if i + 2 < len(sig) else None
        after = sig[i + 3] if i + 3 < len(sig) else None
        if arg is not None and arg.kind is TokenKind.STRING and after is not None and after.lexeme == ")":
            self._emit(ConstructKind.REQUIRE_CALL, tok.line, _decode_string(arg.lexeme))
        else:
            self.errors.append(RecoveredError(tok.line, "require with a non-literal argument"))

    # -- bracket structure ----------------------------------------------------

    def _structure_step(self, tok: Token, prev: Token | None) -> None:
        if tok.kind is not TokenKind.PUNCTUATOR:
            return
        lexeme = tok.lexeme
        stack = self.stack
        if lexeme == "(":
            stack.append(_Ctx(_PAREN))
        elif lexeme == ")":
            if stack and stack[-1].kind == _PAREN:
                stack.pop()
        elif lexeme == "[":
            top = stack[-1] if stack else None
            computed = bool(top and top.kind in (_OBJECT, _CLASS) and top.member_pos)
            stack.append(_Ctx(_BRACKET, computed_member=computed))
        elif lexeme == "]":
            if stack and stack[-1].kind == _BRACKET:
                ctx = stack.pop()
                if ctx.computed_member and stack and stack[-1].kind in (_OBJECT, _CLASS):
                    stack[-1].buffer.append(_COMPUTED_NAME)
        elif lexeme == "{":
            if self.class_pending_at is not None and len(stack) == self.class_pending_at:
                self.class_pending_at = None
                stack.append(_Ctx(_CLASS, member_pos=True))
            elif self._brace_opens_object(prev):
                stack.append(_Ctx(_OBJECT, member_pos=True))
            else:
                stack.append(_Ctx(_BLOCK))
        elif lexeme == "}":
            if stack and stack[-1].kind in (_BLOCK, _OBJECT, _CLASS):
                stack.pop()
                if stack and stack[-1].kind == _CLASS:
                    stack[-1].member_pos, stack[-1].buffer = True, []

    def _brace_opens_object(self, prev: Token | None) -> bool:
        if prev is None:
            return False
        if prev.kind is TokenKind.KEYWORD:
            return prev.lexeme in _OBJECT_AFTER_KEYWORD
        if prev.kind is TokenKind.PUNCTUATOR:
            if prev.lexeme in _BLOCK_AFTER_PUNCT:
                return False
            if prev.lexeme == ":":
                top = self.stack[-1] if self.stack else None
                return bool(top and top.kind == _OBJECT)
            return True
        return False  # after identifiers/literals a brace starts a block


def scan_constructs(tokens: list[Token]) -> ParseOutcome:
    """Single shallow pass; never raises on malformed input."""
    scanner = _Scanner(tokens)
    scanner.run()
    return ParseOutcome(tokens, scanner.constructs, scanner.errors)


def parse_source(text: str) -> ParseOutcome:
    """Tokenize and scan, merging lexical and structural recovered errors."""
    tokens, lex_errors = lex(text)
    outcome = scan_constructs(tokens)
    outcome.errors = sorted(lex_errors + outcome.errors)
    return outcome
