"""Recursive-descent parser for R with precedence-climbing expressions.

Follows GNU R's operator table. Newline handling mirrors R's lexer: a
newline terminates a statement unless the expression is syntactically
incomplete (after an operator, inside parentheses or brackets, after
control-flow heads). `=` is an assignment only in statement positions;
inside an argument list a leading `name =` is a named-argument binding.

Parsing never raises to callers: `parse` returns a ParseOutcome whose
failure side carries the first error with its span. A configurable nesting
cap bounds recursion, so arbitrarily hostile input terminates cleanly
(GNU R has context-stack limits of its own).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import SyntaxKind, SyntaxNode
from .tokens import Token, TokenKind, decode_source, tokenize

DEFAULT_MAX_DEPTH = 200

K = TokenKind
S = SyntaxKind

_LEAF_TOKEN_KINDS = {
    K.NUMBER: S.NUMBER,
    K.STRING: S.STRING,
    K.RAW_STRING: S.RAW_STRING,
    K.LOGICAL: S.LOGICAL,
    K.NULL: S.NULL,
    K.NA: S.NA,
    K.INF: S.INF,
    K.BACKTICK: S.BACKTICK_SYMBOL,
}

# Infix binding powers: op text -> (left bp, right bp, node kind).
# Right-associative ops repeat the left bp on the right.
_INFIX: dict[str, tuple[int, int, SyntaxKind]] = {
    "?": (2, 3, S.BINARY_OP),
    "<-": (4, 4, S.ASSIGN),
    "<<-": (4, 4, S.ASSIGN),
    ":=": (4, 4, S.ASSIGN),
    "->": (6, 7, S.ASSIGN),
    "->>": (6, 7, S.ASSIGN),
    "~": (8, 9, S.TILDE),
    "||": (10, 11, S.BINARY_OP),
    "|": (10, 11, S.BINARY_OP),
    "&&": (12, 13, S.BINARY_OP),
    "&": (12, 13, S.BINARY_OP),
    "==": (16, 17, S.BINARY_OP),
    "!=": (16, 17, S.BINARY_OP),
    "<": (16, 17, S.BINARY_OP),
    ">": (16, 17, S.BINARY_OP),
    "<=": (16, 17, S.BINARY_OP),
    ">=": (16, 17, S.BINARY_OP),
    "+": (18, 19, S.BINARY_OP),
    "-": (18, 19, S.BINARY_OP),
    "*": (20, 21, S.BINARY_OP),
    "/": (20, 21, S.BINARY_OP),
    "|>": (22, 23, S.BINARY_OP),
    ":": (24, 25, S.COLON),
    "^": (28, 28, S.BINARY_OP),
}

_SPECIAL_BP = (22, 23)
_ACCESS_BP = 30         # $ and @
_NAMESPACE_BP = 32      # :: and :::
_POSTFIX_BP = 34        # calls and index brackets

_UNARY_BP = {"-": 26, "+": 26, "!": 14, "~": 8, "?": 2}


@dataclass(frozen=True, slots=True)
class FailureRecord:
    category: str
    span: tuple[int, int]
    message: str
    line: int
    col: int


@dataclass(frozen=True, slots=True)
class ParseOutcome:
    ok: SyntaxNode | None
    failure: FailureRecord | None
    first_invalid_byte: int | None = None

    @property
    def is_ok(self) -> bool:
        return self.ok is not None


class _ParseError(Exception):
    def __init__(self, message: str, span: tuple[int, int], line: int, col: int):
        super().__init__(message)
        self.message = message
        self.span = span
        self.line = line
        self.col = col


def parse(source: bytes | str, max_depth: int = DEFAULT_MAX_DEPTH) -> ParseOutcome:
    """Parse a whole file; failures come back as values, never exceptions."""
    decoded = decode_source(source)
    tokens = tokenize(decoded.text)
    parser = _Parser(tokens, decoded.text, max_depth)
    try:
        root = parser.parse_program()
    except _ParseError as err:
        record = FailureRecord(
            category="RawSyntaxError",
            span=err.span,
            message=err.message,
            line=err.line,
            col=err.col,
        )
        return ParseOutcome(None, record, decoded.first_invalid_byte)
    return ParseOutcome(root, None, decoded.first_invalid_byte)


def parse_text(source: str, max_depth: int = DEFAULT_MAX_DEPTH) -> SyntaxNode:
    """Parse trusted fixture text, raising on failure. Test convenience."""
    outcome = parse(source, max_depth)
    if outcome.ok is None:
        failure = outcome.failure
        raise ValueError(f"parse failed: {failure.message} at {failure.span}")
    return outcome.ok


class _Parser:
    def __init__(self, tokens: list[Token], text: str, max_depth: int):
        self.toks = [t for t in tokens if t.kind is not K.COMMENT]
        self.text = text
        self.pos = 0
        self.n = len(self.toks)
        # Newline significance, one entry per enclosing construct. Newlines
        # separate statements at top level and inside braces; inside call,
        # paren, and bracket contexts they are plain whitespace.
        self.nl_significant = [True]
        self.depth = 0
        self.max_depth = max_depth

    # -- token plumbing ----------------------------------------------------

    def _cur(self) -> Token | None:
        if not self.nl_significant[-1]:
            while self.pos < self.n and self.toks[self.pos].kind is K.NEWLINE:
                self.pos += 1
        return self.toks[self.pos] if self.pos < self.n else None

    def _cur_raw(self) -> Token | None:
        return self.toks[self.pos] if self.pos < self.n else None

    def _advance(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def _skip_newlines(self) -> None:
        while self.pos < self.n and self.toks[self.pos].kind is K.NEWLINE:
            self.pos += 1

    def _eof_where(self) -> tuple[tuple[int, int], int, int]:
        end = len(self.text)
        line = self.text.count("\n") + 1
        col = end - (self.text.rfind("\n") + 1) + 1
        return (end, end), line, col

    def _fail(self, message: str, tok: Token | None) -> None:
        if tok is None:
            span, line, col = self._eof_where()
            raise _ParseError(message, span, line, col)
        if tok.kind is K.ERROR and tok.error:
            message = tok.error
        raise _ParseError(message, (tok.start, tok.end), tok.line, tok.col)

    def _expect(self, kind: TokenKind, what: str) -> Token:
        tok = self._cur()
        if tok is None or tok.kind is not kind:
            self._fail(f"expected {what}", tok)
        return self._advance()

    def _enter(self, tok: Token | None) -> None:
        self.depth += 1
        if self.depth > self.max_depth:
            self._fail(
                f"expression nesting exceeds depth limit ({self.max_depth})",
                tok,
            )

    # -- statement sequences -------------------------------------------------

    def parse_program(self) -> SyntaxNode:
        stmts = self._statements(closer=None)
        return SyntaxNode(S.PROGRAM, (0, len(self.text)), tuple(stmts))

    def _statements(self, closer: TokenKind | None) -> list[SyntaxNode]:
        stmts: list[SyntaxNode] = []
        while True:
            tok = self._cur()
            while tok is not None and tok.kind in (K.NEWLINE, K.SEMI):
                self._advance()
                tok = self._cur()
            if tok is None:
                if closer is not None:
                    self._fail("unexpected end of input in block", None)
                return stmts
            if closer is not None and tok.kind is closer:
                return stmts
            stmts.append(self.parse_expr_or_assign())
            tok = self._cur()
            if tok is None:
                continue
            if tok.kind in (K.NEWLINE, K.SEMI):
                continue
            if closer is not None and tok.kind is closer:
                return stmts
            self._fail(f"unexpected {tok.text!r}", tok)

    # -- expressions ---------------------------------------------------------

    def parse_expr_or_assign(self) -> SyntaxNode:
        lhs = self.parse_expr(0)
        tok = self._cur()
        if tok is not None and tok.kind is K.OP and tok.text == "=":
            self._advance()
            self._skip_newlines()
            rhs = self.parse_expr_or_assign()
            return SyntaxNode(
                S.ASSIGN, (lhs.span[0], rhs.span[1]), (lhs, rhs), op="="
            )
        return lhs

    def parse_expr(self, min_bp: int) -> SyntaxNode:
        self._enter(self._cur())
        try:
            lhs = self._prefix()
            while True:
                tok = self._cur()
                if tok is None or tok.kind is K.NEWLINE:
                    break
                kind = tok.kind
                if kind in (K.LPAREN, K.LBRACKET, K.DLBRACKET):
                    if _POSTFIX_BP < min_bp:
                        break
                    lhs = self._call_or_index(lhs)
                    continue
                if kind is K.OP and tok.text in ("$", "@"):
                    if _ACCESS_BP < min_bp:
                        break
                    lhs = self._member_access(lhs)
                    continue
                if kind is K.OP and tok.text in ("::", ":::"):
                    if _NAMESPACE_BP < min_bp:
                        break
                    lhs = self._namespace_access(lhs)
                    continue
                if kind is K.SPECIAL:
                    lbp, rbp = _SPECIAL_BP
                    if lbp < min_bp:
                        break
                    self._advance()
                    self._skip_newlines()
                    rhs = self.parse_expr(rbp)
                    lhs = SyntaxNode(
                        S.SPECIAL_OP, (lhs.span[0], rhs.span[1]), (lhs, rhs),
                        op=tok.text,
                    )
                    continue
                if kind is K.OP and tok.text in _INFIX:
                    lbp, rbp, node_kind = _INFIX[tok.text]
                    if lbp < min_bp:
                        break
                    self._advance()
                    self._skip_newlines()
                    rhs = self.parse_expr(rbp)
                    lhs = SyntaxNode(
                        node_kind, (lhs.span[0], rhs.span[1]), (lhs, rhs),
                        op=tok.text,
                    )
                    continue
                break
            return lhs
        finally:
            self.depth -= 1

    def _prefix(self) -> SyntaxNode:
        tok = self._cur()
        if tok is None:
            self._fail("unexpected end of input", None)
        kind = tok.kind
        if kind in _LEAF_TOKEN_KINDS:
            self._advance()
            return SyntaxNode(
                _LEAF_TOKEN_KINDS[kind], (tok.start, tok.end), text=tok.text
            )
        if kind is K.SYMBOL:
            self._advance()
            node_kind = S.DOTS if tok.text == "..." else S.SYMBOL
            return SyntaxNode(node_kind, (tok.start, tok.end), text=tok.text)
        if kind is K.OP and tok.text in _UNARY_BP:
            self._advance()
            self._skip_newlines()
            operand = self.parse_expr(_UNARY_BP[tok.text])
            node_kind = S.TILDE if tok.text == "~" else S.UNARY_OP
            return SyntaxNode(
                node_kind, (tok.start, operand.span[1]), (operand,), op=tok.text
            )
        if kind is K.LPAREN:
            return self._paren()
        if kind is K.LBRACE:
            return self._block()
        if kind in (K.FUNCTION, K.LAMBDA):
            return self._function_def(tok)
        if kind is K.IF:
            return self._if()
        if kind is K.FOR:
            return self._for()
        if kind is K.WHILE:
            return self._while()
        if kind is K.REPEAT:
            return self._repeat()
        if kind is K.BREAK:
            self._advance()
            return SyntaxNode(S.BREAK, (tok.start, tok.end), text=tok.text)
        if kind is K.NEXT:
            self._advance()
            return SyntaxNode(S.NEXT, (tok.start, tok.end), text=tok.text)
        self._fail(f"unexpected {tok.text!r}", tok)
        raise AssertionError("unreachable")

    # -- compound forms --------------------------------------------------------

    def _paren(self) -> SyntaxNode:
        opener = self._advance()
        self.nl_significant.append(False)
        inner = self.parse_expr_or_assign()
        closer = self._expect(K.RPAREN, "')'")
        self.nl_significant.pop()
        return SyntaxNode(S.PAREN, (opener.start, closer.end), (inner,))

    def _block(self) -> SyntaxNode:
        opener = self._advance()
        self.nl_significant.append(True)
        stmts = self._statements(closer=K.RBRACE)
        closer = self._advance()
        self.nl_significant.pop()
        return SyntaxNode(S.BLOCK, (opener.start, closer.end), tuple(stmts))

    def _call_or_index(self, lhs: SyntaxNode) -> SyntaxNode:
        opener = self._advance()
        self.nl_significant.append(False)
        if opener.kind is K.LPAREN:
            args = self._arglist(K.RPAREN)
            closer = self._advance()
            node = SyntaxNode(
                S.CALL, (lhs.span[0], closer.end), (lhs, *args)
            )
        elif opener.kind is K.LBRACKET:
            args = self._arglist(K.RBRACKET)
            closer = self._advance()
            node = SyntaxNode(
                S.INDEX, (lhs.span[0], closer.end), (lhs, *args)
            )
        else:
            args = self._arglist(K.RBRACKET)
            self._advance()
            closer = self._expect(K.RBRACKET, "']]'")
            node = SyntaxNode(
                S.INDEX2, (lhs.span[0], closer.end), (lhs, *args)
            )
        self.nl_significant.pop()
        return node

    def _arglist(self, closer: TokenKind) -> list[SyntaxNode]:
        """Arguments up to (not consuming) the closer. Empty slots produce
        no node; `name =` bindings become DefaultArg nodes, with the value
        child omitted for switch-style fallthrough arguments."""
        args: list[SyntaxNode] = []
        while True:
            tok = self._cur()
            if tok is None:
                self._fail("unexpected end of input in argument list", None)
            if tok.kind is closer:
                return args
            if tok.kind is K.COMMA:
                self._advance()
                continue
            args.append(self._argument(closer))
            tok = self._cur()
            if tok is None:
                self._fail("unexpected end of input in argument list", None)
            if tok.kind is K.COMMA:
                self._advance()
            elif tok.kind is not closer:
                self._fail(f"unexpected {tok.text!r} in argument list", tok)

    def _argument(self, closer: TokenKind) -> SyntaxNode:
        tok = self._cur()
        if tok.kind in (K.SYMBOL, K.STRING, K.BACKTICK, K.NULL):
            nxt = self._peek_past_newlines(1)
            if nxt is not None and nxt.kind is K.OP and nxt.text == "=":
                name_tok = self._advance()
                if name_tok.kind is K.SYMBOL:
                    name_kind = (
                        S.DOTS if name_tok.text == "..." else S.SYMBOL
                    )
                elif name_tok.kind is K.BACKTICK:
                    name_kind = S.BACKTICK_SYMBOL
                elif name_tok.kind is K.NULL:
                    name_kind = S.NULL
                else:
                    name_kind = S.STRING
                name = SyntaxNode(
                    name_kind, (name_tok.start, name_tok.end), text=name_tok.text
                )
                eq = self._advance()
                after = self._cur()
                if after is not None and (
                    after.kind is closer or after.kind is K.COMMA
                ):
                    return SyntaxNode(
                        S.DEFAULT_ARG, (name_tok.start, eq.end), (name,)
                    )
                value = self.parse_expr(0)
                return SyntaxNode(
                    S.DEFAULT_ARG,
                    (name_tok.start, value.span[1]),
                    (name, value),
                )
        return self.parse_expr(0)

    def _peek_past_newlines(self, offset: int) -> Token | None:
        """Token `offset` places ahead of the current one, newline-blind."""
        self._cur()
        i = self.pos
        seen = 0
        while i < self.n:
            if self.toks[i].kind is not K.NEWLINE:
                if seen == offset:
                    return self.toks[i]
                seen += 1
            i += 1
        return None

    def _function_def(self, kw: Token) -> SyntaxNode:
        self._advance()
        lparen = self._expect(K.LPAREN, "'(' after function")
        self.nl_significant.append(False)
        params: list[SyntaxNode] = []
        while True:
            tok = self._cur()
            if tok is None:
                self._fail("unexpected end of input in parameter list", None)
            if tok.kind is K.RPAREN:
                break
            if tok.kind is not K.SYMBOL:
                self._fail("expected parameter name", tok)
            self._advance()
            name_kind = S.DOTS if tok.text == "..." else S.SYMBOL
            name = SyntaxNode(name_kind, (tok.start, tok.end), text=tok.text)
            nxt = self._cur()
            if nxt is not None and nxt.kind is K.OP and nxt.text == "=":
                self._advance()
                default = self.parse_expr(0)
                params.append(
                    SyntaxNode(
                        S.DEFAULT_ARG,
                        (name.span[0], default.span[1]),
                        (name, default),
                    )
                )
            else:
                params.append(name)
            nxt = self._cur()
            if nxt is not None and nxt.kind is K.COMMA:
                self._advance()
            elif nxt is None or nxt.kind is not K.RPAREN:
                self._fail("expected ',' or ')' in parameter list", nxt)
        rparen = self._advance()
        self.nl_significant.pop()
        param_node = SyntaxNode(
            S.PARAMS, (lparen.start, rparen.end), tuple(params)
        )
        self._skip_newlines()
        body = self.parse_expr_or_assign()
        op = "\\" if kw.kind is K.LAMBDA else "function"
        return SyntaxNode(
            S.FUNCTION_DEF, (kw.start, body.span[1]), (param_node, body), op=op
        )

    def _condition(self, what: str) -> SyntaxNode:
        self._expect(K.LPAREN, f"'(' after {what}")
        self.nl_significant.append(False)
        cond = self.parse_expr(0)
        self._expect(K.RPAREN, f"')' closing {what} condition")
        self.nl_significant.pop()
        self._skip_newlines()
        return cond

    def _if(self) -> SyntaxNode:
        kw = self._advance()
        cond = self._condition("if")
        then = self.parse_expr_or_assign()
        # `else` may follow a newline only inside an enclosing construct;
        # at top level a newline ends the statement (as in GNU R).
        save = self.pos
        crossed = False
        while self.pos < self.n and self.toks[self.pos].kind is K.NEWLINE:
            self.pos += 1
            crossed = True
        tok = self._cur_raw()
        if tok is not None and tok.kind is K.ELSE and (
            not crossed or len(self.nl_significant) > 1
        ):
            self._advance()
            self._skip_newlines()
            other = self.parse_expr_or_assign()
            return SyntaxNode(
                S.IF, (kw.start, other.span[1]), (cond, then, other)
            )
        self.pos = save
        return SyntaxNode(S.IF, (kw.start, then.span[1]), (cond, then))

    def _for(self) -> SyntaxNode:
        kw = self._advance()
        self._expect(K.LPAREN, "'(' after for")
        self.nl_significant.append(False)
        var_tok = self._cur()
        if var_tok is None or var_tok.kind not in (K.SYMBOL, K.BACKTICK):
            self._fail("expected loop variable", var_tok)
        self._advance()
        var_kind = (
            S.BACKTICK_SYMBOL if var_tok.kind is K.BACKTICK else S.SYMBOL
        )
        var = SyntaxNode(var_kind, (var_tok.start, var_tok.end), text=var_tok.text)
        self._expect(K.IN, "'in'")
        vector = self.parse_expr(0)
        self._expect(K.RPAREN, "')' closing for")
        self.nl_significant.pop()
        self._skip_newlines()
        body = self.parse_expr_or_assign()
        return SyntaxNode(S.FOR, (kw.start, body.span[1]), (var, vector, body))

    def _while(self) -> SyntaxNode:
        kw = self._advance()
        cond = self._condition("while")
        body = self.parse_expr_or_assign()
        return SyntaxNode(S.WHILE, (kw.start, body.span[1]), (cond, body))

    def _repeat(self) -> SyntaxNode:
        kw = self._advance()
        self._skip_newlines()
        body = self.parse_expr_or_assign()
        return SyntaxNode(S.REPEAT, (kw.start, body.span[1]), (body,))

    def _member_access(self, lhs: SyntaxNode) -> SyntaxNode:
        op = self._advance()
        self._skip_newlines()
        tok = self._cur()
        if tok is None or tok.kind not in (K.SYMBOL, K.STRING, K.BACKTICK):
            self._fail(f"expected name after {op.text!r}", tok)
        self._advance()
        if tok.kind is K.SYMBOL:
            leaf_kind = S.SYMBOL
        elif tok.kind is K.BACKTICK:
            leaf_kind = S.BACKTICK_SYMBOL
        else:
            leaf_kind = S.STRING
        leaf = SyntaxNode(leaf_kind, (tok.start, tok.end), text=tok.text)
        kind = S.DOLLAR if op.text == "$" else S.AT
        return SyntaxNode(kind, (lhs.span[0], tok.end), (lhs, leaf), op=op.text)

    def _namespace_access(self, lhs: SyntaxNode) -> SyntaxNode:
        op = self._advance()
        self._skip_newlines()
        tok = self._cur()
        if tok is None or tok.kind not in (K.SYMBOL, K.STRING, K.BACKTICK):
            self._fail(f"expected name after {op.text!r}", tok)
        self._advance()
        if tok.kind is K.SYMBOL:
            leaf_kind = S.SYMBOL
        elif tok.kind is K.BACKTICK:
            leaf_kind = S.BACKTICK_SYMBOL
        else:
            leaf_kind = S.STRING
        leaf = SyntaxNode(leaf_kind, (tok.start, tok.end), text=tok.text)
        kind = S.NAMESPACE if op.text == "::" else S.NAMESPACE_INT
        return SyntaxNode(kind, (lhs.span[0], tok.end), (lhs, leaf), op=op.text)
