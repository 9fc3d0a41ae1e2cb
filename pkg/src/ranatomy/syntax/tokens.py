"""Lexer for R source code.

Produces a flat token stream including comment and newline tokens, so that
concatenating token texts with the skipped whitespace reproduces the input
exactly. Lexical problems (unterminated strings, stray characters, malformed
raw strings) never raise: they are emitted as ERROR tokens and surface later
as parse failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto


class TokenKind(Enum):
    NUMBER = auto()
    STRING = auto()
    RAW_STRING = auto()
    SYMBOL = auto()
    BACKTICK = auto()
    LOGICAL = auto()        # TRUE FALSE T F
    NULL = auto()
    NA = auto()
    INF = auto()
    FUNCTION = auto()
    LAMBDA = auto()         # backslash shorthand
    IF = auto()
    ELSE = auto()
    FOR = auto()
    IN = auto()
    WHILE = auto()
    REPEAT = auto()
    BREAK = auto()
    NEXT = auto()
    OP = auto()             # operators, text disambiguates
    SPECIAL = auto()        # %...% user-definable infix, %% and %/% included
    LPAREN = auto()
    RPAREN = auto()
    LBRACE = auto()
    RBRACE = auto()
    LBRACKET = auto()
    DLBRACKET = auto()      # '[[' lexed as one token, closed by two ']'
    RBRACKET = auto()
    COMMA = auto()
    SEMI = auto()
    NEWLINE = auto()
    COMMENT = auto()
    ERROR = auto()


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    start: int
    end: int
    line: int
    col: int
    error: str | None = None


@dataclass(frozen=True, slots=True)
class DecodedSource:
    text: str
    first_invalid_byte: int | None


KEYWORDS = {
    "function": TokenKind.FUNCTION,
    "if": TokenKind.IF,
    "else": TokenKind.ELSE,
    "for": TokenKind.FOR,
    "in": TokenKind.IN,
    "while": TokenKind.WHILE,
    "repeat": TokenKind.REPEAT,
    "break": TokenKind.BREAK,
    "next": TokenKind.NEXT,
}

CONSTANTS = {
    "TRUE": TokenKind.LOGICAL,
    "FALSE": TokenKind.LOGICAL,
    "T": TokenKind.LOGICAL,
    "F": TokenKind.LOGICAL,
    "NULL": TokenKind.NULL,
    "NA": TokenKind.NA,
    "NA_integer_": TokenKind.NA,
    "NA_real_": TokenKind.NA,
    "NA_complex_": TokenKind.NA,
    "NA_character_": TokenKind.NA,
    "Inf": TokenKind.INF,
    "NaN": TokenKind.NUMBER,
}

# Horizontal whitespace; \n is a token of its own.
_WS = " \t\r\f\v"

_HEX = "0123456789abcdefABCDEF"


def decode_source(data: bytes | str) -> DecodedSource:
    """Decode input as UTF-8, remembering the first invalid byte offset."""
    if isinstance(data, str):
        return DecodedSource(data, None)
    try:
        return DecodedSource(data.decode("utf-8"), None)
    except UnicodeDecodeError as exc:
        return DecodedSource(data.decode("utf-8", errors="replace"), exc.start)


def tokenize(text: str) -> list[Token]:
    return _Scanner(text).scan()


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []

    def scan(self) -> list[Token]:
        text = self.text
        n = len(text)
        while self.pos < n:
            ch = text[self.pos]
            if ch in _WS:
                self._advance(1)
            elif ch == "\n":
                self._emit(TokenKind.NEWLINE, self.pos + 1)
            elif ch == "#":
                end = text.find("\n", self.pos)
                self._emit(TokenKind.COMMENT, n if end < 0 else end)
            elif ch.isdigit() or (ch == "." and self._peek_is_digit(1)):
                self._number()
            elif ch in "rR" and self._peek(1) in ('"', "'"):
                self._raw_string()
            elif ch in "\"'":
                self._string(ch)
            elif ch == "`":
                self._backtick()
            elif ch.isalpha() or ch == ".":
                self._symbol()
            elif ch == "%":
                self._special()
            else:
                self._operator(ch)
        return self.tokens

    # -- helpers ---------------------------------------------------------

    def _peek(self, offset: int) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _peek_is_digit(self, offset: int) -> bool:
        return self._peek(offset).isdigit()

    def _advance(self, count: int) -> None:
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _emit(self, kind: TokenKind, end: int, error: str | None = None) -> None:
        start, line, col = self.pos, self.line, self.col
        self._advance(end - start)
        self.tokens.append(
            Token(kind, self.text[start:end], start, end, line, col, error)
        )

    # -- scanners --------------------------------------------------------

    def _number(self) -> None:
        text, n = self.text, len(self.text)
        i = self.pos
        if text[i] == "0" and i + 1 < n and text[i + 1] in "xX":
            i += 2
            while i < n and text[i] in _HEX:
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and text[i] in _HEX:
                    i += 1
            if i < n and text[i] in "pP":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
        else:
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
        if i < n and text[i] in "Li":
            i += 1
        self._emit(TokenKind.NUMBER, i)

    def _string(self, quote: str) -> None:
        text, n = self.text, len(self.text)
        i = self.pos + 1
        while i < n:
            ch = text[i]
            if ch == "\\" and i + 1 < n:
                i += 2
                continue
            if ch == quote:
                self._emit(TokenKind.STRING, i + 1)
                return
            i += 1
        self._emit(TokenKind.ERROR, n, error="unterminated string constant")

    def _raw_string(self) -> None:
        text, n = self.text, len(self.text)
        quote = text[self.pos + 1]
        i = self.pos + 2
        dashes = 0
        while i < n and text[i] == "-":
            dashes += 1
            i += 1
        openers = {"(": ")", "[": "]", "{": "}"}
        if i >= n or text[i] not in openers:
            self._emit(TokenKind.ERROR, min(i + 1, n), error="malformed raw string")
            return
        closer = openers[text[i]] + "-" * dashes + quote
        end = text.find(closer, i + 1)
        if end < 0:
            self._emit(TokenKind.ERROR, n, error="unterminated raw string")
            return
        self._emit(TokenKind.RAW_STRING, end + len(closer))

    def _backtick(self) -> None:
        text, n = self.text, len(self.text)
        i = self.pos + 1
        while i < n and text[i] not in "`\n":
            i += 1
        if i < n and text[i] == "`":
            self._emit(TokenKind.BACKTICK, i + 1)
        else:
            self._emit(TokenKind.ERROR, i, error="unterminated quoted name")

    def _symbol(self) -> None:
        text, n = self.text, len(self.text)
        i = self.pos + 1
        while i < n and (text[i].isalnum() or text[i] in "._"):
            i += 1
        word = text[self.pos:i]
        kind = KEYWORDS.get(word) or CONSTANTS.get(word) or TokenKind.SYMBOL
        self._emit(kind, i)

    def _special(self) -> None:
        text, n = self.text, len(self.text)
        i = self.pos + 1
        while i < n and text[i] not in "%\n":
            i += 1
        if i < n and text[i] == "%":
            self._emit(TokenKind.SPECIAL, i + 1)
        else:
            self._emit(TokenKind.ERROR, i, error="unterminated infix operator")

    _SIMPLE = {
        "(": TokenKind.LPAREN,
        ")": TokenKind.RPAREN,
        "{": TokenKind.LBRACE,
        "}": TokenKind.RBRACE,
        "]": TokenKind.RBRACKET,
        ",": TokenKind.COMMA,
        ";": TokenKind.SEMI,
        "\\": TokenKind.LAMBDA,
    }

    # Longest match first within each leading character.
    _MULTI = {
        "<": ("<<-", "<=", "<-", "<"),
        ">": (">=", ">"),
        "-": ("->>", "->", "-"),
        "=": ("==", "="),
        "!": ("!=", "!"),
        ":": (":::", "::", ":=", ":"),
        "&": ("&&", "&"),
        "|": ("||", "|>", "|"),
    }

    def _operator(self, ch: str) -> None:
        if ch == "[":
            if self._peek(1) == "[":
                self._emit(TokenKind.DLBRACKET, self.pos + 2)
            else:
                self._emit(TokenKind.LBRACKET, self.pos + 1)
            return
        if ch in self._SIMPLE:
            self._emit(self._SIMPLE[ch], self.pos + 1)
            return
        if ch in self._MULTI:
            for op in self._MULTI[ch]:
                if self.text.startswith(op, self.pos):
                    self._emit(TokenKind.OP, self.pos + len(op))
                    return
        if ch in "+*/^~?$@":
            self._emit(TokenKind.OP, self.pos + 1)
            return
        self._emit(
            TokenKind.ERROR, self.pos + 1, error=f"unexpected character {ch!r}"
        )
