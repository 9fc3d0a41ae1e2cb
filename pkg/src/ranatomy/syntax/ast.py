"""Syntax tree for R programs.

The kind list is closed: every construct the census counts maps onto one of
these kinds. Nodes carry character spans into the decoded source; children
are stored in source order, so a depth-first walk visits leaves strictly
left to right. Operator-bearing kinds (Assign, BinaryOp, UnaryOp, ...) keep
the operator spelling in `op` rather than as a child.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator


class SyntaxKind(str, Enum):
    PROGRAM = "Program"
    NUMBER = "Number"
    STRING = "String"
    RAW_STRING = "RawString"
    LOGICAL = "LogicalConst"
    NULL = "NullConst"
    NA = "NAConst"
    INF = "InfConst"
    SYMBOL = "Symbol"
    BACKTICK_SYMBOL = "BacktickSymbol"
    CALL = "Call"
    INDEX = "IndexBracket"
    INDEX2 = "IndexDoubleBracket"
    DOLLAR = "DollarAccess"
    AT = "AtAccess"
    NAMESPACE = "NamespaceAccess"
    NAMESPACE_INT = "InternalNamespaceAccess"
    ASSIGN = "Assign"
    BINARY_OP = "BinaryOp"
    UNARY_OP = "UnaryOp"
    SPECIAL_OP = "SpecialInfixOp"
    COLON = "ColonOp"
    TILDE = "Tilde"
    FUNCTION_DEF = "FunctionDef"
    PARAMS = "Params"
    DEFAULT_ARG = "DefaultArg"
    DOTS = "Dots"
    IF = "If"
    FOR = "For"
    WHILE = "While"
    REPEAT = "Repeat"
    BREAK = "Break"
    NEXT = "Next"
    BLOCK = "Block"
    PAREN = "Paren"


LEAF_KINDS = frozenset({
    SyntaxKind.NUMBER,
    SyntaxKind.STRING,
    SyntaxKind.RAW_STRING,
    SyntaxKind.LOGICAL,
    SyntaxKind.NULL,
    SyntaxKind.NA,
    SyntaxKind.INF,
    SyntaxKind.SYMBOL,
    SyntaxKind.BACKTICK_SYMBOL,
    SyntaxKind.DOTS,
    SyntaxKind.BREAK,
    SyntaxKind.NEXT,
})

LITERAL_KINDS = frozenset({
    SyntaxKind.NUMBER,
    SyntaxKind.STRING,
    SyntaxKind.RAW_STRING,
    SyntaxKind.LOGICAL,
    SyntaxKind.NULL,
    SyntaxKind.NA,
    SyntaxKind.INF,
})

ASSIGN_OPS = ("<-", "<<-", "->", "->>", "=", ":=")
SUPER_ASSIGN_OPS = frozenset({"<<-", "->>"})
RIGHTWARD_OPS = frozenset({"->", "->>"})


@dataclass(frozen=True, slots=True)
class SyntaxNode:
    kind: SyntaxKind
    span: tuple[int, int]
    children: tuple["SyntaxNode", ...] = ()
    op: str | None = None
    text: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.kind in LEAF_KINDS


def iter_nodes(root: SyntaxNode) -> Iterator[SyntaxNode]:
    """Preorder walk, iterative so tree depth never hits Python's stack."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def node_count(root: SyntaxNode) -> int:
    return sum(1 for _ in iter_nodes(root))


def leaves(root: SyntaxNode) -> Iterator[SyntaxNode]:
    return (n for n in iter_nodes(root) if n.is_leaf)


def assign_target(node: SyntaxNode) -> SyntaxNode:
    """Left-hand side in the semantic sense, respecting -> and ->> swaps."""
    return node.children[1] if node.op in RIGHTWARD_OPS else node.children[0]


def assign_value(node: SyntaxNode) -> SyntaxNode:
    return node.children[0] if node.op in RIGHTWARD_OPS else node.children[1]


_ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "a": "\a", "b": "\b",
    "f": "\f", "v": "\v", "\\": "\\", "'": "'", '"': '"', "`": "`",
    "0": "\0",
}


def string_value(node: SyntaxNode) -> str:
    """Literal value of a String/RawString node (best-effort unescaping)."""
    text = node.text or ""
    if node.kind is SyntaxKind.RAW_STRING:
        body = text[2:]          # drop r and the quote
        dashes = 0
        while body[dashes] == "-":
            dashes += 1
        return body[dashes + 1:len(body) - dashes - 1]
    body = text[1:-1]
    if "\\" not in body:
        return body
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append(_ESCAPES.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def symbol_name(node: SyntaxNode) -> str | None:
    """Name denoted by a Symbol, backtick-quoted Symbol, or string literal."""
    if node.kind is SyntaxKind.SYMBOL or node.kind is SyntaxKind.DOTS:
        return node.text
    if node.kind is SyntaxKind.BACKTICK_SYMBOL:
        return (node.text or "")[1:-1]
    if node.kind in (SyntaxKind.STRING, SyntaxKind.RAW_STRING):
        return string_value(node)
    return None


def pretty(root: SyntaxNode) -> str:
    """Stable line-per-node rendering used by the golden tests."""
    lines: list[str] = []
    stack: list[tuple[SyntaxNode, int]] = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        parts = ["  " * depth + node.kind.value]
        if node.op is not None:
            parts.append(f"op={node.op}")
        if node.text is not None:
            parts.append(f"text={node.text!r}")
        parts.append(f"[{node.span[0]}..{node.span[1]})")
        lines.append(" ".join(parts))
        for child in reversed(node.children):
            stack.append((child, depth + 1))
    return "\n".join(lines) + "\n"
