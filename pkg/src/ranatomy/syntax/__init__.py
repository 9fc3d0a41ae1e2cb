"""R lexing, parsing, and parse-failure classification."""

from .ast import (
    ASSIGN_OPS,
    LEAF_KINDS,
    LITERAL_KINDS,
    RIGHTWARD_OPS,
    SUPER_ASSIGN_OPS,
    SyntaxKind,
    SyntaxNode,
    assign_target,
    assign_value,
    iter_nodes,
    leaves,
    node_count,
    pretty,
    string_value,
    symbol_name,
)
from .failures import (
    CONFUSABLE_CHARS,
    DOC_MARKERS,
    FailureCategory,
    classify_parse_failure,
)
from .parser import (
    DEFAULT_MAX_DEPTH,
    FailureRecord,
    ParseOutcome,
    parse,
    parse_text,
)
from .tokens import DecodedSource, Token, TokenKind, decode_source, tokenize

__all__ = [
    "ASSIGN_OPS",
    "CONFUSABLE_CHARS",
    "DEFAULT_MAX_DEPTH",
    "DOC_MARKERS",
    "DecodedSource",
    "FailureCategory",
    "FailureRecord",
    "LEAF_KINDS",
    "LITERAL_KINDS",
    "ParseOutcome",
    "RIGHTWARD_OPS",
    "SUPER_ASSIGN_OPS",
    "SyntaxKind",
    "SyntaxNode",
    "Token",
    "TokenKind",
    "assign_target",
    "assign_value",
    "classify_parse_failure",
    "decode_source",
    "iter_nodes",
    "leaves",
    "node_count",
    "parse",
    "parse_text",
    "pretty",
    "string_value",
    "symbol_name",
    "tokenize",
]
