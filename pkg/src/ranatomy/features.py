"""Per-file usage census.

One pass over the syntax tree (plus the token stream for comments and the
dataflow graph for variable statistics) fills a FeatureReport covering ten
characteristic families: assignments, data access, conditionals, loops,
function definitions, function calls, package loading, literal values,
comments, and variables, plus file metrics and lint-style findings.

All counters are plain ints; maps over fixed name sets are zero-filled so
reports from different files always share a shape.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .dataflow import DataflowGraph, Role, redefinition_components
from .syntax.ast import (
    ASSIGN_OPS,
    LITERAL_KINDS,
    SyntaxKind,
    SyntaxNode,
    assign_target,
    assign_value,
    iter_nodes,
    string_value,
    symbol_name,
)
from .syntax.tokens import Token, TokenKind, decode_source, tokenize

S = SyntaxKind

ASSIGN_FUNCTIONS = (
    "assign", "assignInNamespace", "setGeneric", "setMethod",
    "setValidity", "delayedAssign",
)
LOCK_FUNCTIONS = ("lockEnvironment", "lockBinding")
GET_FAMILY = ("get", "mget", "get0", "exists")
REFLECTIVE_FUNCTIONS = (
    "eval", "evalq", "body", "formals", "environment", "parse", "deparse",
    "substitute", "quote", "bquote", "load", "attach", "sys.call",
    "sys.function", "match.call", "do.call",
)
FFI_FUNCTIONS = (".C", ".Call", ".Fortran", ".External", ".External2")
APPLY_FAMILY = ("lapply", "sapply", "apply", "vapply", "mapply", "tapply", "Map")
LOAD_FUNCTIONS = (
    "library", "require", "requireNamespace", "loadNamespace",
    "attachNamespace",
)
HOOK_NAMES = (".onAttach", ".onLoad", ".onUnload", ".onDetach")
OPERATOR_REDEF_NAMES = (":", "==", "<-", "if", "for", "(", "{", "[")
STRICT_MODE_DEFAULT = ("eval", "assignInNamespace")

VALUE_KINDS = (
    "FunctionCall", "Constant", "Symbol", "BinaryOp", "UnaryOp",
    "FunctionDef", "AnonymousCall", "IndexExpr", "Other",
)
VECTOR_KINDS = (
    "ColonRange", "SeqCall", "SeqAlongLen", "SymbolVector",
    "ConstantVector", "OtherCall", "Other",
)
ARITIES = ("Empty", "Single", "Multiple")

_ROXYGEN_TAGS = {
    "@import": re.compile(r"@import\b"),
    "@importFrom": re.compile(r"@importFrom\b"),
}


def _zeroes(keys: Iterable[str]) -> dict[str, int]:
    return {k: 0 for k in keys}


@dataclass(slots=True)
class AssignStats:
    by_operator: dict[str, int] = field(default_factory=lambda: _zeroes(ASSIGN_OPS))
    operator_set: list[str] = field(default_factory=list)
    assigned_value_kind: dict[str, int] = field(
        default_factory=lambda: _zeroes(VALUE_KINDS)
    )
    assign_functions: dict[str, int] = field(
        default_factory=lambda: _zeroes(ASSIGN_FUNCTIONS)
    )
    lock_functions: dict[str, int] = field(
        default_factory=lambda: _zeroes(LOCK_FUNCTIONS)
    )
    files_redefining: bool = False
    redefinition_count: int = 0


@dataclass(slots=True)
class AccessStats:
    single_bracket: int = 0
    double_bracket: int = 0
    dollar: int = 0
    at: int = 0
    get_family: dict[str, int] = field(default_factory=lambda: _zeroes(GET_FAMILY))
    plain_symbol_uses: int = 0


@dataclass(slots=True)
class CondStats:
    if_without_else: int = 0
    if_with_else: int = 0
    constant_condition_count: int = 0
    condition_root_kind: dict[str, int] = field(default_factory=dict)
    body_arity: dict[str, int] = field(default_factory=lambda: _zeroes(ARITIES))
    ifelse_calls: int = 0
    switch_calls: int = 0


@dataclass(slots=True)
class LoopStats:
    for_count: int = 0
    while_count: int = 0
    repeat_count: int = 0
    for_vector_kind: dict[str, int] = field(
        default_factory=lambda: _zeroes(VECTOR_KINDS)
    )
    nested_for: int = 0
    degenerate_for: int = 0
    degenerate_while: int = 0
    while_single_expr_body: int = 0
    break_count: int = 0
    next_count: int = 0
    apply_family: dict[str, int] = field(default_factory=lambda: _zeroes(APPLY_FAMILY))


@dataclass(slots=True)
class FunDefStats:
    total_defs: int = 0
    assigned_defs: int = 0
    lambda_defs: int = 0
    hook_defs: dict[str, int] = field(default_factory=lambda: _zeroes(HOOK_NAMES))
    infix_defs: dict[str, int] = field(default_factory=dict)
    replacement_defs: dict[str, int] = field(default_factory=dict)
    operator_redefs: dict[str, int] = field(default_factory=dict)


@dataclass(slots=True)
class CallStats:
    total_calls: int = 0
    by_name: dict[str, int] = field(default_factory=dict)
    reflective: dict[str, int] = field(
        default_factory=lambda: _zeroes(REFLECTIVE_FUNCTIONS)
    )
    ffi: dict[str, int] = field(default_factory=lambda: _zeroes(FFI_FUNCTIONS))
    testing: int = 0
    anonymous_calls: int = 0


@dataclass(slots=True)
class PackageStats:
    load_calls: dict[str, int] = field(default_factory=lambda: _zeroes(LOAD_FUNCTIONS))
    loaded_names: list[str] = field(default_factory=list)
    ns_access: int = 0
    internal_ns_access: int = 0
    roxygen_imports: dict[str, int] = field(
        default_factory=lambda: _zeroes(_ROXYGEN_TAGS)
    )
    vectorized_load_pattern: int = 0


@dataclass(slots=True)
class ValueStats:
    numbers: int = 0
    strings: int = 0
    raw_strings: int = 0
    logicals: int = 0
    nulls: int = 0
    nas: int = 0
    infs: int = 0


@dataclass(slots=True)
class CommentStats:
    comments: int = 0
    roxygen_comments: int = 0


@dataclass(slots=True)
class VarStats:
    uses: int = 0
    definitions: int = 0
    distinct_names: int = 0


@dataclass(slots=True)
class FileMetrics:
    bytes: int = 0
    lines: int = 0
    max_line_length: int = 0
    mean_line_length: float = 0.0
    comment_lines: int = 0


@dataclass(slots=True)
class LintFindings:
    mixed_assignment_operators: bool = False
    mixed_operators: list[str] = field(default_factory=list)
    generalized_constant_conditions: list[tuple[int, int]] = field(
        default_factory=list
    )
    strict_mode_flags: list[tuple[str, tuple[int, int]]] = field(
        default_factory=list
    )


@dataclass(slots=True)
class FeatureReport:
    assignments: AssignStats = field(default_factory=AssignStats)
    data_access: AccessStats = field(default_factory=AccessStats)
    conditionals: CondStats = field(default_factory=CondStats)
    loops: LoopStats = field(default_factory=LoopStats)
    fun_defs: FunDefStats = field(default_factory=FunDefStats)
    fun_calls: CallStats = field(default_factory=CallStats)
    packages: PackageStats = field(default_factory=PackageStats)
    values: ValueStats = field(default_factory=ValueStats)
    comments: CommentStats = field(default_factory=CommentStats)
    variables: VarStats = field(default_factory=VarStats)
    metadata: FileMetrics = field(default_factory=FileMetrics)
    lint: LintFindings = field(default_factory=LintFindings)

    def to_dict(self) -> dict:
        return {
            "assignments": {
                "by_operator": self.assignments.by_operator,
                "operator_set": self.assignments.operator_set,
                "assigned_value_kind": self.assignments.assigned_value_kind,
                "assign_functions": self.assignments.assign_functions,
                "lock_functions": self.assignments.lock_functions,
                "files_redefining": self.assignments.files_redefining,
                "redefinition_count": self.assignments.redefinition_count,
            },
            "data_access": {
                "single_bracket": self.data_access.single_bracket,
                "double_bracket": self.data_access.double_bracket,
                "dollar": self.data_access.dollar,
                "at": self.data_access.at,
                "get_family": self.data_access.get_family,
                "plain_symbol_uses": self.data_access.plain_symbol_uses,
            },
            "conditionals": {
                "if_without_else": self.conditionals.if_without_else,
                "if_with_else": self.conditionals.if_with_else,
                "constant_condition_count": self.conditionals.constant_condition_count,
                "condition_root_kind": dict(
                    sorted(self.conditionals.condition_root_kind.items())
                ),
                "body_arity": self.conditionals.body_arity,
                "ifelse_calls": self.conditionals.ifelse_calls,
                "switch_calls": self.conditionals.switch_calls,
            },
            "loops": {
                "for_count": self.loops.for_count,
                "while_count": self.loops.while_count,
                "repeat_count": self.loops.repeat_count,
                "for_vector_kind": self.loops.for_vector_kind,
                "nested_for": self.loops.nested_for,
                "degenerate_for": self.loops.degenerate_for,
                "degenerate_while": self.loops.degenerate_while,
                "while_single_expr_body": self.loops.while_single_expr_body,
                "break_count": self.loops.break_count,
                "next_count": self.loops.next_count,
                "apply_family": self.loops.apply_family,
            },
            "fun_defs": {
                "total_defs": self.fun_defs.total_defs,
                "assigned_defs": self.fun_defs.assigned_defs,
                "lambda_defs": self.fun_defs.lambda_defs,
                "hook_defs": self.fun_defs.hook_defs,
                "infix_defs": dict(sorted(self.fun_defs.infix_defs.items())),
                "replacement_defs": dict(
                    sorted(self.fun_defs.replacement_defs.items())
                ),
                "operator_redefs": dict(
                    sorted(self.fun_defs.operator_redefs.items())
                ),
            },
            "fun_calls": {
                "total_calls": self.fun_calls.total_calls,
                "by_name": dict(sorted(self.fun_calls.by_name.items())),
                "reflective": self.fun_calls.reflective,
                "ffi": self.fun_calls.ffi,
                "testing": self.fun_calls.testing,
                "anonymous_calls": self.fun_calls.anonymous_calls,
            },
            "packages": {
                "load_calls": self.packages.load_calls,
                "loaded_names": self.packages.loaded_names,
                "ns_access": self.packages.ns_access,
                "internal_ns_access": self.packages.internal_ns_access,
                "roxygen_imports": self.packages.roxygen_imports,
                "vectorized_load_pattern": self.packages.vectorized_load_pattern,
            },
            "values": {
                "numbers": self.values.numbers,
                "strings": self.values.strings,
                "raw_strings": self.values.raw_strings,
                "logicals": self.values.logicals,
                "nulls": self.values.nulls,
                "nas": self.values.nas,
                "infs": self.values.infs,
            },
            "comments": {
                "comments": self.comments.comments,
                "roxygen_comments": self.comments.roxygen_comments,
            },
            "variables": {
                "uses": self.variables.uses,
                "definitions": self.variables.definitions,
                "distinct_names": self.variables.distinct_names,
            },
            "metadata": {
                "bytes": self.metadata.bytes,
                "lines": self.metadata.lines,
                "max_line_length": self.metadata.max_line_length,
                "mean_line_length": self.metadata.mean_line_length,
                "comment_lines": self.metadata.comment_lines,
            },
            "lint": {
                "mixed_assignment_operators": self.lint.mixed_assignment_operators,
                "mixed_operators": self.lint.mixed_operators,
                "generalized_constant_conditions": [
                    list(span) for span in self.lint.generalized_constant_conditions
                ],
                "strict_mode_flags": [
                    [name, list(span)] for name, span in self.lint.strict_mode_flags
                ],
            },
        }


# -- small classifiers --------------------------------------------------------


def _unwrap_paren(node: SyntaxNode) -> SyntaxNode:
    while node.kind is S.PAREN and len(node.children) == 1:
        node = node.children[0]
    return node


def callee_name(callee: SyntaxNode) -> tuple[str | None, str | None]:
    """(namespace, name) of a call target; (None, None) for computed ones."""
    callee = _unwrap_paren(callee)
    if callee.kind in (S.SYMBOL, S.BACKTICK_SYMBOL, S.DOTS):
        return None, symbol_name(callee)
    if callee.kind in (S.NAMESPACE, S.NAMESPACE_INT):
        return symbol_name(callee.children[0]), symbol_name(callee.children[1])
    return None, None


def const_truth(node: SyntaxNode) -> bool | None:
    """Truth value of a constant expression, None when not constant.

    The lattice covers literals, parenthesized constants, negation, and
    unary sign; nothing propagates through variables.
    """
    kind = node.kind
    if kind is S.LOGICAL:
        return node.text in ("TRUE", "T")
    if kind is S.NUMBER:
        return _number_value(node.text or "0") != 0
    if kind is S.PAREN:
        return const_truth(node.children[0])
    if kind is S.UNARY_OP:
        inner = const_truth(node.children[0])
        if inner is None:
            return None
        return (not inner) if node.op == "!" else inner
    return None


def _number_value(text: str) -> float:
    text = text.rstrip("Li")
    try:
        if text.lower().startswith("0x"):
            return float(int(text, 16))
        return float(text)
    except ValueError:
        return float("nan")


def classify_assigned_value(rhs: SyntaxNode, graph: DataflowGraph | None = None) -> str:
    kind = rhs.kind
    if kind is S.CALL:
        callee = _unwrap_paren(rhs.children[0])
        if callee.kind in (S.FUNCTION_DEF, S.CALL):
            return "AnonymousCall"
        if callee.kind in (
            S.SYMBOL, S.BACKTICK_SYMBOL, S.NAMESPACE, S.NAMESPACE_INT,
        ):
            return "FunctionCall"
        return "Other"
    if kind in LITERAL_KINDS:
        return "Constant"
    if kind in (S.SYMBOL, S.BACKTICK_SYMBOL, S.DOTS):
        return "Symbol"
    if kind in (S.BINARY_OP, S.COLON, S.SPECIAL_OP):
        return "BinaryOp"
    if kind is S.UNARY_OP:
        return "UnaryOp"
    if kind is S.FUNCTION_DEF:
        return "FunctionDef"
    if kind in (S.INDEX, S.INDEX2, S.DOLLAR, S.AT):
        return "IndexExpr"
    return "Other"


def classify_for_vector(vec: SyntaxNode) -> str:
    kind = vec.kind
    if kind is S.COLON:
        return "ColonRange"
    if kind is S.CALL:
        _, name = callee_name(vec.children[0])
        if name == "seq":
            return "SeqCall"
        if name in ("seq_along", "seq_len"):
            return "SeqAlongLen"
        if name == "c" and all(
            _literal_argument(arg) for arg in vec.children[1:]
        ):
            return "ConstantVector"
        return "OtherCall"
    if kind in (S.SYMBOL, S.BACKTICK_SYMBOL):
        return "SymbolVector"
    if kind in LITERAL_KINDS:
        return "ConstantVector"
    return "Other"


def _literal_argument(arg: SyntaxNode) -> bool:
    if arg.kind is S.DEFAULT_ARG:
        return len(arg.children) == 2 and arg.children[1].kind in LITERAL_KINDS
    return arg.kind in LITERAL_KINDS


def _body_statements(body: SyntaxNode) -> tuple[SyntaxNode, ...]:
    return body.children if body.kind is S.BLOCK else (body,)


def _body_arity(body: SyntaxNode) -> str:
    stmts = _body_statements(body)
    if len(stmts) == 0:
        return "Empty"
    return "Single" if len(stmts) == 1 else "Multiple"


def _ends_loop(stmt: SyntaxNode, allow_break: bool) -> bool:
    if stmt.kind is S.BREAK:
        return allow_break
    if stmt.kind is S.CALL:
        _, name = callee_name(stmt.children[0])
        return name in ("return", "stop")
    return False


def scan_roxygen_imports(comments: Iterable[Token]) -> dict[str, int]:
    """Occurrences of @import/@importFrom inside `#'` comments."""
    counts = _zeroes(_ROXYGEN_TAGS)
    for tok in comments:
        if not tok.text.startswith("#'"):
            continue
        for tag, pattern in _ROXYGEN_TAGS.items():
            counts[tag] += len(pattern.findall(tok.text))
    return counts


# -- extraction ---------------------------------------------------------------


def extract_features(
    ast: SyntaxNode,
    graph: DataflowGraph,
    source: bytes | str,
    strict_calls: Iterable[str] = STRICT_MODE_DEFAULT,
) -> FeatureReport:
    text = decode_source(source).text
    report = FeatureReport()
    strict_set = frozenset(strict_calls)
    loaded: set[str] = set()

    for node in iter_nodes(ast):
        kind = node.kind
        if kind is S.ASSIGN:
            _count_assign(report, node)
        elif kind is S.CALL:
            _count_call(report, node, strict_set, loaded)
        elif kind is S.INDEX:
            report.data_access.single_bracket += 1
        elif kind is S.INDEX2:
            report.data_access.double_bracket += 1
        elif kind is S.DOLLAR:
            report.data_access.dollar += 1
        elif kind is S.AT:
            report.data_access.at += 1
        elif kind is S.NAMESPACE:
            report.packages.ns_access += 1
        elif kind is S.NAMESPACE_INT:
            report.packages.internal_ns_access += 1
        elif kind is S.IF:
            _count_if(report, node)
        elif kind is S.FOR:
            _count_for(report, node)
        elif kind is S.WHILE:
            _count_while(report, node)
        elif kind is S.REPEAT:
            report.loops.repeat_count += 1
        elif kind is S.BREAK:
            report.loops.break_count += 1
        elif kind is S.NEXT:
            report.loops.next_count += 1
        elif kind is S.FUNCTION_DEF:
            report.fun_defs.total_defs += 1
            if node.op == "\\":
                report.fun_defs.lambda_defs += 1
        elif kind is S.NUMBER:
            report.values.numbers += 1
        elif kind is S.STRING:
            report.values.strings += 1
        elif kind is S.RAW_STRING:
            report.values.raw_strings += 1
        elif kind is S.LOGICAL:
            report.values.logicals += 1
        elif kind is S.NULL:
            report.values.nulls += 1
        elif kind is S.NA:
            report.values.nas += 1
        elif kind is S.INF:
            report.values.infs += 1

    report.packages.loaded_names = sorted(loaded)
    _finish_assignments(report, graph)
    _count_variables(report, graph)
    _count_text(report, text, source)
    return report


def _count_assign(report: FeatureReport, node: SyntaxNode) -> None:
    op = node.op or ""
    stats = report.assignments
    stats.by_operator[op] = stats.by_operator.get(op, 0) + 1
    value = assign_value(node)
    stats.assigned_value_kind[classify_assigned_value(value)] += 1
    if value.kind is S.FUNCTION_DEF:
        _count_assigned_def(report, node, value)


def _count_assigned_def(
    report: FeatureReport, node: SyntaxNode, value: SyntaxNode
) -> None:
    defs = report.fun_defs
    defs.assigned_defs += 1
    target = assign_target(node)
    name = symbol_name(target) if target.kind in (
        S.SYMBOL, S.BACKTICK_SYMBOL, S.STRING, S.RAW_STRING,
    ) else None
    if not name:
        return
    if name in HOOK_NAMES:
        defs.hook_defs[name] += 1
    if len(name) > 2 and name.startswith("%") and name.endswith("%"):
        defs.infix_defs[name] = defs.infix_defs.get(name, 0) + 1
    if len(name) > 2 and name.endswith("<-"):
        defs.replacement_defs[name] = defs.replacement_defs.get(name, 0) + 1
    if name in OPERATOR_REDEF_NAMES:
        defs.operator_redefs[name] = defs.operator_redefs.get(name, 0) + 1


def _count_call(
    report: FeatureReport,
    node: SyntaxNode,
    strict_set: frozenset[str],
    loaded: set[str],
) -> None:
    calls = report.fun_calls
    calls.total_calls += 1
    callee = _unwrap_paren(node.children[0])
    args = node.children[1:]
    _, name = callee_name(callee)
    label = name if name else "<dynamic>"
    calls.by_name[label] = calls.by_name.get(label, 0) + 1
    if callee.kind in (S.FUNCTION_DEF, S.CALL):
        calls.anonymous_calls += 1
    if name is None:
        return
    if name in REFLECTIVE_FUNCTIONS:
        calls.reflective[name] += 1
    if name in FFI_FUNCTIONS:
        calls.ffi[name] += 1
    if name in ("test_that", "context") or name.startswith("expect_"):
        calls.testing += 1
    if name in strict_set:
        report.lint.strict_mode_flags.append((name, node.span))
    if name in ASSIGN_FUNCTIONS:
        report.assignments.assign_functions[name] += 1
    if name in LOCK_FUNCTIONS:
        report.assignments.lock_functions[name] += 1
    if name in GET_FAMILY:
        report.data_access.get_family[name] += 1
    if name == "ifelse":
        report.conditionals.ifelse_calls += 1
    if name == "switch":
        report.conditionals.switch_calls += 1
    if name in LOAD_FUNCTIONS:
        report.packages.load_calls[name] += 1
        pkg = _static_load_name(args)
        if pkg:
            loaded.add(pkg)
    if name in APPLY_FAMILY:
        report.loops.apply_family[name] += 1
        _check_vectorized_load(report, args, loaded)


def _positional(args: tuple[SyntaxNode, ...], index: int) -> SyntaxNode | None:
    seen = 0
    for arg in args:
        if arg.kind is S.DEFAULT_ARG:
            continue
        if seen == index:
            return arg
        seen += 1
    return None


def _named(args: tuple[SyntaxNode, ...], name: str) -> SyntaxNode | None:
    for arg in args:
        if arg.kind is S.DEFAULT_ARG and len(arg.children) == 2:
            if symbol_name(arg.children[0]) == name:
                return arg.children[1]
    return None


def _static_load_name(args: tuple[SyntaxNode, ...]) -> str | None:
    """Package name when statically known: a bare symbol (R's default
    non-standard evaluation treats it as the name) or a string literal.
    A symbol under character.only=TRUE is a variable, hence unknown."""
    target = _named(args, "package") or _positional(args, 0)
    if target is None:
        return None
    if target.kind in (S.STRING, S.RAW_STRING):
        return string_value(target)
    if target.kind in (S.SYMBOL, S.BACKTICK_SYMBOL):
        char_only = _named(args, "character.only")
        if char_only is not None and const_truth(char_only):
            return None
        return symbol_name(target)
    return None


def _check_vectorized_load(
    report: FeatureReport, args: tuple[SyntaxNode, ...], loaded: set[str]
) -> None:
    fun = _named(args, "FUN") or _positional(args, 1)
    if fun is None or fun.kind is not S.SYMBOL:
        return
    if fun.text not in ("library", "require"):
        return
    report.packages.vectorized_load_pattern += 1
    vec = _positional(args, 0)
    if vec is not None and vec.kind is S.CALL:
        _, name = callee_name(vec.children[0])
        if name == "c":
            for arg in vec.children[1:]:
                if arg.kind in (S.STRING, S.RAW_STRING):
                    loaded.add(string_value(arg))
    elif vec is not None and vec.kind in (S.STRING, S.RAW_STRING):
        loaded.add(string_value(vec))


def _count_if(report: FeatureReport, node: SyntaxNode) -> None:
    cond = node.children[0]
    conds = report.conditionals
    if len(node.children) == 3:
        conds.if_with_else += 1
    else:
        conds.if_without_else += 1
    key = cond.kind.value
    conds.condition_root_kind[key] = conds.condition_root_kind.get(key, 0) + 1
    for body in node.children[1:]:
        conds.body_arity[_body_arity(body)] += 1
    if const_truth(cond) is not None:
        conds.constant_condition_count += 1
        report.lint.generalized_constant_conditions.append(cond.span)


def _count_for(report: FeatureReport, node: SyntaxNode) -> None:
    _, vec, body = node.children
    loops = report.loops
    loops.for_count += 1
    loops.for_vector_kind[classify_for_vector(vec)] += 1
    stmts = _body_statements(body)
    if body.kind is S.FOR or any(s.kind is S.FOR for s in stmts):
        loops.nested_for += 1
    constant_scalar = vec.kind in LITERAL_KINDS
    if constant_scalar:
        report.lint.generalized_constant_conditions.append(vec.span)
    if constant_scalar or len(stmts) == 0 or (
        len(stmts) == 1 and _ends_loop(stmts[0], allow_break=True)
    ):
        loops.degenerate_for += 1


def _count_while(report: FeatureReport, node: SyntaxNode) -> None:
    cond, body = node.children
    loops = report.loops
    loops.while_count += 1
    stmts = _body_statements(body)
    if len(stmts) == 1:
        loops.while_single_expr_body += 1
    constant_false = const_truth(cond) is False
    if constant_false:
        report.lint.generalized_constant_conditions.append(cond.span)
    if constant_false or (
        len(stmts) == 1 and _ends_loop(stmts[0], allow_break=False)
    ):
        loops.degenerate_while += 1


def _finish_assignments(report: FeatureReport, graph: DataflowGraph) -> None:
    stats = report.assignments
    stats.operator_set = [
        op for op in ASSIGN_OPS if stats.by_operator.get(op, 0) > 0
    ]
    op_set = frozenset(ASSIGN_OPS)
    definers = {n.id: n.definer for n in graph.nodes}
    redefined = 0
    for _, ids in redefinition_components(graph):
        operator_defs = sum(1 for i in ids if definers.get(i) in op_set)
        if operator_defs >= 2:
            redefined += 1
    stats.redefinition_count = redefined
    stats.files_redefining = redefined > 0

    plain = [op for op in ("<-", "->", "=") if stats.by_operator.get(op, 0) > 0]
    report.lint.mixed_operators = plain
    report.lint.mixed_assignment_operators = len(plain) >= 2


def _count_variables(report: FeatureReport, graph: DataflowGraph) -> None:
    uses = 0
    defs = 0
    names: set[str] = set()
    for node in graph.nodes:
        if node.role is Role.USE:
            uses += 1
            names.add(node.name)
        elif node.role in (Role.DEFINITION, Role.PARAMETER, Role.LOOP_VAR):
            defs += 1
            names.add(node.name)
    report.data_access.plain_symbol_uses = uses
    report.variables.uses = uses
    report.variables.definitions = defs
    report.variables.distinct_names = len(names)


def _count_text(report: FeatureReport, text: str, source: bytes | str) -> None:
    tokens = tokenize(text)
    comment_tokens = [t for t in tokens if t.kind is TokenKind.COMMENT]
    report.comments.comments = len(comment_tokens)
    report.comments.roxygen_comments = sum(
        1 for t in comment_tokens if t.text.startswith("#'")
    )
    report.packages.roxygen_imports = scan_roxygen_imports(comment_tokens)
    report.metadata.comment_lines = len({t.line for t in comment_tokens})

    raw = source if isinstance(source, bytes) else text.encode("utf-8")
    lines = text.splitlines()
    report.metadata.bytes = len(raw)
    report.metadata.lines = len(lines)
    report.metadata.max_line_length = max((len(ln) for ln in lines), default=0)
    report.metadata.mean_line_length = (
        sum(len(ln) for ln in lines) / len(lines) if lines else 0.0
    )


def detect_degenerate_control(ast: SyntaxNode) -> LintFindings:
    """Degenerate-control findings alone, without the rest of the census."""
    report = FeatureReport()
    for node in iter_nodes(ast):
        if node.kind is S.IF:
            _count_if(report, node)
        elif node.kind is S.FOR:
            _count_for(report, node)
        elif node.kind is S.WHILE:
            _count_while(report, node)
    return report.lint
