"""Static dataflow graph for a single R file.

The syntax tree is folded once, front to back, over a stack of environment
frames (one per lexically enclosing function). Each frame maps a name to
the set of definitions that may currently reach it: straight-line code
replaces the set, branches union it ("may" analysis), and loop bodies are
traversed exactly once with a pre/post union instead of a fixpoint.

Roles: operator assignments create Definition nodes, reads create Use
nodes, call expressions create FunctionCallSite nodes, function parameters
ParameterDef, and `for` variables LoopVarDef (in the enclosing frame, as in
R). Super-assignment (`<<-`/`->>`) skips the innermost frame and lands on
the closest outer frame that already binds the name, else the global frame.

Edges: Use -ReadsFrom-> every reaching Definition; a new Definition
-Redefines-> is drawn from every binding it replaces within its frame
(parameter and loop-variable bindings themselves never draw these edges,
only explicit operator writes over them do); FunctionCallSite -CallsTarget->
every reaching Definition whose assigned value is a function literal. Call
sites with no such target are collected in unresolved_calls (library and
builtin functions, computed callees).

`assign("x", v)` and friends are ordinary calls here: no Definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .syntax.ast import (
    SyntaxKind,
    SyntaxNode,
    assign_target,
    assign_value,
    node_count,
    symbol_name,
)

S = SyntaxKind

DEFAULT_NODE_CAP = 2_000_000


class Role(str, Enum):
    DEFINITION = "Definition"
    USE = "Use"
    CALL_SITE = "FunctionCallSite"
    PARAMETER = "ParameterDef"
    LOOP_VAR = "LoopVarDef"


class EdgeKind(str, Enum):
    READS_FROM = "ReadsFrom"
    REDEFINES = "Redefines"
    CALLS_TARGET = "CallsTarget"


class ResourceLimitError(Exception):
    """Input exceeds a configured analysis bound."""


@dataclass(frozen=True, slots=True)
class DefUseNode:
    id: int
    name: str
    role: Role
    span: tuple[int, int]
    scope_depth: int
    definer: str | None = None


@dataclass(frozen=True, slots=True)
class Edge:
    kind: EdgeKind
    src: int
    dst: int


@dataclass(slots=True)
class DataflowGraph:
    nodes: list[DefUseNode] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    unresolved_calls: list[int] = field(default_factory=list)

    def nodes_by_role(self, role: Role) -> list[DefUseNode]:
        return [n for n in self.nodes if n.role is role]

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "id": n.id,
                    "name": n.name,
                    "role": n.role.value,
                    "span": list(n.span),
                    "scope_depth": n.scope_depth,
                    "definer": n.definer,
                }
                for n in self.nodes
            ],
            "edges": [
                {"kind": e.kind.value, "src": e.src, "dst": e.dst}
                for e in self.edges
            ],
            "unresolved_calls": list(self.unresolved_calls),
        }


def build_dataflow(
    ast: SyntaxNode, node_cap: int = DEFAULT_NODE_CAP
) -> DataflowGraph:
    """Fold the tree into a DataflowGraph. Raises ResourceLimitError when
    the syntax tree exceeds `node_cap` nodes."""
    count = node_count(ast)
    if count > node_cap:
        raise ResourceLimitError(
            f"syntax tree has {count} nodes, above the cap of {node_cap}"
        )
    builder = _Builder()
    builder.walk_statements(ast.children)
    return builder.graph


def resolve_call_target(graph: DataflowGraph, call_site: int) -> int | None:
    """Definition a call site binds to: the latest function-valued
    definition among its CallsTarget edges, None when unresolved."""
    targets = [
        e.dst for e in graph.edges
        if e.kind is EdgeKind.CALLS_TARGET and e.src == call_site
    ]
    if not targets:
        return None
    spans = {n.id: n.span for n in graph.nodes}
    return max(targets, key=lambda i: (spans[i][0], i))


def redefinition_components(graph: DataflowGraph) -> list[tuple[str, list[int]]]:
    """Connected components of Redefines edges: one entry per name whose
    binding is explicitly overwritten, with node ids in program order."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for edge in graph.edges:
        if edge.kind is not EdgeKind.REDEFINES:
            continue
        for end in (edge.src, edge.dst):
            parent.setdefault(end, end)
        ra, rb = find(edge.src), find(edge.dst)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    groups: dict[int, list[int]] = {}
    for node_id in parent:
        groups.setdefault(find(node_id), []).append(node_id)
    names = {n.id: n.name for n in graph.nodes}
    out = [
        (names[root], sorted(ids))
        for root, ids in groups.items()
        if len(ids) >= 2
    ]
    out.sort(key=lambda item: item[1][0])
    return out


def redefinitions(graph: DataflowGraph) -> list[tuple[str, list[tuple[int, int]]]]:
    """(name, [definition spans]) for every explicitly redefined binding."""
    spans = {n.id: n.span for n in graph.nodes}
    return [
        (name, [spans[i] for i in ids])
        for name, ids in redefinition_components(graph)
    ]


_LITERALS = frozenset({
    S.NUMBER, S.STRING, S.RAW_STRING, S.LOGICAL, S.NULL, S.NA, S.INF,
})

_NAME_LEAVES = frozenset({S.SYMBOL, S.BACKTICK_SYMBOL, S.DOTS})


class _Builder:
    def __init__(self) -> None:
        self.graph = DataflowGraph()
        self.frames: list[dict[str, tuple[int, ...]]] = [{}]
        self.function_valued: set[int] = set()

    # -- graph primitives ---------------------------------------------------

    def _node(
        self,
        name: str,
        role: Role,
        span: tuple[int, int],
        depth: int,
        definer: str | None = None,
    ) -> int:
        node_id = len(self.graph.nodes)
        self.graph.nodes.append(
            DefUseNode(node_id, name, role, span, depth, definer)
        )
        return node_id

    def _edge(self, kind: EdgeKind, src: int, dst: int) -> None:
        self.graph.edges.append(Edge(kind, src, dst))

    def _depth(self) -> int:
        return len(self.frames) - 1

    def _lookup(self, name: str) -> tuple[int, ...]:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return ()

    # -- traversal ----------------------------------------------------------

    def walk_statements(self, stmts: tuple[SyntaxNode, ...]) -> None:
        for stmt in stmts:
            self.walk(stmt)

    def walk(self, node: SyntaxNode) -> None:
        kind = node.kind
        if kind in _NAME_LEAVES:
            self._use(node)
        elif kind in _LITERALS or kind in (S.BREAK, S.NEXT):
            pass
        elif kind is S.ASSIGN:
            self._assign(node)
        elif kind is S.CALL:
            self._call(node)
        elif kind is S.FUNCTION_DEF:
            self._function(node)
        elif kind is S.IF:
            self._if(node)
        elif kind is S.FOR:
            self._for(node)
        elif kind is S.WHILE:
            self._loop_cond_body(node.children[0], node.children[1])
        elif kind is S.REPEAT:
            self._loop_cond_body(None, node.children[0])
        elif kind in (S.BLOCK, S.PROGRAM):
            self.walk_statements(node.children)
        elif kind is S.PAREN:
            self.walk(node.children[0])
        elif kind in (S.DOLLAR, S.AT):
            self.walk(node.children[0])    # the member name is not a Use
        elif kind in (S.NAMESPACE, S.NAMESPACE_INT):
            pass                           # package refs resolve externally
        elif kind in (S.INDEX, S.INDEX2):
            self.walk(node.children[0])
            for arg in node.children[1:]:
                self._walk_argument(arg)
        elif kind is S.DEFAULT_ARG:
            if len(node.children) == 2:
                self.walk(node.children[1])
        else:
            # operators, formulas, params never reach here except via
            # BinaryOp/UnaryOp/SpecialInfixOp/ColonOp/Tilde: plain subwalks
            for child in node.children:
                self.walk(child)

    def _walk_argument(self, arg: SyntaxNode) -> None:
        if arg.kind is S.DEFAULT_ARG:
            if len(arg.children) == 2:
                self.walk(arg.children[1])
        else:
            self.walk(arg)

    def _use(self, node: SyntaxNode) -> None:
        name = symbol_name(node) or ""
        use_id = self._node(name, Role.USE, node.span, self._depth())
        for def_id in self._lookup(name):
            self._edge(EdgeKind.READS_FROM, use_id, def_id)

    # -- assignment -----------------------------------------------------------

    def _assign(self, node: SyntaxNode) -> None:
        op = node.op or ""
        target = assign_target(node)
        value = assign_value(node)
        self.walk(value)

        base = target
        direct = True
        while base.kind not in _NAME_LEAVES and base.kind not in (
            S.STRING, S.RAW_STRING
        ):
            direct = False
            if base.kind in (S.INDEX, S.INDEX2, S.DOLLAR, S.AT, S.PAREN):
                base = base.children[0]
            elif base.kind is S.CALL and len(base.children) > 1:
                base = base.children[1]    # replacement form: first argument
            else:
                self.walk(target)          # opaque target: reads only
                return
        if not direct:
            # Replacement-style write reads the object before modifying it.
            self.walk(target)

        name = symbol_name(base)
        if not name:
            return
        frame_index = self._resolve_frame(name, op)
        def_id = self._node(
            name, Role.DEFINITION, base.span, frame_index, definer=op
        )
        frame = self.frames[frame_index]
        for old_id in frame.get(name, ()):
            self._edge(EdgeKind.REDEFINES, old_id, def_id)
        frame[name] = (def_id,)
        if direct and value.kind is S.FUNCTION_DEF:
            self.function_valued.add(def_id)

    def _resolve_frame(self, name: str, op: str) -> int:
        if op in ("<<-", "->>"):
            for index in range(len(self.frames) - 2, -1, -1):
                if name in self.frames[index]:
                    return index
            return 0
        return len(self.frames) - 1

    # -- calls ------------------------------------------------------------------

    def _call(self, node: SyntaxNode) -> None:
        callee = node.children[0]
        args = node.children[1:]
        if callee.kind in _NAME_LEAVES:
            name = symbol_name(callee) or ""
            site = self._node(name, Role.CALL_SITE, node.span, self._depth())
            targets = [
                d for d in self._lookup(name) if d in self.function_valued
            ]
            if targets:
                for def_id in targets:
                    self._edge(EdgeKind.CALLS_TARGET, site, def_id)
            else:
                self.graph.unresolved_calls.append(site)
        elif callee.kind in (S.NAMESPACE, S.NAMESPACE_INT):
            name = symbol_name(callee.children[1]) or ""
            site = self._node(name, Role.CALL_SITE, node.span, self._depth())
            self.graph.unresolved_calls.append(site)
        else:
            site = self._node(
                "<dynamic>", Role.CALL_SITE, node.span, self._depth()
            )
            self.graph.unresolved_calls.append(site)
            self.walk(callee)
        for arg in args:
            self._walk_argument(arg)

    # -- functions ---------------------------------------------------------------

    def _function(self, node: SyntaxNode) -> None:
        params, body = node.children
        self.frames.append({})
        depth = self._depth()
        defaults: list[SyntaxNode] = []
        for param in params.children:
            if param.kind is S.DEFAULT_ARG:
                name_node = param.children[0]
                defaults.append(param.children[1])
            else:
                name_node = param
            name = symbol_name(name_node) or ""
            param_id = self._node(
                name, Role.PARAMETER, name_node.span, depth, definer="param"
            )
            self.frames[-1][name] = (param_id,)
        for default in defaults:
            self.walk(default)
        self.walk(body)
        self.frames.pop()

    # -- control flow ---------------------------------------------------------------

    def _snapshot(self) -> list[dict[str, tuple[int, ...]]]:
        return [dict(frame) for frame in self.frames]

    def _restore(self, state: list[dict[str, tuple[int, ...]]]) -> None:
        self.frames = [dict(frame) for frame in state]

    def _join(
        self,
        left: list[dict[str, tuple[int, ...]]],
        right: list[dict[str, tuple[int, ...]]],
    ) -> None:
        merged: list[dict[str, tuple[int, ...]]] = []
        for frame_l, frame_r in zip(left, right):
            frame: dict[str, tuple[int, ...]] = {}
            for name in frame_l.keys() | frame_r.keys():
                ids = set(frame_l.get(name, ())) | set(frame_r.get(name, ()))
                frame[name] = tuple(sorted(ids))
            merged.append(frame)
        self.frames = merged

    def _if(self, node: SyntaxNode) -> None:
        cond = node.children[0]
        self.walk(cond)
        before = self._snapshot()
        self.walk(node.children[1])
        after_then = self._snapshot()
        self._restore(before)
        if len(node.children) == 3:
            self.walk(node.children[2])
        after_else = self._snapshot()
        self._join(after_then, after_else)

    def _for(self, node: SyntaxNode) -> None:
        var, vector, body = node.children
        self.walk(vector)
        name = symbol_name(var) or ""
        var_id = self._node(
            name, Role.LOOP_VAR, var.span, self._depth(), definer="for"
        )
        # Loop-variable binding replaces without a Redefines edge: iteration
        # rebinding is implicit, not an explicit overwrite.
        self.frames[-1][name] = (var_id,)
        before = self._snapshot()
        self.walk(body)
        self._join(before, self._snapshot())

    def _loop_cond_body(
        self, cond: SyntaxNode | None, body: SyntaxNode
    ) -> None:
        if cond is not None:
            self.walk(cond)
        before = self._snapshot()
        self.walk(body)
        self._join(before, self._snapshot())
