"""Small-step operational semantics on bang-rooted terms.

Each step contracts a redex found through a box-free context under the
nearest enclosing bang and extends that bang's trail with the matching
congruence-wrapped contraction trail.  Contracting inside a nested bang
leaves the outer trail untouched; the nested trail grows instead.

The calculus is not confluent and trails are sensitive to reduction
order, so the step function takes a strategy:

* ``cbv``: values are variables, lambdas, and bangs whose body is a
  value; applications evaluate function then argument to values before
  contracting; lets evaluate the bound term to a bang value first;
  inspections fire immediately when reached; no reduction under lambda.
* ``leftmost_outermost``: the first redex in a pre-order, left-to-right
  walk that also descends under binders, into inspection branches, and
  into nested bangs.  This is the strategy that reaches full normal
  forms.
* ``all``: the full successor enumeration, for graph exploration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .subst import AuditedTermSubst, subst_term_audited, subst_term_simple
from .syntax import (
    Ba,
    Bb,
    BranchMap,
    TApp,
    TAVar,
    TBang,
    TInspect,
    TLam,
    TLet,
    TVar,
    Ti,
    Trans,
    canon_key,
    pretty,
)
from .trails import (
    HOLE,
    EvalContext,
    canonical_trail_context,
    code_of,
    fold_term,
    src,
)


class Strategy(enum.Enum):
    CBV = "cbv"
    LEFTMOST_OUTERMOST = "lo"
    ALL = "all"


class NotBangRooted(Exception):
    pass


class FuelExhausted(Exception):
    def __init__(self, partial, steps):
        self.partial = partial
        self.steps = steps
        super().__init__(f"no normal form within {len(steps)} steps")


class BoundExceeded(Exception):
    def __init__(self, graph, message: str):
        self.graph = graph
        super().__init__(message)


@dataclass(frozen=True)
class StepInfo:
    """What a step did: the contraction rule (beta, beta_box, or ti), the
    redex position (path from the root term), the trail delta appended to
    the enclosing bang, and that bang's own path (() for the root)."""

    rule: str
    path: tuple
    delta: object
    bang_path: tuple


def _require_bang(m) -> TBang:
    if not isinstance(m, TBang):
        raise NotBangRooted(f"expected a bang-rooted term, got {pretty(m)}")
    return m


# ---------------------------------------------------------------------------
# Redex enumeration.
#
# `_positions` walks a bang body in pre-order without entering nested bang
# bodies, yielding each spot with a rebuild function; `_contract` performs
# one contraction at such a spot and produces the new trail for the
# enclosing bang.

def _positions(x, path=(), wrap=lambda r: r):
    yield path, x, wrap
    match x:
        case TLam(var, annot, body):
            yield from _positions(
                body, path + ("body",), lambda r, w=wrap: w(TLam(var, annot, r))
            )
        case TApp(fun, arg):
            yield from _positions(
                fun, path + ("fun",), lambda r, w=wrap, a=arg: w(TApp(r, a))
            )
            yield from _positions(
                arg, path + ("arg",), lambda r, w=wrap, f=fun: w(TApp(f, r))
            )
        case TLet(var, annot, bound, body):
            yield from _positions(
                bound,
                path + ("bound",),
                lambda r, w=wrap, b=body: w(TLet(var, annot, r, b)),
            )
            yield from _positions(
                body,
                path + ("body",),
                lambda r, w=wrap, b=bound: w(TLet(var, annot, b, r)),
            )
        case TInspect(branches):
            for lab, payload in branches.items():
                def rebuild(r, w=wrap, lab=lab, br=branches):
                    return w(
                        TInspect(
                            BranchMap(
                                tuple(
                                    (l, r if l is lab else p) for l, p in br.items()
                                )
                            )
                        )
                    )

                yield from _positions(payload, path + (lab.token,), rebuild)
        case _:
            pass  # vars and bangs have no box-free children


def _contract(q, path, wrap, sub):
    """Contract the redex `sub` sitting at `wrap`/`path` under a bang whose
    current trail is `q`.  Returns (new trail, new body, info) or None."""
    match sub:
        case TApp(TLam(var, annot, lam_body), arg):
            qf = canonical_trail_context(EvalContext(wrap(HOLE)))
            delta = qf.plug(Ba(var, annot, code_of(lam_body), code_of(arg)))
            new_body = wrap(subst_term_simple(lam_body, var, arg))
            return Trans(q, delta), new_body, StepInfo("beta", path, delta, ())
        case TLet(var, annot, TBang(inner_q, inner_m), let_body):
            delta_subst = AuditedTermSubst(var, inner_m, inner_q, src(inner_q))
            new_let_body, residual = subst_term_audited(let_body, delta_subst)
            qf = canonical_trail_context(EvalContext(wrap(HOLE)))
            delta = qf.plug(
                Trans(Bb(src(inner_q), var, annot, code_of(let_body)), residual)
            )
            return (
                Trans(q, delta),
                wrap(new_let_body),
                StepInfo("beta_box", path, delta, ()),
            )
        case TInspect(branches):
            qf = canonical_trail_context(EvalContext(wrap(HOLE)))
            delta = qf.plug(Ti(q, branches.map_payloads(code_of)))
            new_body = wrap(fold_term(q, branches))
            return Trans(q, delta), new_body, StepInfo("ti", path, delta, ())
    return None


def _bang_successors(q, body):
    """All successors of the bang-rooted term ![q] body, in leftmost-
    outermost order.  Paths and bang paths are relative to `body`; a bang
    path of () means the root bang itself received the trail delta."""
    out = []
    for path, sub, wrap in _positions(body):
        got = _contract(q, path, wrap, sub)
        if got is not None:
            out.append(got)
        if isinstance(sub, TBang):
            for q2, b2, info in _bang_successors(sub.trail, sub.body):
                out.append(
                    (
                        q,
                        wrap(TBang(q2, b2)),
                        StepInfo(
                            info.rule,
                            path + ("body",) + info.path,
                            info.delta,
                            path + info.bang_path,
                        ),
                    )
                )
    return out


@dataclass(frozen=True)
class Redex:
    """A contractible spot: beta, beta_box, ti, or a nested bang that
    itself admits a step."""

    kind: str
    subject: object
    path: tuple


def decompose(m) -> list:
    """All decompositions body = F[r] of a bang-rooted term, with F
    box-free, ordered left-to-right and outermost-first."""
    root = _require_bang(m)
    out = []
    for path, sub, wrap in _positions(root.body):
        kind = None
        match sub:
            case TApp(TLam(), _):
                kind = "beta"
            case TLet(_, _, TBang(), _):
                kind = "beta_box"
            case TInspect():
                kind = "ti"
            case TBang(_, inner):
                if term_has_redex(inner):
                    kind = "bang"
        if kind is not None:
            full_path = ("body",) + path
            out.append(
                (EvalContext(wrap(HOLE)), Redex(kind, sub, full_path))
            )
    return out


def step_all(m) -> list:
    """Every one-step successor of a bang-rooted term, with step metadata,
    ordered left-to-right and outermost-first."""
    root = _require_bang(m)
    out = []
    for q2, b2, info in _bang_successors(root.trail, root.body):
        out.append(
            (
                TBang(q2, b2),
                StepInfo(
                    info.rule,
                    ("body",) + info.path,
                    info.delta,
                    info.bang_path if info.bang_path == () else ("body",) + info.bang_path,
                ),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Call-by-value

def _is_value(x) -> bool:
    match x:
        case TVar() | TAVar() | TLam():
            return True
        case TBang(_, body):
            return _is_value(body)
        case _:
            return False


def _cbv_bang(q, body):
    """The unique call-by-value successor of ![q] body, if any."""

    def go(x, path, wrap):
        match x:
            case TApp(fun, arg):
                if not _is_value(fun):
                    return go(fun, path + ("fun",), lambda r, a=arg: wrap(TApp(r, a)))
                if not _is_value(arg):
                    return go(arg, path + ("arg",), lambda r, f=fun: wrap(TApp(f, r)))
                if isinstance(fun, TLam):
                    return _contract(q, path, wrap, x)
                return None
            case TLet(var, annot, bound, let_body):
                if not _is_value(bound):
                    return go(
                        bound,
                        path + ("bound",),
                        lambda r, b=let_body: wrap(TLet(var, annot, r, b)),
                    )
                if isinstance(bound, TBang):
                    return _contract(q, path, wrap, x)
                return None
            case TInspect():
                return _contract(q, path, wrap, x)
            case TBang(q2, b2):
                if _is_value(b2):
                    return None
                got = _cbv_bang(q2, b2)
                if got is None:
                    return None
                nq, nb, info = got
                return (
                    q,
                    wrap(TBang(nq, nb)),
                    StepInfo(
                        info.rule,
                        path + ("body",) + info.path,
                        info.delta,
                        path + info.bang_path,
                    ),
                )
            case _:
                return None

    return go(body, (), lambda r: r)


def step(m, strategy: Strategy = Strategy.CBV):
    """One step under the given deterministic strategy, or None when the
    strategy finds no redex."""
    root = _require_bang(m)
    if strategy is Strategy.CBV:
        got = _cbv_bang(root.trail, root.body)
        if got is None:
            return None
        q2, b2, info = got
        return TBang(q2, b2), StepInfo(
            info.rule,
            ("body",) + info.path,
            info.delta,
            info.bang_path if info.bang_path == () else ("body",) + info.bang_path,
        )
    if strategy is Strategy.LEFTMOST_OUTERMOST:
        succs = step_all(m)
        return succs[0] if succs else None
    raise ValueError("step needs a deterministic strategy; use step_all for 'all'")


def normalize(m, strategy: Strategy = Strategy.LEFTMOST_OUTERMOST, fuel: int = 10000):
    """Iterate `step` to a strategy normal form.

    Returns (final term, steps).  Raises FuelExhausted - carrying the
    partial result - if the fuel runs out first.
    """
    _require_bang(m)
    steps = []
    current = m
    for _ in range(fuel):
        got = step(current, strategy)
        if got is None:
            return current, steps
        current, info = got
        steps.append(info)
    if step(current, strategy) is None:
        return current, steps
    raise FuelExhausted(current, steps)


def term_has_redex(body) -> bool:
    """Whether a bang body admits any step (nested bangs included)."""
    for _, sub, _ in _positions(body):
        match sub:
            case TApp(TLam(), _):
                return True
            case TLet(_, _, TBang(), _):
                return True
            case TInspect():
                return True
            case TBang(_, inner):
                if term_has_redex(inner):
                    return True
    return False


def is_normal_term(m) -> bool:
    """Normal form for terms: no trail and no context allow a step."""
    return not term_has_redex(m)


def is_normal_code(s) -> bool:
    """Normal form for codes: no reduct exists.  Trails have no congruence
    for bangs, so redexes hidden inside a bang do not count."""
    from .syntax import App as CApp, Bang as CBang, Inspect as CInspect
    from .syntax import Lam as CLam, Let as CLet

    match s:
        case CApp(CLam(), _):
            return False
        case CLet(_, _, CBang(), _):
            return False
        case CInspect():
            return False
        case CLam(_, _, body):
            return is_normal_code(body)
        case CApp(fun, arg):
            return is_normal_code(fun) and is_normal_code(arg)
        case CLet(_, _, bound, body):
            return is_normal_code(bound) and is_normal_code(body)
        case CBang():
            return True
        case _:
            return True


def replay(m, info: StepInfo):
    """Re-run the step described by `info` against `m`; returns the
    successor.  Raises if no decomposition matches."""
    for term, candidate in step_all(m):
        if candidate.rule == info.rule and candidate.path == info.path:
            return term
    raise ValueError(f"no {info.rule} redex at {'/'.join(map(str, info.path))}")


# ---------------------------------------------------------------------------
# Reduction graphs

@dataclass
class GraphNode:
    term: object
    depth: int
    normal: bool = False
    truncated: bool = False


@dataclass
class ReductionGraph:
    root: str
    nodes: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)  # (src key, dst key, StepInfo)
    complete: bool = True

    @property
    def truncated_keys(self) -> list:
        return [k for k, n in self.nodes.items() if n.truncated]

    def successors(self, key: str) -> list:
        return [(d, info) for s, d, info in self.edges if s == key]

    def is_acyclic(self) -> bool:
        adjacency = {}
        for s, d, _ in self.edges:
            adjacency.setdefault(s, []).append(d)
        state = dict.fromkeys(self.nodes, 0)  # 0 new, 1 open, 2 done
        stack = []
        for start in self.nodes:
            if state[start]:
                continue
            stack.append((start, iter(adjacency.get(start, ()))))
            state[start] = 1
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if state[nxt] == 1:
                        return False
                    if state[nxt] == 0:
                        state[nxt] = 1
                        stack.append((nxt, iter(adjacency.get(nxt, ()))))
                        advanced = True
                        break
                if not advanced:
                    state[node] = 2
                    stack.pop()
        return True

    def max_depth(self) -> int:
        return max((n.depth for n in self.nodes.values()), default=0)


def reduction_graph(m, fuel: int = 10000, max_nodes: int = 50000) -> ReductionGraph:
    """Breadth-first closure of `step_all` from a bang-rooted term.

    Node identity is the alpha-canonical printed form, trails included,
    so order-sensitive trails keep diverging paths distinct.  Nodes whose
    expansion would exceed `fuel` steps are marked truncated; exceeding
    `max_nodes` raises BoundExceeded carrying the partial graph.
    """
    _require_bang(m)
    root_key = canon_key(m)
    graph = ReductionGraph(root=root_key)
    graph.nodes[root_key] = GraphNode(m, 0)
    queue = [root_key]
    while queue:
        key = queue.pop(0)
        node = graph.nodes[key]
        succs = step_all(node.term)
        if not succs:
            node.normal = True
            continue
        if node.depth >= fuel:
            node.truncated = True
            graph.complete = False
            continue
        for term2, info in succs:
            key2 = canon_key(term2)
            if key2 not in graph.nodes:
                if len(graph.nodes) >= max_nodes:
                    graph.complete = False
                    raise BoundExceeded(
                        graph, f"reduction graph exceeds {max_nodes} nodes"
                    )
                graph.nodes[key2] = GraphNode(term2, node.depth + 1)
                queue.append(key2)
            graph.edges.append((key, key2, info))
    return graph


def to_dot(graph: ReductionGraph, show_trail: bool = False) -> str:
    """Render a reduction graph in DOT, deterministically."""
    ids = {key: f"n{i}" for i, key in enumerate(graph.nodes)}
    lines = ["digraph reduction {"]
    for key, node in graph.nodes.items():
        label = _dot_escape(pretty(node.term, elide_trails=not show_trail))
        attrs = [f'label="{label}"']
        if node.normal:
            attrs.append("peripheries=2")
        if node.truncated:
            attrs.append("style=dashed")
        lines.append(f"  {ids[key]} [{', '.join(attrs)}];")
    for s, d, info in graph.edges:
        lines.append(f'  {ids[s]} -> {ids[d]} [label="{info.rule}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
