"""The trail algebra: source/target extraction, the inspection fold,
code-of-term, and canonical trail contexts.

A well-formed trail relates two codes: its source (the code before the
recorded computation) and its target (the code after).  The inspection
fold interprets a trail through a branch map by structural recursion,
producing a code or a term.  Canonical trail contexts translate a
box-free evaluation context into the congruence skeleton that embeds a
contraction trail at the right position.
"""

from __future__ import annotations

from dataclasses import dataclass

from .subst import subst_code_audited, subst_code_simple
from .syntax import (
    App,
    AVar,
    Ba,
    Bang,
    Bb,
    BranchLabel,
    BranchMap,
    Inspect,
    Lam,
    Let,
    QApp,
    QLam,
    QLet,
    Refl,
    TApp,
    TAVar,
    TBang,
    TInspect,
    TLam,
    TLet,
    TVar,
    Ti,
    Trans,
    Trpl,
    Var,
    is_term,
    is_trail,
)


class MissingDefault(Exception):
    """Raised when folding with a branch map lacking the default branch."""


class NotBoxFree(Exception):
    """Raised when a canonical trail context is requested for a context
    whose hole sits inside a bang."""


# ---------------------------------------------------------------------------
# Source and target

def src(q):
    """The code a trail starts from.  Total on well-formed trails."""
    match q:
        case Refl(subject):
            return subject
        case Trans(first, _):
            return src(first)
        case Ba(var, annot, body, arg):
            return App(Lam(var, annot, body), arg)
        case Bb(bound, var, annot, body):
            return Let(var, annot, Bang(bound), body)
        case Ti(_, branches):
            return Inspect(branches)
        case QLam(var, annot, inner):
            return Lam(var, annot, src(inner))
        case QApp(left, right):
            return App(src(left), src(right))
        case QLet(left, var, annot, right):
            return Let(var, annot, src(left), src(right))
        case Trpl(branches):
            return Inspect(branches.map_payloads(src))
        case _:
            raise TypeError(f"not a trail: {q!r}")


def tgt(q):
    """The code a trail ends at.  Total on well-formed trails."""
    match q:
        case Refl(subject):
            return subject
        case Trans(_, second):
            return tgt(second)
        case Ba(var, _, body, arg):
            return subst_code_simple(body, var, arg)
        case Bb(bound, var, _, body):
            return subst_code_audited(body, var, bound)
        case Ti(history, branches):
            return fold_code(history, branches)
        case QLam(var, annot, inner):
            return Lam(var, annot, tgt(inner))
        case QApp(left, right):
            return App(tgt(left), tgt(right))
        case QLet(left, var, annot, right):
            return Let(var, annot, tgt(left), tgt(right))
        case Trpl(branches):
            return Inspect(branches.map_payloads(tgt))
        case _:
            raise TypeError(f"not a trail: {q!r}")


# ---------------------------------------------------------------------------
# The inspection fold.
#
# A constructor whose label is absent from the map falls straight to the
# default branch, with no recursion into subtrails; the clauses below
# only apply when the label is present.

def fold_code(q, theta: BranchMap):
    """Fold a trail through a branch map of codes, yielding a code."""
    return _fold(q, theta, App)


def fold_term(q, branches: BranchMap):
    """Fold a trail through a branch map of terms, yielding a term."""
    return _fold(q, branches, TApp)


def _fold(q, theta: BranchMap, app):
    if not theta.has_default:
        raise MissingDefault("branch map has no default branch")
    default = theta.get(BranchLabel.DEFAULT)

    def branch(label):
        payload = theta.get(label)
        return payload if label in theta else None

    match q:
        case Refl():
            b = branch(BranchLabel.REFL)
            return default if b is None else b
        case Trans(first, second):
            b = branch(BranchLabel.TRANS)
            if b is None:
                return default
            return app(app(b, _fold(first, theta, app)), _fold(second, theta, app))
        case Ba():
            b = branch(BranchLabel.BA)
            return default if b is None else b
        case Bb():
            b = branch(BranchLabel.BB)
            return default if b is None else b
        case Ti():
            b = branch(BranchLabel.TI)
            return default if b is None else b
        case QLam(_, _, inner):
            b = branch(BranchLabel.LAM)
            if b is None:
                return default
            return app(b, _fold(inner, theta, app))
        case QApp(left, right):
            b = branch(BranchLabel.APP)
            if b is None:
                return default
            return app(app(b, _fold(left, theta, app)), _fold(right, theta, app))
        case QLet(left, _, _, right):
            b = branch(BranchLabel.LET)
            if b is None:
                return default
            return app(app(b, _fold(left, theta, app)), _fold(right, theta, app))
        case Trpl(branches):
            if len(branches) == 0:
                b = branch(BranchLabel.TRPL_NIL)
                return default if b is None else b
            b = branch(BranchLabel.TRPL_CONS)
            if b is None:
                return default
            (_, head), *rest = branches.items()
            tail = Trpl(BranchMap(tuple(rest)))
            return app(app(b, _fold(head, theta, app)), _fold(tail, theta, app))
        case _:
            raise TypeError(f"not a trail: {q!r}")


# ---------------------------------------------------------------------------
# Code of a term, and the reflexive embedding of codes into terms.

def code_of(m):
    """Replace every bang's contents by the source of its trail."""
    match m:
        case TVar(name):
            return Var(name)
        case TAVar(name):
            return AVar(name)
        case TLam(var, annot, body):
            return Lam(var, annot, code_of(body))
        case TApp(fun, arg):
            return App(code_of(fun), code_of(arg))
        case TBang(trail, _):
            return Bang(src(trail))
        case TLet(var, annot, bound, body):
            return Let(var, annot, code_of(bound), code_of(body))
        case TInspect(branches):
            return TInspectCode(branches)
        case _:
            raise TypeError(f"not a term: {m!r}")


def TInspectCode(branches: BranchMap):
    return Inspect(branches.map_payloads(code_of))


def term_of_code(s):
    """Embed a code as a term whose bangs all carry reflexive trails."""
    match s:
        case Var(name):
            return TVar(name)
        case AVar(name):
            return TAVar(name)
        case Lam(var, annot, body):
            return TLam(var, annot, term_of_code(body))
        case App(fun, arg):
            return TApp(term_of_code(fun), term_of_code(arg))
        case Bang(body):
            return TBang(Refl(body), term_of_code(body))
        case Let(var, annot, bound, body):
            return TLet(var, annot, term_of_code(bound), term_of_code(body))
        case Inspect(branches):
            return TInspect(branches.map_payloads(term_of_code))
        case _:
            raise TypeError(f"not a code: {s!r}")


# ---------------------------------------------------------------------------
# Contexts.  A context is a term (or trail) skeleton with exactly one Hole;
# plugging is plain structural replacement and may capture variables bound
# by the context.

@dataclass(frozen=True)
class Hole:
    pass


HOLE = Hole()


def _count_holes(x) -> int:
    if isinstance(x, Hole):
        return 1
    match x:
        case TLam(_, _, body) | QLam(_, _, body):
            return _count_holes(body)
        case TApp(fun, arg):
            return _count_holes(fun) + _count_holes(arg)
        case Trans(first, second) | QApp(first, second):
            return _count_holes(first) + _count_holes(second)
        case TBang(_, body):
            return _count_holes(body)
        case TLet(_, _, bound, body) | QLet(bound, _, _, body):
            return _count_holes(bound) + _count_holes(body)
        case TInspect(branches) | Trpl(branches):
            return sum(_count_holes(p) for _, p in branches.items())
        case _:
            return 0


def _hole_under_bang(x, inside: bool = False) -> bool:
    if isinstance(x, Hole):
        return inside
    match x:
        case TLam(_, _, body):
            return _hole_under_bang(body, inside)
        case TApp(fun, arg):
            return _hole_under_bang(fun, inside) or _hole_under_bang(arg, inside)
        case TBang(_, body):
            return _hole_under_bang(body, True)
        case TLet(_, _, bound, body):
            return _hole_under_bang(bound, inside) or _hole_under_bang(body, inside)
        case TInspect(branches):
            return any(_hole_under_bang(p, inside) for _, p in branches.items())
        case _:
            return False


@dataclass(frozen=True)
class EvalContext:
    """A term with exactly one hole.  `box_free` is true when the hole is
    not inside any bang; only box-free contexts participate in reduction."""

    skeleton: object

    def __post_init__(self):
        if _count_holes(self.skeleton) != 1:
            raise ValueError("evaluation context must have exactly one hole")

    @property
    def box_free(self) -> bool:
        return not _hole_under_bang(self.skeleton)

    def plug(self, m):
        return plug_term(self, m)


@dataclass(frozen=True)
class TrailContext:
    """A trail with exactly one hole."""

    skeleton: object

    def __post_init__(self):
        if _count_holes(self.skeleton) != 1:
            raise ValueError("trail context must have exactly one hole")

    def plug(self, q):
        return plug_trail(self, q)


def plug_term(f: EvalContext, m):
    """Fill the hole with a term.  Not capture-avoiding by design."""
    return _plug(f.skeleton if isinstance(f, EvalContext) else f, m)


def plug_trail(qc: TrailContext, q):
    """Fill the hole with a trail.  Not capture-avoiding by design."""
    return _plug(qc.skeleton if isinstance(qc, TrailContext) else qc, q)


def _plug(x, filler):
    if isinstance(x, Hole):
        return filler
    match x:
        case TLam(var, annot, body):
            return TLam(var, annot, _plug(body, filler))
        case TApp(fun, arg):
            return TApp(_plug(fun, filler), _plug(arg, filler))
        case TBang(trail, body):
            return TBang(trail, _plug(body, filler))
        case TLet(var, annot, bound, body):
            return TLet(var, annot, _plug(bound, filler), _plug(body, filler))
        case TInspect(branches):
            return TInspect(branches.map_payloads(lambda p: _plug(p, filler)))
        case Trans(first, second):
            return Trans(_plug(first, filler), _plug(second, filler))
        case Ba() | Bb() | Refl() | Ti():
            return x
        case QLam(var, annot, inner):
            return QLam(var, annot, _plug(inner, filler))
        case QApp(left, right):
            return QApp(_plug(left, filler), _plug(right, filler))
        case QLet(left, var, annot, right):
            return QLet(_plug(left, filler), var, annot, _plug(right, filler))
        case Trpl(branches):
            return Trpl(branches.map_payloads(lambda p: _plug(p, filler)))
        case _:
            return x


def canonical_trail_context(f: EvalContext) -> TrailContext:
    """The reflexive congruence skeleton of a box-free context: the hole
    maps to the hole, every sibling to the reflexivity of its code."""
    skeleton = f.skeleton if isinstance(f, EvalContext) else f
    if _hole_under_bang(skeleton):
        raise NotBoxFree("hole sits inside a bang")
    return TrailContext(_ctc(skeleton))


def _has_hole(x) -> bool:
    return _count_holes(x) > 0


def _ctc(x):
    if isinstance(x, Hole):
        return HOLE
    match x:
        case TLam(var, annot, body):
            return QLam(var, annot, _ctc(body))
        case TApp(fun, arg):
            if _has_hole(fun):
                return QApp(_ctc(fun), Refl(code_of(arg)))
            return QApp(Refl(code_of(fun)), _ctc(arg))
        case TLet(var, annot, bound, body):
            if _has_hole(bound):
                return QLet(_ctc(bound), var, annot, Refl(code_of(body)))
            return QLet(Refl(code_of(bound)), var, annot, _ctc(body))
        case TInspect(branches):
            def entry(payload):
                if _has_hole(payload):
                    return _ctc(payload)
                return Refl(code_of(payload))

            return Trpl(branches.map_payloads(entry))
        case _:
            raise TypeError(f"no hole beneath: {x!r}")
