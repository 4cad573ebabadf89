"""Abstract syntax for the audited lambda calculus.

Four mutually recursive syntax classes: types, codes, terms, and trails.
Codes are unevaluated expressions whose bangs carry no history; terms
annotate every bang with a trail; trails are derivation-shaped witnesses
that one code reduces (in zero or more steps) to another.  Branch maps
drive trail inspection and are shared by all three expression classes.

Variables come in two disjoint namespaces: simple variables (lambda
bound) and audited variables (let-bang bound, written with an ``@``
sigil in concrete syntax).  Binders scope over exactly one subtree and
never over their own annotation.

All values are immutable after construction and every operation here is
pure, so everything is safe to share across threads.  ``==`` on nodes is
raw structural equality; the semantic notion used throughout the rest of
the package is `alpha_eq`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class BranchLabel(enum.Enum):
    """Trail-constructor labels usable in inspection branch maps.

    Exactly these eleven labels exist.  The declaration order below is
    the canonical iteration order for branch maps, chosen once so that
    printing and folding are deterministic.
    """

    REFL = "refl"
    TRANS = "trans"
    BA = "ba"
    BB = "bb"
    TI = "ti"
    LAM = "lam"
    APP = "app"
    LET = "let"
    TRPL_NIL = "trpl0"
    TRPL_CONS = "trpl1"
    DEFAULT = "_"

    @property
    def token(self) -> str:
        return self.value


LABEL_ORDER = {label: i for i, label in enumerate(BranchLabel)}
LABEL_BY_TOKEN = {label.value: label for label in BranchLabel}


@dataclass(frozen=True)
class BranchMap:
    """Finite map from branch labels to payloads (codes, terms, or trails).

    Entries are stored sorted by the canonical label order; construction
    rejects duplicate labels.  Payload class is not enforced here: the
    same container backs code maps, term maps, and trail maps.
    """

    entries: tuple

    @staticmethod
    def make(mapping) -> "BranchMap":
        if isinstance(mapping, dict):
            pairs = list(mapping.items())
        else:
            pairs = list(mapping)
        labels = [lab for lab, _ in pairs]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate branch labels")
        for lab in labels:
            if not isinstance(lab, BranchLabel):
                raise TypeError(f"not a branch label: {lab!r}")
        pairs.sort(key=lambda kv: LABEL_ORDER[kv[0]])
        return BranchMap(tuple(pairs))

    def get(self, label: BranchLabel, default=None):
        for lab, payload in self.entries:
            if lab is label:
                return payload
        return default

    def __contains__(self, label: BranchLabel) -> bool:
        return any(lab is label for lab, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> tuple:
        return tuple(lab for lab, _ in self.entries)

    def items(self) -> tuple:
        return self.entries

    def payloads(self) -> tuple:
        return tuple(payload for _, payload in self.entries)

    def map_payloads(self, fn) -> "BranchMap":
        return BranchMap(tuple((lab, fn(payload)) for lab, payload in self.entries))

    @property
    def has_default(self) -> bool:
        return BranchLabel.DEFAULT in self


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Arrow:
    dom: "TypeExpr"
    cod: "TypeExpr"


@dataclass(frozen=True)
class Audited:
    """Audited unit type: the type of bangs, embedding the original code."""

    code: "Code"
    body: "TypeExpr"


TypeExpr = Union[Atom, Arrow, Audited]


# ---------------------------------------------------------------------------
# Codes (history-free expressions)

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class AVar:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    annot: "TypeExpr"
    body: "Code"


@dataclass(frozen=True)
class App:
    fun: "Code"
    arg: "Code"


@dataclass(frozen=True)
class Bang:
    body: "Code"


@dataclass(frozen=True)
class Let:
    var: str
    annot: "TypeExpr"
    bound: "Code"
    body: "Code"


@dataclass(frozen=True)
class Inspect:
    branches: BranchMap  # of Code


Code = Union[Var, AVar, Lam, App, Bang, Let, Inspect]


# ---------------------------------------------------------------------------
# Terms (partially evaluated expressions; every bang carries a trail)

@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TAVar:
    name: str


@dataclass(frozen=True)
class TLam:
    var: str
    annot: "TypeExpr"
    body: "Term"


@dataclass(frozen=True)
class TApp:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class TBang:
    trail: "Trail"
    body: "Term"


@dataclass(frozen=True)
class TLet:
    var: str
    annot: "TypeExpr"
    bound: "Term"
    body: "Term"


@dataclass(frozen=True)
class TInspect:
    branches: BranchMap  # of Term


Term = Union[TVar, TAVar, TLam, TApp, TBang, TLet, TInspect]


# ---------------------------------------------------------------------------
# Trails.  There is deliberately no symmetry constructor.

@dataclass(frozen=True)
class Refl:
    """Reflexivity; stores the code whose identity it states."""

    subject: "Code"


@dataclass(frozen=True)
class Trans:
    first: "Trail"
    second: "Trail"


@dataclass(frozen=True)
class Ba:
    """Beta contraction: (\\var:annot. body) arg reduces to body[arg/var]."""

    var: str
    annot: "TypeExpr"
    body: "Code"
    arg: "Code"


@dataclass(frozen=True)
class Bb:
    """Let-bang contraction: let @var = !bound in body reduces to body[bound/@var]."""

    bound: "Code"
    var: str
    annot: "TypeExpr"
    body: "Code"


@dataclass(frozen=True)
class Ti:
    """Inspection contraction: inspect(branches) reduces to the fold of history."""

    history: "Trail"
    branches: BranchMap  # of Code


@dataclass(frozen=True)
class QLam:
    var: str
    annot: "TypeExpr"
    inner: "Trail"


@dataclass(frozen=True)
class QApp:
    left: "Trail"
    right: "Trail"


@dataclass(frozen=True)
class QLet:
    left: "Trail"
    var: str
    annot: "TypeExpr"
    right: "Trail"


@dataclass(frozen=True)
class Trpl:
    branches: BranchMap  # of Trail


Trail = Union[Refl, Trans, Ba, Bb, Ti, QLam, QApp, QLet, Trpl]

_TYPE_NODES = (Atom, Arrow, Audited)
_CODE_NODES = (Var, AVar, Lam, App, Bang, Let, Inspect)
_TERM_NODES = (TVar, TAVar, TLam, TApp, TBang, TLet, TInspect)
_TRAIL_NODES = (Refl, Trans, Ba, Bb, Ti, QLam, QApp, QLet, Trpl)


def is_code(x) -> bool:
    return isinstance(x, _CODE_NODES)


def is_term(x) -> bool:
    return isinstance(x, _TERM_NODES)


def is_trail(x) -> bool:
    return isinstance(x, _TRAIL_NODES)


def is_type(x) -> bool:
    return isinstance(x, _TYPE_NODES)


# ---------------------------------------------------------------------------
# Free variables

_EMPTY = frozenset()


def free_vars(x) -> tuple[frozenset, frozenset]:
    """Free (simple, audited) variables of any syntax class.

    Annotations count: a variable occurring only inside a binder's type
    annotation is still free in the enclosing expression.
    """
    match x:
        case Atom():
            return _EMPTY, _EMPTY
        case Arrow(dom, cod):
            return _union(free_vars(dom), free_vars(cod))
        case Audited(code, body):
            return _union(free_vars(code), free_vars(body))
        case Var(name) | TVar(name):
            return frozenset((name,)), _EMPTY
        case AVar(name) | TAVar(name):
            return _EMPTY, frozenset((name,))
        case Lam(var, annot, body) | TLam(var, annot, body):
            fs, fa = free_vars(body)
            return _union((fs - {var}, fa), free_vars(annot))
        case App(fun, arg) | TApp(fun, arg):
            return _union(free_vars(fun), free_vars(arg))
        case Bang(body):
            return free_vars(body)
        case TBang(trail, body):
            return _union(free_vars(trail), free_vars(body))
        case Let(var, annot, bound, body) | TLet(var, annot, bound, body):
            fs, fa = free_vars(body)
            return _union(
                _union(free_vars(bound), (fs, fa - {var})), free_vars(annot)
            )
        case Inspect(branches) | TInspect(branches) | Trpl(branches):
            return _branch_fvs(branches)
        case Refl(subject):
            return free_vars(subject)
        case Trans(first, second) | QApp(first, second):
            return _union(free_vars(first), free_vars(second))
        case Ba(var, annot, body, arg):
            fs, fa = free_vars(body)
            return _union(
                _union((fs - {var}, fa), free_vars(arg)), free_vars(annot)
            )
        case Bb(bound, var, annot, body):
            fs, fa = free_vars(body)
            return _union(
                _union(free_vars(bound), (fs, fa - {var})), free_vars(annot)
            )
        case Ti(history, branches):
            return _union(free_vars(history), _branch_fvs(branches))
        case QLam(var, annot, inner):
            fs, fa = free_vars(inner)
            return _union((fs - {var}, fa), free_vars(annot))
        case QLet(left, var, annot, right):
            fs, fa = free_vars(right)
            return _union(
                _union(free_vars(left), (fs, fa - {var})), free_vars(annot)
            )
        case _:
            raise TypeError(f"not syntax: {x!r}")


def _union(a, b):
    return a[0] | b[0], a[1] | b[1]


def _branch_fvs(branches: BranchMap):
    fs, fa = _EMPTY, _EMPTY
    for _, payload in branches.items():
        pfs, pfa = free_vars(payload)
        fs, fa = fs | pfs, fa | pfa
    return fs, fa


def free_simple(x) -> frozenset:
    return free_vars(x)[0]


def free_audited(x) -> frozenset:
    return free_vars(x)[1]


def fresh(avoid, hint: str = "x") -> str:
    """Pick an identifier not in `avoid`: the hint itself, else the hint
    with the least positive numeric suffix."""
    if not hint:
        hint = "x"
    if hint not in avoid:
        return hint
    n = 1
    while f"{hint}{n}" in avoid:
        n += 1
    return f"{hint}{n}"


# ---------------------------------------------------------------------------
# Alpha-equivalence

def alpha_eq(x, y) -> bool:
    """Equality up to consistent renaming of bound variables.

    Defined across all four syntax classes; values of different classes
    (or different constructors) are never alpha-equal.
    """
    return _aeq(x, y, {}, {}, {}, {})


def _aeq(x, y, ms1, ms2, ma1, ma2) -> bool:
    if type(x) is not type(y):
        return False
    match x:
        case Atom(name):
            return name == y.name
        case Arrow(dom, cod):
            return _aeq(dom, y.dom, ms1, ms2, ma1, ma2) and _aeq(
                cod, y.cod, ms1, ms2, ma1, ma2
            )
        case Audited(code, body):
            return _aeq(code, y.code, ms1, ms2, ma1, ma2) and _aeq(
                body, y.body, ms1, ms2, ma1, ma2
            )
        case Var(name) | TVar(name):
            return ms1.get(name, ("f", name)) == ms2.get(y.name, ("f", y.name))
        case AVar(name) | TAVar(name):
            return ma1.get(name, ("f", name)) == ma2.get(y.name, ("f", y.name))
        case Lam(var, annot, body) | TLam(var, annot, body):
            if not _aeq(annot, y.annot, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _aeq(
                body, y.body, {**ms1, var: tok}, {**ms2, y.var: tok}, ma1, ma2
            )
        case App(fun, arg) | TApp(fun, arg) | QApp(fun, arg) | Trans(fun, arg):
            return _aeq(fun, _fst(y), ms1, ms2, ma1, ma2) and _aeq(
                arg, _snd(y), ms1, ms2, ma1, ma2
            )
        case Bang(body):
            return _aeq(body, y.body, ms1, ms2, ma1, ma2)
        case TBang(trail, body):
            return _aeq(trail, y.trail, ms1, ms2, ma1, ma2) and _aeq(
                body, y.body, ms1, ms2, ma1, ma2
            )
        case Let(var, annot, bound, body) | TLet(var, annot, bound, body):
            if not _aeq(annot, y.annot, ms1, ms2, ma1, ma2):
                return False
            if not _aeq(bound, y.bound, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _aeq(
                body, y.body, ms1, ms2, {**ma1, var: tok}, {**ma2, y.var: tok}
            )
        case Inspect(branches) | TInspect(branches) | Trpl(branches):
            return _aeq_branches(branches, y.branches, ms1, ms2, ma1, ma2)
        case Refl(subject):
            return _aeq(subject, y.subject, ms1, ms2, ma1, ma2)
        case Ba(var, annot, body, arg):
            if not _aeq(annot, y.annot, ms1, ms2, ma1, ma2):
                return False
            if not _aeq(arg, y.arg, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _aeq(
                body, y.body, {**ms1, var: tok}, {**ms2, y.var: tok}, ma1, ma2
            )
        case Bb(bound, var, annot, body):
            if not _aeq(annot, y.annot, ms1, ms2, ma1, ma2):
                return False
            if not _aeq(bound, y.bound, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _aeq(
                body, y.body, ms1, ms2, {**ma1, var: tok}, {**ma2, y.var: tok}
            )
        case Ti(history, branches):
            return _aeq(history, y.history, ms1, ms2, ma1, ma2) and _aeq_branches(
                branches, y.branches, ms1, ms2, ma1, ma2
            )
        case QLam(var, annot, inner):
            if not _aeq(annot, y.annot, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _aeq(
                inner, y.inner, {**ms1, var: tok}, {**ms2, y.var: tok}, ma1, ma2
            )
        case QLet(left, var, annot, right):
            if not _aeq(annot, y.annot, ms1, ms2, ma1, ma2):
                return False
            if not _aeq(left, y.left, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _aeq(
                right, y.right, ms1, ms2, {**ma1, var: tok}, {**ma2, y.var: tok}
            )
        case _:
            raise TypeError(f"not syntax: {x!r}")


def _fst(y):
    if isinstance(y, Trans):
        return y.first
    if isinstance(y, QApp):
        return y.left
    return y.fun


def _snd(y):
    if isinstance(y, Trans):
        return y.second
    if isinstance(y, QApp):
        return y.right
    return y.arg


def _aeq_branches(b1: BranchMap, b2: BranchMap, ms1, ms2, ma1, ma2) -> bool:
    if b1.labels() != b2.labels():
        return False
    return all(
        _aeq(p1, p2, ms1, ms2, ma1, ma2)
        for (_, p1), (_, p2) in zip(b1.items(), b2.items())
    )


# ---------------------------------------------------------------------------
# Canonical renaming (alpha-normal form)

def canonical(x):
    """Rename all binders to reserved position-indexed names.

    Two values are alpha-equal iff their canonical forms are structurally
    equal; `canon_key` turns that into a printable/hashable key.  The
    reserved names contain '?' so they can never collide with parsed
    identifiers.
    """
    counters = [0, 0]
    return _canon(x, {}, {}, counters)


def canon_key(x) -> str:
    return pretty(canonical(x))


def _canon(x, ms, ma, counters):
    match x:
        case Atom():
            return x
        case Arrow(dom, cod):
            return Arrow(_canon(dom, ms, ma, counters), _canon(cod, ms, ma, counters))
        case Audited(code, body):
            return Audited(_canon(code, ms, ma, counters), _canon(body, ms, ma, counters))
        case Var(name):
            return Var(ms.get(name, name))
        case TVar(name):
            return TVar(ms.get(name, name))
        case AVar(name):
            return AVar(ma.get(name, name))
        case TAVar(name):
            return TAVar(ma.get(name, name))
        case Lam(var, annot, body):
            annot2 = _canon(annot, ms, ma, counters)
            new, ms2 = _canon_bind_s(var, ms, counters)
            return Lam(new, annot2, _canon(body, ms2, ma, counters))
        case TLam(var, annot, body):
            annot2 = _canon(annot, ms, ma, counters)
            new, ms2 = _canon_bind_s(var, ms, counters)
            return TLam(new, annot2, _canon(body, ms2, ma, counters))
        case App(fun, arg):
            return App(_canon(fun, ms, ma, counters), _canon(arg, ms, ma, counters))
        case TApp(fun, arg):
            return TApp(_canon(fun, ms, ma, counters), _canon(arg, ms, ma, counters))
        case Bang(body):
            return Bang(_canon(body, ms, ma, counters))
        case TBang(trail, body):
            return TBang(_canon(trail, ms, ma, counters), _canon(body, ms, ma, counters))
        case Let(var, annot, bound, body):
            annot2 = _canon(annot, ms, ma, counters)
            bound2 = _canon(bound, ms, ma, counters)
            new, ma2 = _canon_bind_a(var, ma, counters)
            return Let(new, annot2, bound2, _canon(body, ms, ma2, counters))
        case TLet(var, annot, bound, body):
            annot2 = _canon(annot, ms, ma, counters)
            bound2 = _canon(bound, ms, ma, counters)
            new, ma2 = _canon_bind_a(var, ma, counters)
            return TLet(new, annot2, bound2, _canon(body, ms, ma2, counters))
        case Inspect(branches):
            return Inspect(branches.map_payloads(lambda p: _canon(p, ms, ma, counters)))
        case TInspect(branches):
            return TInspect(branches.map_payloads(lambda p: _canon(p, ms, ma, counters)))
        case Trpl(branches):
            return Trpl(branches.map_payloads(lambda p: _canon(p, ms, ma, counters)))
        case Refl(subject):
            return Refl(_canon(subject, ms, ma, counters))
        case Trans(first, second):
            return Trans(_canon(first, ms, ma, counters), _canon(second, ms, ma, counters))
        case QApp(left, right):
            return QApp(_canon(left, ms, ma, counters), _canon(right, ms, ma, counters))
        case Ba(var, annot, body, arg):
            annot2 = _canon(annot, ms, ma, counters)
            arg2 = _canon(arg, ms, ma, counters)
            new, ms2 = _canon_bind_s(var, ms, counters)
            return Ba(new, annot2, _canon(body, ms2, ma, counters), arg2)
        case Bb(bound, var, annot, body):
            annot2 = _canon(annot, ms, ma, counters)
            bound2 = _canon(bound, ms, ma, counters)
            new, ma2 = _canon_bind_a(var, ma, counters)
            return Bb(bound2, new, annot2, _canon(body, ms, ma2, counters))
        case Ti(history, branches):
            return Ti(
                _canon(history, ms, ma, counters),
                branches.map_payloads(lambda p: _canon(p, ms, ma, counters)),
            )
        case QLam(var, annot, inner):
            annot2 = _canon(annot, ms, ma, counters)
            new, ms2 = _canon_bind_s(var, ms, counters)
            return QLam(new, annot2, _canon(inner, ms2, ma, counters))
        case QLet(left, var, annot, right):
            annot2 = _canon(annot, ms, ma, counters)
            left2 = _canon(left, ms, ma, counters)
            new, ma2 = _canon_bind_a(var, ma, counters)
            return QLet(left2, new, annot2, _canon(right, ms, ma2, counters))
        case _:
            raise TypeError(f"not syntax: {x!r}")


def _canon_bind_s(var, ms, counters):
    new = f"?s{counters[0]}"
    counters[0] += 1
    return new, {**ms, var: new}


def _canon_bind_a(var, ma, counters):
    new = f"?u{counters[1]}"
    counters[1] += 1
    return new, {**ma, var: new}


# ---------------------------------------------------------------------------
# Pretty-printing
#
# The concrete grammar (shared with the parser module):
#   types   P | A -> B (right assoc) | [s]A
#   codes   x | @u | \x:A. s | s t | !s | let @u:A = s in t
#           | inspect {LABEL => s; ...}
#   terms   as codes but ![q] M
#   trails  refl(s) | trans(q, q') | ba(a:A. s, t) | bb(s, @u:A. t)
#           | ti(q, {...}) | tlam(a:A. q) | tapp(q, q') | tlet(q, @u:A. q')
#           | trpl({...})

_LOW, _APP, _ATOM = 0, 1, 2


def pretty(x, *, elide_trails: bool = False) -> str:
    """Render any syntax value in the concrete grammar.

    `parse(pretty(x))` is alpha-equal to `x` for every well-formed value
    (and structurally equal when `x` uses parseable identifiers).  With
    `elide_trails` terms print in code syntax, dropping bang subscripts;
    the result then reads as the term's current shape, not its code.
    """
    if is_type(x):
        return _pt(x, False)
    if is_trail(x):
        return _pq(x, elide_trails)
    return _pe(x, _LOW, elide_trails)


def _pt(t, need_atom: bool) -> str:
    match t:
        case Atom(name):
            return name
        case Arrow(dom, cod):
            s = f"{_pt(dom, True)} -> {_pt(cod, False)}"
            return f"({s})" if need_atom else s
        case Audited(code, body):
            return f"[{_pe(code, _LOW, False)}]{_pt(body, True)}"
        case _:
            raise TypeError(f"not a type: {t!r}")


def _pe(x, level: int, elide: bool) -> str:
    match x:
        case Var(name) | TVar(name):
            return name
        case AVar(name) | TAVar(name):
            return f"@{name}"
        case Lam(var, annot, body) | TLam(var, annot, body):
            s = f"\\{var}:{_pt(annot, False)}. {_pe(body, _LOW, elide)}"
            return f"({s})" if level > _LOW else s
        case App(fun, arg) | TApp(fun, arg):
            s = f"{_pe(fun, _APP, elide)} {_pe(arg, _ATOM, elide)}"
            return f"({s})" if level > _APP else s
        case Bang(body):
            s = f"!{_pe(body, _LOW, elide)}"
            return f"({s})" if level > _LOW else s
        case TBang(trail, body):
            if elide:
                s = f"!{_pe(body, _LOW, elide)}"
            else:
                s = f"![{_pq(trail, elide)}] {_pe(body, _LOW, elide)}"
            return f"({s})" if level > _LOW else s
        case Let(var, annot, bound, body) | TLet(var, annot, bound, body):
            s = (
                f"let @{var}:{_pt(annot, False)} = {_pe(bound, _LOW, elide)}"
                f" in {_pe(body, _LOW, elide)}"
            )
            return f"({s})" if level > _LOW else s
        case Inspect(branches) | TInspect(branches):
            return f"inspect {{{_pb(branches, elide)}}}"
        case _:
            raise TypeError(f"not a code or term: {x!r}")


def _pb(branches: BranchMap, elide: bool) -> str:
    parts = []
    for lab, payload in branches.items():
        if is_trail(payload):
            rendered = _pq(payload, elide)
        else:
            rendered = _pe(payload, _LOW, elide)
        parts.append(f"{lab.token} => {rendered}")
    return "; ".join(parts)


def _pq(q, elide: bool) -> str:
    match q:
        case Refl(subject):
            return f"refl({_pe(subject, _LOW, elide)})"
        case Trans(first, second):
            return f"trans({_pq(first, elide)}, {_pq(second, elide)})"
        case Ba(var, annot, body, arg):
            return (
                f"ba({var}:{_pt(annot, False)}. {_pe(body, _LOW, elide)},"
                f" {_pe(arg, _LOW, elide)})"
            )
        case Bb(bound, var, annot, body):
            return (
                f"bb({_pe(bound, _LOW, elide)}, @{var}:{_pt(annot, False)}."
                f" {_pe(body, _LOW, elide)})"
            )
        case Ti(history, branches):
            return f"ti({_pq(history, elide)}, {{{_pb(branches, elide)}}})"
        case QLam(var, annot, inner):
            return f"tlam({var}:{_pt(annot, False)}. {_pq(inner, elide)})"
        case QApp(left, right):
            return f"tapp({_pq(left, elide)}, {_pq(right, elide)})"
        case QLet(left, var, annot, right):
            return (
                f"tlet({_pq(left, elide)}, @{var}:{_pt(annot, False)}."
                f" {_pq(right, elide)})"
            )
        case Trpl(branches):
            return f"trpl({{{_pb(branches, elide)}}})"
        case _:
            raise TypeError(f"not a trail: {q!r}")


for _cls in _TYPE_NODES + _CODE_NODES + _TERM_NODES + _TRAIL_NODES:
    _cls.__str__ = pretty
