"""The simplified calculus: trail-free terms, its typing and reduction,
and the erasure map from the full calculus.

Terms here correspond to codes of the full calculus: bangs carry no
history and types are plain (atoms, arrows, and an unannotated box).
Inspection does not look at a real history - at reduction time it
consumes an arbitrary structurally well-formed trail, supplied by an
oracle.  That makes the system an upper bound for termination testing:
the full calculus erases into it while preserving typing and steps.

Reduction is relation-style: `hs_step` returns every one-step reduct,
closing over all contexts (including under binders and inside bangs).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    App,
    Arrow,
    Atom,
    Audited,
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
    fresh,
)
from .typecheck import TypeCheckError


# ---------------------------------------------------------------------------
# Simple types

@dataclass(frozen=True)
class SAtom:
    name: str


@dataclass(frozen=True)
class SArrow:
    dom: "SimpleType"
    cod: "SimpleType"


@dataclass(frozen=True)
class SBox:
    body: "SimpleType"


SimpleType = object


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class HVar:
    name: str


@dataclass(frozen=True)
class HAVar:
    name: str


@dataclass(frozen=True)
class HLam:
    var: str
    annot: SimpleType
    body: "HsTerm"


@dataclass(frozen=True)
class HApp:
    fun: "HsTerm"
    arg: "HsTerm"


@dataclass(frozen=True)
class HBang:
    body: "HsTerm"


@dataclass(frozen=True)
class HLet:
    var: str
    annot: SimpleType
    bound: "HsTerm"
    body: "HsTerm"


@dataclass(frozen=True)
class HInspect:
    branches: BranchMap  # of HsTerm


HsTerm = object


# Trails: same constructors as the full calculus, with simplified terms
# as subjects and simple types as annotations.

@dataclass(frozen=True)
class HRefl:
    subject: HsTerm


@dataclass(frozen=True)
class HTrans:
    first: "HsTrail"
    second: "HsTrail"


@dataclass(frozen=True)
class HBa:
    var: str
    annot: SimpleType
    body: HsTerm
    arg: HsTerm


@dataclass(frozen=True)
class HBb:
    bound: HsTerm
    var: str
    annot: SimpleType
    body: HsTerm


@dataclass(frozen=True)
class HTi:
    history: "HsTrail"
    branches: BranchMap  # of HsTerm


@dataclass(frozen=True)
class HQLam:
    var: str
    annot: SimpleType
    inner: "HsTrail"


@dataclass(frozen=True)
class HQApp:
    left: "HsTrail"
    right: "HsTrail"


@dataclass(frozen=True)
class HQLet:
    left: "HsTrail"
    var: str
    annot: SimpleType
    right: "HsTrail"


@dataclass(frozen=True)
class HTrpl:
    branches: BranchMap  # of HsTrail


HsTrail = object


# ---------------------------------------------------------------------------
# Pretty-printing (display only; the simplified calculus has no parser)

def hs_pretty(x) -> str:
    match x:
        case SAtom(name):
            return name
        case SArrow(dom, cod):
            d = hs_pretty(dom)
            if isinstance(dom, SArrow):
                d = f"({d})"
            return f"{d} -> {hs_pretty(cod)}"
        case SBox(body):
            b = hs_pretty(body)
            if isinstance(body, SArrow):
                b = f"({b})"
            return f"[]{b}"
        case HVar(name):
            return name
        case HAVar(name):
            return f"@{name}"
        case HLam(var, annot, body):
            return f"\\{var}:{hs_pretty(annot)}. {hs_pretty(body)}"
        case HApp(fun, arg):
            f = hs_pretty(fun)
            if isinstance(fun, (HLam, HLet, HBang)):
                f = f"({f})"
            a = hs_pretty(arg)
            if not isinstance(arg, (HVar, HAVar, HInspect)):
                a = f"({a})"
            return f"{f} {a}"
        case HBang(body):
            return f"!{hs_pretty(body)}"
        case HLet(var, annot, bound, body):
            return f"let @{var}:{hs_pretty(annot)} = {hs_pretty(bound)} in {hs_pretty(body)}"
        case HInspect(branches):
            inner = "; ".join(
                f"{lab.token} => {hs_pretty(p)}" for lab, p in branches.items()
            )
            return f"inspect {{{inner}}}"
        case HRefl(subject):
            return f"refl({hs_pretty(subject)})"
        case HTrans(first, second):
            return f"trans({hs_pretty(first)}, {hs_pretty(second)})"
        case HBa(var, annot, body, arg):
            return f"ba({var}:{hs_pretty(annot)}. {hs_pretty(body)}, {hs_pretty(arg)})"
        case HBb(bound, var, annot, body):
            return f"bb({hs_pretty(bound)}, @{var}:{hs_pretty(annot)}. {hs_pretty(body)})"
        case HTi(history, branches):
            inner = "; ".join(
                f"{lab.token} => {hs_pretty(p)}" for lab, p in branches.items()
            )
            return f"ti({hs_pretty(history)}, {{{inner}}})"
        case HQLam(var, annot, inner):
            return f"tlam({var}:{hs_pretty(annot)}. {hs_pretty(inner)})"
        case HQApp(left, right):
            return f"tapp({hs_pretty(left)}, {hs_pretty(right)})"
        case HQLet(left, var, annot, right):
            return f"tlet({hs_pretty(left)}, @{var}:{hs_pretty(annot)}. {hs_pretty(right)})"
        case HTrpl(branches):
            inner = "; ".join(
                f"{lab.token} => {hs_pretty(p)}" for lab, p in branches.items()
            )
            return f"trpl({{{inner}}})"
        case _:
            raise TypeError(f"not simplified syntax: {x!r}")


for _cls in (
    SAtom, SArrow, SBox, HVar, HAVar, HLam, HApp, HBang, HLet, HInspect,
    HRefl, HTrans, HBa, HBb, HTi, HQLam, HQApp, HQLet, HTrpl,
):
    _cls.__str__ = hs_pretty


# ---------------------------------------------------------------------------
# Erasure

def erase_type(ty) -> SimpleType:
    match ty:
        case Atom(name):
            return SAtom(name)
        case Arrow(dom, cod):
            return SArrow(erase_type(dom), erase_type(cod))
        case Audited(_, body):
            return SBox(erase_type(body))
        case _:
            raise TypeError(f"not a type: {ty!r}")


def erase_code(s) -> HsTerm:
    match s:
        case Var(name):
            return HVar(name)
        case AVar(name):
            return HAVar(name)
        case Lam(var, annot, body):
            return HLam(var, erase_type(annot), erase_code(body))
        case App(fun, arg):
            return HApp(erase_code(fun), erase_code(arg))
        case Bang(body):
            return HBang(erase_code(body))
        case Let(var, annot, bound, body):
            return HLet(var, erase_type(annot), erase_code(bound), erase_code(body))
        case Inspect(branches):
            return HInspect(branches.map_payloads(erase_code))
        case _:
            raise TypeError(f"not a code: {s!r}")


def erase_term(m) -> HsTerm:
    match m:
        case TVar(name):
            return HVar(name)
        case TAVar(name):
            return HAVar(name)
        case TLam(var, annot, body):
            return HLam(var, erase_type(annot), erase_term(body))
        case TApp(fun, arg):
            return HApp(erase_term(fun), erase_term(arg))
        case TBang(_, body):
            return HBang(erase_term(body))
        case TLet(var, annot, bound, body):
            return HLet(var, erase_type(annot), erase_term(bound), erase_term(body))
        case TInspect(branches):
            return HInspect(branches.map_payloads(erase_term))
        case _:
            raise TypeError(f"not a term: {m!r}")


def erase_trail(q) -> HsTrail:
    match q:
        case Refl(subject):
            return HRefl(erase_code(subject))
        case Trans(first, second):
            return HTrans(erase_trail(first), erase_trail(second))
        case Ba(var, annot, body, arg):
            return HBa(var, erase_type(annot), erase_code(body), erase_code(arg))
        case Bb(bound, var, annot, body):
            return HBb(erase_code(bound), var, erase_type(annot), erase_code(body))
        case Ti(history, branches):
            return HTi(erase_trail(history), branches.map_payloads(erase_code))
        case QLam(var, annot, inner):
            return HQLam(var, erase_type(annot), erase_trail(inner))
        case QApp(left, right):
            return HQApp(erase_trail(left), erase_trail(right))
        case QLet(left, var, annot, right):
            return HQLet(erase_trail(left), var, erase_type(annot), erase_trail(right))
        case Trpl(branches):
            return HTrpl(branches.map_payloads(erase_trail))
        case _:
            raise TypeError(f"not a trail: {q!r}")


def erase_context(ctx) -> tuple:
    return tuple((name, erase_type(ty)) for name, ty in ctx)


# ---------------------------------------------------------------------------
# Free variables, alpha-equivalence, substitution

def hs_free_vars(x) -> tuple[frozenset, frozenset]:
    match x:
        case HVar(name):
            return frozenset((name,)), frozenset()
        case HAVar(name):
            return frozenset(), frozenset((name,))
        case HLam(var, _, body):
            fs, fa = hs_free_vars(body)
            return fs - {var}, fa
        case HApp(fun, arg):
            ffs, ffa = hs_free_vars(fun)
            afs, afa = hs_free_vars(arg)
            return ffs | afs, ffa | afa
        case HBang(body):
            return hs_free_vars(body)
        case HLet(var, _, bound, body):
            bfs, bfa = hs_free_vars(bound)
            fs, fa = hs_free_vars(body)
            return bfs | fs, bfa | (fa - {var})
        case HInspect(branches):
            fs, fa = frozenset(), frozenset()
            for _, p in branches.items():
                pfs, pfa = hs_free_vars(p)
                fs, fa = fs | pfs, fa | pfa
            return fs, fa
        case _:
            raise TypeError(f"not a simplified term: {x!r}")


def hs_alpha_eq(x, y) -> bool:
    return _haeq(x, y, {}, {}, {}, {})


def _haeq(x, y, ms1, ms2, ma1, ma2) -> bool:
    if type(x) is not type(y):
        return False
    match x:
        case HVar(name):
            return ms1.get(name, ("f", name)) == ms2.get(y.name, ("f", y.name))
        case HAVar(name):
            return ma1.get(name, ("f", name)) == ma2.get(y.name, ("f", y.name))
        case HLam(var, annot, body):
            if annot != y.annot:
                return False
            tok = object()
            return _haeq(body, y.body, {**ms1, var: tok}, {**ms2, y.var: tok}, ma1, ma2)
        case HApp(fun, arg):
            return _haeq(fun, y.fun, ms1, ms2, ma1, ma2) and _haeq(
                arg, y.arg, ms1, ms2, ma1, ma2
            )
        case HBang(body):
            return _haeq(body, y.body, ms1, ms2, ma1, ma2)
        case HLet(var, annot, bound, body):
            if annot != y.annot:
                return False
            if not _haeq(bound, y.bound, ms1, ms2, ma1, ma2):
                return False
            tok = object()
            return _haeq(body, y.body, ms1, ms2, {**ma1, var: tok}, {**ma2, y.var: tok})
        case HInspect(branches):
            if branches.labels() != y.branches.labels():
                return False
            return all(
                _haeq(p1, p2, ms1, ms2, ma1, ma2)
                for (_, p1), (_, p2) in zip(branches.items(), y.branches.items())
            )
        case _:
            raise TypeError(f"not a simplified term: {x!r}")


def hs_canon_key(x) -> str:
    return hs_pretty(_hcanon(x, {}, {}, [0, 0]))


def _hcanon(x, ms, ma, counters):
    match x:
        case HVar(name):
            return HVar(ms.get(name, name))
        case HAVar(name):
            return HAVar(ma.get(name, name))
        case HLam(var, annot, body):
            new = f"?s{counters[0]}"
            counters[0] += 1
            return HLam(new, annot, _hcanon(body, {**ms, var: new}, ma, counters))
        case HApp(fun, arg):
            return HApp(_hcanon(fun, ms, ma, counters), _hcanon(arg, ms, ma, counters))
        case HBang(body):
            return HBang(_hcanon(body, ms, ma, counters))
        case HLet(var, annot, bound, body):
            bound2 = _hcanon(bound, ms, ma, counters)
            new = f"?u{counters[1]}"
            counters[1] += 1
            return HLet(new, annot, bound2, _hcanon(body, ms, {**ma, var: new}, counters))
        case HInspect(branches):
            return HInspect(branches.map_payloads(lambda p: _hcanon(p, ms, ma, counters)))
        case _:
            raise TypeError(f"not a simplified term: {x!r}")


def _hrename(x, ms, ma):
    if not ms and not ma:
        return x
    match x:
        case HVar(name):
            return HVar(ms.get(name, name))
        case HAVar(name):
            return HAVar(ma.get(name, name))
        case HLam(var, annot, body):
            ms2 = {k: v for k, v in ms.items() if k != var}
            return HLam(var, annot, _hrename(body, ms2, ma))
        case HApp(fun, arg):
            return HApp(_hrename(fun, ms, ma), _hrename(arg, ms, ma))
        case HBang(body):
            return HBang(_hrename(body, ms, ma))
        case HLet(var, annot, bound, body):
            ma2 = {k: v for k, v in ma.items() if k != var}
            return HLet(var, annot, _hrename(bound, ms, ma), _hrename(body, ms, ma2))
        case HInspect(branches):
            return HInspect(branches.map_payloads(lambda p: _hrename(p, ms, ma)))
        case _:
            raise TypeError(f"not a simplified term: {x!r}")


def hs_subst_simple(s, a: str, t) -> HsTerm:
    """t for a in s; opaque to bangs, mirroring the full calculus."""
    fs_t, fa_t = hs_free_vars(t)
    return _hss(s, a, t, fs_t, fa_t)


def _hss(s, a, t, fs_t, fa_t):
    match s:
        case HVar(name):
            return t if name == a else s
        case HAVar():
            return s
        case HLam(var, annot, body):
            if var == a:
                return s
            if var in fs_t:
                fs_b, _ = hs_free_vars(body)
                new = fresh(fs_t | fs_b | {a, var}, var)
                body = _hrename(body, {var: new}, {})
                var = new
            return HLam(var, annot, _hss(body, a, t, fs_t, fa_t))
        case HApp(fun, arg):
            return HApp(_hss(fun, a, t, fs_t, fa_t), _hss(arg, a, t, fs_t, fa_t))
        case HBang():
            return s
        case HLet(var, annot, bound, body):
            bound2 = _hss(bound, a, t, fs_t, fa_t)
            if var in fa_t:
                _, fa_b = hs_free_vars(body)
                new = fresh(fa_t | fa_b | {var}, var)
                body = _hrename(body, {}, {var: new})
                var = new
            return HLet(var, annot, bound2, _hss(body, a, t, fs_t, fa_t))
        case HInspect(branches):
            return HInspect(branches.map_payloads(lambda p: _hss(p, a, t, fs_t, fa_t)))
        case _:
            raise TypeError(f"not a simplified term: {s!r}")


def hs_subst_audited(s, u: str, t) -> HsTerm:
    """t for @u in s; enters bangs."""
    fs_t, fa_t = hs_free_vars(t)
    return _hsa(s, u, t, fs_t, fa_t)


def _hsa(s, u, t, fs_t, fa_t):
    match s:
        case HVar():
            return s
        case HAVar(name):
            return t if name == u else s
        case HLam(var, annot, body):
            if var in fs_t:
                fs_b, _ = hs_free_vars(body)
                new = fresh(fs_t | fs_b | {var}, var)
                body = _hrename(body, {var: new}, {})
                var = new
            return HLam(var, annot, _hsa(body, u, t, fs_t, fa_t))
        case HApp(fun, arg):
            return HApp(_hsa(fun, u, t, fs_t, fa_t), _hsa(arg, u, t, fs_t, fa_t))
        case HBang(body):
            return HBang(_hsa(body, u, t, fs_t, fa_t))
        case HLet(var, annot, bound, body):
            bound2 = _hsa(bound, u, t, fs_t, fa_t)
            if var == u:
                return HLet(var, annot, bound2, body)
            if var in fa_t:
                _, fa_b = hs_free_vars(body)
                new = fresh(fa_t | fa_b | {var, u}, var)
                body = _hrename(body, {}, {var: new})
                var = new
            return HLet(var, annot, bound2, _hsa(body, u, t, fs_t, fa_t))
        case HInspect(branches):
            return HInspect(branches.map_payloads(lambda p: _hsa(p, u, t, fs_t, fa_t)))
        case _:
            raise TypeError(f"not a simplified term: {s!r}")


# ---------------------------------------------------------------------------
# Typing

def hs_ttable(label: BranchLabel, b: SimpleType) -> SimpleType:
    if label in (
        BranchLabel.DEFAULT,
        BranchLabel.REFL,
        BranchLabel.BA,
        BranchLabel.BB,
        BranchLabel.TI,
        BranchLabel.TRPL_NIL,
    ):
        return b
    if label is BranchLabel.LAM:
        return SArrow(b, b)
    return SArrow(b, SArrow(b, b))


def hs_infer(delta, gamma, s) -> SimpleType:
    """Infer the simple type of a simplified term."""
    return _hinf(tuple(delta), tuple(gamma), s)


def _hlookup(ctx, name):
    for n, ty in reversed(ctx):
        if n == name:
            return ty
    return None


def _hinf(delta, gamma, s) -> SimpleType:
    match s:
        case HVar(name):
            ty = _hlookup(gamma, name)
            if ty is None:
                raise TypeCheckError("unbound", f"unbound simple variable {name}")
            return ty
        case HAVar(name):
            ty = _hlookup(delta, name)
            if ty is None:
                raise TypeCheckError("unbound", f"unbound audited variable @{name}")
            return ty
        case HLam(var, annot, body):
            return SArrow(annot, _hinf(delta, gamma + ((var, annot),), body))
        case HApp(fun, arg):
            fun_ty = _hinf(delta, gamma, fun)
            if not isinstance(fun_ty, SArrow):
                raise TypeCheckError(
                    "nonfunction", "application of a non-function",
                    actual=hs_pretty(fun_ty),
                )
            arg_ty = _hinf(delta, gamma, arg)
            if arg_ty != fun_ty.dom:
                raise TypeCheckError(
                    "mismatch", "argument type",
                    expected=hs_pretty(fun_ty.dom), actual=hs_pretty(arg_ty),
                )
            return fun_ty.cod
        case HBang(body):
            return SBox(_hinf(delta, (), body))
        case HLet(var, annot, bound, body):
            bound_ty = _hinf(delta, gamma, bound)
            if not isinstance(bound_ty, SBox):
                raise TypeCheckError(
                    "nonaudited", "let expects a boxed bound term",
                    actual=hs_pretty(bound_ty),
                )
            if bound_ty.body != annot:
                raise TypeCheckError(
                    "mismatch", f"annotation on @{var}",
                    expected=hs_pretty(bound_ty.body), actual=hs_pretty(annot),
                )
            return _hinf(delta + ((var, annot),), gamma, body)
        case HInspect(branches):
            if not branches.has_default:
                raise TypeCheckError(
                    "missing-default", "inspection without default branch"
                )
            b = _hinf(delta, (), branches.get(BranchLabel.DEFAULT))
            for lab, payload in branches.items():
                want = hs_ttable(lab, b)
                got = _hinf(delta, (), payload)
                if got != want:
                    raise TypeCheckError(
                        "mismatch", f"branch {lab.token}",
                        expected=hs_pretty(want), actual=hs_pretty(got),
                    )
            return b
        case _:
            raise TypeError(f"not a simplified term: {s!r}")


# ---------------------------------------------------------------------------
# The fold, the trail oracle, and reduction

def hs_fold(q, branches: BranchMap) -> HsTerm:
    """Structural recursion over a trail, simplified-term flavour."""
    from .trails import MissingDefault

    if not branches.has_default:
        raise MissingDefault("branch map has no default branch")
    default = branches.get(BranchLabel.DEFAULT)

    def pick(label):
        return branches.get(label) if label in branches else None

    match q:
        case HRefl():
            b = pick(BranchLabel.REFL)
            return default if b is None else b
        case HTrans(first, second):
            b = pick(BranchLabel.TRANS)
            if b is None:
                return default
            return HApp(HApp(b, hs_fold(first, branches)), hs_fold(second, branches))
        case HBa():
            b = pick(BranchLabel.BA)
            return default if b is None else b
        case HBb():
            b = pick(BranchLabel.BB)
            return default if b is None else b
        case HTi():
            b = pick(BranchLabel.TI)
            return default if b is None else b
        case HQLam(_, _, inner):
            b = pick(BranchLabel.LAM)
            if b is None:
                return default
            return HApp(b, hs_fold(inner, branches))
        case HQApp(left, right):
            b = pick(BranchLabel.APP)
            if b is None:
                return default
            return HApp(HApp(b, hs_fold(left, branches)), hs_fold(right, branches))
        case HQLet(left, _, _, right):
            b = pick(BranchLabel.LET)
            if b is None:
                return default
            return HApp(HApp(b, hs_fold(left, branches)), hs_fold(right, branches))
        case HTrpl(entries):
            if len(entries) == 0:
                b = pick(BranchLabel.TRPL_NIL)
                return default if b is None else b
            b = pick(BranchLabel.TRPL_CONS)
            if b is None:
                return default
            (_, head), *rest = entries.items()
            tail = HTrpl(BranchMap(tuple(rest)))
            return HApp(HApp(b, hs_fold(head, branches)), hs_fold(tail, branches))
        case _:
            raise TypeError(f"not a simplified trail: {q!r}")


def hs_trail_wf(q) -> bool:
    """Structural well-formedness of a simplified trail: right node kinds
    in the right fields, branch maps of trails where expected."""
    match q:
        case HRefl(subject):
            return _hs_term_wf(subject)
        case HTrans(first, second) | HQApp(first, second):
            return hs_trail_wf(first) and hs_trail_wf(second)
        case HBa(_, _, body, arg):
            return _hs_term_wf(body) and _hs_term_wf(arg)
        case HBb(bound, _, _, body):
            return _hs_term_wf(bound) and _hs_term_wf(body)
        case HTi(history, branches):
            return hs_trail_wf(history) and all(
                _hs_term_wf(p) for _, p in branches.items()
            )
        case HQLam(_, _, inner):
            return hs_trail_wf(inner)
        case HQLet(left, _, _, right):
            return hs_trail_wf(left) and hs_trail_wf(right)
        case HTrpl(branches):
            return all(hs_trail_wf(p) for _, p in branches.items())
        case _:
            return False


def _hs_term_wf(x) -> bool:
    return isinstance(x, (HVar, HAVar, HLam, HApp, HBang, HLet, HInspect))


_P = SAtom("P")
_Z = HVar("z")


def _catalog(bound: int) -> tuple:
    """One representative trail per constructor, plus a couple of nested
    shapes, size-filtered.  Size counts trail and term nodes alike."""
    refl = HRefl(_Z)
    ba = HBa("a", _P, HVar("a"), _Z)
    bb = HBb(_Z, "u", _P, HAVar("u"))
    entries = [
        refl,
        ba,
        bb,
        HTrans(refl, ba),
        HQLam("a", _P, ba),
        HQApp(refl, refl),
        HQLet(refl, "u", _P, refl),
        HTi(refl, BranchMap.make({BranchLabel.DEFAULT: _Z})),
        HTrpl(BranchMap.make({})),
        HTrpl(BranchMap.make({BranchLabel.DEFAULT: refl})),
    ]
    return tuple(q for q in entries if hs_trail_size(q) <= bound)


def hs_trail_size(q) -> int:
    match q:
        case HRefl(subject):
            return 1 + _hterm_size(subject)
        case HTrans(first, second) | HQApp(first, second):
            return 1 + hs_trail_size(first) + hs_trail_size(second)
        case HBa(_, _, body, arg):
            return 1 + _hterm_size(body) + _hterm_size(arg)
        case HBb(bound, _, _, body):
            return 1 + _hterm_size(bound) + _hterm_size(body)
        case HTi(history, branches):
            return 1 + hs_trail_size(history) + sum(
                _hterm_size(p) for _, p in branches.items()
            )
        case HQLam(_, _, inner):
            return 1 + hs_trail_size(inner)
        case HQLet(left, _, _, right):
            return 1 + hs_trail_size(left) + hs_trail_size(right)
        case HTrpl(branches):
            return 1 + sum(hs_trail_size(p) for _, p in branches.items())
        case _:
            raise TypeError(f"not a simplified trail: {q!r}")


def _hterm_size(x) -> int:
    match x:
        case HVar() | HAVar():
            return 1
        case HLam(_, _, body) | HBang(body):
            return 1 + _hterm_size(body)
        case HApp(fun, arg):
            return 1 + _hterm_size(fun) + _hterm_size(arg)
        case HLet(_, _, bound, body):
            return 1 + _hterm_size(bound) + _hterm_size(body)
        case HInspect(branches):
            return 1 + sum(_hterm_size(p) for _, p in branches.items())
        case _:
            raise TypeError(f"not a simplified term: {x!r}")


@dataclass(frozen=True)
class TrailOracle:
    """Supplies the trails an inspection may consume.

    The default oracle yields a fixed catalog covering every trail
    constructor within the size bound, plus `samples` seeded random
    trails; it is stateless given (seed, bound).  `injected` overrides
    everything, for differential tests that need one specific trail.
    """

    bound: int = 7
    seed: int = 0
    samples: int = 0
    injected: tuple = None

    def trails(self) -> tuple:
        if self.injected is not None:
            return self.injected
        out = _catalog(self.bound)
        if self.samples:
            rng = random.Random(self.seed)
            out = out + tuple(
                _random_trail(rng, self.bound) for _ in range(self.samples)
            )
        return out


def _random_trail(rng: random.Random, budget: int):
    if budget <= 2:
        return HRefl(_Z)
    kind = rng.choice(("refl", "ba", "bb", "trans", "lam", "app", "let", "ti", "trpl"))
    half = max(2, (budget - 1) // 2)
    match kind:
        case "refl":
            return HRefl(_Z)
        case "ba":
            return HBa("a", _P, HVar("a"), _Z)
        case "bb":
            return HBb(_Z, "u", _P, HAVar("u"))
        case "trans":
            return HTrans(_random_trail(rng, half), _random_trail(rng, half))
        case "lam":
            return HQLam("a", _P, _random_trail(rng, budget - 1))
        case "app":
            return HQApp(_random_trail(rng, half), _random_trail(rng, half))
        case "let":
            return HQLet(_random_trail(rng, half), "u", _P, _random_trail(rng, half))
        case "ti":
            return HTi(
                _random_trail(rng, budget - 2),
                BranchMap.make({BranchLabel.DEFAULT: _Z}),
            )
        case "trpl":
            return HTrpl(BranchMap.make({BranchLabel.DEFAULT: _random_trail(rng, budget - 1)}))


def hs_step(s, oracle: TrailOracle = TrailOracle()) -> list:
    """All one-step reducts: beta, let-bang, and one inspection contractum
    per oracle trail, closed over every context (bangs included)."""
    out = []
    for sub, wrap in _hs_positions(s):
        match sub:
            case HApp(HLam(var, _, body), arg):
                out.append(wrap(hs_subst_simple(body, var, arg)))
            case HLet(var, _, HBang(inner), body):
                out.append(wrap(hs_subst_audited(body, var, inner)))
            case HInspect(branches):
                for q in oracle.trails():
                    out.append(wrap(hs_fold(q, branches)))
    return out


def _hs_positions(x, wrap=lambda r: r):
    yield x, wrap
    match x:
        case HLam(var, annot, body):
            yield from _hs_positions(body, lambda r, w=wrap: w(HLam(var, annot, r)))
        case HApp(fun, arg):
            yield from _hs_positions(fun, lambda r, w=wrap, a=arg: w(HApp(r, a)))
            yield from _hs_positions(arg, lambda r, w=wrap, f=fun: w(HApp(f, r)))
        case HBang(body):
            yield from _hs_positions(body, lambda r, w=wrap: w(HBang(r)))
        case HLet(var, annot, bound, body):
            yield from _hs_positions(
                bound, lambda r, w=wrap, b=body: w(HLet(var, annot, r, b))
            )
            yield from _hs_positions(
                body, lambda r, w=wrap, b=bound: w(HLet(var, annot, b, r))
            )
        case HInspect(branches):
            for lab, payload in branches.items():
                def rebuild(r, w=wrap, lab=lab, br=branches):
                    return w(
                        HInspect(
                            BranchMap(
                                tuple((l, r if l is lab else p) for l, p in br.items())
                            )
                        )
                    )

                yield from _hs_positions(payload, rebuild)


def hs_is_normal(s) -> bool:
    """Inspections always reduce (the oracle is never empty), so normal
    means no beta, let-bang, or inspection node anywhere."""
    for sub, _ in _hs_positions(s):
        match sub:
            case HApp(HLam(), _) | HLet(_, _, HBang(), _) | HInspect():
                return False
    return True


@dataclass
class HsGraph:
    root: str
    nodes: dict
    edges: list
    complete: bool = True

    def is_acyclic(self) -> bool:
        adjacency = {}
        for s, d in self.edges:
            adjacency.setdefault(s, []).append(d)
        state = dict.fromkeys(self.nodes, 0)
        for start in self.nodes:
            if state[start]:
                continue
            stack = [(start, iter(adjacency.get(start, ())))]
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
        return max(d for _, d in self.nodes.values())


def hs_reduction_graph(
    s, oracle: TrailOracle = TrailOracle(), fuel: int = 10000, max_nodes: int = 50000
) -> HsGraph:
    """BFS closure of hs_step; nodes keyed by alpha-canonical print."""
    from .reduction import BoundExceeded

    root_key = hs_canon_key(s)
    graph = HsGraph(root=root_key, nodes={root_key: (s, 0)}, edges=[])
    queue = [root_key]
    while queue:
        key = queue.pop(0)
        term, depth = graph.nodes[key]
        succs = hs_step(term, oracle)
        if not succs:
            continue
        if depth >= fuel:
            graph.complete = False
            continue
        for term2 in succs:
            key2 = hs_canon_key(term2)
            if key2 not in graph.nodes:
                if len(graph.nodes) >= max_nodes:
                    graph.complete = False
                    raise BoundExceeded(graph, f"graph exceeds {max_nodes} nodes")
                graph.nodes[key2] = (term2, depth + 1)
                queue.append(key2)
            graph.edges.append((key, key2))
    return graph


# ---------------------------------------------------------------------------
# Differential check: one full-calculus step is simulated under erasure

def check_erasure_simulation(m, m2, info) -> bool:
    """True iff erase(m) steps to erase(m2) in the simplified calculus.

    Beta and let-bang steps need no oracle; inspection steps inject the
    erasure of the trail carried by the redex's enclosing bang, which is
    exactly the trail the full calculus folded.
    """
    source = erase_term(m)
    target = erase_term(m2)
    if info.rule == "ti":
        q = _trail_at(m, info.bang_path)
        oracle = TrailOracle(injected=(erase_trail(q),))
    else:
        oracle = TrailOracle(injected=())
    return any(hs_alpha_eq(target, cand) for cand in hs_step(source, oracle))


def _trail_at(m, bang_path):
    node = m
    for key in bang_path:
        match node:
            case TLam(_, _, body) if key == "body":
                node = body
            case TBang(_, body) if key == "body":
                node = body
            case TApp(fun, arg):
                node = fun if key == "fun" else arg
            case TLet(_, _, bound, body):
                node = bound if key == "bound" else body
            case TInspect(branches):
                node = next(p for lab, p in branches.items() if lab.token == key)
            case _:
                raise ValueError(f"bad path step {key!r} at {type(node).__name__}")
    if not isinstance(node, TBang):
        raise ValueError("bang path does not end at a bang")
    return node.trail
