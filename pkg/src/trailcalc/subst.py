"""Capture-avoiding substitution, in all four families.

* simple-variable substitution on codes, types, trails, and terms
  (history-free; bangs and binder annotations are opaque to it);
* audited-variable substitution on codes, types, and trails (enters
  bangs and annotations);
* the paired audited-variable substitution on terms, producing both the
  substituted term and a trail witnessing the replacement.

Binder clauses freshen eagerly whenever a side condition would be
violated, so callers never need pre-freshened input.

The asymmetry between the two families is deliberate.  Simple variables
may not occur under a bang in any well-typed expression, so leaving
bangs (and the inert annotation codes) untouched loses nothing and keeps
result types stable.  Audited substitution replaces a variable by a
code wherever codes are expected - including inside annotations and
trail subjects - which is exactly what the audited-type substitution in
the let typing rule requires of it.
"""

from __future__ import annotations

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
    TypeExpr,
    Var,
    alpha_eq,
    free_audited,
    free_simple,
    free_vars,
    fresh,
)

# Validate AuditedTermSubst coherence on construction.  Reduction always
# builds coherent tuples; enable when exercising external callers.
DEBUG_VALIDATE = False


# ---------------------------------------------------------------------------
# Renaming.  Only ever called with fresh target names, so a shadowing-aware
# traversal suffices; it enters annotations, subjects, and trails alike.

def rename(x, ms: dict, ma: dict):
    if not ms and not ma:
        return x
    match x:
        case Atom():
            return x
        case Arrow(dom, cod):
            return Arrow(rename(dom, ms, ma), rename(cod, ms, ma))
        case Audited(code, body):
            return Audited(rename(code, ms, ma), rename(body, ms, ma))
        case Var(name):
            return Var(ms.get(name, name))
        case TVar(name):
            return TVar(ms.get(name, name))
        case AVar(name):
            return AVar(ma.get(name, name))
        case TAVar(name):
            return TAVar(ma.get(name, name))
        case Lam(var, annot, body):
            ms2 = _drop(ms, var)
            return Lam(var, rename(annot, ms, ma), rename(body, ms2, ma))
        case TLam(var, annot, body):
            ms2 = _drop(ms, var)
            return TLam(var, rename(annot, ms, ma), rename(body, ms2, ma))
        case App(fun, arg):
            return App(rename(fun, ms, ma), rename(arg, ms, ma))
        case TApp(fun, arg):
            return TApp(rename(fun, ms, ma), rename(arg, ms, ma))
        case Bang(body):
            return Bang(rename(body, ms, ma))
        case TBang(trail, body):
            return TBang(rename(trail, ms, ma), rename(body, ms, ma))
        case Let(var, annot, bound, body):
            ma2 = _drop(ma, var)
            return Let(var, rename(annot, ms, ma), rename(bound, ms, ma), rename(body, ms, ma2))
        case TLet(var, annot, bound, body):
            ma2 = _drop(ma, var)
            return TLet(var, rename(annot, ms, ma), rename(bound, ms, ma), rename(body, ms, ma2))
        case Inspect(branches):
            return Inspect(branches.map_payloads(lambda p: rename(p, ms, ma)))
        case TInspect(branches):
            return TInspect(branches.map_payloads(lambda p: rename(p, ms, ma)))
        case Trpl(branches):
            return Trpl(branches.map_payloads(lambda p: rename(p, ms, ma)))
        case Refl(subject):
            return Refl(rename(subject, ms, ma))
        case Trans(first, second):
            return Trans(rename(first, ms, ma), rename(second, ms, ma))
        case Ba(var, annot, body, arg):
            ms2 = _drop(ms, var)
            return Ba(var, rename(annot, ms, ma), rename(body, ms2, ma), rename(arg, ms, ma))
        case Bb(bound, var, annot, body):
            ma2 = _drop(ma, var)
            return Bb(rename(bound, ms, ma), var, rename(annot, ms, ma), rename(body, ms, ma2))
        case Ti(history, branches):
            return Ti(rename(history, ms, ma), branches.map_payloads(lambda p: rename(p, ms, ma)))
        case QLam(var, annot, inner):
            ms2 = _drop(ms, var)
            return QLam(var, rename(annot, ms, ma), rename(inner, ms2, ma))
        case QLet(left, var, annot, right):
            ma2 = _drop(ma, var)
            return QLet(rename(left, ms, ma), var, rename(annot, ms, ma), rename(right, ms, ma2))
        case _:
            raise TypeError(f"not syntax: {x!r}")


def _drop(m: dict, key: str) -> dict:
    if key not in m:
        return m
    m2 = dict(m)
    del m2[key]
    return m2


def _freshen_simple(var, body, avoid, *extra):
    taken = set(avoid)
    for e in extra:
        taken |= free_simple(e)
    taken |= free_simple(body)
    taken.add(var)
    new = fresh(taken, var)
    return new, rename(body, {var: new}, {})


def _freshen_audited(var, body, avoid, *extra):
    taken = set(avoid)
    for e in extra:
        taken |= free_audited(e)
    taken |= free_audited(body)
    taken.add(var)
    new = fresh(taken, var)
    return new, rename(body, {}, {var: new})


# ---------------------------------------------------------------------------
# Simple-variable substitution: r[t/a].  Bangs are opaque, annotations inert.

def subst_code_simple(r, a: str, t):
    fs_t, fa_t = free_vars(t)
    return _gs(r, a, t, fs_t, fa_t)


def _gs(r, a, t, fs_t, fa_t):
    match r:
        case Var(name):
            return t if name == a else r
        case AVar():
            return r
        case Lam(var, annot, body):
            if var == a:
                return r
            if var in fs_t:
                var, body = _freshen_simple(var, body, fs_t | {a})
            return Lam(var, annot, _gs(body, a, t, fs_t, fa_t))
        case App(fun, arg):
            return App(_gs(fun, a, t, fs_t, fa_t), _gs(arg, a, t, fs_t, fa_t))
        case Bang():
            return r
        case Let(var, annot, bound, body):
            bound2 = _gs(bound, a, t, fs_t, fa_t)
            if var in fa_t:
                var, body = _freshen_audited(var, body, fa_t)
            return Let(var, annot, bound2, _gs(body, a, t, fs_t, fa_t))
        case Inspect(branches):
            return Inspect(branches.map_payloads(lambda p: _gs(p, a, t, fs_t, fa_t)))
        case _:
            raise TypeError(f"not a code: {r!r}")


def subst_type_simple(ty: TypeExpr, a: str, t) -> TypeExpr:
    match ty:
        case Atom():
            return ty
        case Arrow(dom, cod):
            return Arrow(subst_type_simple(dom, a, t), subst_type_simple(cod, a, t))
        case Audited(code, body):
            return Audited(subst_code_simple(code, a, t), subst_type_simple(body, a, t))
        case _:
            raise TypeError(f"not a type: {ty!r}")


def subst_trail_simple(q, a: str, t):
    fs_t, fa_t = free_vars(t)
    return _qs(q, a, t, fs_t, fa_t)


def _qs(q, a, t, fs_t, fa_t):
    rec = lambda x: _qs(x, a, t, fs_t, fa_t)
    code = lambda s: _gs(s, a, t, fs_t, fa_t)
    match q:
        case Refl(subject):
            return Refl(code(subject))
        case Trans(first, second):
            return Trans(rec(first), rec(second))
        case Ba(var, annot, body, arg):
            arg2 = code(arg)
            if var == a:
                return Ba(var, annot, body, arg2)
            if var in fs_t:
                var, body = _freshen_simple(var, body, fs_t | {a})
            return Ba(var, annot, code(body), arg2)
        case Bb(bound, var, annot, body):
            bound2 = code(bound)
            if var in fa_t:
                var, body = _freshen_audited(var, body, fa_t)
            return Bb(bound2, var, annot, code(body))
        case Ti(history, branches):
            return Ti(rec(history), branches.map_payloads(code))
        case QLam(var, annot, inner):
            if var == a:
                return q
            if var in fs_t:
                var, inner = _freshen_simple(var, inner, fs_t | {a})
            return QLam(var, annot, rec(inner))
        case QApp(left, right):
            return QApp(rec(left), rec(right))
        case QLet(left, var, annot, right):
            left2 = rec(left)
            if var in fa_t:
                var, right = _freshen_audited(var, right, fa_t)
            return QLet(left2, var, annot, rec(right))
        case Trpl(branches):
            return Trpl(branches.map_payloads(rec))
        case _:
            raise TypeError(f"not a trail: {q!r}")


# ---------------------------------------------------------------------------
# Audited-variable substitution on codes/types/trails: r[t/u].
# Enters bangs and annotations.

def subst_code_audited(r, u: str, t):
    fs_t, fa_t = free_vars(t)
    return _ga(r, u, t, fs_t, fa_t)


def _ga(r, u, t, fs_t, fa_t):
    match r:
        case Var():
            return r
        case AVar(name):
            return t if name == u else r
        case Lam(var, annot, body):
            annot2 = _ta(annot, u, t, fs_t, fa_t)
            if var in fs_t:
                var, body = _freshen_simple(var, body, fs_t)
            return Lam(var, annot2, _ga(body, u, t, fs_t, fa_t))
        case App(fun, arg):
            return App(_ga(fun, u, t, fs_t, fa_t), _ga(arg, u, t, fs_t, fa_t))
        case Bang(body):
            return Bang(_ga(body, u, t, fs_t, fa_t))
        case Let(var, annot, bound, body):
            annot2 = _ta(annot, u, t, fs_t, fa_t)
            bound2 = _ga(bound, u, t, fs_t, fa_t)
            if var == u:
                return Let(var, annot2, bound2, body)
            if var in fa_t:
                var, body = _freshen_audited(var, body, fa_t | {u})
            return Let(var, annot2, bound2, _ga(body, u, t, fs_t, fa_t))
        case Inspect(branches):
            return Inspect(branches.map_payloads(lambda p: _ga(p, u, t, fs_t, fa_t)))
        case _:
            raise TypeError(f"not a code: {r!r}")


def subst_type_audited(ty: TypeExpr, u: str, t) -> TypeExpr:
    fs_t, fa_t = free_vars(t)
    return _ta(ty, u, t, fs_t, fa_t)


def _ta(ty, u, t, fs_t, fa_t):
    match ty:
        case Atom():
            return ty
        case Arrow(dom, cod):
            return Arrow(_ta(dom, u, t, fs_t, fa_t), _ta(cod, u, t, fs_t, fa_t))
        case Audited(code, body):
            return Audited(_ga(code, u, t, fs_t, fa_t), _ta(body, u, t, fs_t, fa_t))
        case _:
            raise TypeError(f"not a type: {ty!r}")


def subst_trail_audited(q, u: str, t):
    fs_t, fa_t = free_vars(t)
    return _qa(q, u, t, fs_t, fa_t)


def _qa(q, u, t, fs_t, fa_t):
    rec = lambda x: _qa(x, u, t, fs_t, fa_t)
    code = lambda s: _ga(s, u, t, fs_t, fa_t)
    ty = lambda s: _ta(s, u, t, fs_t, fa_t)
    match q:
        case Refl(subject):
            return Refl(code(subject))
        case Trans(first, second):
            return Trans(rec(first), rec(second))
        case Ba(var, annot, body, arg):
            annot2 = ty(annot)
            arg2 = code(arg)
            if var in fs_t:
                var, body = _freshen_simple(var, body, fs_t)
            return Ba(var, annot2, code(body), arg2)
        case Bb(bound, var, annot, body):
            annot2 = ty(annot)
            bound2 = code(bound)
            if var == u:
                return Bb(bound2, var, annot2, body)
            if var in fa_t:
                var, body = _freshen_audited(var, body, fa_t | {u})
            return Bb(bound2, var, annot2, code(body))
        case Ti(history, branches):
            return Ti(rec(history), branches.map_payloads(code))
        case QLam(var, annot, inner):
            annot2 = ty(annot)
            if var in fs_t:
                var, inner = _freshen_simple(var, inner, fs_t)
            return QLam(var, annot2, rec(inner))
        case QApp(left, right):
            return QApp(rec(left), rec(right))
        case QLet(left, var, annot, right):
            annot2 = ty(annot)
            left2 = rec(left)
            if var == u:
                return QLet(left2, var, annot2, right)
            if var in fa_t:
                var, right = _freshen_audited(var, right, fa_t | {u})
            return QLet(left2, var, annot2, rec(right))
        case Trpl(branches):
            return Trpl(branches.map_payloads(rec))
        case _:
            raise TypeError(f"not a trail: {q!r}")


# ---------------------------------------------------------------------------
# Simple-variable substitution on terms: M[N/a].  Mirrors the code clauses;
# in particular whole bang terms, trail included, are left untouched.

def subst_term_simple(m, a: str, n):
    fs_n, fa_n = free_vars(n)
    return _ts(m, a, n, fs_n, fa_n)


def _ts(m, a, n, fs_n, fa_n):
    match m:
        case TVar(name):
            return n if name == a else m
        case TAVar():
            return m
        case TLam(var, annot, body):
            if var == a:
                return m
            if var in fs_n:
                var, body = _freshen_simple(var, body, fs_n | {a})
            return TLam(var, annot, _ts(body, a, n, fs_n, fa_n))
        case TApp(fun, arg):
            return TApp(_ts(fun, a, n, fs_n, fa_n), _ts(arg, a, n, fs_n, fa_n))
        case TBang():
            return m
        case TLet(var, annot, bound, body):
            bound2 = _ts(bound, a, n, fs_n, fa_n)
            if var in fa_n:
                var, body = _freshen_audited(var, body, fa_n)
            return TLet(var, annot, bound2, _ts(body, a, n, fs_n, fa_n))
        case TInspect(branches):
            return TInspect(branches.map_payloads(lambda p: _ts(p, a, n, fs_n, fa_n)))
        case _:
            raise TypeError(f"not a term: {m!r}")


# ---------------------------------------------------------------------------
# Audited-variable substitution on terms.

@dataclass(frozen=True)
class AuditedTermSubst:
    """u := (term, history, origin): replace u by `term`, whose evaluation
    from the code `origin` is witnessed by `history`.

    Intended use has tgt(history) alpha-equal to code_of(term) and origin
    alpha-equal to src(history); reduction always constructs such tuples.
    """

    var: str
    term: object   # Term
    history: object  # Trail
    origin: object  # Code

    def validate(self) -> None:
        from .trails import code_of, src, tgt

        if not alpha_eq(tgt(self.history), code_of(self.term)):
            raise ValueError("history target does not match the substituted term")
        if not alpha_eq(self.origin, src(self.history)):
            raise ValueError("origin does not match the history source")


def subst_term_audited(m, delta: AuditedTermSubst):
    """Apply an audited substitution to a term, returning the pair
    (substituted term, witnessing trail).

    The trail component records, for every replaced occurrence, the
    history carried by the substitution, embedded at the corresponding
    congruence position; occurrences under a bang instead extend that
    bang's own trail, and the witness for the bang node is reflexivity.
    """
    if DEBUG_VALIDATE:
        delta.validate()
    fs = frozenset().union(
        free_simple(delta.term), free_simple(delta.history), free_simple(delta.origin)
    )
    fa = frozenset().union(
        free_audited(delta.term), free_audited(delta.history), free_audited(delta.origin)
    )
    return _lx(m, delta.var, delta.term, delta.history, delta.origin, fs, fa)


def _lx(m, u, n, q, t, fs, fa):
    match m:
        case TVar(name):
            return m, Refl(Var(name))
        case TAVar(name):
            if name == u:
                return n, q
            return m, Refl(AVar(name))
        case TLam(var, annot, body):
            if var in fs:
                var, body = _freshen_simple(var, body, fs)
            annot2 = subst_type_audited(annot, u, t)
            body2, qb = _lx(body, u, n, q, t, fs, fa)
            return TLam(var, annot2, body2), QLam(var, annot2, qb)
        case TApp(fun, arg):
            fun2, qf = _lx(fun, u, n, q, t, fs, fa)
            arg2, qa = _lx(arg, u, n, q, t, fs, fa)
            return TApp(fun2, arg2), QApp(qf, qa)
        case TBang(trail, body):
            from .trails import src

            trail2 = subst_trail_audited(trail, u, t)
            body2, qb = _lx(body, u, n, q, t, fs, fa)
            witness = Refl(Bang(subst_code_audited(src(trail), u, t)))
            return TBang(Trans(trail2, qb), body2), witness
        case TLet(var, annot, bound, body):
            if var == u or var in fa:
                var, body = _freshen_audited(var, body, fa | {u})
            annot2 = subst_type_audited(annot, u, t)
            bound2, qb = _lx(bound, u, n, q, t, fs, fa)
            body2, qs = _lx(body, u, n, q, t, fs, fa)
            return TLet(var, annot2, bound2, body2), QLet(qb, var, annot2, qs)
        case TInspect(branches):
            pairs = [(lab, _lx(p, u, n, q, t, fs, fa)) for lab, p in branches.items()]
            term_map = BranchMap.make([(lab, tm) for lab, (tm, _) in pairs])
            trail_map = BranchMap.make([(lab, tr) for lab, (_, tr) in pairs])
            return TInspect(term_map), Trpl(trail_map)
        case _:
            raise TypeError(f"not a term: {m!r}")
