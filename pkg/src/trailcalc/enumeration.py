"""Bounded exhaustive enumeration of well-typed codes, terms, and trails.

The metatheory suites quantify over "every well-typed value up to
generator size k"; this module defines that generator, and therefore the
quantification domain, precisely:

* size is the number of code/term/trail constructor nodes; variables
  count one, type annotations count zero;
* binder annotations are drawn from the fixed universe {P, P -> P};
* inspection branch maps are either {default} or {label, default} with
  the extra label one of refl, trans, lam (enough to exercise constant,
  binary, and unary fold recursion);
* trail-level branch maps (ti arguments and trpl entries) hold a single
  default entry;
* binders are named positionally (x0, x1, ... and u0, u1, ...), so each
  alpha-class is produced exactly once.

Enumeration is exhaustive within those policies, deterministic, and
yields each value exactly once.  The `seed` parameter accepted by the
CLI front end is reserved; ordering does not depend on it.
"""

from __future__ import annotations

from functools import lru_cache

from .subst import subst_code_audited, subst_code_simple, subst_type_audited
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
    Ti,
    Trans,
    Trpl,
    Var,
    canon_key,
)

P = Atom("P")
ANNOTATION_UNIVERSE = (P, Arrow(P, P))
EXTRA_BRANCH_LABELS = (BranchLabel.REFL, BranchLabel.TRANS, BranchLabel.LAM)


def code_size(s) -> int:
    """Constructor nodes of a code; annotations are free."""
    match s:
        case Var() | AVar():
            return 1
        case Lam(_, _, body) | Bang(body):
            return 1 + code_size(body)
        case App(fun, arg):
            return 1 + code_size(fun) + code_size(arg)
        case Let(_, _, bound, body):
            return 1 + code_size(bound) + code_size(body)
        case Inspect(branches):
            return 1 + sum(code_size(p) for _, p in branches.items())
        case _:
            raise TypeError(f"not a code: {s!r}")


def trail_size(q) -> int:
    """Constructor nodes of a trail plus its embedded codes."""
    match q:
        case Refl(subject):
            return 1 + code_size(subject)
        case Trans(first, second) | QApp(first, second):
            return 1 + trail_size(first) + trail_size(second)
        case Ba(_, _, body, arg):
            return 1 + code_size(body) + code_size(arg)
        case Bb(bound, _, _, body):
            return 1 + code_size(bound) + code_size(body)
        case Ti(history, branches):
            return 1 + trail_size(history) + sum(
                code_size(p) for _, p in branches.items()
            )
        case QLam(_, _, inner):
            return 1 + trail_size(inner)
        case QLet(left, _, _, right):
            return 1 + trail_size(left) + trail_size(right)
        case Trpl(branches):
            return 1 + sum(trail_size(p) for _, p in branches.items())
        case _:
            raise TypeError(f"not a trail: {q!r}")


def _tkey(ty) -> str:
    return canon_key(ty)


# ---------------------------------------------------------------------------
# Codes.  Contexts are tuples of types; the variable at gamma position i is
# named x{i}, at delta position j u{j}.

@lru_cache(maxsize=None)
def _codes_exact(size: int, delta: tuple, gamma: tuple) -> tuple:
    """All well-typed codes of exactly `size` under positional contexts.
    Entries are (code, type, type canon key)."""
    if size <= 0:
        return ()
    out = []
    if size == 1:
        for i, ty in enumerate(gamma):
            out.append((Var(f"x{i}"), ty, _tkey(ty)))
        for j, ty in enumerate(delta):
            out.append((AVar(f"u{j}"), ty, _tkey(ty)))
        return tuple(out)

    inner = size - 1

    # lambda
    for annot in ANNOTATION_UNIVERSE:
        var = f"x{len(gamma)}"
        for body, body_ty, _ in _codes_exact(inner, delta, gamma + (annot,)):
            ty = Arrow(annot, body_ty)
            out.append((Lam(var, annot, body), ty, _tkey(ty)))

    # application
    for left in range(1, inner):
        right = inner - left
        fun_entries = [e for e in _codes_exact(left, delta, gamma) if isinstance(e[1], Arrow)]
        if not fun_entries:
            continue
        args_by_key = {}
        for arg, arg_ty, arg_key in _codes_exact(right, delta, gamma):
            args_by_key.setdefault(arg_key, []).append(arg)
        for fun, fun_ty, _ in fun_entries:
            for arg in args_by_key.get(_tkey(fun_ty.dom), ()):
                out.append((App(fun, arg), fun_ty.cod, _tkey(fun_ty.cod)))

    # bang (body under empty simple context)
    for body, body_ty, _ in _codes_exact(inner, delta, ()):
        ty = Audited(body, body_ty)
        out.append((Bang(body), ty, _tkey(ty)))

    # let-bang
    var = f"u{len(delta)}"
    for left in range(1, inner):
        right = inner - left
        for bound, bound_ty, _ in _codes_exact(left, delta, gamma):
            if not isinstance(bound_ty, Audited):
                continue
            annot = bound_ty.body
            for body, body_ty, _ in _codes_exact(right, delta + (annot,), gamma):
                ty = subst_type_audited(body_ty, var, bound_ty.code)
                out.append((Let(var, annot, bound, body), ty, _tkey(ty)))

    # inspection
    out.extend(_inspections_exact(size, delta))

    return tuple(out)


@lru_cache(maxsize=None)
def _codes_by_type(size: int, delta: tuple, gamma: tuple) -> dict:
    index = {}
    for code, ty, key in _codes_exact(size, delta, gamma):
        index.setdefault(key, []).append((code, ty))
    return index


def _inspections_exact(size: int, delta: tuple):
    """Inspect nodes of exactly `size`.  Branches live under Delta;empty
    and must fit the branch-type table, seeded from the default branch."""
    from .typecheck import ttable

    out = []
    inner = size - 1
    # default only
    for d, b_ty, _ in _codes_exact(inner, delta, ()):
        branches = BranchMap.make({BranchLabel.DEFAULT: d})
        out.append((Inspect(branches), b_ty, _tkey(b_ty)))
    # one extra label
    for label in EXTRA_BRANCH_LABELS:
        for left in range(1, inner):
            right = inner - left
            for d, b_ty, b_key in _codes_exact(right, delta, ()):
                want = _tkey(ttable(label, b_ty))
                for payload, _ in _codes_by_type(left, delta, ()).get(want, ()):
                    branches = BranchMap.make(
                        {label: payload, BranchLabel.DEFAULT: d}
                    )
                    out.append((Inspect(branches), b_ty, b_key))
    return out


def enumerate_codes(max_size: int, delta=(), gamma=()) -> list:
    """All well-typed codes up to `max_size` under the given contexts
    (types only; variables are positional).  Returns (code, type) pairs
    in deterministic order, each exactly once."""
    out = []
    for size in range(1, max_size + 1):
        out.extend((c, ty) for c, ty, _ in _codes_exact(size, tuple(delta), tuple(gamma)))
    return out


def enumerate_closed_codes(max_size: int) -> list:
    return enumerate_codes(max_size)


def enumerate_bang_rooted(max_size: int) -> list:
    """Closed bang-rooted codes up to `max_size`, as (code, type) pairs."""
    return [(c, ty) for c, ty in enumerate_codes(max_size) if isinstance(c, Bang)]


def context_for(delta_types, gamma_types):
    """Positional named contexts matching the enumerator's conventions."""
    delta = tuple((f"u{j}", ty) for j, ty in enumerate(delta_types))
    gamma = tuple((f"x{i}", ty) for i, ty in enumerate(gamma_types))
    return delta, gamma


# ---------------------------------------------------------------------------
# Trails.  Entries are (trail, source, target, type) with sources/targets
# synthesized during generation, so every produced trail is well-typed.

@lru_cache(maxsize=None)
def _trails_exact(size: int, delta: tuple, gamma: tuple) -> tuple:
    if size <= 1:
        return ()
    out = []
    inner = size - 1

    # refl
    for code, ty, key in _codes_exact(inner, delta, gamma):
        out.append(_entry(Refl(code), code, code, ty, key))

    # trans: tie target of the first to source of the second
    for left in range(2, inner - 1):
        right = inner - left
        firsts = _trails_by_src(left, delta, gamma)
        for q2, s2, t2, ty2, tykey2 in _trails_exact(right, delta, gamma):
            skey = canon_key(s2)
            for q1, s1, t1, ty1, tykey1 in firsts.get(skey, ()):
                if tykey1 != tykey2:
                    continue
                out.append(_entry(Trans(q1, q2), s1, t2, ty1, tykey1))

    # ba
    var = f"x{len(gamma)}"
    for annot in ANNOTATION_UNIVERSE:
        akey = _tkey(annot)
        for left in range(1, inner):
            right = inner - left
            bodies = _codes_exact(left, delta, gamma + (annot,))
            if not bodies:
                continue
            args = _codes_by_type(right, delta, gamma).get(akey, ())
            for body, body_ty, body_key in bodies:
                for arg, _ in args:
                    out.append(
                        _entry(
                            Ba(var, annot, body, arg),
                            App(Lam(var, annot, body), arg),
                            subst_code_simple(body, var, arg),
                            body_ty,
                            body_key,
                        )
                    )

    # bb
    uvar = f"u{len(delta)}"
    for left in range(1, inner):
        right = inner - left
        for bound, bound_ty, _ in _codes_exact(left, delta, ()):
            for body, body_ty, _ in _codes_exact(right, delta + (bound_ty,), gamma):
                res_ty = subst_type_audited(body_ty, uvar, bound)
                out.append(
                    _entry(
                        Bb(bound, uvar, bound_ty, body),
                        Let(uvar, bound_ty, Bang(bound), body),
                        subst_code_audited(body, uvar, bound),
                        res_ty,
                        _tkey(res_ty),
                    )
                )

    # ti: any inner trail, single-default branch map
    from .trails import fold_code

    for left in range(2, inner):
        right = inner - left
        inner_trails = _trails_exact(left, delta, ())
        if not inner_trails:
            continue
        for d, b_ty, b_key in _codes_exact(right, delta, ()):
            theta = BranchMap.make({BranchLabel.DEFAULT: d})
            for q, *_ in inner_trails:
                out.append(
                    _entry(
                        Ti(q, theta),
                        Inspect(theta),
                        fold_code(q, theta),
                        b_ty,
                        b_key,
                    )
                )

    # tlam
    var = f"x{len(gamma)}"
    for annot in ANNOTATION_UNIVERSE:
        for q, s, t, ty, _ in _trails_exact(inner, delta, gamma + (annot,)):
            res_ty = Arrow(annot, ty)
            out.append(
                _entry(
                    QLam(var, annot, q),
                    Lam(var, annot, s),
                    Lam(var, annot, t),
                    res_ty,
                    _tkey(res_ty),
                )
            )

    # tapp
    for left in range(2, inner - 1):
        right = inner - left
        funs = [
            e for e in _trails_exact(left, delta, gamma) if isinstance(e[3], Arrow)
        ]
        if not funs:
            continue
        args_by_key = {}
        for e in _trails_exact(right, delta, gamma):
            args_by_key.setdefault(e[4], []).append(e)
        for q1, s1, t1, ty1, _ in funs:
            for q2, s2, t2, _, _ in args_by_key.get(_tkey(ty1.dom), ()):
                out.append(
                    _entry(
                        QApp(q1, q2),
                        App(s1, s2),
                        App(t1, t2),
                        ty1.cod,
                        _tkey(ty1.cod),
                    )
                )

    # tlet
    uvar = f"u{len(delta)}"
    for left in range(2, inner - 1):
        right = inner - left
        bounds = [
            e for e in _trails_exact(left, delta, gamma) if isinstance(e[3], Audited)
        ]
        for q1, s1, t1, ty1, _ in bounds:
            annot = ty1.body
            for q2, s2, t2, ty2, _ in _trails_exact(right, delta + (annot,), gamma):
                res_ty = subst_type_audited(ty2, uvar, ty1.code)
                out.append(
                    _entry(
                        QLet(q1, uvar, annot, q2),
                        Let(uvar, annot, s1, s2),
                        Let(uvar, annot, t1, t2),
                        res_ty,
                        _tkey(res_ty),
                    )
                )

    # trpl, single default entry
    for q, s, t, ty, key in _trails_exact(inner, delta, ()):
        theta_s = BranchMap.make({BranchLabel.DEFAULT: s})
        theta_t = BranchMap.make({BranchLabel.DEFAULT: t})
        zeta = BranchMap.make({BranchLabel.DEFAULT: q})
        out.append(_entry(Trpl(zeta), Inspect(theta_s), Inspect(theta_t), ty, key))

    return tuple(out)


def _entry(q, s, t, ty, key):
    return (q, s, t, ty, key)


@lru_cache(maxsize=None)
def _trails_by_src(size: int, delta: tuple, gamma: tuple) -> dict:
    index = {}
    for e in _trails_exact(size, delta, gamma):
        index.setdefault(canon_key(e[1]), []).append(e)
    return index


def enumerate_trails(max_size: int, delta=(), gamma=()) -> list:
    """All generator-policy trails up to `max_size`; every one is
    well-typed by construction.  Entries are (trail, source, target, type)."""
    out = []
    for size in range(2, max_size + 1):
        out.extend(
            (q, s, t, ty)
            for q, s, t, ty, _ in _trails_exact(size, tuple(delta), tuple(gamma))
        )
    return out


def clear_caches() -> None:
    _codes_exact.cache_clear()
    _codes_by_type.cache_clear()
    _trails_exact.cache_clear()
    _trails_by_src.cache_clear()
