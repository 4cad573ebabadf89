"""The three typing judgments: codes, terms, and trails.

All judgments run in synthesis mode.  Code typing infers a type; term
typing infers a type together with the term's code; trail typing infers
the trail's two endpoint codes and their shared type.  Inspection
branches are typed against the branch-type table `ttable`, seeded from
the mandatory default branch.

Contexts are ordered sequences of (name, type) pairs, one for audited
and one for simple variables.  Lookup is rightmost-binding, so binders
may shadow; user-supplied contexts must not declare a name twice.
Type comparisons are alpha-equivalence of types including embedded
codes; no normalization happens during comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .subst import subst_type_audited
from .syntax import (
    Arrow,
    Atom,
    Audited,
    AVar,
    App,
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
    TypeExpr,
    Var,
    alpha_eq,
    pretty,
)
from .trails import code_of, fold_code, src, tgt

# Verify, after accepting a trail, that the synthesized endpoints agree
# with src/tgt.  Cheap at desk scale and a standing consistency check.
CHECK_TRAIL_ENDPOINTS = True


class TypeCheckError(Exception):
    """Single-diagnostic type error.

    kind is one of: mismatch, unbound, nonfunction, nonaudited,
    missing-default, branch-domain-mismatch, nonempty-gamma-under-bang,
    trail-endpoint-mismatch.
    """

    def __init__(self, kind: str, message: str, expected=None, actual=None):
        self.kind = kind
        self.message = message
        self.expected = expected
        self.actual = actual
        super().__init__(self.render())

    def render(self) -> str:
        out = f"{self.kind}: {self.message}"
        if self.expected is not None:
            out += f" (expected {_show(self.expected)}"
            if self.actual is not None:
                out += f", got {_show(self.actual)}"
            out += ")"
        elif self.actual is not None:
            out += f" (got {_show(self.actual)})"
        return out


def _show(x) -> str:
    return pretty(x) if not isinstance(x, str) else x


@dataclass(frozen=True)
class TrailTypeResult:
    """Synthesized endpoints and type of a well-typed trail."""

    source: object
    target: object
    type: TypeExpr


Ctx = tuple  # of (name, TypeExpr) pairs


def ttable(label: BranchLabel, b: TypeExpr) -> TypeExpr:
    """Branch type for a label at inspection output type b."""
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
        return Arrow(b, b)
    return Arrow(b, Arrow(b, b))  # trans, app, let, trpl_cons


def _validate_ctx(ctx, what: str) -> Ctx:
    ctx = tuple(ctx)
    names = [name for name, _ in ctx]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate declaration in {what} context")
    return ctx


def _lookup(ctx: Ctx, name: str):
    for n, ty in reversed(ctx):
        if n == name:
            return ty
    return None


@dataclass(frozen=True)
class _Env:
    delta: Ctx
    gamma: Ctx
    dropped: Ctx = ()  # simple vars hidden by the nearest enclosing bang

    def bind_simple(self, name, ty) -> "_Env":
        return _Env(self.delta, self.gamma + ((name, ty),), self.dropped)

    def bind_audited(self, name, ty) -> "_Env":
        return _Env(self.delta + ((name, ty),), self.gamma, self.dropped)

    def under_bang(self) -> "_Env":
        return _Env(self.delta, (), self.dropped + self.gamma)


def _unbound_simple(env: _Env, name: str) -> TypeCheckError:
    if _lookup(env.dropped, name) is not None:
        return TypeCheckError(
            "nonempty-gamma-under-bang",
            f"simple variable {name} is not visible under a bang",
        )
    return TypeCheckError("unbound", f"unbound simple variable {name}")


# ---------------------------------------------------------------------------
# Code typing

def infer_code(delta, gamma, s) -> TypeExpr:
    """Infer the type of a code under the given contexts."""
    env = _Env(_validate_ctx(delta, "audited"), _validate_ctx(gamma, "simple"))
    return _infer_code(env, s)


def _infer_code(env: _Env, s) -> TypeExpr:
    match s:
        case Var(name):
            ty = _lookup(env.gamma, name)
            if ty is None:
                raise _unbound_simple(env, name)
            return ty
        case AVar(name):
            ty = _lookup(env.delta, name)
            if ty is None:
                raise TypeCheckError("unbound", f"unbound audited variable @{name}")
            return ty
        case Lam(var, annot, body):
            return Arrow(annot, _infer_code(env.bind_simple(var, annot), body))
        case App(fun, arg):
            fun_ty = _infer_code(env, fun)
            if not isinstance(fun_ty, Arrow):
                raise TypeCheckError(
                    "nonfunction", "application of a non-function", actual=fun_ty
                )
            arg_ty = _infer_code(env, arg)
            if not alpha_eq(arg_ty, fun_ty.dom):
                raise TypeCheckError(
                    "mismatch", "argument type", expected=fun_ty.dom, actual=arg_ty
                )
            return fun_ty.cod
        case Bang(body):
            body_ty = _infer_code(env.under_bang(), body)
            return Audited(body, body_ty)
        case Let(var, annot, bound, body):
            bound_ty = _infer_code(env, bound)
            if not isinstance(bound_ty, Audited):
                raise TypeCheckError(
                    "nonaudited", "let expects an audited bound code", actual=bound_ty
                )
            if not alpha_eq(bound_ty.body, annot):
                raise TypeCheckError(
                    "mismatch",
                    f"annotation on @{var}",
                    expected=bound_ty.body,
                    actual=annot,
                )
            body_ty = _infer_code(env.bind_audited(var, annot), body)
            return subst_type_audited(body_ty, var, bound_ty.code)
        case Inspect(branches):
            return _infer_inspect_codes(env, branches)
        case _:
            raise TypeError(f"not a code: {s!r}")


def _infer_inspect_codes(env: _Env, branches: BranchMap) -> TypeExpr:
    if not branches.has_default:
        raise TypeCheckError("missing-default", "inspection without default branch")
    inner = env.under_bang()
    b = _infer_code(inner, branches.get(BranchLabel.DEFAULT))
    for label, payload in branches.items():
        want = ttable(label, b)
        got = _infer_code(inner, payload)
        if not alpha_eq(got, want):
            raise TypeCheckError(
                "mismatch",
                f"branch {label.token}",
                expected=want,
                actual=got,
            )
    return b


# ---------------------------------------------------------------------------
# Term typing

def infer_term(delta, gamma, m) -> tuple[TypeExpr, object]:
    """Infer the type and code of a term under the given contexts."""
    env = _Env(_validate_ctx(delta, "audited"), _validate_ctx(gamma, "simple"))
    return _infer_term(env, m)


def _infer_term(env: _Env, m) -> tuple[TypeExpr, object]:
    match m:
        case TVar(name):
            ty = _lookup(env.gamma, name)
            if ty is None:
                raise _unbound_simple(env, name)
            return ty, Var(name)
        case TAVar(name):
            ty = _lookup(env.delta, name)
            if ty is None:
                raise TypeCheckError("unbound", f"unbound audited variable @{name}")
            return ty, AVar(name)
        case TLam(var, annot, body):
            body_ty, body_code = _infer_term(env.bind_simple(var, annot), body)
            return Arrow(annot, body_ty), Lam(var, annot, body_code)
        case TApp(fun, arg):
            fun_ty, fun_code = _infer_term(env, fun)
            if not isinstance(fun_ty, Arrow):
                raise TypeCheckError(
                    "nonfunction", "application of a non-function", actual=fun_ty
                )
            arg_ty, arg_code = _infer_term(env, arg)
            if not alpha_eq(arg_ty, fun_ty.dom):
                raise TypeCheckError(
                    "mismatch", "argument type", expected=fun_ty.dom, actual=arg_ty
                )
            return fun_ty.cod, App(fun_code, arg_code)
        case TBang(trail, body):
            inner = env.under_bang()
            body_ty, body_code = _infer_term(inner, body)
            res = _infer_trail(inner, trail)
            if not alpha_eq(res.target, body_code):
                raise TypeCheckError(
                    "trail-endpoint-mismatch",
                    "trail target is not the body's code",
                    expected=body_code,
                    actual=res.target,
                )
            if not alpha_eq(res.type, body_ty):
                raise TypeCheckError(
                    "mismatch", "trail type", expected=body_ty, actual=res.type
                )
            return Audited(res.source, body_ty), Bang(res.source)
        case TLet(var, annot, bound, body):
            bound_ty, bound_code = _infer_term(env, bound)
            if not isinstance(bound_ty, Audited):
                raise TypeCheckError(
                    "nonaudited", "let expects an audited bound term", actual=bound_ty
                )
            if not alpha_eq(bound_ty.body, annot):
                raise TypeCheckError(
                    "mismatch",
                    f"annotation on @{var}",
                    expected=bound_ty.body,
                    actual=annot,
                )
            body_ty, body_code = _infer_term(env.bind_audited(var, annot), body)
            return (
                subst_type_audited(body_ty, var, bound_ty.code),
                Let(var, annot, bound_code, body_code),
            )
        case TInspect(branches):
            if not branches.has_default:
                raise TypeCheckError(
                    "missing-default", "inspection without default branch"
                )
            inner = env.under_bang()
            b, _ = _infer_term(inner, branches.get(BranchLabel.DEFAULT))
            code_entries = []
            for label, payload in branches.items():
                want = ttable(label, b)
                got, payload_code = _infer_term(inner, payload)
                if not alpha_eq(got, want):
                    raise TypeCheckError(
                        "mismatch",
                        f"branch {label.token}",
                        expected=want,
                        actual=got,
                    )
                code_entries.append((label, payload_code))
            return b, Inspect(BranchMap.make(code_entries))
        case _:
            raise TypeError(f"not a term: {m!r}")


# ---------------------------------------------------------------------------
# Trail typing

def infer_trail(delta, gamma, q) -> TrailTypeResult:
    """Infer source, target, and type of a trail under the given contexts."""
    env = _Env(_validate_ctx(delta, "audited"), _validate_ctx(gamma, "simple"))
    return _infer_trail(env, q)


def _infer_trail(env: _Env, q) -> TrailTypeResult:
    res = _infer_trail_raw(env, q)
    if CHECK_TRAIL_ENDPOINTS:
        if not alpha_eq(res.source, src(q)) or not alpha_eq(res.target, tgt(q)):
            raise AssertionError(
                "synthesized trail endpoints disagree with src/tgt: "
                f"{pretty(q)}"
            )
    return res


def _infer_trail_raw(env: _Env, q) -> TrailTypeResult:
    match q:
        case Refl(subject):
            ty = _infer_code(env, subject)
            return TrailTypeResult(subject, subject, ty)
        case Trans(first, second):
            r1 = _infer_trail(env, first)
            r2 = _infer_trail(env, second)
            if not alpha_eq(r1.target, r2.source):
                raise TypeCheckError(
                    "mismatch",
                    "transitivity endpoints do not meet",
                    expected=r1.target,
                    actual=r2.source,
                )
            if not alpha_eq(r1.type, r2.type):
                raise TypeCheckError(
                    "mismatch", "transitivity types", expected=r1.type, actual=r2.type
                )
            return TrailTypeResult(r1.source, r2.target, r1.type)
        case Ba(var, annot, body, arg):
            body_ty = _infer_code(env.bind_simple(var, annot), body)
            arg_ty = _infer_code(env, arg)
            if not alpha_eq(arg_ty, annot):
                raise TypeCheckError(
                    "mismatch", "beta argument type", expected=annot, actual=arg_ty
                )
            from .subst import subst_code_simple

            return TrailTypeResult(
                App(Lam(var, annot, body), arg),
                subst_code_simple(body, var, arg),
                body_ty,
            )
        case Bb(bound, var, annot, body):
            bound_ty = _infer_code(env.under_bang(), bound)
            if not alpha_eq(bound_ty, annot):
                raise TypeCheckError(
                    "mismatch", "let-bang bound type", expected=annot, actual=bound_ty
                )
            body_ty = _infer_code(env.bind_audited(var, annot), body)
            from .subst import subst_code_audited

            return TrailTypeResult(
                Let(var, annot, Bang(bound), body),
                subst_code_audited(body, var, bound),
                subst_type_audited(body_ty, var, bound),
            )
        case Ti(history, branches):
            if not branches.has_default:
                raise TypeCheckError(
                    "missing-default", "inspection trail without default branch"
                )
            inner = env.under_bang()
            _infer_trail(inner, history)  # any well-typed trail is acceptable
            b = _infer_inspect_codes(env, branches)
            return TrailTypeResult(
                Inspect(branches), fold_code(history, branches), b
            )
        case QLam(var, annot, inner):
            r = _infer_trail(env.bind_simple(var, annot), inner)
            return TrailTypeResult(
                Lam(var, annot, r.source),
                Lam(var, annot, r.target),
                Arrow(annot, r.type),
            )
        case QApp(left, right):
            r1 = _infer_trail(env, left)
            if not isinstance(r1.type, Arrow):
                raise TypeCheckError(
                    "nonfunction",
                    "application congruence over a non-function",
                    actual=r1.type,
                )
            r2 = _infer_trail(env, right)
            if not alpha_eq(r2.type, r1.type.dom):
                raise TypeCheckError(
                    "mismatch",
                    "application congruence argument",
                    expected=r1.type.dom,
                    actual=r2.type,
                )
            return TrailTypeResult(
                App(r1.source, r2.source), App(r1.target, r2.target), r1.type.cod
            )
        case QLet(left, var, annot, right):
            r1 = _infer_trail(env, left)
            if not isinstance(r1.type, Audited):
                raise TypeCheckError(
                    "nonaudited",
                    "let congruence over a non-audited trail",
                    actual=r1.type,
                )
            if not alpha_eq(r1.type.body, annot):
                raise TypeCheckError(
                    "mismatch",
                    f"annotation on @{var}",
                    expected=r1.type.body,
                    actual=annot,
                )
            r2 = _infer_trail(env.bind_audited(var, annot), right)
            return TrailTypeResult(
                Let(var, annot, r1.source, r2.source),
                Let(var, annot, r1.target, r2.target),
                subst_type_audited(r2.type, var, r1.type.code),
            )
        case Trpl(branches):
            if not branches.has_default:
                raise TypeCheckError(
                    "missing-default", "branch-map trail without default branch"
                )
            inner = env.under_bang()
            results = [(lab, _infer_trail(inner, p)) for lab, p in branches.items()]
            b = next(r.type for lab, r in results if lab is BranchLabel.DEFAULT)
            for lab, r in results:
                want = ttable(lab, b)
                if not alpha_eq(r.type, want):
                    raise TypeCheckError(
                        "mismatch",
                        f"branch {lab.token}",
                        expected=want,
                        actual=r.type,
                    )
            theta = BranchMap.make([(lab, r.source) for lab, r in results])
            theta2 = BranchMap.make([(lab, r.target) for lab, r in results])
            return TrailTypeResult(Inspect(theta), Inspect(theta2), b)
        case _:
            raise TypeError(f"not a trail: {q!r}")
