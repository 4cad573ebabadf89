"""Independent oracles for acceptance testing.

The step auditor mirrors a reduction, replaying recorded steps against a
shadow term whose bangs carry plain integers instead of trails.  Every
contraction adds one to the enclosing counter; unpacking a bang splices
the consumed counter into each replaced occurrence outside deeper bangs
and into the counters of bangs it lands inside - exactly the arithmetic
the step-counting inspection performs on the real trail, but computed
with machine integers and never by folding a trail.  Inspection
contractions copy the enclosing bang's trail *structure* (labels only)
to shape their contractum; no count is ever read from a trail.
"""

from dataclasses import dataclass

from trailcalc.syntax import (
    Ba,
    Bb,
    BranchLabel,
    BranchMap,
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
    fresh,
)


@dataclass(frozen=True)
class CVar:
    name: str


@dataclass(frozen=True)
class CAVar:
    name: str


@dataclass(frozen=True)
class CLam:
    var: str
    body: object


@dataclass(frozen=True)
class CApp:
    fun: object
    arg: object


@dataclass(frozen=True)
class CBang:
    count: int
    body: object


@dataclass(frozen=True)
class CLet:
    var: str
    bound: object
    body: object


@dataclass(frozen=True)
class CInspect:
    branches: tuple  # of (BranchLabel, node)


def mirror(term):
    """Shadow a term; every bang starts at the count of contractions its
    current trail records, which is zero for freshly wrapped codes."""
    match term:
        case TVar(name):
            return CVar(name)
        case TAVar(name):
            return CAVar(name)
        case TLam(var, _, body):
            return CLam(var, mirror(body))
        case TApp(fun, arg):
            return CApp(mirror(fun), mirror(arg))
        case TBang(trail, body):
            from trailcalc.church import count_contractions

            return CBang(count_contractions(trail), mirror(body))
        case TLet(var, _, bound, body):
            return CLet(var, mirror(bound), mirror(body))
        case TInspect(branches):
            return CInspect(tuple((lab, mirror(p)) for lab, p in branches.items()))
        case _:
            raise TypeError(f"not a term: {term!r}")


def shapes_match(c, term) -> bool:
    """Sanity check: the shadow stays aligned with the real term."""
    match term:
        case TVar():
            return isinstance(c, CVar)
        case TAVar():
            return isinstance(c, CAVar)
        case TLam(_, _, body):
            return isinstance(c, CLam) and shapes_match(c.body, body)
        case TApp(fun, arg):
            return (
                isinstance(c, CApp)
                and shapes_match(c.fun, fun)
                and shapes_match(c.arg, arg)
            )
        case TBang(_, body):
            return isinstance(c, CBang) and shapes_match(c.body, body)
        case TLet(_, _, bound, body):
            return (
                isinstance(c, CLet)
                and shapes_match(c.bound, bound)
                and shapes_match(c.body, body)
            )
        case TInspect(branches):
            return (
                isinstance(c, CInspect)
                and len(c.branches) == len(branches)
                and all(
                    l1 is l2 and shapes_match(p1, p2)
                    for (l1, p1), (l2, p2) in zip(c.branches, branches.items())
                )
            )
    return False


def _fvs(c):
    match c:
        case CVar(name):
            return {name}, set()
        case CAVar(name):
            return set(), {name}
        case CLam(var, body):
            fs, fa = _fvs(body)
            return fs - {var}, fa
        case CApp(fun, arg):
            ffs, ffa = _fvs(fun)
            afs, afa = _fvs(arg)
            return ffs | afs, ffa | afa
        case CBang(_, body):
            return _fvs(body)
        case CLet(var, bound, body):
            bfs, bfa = _fvs(bound)
            fs, fa = _fvs(body)
            return bfs | fs, bfa | (fa - {var})
        case CInspect(branches):
            fs, fa = set(), set()
            for _, p in branches:
                pfs, pfa = _fvs(p)
                fs |= pfs
                fa |= pfa
            return fs, fa


def _crename(c, ms, ma):
    match c:
        case CVar(name):
            return CVar(ms.get(name, name))
        case CAVar(name):
            return CAVar(ma.get(name, name))
        case CLam(var, body):
            ms2 = {k: v for k, v in ms.items() if k != var}
            return CLam(var, _crename(body, ms2, ma))
        case CApp(fun, arg):
            return CApp(_crename(fun, ms, ma), _crename(arg, ms, ma))
        case CBang(count, body):
            return CBang(count, _crename(body, ms, ma))
        case CLet(var, bound, body):
            ma2 = {k: v for k, v in ma.items() if k != var}
            return CLet(var, _crename(bound, ms, ma), _crename(body, ms, ma2))
        case CInspect(branches):
            return CInspect(tuple((l, _crename(p, ms, ma)) for l, p in branches))


def csubst_simple(c, a, n):
    """Beta substitution on shadows: bang-opaque, like the real thing."""
    fs_n, fa_n = _fvs(n)
    match c:
        case CVar(name):
            return n if name == a else c
        case CAVar():
            return c
        case CLam(var, body):
            if var == a:
                return c
            if var in fs_n:
                fs_b, _ = _fvs(body)
                new = fresh(fs_n | fs_b | {a, var}, var)
                body = _crename(body, {var: new}, {})
                var = new
            return CLam(var, csubst_simple(body, a, n))
        case CApp(fun, arg):
            return CApp(csubst_simple(fun, a, n), csubst_simple(arg, a, n))
        case CBang():
            return c
        case CLet(var, bound, body):
            bound2 = csubst_simple(bound, a, n)
            if var in fa_n:
                _, fa_b = _fvs(body)
                new = fresh(fa_n | fa_b | {var}, var)
                body = _crename(body, {}, {var: new})
                var = new
            return CLet(var, bound2, csubst_simple(body, a, n))
        case CInspect(branches):
            return CInspect(tuple((l, csubst_simple(p, a, n)) for l, p in branches))


def cltimes(c, u, n, count):
    """Audited substitution on shadows: returns (node, spilled count).

    The spill is the fold of the witnessing trail under step-counting
    weights: `count` per replaced occurrence, zero at other leaves and
    at bangs (whose own counter absorbs their inner spill), summed
    across congruences.
    """
    match c:
        case CVar(name):
            return c, 0
        case CAVar(name):
            if name == u:
                return n, count
            return c, 0
        case CLam(var, body):
            fs_n, _ = _fvs(n)
            if var in fs_n:
                fs_b, _ = _fvs(body)
                new = fresh(fs_n | fs_b | {var}, var)
                body = _crename(body, {var: new}, {})
                var = new
            body2, spill = cltimes(body, u, n, count)
            return CLam(var, body2), spill
        case CApp(fun, arg):
            fun2, s1 = cltimes(fun, u, n, count)
            arg2, s2 = cltimes(arg, u, n, count)
            return CApp(fun2, arg2), s1 + s2
        case CBang(own, body):
            body2, spill = cltimes(body, u, n, count)
            return CBang(own + spill, body2), 0
        case CLet(var, bound, body):
            bound2, s1 = cltimes(bound, u, n, count)
            if var == u:
                return CLet(var, bound2, body), s1
            _, fa_n = _fvs(n)
            if var in fa_n:
                _, fa_b = _fvs(body)
                new = fresh(fa_n | fa_b | {var, u}, var)
                body = _crename(body, {}, {var: new})
                var = new
            body2, s2 = cltimes(body, u, n, count)
            return CLet(var, bound2, body2), s1 + s2
        case CInspect(branches):
            total = 0
            out = []
            for lab, p in branches:
                p2, s = cltimes(p, u, n, count)
                out.append((lab, p2))
                total += s
            return CInspect(tuple(out)), total


def cfold(q, branches):
    """Fold a real trail's structure through shadow branches."""
    bmap = dict(branches)
    default = bmap[BranchLabel.DEFAULT]

    def pick(label):
        return bmap.get(label)

    match q:
        case Refl():
            b = pick(BranchLabel.REFL)
            return default if b is None else b
        case Trans(first, second):
            b = pick(BranchLabel.TRANS)
            if b is None:
                return default
            return CApp(CApp(b, cfold(first, branches)), cfold(second, branches))
        case Ba():
            b = pick(BranchLabel.BA)
            return default if b is None else b
        case Bb():
            b = pick(BranchLabel.BB)
            return default if b is None else b
        case Ti():
            b = pick(BranchLabel.TI)
            return default if b is None else b
        case QLam(_, _, inner):
            b = pick(BranchLabel.LAM)
            if b is None:
                return default
            return CApp(b, cfold(inner, branches))
        case QApp(left, right):
            b = pick(BranchLabel.APP)
            if b is None:
                return default
            return CApp(CApp(b, cfold(left, branches)), cfold(right, branches))
        case QLet(left, _, _, right):
            b = pick(BranchLabel.LET)
            if b is None:
                return default
            return CApp(CApp(b, cfold(left, branches)), cfold(right, branches))
        case Trpl(entries):
            if len(entries) == 0:
                b = pick(BranchLabel.TRPL_NIL)
                return default if b is None else b
            b = pick(BranchLabel.TRPL_CONS)
            if b is None:
                return default
            (_, head), *rest = entries.items()
            tail = Trpl(BranchMap(tuple(rest)))
            return CApp(CApp(b, cfold(head, branches)), cfold(tail, branches))


class StepAuditor:
    """Replays StepInfo records against a shadow of the starting term,
    maintaining per-bang contraction counters."""

    def __init__(self, start_term):
        self.shadow = mirror(start_term)

    @property
    def root_count(self) -> int:
        return self.shadow.count

    def apply(self, pre_term, info):
        # info.path = info.bang_path + ("body",) + redex path inside the bang
        redex_path = info.path[len(info.bang_path) + 1 :]
        self.shadow = self._at_bang(self.shadow, pre_term, info.bang_path, redex_path, info)

    def _at_bang(self, c, m, bang_path, redex_path, info):
        if not bang_path:
            if not (isinstance(c, CBang) and isinstance(m, TBang)):
                raise ValueError("bang path does not end at a bang")
            body2, bump = self._contract(c.body, m.body, redex_path, m.trail, info)
            return CBang(c.count + bump, body2)
        key, tail = bang_path[0], bang_path[1:]
        match (c, m):
            case (CBang(count, cbody), TBang(_, mbody)) if key == "body":
                return CBang(count, self._at_bang(cbody, mbody, tail, redex_path, info))
            case (CLam(var, cbody), TLam(_, _, mbody)) if key == "body":
                return CLam(var, self._at_bang(cbody, mbody, tail, redex_path, info))
            case (CApp(cf, ca), TApp(mf, ma2)):
                if key == "fun":
                    return CApp(self._at_bang(cf, mf, tail, redex_path, info), ca)
                return CApp(cf, self._at_bang(ca, ma2, tail, redex_path, info))
            case (CLet(var, cb, cbody), TLet(_, _, mb, mbody)):
                if key == "bound":
                    return CLet(var, self._at_bang(cb, mb, tail, redex_path, info), cbody)
                return CLet(var, cb, self._at_bang(cbody, mbody, tail, redex_path, info))
            case (CInspect(cbranches), TInspect(mbranches)):
                out = []
                for (lab, cp), (_, mp) in zip(cbranches, mbranches.items()):
                    if lab.token == key:
                        cp = self._at_bang(cp, mp, tail, redex_path, info)
                    out.append((lab, cp))
                return CInspect(tuple(out))
        raise ValueError(f"shadow and term diverge at path step {key!r}")

    def _contract(self, cbody, mbody, rest, trail, info):
        """Contract at `rest` inside this bang's body; returns the new
        shadow body and the counter bump for this bang."""
        if not rest:
            return self._do_rule(cbody, mbody, trail, info)
        key, tail = rest[0], rest[1:]
        match (cbody, mbody):
            case (CLam(var, cb), TLam(_, _, mb)) if key == "body":
                body2, bump = self._contract(cb, mb, tail, trail, info)
                return CLam(var, body2), bump
            case (CApp(cf, ca), TApp(mf, ma2)):
                if key == "fun":
                    f2, bump = self._contract(cf, mf, tail, trail, info)
                    return CApp(f2, ca), bump
                a2, bump = self._contract(ca, ma2, tail, trail, info)
                return CApp(cf, a2), bump
            case (CLet(var, cb, cs), TLet(_, _, mb, ms)):
                if key == "bound":
                    b2, bump = self._contract(cb, mb, tail, trail, info)
                    return CLet(var, b2, cs), bump
                s2, bump = self._contract(cs, ms, tail, trail, info)
                return CLet(var, cb, s2), bump
            case (CInspect(cbranches), TInspect(mbranches)):
                out = []
                bump = 0
                for (lab, cp), (_, mp) in zip(cbranches, mbranches.items()):
                    if lab.token == key:
                        cp, bump = self._contract(cp, mp, tail, trail, info)
                    out.append((lab, cp))
                return CInspect(tuple(out)), bump
        raise ValueError(f"shadow diverges inside bang at {key!r}")

    def _do_rule(self, c, m, trail, info):
        if info.rule == "beta":
            assert isinstance(c, CApp) and isinstance(c.fun, CLam)
            return csubst_simple(c.fun.body, c.fun.var, c.arg), 1
        if info.rule == "beta_box":
            assert isinstance(c, CLet) and isinstance(c.bound, CBang)
            body2, spill = cltimes(c.body, c.var, c.bound.body, c.bound.count)
            return body2, 1 + spill
        if info.rule == "ti":
            assert isinstance(c, CInspect)
            return cfold(trail, c.branches), 1
        raise ValueError(f"unknown rule {info.rule!r}")
