"""Hypothesis strategies over raw (possibly ill-typed) syntax.

These generate well-scoped values of all four syntax classes for
round-trip and algebraic-law testing; the typed corpora for metatheory
suites come from the exhaustive enumerator instead.
"""

import hypothesis.strategies as st

from trailcalc.syntax import (
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
)
from trailcalc.trails import term_of_code

SIMPLE_NAMES = ("a", "b", "c", "f", "x")
AUDITED_NAMES = ("u", "v", "w")

atoms = st.sampled_from([Atom("P"), Atom("N")])


def types_up_to(depth: int):
    if depth <= 0:
        return atoms
    sub = types_up_to(depth - 1)
    return st.one_of(
        atoms,
        st.builds(Arrow, sub, sub),
        st.builds(Audited, codes_up_to(depth - 1), sub),
    )


def codes_up_to(depth: int):
    leaf = st.one_of(
        st.builds(Var, st.sampled_from(SIMPLE_NAMES)),
        st.builds(AVar, st.sampled_from(AUDITED_NAMES)),
    )
    if depth <= 0:
        return leaf
    sub = codes_up_to(depth - 1)
    ty = types_up_to(1)
    return st.one_of(
        leaf,
        st.builds(Lam, st.sampled_from(SIMPLE_NAMES), ty, sub),
        st.builds(App, sub, sub),
        st.builds(Bang, sub),
        st.builds(Let, st.sampled_from(AUDITED_NAMES), ty, sub, sub),
        st.builds(Inspect, branch_maps(sub)),
    )


def branch_maps(payloads, min_size: int = 1):
    labels = st.lists(
        st.sampled_from(list(BranchLabel)), min_size=min_size, max_size=3, unique=True
    )
    return labels.flatmap(
        lambda labs: st.tuples(*(payloads for _ in labs)).map(
            lambda ps: BranchMap.make(list(zip(labs, ps)))
        )
    )


def trails_up_to(depth: int):
    code = codes_up_to(max(0, depth - 1))
    ty = types_up_to(1)
    leaf = st.one_of(
        st.builds(Refl, code),
        st.builds(Ba, st.sampled_from(SIMPLE_NAMES), ty, code, code),
        st.builds(Bb, code, st.sampled_from(AUDITED_NAMES), ty, code),
    )
    if depth <= 0:
        return leaf
    sub = trails_up_to(depth - 1)
    return st.one_of(
        leaf,
        st.builds(Trans, sub, sub),
        st.builds(Ti, sub, branch_maps(code)),
        st.builds(QLam, st.sampled_from(SIMPLE_NAMES), ty, sub),
        st.builds(QApp, sub, sub),
        st.builds(QLet, sub, st.sampled_from(AUDITED_NAMES), ty, sub),
        st.builds(Trpl, branch_maps(sub, min_size=0)),
    )


def terms_up_to(depth: int):
    from trailcalc.syntax import TApp, TAVar, TBang, TInspect, TLam, TLet, TVar

    leaf = st.one_of(
        st.builds(TVar, st.sampled_from(SIMPLE_NAMES)),
        st.builds(TAVar, st.sampled_from(AUDITED_NAMES)),
    )
    if depth <= 0:
        return leaf
    sub = terms_up_to(depth - 1)
    ty = types_up_to(1)
    return st.one_of(
        leaf,
        st.builds(TLam, st.sampled_from(SIMPLE_NAMES), ty, sub),
        st.builds(TApp, sub, sub),
        st.builds(TBang, trails_up_to(1), sub),
        st.builds(TLet, st.sampled_from(AUDITED_NAMES), ty, sub, sub),
        st.builds(TInspect, branch_maps(sub)),
    )


types = types_up_to(2)
codes = codes_up_to(3)
trails = trails_up_to(2)
terms = terms_up_to(3)
