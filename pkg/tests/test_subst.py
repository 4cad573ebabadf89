import itertools

import pytest
from hypothesis import given, settings

import strategies as gen
from trailcalc.church import NUMERAL_TYPE, church, plus_code
from trailcalc.enumeration import context_for, enumerate_codes, enumerate_trails
from trailcalc.reduction import Strategy, normalize
from trailcalc.subst import (
    AuditedTermSubst,
    subst_code_audited,
    subst_code_simple,
    subst_term_audited,
    subst_term_simple,
    subst_trail_audited,
)
from trailcalc.syntax import (
    App,
    TApp,
    TAVar,
    Atom,
    AVar,
    Bang,
    Lam,
    Let,
    QApp,
    QLet,
    Refl,
    TBang,
    TLet,
    TVar,
    Var,
    alpha_eq,
    free_vars,
)
from trailcalc.trails import code_of, src, term_of_code, tgt
from trailcalc.typecheck import infer_term, infer_trail

P = Atom("P")
ID = Lam("a", P, Var("a"))


class TestSimpleOnCodes:
    def test_variable(self):
        assert alpha_eq(subst_code_simple(Var("a"), "a", Var("t")), Var("t"))

    def test_bang_opaque(self):
        assert alpha_eq(subst_code_simple(Bang(Var("a")), "a", Var("t")), Bang(Var("a")))

    def test_capture_avoidance(self):
        got = subst_code_simple(Lam("b", P, Var("a")), "a", Var("b"))
        assert alpha_eq(got, Lam("c", P, Var("b")))
        assert not alpha_eq(got, Lam("b", P, Var("b")))


class TestAuditedOnCodes:
    def test_variable(self):
        assert alpha_eq(subst_code_audited(AVar("u"), "u", Var("t")), Var("t"))

    def test_enters_bangs(self):
        assert alpha_eq(subst_code_audited(Bang(AVar("u")), "u", Var("t")), Bang(Var("t")))

    def test_let_body(self):
        s = Let("v", P, Var("s"), AVar("u"))
        got = subst_code_audited(s, "u", Var("t"))
        assert alpha_eq(got, Let("v", P, Var("s"), Var("t")))


class TestSimpleOnTerms:
    def test_variable(self):
        n = term_of_code(ID)
        assert alpha_eq(subst_term_simple(TVar("a"), "a", n), n)

    def test_bang_opaque_with_trail(self):
        m = TBang(Refl(Var("a")), TVar("a"))
        assert alpha_eq(subst_term_simple(m, "a", term_of_code(ID)), m)

    def test_application_homomorphic(self):
        from trailcalc.syntax import TApp

        m = TApp(TVar("a"), TVar("a"))
        n = term_of_code(ID)
        got = subst_term_simple(m, "a", n)
        assert alpha_eq(got, TApp(n, n))


def _history_for(n: int, target: int):
    """A real trail witnessing plus c_n c_n ->* c_target, by running it."""
    prog = Bang(App(App(plus_code(), church(n)), church(n)))
    final, _ = normalize(term_of_code(prog), Strategy.LEFTMOST_OUTERMOST)
    assert alpha_eq(code_of(final.body), church(target))
    return final.trail


class TestPairedAuditedSubst:
    def test_let_example(self):
        # Unpacking a history-carrying 2 into: let @v = ![q'] 6 in plus @u @v
        q = _history_for(1, 2)
        q2 = _history_for(3, 6)
        plus = term_of_code(plus_code())
        body = TLet(
            "v",
            NUMERAL_TYPE,
            TBang(q2, term_of_code(church(6))),
            TApp(
                TApp(plus, TAVar("u")),
                TAVar("v"),
            ),
        )
        delta = AuditedTermSubst("u", term_of_code(church(2)), q, src(q))
        new_term, witness = subst_term_audited(body, delta)
        # substituted term: the occurrence of @u is now the numeral 2
        want_term = TLet(
            "v",
            NUMERAL_TYPE,
            TBang(q2, term_of_code(church(6))),
            TApp(
                TApp(plus, term_of_code(church(2))),
                TAVar("v"),
            ),
        )
        assert alpha_eq(new_term, want_term)
        # witness: tlet(refl, tapp(tapp(refl, q), refl))
        match witness:
            case QLet(QApp(bound_w, _), _, _, QApp(QApp(plus_w, q_w), v_w)):
                pytest.fail("unexpected witness grouping")
            case QLet(bound_w, _, _, QApp(QApp(plus_w, q_w), v_w)):
                assert isinstance(bound_w, Refl)
                assert isinstance(plus_w, Refl)
                assert alpha_eq(q_w, q)
                assert isinstance(v_w, Refl)
            case _:
                pytest.fail(f"unexpected witness shape {witness}")

    def test_nonmatching_variable(self):
        delta = AuditedTermSubst("u", term_of_code(ID), Refl(ID), ID)
        from trailcalc.syntax import TAVar

        term, witness = subst_term_audited(TAVar("v"), delta)
        assert alpha_eq(term, TAVar("v"))
        assert alpha_eq(witness, Refl(AVar("v")))

    def test_bang_clause(self):
        # (![q'] R)[delta]: trail becomes trans(q'[u:=t], R-witness); the
        # node's own witness is refl of the substituted source.
        delta = AuditedTermSubst("u", term_of_code(ID), Refl(ID), ID)
        from trailcalc.syntax import TAVar, Trans

        m = TBang(Refl(AVar("u")), TAVar("u"))
        term, witness = subst_term_audited(m, delta)
        match term:
            case TBang(Trans(first, second), body):
                assert alpha_eq(first, Refl(ID))
                assert alpha_eq(second, Refl(ID))
                assert alpha_eq(body, term_of_code(ID))
            case _:
                pytest.fail("bang clause shape")
        assert alpha_eq(witness, Refl(Bang(ID)))

    def test_validate_rejects_incoherent_tuples(self):
        delta = AuditedTermSubst("u", term_of_code(ID), Refl(Var("z")), Var("z"))
        with pytest.raises(ValueError):
            delta.validate()


class TestSubstitutionLemma:
    """Commutation of independent substitutions (enumerated instances)."""

    def test_simple_then_audited(self, codes6):
        delta, gamma = context_for((P,), (P,))
        subjects = [c for c, _ in enumerate_codes(4, (P,), (P,))]
        t = Var("z")
        r = ID  # a # r holds: z not free in ID, a is x0
        for s in subjects:
            lhs = subst_code_audited(subst_code_simple(s, "x0", t), "u0", r)
            rhs = subst_code_simple(
                subst_code_audited(s, "u0", r), "x0", subst_code_audited(t, "u0", r)
            )
            assert alpha_eq(lhs, rhs)

    def test_audited_then_audited(self):
        subjects = [c for c, _ in enumerate_codes(4, (P, Arrow0()), ())]
        t = Var("z")
        r = ID
        for s in subjects:
            # u # v, r: substitute u0 by t, then u1 by r
            lhs = subst_code_audited(subst_code_audited(s, "u0", t), "u1", r)
            rhs = subst_code_audited(
                subst_code_audited(s, "u1", r), "u0", subst_code_audited(t, "u1", r)
            )
            assert alpha_eq(lhs, rhs)


def Arrow0():
    from trailcalc.syntax import Arrow

    return Arrow(P, P)


class TestTrailSubstCommutes:
    def test_audited_subst_commutes_with_endpoints(self):
        # src(q[u:=t]) = src(q)[u:=t] and likewise for tgt, on the
        # enumerated trails over a one-variable audited context.
        for q, s, t, _ in enumerate_trails(6, (P,), ()):
            sub = lambda x: subst_code_audited(x, "u0", Var("z"))
            q2 = subst_trail_audited(q, "u0", Var("z"))
            assert alpha_eq(src(q2), sub(s))
            assert alpha_eq(tgt(q2), sub(t))


class TestPairedSubstCoherence:
    def test_witness_endpoints_and_typing(self):
        # For well-typed N under u::A and delta = (M, q, src q), the
        # witness trail is well-typed from code(N)[u := src q] to
        # code(N [delta]).
        pp = Arrow0()
        delta_ctx, gamma_ctx = context_for((pp,), ())
        prog = Bang(App(ID, Var("b")))  # trail source for the substitution
        final, _ = normalize(
            term_of_code(Bang(App(Lam("a", pp, Var("a")), ID))),
            Strategy.LEFTMOST_OUTERMOST,
        )
        q = final.trail
        m = final.body
        delta = AuditedTermSubst("u0", m, q, src(q))
        checked = 0
        for code, ty in enumerate_codes(5, (pp,), ()):
            n = term_of_code(code)
            new_term, witness = subst_term_audited(n, delta)
            want_src = subst_code_audited(code_of(n), "u0", src(q))
            assert alpha_eq(src(witness), want_src)
            assert alpha_eq(tgt(witness), code_of(new_term))
            res = infer_trail((), (), witness)
            assert alpha_eq(res.source, want_src)
            checked += 1
        assert checked > 50
