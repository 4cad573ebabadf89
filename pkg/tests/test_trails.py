import pytest
from hypothesis import given, settings

import strategies as gen
from trailcalc.church import church, step_count_branches
from trailcalc.reduction import Strategy, normalize
from trailcalc.syntax import (
    App,
    Bang as CBang,
    Atom,
    BranchLabel,
    BranchMap,
    Ba,
    Lam,
    QApp,
    QLam,
    Refl,
    TApp,
    TBang,
    TLam,
    TLet,
    TVar,
    Trans,
    Var,
    alpha_eq,
    pretty,
)
from trailcalc.trails import (
    HOLE,
    EvalContext,
    MissingDefault,
    NotBoxFree,
    canonical_trail_context,
    code_of,
    fold_code,
    fold_term,
    plug_term,
    plug_trail,
    src,
    term_of_code,
    tgt,
)

P = Atom("P")
ID = Lam("a", P, Var("a"))


class TestSrcTgt:
    def test_refl(self):
        assert alpha_eq(src(Refl(Var("s"))), Var("s"))
        assert alpha_eq(tgt(Refl(Var("s"))), Var("s"))

    def test_ba(self):
        q = Ba("a", P, Var("a"), Var("b"))
        assert alpha_eq(src(q), App(ID, Var("b")))
        assert alpha_eq(tgt(q), Var("b"))

    def test_bb(self):
        from trailcalc.syntax import AVar, Bb

        q = Bb(Var("x"), "u", P, AVar("u"))
        assert alpha_eq(tgt(q), Var("x"))

    def test_trans(self):
        q = Trans(Refl(Var("s")), Refl(Var("s")))
        assert alpha_eq(src(q), Var("s"))

    def test_typed_trails_match_endpoints(self, codes6):
        # Lemma: on every generator trail the synthesized judgment
        # endpoints coincide with src/tgt (checked again by typing).
        from trailcalc.enumeration import enumerate_trails

        for q, s, t, _ in enumerate_trails(6):
            assert alpha_eq(src(q), s)
            assert alpha_eq(tgt(q), t)


class TestFold:
    def test_refl_is_constant(self):
        theta = BranchMap.make({BranchLabel.REFL: Var("c"), BranchLabel.DEFAULT: Var("d")})
        assert alpha_eq(fold_code(Refl(Var("s")), theta), Var("c"))

    def test_absent_label_falls_to_default_without_recursion(self):
        theta = BranchMap.make({BranchLabel.DEFAULT: Var("d")})
        q = Trans(Refl(Var("s")), Ba("a", P, Var("a"), Var("b")))
        assert alpha_eq(fold_code(q, theta), Var("d"))

    def test_missing_default_raises(self):
        theta = BranchMap.make({BranchLabel.REFL: Var("c")})
        with pytest.raises(MissingDefault):
            fold_code(Refl(Var("s")), theta)

    def test_step_count_fold_normalizes_to_one(self):
        q = Trans(Refl(Var("s")), Ba("a", P, Var("a"), Var("b")))
        counted = fold_code(q, step_count_branches())
        wrapped = term_of_code(CBang(counted))
        final, _ = normalize(wrapped, Strategy.LEFTMOST_OUTERMOST)
        assert alpha_eq(code_of(final.body), church(1))

    def test_trpl_cons_chain(self):
        from trailcalc.syntax import Trpl

        theta = BranchMap.make(
            {
                BranchLabel.TRPL_NIL: Var("n"),
                BranchLabel.TRPL_CONS: Var("c"),
                BranchLabel.REFL: Var("r"),
                BranchLabel.DEFAULT: Var("d"),
            }
        )
        zeta = Trpl(
            BranchMap.make(
                {BranchLabel.REFL: Refl(Var("x")), BranchLabel.DEFAULT: Refl(Var("y"))}
            )
        )
        # cons applied to the head fold, then to the fold of the tail map.
        want = App(App(Var("c"), Var("r")), App(App(Var("c"), Var("r")), Var("n")))
        assert alpha_eq(fold_code(zeta, theta), want)

    @given(gen.trails)
    @settings(max_examples=200)
    def test_total_with_default(self, q):
        theta = BranchMap.make({BranchLabel.DEFAULT: Var("d"), BranchLabel.TRANS: Var("t")})
        fold_code(q, theta)  # must not raise


class TestCodeOf:
    def test_bang_takes_trail_source(self):
        m = TBang(Refl(Var("s")), TVar("m"))
        assert alpha_eq(code_of(m), CBang(Var("s")))

    def test_trail_free_term(self):
        assert alpha_eq(code_of(term_of_code(ID)), ID)

    def test_trans_source_wins(self):
        q = Trans(Refl(Var("s")), Ba("a", P, Var("a"), Var("b")))
        m = TBang(q, TVar("n"))
        assert alpha_eq(code_of(m), CBang(Var("s")))


class TestContexts:
    def test_hole_maps_to_hole(self):
        f = EvalContext(HOLE)
        assert isinstance(canonical_trail_context(f).skeleton, type(HOLE))

    def test_application_context(self):
        f = EvalContext(TApp(HOLE, TVar("m")))
        qc = canonical_trail_context(f)
        assert alpha_eq(qc.plug(Refl(Var("z"))), QApp(Refl(Var("z")), Refl(Var("m"))))

    def test_lambda_context(self):
        f = EvalContext(TLam("a", P, HOLE))
        qc = canonical_trail_context(f)
        assert alpha_eq(qc.plug(Refl(Var("z"))), QLam("a", P, Refl(Var("z"))))

    def test_not_box_free(self):
        f = EvalContext(TBang(Refl(Var("s")), HOLE))
        assert not f.box_free
        with pytest.raises(NotBoxFree):
            canonical_trail_context(f)

    def test_plug_trivial(self):
        assert alpha_eq(plug_trail(HOLE, Refl(Var("q"))), Refl(Var("q")))

    def test_plug_captures(self):
        f = EvalContext(TLam("a", P, HOLE))
        assert alpha_eq(plug_term(f, TVar("a")), TLam("a", P, TVar("a")))

    def test_canonical_context_coherence(self):
        # Plugging a trail into the canonical context of F relates the
        # codes of F filled with matching terms at both endpoints.
        contexts = [
            EvalContext(HOLE),
            EvalContext(TApp(HOLE, term_of_code(ID))),
            EvalContext(TApp(term_of_code(ID), HOLE)),
            EvalContext(TLam("a", P, HOLE)),
            EvalContext(TLet("u", P, HOLE, TVar("z"))),
            EvalContext(TLet("u", P, term_of_code(ID), HOLE)),
        ]
        q = Ba("a", P, Var("a"), Var("b"))
        for f in contexts:
            qc = canonical_trail_context(f)
            plugged = qc.plug(q)
            n_src = term_of_code(src(q))
            n_tgt = term_of_code(tgt(q))
            assert alpha_eq(src(plugged), code_of(plug_term(f, n_src)))
            assert alpha_eq(tgt(plugged), code_of(plug_term(f, n_tgt)))


class TestFoldTermAgreement:
    def test_code_of_commutes_with_fold(self):
        # code_of(fold_term(q, branches)) equals fold_code over the
        # pointwise codes; the term-level inspection step relies on it.
        theta_t = BranchMap.make(
            {
                BranchLabel.TRANS: term_of_code(Lam("a", P, Lam("b", P, Var("a")))),
                BranchLabel.DEFAULT: term_of_code(ID),
            }
        )
        q = Trans(Refl(Var("s")), Trans(Refl(Var("s")), Refl(Var("s"))))
        folded = fold_term(q, theta_t)
        assert alpha_eq(code_of(folded), fold_code(q, theta_t.map_payloads(code_of)))
