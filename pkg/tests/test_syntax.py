import hypothesis
import hypothesis.strategies as st
import pytest
from hypothesis import given

import strategies as gen
from trailcalc.subst import subst_code_simple
from trailcalc.syntax import (
    App,
    Arrow,
    Atom,
    Audited,
    AVar,
    Ba,
    Bang,
    BranchLabel,
    BranchMap,
    Inspect,
    Lam,
    Let,
    Refl,
    Trans,
    Var,
    alpha_eq,
    canon_key,
    free_vars,
    fresh,
    pretty,
)

P = Atom("P")


class TestAlphaEq:
    def test_renamed_binder(self):
        assert alpha_eq(Lam("a", P, Var("a")), Lam("b", P, Var("b")))

    def test_distinct_bodies(self):
        assert not alpha_eq(Lam("a", P, Var("a")), Lam("a", P, Bang(Var("a"))))

    def test_renaming_under_trail_subject(self):
        assert alpha_eq(Refl(Lam("a", P, Var("a"))), Refl(Lam("c", P, Var("c"))))

    def test_free_variables_not_identified(self):
        assert not alpha_eq(Var("a"), Var("b"))
        assert not alpha_eq(Lam("a", P, Var("c")), Lam("b", P, Var("d")))

    def test_cross_namespace(self):
        assert not alpha_eq(Var("a"), AVar("a"))

    @given(gen.codes)
    def test_reflexive(self, c):
        assert alpha_eq(c, c)

    @given(gen.codes, gen.codes)
    def test_symmetric(self, a, b):
        assert alpha_eq(a, b) == alpha_eq(b, a)

    @given(gen.codes, gen.codes, gen.codes)
    def test_transitive(self, a, b, c):
        if alpha_eq(a, b) and alpha_eq(b, c):
            assert alpha_eq(a, c)

    @given(gen.codes)
    def test_canon_key_characterizes(self, c):
        from trailcalc.syntax import canonical

        assert alpha_eq(c, canonical(c))
        assert canon_key(c) == canon_key(canonical(c))


class TestFreeVars:
    def test_lambda(self):
        fs, fa = free_vars(Lam("a", P, App(Var("a"), Var("b"))))
        assert fs == {"b"} and fa == frozenset()

    def test_let_merges_bound_and_removes_binder(self):
        fs, fa = free_vars(Let("u", P, Var("s"), AVar("u")))
        assert fs == {"s"} and fa == frozenset()

    def test_trail_binding(self):
        fs, fa = free_vars(Ba("a", P, Var("a"), Var("c")))
        assert fs == {"c"} and fa == frozenset()

    def test_annotation_variables_are_free(self):
        fs, _ = free_vars(Lam("b", Audited(Var("a"), P), Var("b")))
        assert fs == {"a"}

    @given(gen.codes, st.sampled_from(gen.SIMPLE_NAMES), gen.codes)
    def test_subst_shrinks_support(self, s, a, t):
        # Simple substitution is opaque to bangs and annotations, which
        # only matters where a simple variable sits free under a bang or
        # in an annotation - impossible in well-typed codes, so the raw
        # generator filters those out to state the classical bound.
        hypothesis.assume(not _annotations_mention_simple_vars(s))
        hypothesis.assume(a not in _free_simple_under_bang(s))
        fs_s, fa_s = free_vars(s)
        fs_t, fa_t = free_vars(t)
        fs_r, fa_r = free_vars(subst_code_simple(s, a, t))
        assert fs_r <= (fs_s - {a}) | fs_t
        assert fa_r <= fa_s | fa_t

    def test_subst_shrinks_support_on_typed_corpus(self, codes6):
        target = Lam("w", P, Var("w"))
        for s, _ in codes6:
            fs_s, fa_s = free_vars(s)
            for a in ("x0", "z"):
                fs_r, fa_r = free_vars(subst_code_simple(s, a, target))
                assert fs_r <= (fs_s - {a})
                assert fa_r <= fa_s


def _free_simple_under_bang(x, under=False) -> frozenset:
    match x:
        case Var(name):
            return frozenset((name,)) if under else frozenset()
        case AVar():
            return frozenset()
        case Lam(var, _, body):
            return _free_simple_under_bang(body, under) - {var}
        case App(fun, arg):
            return _free_simple_under_bang(fun, under) | _free_simple_under_bang(arg, under)
        case Bang(body):
            return _free_simple_under_bang(body, True)
        case Let(var, _, bound, body):
            return _free_simple_under_bang(bound, under) | _free_simple_under_bang(body, under)
        case Inspect(branches):
            out = frozenset()
            for _, p in branches.items():
                out |= _free_simple_under_bang(p, under)
            return out
        case _:
            return frozenset()


def _annotations_mention_simple_vars(x) -> bool:
    from trailcalc.syntax import is_type

    match x:
        case Lam(_, annot, body):
            return bool(free_vars(annot)[0]) or _annotations_mention_simple_vars(body)
        case Let(_, annot, bound, body):
            return (
                bool(free_vars(annot)[0])
                or _annotations_mention_simple_vars(bound)
                or _annotations_mention_simple_vars(body)
            )
        case App(fun, arg):
            return _annotations_mention_simple_vars(fun) or _annotations_mention_simple_vars(arg)
        case Bang(body):
            return _annotations_mention_simple_vars(body)
        case Inspect(branches):
            return any(_annotations_mention_simple_vars(p) for _, p in branches.items())
        case _:
            return False


class TestFresh:
    def test_collides(self):
        assert fresh({"a"}, "a") == "a1"

    def test_free(self):
        assert fresh(set(), "x") == "x"

    def test_skips_taken_suffixes(self):
        assert fresh({"x", "x1"}, "x") == "x2"


class TestPretty:
    def test_lambda(self):
        assert pretty(Lam("a", P, Var("a"))) == "\\a:P. a"

    def test_audited_type(self):
        ty = Audited(Bang(Lam("a", P, Var("a"))), Atom("N"))
        assert pretty(ty) == "[!\\a:P. a]N"

    def test_trail(self):
        q = Trans(Refl(Var("s")), Ba("a", P, Var("a"), Var("b")))
        assert pretty(q) == "trans(refl(s), ba(a:P. a, b))"

    def test_application_grouping(self):
        f, x, y = Var("f"), Var("x"), Var("y")
        assert pretty(App(App(f, x), y)) == "f x y"
        assert pretty(App(f, App(x, y))) == "f (x y)"

    def test_arrow_associativity(self):
        assert pretty(Arrow(Arrow(P, P), Arrow(P, P))) == "(P -> P) -> P -> P"


class TestBranchMap:
    def test_fixed_iteration_order(self):
        bm = BranchMap.make(
            {BranchLabel.DEFAULT: Var("d"), BranchLabel.REFL: Var("r")}
        )
        assert bm.labels() == (BranchLabel.REFL, BranchLabel.DEFAULT)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            BranchMap.make(
                [(BranchLabel.REFL, Var("a")), (BranchLabel.REFL, Var("b"))]
            )

    def test_eleven_labels_exist(self):
        assert len(BranchLabel) == 11
