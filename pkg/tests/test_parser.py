import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

import strategies as gen
from trailcalc.parser import (
    ParseError,
    UndefinedName,
    parse_code,
    parse_module,
    parse_program,
    parse_term,
    parse_trail,
    parse_type,
)
from trailcalc.syntax import (
    AVar,
    Atom,
    Audited,
    Bang,
    BranchLabel,
    Bb,
    Inspect,
    Lam,
    Let,
    TBang,
    Var,
    alpha_eq,
    pretty,
)

P = Atom("P")


class TestPrograms:
    def test_def_inlines_into_bang(self):
        sf = parse_program("def id = \\a:P. a; main = !(id);")
        assert alpha_eq(sf.main, Bang(Lam("a", P, Var("a"))))

    def test_let_main(self):
        sf = parse_program("main = let @u:P = !x in @u;")
        assert alpha_eq(sf.main, Let("u", P, Bang(Var("x")), AVar("u")))

    def test_term_main(self):
        sf = parse_program("main = ![refl(\\a:P.a)] \\a:P.a;")
        assert sf.main_is_term
        assert isinstance(sf.main, TBang)

    def test_defs_reference_earlier_defs(self):
        sf = parse_program("def f = \\a:P. a; def g = f; main = g;")
        assert alpha_eq(sf.main, Lam("a", P, Var("a")))

    def test_forward_reference_rejected(self):
        with pytest.raises(UndefinedName):
            parse_program("def f = g; def g = \\a:P. a; main = f;")

    def test_recursive_definition_rejected(self):
        with pytest.raises(UndefinedName):
            parse_program("def f = f; main = f;")

    def test_duplicate_definition_rejected(self):
        with pytest.raises(ParseError):
            parse_program("def f = \\a:P. a; def f = \\b:P. b; main = f;")

    def test_module_without_main(self):
        module = parse_module("def id = \\a:P. a;")
        assert module.main is None
        assert module.defs[0][0] == "id"

    def test_chained_modules(self):
        first = parse_module("def id = \\a:P. a;")
        second = parse_module("main = !(id);", initial_defs=first.defs)
        assert alpha_eq(second.main, Bang(Lam("a", P, Var("a"))))

    def test_mixed_bangs_rejected(self):
        with pytest.raises(ParseError):
            parse_program("main = (![refl(x)] x) (!y);")

    def test_expansion_enters_trails(self):
        sf = parse_program("def id = \\a:P. a; main = ![refl(id)] id;")
        assert alpha_eq(sf.main, TBang(*_refl_id()))

    def test_shadowing_binder_wins_over_def(self):
        sf = parse_program("def a = \\b:P. b; main = \\a:P. a;")
        assert alpha_eq(sf.main, Lam("c", P, Var("c")))


def _refl_id():
    from trailcalc.syntax import Refl, TLam, TVar

    return Refl(Lam("a", P, Var("a"))), TLam("a", P, TVar("a"))


class TestExpressions:
    def test_inspect_branches(self):
        c = parse_code("inspect { ba => s; _ => t }")
        assert isinstance(c, Inspect)
        assert c.branches.labels() == (BranchLabel.BA, BranchLabel.DEFAULT)

    def test_audited_type(self):
        ty = parse_type("[!(\\a:P.a)]N")
        assert alpha_eq(ty, Audited(Bang(Lam("a", P, Var("a"))), Atom("N")))

    def test_trail_bb(self):
        q = parse_trail("bb(x, @u:P.@u)")
        assert alpha_eq(q, Bb(Var("x"), "u", P, AVar("u")))

    def test_comments(self):
        c = parse_code("\\a:P. a -- the identity\n")
        assert alpha_eq(c, Lam("a", P, Var("a")))

    def test_bang_extends_right(self):
        assert alpha_eq(parse_code("!f x"), Bang(parse_code("f x")))

    def test_code_rejects_trail_bang(self):
        with pytest.raises(ParseError):
            parse_code("![refl(x)] x")

    def test_term_requires_trails(self):
        with pytest.raises(ParseError):
            parse_term("!x")


class TestRoundTrip:
    @given(gen.types)
    @settings(max_examples=300)
    def test_types(self, ty):
        assert alpha_eq(parse_type(pretty(ty)), ty)

    @given(gen.codes)
    @settings(max_examples=300)
    def test_codes(self, c):
        assert alpha_eq(parse_code(pretty(c)), c)

    @given(gen.terms)
    @settings(max_examples=300)
    def test_terms(self, m):
        assert alpha_eq(parse_term(pretty(m)), m)

    @given(gen.trails)
    @settings(max_examples=300)
    def test_trails(self, q):
        assert alpha_eq(parse_trail(pretty(q)), q)


class TestFuzz:
    @given(st.text(max_size=60))
    @settings(max_examples=300)
    def test_garbage_never_panics(self, text):
        for production in (parse_code, parse_term, parse_trail, parse_type):
            try:
                production(text)
            except ParseError:
                pass

    @given(gen.codes, st.integers(0, 200), st.sampled_from(")]};.,:=!@\\"))
    @settings(max_examples=300)
    def test_mutated_pretty_never_panics(self, c, pos, junk):
        text = pretty(c)
        pos = pos % (len(text) + 1)
        mutated = text[:pos] + junk + text[pos:]
        try:
            parse_code(mutated)
        except ParseError:
            pass
