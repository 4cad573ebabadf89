"""Church numerals and arithmetic over the atomic type P.

The calculus has no primitive numbers, so the worked examples and the
step-counting inspection run on Church encodings at the fixed type
N = (P -> P) -> P -> P.  The shipped prelude file spells out the same
definitions in concrete syntax; a test keeps the two in sync.
"""

from __future__ import annotations

from .syntax import (
    App,
    Arrow,
    Atom,
    BranchLabel,
    BranchMap,
    Code,
    Lam,
    Var,
    alpha_eq,
)

P = Atom("P")
PP = Arrow(P, P)
NUMERAL_TYPE = Arrow(PP, Arrow(P, P))


def church(n: int) -> Code:
    """The numeral \\f:P -> P. \\x:P. f (f ... (f x))."""
    if n < 0:
        raise ValueError("Church numerals are non-negative")
    body = Var("x")
    for _ in range(n):
        body = App(Var("f"), body)
    return Lam("f", PP, Lam("x", P, body))


def church_value(code) -> int | None:
    """Recognize a normal-form numeral, up to alpha; None otherwise."""
    match code:
        case Lam(f, annot_f, Lam(x, annot_x, body)) if annot_f == PP and annot_x == P:
            n = 0
            while True:
                match body:
                    case Var(name) if name == x:
                        return n
                    case App(Var(name), rest) if name == f and name != x:
                        n += 1
                        body = rest
                    case _:
                        return None
        case _:
            return None


def plus_code() -> Code:
    """\\m. \\n. \\f. \\x. m f (n f x), fully annotated."""
    return Lam(
        "m",
        NUMERAL_TYPE,
        Lam(
            "n",
            NUMERAL_TYPE,
            Lam(
                "f",
                PP,
                Lam(
                    "x",
                    P,
                    App(
                        App(Var("m"), Var("f")),
                        App(App(Var("n"), Var("f")), Var("x")),
                    ),
                ),
            ),
        ),
    )


def times_code() -> Code:
    """\\m. \\n. \\f. m (n f), fully annotated."""
    return Lam(
        "m",
        NUMERAL_TYPE,
        Lam(
            "n",
            NUMERAL_TYPE,
            Lam("f", PP, App(Var("m"), App(Var("n"), Var("f")))),
        ),
    )


def pair_code() -> Code:
    """\\x. \\y. \\p. p x y at result type N."""
    nnn = Arrow(NUMERAL_TYPE, Arrow(NUMERAL_TYPE, NUMERAL_TYPE))
    return Lam(
        "x",
        NUMERAL_TYPE,
        Lam(
            "y",
            NUMERAL_TYPE,
            Lam("p", nnn, App(App(Var("p"), Var("x")), Var("y"))),
        ),
    )


def step_count_branches() -> BranchMap:
    """The step-counting inspection branch map, over Church numerals.

    Contractions count one; transitivity and the binary congruences add
    their subcounts; the lambda congruence passes its subcount through;
    everything else counts zero.  Every branch typechecks at the branch
    table for B = N.
    """
    one = church(1)
    zero = church(0)
    ident = Lam("c", NUMERAL_TYPE, Var("c"))
    add = plus_code()
    return BranchMap.make(
        {
            BranchLabel.BA: one,
            BranchLabel.BB: one,
            BranchLabel.TI: one,
            BranchLabel.LAM: ident,
            BranchLabel.TRANS: add,
            BranchLabel.APP: add,
            BranchLabel.LET: add,
            BranchLabel.TRPL_CONS: add,
            BranchLabel.DEFAULT: zero,
        }
    )


def step_count_branches_term() -> BranchMap:
    from .trails import term_of_code

    return step_count_branches().map_payloads(term_of_code)


def count_contractions(q) -> int:
    """Meta-level integer fold of a trail with the step-counting weights:
    what the Church-numeral fold computes, evaluated in arithmetic."""
    from .syntax import Ba, Bb, QApp, QLam, QLet, Refl, Ti, Trans, Trpl

    match q:
        case Refl():
            return 0
        case Ba() | Bb() | Ti():
            return 1
        case Trans(first, second) | QApp(first, second):
            return count_contractions(first) + count_contractions(second)
        case QLam(_, _, inner):
            return count_contractions(inner)
        case QLet(left, _, _, right):
            return count_contractions(left) + count_contractions(right)
        case Trpl(branches):
            return sum(count_contractions(p) for _, p in branches.items())
        case _:
            raise TypeError(f"not a trail: {q!r}")
