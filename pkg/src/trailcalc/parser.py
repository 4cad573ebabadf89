"""Concrete syntax for programs, codes, terms, trails, and types.

The grammar (comments run ``--`` to end of line):

    program  ::=  { "def" NAME "=" expr ";" }  [ "main" "=" expr ";" ]
    type     ::=  tatom [ "->" type ]                   -- right associative
    tatom    ::=  NAME  |  "(" type ")"  |  "[" expr "]" tatom
    expr     ::=  "\\" NAME ":" type "." expr
               |  "let" "@" NAME ":" type "=" expr "in" expr
               |  "!" [ "[" trail "]" ] expr
               |  atom { atom }                         -- left associative
    atom     ::=  NAME  |  "@" NAME  |  "(" expr ")"
               |  "inspect" "{" branches "}"
    branches ::=  [ label "=>" expr { ";" label "=>" expr } [";"] ]
    label    ::=  "refl" | "trans" | "ba" | "bb" | "ti" | "lam" | "app"
               |  "let" | "trpl0" | "trpl1" | "_"
    trail    ::=  "refl" "(" expr ")"
               |  "trans" "(" trail "," trail ")"
               |  "ba" "(" NAME ":" type "." expr "," expr ")"
               |  "bb" "(" expr "," "@" NAME ":" type "." expr ")"
               |  "ti" "(" trail "," "{" branches "}" ")"
               |  "tlam" "(" NAME ":" type "." trail ")"
               |  "tapp" "(" trail "," trail ")"
               |  "tlet" "(" trail "," "@" NAME ":" type "." trail ")"
               |  "trpl" "(" "{" trail branches "}" ")"

Prefix forms (lambda, let, bang) extend as far right as possible.  An
expression parses as a term when any bang carries a ``[trail]`` subscript
and as a code when none does; mixing the two in one expression is an
error.  ``def`` names are pure abbreviations: each body must be a closed
code and is inlined into everything after it before any other
processing.  This file format (UTF-8, extension ``.lhc``) is the
interchange format for golden tests: printing and reparsing any value
round-trips.
"""

from __future__ import annotations

import re
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
    LABEL_BY_TOKEN,
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
    Var,
    free_vars,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class UndefinedName(ParseError):
    pass


KEYWORDS = {
    "def", "main", "let", "in", "inspect",
    "refl", "trans", "ba", "bb", "ti", "tlam", "tapp", "tlet", "trpl",
    "_",
}

# Contextual label tokens: legal variable names elsewhere.
LABEL_ONLY = {"lam", "app", "trpl0", "trpl1"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>--[^\n]*)
  | (?P<arrow>->)
  | (?P<darrow>=>)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[\\().\[\]{};,:=!@])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "name", "kw", or the literal punctuation
    text: str
    line: int
    col: int


def _lex(text: str) -> list:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind == "name":
            tokkind = "kw" if lexeme in KEYWORDS else "name"
            tokens.append(_Tok(tokkind, lexeme, line, col))
        elif kind == "arrow":
            tokens.append(_Tok("->", "->", line, col))
        elif kind == "darrow":
            tokens.append(_Tok("=>", "=>", line, col))
        elif kind == "punct":
            tokens.append(_Tok(lexeme, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Tok("eof", "", line, col))
    return tokens


# The parser builds term-shaped trees; a historyless bang is marked with
# this sentinel trail, replaced during code/term classification.
_NO_TRAIL = Refl(Var("?historyless"))


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.tokens[self.pos]

    def next(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def err(self, message: str, tok: _Tok = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect(self, kind: str, what: str = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind and not (kind == "kw" and tok.kind == "kw"):
            raise self.err(f"expected {what or kind}, found {tok.text or 'end of input'!r}")
        return self.next()

    def expect_kw(self, word: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "kw" or tok.text != word:
            raise self.err(f"expected '{word}', found {tok.text or 'end of input'!r}")
        return self.next()

    def name(self, what: str = "identifier") -> str:
        tok = self.peek()
        if tok.kind != "name":
            raise self.err(f"expected {what}, found {tok.text or 'end of input'!r}")
        return self.next().text

    # -- types --------------------------------------------------------

    def type_(self):
        left = self.tatom()
        if self.peek().kind == "->":
            self.next()
            return Arrow(left, self.type_())
        return left

    def tatom(self):
        tok = self.peek()
        if tok.kind == "name":
            return Atom(self.next().text)
        if tok.kind == "(":
            self.next()
            ty = self.type_()
            self.expect(")")
            return ty
        if tok.kind == "[":
            self.next()
            code = self.code_expr("audited type")
            self.expect("]")
            return Audited(code, self.tatom())
        raise self.err(f"expected a type, found {tok.text or 'end of input'!r}")

    # -- expressions (surface: term-shaped, sentinel for code bangs) ---

    def expr(self):
        tok = self.peek()
        if tok.kind == "\\":
            self.next()
            var = self.name("binder")
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            return TLam(var, annot, self.expr())
        if tok.kind == "kw" and tok.text == "let":
            self.next()
            self.expect("@")
            var = self.name("audited binder")
            self.expect(":")
            annot = self.type_()
            self.expect("=")
            bound = self.expr()
            self.expect_kw("in")
            return TLet(var, annot, bound, self.expr())
        if tok.kind == "!":
            self.next()
            if self.peek().kind == "[":
                self.next()
                trail = self.trail()
                self.expect("]")
                return TBang(trail, self.expr())
            return TBang(_NO_TRAIL, self.expr())
        return self.app_chain()

    def app_chain(self):
        out = self.atom()
        while self._starts_atom(self.peek()):
            out = TApp(out, self.atom())
        return out

    def _starts_atom(self, tok: _Tok) -> bool:
        return (
            tok.kind in ("name", "(", "@")
            or (tok.kind == "kw" and tok.text == "inspect")
        )

    def atom(self):
        tok = self.peek()
        if tok.kind == "name":
            return TVar(self.next().text)
        if tok.kind == "@":
            self.next()
            return TAVar(self.name("audited variable"))
        if tok.kind == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "kw" and tok.text == "inspect":
            self.next()
            self.expect("{")
            branches = self.branches(self.expr)
            self.expect("}")
            return TInspect(branches)
        raise self.err(f"expected an expression, found {tok.text or 'end of input'!r}")

    def branches(self, payload_parser) -> BranchMap:
        entries = []
        seen = set()
        while self.peek().kind != "}":
            tok = self.peek()
            label = None
            if tok.kind == "kw" and tok.text in LABEL_BY_TOKEN:
                label = LABEL_BY_TOKEN[tok.text]
            elif tok.kind == "name" and tok.text in LABEL_ONLY:
                label = LABEL_BY_TOKEN[tok.text]
            if label is None:
                raise self.err(f"expected a branch label, found {tok.text!r}")
            if label in seen:
                raise self.err(f"duplicate branch label {tok.text!r}")
            seen.add(label)
            self.next()
            self.expect("=>")
            entries.append((label, payload_parser()))
            if self.peek().kind == ";":
                self.next()
            else:
                break
        return BranchMap.make(entries)

    # -- trails ---------------------------------------------------------

    def trail(self):
        tok = self.peek()
        if tok.kind != "kw":
            raise self.err(f"expected a trail, found {tok.text or 'end of input'!r}")
        word = tok.text
        if word == "refl":
            self.next()
            self.expect("(")
            subject = self.code_expr("refl")
            self.expect(")")
            return Refl(subject)
        if word == "trans":
            self.next()
            self.expect("(")
            first = self.trail()
            self.expect(",")
            second = self.trail()
            self.expect(")")
            return Trans(first, second)
        if word == "ba":
            self.next()
            self.expect("(")
            var = self.name("binder")
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            body = self.code_expr("ba body")
            self.expect(",")
            arg = self.code_expr("ba argument")
            self.expect(")")
            return Ba(var, annot, body, arg)
        if word == "bb":
            self.next()
            self.expect("(")
            bound = self.code_expr("bb bound code")
            self.expect(",")
            self.expect("@")
            var = self.name("audited binder")
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            body = self.code_expr("bb body")
            self.expect(")")
            return Bb(bound, var, annot, body)
        if word == "ti":
            self.next()
            self.expect("(")
            history = self.trail()
            self.expect(",")
            self.expect("{")
            branches = self.branches(lambda: self.code_expr("ti branch"))
            self.expect("}")
            self.expect(")")
            return Ti(history, branches)
        if word == "tlam":
            self.next()
            self.expect("(")
            var = self.name("binder")
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            inner = self.trail()
            self.expect(")")
            return QLam(var, annot, inner)
        if word == "tapp":
            self.next()
            self.expect("(")
            left = self.trail()
            self.expect(",")
            right = self.trail()
            self.expect(")")
            return QApp(left, right)
        if word == "tlet":
            self.next()
            self.expect("(")
            left = self.trail()
            self.expect(",")
            self.expect("@")
            var = self.name("audited binder")
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            right = self.trail()
            self.expect(")")
            return QLet(left, var, annot, right)
        if word == "trpl":
            self.next()
            self.expect("(")
            self.expect("{")
            branches = self.branches(self.trail)
            self.expect("}")
            self.expect(")")
            return Trpl(branches)
        raise self.err(f"expected a trail, found {word!r}")

    def code_expr(self, where: str):
        tok = self.peek()
        surface = self.expr()
        try:
            return _to_code(surface)
        except _HasTrail:
            raise self.err(f"trails are not allowed inside a {where} code", tok)


class _HasTrail(Exception):
    pass


class _MissingTrail(Exception):
    pass


def _to_code(x):
    match x:
        case TVar(name):
            return Var(name)
        case TAVar(name):
            return AVar(name)
        case TLam(var, annot, body):
            return Lam(var, annot, _to_code(body))
        case TApp(fun, arg):
            return App(_to_code(fun), _to_code(arg))
        case TBang(trail, body):
            if trail is not _NO_TRAIL:
                raise _HasTrail()
            return Bang(_to_code(body))
        case TLet(var, annot, bound, body):
            return Let(var, annot, _to_code(bound), _to_code(body))
        case TInspect(branches):
            return Inspect(branches.map_payloads(_to_code))
    raise TypeError(f"unexpected surface node {x!r}")


def _to_term(x):
    match x:
        case TVar() | TAVar():
            return x
        case TLam(var, annot, body):
            return TLam(var, annot, _to_term(body))
        case TApp(fun, arg):
            return TApp(_to_term(fun), _to_term(arg))
        case TBang(trail, body):
            if trail is _NO_TRAIL:
                raise _MissingTrail()
            return TBang(trail, _to_term(body))
        case TLet(var, annot, bound, body):
            return TLet(var, annot, _to_term(bound), _to_term(body))
        case TInspect(branches):
            return TInspect(branches.map_payloads(_to_term))
    raise TypeError(f"unexpected surface node {x!r}")


def _mentions_trail(x) -> bool:
    match x:
        case TBang(trail, body):
            return trail is not _NO_TRAIL or _mentions_trail(body)
        case TLam(_, _, body):
            return _mentions_trail(body)
        case TApp(fun, arg):
            return _mentions_trail(fun) or _mentions_trail(arg)
        case TLet(_, _, bound, body):
            return _mentions_trail(bound) or _mentions_trail(body)
        case TInspect(branches):
            return any(_mentions_trail(p) for _, p in branches.items())
        case _:
            return False


# ---------------------------------------------------------------------------
# Definition expansion: capture-avoiding inlining of closed codes.  Def
# bodies are closed, so plain shadowing-aware replacement suffices; it
# enters bangs, annotations, and trails, unlike ordinary substitution.

def _expand(x, env: dict):
    if not env:
        return x
    match x:
        case TVar(name) if name in env:
            from .trails import term_of_code

            return term_of_code(env[name])
        case Var(name) if name in env:
            return env[name]
        case TVar() | TAVar() | Var() | AVar() | Atom():
            return x
        case Arrow(dom, cod):
            return Arrow(_expand(dom, env), _expand(cod, env))
        case Audited(code, body):
            return Audited(_expand(code, env), _expand(body, env))
        case Lam(var, annot, body):
            env2 = {k: v for k, v in env.items() if k != var}
            return Lam(var, _expand(annot, env), _expand(body, env2))
        case TLam(var, annot, body):
            env2 = {k: v for k, v in env.items() if k != var}
            return TLam(var, _expand(annot, env), _expand(body, env2))
        case App(fun, arg):
            return App(_expand(fun, env), _expand(arg, env))
        case TApp(fun, arg):
            return TApp(_expand(fun, env), _expand(arg, env))
        case Bang(body):
            return Bang(_expand(body, env))
        case TBang(trail, body):
            if trail is _NO_TRAIL:
                return TBang(trail, _expand(body, env))
            return TBang(_expand(trail, env), _expand(body, env))
        case Let(var, annot, bound, body):
            return Let(var, _expand(annot, env), _expand(bound, env), _expand(body, env))
        case TLet(var, annot, bound, body):
            return TLet(var, _expand(annot, env), _expand(bound, env), _expand(body, env))
        case Inspect(branches):
            return Inspect(branches.map_payloads(lambda p: _expand(p, env)))
        case TInspect(branches):
            return TInspect(branches.map_payloads(lambda p: _expand(p, env)))
        case Refl(subject):
            return Refl(_expand(subject, env))
        case Trans(first, second):
            return Trans(_expand(first, env), _expand(second, env))
        case Ba(var, annot, body, arg):
            env2 = {k: v for k, v in env.items() if k != var}
            return Ba(var, _expand(annot, env), _expand(body, env2), _expand(arg, env))
        case Bb(bound, var, annot, body):
            return Bb(_expand(bound, env), var, _expand(annot, env), _expand(body, env))
        case Ti(history, branches):
            return Ti(_expand(history, env), branches.map_payloads(lambda p: _expand(p, env)))
        case QLam(var, annot, inner):
            env2 = {k: v for k, v in env.items() if k != var}
            return QLam(var, _expand(annot, env), _expand(inner, env2))
        case QApp(left, right):
            return QApp(_expand(left, env), _expand(right, env))
        case QLet(left, var, annot, right):
            return QLet(_expand(left, env), var, _expand(annot, env), _expand(right, env))
        case Trpl(branches):
            return Trpl(branches.map_payloads(lambda p: _expand(p, env)))
        case _:
            raise TypeError(f"unexpected node {x!r}")


@dataclass(frozen=True)
class SourceFile:
    """A parsed program: definitions (already inlined everywhere) and the
    main expression.  The raw text is retained for diagnostics."""

    defs: tuple  # of (name, Code), post-inlining
    main: object  # Code or Term, or None for a definitions-only module
    text: str
    path: str = "<input>"

    @property
    def main_is_term(self) -> bool:
        from .syntax import is_term

        return self.main is not None and is_term(self.main)


def parse_program(text: str, path: str = "<input>") -> SourceFile:
    """Parse a program; definitions are inlined into main before return."""
    module = parse_module(text, path)
    if module.main is None:
        raise ParseError("program has no main", 1, 1)
    return module


def parse_module(text: str, path: str = "<input>", initial_defs=()) -> SourceFile:
    """Like parse_program but main is optional (prelude-style files).
    `initial_defs` seeds the definition environment, so several files can
    be chained; the returned defs include the seeds."""
    p = _Parser(text)
    env: dict = dict(initial_defs)
    defs = list(initial_defs)
    while p.peek().kind == "kw" and p.peek().text == "def":
        p.next()
        name_tok = p.peek()
        name = p.name("definition name")
        if name in env:
            raise ParseError(f"duplicate definition {name!r}", name_tok.line, name_tok.col)
        p.expect("=")
        surface = p.expr()
        p.expect(";")
        if _mentions_trail(surface):
            raise ParseError(
                f"definition {name!r} contains a trail", name_tok.line, name_tok.col
            )
        body = _expand(_to_code(surface), env)
        fs, fa = free_vars(body)
        if fs or fa:
            loose = sorted(fs | {f"@{v}" for v in fa})[0]
            raise UndefinedName(
                f"definition {name!r} mentions undefined name {loose!r}",
                name_tok.line,
                name_tok.col,
            )
        env[name] = body
        defs.append((name, body))

    main = None
    if p.peek().kind == "kw" and p.peek().text == "main":
        p.next()
        p.expect("=")
        surface = _expand(p.expr(), env)
        p.expect(";")
        if _mentions_trail(surface):
            try:
                main = _to_term(surface)
            except _MissingTrail:
                raise ParseError("main mixes trail-carrying and bare bangs", 1, 1)
        else:
            main = _to_code(surface)
    tok = p.peek()
    if tok.kind != "eof":
        raise p.err(f"unexpected {tok.text!r} after program")
    return SourceFile(tuple(defs), main, text, path)


def _parse_single(text: str, production) -> object:
    p = _Parser(text)
    out = production(p)
    tok = p.peek()
    if tok.kind != "eof":
        raise p.err(f"unexpected {tok.text!r} after expression")
    return out


def parse_code(text: str):
    surface = _parse_single(text, lambda p: p.expr())
    try:
        return _to_code(surface)
    except _HasTrail:
        raise ParseError("expected a code, found a trail-carrying bang", 1, 1)


def parse_term(text: str):
    surface = _parse_single(text, lambda p: p.expr())
    try:
        return _to_term(surface)
    except _MissingTrail:
        raise ParseError("expected a term: every bang needs a [trail]", 1, 1)


def parse_trail(text: str):
    return _parse_single(text, lambda p: p.trail())


def parse_type(text: str):
    return _parse_single(text, lambda p: p.type_())
