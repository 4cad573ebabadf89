"""Command-line front end.

Commands: check | eval | trace | graph | erase | enumerate.  Exit codes:
0 ok, 1 type error, 2 parse error, 3 fuel or bound exhausted.  Output is
byte-identical across runs for the same inputs and flags.

Programs whose main is a bare code are wrapped as ![refl(main)] before
evaluation, matching the convention that evaluation starts on a bang
with an empty history.  Several input files may be given; definitions
accumulate left to right (so a prelude file can precede a program) and
exactly one file must provide main.
"""

from __future__ import annotations

import argparse
import sys

from .parser import ParseError, SourceFile, parse_module
from .reduction import (
    BoundExceeded,
    FuelExhausted,
    Strategy,
    normalize,
    reduction_graph,
    step,
    to_dot,
)
from .simplified import erase_code, erase_term, erase_type, hs_pretty
from .syntax import TBang, is_term, pretty
from .trails import term_of_code
from .typecheck import TypeCheckError, infer_code, infer_term

_STRATEGIES = {
    "cbv": Strategy.CBV,
    "lo": Strategy.LEFTMOST_OUTERMOST,
    "all": Strategy.ALL,
}


def _load(paths) -> SourceFile:
    defs: tuple = ()
    main = None
    main_path = "<input>"
    text_all = []
    for path in paths:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        text_all.append(text)
        module = parse_module(text, path, initial_defs=defs)
        defs = module.defs
        if module.main is not None:
            if main is not None:
                print(f"{path}:1:1: more than one main", file=sys.stderr)
                raise SystemExit(2)
            main = module.main
            main_path = path
    if main is None:
        print(f"{paths[-1]}:1:1: no main in any input file", file=sys.stderr)
        raise SystemExit(2)
    return SourceFile(defs, main, "".join(text_all), main_path)


def _parse_errors(fn):
    def run(args):
        path = args.files[0] if args.files else "<input>"
        try:
            return fn(args)
        except ParseError as e:
            print(f"{path}:{e.line}:{e.col}: {str(e).split(': ', 1)[1]}", file=sys.stderr)
            return 2
        except TypeCheckError as e:
            print(f"{path}:1:1: {e.render()}", file=sys.stderr)
            return 1
        except FuelExhausted as e:
            print(f"{path}: fuel exhausted after {len(e.steps)} steps", file=sys.stderr)
            return 3
        except BoundExceeded as e:
            print(f"{path}: {e}", file=sys.stderr)
            return 3
        except OSError as e:
            print(str(e), file=sys.stderr)
            return 2

    return run


def _as_runnable(main) -> TBang:
    from .syntax import Bang, Refl
    from .trails import code_of

    if is_term(main):
        if isinstance(main, TBang):
            return main
        return TBang(Refl(code_of(main)), main)
    if isinstance(main, Bang):
        return term_of_code(main)
    return TBang(Refl(main), term_of_code(main))


@_parse_errors
def cmd_check(args) -> int:
    source = _load(args.files)
    if source.main_is_term:
        ty, code = infer_term((), (), source.main)
        print(f"type: {pretty(ty)}")
        print(f"code: {pretty(code)}")
    else:
        ty = infer_code((), (), source.main)
        print(f"type: {pretty(ty)}")
    return 0


@_parse_errors
def cmd_eval(args) -> int:
    source = _load(args.files)
    strategy = _STRATEGIES[args.strategy]
    if strategy is Strategy.ALL:
        print("eval needs a deterministic strategy (cbv or lo)", file=sys.stderr)
        return 2
    term = _as_runnable(source.main)
    infer_term((), (), term)
    final, steps = normalize(term, strategy, args.fuel)
    print(f"steps: {len(steps)}")
    print(pretty(final, elide_trails=not args.show_trail))
    return 0


@_parse_errors
def cmd_trace(args) -> int:
    source = _load(args.files)
    strategy = _STRATEGIES[args.strategy]
    if strategy is Strategy.ALL:
        print("trace needs a deterministic strategy (cbv or lo)", file=sys.stderr)
        return 2
    current = _as_runnable(source.main)
    infer_term((), (), current)
    count = 0
    while count < args.fuel:
        got = step(current, strategy)
        if got is None:
            break
        current, info = got
        count += 1
        where = "/".join(map(str, info.path)) or "root"
        print(f"step {count}: {info.rule} at {where}")
        print(f"  delta: {pretty(info.delta)}")
        print(f"  term: {pretty(current, elide_trails=not args.show_trail)}")
    else:
        if step(current, strategy) is not None:
            raise FuelExhausted(current, range(count))
    print(f"normal form after {count} steps")
    print(pretty(current, elide_trails=not args.show_trail))
    return 0


@_parse_errors
def cmd_graph(args) -> int:
    source = _load(args.files)
    term = _as_runnable(source.main)
    infer_term((), (), term)
    graph = reduction_graph(term, fuel=args.fuel, max_nodes=args.max_nodes)
    dot = to_dot(graph, show_trail=args.show_trail)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(dot)
        print(f"nodes: {len(graph.nodes)} edges: {len(graph.edges)}")
    else:
        sys.stdout.write(dot)
    if not graph.complete:
        print("graph truncated by fuel bound", file=sys.stderr)
        return 3
    return 0


@_parse_errors
def cmd_erase(args) -> int:
    source = _load(args.files)
    main = source.main
    if source.main_is_term:
        ty, _ = infer_term((), (), main)
        erased = erase_term(main)
    else:
        ty = infer_code((), (), main)
        erased = erase_code(main)
    print(hs_pretty(erased))
    print(f"type: {hs_pretty(erase_type(ty))}")
    return 0


def cmd_enumerate(args) -> int:
    from .enumeration import enumerate_codes

    entries = enumerate_codes(args.size)
    for code, ty in entries:
        print(pretty(code))
    print(f"count: {len(entries)}", file=sys.stderr)
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="trailcalc",
        description="Typecheck, run, and audit programs of the trail calculus.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, files=True):
        if files:
            p.add_argument("files", nargs="+", help=".lhc input files (defs accumulate)")
        p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="cbv")
        p.add_argument("--fuel", type=int, default=10000)
        p.add_argument("--max-nodes", type=int, default=50000)
        p.add_argument("--show-trail", action="store_true")
        p.add_argument("--dot", metavar="PATH", default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--oracle-bound", type=int, default=7)

    for name, fn in (
        ("check", cmd_check),
        ("eval", cmd_eval),
        ("trace", cmd_trace),
        ("graph", cmd_graph),
        ("erase", cmd_erase),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("enumerate")
    p.add_argument("size", type=int)
    common(p, files=False)
    p.set_defaults(fn=cmd_enumerate)
    return top


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
