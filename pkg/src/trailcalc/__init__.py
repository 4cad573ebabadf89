"""An audited lambda calculus with first-class reduction trails.

Evaluation of a bang-delimited region records its computation history as
a trail; programs can fold that history through inspection branch maps.
The package provides the syntax, a concrete grammar, the three typing
judgments, small-step reduction with pluggable strategies, reduction
graph exploration, a trail-free simplified calculus with an erasure map,
and bounded exhaustive enumerators for metatheory testing.
"""

from importlib import resources

from .parser import (
    ParseError,
    SourceFile,
    UndefinedName,
    parse_code,
    parse_module,
    parse_program,
    parse_term,
    parse_trail,
    parse_type,
)
from .reduction import (
    BoundExceeded,
    FuelExhausted,
    NotBangRooted,
    Strategy,
    decompose,
    is_normal_code,
    is_normal_term,
    normalize,
    reduction_graph,
    step,
    step_all,
    to_dot,
)
from .subst import (
    AuditedTermSubst,
    subst_code_audited,
    subst_code_simple,
    subst_term_audited,
    subst_term_simple,
    subst_trail_audited,
    subst_trail_simple,
    subst_type_audited,
    subst_type_simple,
)
from .syntax import (
    alpha_eq,
    BranchLabel,
    BranchMap,
    canon_key,
    canonical,
    free_vars,
    fresh,
    pretty,
)
from .trails import (
    EvalContext,
    MissingDefault,
    NotBoxFree,
    TrailContext,
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
from .typecheck import (
    TrailTypeResult,
    TypeCheckError,
    infer_code,
    infer_term,
    infer_trail,
    ttable,
)


def prelude_text() -> str:
    """The shipped prelude: Church numerals c0..c9, plus, times, pair."""
    return resources.files(__package__).joinpath("data/prelude.lhc").read_text()
