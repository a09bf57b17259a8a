"""Workbench for the choice-free synchronous pi-calculus and its
asynchronous fragment: Boudol and Honda-Tokoro encodings, structural
congruence, reduction search, and mechanical validity checking."""

from .checker import (
    DEFAULT_CRITERIA,
    Criterion,
    CriterionReport,
    GeneratorConfig,
    SuiteBudgets,
    asyncify,
    check_barb_confluence,
    check_compositionality,
    check_divergence_reflection,
    check_inert_confluence,
    check_lemma_suite,
    check_name_invariance,
    check_op_completeness,
    check_op_soundness,
    check_success_sensitiveness,
    first_violation,
    generate_terms,
    run_suite,
)
from .congruence import (
    EqBudget,
    NormalForm,
    canonical_state,
    deep_canon,
    expose,
    nf_to_process,
    struct_eq_bounded,
    struct_eq_s,
    to_normal_form,
    unfold_replications,
)
from .encodings import (
    Context,
    EncodingScheme,
    Mutation,
    RenamingPolicy,
    anchor_steps,
    context_for,
    decompose,
    encode,
    fill,
    mutant_encoder,
    policy_image,
)
from .reduction import (
    RedexDescriptor,
    ReductionGraph,
    Trace,
    TraceStep,
    diverges_bounded,
    explore,
    has_success,
    inert_reducts,
    may_succeed,
    reduces_to,
    reduct_candidates,
)
from .syntax import (
    NIL,
    SUCCESS,
    Hole,
    Input,
    Name,
    Nil,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    Success,
    alpha_canonical,
    alpha_eq,
    apply_renaming,
    bound_names,
    free_names,
    fresh,
    fresh_name,
    has_replication,
    is_async,
    par_all,
    substitute,
    term_size,
    user,
)
from .text import ParseError, parse, pprint
from .verdicts import Outcome, Verdict

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CRITERIA",
    "Criterion",
    "CriterionReport",
    "GeneratorConfig",
    "SuiteBudgets",
    "asyncify",
    "check_barb_confluence",
    "check_compositionality",
    "check_divergence_reflection",
    "check_inert_confluence",
    "check_lemma_suite",
    "check_name_invariance",
    "check_op_completeness",
    "check_op_soundness",
    "check_success_sensitiveness",
    "first_violation",
    "generate_terms",
    "run_suite",
    "EqBudget",
    "NormalForm",
    "canonical_state",
    "deep_canon",
    "expose",
    "nf_to_process",
    "struct_eq_bounded",
    "struct_eq_s",
    "to_normal_form",
    "unfold_replications",
    "Context",
    "EncodingScheme",
    "Mutation",
    "RenamingPolicy",
    "anchor_steps",
    "context_for",
    "decompose",
    "encode",
    "fill",
    "mutant_encoder",
    "policy_image",
    "RedexDescriptor",
    "ReductionGraph",
    "Trace",
    "TraceStep",
    "diverges_bounded",
    "explore",
    "has_success",
    "inert_reducts",
    "may_succeed",
    "reduces_to",
    "reduct_candidates",
    "NIL",
    "SUCCESS",
    "Hole",
    "Input",
    "Name",
    "Nil",
    "Output",
    "Par",
    "Process",
    "Repl",
    "Restrict",
    "Success",
    "alpha_canonical",
    "alpha_eq",
    "apply_renaming",
    "bound_names",
    "free_names",
    "fresh",
    "fresh_name",
    "has_replication",
    "is_async",
    "par_all",
    "substitute",
    "term_size",
    "user",
    "ParseError",
    "parse",
    "pprint",
    "Outcome",
    "Verdict",
    "__version__",
]
