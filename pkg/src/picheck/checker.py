"""Executable validity criteria for the two translations, over term corpora.

Five classic criteria (compositionality, name invariance, operational
completeness and soundness, divergence reflection, success sensitiveness)
plus a suite of smaller commutation and preservation properties, each
returning a three-valued verdict.  A criterion passes a corpus only with
zero Violated entries; bounded searches report Inconclusive instead of
guessing.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator

from . import verdicts
from .congruence import EqBudget, struct_eq_bounded, to_normal_form
from .encodings import (
    EncodingScheme,
    anchor_steps,
    context_for,
    decompose,
    encode,
    fill,
    policy_image,
)
from .reduction import (
    Trace,
    TraceStep,
    diverges_bounded,
    explore,
    has_success,
    inert_reducts,
    may_succeed,
    reduct_candidates,
    reduces_to,
)
from .syntax import (
    NIL,
    SUCCESS,
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
    free_names,
    fresh_name,
    is_async,
    names,
    substitute,
    term_size,
    user,
)
from .verdicts import Verdict

Translate = Callable[[Process], Process]


@dataclass(frozen=True)
class GeneratorConfig:
    """Corpus shape: exhaustive up to a node count, or seeded random."""

    max_nodes: int = 4
    name_alphabet: tuple[Name, ...] = (user("x"), user("y"))
    allow_replication: bool = True
    allow_success: bool = True
    random_count: int | None = None
    seed: int = 0


def _exhaustive(cfg: GeneratorConfig) -> Iterator[Process]:
    alphabet = list(cfg.name_alphabet)
    seen = {alpha_canonical(NIL)}
    by_size: dict[int, list[Process]] = {0: [NIL]}
    yield NIL
    for k in range(1, cfg.max_nodes + 1):
        layer: list[Process] = []

        def add(t: Process) -> None:
            key = alpha_canonical(t)
            if key not in seen:
                seen.add(key)
                layer.append(t)

        if k == 1 and cfg.allow_success:
            add(SUCCESS)
        for cont in by_size[k - 1]:
            for x in alphabet:
                for y in alphabet:
                    add(Output(x, y, cont))
                for z in alphabet:
                    add(Input(x, z, cont))
        for body in by_size[k - 1]:
            for b in alphabet:
                add(Restrict(b, body))
            if cfg.allow_replication:
                add(Repl(body))
        for i in range(k):
            for l in by_size[i]:
                for r in by_size[k - 1 - i]:
                    add(Par(l, r))
        by_size[k] = layer
        yield from layer


def _random_term(rng: random.Random, cfg: GeneratorConfig) -> Process:
    alphabet = list(cfg.name_alphabet)
    kinds = ["out", "in", "par", "new", "nil"]
    weights = [3, 3, 3, 2, 1]
    if cfg.allow_replication:
        kinds.append("repl")
        weights.append(1)
    if cfg.allow_success:
        kinds.append("ok")
        weights.append(1)

    def go(budget: int) -> Process:
        if budget <= 0:
            return NIL
        kind = rng.choices(kinds, weights)[0]
        match kind:
            case "nil":
                return NIL
            case "ok":
                return SUCCESS
            case "out":
                return Output(rng.choice(alphabet), rng.choice(alphabet), go(budget - 1))
            case "in":
                return Input(rng.choice(alphabet), rng.choice(alphabet), go(budget - 1))
            case "par":
                split = rng.randint(0, budget - 1)
                return Par(go(split), go(budget - 1 - split))
            case "new":
                return Restrict(rng.choice(alphabet), go(budget - 1))
            case "repl":
                return Repl(go(budget - 1))
        raise AssertionError(kind)

    return go(rng.randint(1, cfg.max_nodes))


def generate_terms(cfg: GeneratorConfig) -> Iterator[Process]:
    """Deterministic corpus stream.

    Exhaustive mode yields one representative per alpha-class, smallest terms
    first; random mode yields exactly ``random_count`` terms from the seed.
    """
    if not cfg.name_alphabet:
        raise ValueError("name alphabet must not be empty")
    if cfg.random_count is None:
        yield from _exhaustive(cfg)
        return
    rng = random.Random(cfg.seed)
    for _ in range(cfg.random_count):
        yield _random_term(rng, cfg)


class Criterion(Enum):
    COMPOSITIONALITY = "compositionality"
    NAME_INVARIANCE = "name-invariance"
    OP_COMPLETENESS = "op-completeness"
    OP_SOUNDNESS = "op-soundness"
    DIVERGENCE_REFLECTION = "divergence-reflection"
    SUCCESS_SENSITIVENESS = "success-sensitiveness"
    LEMMA_SUITE = "lemma-suite"
    BARB_CONFLUENCE = "barb-confluence"
    INERT_CONFLUENCE = "inert-confluence"


DEFAULT_CRITERIA = (
    Criterion.COMPOSITIONALITY,
    Criterion.NAME_INVARIANCE,
    Criterion.OP_COMPLETENESS,
    Criterion.OP_SOUNDNESS,
    Criterion.DIVERGENCE_REFLECTION,
    Criterion.SUCCESS_SENSITIVENESS,
    Criterion.LEMMA_SUITE,
)


@dataclass(frozen=True)
class SuiteBudgets:
    step_budget: int = 64
    eq: EqBudget = field(default_factory=EqBudget)
    state_cap: int = 10000
    # Soundness explores the full graph on both sides, so it gets a lower
    # cap than plain reachability; past it the verdict is Inconclusive.
    soundness_state_cap: int = 1500
    divergence_budget: int = 16
    success_budget: int = 16


@dataclass(frozen=True)
class CriterionReport:
    criterion: Criterion
    scheme: EncodingScheme
    holds: int
    violated: int
    inconclusive: int
    violations: tuple[tuple[Process, Verdict], ...]
    inconclusives: tuple[Process, ...]
    elapsed: float

    @property
    def checked(self) -> int:
        return self.holds + self.violated + self.inconclusive

    @property
    def passed(self) -> bool:
        return self.violated == 0


def _translator(scheme: EncodingScheme, translate: Translate | None) -> Translate:
    if translate is not None:
        return translate
    return lambda t: encode(t, scheme)


def check_compositionality(s: Process, scheme: EncodingScheme) -> Verdict:
    """The root operator factors through its dedicated target context,
    exactly for the context indexed by fn(s) and up to alpha for larger
    indices."""
    op, args = decompose(s)
    if not args:
        return verdicts.holds()
    lhs = encode(s, scheme)
    enc_args = tuple(encode(a, scheme) for a in args)
    n = free_names(s)
    try:
        exact = fill(context_for(op, n, scheme), enc_args) == lhs
        e1 = fresh_name(names(s))
        e2 = fresh_name(names(s) | {e1})
        wider = fill(context_for(op, n | {e1, e2}, scheme), enc_args)
        relaxed = alpha_eq(wider, lhs)
    except ValueError:
        return verdicts.violated(witness=(s, "context capture"))
    if exact and relaxed:
        return verdicts.holds()
    return verdicts.violated(witness=(s, "exact" if not exact else "alpha"))


def check_name_invariance(
    s: Process,
    sigma: dict[Name, Name],
    scheme: EncodingScheme,
    translate: Translate | None = None,
) -> Verdict:
    """Translating a renamed term equals renaming the translation (the
    renaming policy is the identity, so the same map is applied on both
    sides); holds for non-injective maps too."""
    tr = _translator(scheme, translate)
    lhs = tr(apply_renaming(s, sigma))
    rhs = apply_renaming(tr(s), policy_image(sigma))
    if alpha_eq(lhs, rhs):
        return verdicts.holds()
    witness = (s, tuple(sorted((str(k), str(v)) for k, v in sigma.items())))
    return verdicts.violated(witness=witness)


def check_op_completeness(
    s: Process,
    scheme: EncodingScheme,
    *,
    eq_budget: EqBudget | None = None,
    translate: Translate | None = None,
) -> Verdict:
    """Every source step is simulated in exactly the scheme's step count:
    one communication step, then only inert steps, landing on the encoded
    reduct.  A pattern miss falls back to plain bounded reachability so a
    defective encoder is reported Violated, not merely unmatched."""
    eq_budget = eq_budget or EqBudget()
    tr = _translator(scheme, translate)
    k = anchor_steps(scheme)
    enc_s = tr(s)
    details = []
    any_inconclusive = False
    for s1, _ in reduct_candidates(s):
        goal = tr(s1)
        matched: Trace | None = None
        stack: list[tuple[Process, int, tuple[TraceStep, ...]]] = [(enc_s, 0, ())]
        while stack and matched is None:
            state, depth, steps = stack.pop()
            if depth == k:
                v = struct_eq_bounded(state, goal, eq_budget)
                if v.is_holds:
                    matched = Trace(enc_s, steps)
                elif v.is_inconclusive:
                    any_inconclusive = True
                continue
            for q, rd in reduct_candidates(state):
                if depth >= 1 and not rd.inert:
                    continue
                stack.append((q, depth + 1, steps + (TraceStep(state, q, rd),)))
        if matched is not None:
            details.append((s1, matched, True))
            continue
        # Pattern misses are rare and the anchored walk already covers depth
        # k, so the fallback only needs a small cushion; a tight cap keeps a
        # defective encoder's exploding state space from stalling the suite.
        fallback = reduces_to(
            enc_s, goal, step_budget=k + 4, eq_budget=eq_budget, state_cap=1024
        )
        if fallback.is_holds:
            details.append((s1, fallback.witness, False))
        elif fallback.is_violated:
            return verdicts.violated(witness=(s, s1), steps=k)
        else:
            any_inconclusive = True
    if any_inconclusive:
        return verdicts.inconclusive(witness=s, steps=k)
    return verdicts.holds(witness=tuple(details), steps=k)


def _reaches(edges: dict, seeds: set) -> set:
    """Keys that can reach a seed along the edge relation."""
    good = set(seeds)
    changed = True
    while changed:
        changed = False
        for key, succs in edges.items():
            if key not in good and any(sk in good for sk in succs):
                good.add(key)
                changed = True
    return good


def check_op_soundness(
    s: Process,
    scheme: EncodingScheme,
    *,
    step_budget: int = 64,
    eq_budget: EqBudget | None = None,
    state_cap: int = 10000,
    translate: Translate | None = None,
) -> Verdict:
    """Every reachable target state can keep reducing onto the encoding of
    some reachable source state.  Decided by marking matching target states
    and closing backwards; only fully explored graphs may be judged."""
    eq_budget = eq_budget or EqBudget()
    tr = _translator(scheme, translate)
    # Truncation always yields Inconclusive, so growing graphs only need to
    # be recognized, not mapped; a size cap makes that recognition cheap.
    src = explore(
        s,
        step_budget=step_budget,
        state_cap=state_cap,
        size_cap=2 * term_size(s) + 16,
    )
    if src.truncated:
        return verdicts.inconclusive(witness=s, states=len(src.states))
    enc_s = tr(s)
    tgt = explore(
        enc_s,
        step_budget=step_budget,
        state_cap=state_cap,
        size_cap=2 * term_size(enc_s) + 16,
    )
    if tgt.truncated:
        return verdicts.inconclusive(witness=s, states=len(tgt.states))
    images = [tr(term) for term in src.states.values()]
    marked = set()
    maybe = set()
    for key, term in tgt.states.items():
        fn_t = free_names(term)
        for image in images:
            if free_names(image) != fn_t:
                continue
            v = struct_eq_bounded(term, image, eq_budget)
            if v.is_holds:
                marked.add(key)
                break
            if v.is_inconclusive:
                maybe.add(key)
    covered = _reaches(tgt.edges, marked)
    bad = [k for k in tgt.states if k not in covered]
    if not bad:
        return verdicts.holds(states=len(tgt.states), sources=len(images))
    excusable = _reaches(tgt.edges, maybe)
    if any(k in excusable for k in bad):
        return verdicts.inconclusive(witness=s, states=len(tgt.states))
    return verdicts.violated(
        witness=(s, tgt.states[bad[0]]), states=len(tgt.states)
    )


def check_divergence_reflection(
    s: Process,
    scheme: EncodingScheme,
    *,
    budget: int = 16,
    state_cap: int = 10000,
    translate: Translate | None = None,
) -> Verdict:
    """A diverging translation demands a diverging source.  The source probe
    runs at twice the budget before the obligation is given up as unknown."""
    tr = _translator(scheme, translate)
    target = diverges_bounded(tr(s), budget=budget, state_cap=state_cap)
    if target.is_violated:
        return verdicts.holds(depth=budget)
    if target.is_inconclusive:
        return verdicts.inconclusive(witness=s, depth=budget)
    source = diverges_bounded(s, budget=2 * budget, state_cap=state_cap)
    if source.is_holds:
        return verdicts.holds(depth=budget)
    if source.is_violated:
        return verdicts.violated(witness=(s, target.witness), depth=budget)
    return verdicts.inconclusive(witness=s, depth=2 * budget)


def check_success_sensitiveness(
    s: Process,
    scheme: EncodingScheme,
    *,
    budget: int = 16,
    state_cap: int = 10000,
    translate: Translate | None = None,
) -> Verdict:
    """Source and translation agree on whether success is reachable; the
    target side gets the scheme's step-expansion factor more budget."""
    tr = _translator(scheme, translate)
    k = anchor_steps(scheme)
    source = may_succeed(s, step_budget=budget, state_cap=state_cap)
    target = may_succeed(tr(s), step_budget=k * budget, state_cap=state_cap)
    if source.is_inconclusive or target.is_inconclusive:
        return verdicts.inconclusive(witness=s, depth=budget)
    if source.outcome is target.outcome:
        return verdicts.holds(depth=budget)
    return verdicts.violated(
        witness=(s, source.outcome.name, target.outcome.name), depth=budget
    )


def _default_sigmas(cfg: GeneratorConfig) -> tuple[dict[Name, Name], ...]:
    alphabet = list(cfg.name_alphabet)
    taken = {n.key for n in alphabet}
    extra = next(user(c) for c in "wqrstuv" if c not in taken)
    sigmas = [
        {},
        dict(zip(alphabet, reversed(alphabet))),
        {n: alphabet[0] for n in alphabet},
        {alphabet[-1]: extra},
    ]
    return tuple(sigmas)


def _unguarded_success_by_decomposition(p: Process) -> bool:
    return any(has_success(c) for c in to_normal_form(p).components)


def check_lemma_suite(
    s: Process,
    scheme: EncodingScheme,
    *,
    sigmas: Iterable[dict[Name, Name]] = ({},),
    translate: Translate | None = None,
) -> Verdict:
    """Small definite properties of the translation on one term: free names
    preserved, image asynchronous, unguarded success agreed on (by the
    inductive reading and by congruence decomposition alike), substitution
    and renaming commute with translation."""
    tr = _translator(scheme, translate)
    enc = tr(s)
    failed = []
    if free_names(enc) != free_names(s):
        failed.append("free-names")
    if not is_async(enc):
        failed.append("async-image")
    if has_success(enc) != has_success(s):
        failed.append("success-agreement")
    if _unguarded_success_by_decomposition(s) != has_success(s):
        failed.append("success-decomposition-source")
    if _unguarded_success_by_decomposition(enc) != has_success(enc):
        failed.append("success-decomposition-target")
    pool = list(self_alphabet(s))
    taken = {n.key for n in pool}
    pool.append(next(user(c) for c in "wqrstuv" if c not in taken))
    for old in pool:
        for new in pool:
            if not alpha_eq(tr(substitute(s, old, new)), substitute(enc, old, new)):
                failed.append(f"substitution:{old}->{new}")
    for sigma in sigmas:
        if not alpha_eq(
            tr(apply_renaming(s, sigma)), apply_renaming(enc, policy_image(sigma))
        ):
            failed.append("renaming")
            break
    if failed:
        return verdicts.violated(witness=(s, tuple(failed)))
    return verdicts.holds()


def self_alphabet(s: Process) -> tuple[Name, ...]:
    """User-space names mentioned anywhere in the term, sorted."""
    return tuple(sorted((n for n in names(s) if not n.is_fresh), key=Name.sort_key))


def check_barb_confluence(s: Process) -> Verdict:
    """An unguarded success survives any single reduction step."""
    if not has_success(s):
        return verdicts.holds()
    for q, _ in reduct_candidates(s):
        if not has_success(q):
            return verdicts.violated(witness=(s, q))
    return verdicts.holds()


def check_inert_confluence(s: Process, *, eq_budget: EqBudget | None = None) -> Verdict:
    """The diamond for inert steps: after an inert step, any alternative step
    is still available, and the two orders reconverge in one step."""
    eq_budget = eq_budget or EqBudget()
    inerts = inert_reducts(s)
    if not inerts:
        return verdicts.holds()
    ordinary = reduct_candidates(s)
    any_inconclusive = False
    for qi, _ in inerts:
        q_steps = None
        for pp, _ in ordinary:
            same = struct_eq_bounded(pp, qi, eq_budget)
            if same.is_holds:
                continue
            closed = False
            diamond_unknown = False
            if q_steps is None:
                q_steps = reduct_candidates(qi)
            p_inerts = inert_reducts(pp)
            for qq, _ in q_steps:
                for pq, _ in p_inerts:
                    v = struct_eq_bounded(pq, qq, eq_budget)
                    if v.is_holds:
                        closed = True
                        break
                    if v.is_inconclusive:
                        diamond_unknown = True
                if closed:
                    break
            if closed:
                continue
            if diamond_unknown or same.is_inconclusive:
                any_inconclusive = True
                continue
            return verdicts.violated(witness=(s, qi, pp))
    if any_inconclusive:
        return verdicts.inconclusive(witness=s)
    return verdicts.holds()


def asyncify(p: Process) -> Process:
    """Nearest asynchronous term: output continuations run in parallel instead."""
    match p:
        case Nil() | Success():
            return p
        case Output(subject=x, obj=y, cont=c):
            rest = asyncify(c)
            send = Output(x, y, NIL)
            return send if rest == NIL else Par(send, rest)
        case Input(subject=x, binder=z, cont=c):
            return Input(x, z, asyncify(c))
        case Par(left=l, right=r):
            return Par(asyncify(l), asyncify(r))
        case Restrict(binder=b, body=body):
            return Restrict(b, asyncify(body))
        case Repl(body=body):
            return Repl(asyncify(body))
    raise TypeError(f"cannot asyncify {p!r}")


def _dispatch(
    criterion: Criterion,
    term: Process,
    scheme: EncodingScheme,
    budgets: SuiteBudgets,
    translate: Translate | None,
    cfg: GeneratorConfig,
) -> Verdict:
    match criterion:
        case Criterion.COMPOSITIONALITY:
            if translate is not None:
                raise ValueError("compositionality is defined for the built-in encoders")
            return check_compositionality(term, scheme)
        case Criterion.NAME_INVARIANCE:
            for sigma in _default_sigmas(cfg):
                v = check_name_invariance(term, sigma, scheme, translate)
                if not v.is_holds:
                    return v
            return verdicts.holds()
        case Criterion.OP_COMPLETENESS:
            return check_op_completeness(
                term,
                scheme,
                eq_budget=budgets.eq,
                translate=translate,
            )
        case Criterion.OP_SOUNDNESS:
            return check_op_soundness(
                term,
                scheme,
                step_budget=budgets.step_budget,
                eq_budget=budgets.eq,
                state_cap=min(budgets.state_cap, budgets.soundness_state_cap),
                translate=translate,
            )
        case Criterion.DIVERGENCE_REFLECTION:
            return check_divergence_reflection(
                term,
                scheme,
                budget=budgets.divergence_budget,
                state_cap=budgets.state_cap,
                translate=translate,
            )
        case Criterion.SUCCESS_SENSITIVENESS:
            return check_success_sensitiveness(
                term,
                scheme,
                budget=budgets.success_budget,
                state_cap=budgets.state_cap,
                translate=translate,
            )
        case Criterion.LEMMA_SUITE:
            return check_lemma_suite(
                term, scheme, sigmas=_default_sigmas(cfg), translate=translate
            )
        case Criterion.BARB_CONFLUENCE:
            return check_barb_confluence(asyncify(term))
        case Criterion.INERT_CONFLUENCE:
            return check_inert_confluence(asyncify(term), eq_budget=budgets.eq)
    raise AssertionError(criterion)


def run_suite(
    cfg: GeneratorConfig,
    schemes: Iterable[EncodingScheme] = tuple(EncodingScheme),
    budgets: SuiteBudgets | None = None,
    criteria: Iterable[Criterion] = DEFAULT_CRITERIA,
    translate: Translate | None = None,
    fail_fast: bool = False,
    on_verdict: Callable[[Criterion, EncodingScheme, Process, Verdict], None] | None = None,
    max_kept: int = 50,
) -> list[CriterionReport]:
    """Run criteria over the whole corpus for each scheme, in a fixed order.

    Reports count verdicts per criterion and keep witnesses for every
    Violated entry (and a capped sample of Inconclusive terms).
    """
    budgets = budgets or SuiteBudgets()
    terms = list(generate_terms(cfg))
    reports = []
    for scheme in schemes:
        for criterion in criteria:
            start = time.perf_counter()
            n_holds = n_violated = n_inconclusive = 0
            violations: list[tuple[Process, Verdict]] = []
            unknowns: list[Process] = []
            for term in terms:
                v = _dispatch(criterion, term, scheme, budgets, translate, cfg)
                if on_verdict is not None:
                    on_verdict(criterion, scheme, term, v)
                if v.is_holds:
                    n_holds += 1
                elif v.is_violated:
                    n_violated += 1
                    if len(violations) < max_kept:
                        violations.append((term, v))
                    if fail_fast:
                        break
                else:
                    n_inconclusive += 1
                    if len(unknowns) < max_kept:
                        unknowns.append(term)
            reports.append(
                CriterionReport(
                    criterion=criterion,
                    scheme=scheme,
                    holds=n_holds,
                    violated=n_violated,
                    inconclusive=n_inconclusive,
                    violations=tuple(violations),
                    inconclusives=tuple(unknowns),
                    elapsed=time.perf_counter() - start,
                )
            )
            if fail_fast and n_violated:
                return reports
    return reports


MUTATION_SCAN_ORDER = (
    Criterion.LEMMA_SUITE,
    Criterion.OP_COMPLETENESS,
    Criterion.SUCCESS_SENSITIVENESS,
    Criterion.DIVERGENCE_REFLECTION,
)


def first_violation(
    cfg: GeneratorConfig,
    scheme: EncodingScheme,
    criteria: Iterable[Criterion] = MUTATION_SCAN_ORDER,
    translate: Translate | None = None,
    budgets: SuiteBudgets | None = None,
) -> tuple[Process, Criterion, Verdict] | None:
    """Scan the corpus term by term, cheapest criteria first, and stop at
    the first Violated verdict.  Suited to confirming that a deliberately
    broken encoder is caught without paying for a full suite run."""
    budgets = budgets or SuiteBudgets()
    for term in generate_terms(cfg):
        for criterion in criteria:
            v = _dispatch(criterion, term, scheme, budgets, translate, cfg)
            if v.is_violated:
                return term, criterion, v
    return None
